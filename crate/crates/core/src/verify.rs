//! Verification suites: each runs one experiment and reports its checks.

use std::cell::RefCell;
use std::f64::consts::{FRAC_PI_2, LN_2, PI, TAU};
use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::asymptotics::{predicted_limit, routes_agree, run_sweep, schedule, SweepResult};
use crate::christoffel::{Basis, ComputeOptions, Method};
use crate::error::{Error, Result};
use crate::gauss::integrate_adaptive;
use crate::geometry::{partition_arcs, preimages, ComplexPolynomial, SupportSpec};
use crate::measure::{
    pullback_to_lemniscate, symmetrize_to_interval, EvalPoint, JumpWeight, MeasureSpec, WeightPiece,
};
use crate::potential::EquilibriumDensity;
use crate::quadrature::{build_rule, RuleOptions};
use crate::scalar::Precision;

pub const SWEEP_N_MIN: usize = 32;
pub const SWEEP_N_MAX: usize = 512;
pub const SWEEP_RATIO: f64 = 1.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    CircleExact,
    Methods,
    CircleJump,
    IntervalJump,
    LemniscateJump,
    EllipseJump,
    Properties,
    Continuity,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::CircleExact,
        Suite::Methods,
        Suite::CircleJump,
        Suite::IntervalJump,
        Suite::LemniscateJump,
        Suite::EllipseJump,
        Suite::Properties,
        Suite::Continuity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::CircleExact => "circle-exact",
            Suite::Methods => "methods",
            Suite::CircleJump => "circle-jump",
            Suite::IntervalJump => "interval-jump",
            Suite::LemniscateJump => "lemniscate-jump",
            Suite::EllipseJump => "ellipse-jump",
            Suite::Properties => "properties",
            Suite::Continuity => "continuity",
        }
    }

    /// Tolerance of the suite's main check; `--tol` replaces it.
    pub fn default_tolerance(self) -> f64 {
        match self {
            Suite::CircleExact => 1e-12,
            Suite::Methods => 1e-10,
            Suite::CircleJump | Suite::IntervalJump => 0.02,
            Suite::LemniscateJump => 0.03,
            Suite::EllipseJump => 0.05,
            Suite::Properties => 1e-9,
            Suite::Continuity => 0.05,
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| {
            let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
            Error::input(format!("unknown suite '{s}' ({})", names.join("|")))
        })
    }
}

/// One measured quantity; it passes when `measured <= threshold`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, measured: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            measured,
            threshold,
            passed: measured <= threshold,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedSweep {
    pub measure: String,
    pub result: SweepResult,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub tolerance: f64,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub sweeps: Vec<NamedSweep>,
    pub wall_time: f64,
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
        writeln!(f, "{} {} ({:.1} s)", verdict(self.passed), self.suite, self.wall_time)?;
        for c in &self.checks {
            writeln!(
                f,
                "  {} {}: {:.3e} <= {:.1e}  {}",
                verdict(c.passed),
                c.name,
                c.measured,
                c.threshold,
                c.detail
            )?;
        }
        Ok(())
    }
}

/// Runs `suite`; `tolerance` defaults to [`Suite::default_tolerance`].
pub fn run_suite(suite: Suite, tolerance: Option<f64>) -> Result<SuiteReport> {
    let tol = tolerance.unwrap_or(suite.default_tolerance());
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::input(format!("tolerance must be positive, got {tol}")));
    }
    let start = Instant::now();
    let mut sweeps = Vec::new();
    let checks = match suite {
        Suite::CircleExact => circle_exact(tol)?,
        Suite::Methods => methods(tol)?,
        Suite::CircleJump => jump_suite("circle", &circle_jump()?, TAU / LN_2, tol, &mut sweeps)?,
        Suite::IntervalJump => jump_suite("interval", &interval_jump()?, PI / LN_2, tol, &mut sweeps)?,
        Suite::LemniscateJump => lemniscate_suite(tol, &mut sweeps)?,
        Suite::EllipseJump => jump_suite("ellipse", &ellipse_jump()?, 1.5 * PI / LN_2, tol, &mut sweeps)?,
        Suite::Properties => properties(tol)?,
        Suite::Continuity => continuity(tol)?,
    };
    Ok(SuiteReport {
        suite: suite.name(),
        tolerance: tol,
        passed: checks.iter().all(|c| c.passed),
        checks,
        sweeps,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

fn rel(x: f64, target: f64) -> f64 {
    ((x - target) / target).abs()
}

pub fn circle_uniform() -> Result<MeasureSpec> {
    MeasureSpec::with_weight(
        SupportSpec::unit_circle(),
        WeightPiece::plain(),
        EvalPoint::Point(Complex64::new(1.0, 0.0)),
    )
}

/// `A` below `t = pi/2`, `B` above, on the unit circle, evaluated at `i`.
pub fn circle_jump_with(a: f64, b: f64) -> Result<MeasureSpec> {
    MeasureSpec::with_weight(
        SupportSpec::unit_circle(),
        WeightPiece::jump(JumpWeight::new(a, b, FRAC_PI_2)?),
        EvalPoint::AutoJump,
    )
}

pub fn circle_jump() -> Result<MeasureSpec> {
    circle_jump_with(2.0, 1.0)
}

/// The circle jump measure carried to `[-1, 1]`, evaluated at `0`.
pub fn interval_jump() -> Result<MeasureSpec> {
    symmetrize_to_interval(&circle_jump()?)
}

/// The circle jump measure pulled back by `T(z) = z^2`, evaluated at
/// `e^{i pi/4}`.
pub fn lemniscate_jump() -> Result<MeasureSpec> {
    pullback_to_lemniscate(&circle_jump()?, &ComplexPolynomial::monomial(2))
}

/// Ellipse with semi-axes `1.25, 0.75`, jump `A=2, B=1` at `t = 0`.
pub fn ellipse_jump() -> Result<MeasureSpec> {
    MeasureSpec::with_weight(
        SupportSpec::Ellipse {
            a: 1.25,
            b: 0.75,
            center: Complex64::new(0.0, 0.0),
            rotation: 0.0,
        },
        WeightPiece::jump(JumpWeight::new(2.0, 1.0, 0.0)?),
        EvalPoint::AutoJump,
    )
}

fn jump_measures() -> Result<Vec<(&'static str, MeasureSpec)>> {
    Ok(vec![
        ("circle", circle_jump()?),
        ("interval", interval_jump()?),
        ("lemniscate", lemniscate_jump()?),
        ("ellipse", ellipse_jump()?),
    ])
}

fn double() -> ComputeOptions {
    ComputeOptions {
        precision: Precision::Double,
        ..ComputeOptions::default()
    }
}

fn circle_exact(tol: f64) -> Result<Vec<Check>> {
    let n_max = 100;
    let basis = Basis::build(&circle_uniform()?, n_max, &double())?;
    let sums = basis.kernel_partial_sums(Complex64::new(1.0, 0.0))?;
    let (worst_n, worst) = (0..=n_max)
        .map(|n| (n, rel(1.0 / sums[n], TAU / (n + 1) as f64)))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    Ok(vec![Check::new(
        "max relative error of lambda_n against 2 pi/(n+1), n <= 100",
        worst,
        tol,
        format!("worst at n={worst_n}"),
    )])
}

fn methods(tol: f64) -> Result<Vec<Check>> {
    let n_max = 60;
    let mut measures = vec![("circle-uniform", circle_uniform()?)];
    measures.extend(jump_measures()?.into_iter().filter(|(name, _)| *name != "ellipse"));
    let mut checks = Vec::new();
    for (name, mu) in measures {
        let basis = Basis::build(&mu, n_max, &double())?;
        let z0 = mu.z0()?.z;
        let mut worst = (0, 0.0);
        for n in 0..=n_max {
            let k = basis.lambda(z0, n, Method::Kernel)?.lambda;
            let d = basis.lambda(z0, n, Method::Direct)?.lambda;
            let e = rel(d, k);
            if e > worst.1 {
                worst = (n, e);
            }
        }
        checks.push(Check::new(
            format!("{name}: kernel vs direct, n <= {n_max}"),
            worst.1,
            tol,
            format!("worst at n={}", worst.0),
        ));
    }
    Ok(checks)
}

fn sweep(measure: &MeasureSpec, n_min: usize, n_max: usize, opts: &ComputeOptions) -> Result<SweepResult> {
    let mut result = run_sweep(measure, &schedule(n_min, n_max, SWEEP_RATIO)?, Method::Kernel, opts)?;
    result.extrapolate()?;
    Ok(result)
}

fn limit_checks(name: &str, result: &SweepResult, closed_form: f64, tol: f64) -> Vec<Check> {
    let p = &result.predicted;
    let ex = result.extrapolation.as_ref().expect("sweep was extrapolated");
    let flag = if ex.flagged { " (fit rejected, raw last value)" } else { "" };
    vec![
        Check::new(
            format!("{name}: predicted limit vs closed form"),
            rel(p.value, closed_form),
            1e-12,
            format!("predicted {:.8}, closed form {:.8}", p.value, closed_form),
        ),
        Check::new(
            format!("{name}: density and normal-derivative routes"),
            rel(p.via_density, p.via_normal_derivative),
            1e-12,
            String::new(),
        ),
        Check::new(
            format!("{name}: extrapolated n lambda_n vs predicted"),
            rel(ex.limit, p.value),
            tol,
            format!("L = {:.8}{flag}; {}", ex.limit, ex.fit_model),
        ),
    ]
}

fn jump_suite(
    name: &str,
    measure: &MeasureSpec,
    closed_form: f64,
    tol: f64,
    sweeps: &mut Vec<NamedSweep>,
) -> Result<Vec<Check>> {
    let result = sweep(measure, SWEEP_N_MIN, SWEEP_N_MAX, &ComputeOptions::default())?;
    let mut checks = limit_checks(name, &result, closed_form, tol);
    if name == "circle" {
        let last = result.last_ok().ok_or(Error::InsufficientData { needed: 1, got: 0 })?;
        checks.push(Check::new(
            format!("circle: raw n lambda_n at n={}", last.n),
            rel(last.n_lambda_n, result.predicted.value),
            0.05,
            format!("n lambda_n = {:.8}", last.n_lambda_n),
        ));
    }
    sweeps.push(NamedSweep {
        measure: name.to_string(),
        result,
    });
    Ok(checks)
}

/// `lambda_n` for `v(z^2) |dz|` from the circle kernel sums `K_m(w)` of `v`:
/// splitting `P(z) = E(z^2) + z O(z^2)` gives
/// `1/lambda_n(z0) = K_{floor(n/2)}(z0^2) + K_{floor((n-1)/2)}(z0^2)`.
pub fn halving_lambda(circle_sums: &[f64], n: usize) -> f64 {
    let even = circle_sums[n / 2];
    let odd = if n == 0 { 0.0 } else { circle_sums[(n - 1) / 2] };
    1.0 / (even + odd)
}

fn lemniscate_suite(tol: f64, sweeps: &mut Vec<NamedSweep>) -> Result<Vec<Check>> {
    let mu = lemniscate_jump()?;
    let result = sweep(&mu, SWEEP_N_MIN, SWEEP_N_MAX, &ComputeOptions::default())?;
    let mut checks = limit_checks("lemniscate", &result, TAU / LN_2, tol);

    let circle = circle_jump()?;
    let basis = Basis::build(&circle, SWEEP_N_MAX / 2, &ComputeOptions::default())?;
    let sums = basis.kernel_partial_sums(circle.z0()?.z)?;
    let mut worst = (0, 0.0);
    for row in result.rows.iter().filter(|r| r.ok() && r.n >= 64) {
        let m = row.n / 2;
        let e = rel(row.n_lambda_n, m as f64 / sums[m]);
        if e > worst.1 {
            worst = (row.n, e);
        }
    }
    checks.push(Check::new(
        "lemniscate: n lambda_n(z^2) vs m lambda_m(circle), m = n/2, n >= 64",
        worst.1,
        0.05,
        format!("worst at n={}", worst.0),
    ));
    sweeps.push(NamedSweep {
        measure: "lemniscate".into(),
        result,
    });
    Ok(checks)
}

fn properties(tol: f64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let n_max = 128;
    for (name, mu) in jump_measures()? {
        let basis = Basis::build(&mu, n_max, &double())?;
        let z0 = mu.z0()?.z;
        let lambdas = (0..=n_max)
            .map(|n| basis.lambda(z0, n, Method::Direct).map(|v| v.lambda))
            .collect::<Result<Vec<_>>>()?;
        let increase = lambdas.windows(2).map(|w| w[1] / w[0] - 1.0).fold(f64::NEG_INFINITY, f64::max);
        checks.push(Check::new(
            format!("{name}: monotone lambda_n, n <= {n_max}"),
            increase,
            1e-12,
            "largest lambda_{n+1}/lambda_n - 1",
        ));

        let predicted = predicted_limit(&mu)?.value;
        let sched = schedule(8, n_max, SWEEP_RATIO)?;
        let sup = sched.iter().map(|&n| n as f64 * lambdas[n]).fold(0.0, f64::max);
        checks.push(Check::new(
            format!("{name}: sup n lambda_n / predicted limit, n in [8, {n_max}]"),
            sup / predicted,
            1.5,
            format!("sup {sup:.6}"),
        ));

        let n = 20;
        let mut worst: f64 = 0.0;
        for c in [1e-3, 0.37, 1e3] {
            let scaled = mu.scaled(c)?;
            let l = Basis::build(&scaled, n, &double())?.lambda(z0, n, Method::Kernel)?.lambda;
            worst = worst.max(rel(l, c * lambdas[n]));
            worst = worst.max(rel(predicted_limit(&scaled)?.value, c * predicted));
        }
        checks.push(Check::new(
            format!("{name}: lambda_n and predicted limit linear in the measure"),
            worst,
            1e-12,
            "c in {1e-3, 0.37, 1e3}",
        ));

        let p = predicted_limit(&mu)?;
        checks.push(Check::new(
            format!("{name}: predicted limit routes agree"),
            if routes_agree(&p, 1e-12) { 0.0 } else { rel(p.via_density, p.via_normal_derivative) },
            1e-12,
            String::new(),
        ));
    }

    for degree in [2, 3] {
        let poly = ComplexPolynomial::monomial(degree);
        let [e1, e2, e3] = lemniscate_identities(&poly)?;
        for (k, e) in [(1, e1), (2, e2), (3, e3)] {
            checks.push(Check::new(
                format!("z^{degree}: lemniscate integral identity {k}"),
                e,
                tol,
                "relative error",
            ));
        }
    }

    let supports = [
        SupportSpec::unit_circle(),
        SupportSpec::Circle {
            center: Complex64::new(0.5, -1.0),
            radius: 2.5,
        },
        SupportSpec::Interval { a: -1.0, b: 3.0 },
        SupportSpec::Ellipse {
            a: 1.25,
            b: 0.75,
            center: Complex64::new(0.0, 0.0),
            rotation: 0.0,
        },
        SupportSpec::Lemniscate(ComplexPolynomial::monomial(2)),
        SupportSpec::Lemniscate(ComplexPolynomial::monomial(3)),
        SupportSpec::Lemniscate(ComplexPolynomial::from_real(&[-4.0, 0.0, 1.0])?),
    ];
    for support in &supports {
        let mass = EquilibriumDensity::new(support)?.total_mass()?;
        checks.push(Check::new(
            format!("{}: equilibrium mass", describe(support)),
            (mass - 1.0).abs(),
            1e-8,
            format!("mass {mass:.12}"),
        ));
    }

    let mut nikolskii = jump_measures()?;
    nikolskii.push((
        "interval-plain",
        MeasureSpec::with_weight(
            SupportSpec::Interval { a: -1.0, b: 1.0 },
            WeightPiece::plain(),
            EvalPoint::Point(Complex64::new(0.0, 0.0)),
        )?,
    ));
    for (name, mu) in nikolskii {
        let (exponent, _) = nikolskii_exponent(&mu, 8, 128)?;
        checks.push(Check::new(
            format!("{name}: Nikolskii growth exponent, n in [8, 128]"),
            exponent,
            1.1,
            "slope of log sup sqrt(K_n) against log n",
        ));
    }
    Ok(checks)
}

fn describe(support: &SupportSpec) -> String {
    match support {
        SupportSpec::Circle { center, radius } => format!("circle(center {center}, r {radius})"),
        SupportSpec::Interval { a, b } => format!("interval[{a}, {b}]"),
        SupportSpec::Ellipse { a, b, .. } => format!("ellipse({a}, {b})"),
        SupportSpec::Lemniscate(p) => format!("lemniscate(coeffs {:?})", p.coeffs().iter().map(|c| c.re).collect::<Vec<_>>()),
        SupportSpec::Arcs(a) => format!("{} arcs", a.len()),
    }
}

fn identity_f(z: Complex64) -> f64 {
    z.re.exp() + (z - Complex64::new(0.0, 0.3)).norm_sqr()
}

fn identity_g(w: Complex64) -> f64 {
    w.re.exp() + w.im.powi(3) + 2.0 * w.im
}

/// Relative errors of the three change-of-variable identities for the
/// lemniscate `|T| = 1`: splitting into the arcs between preimages of `-i`,
/// summing over fibers, and pushing forward to the circle.
pub fn lemniscate_identities(poly: &ComplexPolynomial) -> Result<[f64; 3]> {
    let nf = poly.degree() as f64;
    let plain = MeasureSpec::with_weight(
        SupportSpec::Lemniscate(poly.clone()),
        WeightPiece::plain(),
        EvalPoint::Point(preimages(poly, Complex64::new(1.0, 0.0))?[0]),
    )?;
    let rule = build_rule::<f64>(&plain, &RuleOptions::new(64))?;
    let fiber_sum = |z: Complex64| -> Result<f64> {
        Ok(preimages(poly, poly.eval(z))?.into_iter().map(identity_f).sum())
    };

    let mut weighted = 0.0;
    let mut fibered = 0.0;
    let mut pushed = 0.0;
    for (&z, &w) in rule.nodes.iter().zip(&rule.weights) {
        let (t, dt) = poly.eval_with_derivative(z);
        let w = w * dt.norm();
        weighted += w * identity_f(z);
        fibered += w * fiber_sum(z)?;
        pushed += w * identity_g(t);
    }

    let mut worst_arc: f64 = 0.0;
    for arc in partition_arcs(poly, Complex64::new(0.0, -1.0))? {
        let failure = RefCell::new(None);
        let lhs = integrate_adaptive(
            |theta| {
                let (z, dz) = arc.eval(theta);
                let (_, dt) = poly.eval_with_derivative(z);
                match fiber_sum(z) {
                    Ok(s) => s * dt.norm() * dz.norm(),
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        f64::NAN
                    }
                }
            },
            arc.t_lo,
            arc.t_hi,
            1e-13,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        worst_arc = worst_arc.max(rel(lhs, weighted));
    }

    const M: usize = 1024;
    let circle: f64 = (0..M)
        .map(|k| identity_g(Complex64::from_polar(1.0, TAU * k as f64 / M as f64)))
        .sum::<f64>()
        * TAU
        / M as f64;
    Ok([worst_arc, rel(fibered, nf * weighted), rel(pushed, nf * circle)])
}

/// Least-squares slope of `log max_z sqrt(K_n(z))` against `log n` over the
/// geometric schedule in `[n_min, n_max]`, the maximum taken over 512
/// parameter samples per arc (endpoints included). Returns the slope and the
/// `(n, ratio)` pairs.
pub fn nikolskii_exponent(mu: &MeasureSpec, n_min: usize, n_max: usize) -> Result<(f64, Vec<(usize, f64)>)> {
    const SAMPLES: usize = 512;
    let basis = Basis::build(mu, n_max, &double())?;
    let mut sup = vec![0.0f64; n_max + 1];
    for arc in mu.arcs() {
        for k in 0..=SAMPLES {
            let t = arc.t_lo + (arc.t_hi - arc.t_lo) * k as f64 / SAMPLES as f64;
            let sums = basis.kernel_partial_sums(arc.point(t))?;
            for (s, v) in sup.iter_mut().zip(sums) {
                *s = s.max(v);
            }
        }
    }
    let pts: Vec<(usize, f64)> = schedule(n_min, n_max, SWEEP_RATIO)?
        .into_iter()
        .map(|n| (n, sup[n].sqrt()))
        .collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(sx, sy), &(n, r)| (sx + (n as f64).ln(), sy + r.ln()));
    let (mx, my) = (sx / m, sy / m);
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(sxy, sxx), &(n, r)| {
        let dx = (n as f64).ln() - mx;
        (sxy + dx * (r.ln() - my), sxx + dx * dx)
    });
    Ok((sxy / sxx, pts))
}

fn continuity(tol: f64) -> Result<Vec<Check>> {
    let mu = circle_jump_with(1.0 + 1e-6, 1.0)?;
    let predicted = predicted_limit(&mu)?.value;
    let n = 256;
    let l = Basis::build(&mu, n, &ComputeOptions::default())?.lambda(mu.z0()?.z, n, Method::Kernel)?.lambda;
    Ok(vec![
        Check::new(
            "A = 1 + 1e-6: predicted limit vs 2 pi",
            rel(predicted, TAU),
            1e-5,
            format!("predicted {predicted:.10}"),
        ),
        Check::new(
            format!("A = 1 + 1e-6: n lambda_n at n={n} vs 2 pi"),
            rel(n as f64 * l, TAU),
            tol,
            format!("n lambda_n = {:.8}", n as f64 * l),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn circle_exact_passes() {
        let r = run_suite(Suite::CircleExact, None).unwrap();
        assert!(r.passed, "{r}");
        assert!(r.to_string().starts_with("PASS circle-exact"));
    }

    #[test]
    fn impossible_tolerance_fails() {
        let r = run_suite(Suite::CircleExact, Some(1e-300)).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn halving_matches_uniform_circle() {
        // uniform circle: K_m = (m + 1)/(2 pi); z^2 pullback is uniform again
        let sums: Vec<f64> = (0..10).map(|m| (m + 1) as f64 / TAU).collect();
        for n in 0..18 {
            assert!((halving_lambda(&sums, n) - TAU / (n + 1) as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn identities_hold_for_a_two_component_lemniscate() {
        let poly = ComplexPolynomial::from_real(&[-4.0, 0.0, 1.0]).unwrap();
        let errs = lemniscate_identities(&poly).unwrap();
        assert!(errs.iter().all(|&e| e < 1e-9), "{errs:?}");
    }

    #[test]
    fn nikolskii_exponent_of_uniform_circle_is_one_half() {
        let (p, _) = nikolskii_exponent(&circle_uniform().unwrap(), 8, 64).unwrap();
        assert!((p - 0.5).abs() < 0.05, "{p}");
    }
}
