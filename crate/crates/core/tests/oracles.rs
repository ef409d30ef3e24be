use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI, TAU};

use approx::assert_relative_eq;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use xlab::asymptotics::{extrapolate, jump_factor, predicted_limit, run_sweep, schedule};
use xlab::christoffel::{lambda, Basis, ComputeOptions, Method};
use xlab::geometry::tracer::lemniscate_length;
use xlab::geometry::{partition_arcs, ComplexPolynomial, SupportSpec};
use xlab::measure::{
    pullback_to_lemniscate, symmetrize_to_interval, DensityProfile, EvalPoint, JumpWeight, MeasureSpec,
    WeightPiece,
};
use xlab::potential::EquilibriumDensity;
use xlab::quadrature::{build_rule, RuleOptions};
use xlab::scalar::Precision;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn double() -> ComputeOptions {
    ComputeOptions {
        precision: Precision::Double,
        ..ComputeOptions::default()
    }
}

fn circle_jump(a: f64, b: f64) -> MeasureSpec {
    MeasureSpec::with_weight(
        SupportSpec::unit_circle(),
        WeightPiece::jump(JumpWeight::new(a, b, FRAC_PI_2).unwrap()),
        EvalPoint::AutoJump,
    )
    .unwrap()
}

/// `1 / (phi^H G^{-1} phi)` with `phi_k = z^k` and the Gram matrix `G` of the
/// monomials.
fn gram_lambda(gram: &DMatrix<Complex64>, z: Complex64) -> f64 {
    let n = gram.nrows();
    let phi = DVector::from_fn(n, |k, _| z.powu(k as u32));
    let chol = gram.clone().cholesky().expect("Gram matrix is positive definite");
    let y = chol.solve(&phi);
    1.0 / phi.dotc(&y).re
}

#[test]
fn circle_jump_matches_gram_matrix() {
    let (a, b) = (2.0, 1.0);
    // integral of e^{i d t} v(t) dt, v = A on (-pi/2, pi/2), B on (pi/2, 3 pi/2)
    let moment = |d: i64| {
        if d == 0 {
            PI * (a + b)
        } else {
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            2.0 * (d as f64 * FRAC_PI_2).sin() / d as f64 * (a + sign * b)
        }
    };
    let mu = circle_jump(a, b);
    for n in [1, 4, 9, 12] {
        let gram = DMatrix::from_fn(n + 1, n + 1, |j, k| c(moment(j as i64 - k as i64), 0.0));
        for z in [c(0.0, 1.0), c(1.0, 0.0), Complex64::from_polar(1.0, 2.0), c(0.3, 0.2)] {
            let got = lambda(&mu, n, z, Method::Kernel, &double()).unwrap().lambda;
            assert_relative_eq!(got, gram_lambda(&gram, z), max_relative = 1e-10);
        }
    }
    // degree one at the jump in closed form
    let l1 = lambda(&mu, 1, c(0.0, 1.0), Method::Kernel, &double()).unwrap().lambda;
    assert_relative_eq!(l1, (9.0 * PI * PI - 4.0) / (6.0 * PI), max_relative = 1e-13);
}

#[test]
fn symmetrized_interval_matches_hankel_matrix() {
    let mu = symmetrize_to_interval(&circle_jump(2.0, 1.0)).unwrap();
    // weight 1 on x < 0 and 2 on x > 0 against dx / sqrt(1 - x^2)
    let mut half = vec![FRAC_PI_2, 1.0];
    for k in 2..40 {
        half.push(half[k - 2] * (k - 1) as f64 / k as f64);
    }
    let moment = |k: usize| if k % 2 == 0 { 3.0 * half[k] } else { half[k] };
    for n in [1, 3, 6, 10] {
        let gram = DMatrix::from_fn(n + 1, n + 1, |j, k| c(moment(j + k), 0.0));
        for x in [0.0, 0.5, -0.7] {
            let got = lambda(&mu, n, c(x, 0.0), Method::Kernel, &double()).unwrap().lambda;
            assert_relative_eq!(got, gram_lambda(&gram, c(x, 0.0)), max_relative = 1e-10);
        }
    }
    assert_relative_eq!(mu.mass().unwrap(), 1.5 * PI, max_relative = 1e-13);
}

#[test]
fn chebyshev_and_legendre_closed_forms() {
    let arcsine = MeasureSpec::with_weight(
        SupportSpec::Interval { a: -1.0, b: 1.0 },
        WeightPiece {
            profile: DensityProfile::Arcsine,
            ..WeightPiece::plain()
        },
        EvalPoint::Point(c(0.3, 0.0)),
    )
    .unwrap();
    let basis = Basis::build(&arcsine, 40, &double()).unwrap();
    let theta = 0.3f64.acos();
    let sums = basis.kernel_partial_sums(c(0.3, 0.0)).unwrap();
    let mut k = 1.0 / PI;
    for (n, s) in sums.iter().enumerate() {
        if n > 0 {
            k += 2.0 / PI * (n as f64 * theta).cos().powi(2);
        }
        assert_relative_eq!(*s, k, max_relative = 1e-12);
    }

    let legendre = MeasureSpec::with_weight(
        SupportSpec::Interval { a: -1.0, b: 1.0 },
        WeightPiece::plain(),
        EvalPoint::Point(c(1.0, 0.0)),
    )
    .unwrap();
    let basis = Basis::build(&legendre, 40, &double()).unwrap();
    let sums = basis.kernel_partial_sums(c(1.0, 0.0)).unwrap();
    for (n, s) in sums.iter().enumerate() {
        assert_relative_eq!(1.0 / s, 2.0 / ((n + 1) * (n + 1)) as f64, max_relative = 1e-11);
    }
}

#[test]
fn shifted_circle_exact_law() {
    let (center, r) = (c(0.5, -1.0), 2.5);
    let mu = MeasureSpec::with_weight(
        SupportSpec::Circle { center, radius: r },
        WeightPiece::plain(),
        EvalPoint::Point(center + r),
    )
    .unwrap();
    let basis = Basis::build(&mu, 60, &double()).unwrap();
    let z = center + Complex64::from_polar(r, 2.2);
    for (n, s) in basis.kernel_partial_sums(z).unwrap().iter().enumerate() {
        assert_relative_eq!(1.0 / s, TAU * r / (n + 1) as f64, max_relative = 1e-12);
    }
}

#[test]
fn uniform_circle_sweep_value_and_limit() {
    let mu = MeasureSpec::with_weight(SupportSpec::unit_circle(), WeightPiece::plain(), EvalPoint::Point(c(1.0, 0.0)))
        .unwrap();
    let sweep = run_sweep(&mu, &[9, 16, 32, 64, 128], Method::Kernel, &double()).unwrap();
    assert_relative_eq!(sweep.rows[0].n_lambda_n, 9.0 * TAU / 10.0, max_relative = 1e-13);
    assert_relative_eq!(sweep.predicted.value, TAU, max_relative = 1e-15);

    let rows: Vec<(usize, f64)> = schedule(8, 512, 1.25)
        .unwrap()
        .into_iter()
        .map(|n| (n, TAU * n as f64 / (n + 1) as f64))
        .collect();
    let ex = extrapolate(&rows).unwrap();
    assert!(!ex.flagged);
    assert_relative_eq!(ex.limit, TAU, max_relative = 1e-6);
}

#[test]
fn hessenberg_of_uniform_circle_is_the_shift() {
    let mu = MeasureSpec::with_weight(SupportSpec::unit_circle(), WeightPiece::plain(), EvalPoint::Point(c(1.0, 0.0)))
        .unwrap();
    let n = 12;
    let h = Basis::build(&mu, n, &double()).unwrap().hessenberg();
    assert_eq!(h.shape(), (n + 1, n));
    for i in 0..=n {
        for j in 0..n {
            let expected = if i == j + 1 { 1.0 } else { 0.0 };
            assert!((h[(i, j)] - c(expected, 0.0)).norm() < 1e-13, "h[{i},{j}] = {}", h[(i, j)]);
        }
    }
}

/// `v(z^2) |dz|` on the unit circle splits into even and odd parts, so
/// `1/lambda_n = K_{floor(n/2)} + K_{floor((n-1)/2)}` with `K_m` the circle
/// kernel of `v` at `z0^2`.
#[test]
fn z_squared_pullback_halves_the_degree() {
    let circle = circle_jump(2.0, 1.0);
    let lem = pullback_to_lemniscate(&circle, &ComplexPolynomial::monomial(2)).unwrap();
    let z0 = lem.z0().unwrap().z;
    assert!((z0 - Complex64::from_polar(1.0, FRAC_PI_4)).norm() < 1e-13);

    let n_max = 80;
    let circle_sums = Basis::build(&circle, n_max / 2, &double())
        .unwrap()
        .kernel_partial_sums(c(0.0, 1.0))
        .unwrap();
    let lem_sums = Basis::build(&lem, n_max, &double()).unwrap().kernel_partial_sums(z0).unwrap();
    for n in 1..=n_max {
        let oracle = circle_sums[n / 2] + circle_sums[(n - 1) / 2];
        assert_relative_eq!(lem_sums[n], oracle, max_relative = 1e-10);
    }
    assert_relative_eq!(lem.mass().unwrap(), 3.0 * PI, max_relative = 1e-12);
}

#[test]
fn lemniscate_geometry() {
    let two = SupportSpec::Lemniscate(ComplexPolynomial::from_real(&[-4.0, 0.0, 1.0]).unwrap());
    let arcs = two.parametrize().unwrap();
    assert_eq!(arcs.len(), 2);
    let eq = EquilibriumDensity::new(&two).unwrap();
    assert_relative_eq!(eq.total_mass().unwrap(), 1.0, max_relative = 1e-10);
    // the two components are mirror images, each carrying half the mass
    let right = arcs.iter().find(|a| a.point(a.t_lo).re > 0.0).unwrap();
    let left = arcs.iter().find(|a| a.point(a.t_lo).re < 0.0).unwrap();
    assert_relative_eq!(lemniscate_length(&[right.clone()]), lemniscate_length(&[left.clone()]), max_relative = 1e-10);

    let cube = ComplexPolynomial::monomial(3);
    let pieces = partition_arcs(&cube, c(0.0, -1.0)).unwrap();
    assert_eq!(pieces.len(), 3);
    for arc in &pieces {
        assert_relative_eq!(lemniscate_length(std::slice::from_ref(arc)), TAU / 3.0, max_relative = 1e-10);
    }
}

#[test]
fn symmetrization_transfers_integrals() {
    let circle = circle_jump(2.0, 1.0);
    let interval = symmetrize_to_interval(&circle).unwrap();
    let rc = build_rule::<f64>(&circle, &RuleOptions::new(8)).unwrap();
    let ri = build_rule::<f64>(&interval, &RuleOptions::new(8)).unwrap();
    for k in 0..4 {
        let on_circle = rc.integrate(|z| c(z.re.powi(k), 0.0)).unwrap().re;
        let on_interval = ri.integrate(|x| c(x.re.powi(k), 0.0)).unwrap().re;
        assert!((on_circle - 2.0 * on_interval).abs() < 1e-10, "k={k}: {on_circle} vs {on_interval}");
    }
}

#[test]
fn ellipse_density_matches_joukowski() {
    // (1.25 cos t, 0.75 sin t) = (w + 1/(4w)) at w = e^{it}, so
    // domega/ds = 1 / (2 pi |z'(t)|)
    let ellipse = SupportSpec::Ellipse {
        a: 1.25,
        b: 0.75,
        center: c(0.0, 0.0),
        rotation: 0.0,
    };
    let eq = EquilibriumDensity::new(&ellipse).unwrap();
    for t in [0.0, 0.4, FRAC_PI_2, 2.5, 4.0] {
        let z = c(1.25 * t.cos(), 0.75 * t.sin());
        let speed = (1.25f64.powi(2) * t.sin().powi(2) + 0.75f64.powi(2) * t.cos().powi(2)).sqrt();
        assert_relative_eq!(eq.at(z).unwrap(), 1.0 / (TAU * speed), max_relative = 1e-12);
    }
    assert_relative_eq!(eq.at(c(1.25, 0.0)).unwrap(), 2.0 / (3.0 * PI), max_relative = 1e-13);
}

#[test]
fn predicted_limits_in_closed_form() {
    assert_relative_eq!(jump_factor(2.0, 1.0).unwrap(), 1.0 / LN_2, max_relative = 1e-15);
    assert_relative_eq!(jump_factor(4.0, 1.0).unwrap(), 3.0 / 4f64.ln(), max_relative = 1e-15);

    let circle = circle_jump(2.0, 1.0);
    assert_relative_eq!(predicted_limit(&circle).unwrap().value, TAU / LN_2, max_relative = 1e-14);
    let interval = symmetrize_to_interval(&circle).unwrap();
    assert_relative_eq!(predicted_limit(&interval).unwrap().value, PI / LN_2, max_relative = 1e-14);
    let lem = pullback_to_lemniscate(&circle, &ComplexPolynomial::monomial(2)).unwrap();
    assert_relative_eq!(predicted_limit(&lem).unwrap().value, TAU / LN_2, max_relative = 1e-12);
    let ellipse = MeasureSpec::with_weight(
        SupportSpec::Ellipse {
            a: 1.25,
            b: 0.75,
            center: c(0.0, 0.0),
            rotation: 0.0,
        },
        WeightPiece::jump(JumpWeight::new(2.0, 1.0, 0.0).unwrap()),
        EvalPoint::AutoJump,
    )
    .unwrap();
    let p = predicted_limit(&ellipse).unwrap();
    assert_relative_eq!(p.value, 1.5 * PI / LN_2, max_relative = 1e-13);
    assert_relative_eq!(p.via_density, p.via_normal_derivative, max_relative = 1e-13);
}

#[test]
fn extrapolation_recovers_synthetic_limits() {
    let rows: Vec<(usize, f64)> = [10, 20, 40, 80].iter().map(|&n| (n, 1.0 + 1.0 / n as f64)).collect();
    assert_relative_eq!(extrapolate(&rows).unwrap().limit, 1.0, max_relative = 1e-9);
    let flat: Vec<(usize, f64)> = (1..8).map(|n| (n * 10, 3.5)).collect();
    assert_relative_eq!(extrapolate(&flat).unwrap().limit, 3.5, max_relative = 1e-14);
    assert!(extrapolate(&rows[..3]).is_err());
}
