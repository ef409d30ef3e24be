//! Sweeps of `n lambda_n(mu, z0)` against the predicted limit
//! `(domega/ds)^{-1} (A - B) / (log A - log B)`.

use std::io::Write;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::christoffel::{Basis, ComputeOptions, Method};
use crate::error::{Error, Result};
use crate::measure::{MeasureSpec, Side};
use crate::potential::{green_normal_derivative, EquilibriumDensity};

/// `(a - b) / (ln a - ln b)`, the logarithmic mean; `a` when the two agree to
/// `1e-12` relative.
pub fn jump_factor(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::domain(format!("jump values must be positive, got A={a}, B={b}")));
    }
    let d = a - b;
    if d.abs() < 1e-12 * a.max(b) {
        return Ok(a);
    }
    Ok(d / (d / b).ln_1p())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PredictedLimit {
    pub value: f64,
    /// `jump_factor / density`.
    pub via_density: f64,
    /// `2 pi jump_factor / (dg/dn)`.
    pub via_normal_derivative: f64,
    pub density: f64,
    pub normal_derivative: f64,
    pub left_weight: f64,
    pub right_weight: f64,
}

/// Limit of `n lambda_n(mu, z0)` at the evaluation point of `measure`, from
/// the one-sided weights there (equal when `z0` is not a jump).
pub fn predicted_limit(measure: &MeasureSpec) -> Result<PredictedLimit> {
    let z0 = measure.z0()?;
    let eq = EquilibriumDensity::new(measure.support())?;
    let left = measure.weight_on_arc(z0.arc, z0.t, Side::Left)?;
    let right = measure.weight_on_arc(z0.arc, z0.t, Side::Right)?;
    let factor = jump_factor(left, right)?;
    let density = eq.at(z0.z)?;
    let normal = eq.normal_derivative(z0.z)?;
    let via_density = factor / density;
    Ok(PredictedLimit {
        value: via_density,
        via_density,
        via_normal_derivative: std::f64::consts::TAU * factor / normal,
        density,
        normal_derivative: normal,
        left_weight: left,
        right_weight: right,
    })
}

/// Geometric schedule `n_min, n_min r, ...` rounded to integers, always
/// ending at `n_max`.
pub fn schedule(n_min: usize, n_max: usize, ratio: f64) -> Result<Vec<usize>> {
    if n_min == 0 || n_min > n_max {
        return Err(Error::input(format!("schedule needs 1 <= n_min <= n_max, got {n_min}..{n_max}")));
    }
    if !(ratio > 1.0 && ratio.is_finite()) {
        return Err(Error::input(format!("schedule ratio must exceed 1, got {ratio}")));
    }
    let mut out = vec![n_min];
    let mut x = n_min as f64;
    loop {
        x *= ratio;
        let n = x.round() as usize;
        if n >= n_max {
            break;
        }
        if n > *out.last().unwrap() {
            out.push(n);
        }
    }
    if *out.last().unwrap() != n_max {
        out.push(n_max);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub lambda_n: f64,
    pub n_lambda_n: f64,
    pub predicted_limit: f64,
    pub relative_error: f64,
    /// Seconds spent on this row after the shared basis was built.
    pub wall_time: f64,
    /// Why the row failed, if it did.
    pub failure: Option<String>,
}

impl SweepRow {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extrapolation {
    pub limit: f64,
    /// `[L, c1, c2]` in `L + c1/n + c2/n^2`.
    pub coefficients: [f64; 3],
    /// Largest absolute misfit over the rows used.
    pub residual: f64,
    /// `max - min` of the rows used.
    pub spread: f64,
    /// Set when the fit was rejected and `limit` is the last raw value.
    pub flagged: bool,
    pub rows_used: usize,
    pub fit_model: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub predicted: PredictedLimit,
    pub extrapolation: Option<Extrapolation>,
    pub method: &'static str,
    pub precision_bits: u32,
    /// Seconds spent building the rule and basis.
    pub basis_time: f64,
}

impl SweepResult {
    pub fn last_ok(&self) -> Option<&SweepRow> {
        self.rows.iter().rev().find(|r| r.ok())
    }
}

/// Computes `lambda_n` at the measure's evaluation point for every `n` in the
/// schedule from one basis of the largest degree.
pub fn run_sweep(measure: &MeasureSpec, n_schedule: &[usize], method: Method, opts: &ComputeOptions) -> Result<SweepResult> {
    if n_schedule.is_empty() || n_schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::input("schedule must be non-empty and strictly increasing"));
    }
    let predicted = predicted_limit(measure)?;
    let z0 = measure.z0()?.z;
    let n_max = *n_schedule.last().unwrap();

    let start = Instant::now();
    let basis = Basis::build_partial(measure, n_max, opts)?;
    let basis_time = start.elapsed().as_secs_f64();
    let sums = match method {
        Method::Kernel => Some(basis.kernel_partial_sums(z0)?),
        Method::Direct => None,
    };

    let rows = n_schedule
        .iter()
        .map(|&n| {
            let t = Instant::now();
            let lambda = if n > basis.degree() {
                Err(Error::Degeneracy {
                    requested: n,
                    achieved: basis.degree(),
                })
            } else {
                match &sums {
                    Some(s) => Ok(1.0 / s[n]),
                    None => basis.lambda(z0, n, method).map(|v| v.lambda),
                }
            };
            let (lambda_n, failure) = match lambda {
                Ok(l) => (l, None),
                Err(e) => (f64::NAN, Some(e.to_string())),
            };
            let n_lambda_n = n as f64 * lambda_n;
            SweepRow {
                n,
                lambda_n,
                n_lambda_n,
                predicted_limit: predicted.value,
                relative_error: (n_lambda_n - predicted.value) / predicted.value,
                wall_time: t.elapsed().as_secs_f64(),
                failure,
            }
        })
        .collect();

    Ok(SweepResult {
        rows,
        predicted,
        extrapolation: None,
        method: method.name(),
        precision_bits: basis.precision_bits(),
        basis_time,
    })
}

pub const FIT_ROWS: usize = 6;
pub const MIN_FIT_ROWS: usize = 4;
pub const FIT_MODEL: &str = "n*lambda_n = L + c1/n + c2/n^2";

/// Least-squares fit of `L + c1/n + c2/n^2` over the largest six successful
/// rows of `(n, n lambda_n)`.
pub fn extrapolate(rows: &[(usize, f64)]) -> Result<Extrapolation> {
    let mut used: Vec<(usize, f64)> = rows.iter().copied().filter(|(_, y)| y.is_finite()).collect();
    if used.len() < MIN_FIT_ROWS {
        return Err(Error::InsufficientData {
            needed: MIN_FIT_ROWS,
            got: used.len(),
        });
    }
    used.sort_by_key(|&(n, _)| n);
    let used = &used[used.len().saturating_sub(FIT_ROWS)..];
    // columns scaled by the smallest n to keep the system well conditioned
    let n0 = used[0].0.max(1) as f64;
    let a = DMatrix::from_fn(used.len(), 3, |i, j| (n0 / used[i].0 as f64).powi(j as i32));
    let y = DVector::from_iterator(used.len(), used.iter().map(|&(_, y)| y));
    let sol = a
        .clone()
        .svd(true, true)
        .solve(&y, 1e-14)
        .map_err(|e| Error::input(format!("extrapolation fit failed: {e}")))?;
    let coefficients = [sol[0], sol[1] * n0, sol[2] * n0 * n0];
    let residual = (&a * &sol - &y).amax();
    let (lo, hi) = used.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, y)| (lo.min(y), hi.max(y)));
    let spread = hi - lo;
    let flagged = residual > 0.1 * spread && residual > 1e-14 * hi.abs();
    let last = used.last().unwrap().1;
    Ok(Extrapolation {
        limit: if flagged { last } else { coefficients[0] },
        coefficients,
        residual,
        spread,
        flagged,
        rows_used: used.len(),
        fit_model: format!(
            "{FIT_MODEL}; L={:.10e}, c1={:.6e}, c2={:.6e}; max residual {:.3e}",
            coefficients[0], coefficients[1], coefficients[2], residual
        ),
    })
}

impl SweepResult {
    /// Fits the successful rows and stores the result.
    pub fn extrapolate(&mut self) -> Result<&Extrapolation> {
        let pts: Vec<(usize, f64)> = self.rows.iter().filter(|r| r.ok()).map(|r| (r.n, r.n_lambda_n)).collect();
        Ok(self.extrapolation.insert(extrapolate(&pts)?))
    }
}

pub const SWEEP_CSV_HEADER: &str = "n,lambda_n,n_lambda_n,predicted_limit,relative_error";

pub fn write_sweep_csv(out: &mut impl Write, result: &SweepResult) -> Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for r in &result.rows {
        writeln!(out, "{},{},{},{},{}", r.n, r.lambda_n, r.n_lambda_n, r.predicted_limit, r.relative_error)?;
    }
    Ok(())
}

/// Whitespace-separated mirror of the CSV for gnuplot.
pub fn write_sweep_dat(out: &mut impl Write, result: &SweepResult) -> Result<()> {
    writeln!(out, "# {}", SWEEP_CSV_HEADER.replace(',', " "))?;
    for r in &result.rows {
        writeln!(out, "{} {} {} {} {}", r.n, r.lambda_n, r.n_lambda_n, r.predicted_limit, r.relative_error)?;
    }
    Ok(())
}

/// Both forms of the predicted limit must agree; `dg/dn = 2 pi domega/ds`.
pub fn routes_agree(p: &PredictedLimit, tol: f64) -> bool {
    let bridge = green_normal_derivative(p.density);
    (p.via_density / p.via_normal_derivative - 1.0).abs() <= tol && (bridge / p.normal_derivative - 1.0).abs() <= tol
}
