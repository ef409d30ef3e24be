//! Tracing of lemniscates `sigma = {z : |T(z)| = 1}`.
//!
//! Each component is followed from a point of the fiber `T^{-1}(1)` with a
//! tangent predictor and a Newton corrector along the normal, stepping so
//! that `arg T` increases. The unwrapped `theta = arg T(z)` then
//! parametrizes the component: a component winding `k` times around the
//! unit circle under `T` is the image of `theta` in `[0, 2 pi k]`.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::{Complex, Complex64};

use super::polynomial::ComplexPolynomial;
use super::roots::{critical_points, preimages};
use super::support::{ArcParametrization, ArcShape, Smoothness};
use crate::error::{Error, Result};
use crate::gauss::integrate_adaptive;
use crate::scalar::Scalar;

/// Target sagitta of one tracing step.
pub const CHORD_TOLERANCE: f64 = 1e-8;
/// Traces whose points coincide within this distance are the same component.
pub const MERGE_TOLERANCE: f64 = 1e-6;
/// Reject if a critical point `z*` has `||T(z*)| - 1|` below this.
pub const CRITICAL_LEVEL_TOLERANCE: f64 = 1e-6;
/// Minimum `|T'|` accepted along a traced curve.
pub const MIN_DERIVATIVE: f64 = 1e-8;
/// Seeds are preimages of this many equally spaced points of the circle.
pub const SEED_COUNT: usize = 8;
pub const DEFAULT_SAMPLES: usize = 256;

const MAX_STEPS: usize = 5_000_000;

/// Checks degree and that no critical point lies on the level set.
pub fn check_lemniscate(poly: &ComplexPolynomial) -> Result<()> {
    if poly.degree() == 0 {
        return Err(Error::input("lemniscate polynomial must have degree >= 1"));
    }
    for z in critical_points(poly)? {
        let deviation = (poly.eval(z).norm() - 1.0).abs();
        if deviation < CRITICAL_LEVEL_TOLERANCE {
            return Err(Error::CriticalPointOnLevelSet { point: z, deviation });
        }
    }
    Ok(())
}

/// One closed component of a lemniscate.
#[derive(Debug)]
pub struct LemniscateComponent {
    poly: ComplexPolynomial,
    winding: usize,
    thetas: Vec<f64>,
    points: Vec<Complex64>,
    polyline_length: f64,
    min_derivative: f64,
}

impl LemniscateComponent {
    pub fn poly(&self) -> &ComplexPolynomial {
        &self.poly
    }

    /// Number of times `T` wraps this component around the unit circle.
    pub fn winding(&self) -> usize {
        self.winding
    }

    pub fn period(&self) -> f64 {
        TAU * self.winding as f64
    }

    /// Traced polyline (closed: last point equals the first).
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn polyline_length(&self) -> f64 {
        self.polyline_length
    }

    pub fn min_derivative(&self) -> f64 {
        self.min_derivative
    }

    /// Point with `arg T(z) = theta` (unwrapped), refined by Newton on
    /// `T(z) = e^{i theta}` from the nearest traced point.
    pub fn point_at(&self, theta: f64) -> Complex64 {
        self.eval::<f64>(theta).0
    }

    /// Point and `dz/dtheta = i e^{i theta} / T'(z)` in scalar type `T`.
    pub fn eval<T: Scalar>(&self, theta: T) -> (Complex<T>, Complex<T>) {
        let period = self.period();
        let th = theta.approx().rem_euclid(period);
        let idx = match self.thetas.binary_search_by(|p| p.total_cmp(&th)) {
            Ok(i) => i,
            Err(i) => {
                if i == 0 {
                    0
                } else if i >= self.thetas.len() {
                    self.thetas.len() - 1
                } else if th - self.thetas[i - 1] < self.thetas[i] - th {
                    i - 1
                } else {
                    i
                }
            }
        };
        let (s, c) = theta.sin_cos();
        let target = Complex::new(c, s);
        let mut z = T::cx(self.points[idx]);
        let mut deriv = Complex::new(T::one(), T::zero());
        let tol = T::epsilon() * T::of(8.0);
        for it in 0..40 {
            let (v, d) = self.poly.eval_generic(z);
            deriv = d;
            let step = (v - target) / d;
            z = z - step;
            if T::modulus(step) <= tol * (T::one() + T::modulus(z)) && it > 0 {
                deriv = self.poly.eval_generic(z).1;
                break;
            }
        }
        let i = Complex::new(T::zero(), T::one());
        (z, i * target / deriv)
    }

    /// Unwrapped `theta` in `[0, period)` of a point lying on this component.
    pub fn locate(&self, z: Complex64, tol: f64) -> Option<f64> {
        let base = self.poly.eval(z).arg().rem_euclid(TAU);
        (0..self.winding)
            .map(|k| base + TAU * k as f64)
            .find(|&theta| (self.point_at(theta) - z).norm() <= tol)
    }
}

/// Unit normal: direction of the gradient of `|T|`.
fn normal(poly: &ComplexPolynomial, z: Complex64) -> (Complex64, Complex64, Complex64) {
    let (v, d) = poly.eval_with_derivative(z);
    let g = d.conj() * v;
    (g / g.norm(), v, d)
}

/// Newton along the normal at `z` onto `|T| = 1`.
fn correct(poly: &ComplexPolynomial, z: Complex64) -> Option<Complex64> {
    let (n, _, _) = normal(poly, z);
    if !(n.re.is_finite() && n.im.is_finite()) {
        return None;
    }
    let mut r = 0.0;
    for _ in 0..30 {
        let p = z + n * r;
        let (v, d) = poly.eval_with_derivative(p);
        let f = v.norm() - 1.0;
        if f.abs() < 1e-15 {
            return Some(p);
        }
        // directional derivative of |T| along n
        let slope = (d.conj() * v / v.norm() * n.conj()).re;
        if !(slope > 0.0) {
            return None;
        }
        r -= f / slope;
    }
    let p = z + n * r;
    ((poly.eval(p).norm() - 1.0).abs() < 1e-13).then_some(p)
}

/// Nearest point of `|T| = 1` to `z` when `z` lies within `tol` of it.
pub fn project_to_lemniscate(poly: &ComplexPolynomial, z: Complex64, tol: f64) -> Option<Complex64> {
    let (v, d) = poly.eval_with_derivative(z);
    if !((v.norm() - 1.0).abs() <= tol * d.norm()) {
        return None;
    }
    correct(poly, z).filter(|p| (p - z).norm() <= 2.0 * tol + 1e-15)
}

/// Newton on `T(z) = w` from `z`.
fn solve_fiber(poly: &ComplexPolynomial, mut z: Complex64, w: Complex64) -> Complex64 {
    for _ in 0..40 {
        let (v, d) = poly.eval_with_derivative(z);
        let step = (v - w) / d;
        z -= step;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

fn trace_component(
    poly: &ComplexPolynomial,
    seed: Complex64,
    samples: usize,
) -> Result<LemniscateComponent> {
    let degree = poly.degree();
    let theta_cap = TAU / samples.max(8) as f64;
    let start = solve_fiber(poly, seed, Complex64::new(1.0, 0.0));
    let scale = 1.0 + start.norm();

    let mut thetas = vec![0.0];
    let mut points = vec![start];
    let mut min_derivative = f64::INFINITY;

    let mut z = start;
    let mut theta = 0.0;
    let (mut n_cur, mut v_cur, d0) = normal(poly, z);
    min_derivative = min_derivative.min(d0.norm());
    let mut h = (theta_cap / d0.norm()).min(1e-2 * scale);

    for _ in 0..MAX_STEPS {
        let tangent = Complex64::i() * n_cur;
        let (_, d_here) = poly.eval_with_derivative(z);
        h = h.min(theta_cap / d_here.norm());
        if h < 1e-14 * scale {
            return Err(Error::Tracing {
                last: z,
                reason: "step size underflow".into(),
            });
        }
        let Some(next) = correct(poly, z + tangent * h) else {
            h *= 0.5;
            continue;
        };
        let (n_next, v_next, d_next) = normal(poly, next);
        let turn = (n_next / n_cur).arg().abs();
        let step_len = (next - z).norm();
        if turn * step_len / 8.0 > CHORD_TOLERANCE {
            h *= 0.5;
            continue;
        }
        let dtheta = (v_next / v_cur).arg();
        if !(dtheta > 0.0) {
            // corrector landed on another branch
            h *= 0.5;
            continue;
        }
        let new_theta = theta + dtheta;
        min_derivative = min_derivative.min(d_next.norm());

        let crossed = (new_theta / TAU).floor();
        if crossed >= 1.0 && theta < crossed * TAU {
            let closing = solve_fiber(poly, next, Complex64::new(1.0, 0.0));
            if (closing - start).norm() < MERGE_TOLERANCE {
                thetas.push(crossed * TAU);
                points.push(start);
                let winding = crossed as usize;
                let polyline_length = points.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
                if min_derivative <= MIN_DERIVATIVE {
                    return Err(Error::Tracing {
                        last: start,
                        reason: format!("|T'| = {min_derivative:.3e} along the curve"),
                    });
                }
                return Ok(LemniscateComponent {
                    poly: poly.clone(),
                    winding,
                    thetas,
                    points,
                    polyline_length,
                    min_derivative,
                });
            }
            if crossed as usize >= degree {
                return Err(Error::FiberMismatch {
                    expected: degree,
                    found: crossed as usize + 1,
                });
            }
        }

        thetas.push(new_theta);
        points.push(next);
        theta = new_theta;
        z = next;
        n_cur = n_next;
        v_cur = v_next;
        let curvature = turn / step_len.max(f64::MIN_POSITIVE);
        let h_curv = if curvature > 0.0 {
            (8.0 * CHORD_TOLERANCE / curvature).sqrt()
        } else {
            2.0 * h
        };
        h = (2.0 * h).min(h_curv);
    }
    Err(Error::Tracing {
        last: z,
        reason: "component did not close".into(),
    })
}

/// Closed-curve parametrizations of every component of `|T| = 1`, each by
/// `theta = arg T(z)` over `[0, 2 pi k]`.
pub fn trace_lemniscate(
    poly: &ComplexPolynomial,
    samples_per_component: usize,
) -> Result<Vec<ArcParametrization>> {
    check_lemniscate(poly)?;
    let degree = poly.degree();
    let mut components: Vec<Arc<LemniscateComponent>> = Vec::new();

    let on_existing = |components: &[Arc<LemniscateComponent>], z: Complex64| {
        components
            .iter()
            .any(|c| c.locate(z, MERGE_TOLERANCE).is_some())
    };

    // largest real part first, so traces start at a predictable point
    for seed in preimages(poly, Complex64::new(1.0, 0.0))?.into_iter().rev() {
        if !on_existing(&components, seed) {
            components.push(Arc::new(trace_component(poly, seed, samples_per_component)?));
        }
    }
    let total: usize = components.iter().map(|c| c.winding).sum();
    if total != degree {
        return Err(Error::FiberMismatch {
            expected: degree,
            found: total,
        });
    }
    // every other seed fiber must land on a traced component
    for j in 1..SEED_COUNT {
        let w = Complex64::from_polar(1.0, TAU * j as f64 / SEED_COUNT as f64);
        for seed in preimages(poly, w)? {
            if !on_existing(&components, seed) {
                return Err(Error::FiberMismatch {
                    expected: degree,
                    found: total + 1,
                });
            }
        }
    }

    Ok(components
        .into_iter()
        .map(|comp| ArcParametrization {
            t_lo: 0.0,
            t_hi: comp.period(),
            shape: ArcShape::Lemniscate(comp),
            closed: true,
            smoothness: Smoothness::Analytic,
        })
        .collect())
}

/// Splits the lemniscate at the `N` preimages of `base` (a point of the unit
/// circle) into `N` arcs, each mapped one-to-one by `T` onto the circle minus
/// `base`.
pub fn partition_arcs(poly: &ComplexPolynomial, base: Complex64) -> Result<Vec<ArcParametrization>> {
    if (base.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!("base point {base} is not on the unit circle")));
    }
    let phase = base.arg().rem_euclid(TAU);
    let mut arcs = Vec::with_capacity(poly.degree());
    for arc in trace_lemniscate(poly, DEFAULT_SAMPLES)? {
        let ArcShape::Lemniscate(comp) = &arc.shape else {
            unreachable!("tracer yields lemniscate arcs")
        };
        for k in 0..comp.winding() {
            let lo = phase + TAU * k as f64;
            arcs.push(ArcParametrization {
                shape: arc.shape.clone(),
                t_lo: lo,
                t_hi: lo + TAU,
                closed: comp.winding() == 1,
                smoothness: Smoothness::Analytic,
            });
        }
    }
    Ok(arcs)
}

/// Total length of the traced lemniscate, `sum over components of
/// integral of dtheta / |T'(z(theta))|`.
pub fn lemniscate_length(arcs: &[ArcParametrization]) -> f64 {
    arcs.iter()
        .map(|a| integrate_adaptive(|t| a.speed(t), a.t_lo, a.t_hi, 1e-12))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn component(arc: &ArcParametrization) -> &LemniscateComponent {
        match &arc.shape {
            ArcShape::Lemniscate(comp) => comp,
            _ => panic!("not a lemniscate arc"),
        }
    }

    #[test]
    fn identity_gives_unit_circle() {
        let arcs = trace_lemniscate(&ComplexPolynomial::monomial(1), 64).unwrap();
        assert_eq!(arcs.len(), 1);
        let comp = component(&arcs[0]);
        assert_eq!(comp.winding(), 1);
        assert!(comp.points().iter().all(|z| (z.norm() - 1.0).abs() < 1e-13));
        assert!((comp.polyline_length() - TAU).abs() < 1e-6);
        assert!((arcs[0].length() - TAU).abs() < 1e-11);
    }

    #[test]
    fn square_covers_circle_once_as_a_set() {
        let arcs = trace_lemniscate(&ComplexPolynomial::monomial(2), 64).unwrap();
        assert_eq!(arcs.len(), 1);
        let comp = component(&arcs[0]);
        assert_eq!(comp.winding(), 2);
        assert!((arcs[0].length() - TAU).abs() < 1e-11);
        // theta = pi/2 lands on e^{i pi/4}
        assert!((comp.point_at(PI / 2.0) - Complex64::from_polar(1.0, PI / 4.0)).norm() < 1e-14);
    }

    #[test]
    fn critical_point_on_level_set_rejected() {
        let p = ComplexPolynomial::from_real(&[-1.0, 0.0, 1.0]).unwrap();
        match trace_lemniscate(&p, 64) {
            Err(Error::CriticalPointOnLevelSet { point, .. }) => assert!(point.norm() < 1e-12),
            other => panic!("expected critical point error, got {other:?}"),
        }
    }

    #[test]
    fn partition_of_square_splits_at_roots_of_base() {
        let arcs = partition_arcs(&ComplexPolynomial::monomial(2), c(0.0, -1.0)).unwrap();
        assert_eq!(arcs.len(), 2);
        let ends: Vec<Complex64> = arcs.iter().map(|a| a.point(a.t_lo)).collect();
        for target in [Complex64::from_polar(1.0, -PI / 4.0), Complex64::from_polar(1.0, 0.75 * PI)] {
            assert!(ends.iter().any(|e| (e - target).norm() < 1e-13), "missing cut {target}");
        }
    }

    #[test]
    fn partition_of_identity_is_whole_circle() {
        let arcs = partition_arcs(&ComplexPolynomial::monomial(1), c(1.0, 0.0)).unwrap();
        assert_eq!(arcs.len(), 1);
        assert!((arcs[0].point(arcs[0].t_lo) - c(1.0, 0.0)).norm() < 1e-14);
        assert!((arcs[0].length() - TAU).abs() < 1e-11);
    }

    #[test]
    fn locate_round_trip() {
        let p = ComplexPolynomial::from_real(&[-4.0, 0.0, 1.0]).unwrap();
        let arcs = trace_lemniscate(&p, 64).unwrap();
        for arc in &arcs {
            for t in [0.1, 1.7, 4.0] {
                let z = arc.point(t);
                assert!((p.eval(z).norm() - 1.0).abs() < 1e-14);
                let back = arc.locate(z, 1e-10).unwrap();
                assert!((back - t).abs() < 1e-10);
            }
        }
    }
}
