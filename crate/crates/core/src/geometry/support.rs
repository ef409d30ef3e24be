use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::{Complex, Complex64};

use super::polynomial::ComplexPolynomial;
use super::tracer::{self, LemniscateComponent};
use crate::error::{Error, Result};
use crate::gauss::integrate_adaptive;
use crate::scalar::Scalar;

/// Geometric support of a measure.
#[derive(Debug, Clone)]
pub enum SupportSpec {
    /// Real segment `[a, b]`.
    Interval { a: f64, b: f64 },
    Circle { center: Complex64, radius: f64 },
    /// Semi-axes `a >= b > 0`, rotated by `rotation` radians about `center`.
    Ellipse {
        a: f64,
        b: f64,
        center: Complex64,
        rotation: f64,
    },
    /// The level set `|T(z)| = 1`.
    Lemniscate(ComplexPolynomial),
    Arcs(Vec<ArcParametrization>),
}

impl SupportSpec {
    pub fn unit_circle() -> Self {
        SupportSpec::Circle {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            SupportSpec::Interval { .. } => "interval",
            SupportSpec::Circle { .. } => "circle",
            SupportSpec::Ellipse { .. } => "ellipse",
            SupportSpec::Lemniscate(_) => "lemniscate",
            SupportSpec::Arcs(_) => "arcs",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SupportSpec::Interval { a, b } => {
                if !(a.is_finite() && b.is_finite() && a < b) {
                    return Err(Error::input(format!("interval needs a < b, got [{a}, {b}]")));
                }
            }
            SupportSpec::Circle { center, radius } => {
                if !(radius.is_finite() && *radius > 0.0) || !finite(*center) {
                    return Err(Error::input(format!("circle radius must be positive, got {radius}")));
                }
            }
            SupportSpec::Ellipse {
                a,
                b,
                center,
                rotation,
            } => {
                if !(b.is_finite() && a.is_finite() && *b > 0.0 && a >= b)
                    || !finite(*center)
                    || !rotation.is_finite()
                {
                    return Err(Error::input(format!(
                        "ellipse needs semi-axes a >= b > 0, got a={a}, b={b}"
                    )));
                }
            }
            SupportSpec::Lemniscate(poly) => tracer::check_lemniscate(poly)?,
            SupportSpec::Arcs(arcs) => {
                if arcs.is_empty() {
                    return Err(Error::input("arc list is empty"));
                }
                for arc in arcs {
                    arc.validate()?;
                }
            }
        }
        Ok(())
    }

    /// Arcs whose union covers the support once.
    pub fn parametrize(&self) -> Result<Vec<ArcParametrization>> {
        self.validate()?;
        Ok(match self {
            &SupportSpec::Interval { a, b } => vec![ArcParametrization::segment(
                Complex64::new(a, 0.0),
                Complex64::new(b, 0.0),
                a,
                b,
            )],
            &SupportSpec::Circle { center, radius } => vec![ArcParametrization {
                shape: ArcShape::Circle { center, radius },
                t_lo: 0.0,
                t_hi: TAU,
                closed: true,
                smoothness: Smoothness::Analytic,
            }],
            &SupportSpec::Ellipse {
                a,
                b,
                center,
                rotation,
            } => vec![ArcParametrization {
                shape: ArcShape::Ellipse {
                    a,
                    b,
                    center,
                    rotation,
                },
                t_lo: 0.0,
                t_hi: TAU,
                closed: true,
                smoothness: Smoothness::Analytic,
            }],
            SupportSpec::Lemniscate(poly) => {
                tracer::trace_lemniscate(poly, tracer::DEFAULT_SAMPLES)?
            }
            SupportSpec::Arcs(arcs) => arcs.clone(),
        })
    }
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Smoothness class of a parametrized arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    Analytic,
    C2,
}

#[derive(Debug, Clone)]
pub enum ArcShape {
    /// Straight segment from `start` (at `t_lo`) to `end` (at `t_hi`).
    Segment { start: Complex64, end: Complex64 },
    /// `center + radius e^{it}`.
    Circle { center: Complex64, radius: f64 },
    /// `center + e^{i rotation} (a cos t + i b sin t)`.
    Ellipse {
        a: f64,
        b: f64,
        center: Complex64,
        rotation: f64,
    },
    /// Lemniscate component parametrized by `theta = arg T(z)`.
    Lemniscate(Arc<LemniscateComponent>),
}

/// A regular parametrization `t -> z(t)` of one arc, `t` in `[t_lo, t_hi]`.
#[derive(Debug, Clone)]
pub struct ArcParametrization {
    pub shape: ArcShape,
    pub t_lo: f64,
    pub t_hi: f64,
    /// `z(t_lo) == z(t_hi)` and the arc is a full closed curve.
    pub closed: bool,
    pub smoothness: Smoothness,
}

impl ArcParametrization {
    pub fn segment(start: Complex64, end: Complex64, t_lo: f64, t_hi: f64) -> Self {
        Self {
            shape: ArcShape::Segment { start, end },
            t_lo,
            t_hi,
            closed: false,
            smoothness: Smoothness::Analytic,
        }
    }

    pub fn circle_arc(center: Complex64, radius: f64, t_lo: f64, t_hi: f64) -> Self {
        Self {
            shape: ArcShape::Circle { center, radius },
            t_lo,
            t_hi,
            closed: (t_hi - t_lo - TAU).abs() < 1e-14,
            smoothness: Smoothness::Analytic,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.t_lo.is_finite() && self.t_hi.is_finite() && self.t_lo < self.t_hi) {
            return Err(Error::input(format!(
                "arc parameter range [{}, {}] is empty",
                self.t_lo, self.t_hi
            )));
        }
        match &self.shape {
            ArcShape::Segment { start, end } if start == end => {
                Err(Error::input("degenerate segment"))
            }
            ArcShape::Circle { radius, .. } if !(*radius > 0.0) => {
                Err(Error::input("circle arc radius must be positive"))
            }
            ArcShape::Ellipse { a, b, .. } if !(*b > 0.0 && a >= b) => {
                Err(Error::input("ellipse arc needs a >= b > 0"))
            }
            _ => Ok(()),
        }
    }

    /// Angle-parametrized arcs (circle, ellipse, lemniscate) use the periodic
    /// jump convention; segments use the one-sided convention on the line.
    pub fn is_angular(&self) -> bool {
        !matches!(self.shape, ArcShape::Segment { .. })
    }

    pub fn period(&self) -> Option<f64> {
        self.closed.then(|| self.t_hi - self.t_lo)
    }

    pub fn point(&self, t: f64) -> Complex64 {
        self.eval::<f64>(t).0
    }

    pub fn velocity(&self, t: f64) -> Complex64 {
        self.eval::<f64>(t).1
    }

    /// Arc-length element `|z'(t)|`.
    pub fn speed(&self, t: f64) -> f64 {
        self.velocity(t).norm()
    }

    /// Point and velocity at `t` in scalar type `T`.
    pub fn eval<T: Scalar>(&self, t: T) -> (Complex<T>, Complex<T>) {
        match &self.shape {
            ArcShape::Segment { start, end } => {
                let span = T::of(self.t_hi) - T::of(self.t_lo);
                let dir = (T::cx(*end) - T::cx(*start)).unscale(span);
                (T::cx(*start) + dir.scale(t - T::of(self.t_lo)), dir)
            }
            ArcShape::Circle { center, radius } => {
                let (s, c) = t.sin_cos();
                let r = T::of(*radius);
                let e = Complex::new(c, s);
                (T::cx(*center) + e.scale(r), Complex::new(-s * r, c * r))
            }
            ArcShape::Ellipse {
                a,
                b,
                center,
                rotation,
            } => {
                let (s, c) = t.sin_cos();
                let (a, b) = (T::of(*a), T::of(*b));
                let (rs, rc) = T::of(*rotation).sin_cos();
                let rot = Complex::new(rc, rs);
                let z = Complex::new(a * c, b * s);
                let dz = Complex::new(-a * s, b * c);
                (T::cx(*center) + rot * z, rot * dz)
            }
            ArcShape::Lemniscate(comp) => comp.eval(t),
        }
    }

    /// Arc length by adaptive Gauss–Legendre quadrature of the speed.
    pub fn length(&self) -> f64 {
        match &self.shape {
            ArcShape::Segment { start, end } => (end - start).norm(),
            ArcShape::Circle { radius, .. } => radius * (self.t_hi - self.t_lo),
            _ => integrate_adaptive(|t| self.speed(t), self.t_lo, self.t_hi, 1e-12),
        }
    }

    /// Parameter of `z` on this arc if it lies within `tol` of it.
    pub fn locate(&self, z: Complex64, tol: f64) -> Option<f64> {
        let in_range = |t: f64| {
            let slack = 1e-12 * (1.0 + self.t_hi.abs().max(self.t_lo.abs()));
            t >= self.t_lo - slack && t <= self.t_hi + slack
        };
        let candidates: Vec<f64> = match &self.shape {
            ArcShape::Segment { start, end } => {
                let d = end - start;
                let s = ((z - start) * d.conj()).re / d.norm_sqr();
                vec![self.t_lo + s * (self.t_hi - self.t_lo)]
            }
            ArcShape::Circle { center, .. } => angle_candidates((z - center).arg(), self),
            ArcShape::Ellipse {
                a,
                b,
                center,
                rotation,
            } => {
                let local = (z - center) * Complex64::from_polar(1.0, -rotation);
                angle_candidates((local.im / b).atan2(local.re / a), self)
            }
            ArcShape::Lemniscate(comp) => comp
                .locate(z, tol)
                .map(|theta| angle_candidates(theta, self))
                .unwrap_or_default(),
        };
        candidates
            .into_iter()
            .filter(|&t| in_range(t))
            .find(|&t| (self.point(t) - z).norm() <= tol)
            .map(|t| t.clamp(self.t_lo, self.t_hi))
    }
}

/// `angle + 2 pi k` values falling inside the arc's parameter range.
fn angle_candidates(angle: f64, arc: &ArcParametrization) -> Vec<f64> {
    let k_lo = ((arc.t_lo - angle) / TAU).floor() as i64 - 1;
    let k_hi = ((arc.t_hi - angle) / TAU).ceil() as i64 + 1;
    (k_lo..=k_hi)
        .map(|k| angle + TAU * k as f64)
        .filter(|t| *t >= arc.t_lo - 1e-12 && *t <= arc.t_hi + 1e-12)
        .collect()
}

/// Reduce an angle into `(-pi, pi]`.
pub fn wrap_angle(t: f64) -> f64 {
    let s = t.rem_euclid(TAU);
    if s > PI {
        s - TAU
    } else {
        s
    }
}
