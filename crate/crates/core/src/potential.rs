//! Equilibrium densities `domega/ds` and Green's function normal derivatives.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{project_to_lemniscate, ArcParametrization, ComplexPolynomial, SupportSpec};
use crate::measure::{EvalPoint, MeasureSpec, WeightPiece};
use crate::quadrature::{build_rule, RuleOptions};

/// Points within this distance of the support are projected onto it.
pub const OFF_CURVE_TOLERANCE: f64 = 1e-8;

/// How a density is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedFormCircle,
    ClosedFormInterval,
    Lemniscate,
    ExteriorMap,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::ClosedFormCircle => "closed-form-circle",
            Provenance::ClosedFormInterval => "closed-form-interval",
            Provenance::Lemniscate => "lemniscate",
            Provenance::ExteriorMap => "exterior-map",
        }
    }
}

/// Exterior conformal maps with closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExteriorMapSpec {
    /// `Phi(z) = (z - center) / radius`.
    Circle { center: Complex64, radius: f64 },
    /// Inverse of `z = center + e^{i rotation} ((a + b) w + (a - b) / w) / 2`.
    Ellipse {
        a: f64,
        b: f64,
        center: Complex64,
        rotation: f64,
    },
}

impl ExteriorMapSpec {
    /// `Phi(z)` and `|Phi'(z)|`.
    pub fn eval(&self, z: Complex64) -> Result<(Complex64, f64)> {
        match *self {
            ExteriorMapSpec::Circle { center, radius } => Ok(((z - center) / radius, 1.0 / radius)),
            ExteriorMapSpec::Ellipse {
                a,
                b,
                center,
                rotation,
            } => {
                let rot = Complex64::from_polar(1.0, rotation);
                let zeta = (z - center) / rot;
                // (a + b) w^2 - 2 zeta w + (a - b) = 0, exterior root
                let disc = (zeta * zeta - (a * a - b * b)).sqrt();
                let (w1, w2) = ((zeta + disc) / (a + b), (zeta - disc) / (a + b));
                let w = if w1.norm() >= w2.norm() { w1 } else { w2 };
                let dzdw = 0.5 * ((a + b) - (a - b) / (w * w));
                if dzdw.norm() == 0.0 {
                    return Err(Error::domain(format!("exterior map is not invertible at {z}")));
                }
                Ok((w, 1.0 / dzdw.norm()))
            }
        }
    }

    /// `|Phi'(z)| / (2 pi)` for `z` on the curve.
    pub fn density(&self, z: Complex64) -> Result<f64> {
        let (w, dphi) = self.eval(z)?;
        // |w| - 1 is, to first order, the distance to the curve times |Phi'|
        if !((w.norm() - 1.0).abs() <= OFF_CURVE_TOLERANCE * dphi) {
            return Err(Error::domain(format!("point {z} is not on the curve")));
        }
        Ok(dphi / TAU)
    }
}

/// `domega/ds` on a supported geometry.
#[derive(Debug, Clone)]
pub struct EquilibriumDensity {
    support: SupportSpec,
    provenance: Provenance,
}

impl EquilibriumDensity {
    pub fn new(support: &SupportSpec) -> Result<Self> {
        support.validate()?;
        let provenance = match support {
            SupportSpec::Circle { .. } => Provenance::ClosedFormCircle,
            SupportSpec::Interval { .. } => Provenance::ClosedFormInterval,
            SupportSpec::Lemniscate(_) => Provenance::Lemniscate,
            SupportSpec::Ellipse { .. } => Provenance::ExteriorMap,
            SupportSpec::Arcs(_) => {
                return Err(Error::Capability(
                    "equilibrium density of a general arc list is not available".into(),
                ))
            }
        };
        Ok(Self {
            support: support.clone(),
            provenance,
        })
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn support(&self) -> &SupportSpec {
        &self.support
    }

    /// Density at a point of the support (within [`OFF_CURVE_TOLERANCE`]).
    pub fn at(&self, z: Complex64) -> Result<f64> {
        match &self.support {
            &SupportSpec::Circle { center, radius } => {
                on_circle(center, radius, z)?;
                Ok(1.0 / (TAU * radius))
            }
            &SupportSpec::Interval { a, b } => {
                if z.im.abs() > OFF_CURVE_TOLERANCE {
                    return Err(Error::domain(format!("point {z} is not on [{a}, {b}]")));
                }
                density_interval(a, b, z.re)
            }
            SupportSpec::Lemniscate(poly) => density_lemniscate(poly, z),
            &SupportSpec::Ellipse {
                a,
                b,
                center,
                rotation,
            } => density_exterior_map(
                &ExteriorMapSpec::Ellipse {
                    a,
                    b,
                    center,
                    rotation,
                },
                z,
            ),
            SupportSpec::Arcs(_) => unreachable!("rejected in new"),
        }
    }

    /// Inner normal derivative of the Green's function with pole at
    /// infinity, from the geometry rather than from [`at`](Self::at). On an
    /// interval both sides are added.
    pub fn normal_derivative(&self, z: Complex64) -> Result<f64> {
        match &self.support {
            &SupportSpec::Circle { center, radius } => {
                on_circle(center, radius, z)?;
                Ok(1.0 / radius)
            }
            &SupportSpec::Interval { a, b } => {
                let s = (2.0 * z.re - a - b) / (b - a);
                if !(s.abs() < 1.0) || z.im.abs() > OFF_CURVE_TOLERANCE {
                    return Err(Error::domain(format!("point {z} is not inside [{a}, {b}]")));
                }
                // |Phi'| on either side of the slit, Phi(s) = s + sqrt(s^2 - 1)
                let one_side = 2.0 / (b - a) / (1.0 - s * s).sqrt();
                Ok(2.0 * one_side)
            }
            SupportSpec::Lemniscate(poly) => {
                let p = lemniscate_point(poly, z)?;
                let (_, d) = poly.eval_with_derivative(p);
                Ok(d.norm() / poly.degree() as f64)
            }
            &SupportSpec::Ellipse {
                a,
                b,
                center,
                rotation,
            } => {
                let map = ExteriorMapSpec::Ellipse {
                    a,
                    b,
                    center,
                    rotation,
                };
                // g = log |Phi|, so dg/dn = |Phi'| on the curve
                let (w, dphi) = map.eval(z)?;
                if !((w.norm() - 1.0).abs() <= OFF_CURVE_TOLERANCE * dphi) {
                    return Err(Error::domain(format!("point {z} is not on the ellipse")));
                }
                Ok(dphi)
            }
            SupportSpec::Arcs(_) => unreachable!("rejected in new"),
        }
    }

    /// `integral domega` over the support, by quadrature against arc length.
    pub fn total_mass(&self) -> Result<f64> {
        let plain = MeasureSpec::with_weight(
            self.support.clone(),
            WeightPiece::plain(),
            EvalPoint::Point(self.any_point()?),
        )?;
        let rule = build_rule::<f64>(&plain, &RuleOptions::new(16))?;
        let mut total = 0.0;
        for (&z, &w) in rule.nodes.iter().zip(&rule.weights) {
            total += w * self.at(z)?;
        }
        Ok(total)
    }

    fn any_point(&self) -> Result<Complex64> {
        let arcs = self.support.parametrize()?;
        let a = &arcs[0];
        Ok(a.point(0.5 * (a.t_lo + a.t_hi)))
    }

    /// `samples` points per arc with parameter, density and normal derivative.
    pub fn sample(&self, samples: usize) -> Result<Vec<EquilibriumSample>> {
        if samples == 0 {
            return Err(Error::input("need at least one sample"));
        }
        let arcs = self.support.parametrize()?;
        let mut out = Vec::with_capacity(samples * arcs.len());
        for arc in &arcs {
            for t in sample_params(arc, samples) {
                let z = arc.point(t);
                out.push(EquilibriumSample {
                    t,
                    z,
                    density: self.at(z)?,
                    normal_derivative: self.normal_derivative(z)?,
                });
            }
        }
        Ok(out)
    }
}

fn sample_params(arc: &ArcParametrization, samples: usize) -> Vec<f64> {
    let span = arc.t_hi - arc.t_lo;
    (0..samples)
        .map(|k| {
            // closed curves: left endpoints; segments: midpoints, avoiding endpoints
            let offset = if arc.closed { 0.0 } else { 0.5 };
            arc.t_lo + span * (k as f64 + offset) / samples as f64
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumSample {
    pub t: f64,
    pub z: Complex64,
    pub density: f64,
    pub normal_derivative: f64,
}

pub const EQUILIBRIUM_CSV_HEADER: &str = "t_param,re(z),im(z),density,normal_derivative";

pub fn write_equilibrium_csv(out: &mut impl Write, samples: &[EquilibriumSample]) -> Result<()> {
    writeln!(out, "{EQUILIBRIUM_CSV_HEADER}")?;
    for s in samples {
        writeln!(out, "{},{},{},{},{}", s.t, s.z.re, s.z.im, s.density, s.normal_derivative)?;
    }
    Ok(())
}

fn on_circle(center: Complex64, radius: f64, z: Complex64) -> Result<()> {
    if ((z - center).norm() - radius).abs() > OFF_CURVE_TOLERANCE {
        return Err(Error::domain(format!("point {z} is not on the circle")));
    }
    Ok(())
}

fn lemniscate_point(poly: &ComplexPolynomial, z: Complex64) -> Result<Complex64> {
    project_to_lemniscate(poly, z, OFF_CURVE_TOLERANCE)
        .ok_or_else(|| Error::domain(format!("point {z} is not on the lemniscate")))
}

/// Uniform density `1 / (2 pi r)`.
pub fn density_circle(radius: f64) -> Result<EquilibriumDensity> {
    EquilibriumDensity::new(&SupportSpec::Circle {
        center: Complex64::new(0.0, 0.0),
        radius,
    })
}

/// Arcsine density of `[a, b]` at `x`, per unit length.
pub fn density_interval(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a < b) {
        return Err(Error::input(format!("interval needs a < b, got [{a}, {b}]")));
    }
    let s = (2.0 * x - a - b) / (b - a);
    if !(s.abs() < 1.0) {
        return Err(Error::domain(format!("x = {x} is not inside ({a}, {b})")));
    }
    Ok(2.0 / (PI * (b - a) * (1.0 - s * s).sqrt()))
}

/// `|T'(z)| / (2 pi N)` on `|T| = 1`.
pub fn density_lemniscate(poly: &ComplexPolynomial, z: Complex64) -> Result<f64> {
    if poly.degree() == 0 {
        return Err(Error::input("lemniscate polynomial must have degree >= 1"));
    }
    let p = lemniscate_point(poly, z)?;
    let (_, d) = poly.eval_with_derivative(p);
    Ok(d.norm() / (TAU * poly.degree() as f64))
}

/// `|Phi'(z)| / (2 pi)` for a closed-form exterior map.
pub fn density_exterior_map(map: &ExteriorMapSpec, z: Complex64) -> Result<f64> {
    map.density(z)
}

/// `dg/dn = 2 pi domega/ds`.
pub fn green_normal_derivative(density: f64) -> f64 {
    TAU * density
}
