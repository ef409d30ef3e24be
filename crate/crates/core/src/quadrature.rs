//! Jump-aware composite Gauss–Legendre rules realizing `integral f dmu`.
//!
//! Every arc is cut at the jumps of the weight and at the evaluation point,
//! panels are graded geometrically toward those points, and the remaining
//! panels are narrow enough to integrate products of polynomials of degree
//! `max_degree` essentially exactly. Segments are integrated in the angle
//! `u` with `t = mid - half cos u`, which absorbs arcsine endpoint factors.

use std::f64::consts::PI;

use num_complex::{Complex, Complex64};

use crate::error::{Error, Result};
use crate::gauss::{gauss_legendre, PANEL_ORDER};
use crate::geometry::{ArcParametrization, ArcShape};
use crate::measure::{DensityProfile, MeasureSpec, Side, WeightKind};
use crate::scalar::Scalar;

/// Half panel width times the highest frequency on the panel. The 24-point
/// rule is exact to double-double roundoff for `e^{i w x}` on `[-1, 1]` when
/// `w <= 14`.
const PANEL_BANDWIDTH: f64 = 14.0;
/// Panels narrower than this cannot be resolved.
const MIN_PANEL: f64 = 1e-15;
const MERGE_BREAKPOINTS: f64 = 1e-14;
/// Lower bound for `nodes_per_degree`.
pub const MIN_NODES_PER_DEGREE: usize = 4;
pub const DEFAULT_NODES_PER_DEGREE: usize = 8;

/// Geometric refinement toward the evaluation point and the jumps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradingPolicy {
    /// Ratio of consecutive panel widths walking toward a focus point.
    pub ratio: f64,
    /// Smallest panel is `min(cap, c / max_degree^2)`.
    pub c: f64,
    pub cap: f64,
}

impl Default for GradingPolicy {
    fn default() -> Self {
        Self {
            ratio: 0.5,
            c: 4.0,
            cap: 1e-3,
        }
    }
}

impl GradingPolicy {
    pub fn min_width(&self, max_degree: usize) -> f64 {
        let n = max_degree.max(1) as f64;
        self.cap.min(self.c / (n * n))
    }
}

/// Nodes on the support with positive weights; `sum w_i f(z_i)` approximates
/// `integral f dmu`.
#[derive(Debug, Clone)]
pub struct QuadratureRule<T: Scalar> {
    pub nodes: Vec<Complex<T>>,
    pub weights: Vec<T>,
    pub max_exact_degree: usize,
    pub precision_bits: u32,
    pub panel_count: usize,
}

impl<T: Scalar> QuadratureRule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn mass(&self) -> T {
        self.weights.iter().fold(T::zero(), |acc, &w| acc + w)
    }

    /// `sum w_i f(z_i)`; fails on the first non-finite value.
    pub fn integrate(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Result<Complex<T>> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (index, (&z, &w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let v = f(z);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite { index });
            }
            acc = acc + v.scale(w);
        }
        Ok(acc)
    }

    /// Node coordinates rounded to `f64`.
    pub fn nodes_f64(&self) -> Vec<Complex64> {
        self.nodes.iter().map(|&z| T::cx_approx(z)).collect()
    }
}

/// `f64` convenience wrapper around [`QuadratureRule::integrate`].
pub fn integrate(rule: &QuadratureRule<f64>, f: impl Fn(Complex64) -> Complex64) -> Result<Complex64> {
    rule.integrate(f)
}

/// Options for [`build_rule`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuleOptions {
    pub max_degree: usize,
    pub nodes_per_degree: usize,
    pub grading: GradingPolicy,
}

impl RuleOptions {
    pub fn new(max_degree: usize) -> Self {
        Self {
            max_degree,
            nodes_per_degree: DEFAULT_NODES_PER_DEGREE,
            grading: GradingPolicy::default(),
        }
    }
}

/// Variable in which an arc is integrated.
#[derive(Debug, Clone, Copy)]
enum ArcMap {
    /// The arc parameter itself.
    Native,
    /// `t = mid - half cos u`, `u` in `[0, pi]`.
    Cosine { mid: f64, half: f64 },
}

impl ArcMap {
    fn of(arc: &ArcParametrization) -> Self {
        match arc.shape {
            ArcShape::Segment { .. } => ArcMap::Cosine {
                mid: 0.5 * (arc.t_lo + arc.t_hi),
                half: 0.5 * (arc.t_hi - arc.t_lo),
            },
            _ => ArcMap::Native,
        }
    }

    fn range(self, arc: &ArcParametrization) -> (f64, f64) {
        match self {
            ArcMap::Native => (arc.t_lo, arc.t_hi),
            ArcMap::Cosine { .. } => (0.0, PI),
        }
    }

    fn to_u(self, t: f64) -> f64 {
        match self {
            ArcMap::Native => t,
            ArcMap::Cosine { mid, half } => ((mid - t) / half).clamp(-1.0, 1.0).acos(),
        }
    }
}

/// Oscillation frequency in the integration variable per polynomial degree.
fn frequency_per_degree(arc: &ArcParametrization) -> f64 {
    match &arc.shape {
        ArcShape::Lemniscate(comp) => 1.5 / comp.poly().degree() as f64,
        _ => 1.0,
    }
}

/// Panel boundaries in the integration variable of one arc.
fn arc_panels(measure: &MeasureSpec, arc_index: usize, opts: &RuleOptions, base_scale: f64) -> Result<Vec<f64>> {
    let arc = &measure.arcs()[arc_index];
    let map = ArcMap::of(arc);
    let (lo, hi) = map.range(arc);
    let span = hi - lo;
    let omega = (2 * opts.max_degree + 4) as f64 * frequency_per_degree(arc);
    let h_base = (2.0 * PANEL_BANDWIDTH / omega).min(span / 4.0) * base_scale;
    let h_min = opts.grading.min_width(opts.max_degree).min(h_base);

    let mut foci: Vec<f64> = measure
        .jump_params(arc_index)?
        .into_iter()
        .map(|t| map.to_u(t))
        .collect();
    if let Ok(p) = measure.z0() {
        if p.arc == arc_index {
            foci.push(map.to_u(p.t));
        }
    }
    let tol = MERGE_BREAKPOINTS * (1.0 + lo.abs().max(hi.abs()));
    let is_focus = |x: f64| {
        foci.iter().any(|&f| {
            (f - x).abs() <= tol
                || (arc.closed && ((x - lo).abs() <= tol || (x - hi).abs() <= tol)
                    && ((f - lo).abs() <= tol || (f - hi).abs() <= tol))
        })
    };

    let mut breaks: Vec<f64> = vec![lo, hi];
    breaks.extend(foci.iter().copied().filter(|&f| f > lo + tol && f < hi - tol));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= tol);

    let ratio = opts.grading.ratio;
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::input(format!("grading ratio must lie in (0, 1), got {ratio}")));
    }
    let mut out = vec![breaks[0]];
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let half_gap = 0.5 * (b - a);
        let mut pts = Vec::new();
        for (end, dir) in [(a, 1.0), (b, -1.0)] {
            if !is_focus(end) {
                continue;
            }
            let mut width = h_min;
            let mut offset = h_min;
            while offset < half_gap && width < h_base {
                pts.push(end + dir * offset);
                width /= ratio;
                offset += width;
            }
        }
        pts.sort_by(f64::total_cmp);
        let mut kept: Vec<f64> = Vec::with_capacity(pts.len() + 1);
        for p in pts {
            let last = kept.last().copied().unwrap_or(a);
            if p - last >= 0.5 * h_min && b - p >= 0.5 * h_min {
                kept.push(p);
            }
        }
        kept.push(b);
        let mut prev = a;
        for p in kept {
            let gap = p - prev;
            let pieces = (gap / h_base).ceil().max(1.0) as usize;
            for k in 1..pieces {
                out.push(prev + gap * k as f64 / pieces as f64);
            }
            out.push(p);
            prev = p;
        }
    }
    for w in out.windows(2) {
        if !(w[1] - w[0] >= MIN_PANEL) {
            return Err(Error::Resolution { width: w[1] - w[0] });
        }
    }
    Ok(out)
}

/// Builds the rule in scalar type `T`.
pub fn build_rule<T: Scalar>(measure: &MeasureSpec, opts: &RuleOptions) -> Result<QuadratureRule<T>> {
    if opts.nodes_per_degree < MIN_NODES_PER_DEGREE {
        return Err(Error::input(format!(
            "nodes per degree must be at least {MIN_NODES_PER_DEGREE}, got {}",
            opts.nodes_per_degree
        )));
    }
    let required = opts.nodes_per_degree * opts.max_degree;
    let mut base_scale = 1.0;
    let breaks = loop {
        let breaks = (0..measure.arcs().len())
            .map(|i| arc_panels(measure, i, opts, base_scale))
            .collect::<Result<Vec<_>>>()?;
        let panels: usize = breaks.iter().map(|b| b.len() - 1).sum();
        if panels * PANEL_ORDER >= required {
            break breaks;
        }
        base_scale *= 0.5 * (panels * PANEL_ORDER) as f64 / required as f64;
    };

    let (gx, gw) = gauss_legendre::<T>(PANEL_ORDER);
    let mut rule = QuadratureRule {
        nodes: Vec::new(),
        weights: Vec::new(),
        max_exact_degree: opts.max_degree,
        precision_bits: T::BITS,
        panel_count: 0,
    };
    for (i, b) in breaks.iter().enumerate() {
        append_arc(measure, i, b, &gx, &gw, &mut rule)?;
    }
    Ok(rule)
}

fn append_arc<T: Scalar>(
    measure: &MeasureSpec,
    arc_index: usize,
    breaks: &[f64],
    gx: &[T],
    gw: &[T],
    rule: &mut QuadratureRule<T>,
) -> Result<()> {
    let arc = &measure.arcs()[arc_index];
    let map = ArcMap::of(arc);
    let piece = measure.piece_for(arc_index)?;
    let angular = arc.is_angular();
    let scale = measure.scale();
    let density = |t: f64| {
        let v = match piece.kind {
            WeightKind::Plain => 1.0,
            WeightKind::Jump(j) => j.value(t, Side::Left, angular),
        };
        let ts = if angular { t.rem_euclid(std::f64::consts::TAU) } else { t };
        scale * piece.smooth.eval(ts) * v
    };
    let half = T::of(0.5);
    for w in breaks.windows(2) {
        let (lo, hi) = (T::of(w[0]), T::of(w[1]));
        let mid = (lo + hi) * half;
        let hw = (hi - lo) * half;
        for (&x, &wx) in gx.iter().zip(gw) {
            let u = mid + hw * x;
            let (z, weight) = match map {
                ArcMap::Native => {
                    let (z, dz) = arc.eval(u);
                    (z, T::modulus(dz) * T::of(density(u.approx())))
                }
                ArcMap::Cosine { mid: tm, half: th } => {
                    let (s, c) = u.sin_cos();
                    let t = T::of(tm) - T::of(th) * c;
                    let (z, dz) = arc.eval(t);
                    let jac = match piece.profile {
                        DensityProfile::ArcLength => T::of(th) * s,
                        DensityProfile::Arcsine => T::of(th),
                    };
                    (z, T::modulus(dz) * jac * T::of(density(t.approx())))
                }
            };
            rule.nodes.push(z);
            rule.weights.push(wx * hw * weight);
        }
        rule.panel_count += 1;
    }
    Ok(())
}

/// Mass of the measure restricted to one arc.
pub fn arc_mass(measure: &MeasureSpec, arc_index: usize) -> Result<f64> {
    let opts = RuleOptions::new(8);
    let breaks = arc_panels(measure, arc_index, &opts, 1.0)?;
    let (gx, gw) = gauss_legendre::<f64>(PANEL_ORDER);
    let mut rule = QuadratureRule {
        nodes: Vec::new(),
        weights: Vec::new(),
        max_exact_degree: opts.max_degree,
        precision_bits: 53,
        panel_count: 0,
    };
    append_arc(measure, arc_index, &breaks, &gx, &gw, &mut rule)?;
    Ok(rule.mass())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SupportSpec;
    use crate::measure::{EvalPoint, JumpWeight, WeightPiece};
    use crate::scalar::DoubleDouble;
    use std::f64::consts::{FRAC_PI_2, TAU};

    fn uniform_circle() -> MeasureSpec {
        MeasureSpec::with_weight(
            SupportSpec::unit_circle(),
            WeightPiece::plain(),
            EvalPoint::Point(Complex64::new(1.0, 0.0)),
        )
        .unwrap()
    }

    fn jump_circle() -> MeasureSpec {
        MeasureSpec::with_weight(
            SupportSpec::unit_circle(),
            WeightPiece::jump(JumpWeight::new(2.0, 1.0, FRAC_PI_2).unwrap()),
            EvalPoint::AutoJump,
        )
        .unwrap()
    }

    #[test]
    fn circle_mass_and_moments() {
        let n = 40;
        let rule = build_rule::<f64>(&uniform_circle(), &RuleOptions::new(n)).unwrap();
        assert!((rule.mass() - TAU).abs() < 1e-13);
        for k in 1..=2 * n as i32 {
            let m = rule.integrate(|z| z.powi(k)).unwrap();
            assert!(m.norm() < 1e-12, "moment {k} = {m}");
        }
        let r2 = rule.integrate(|z| Complex64::new(z.norm_sqr(), 0.0)).unwrap();
        assert!((r2.re - TAU).abs() < 1e-13);
    }

    #[test]
    fn jump_circle_mass() {
        let rule = build_rule::<f64>(&jump_circle(), &RuleOptions::new(16)).unwrap();
        assert!((rule.mass() - 3.0 * PI).abs() < 1e-13);
        assert!(rule.weights.iter().all(|&w| w > 0.0));
        assert!(rule.len() >= 16 * DEFAULT_NODES_PER_DEGREE);
    }

    #[test]
    fn jump_circle_first_moment() {
        // integral of e^{it} v(t) dt = 2 * 2 - 1 * 2
        let rule = build_rule::<f64>(&jump_circle(), &RuleOptions::new(4)).unwrap();
        let m1 = rule.integrate(|z| z).unwrap();
        assert!((m1 - Complex64::new(2.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn extended_rule_is_sharper() {
        let rule = build_rule::<DoubleDouble>(&jump_circle(), &RuleOptions::new(16)).unwrap();
        let err = (rule.mass() - DoubleDouble::of(3.0) * DoubleDouble::of(PI)).abs().approx();
        // PI itself is only a double here
        assert!(err < 1e-14);
        assert_eq!(rule.precision_bits, 106);
    }

    #[test]
    fn rejects_too_few_nodes_per_degree() {
        let opts = RuleOptions {
            nodes_per_degree: 3,
            ..RuleOptions::new(10)
        };
        assert!(build_rule::<f64>(&uniform_circle(), &opts).is_err());
    }

    #[test]
    fn grading_reaches_min_width() {
        let mu = jump_circle();
        let opts = RuleOptions::new(100);
        let b = arc_panels(&mu, 0, &opts, 1.0).unwrap();
        let smallest = b.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        assert!((smallest - 4e-4).abs() < 1e-12);
        assert!(b.iter().any(|&t| (t - FRAC_PI_2).abs() < 1e-15));
        assert!(b.iter().any(|&t| (t - 1.5 * PI).abs() < 1e-15));
    }

    #[test]
    fn interval_plain_and_arcsine() {
        let plain = MeasureSpec::with_weight(
            SupportSpec::Interval { a: -1.0, b: 3.0 },
            WeightPiece::plain(),
            EvalPoint::Point(Complex64::new(0.0, 0.0)),
        )
        .unwrap();
        let rule = build_rule::<f64>(&plain, &RuleOptions::new(10)).unwrap();
        assert!((rule.mass() - 4.0).abs() < 1e-13);
        let x2 = rule.integrate(|z| z * z).unwrap().re;
        assert!((x2 - 28.0 / 3.0).abs() < 1e-12);

        let arcsine = MeasureSpec::with_weight(
            SupportSpec::Interval { a: -1.0, b: 1.0 },
            WeightPiece {
                profile: DensityProfile::Arcsine,
                ..WeightPiece::plain()
            },
            EvalPoint::Point(Complex64::new(0.0, 0.0)),
        )
        .unwrap();
        let rule = build_rule::<f64>(&arcsine, &RuleOptions::new(10)).unwrap();
        assert!((rule.mass() - PI).abs() < 1e-13);
        let x2 = rule.integrate(|z| z * z).unwrap().re;
        assert!((x2 - PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn non_finite_integrand_reports_node() {
        let rule = build_rule::<f64>(&uniform_circle(), &RuleOptions::new(2)).unwrap();
        let r = rule.integrate(|z| if z.im > 0.5 { Complex64::new(f64::NAN, 0.0) } else { z });
        assert!(matches!(r, Err(Error::NonFinite { .. })));
    }
}
