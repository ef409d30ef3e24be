//! Measures `dmu = c * w0(t) * v(t) * ds` on supports: a smooth factor `w0`,
//! a pure-jump factor `v` and an optional arcsine profile on intervals.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{
    preimages, wrap_angle, ArcParametrization, ArcShape, ComplexPolynomial, SupportSpec,
};

/// Points closer than this to the support count as lying on it.
pub const ON_SUPPORT_TOLERANCE: f64 = 1e-10;

/// Pure-jump factor with left value `a` and right value `b` at `jump_param`.
///
/// On angle-parametrized arcs the factor is `2 pi`-periodic: writing
/// `s = wrap(t - jump_param)` in `(-pi, pi]`, it equals `a` for `s < 0` and
/// `b` for `s > 0`, so there is a second jump (from `b` back to `a`) at
/// `s = pi`. On segments it is `a` for `t < jump_param` and `b` after.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpWeight {
    pub a: f64,
    pub b: f64,
    pub jump_param: f64,
}

impl JumpWeight {
    pub fn new(a: f64, b: f64, jump_param: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::domain(format!("jump values must be positive, got A={a}, B={b}")));
        }
        if !jump_param.is_finite() {
            return Err(Error::input("jump parameter must be finite"));
        }
        Ok(Self { a, b, jump_param })
    }

    /// Value at `t` with the one-sided limit selected by `side` at jumps.
    pub fn value(&self, t: f64, side: Side, angular: bool) -> f64 {
        if angular {
            let s = wrap_angle(t - self.jump_param);
            let at_jump = |x: f64| x.abs() <= 1e-14 * (1.0 + t.abs());
            if at_jump(s) {
                return self.side_value(side);
            }
            if at_jump(s - PI) {
                return self.side_value(side.flipped());
            }
            if s < 0.0 {
                self.a
            } else {
                self.b
            }
        } else if t == self.jump_param {
            self.side_value(side)
        } else if t < self.jump_param {
            self.a
        } else {
            self.b
        }
    }

    fn side_value(&self, side: Side) -> f64 {
        match side {
            Side::Left => self.a,
            Side::Right => self.b,
        }
    }
}

/// Which one-sided limit to take at a jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Smooth factor `w0` as a function of the arc parameter. On angular arcs
/// the parameter is reduced into `[0, 2 pi)` first.
#[derive(Debug, Clone, PartialEq)]
pub enum SmoothFactor {
    Constant(f64),
    /// Real coefficients in ascending degree.
    Polynomial(Vec<f64>),
}

impl Default for SmoothFactor {
    fn default() -> Self {
        SmoothFactor::Constant(1.0)
    }
}

impl SmoothFactor {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            SmoothFactor::Constant(c) => *c,
            SmoothFactor::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * t + ck),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            SmoothFactor::Constant(_) => true,
            SmoothFactor::Polynomial(c) => c.iter().skip(1).all(|&ck| ck == 0.0),
        }
    }

    /// Checks positivity on `[lo, hi]` on a fine sample.
    fn validate(&self, lo: f64, hi: f64) -> Result<()> {
        let bad = |v: f64| !(v > 0.0 && v.is_finite());
        match self {
            SmoothFactor::Constant(c) if bad(*c) => Err(Error::domain(format!(
                "smooth factor must be positive, got {c}"
            ))),
            SmoothFactor::Constant(_) => Ok(()),
            SmoothFactor::Polynomial(c) if c.is_empty() => {
                Err(Error::input("smooth factor polynomial has no coefficients"))
            }
            SmoothFactor::Polynomial(_) => {
                const SAMPLES: usize = 2048;
                for i in 0..=SAMPLES {
                    let t = lo + (hi - lo) * i as f64 / SAMPLES as f64;
                    let v = self.eval(t);
                    if bad(v) {
                        return Err(Error::domain(format!(
                            "smooth factor is not positive on the support (w0({t}) = {v})"
                        )));
                    }
                }
                Ok(())
            }
        }
    }
}

/// Density profile relative to arc length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DensityProfile {
    /// Weight times arc length.
    #[default]
    ArcLength,
    /// Weight times `1/sqrt(1 - s^2)` on a segment, `s` the affine coordinate
    /// mapping the segment onto `[-1, 1]`.
    Arcsine,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightKind {
    Plain,
    Jump(JumpWeight),
}

/// Weight on one arc (`arc == Some(i)`) or on every arc without a more
/// specific piece (`arc == None`).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightPiece {
    pub arc: Option<usize>,
    pub kind: WeightKind,
    pub smooth: SmoothFactor,
    pub profile: DensityProfile,
}

impl WeightPiece {
    pub fn plain() -> Self {
        Self {
            arc: None,
            kind: WeightKind::Plain,
            smooth: SmoothFactor::default(),
            profile: DensityProfile::ArcLength,
        }
    }

    pub fn jump(jump: JumpWeight) -> Self {
        Self {
            kind: WeightKind::Jump(jump),
            ..Self::plain()
        }
    }

    pub fn jump_weight(&self) -> Option<JumpWeight> {
        match self.kind {
            WeightKind::Jump(j) => Some(j),
            WeightKind::Plain => None,
        }
    }
}

/// Where to evaluate `lambda_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalPoint {
    Point(Complex64),
    /// The image of the jump parameter; on lemniscates, the preimage of
    /// `e^{i t0}` with the largest real part (then imaginary part).
    AutoJump,
}

/// A point of the support with its arc and parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportPoint {
    pub z: Complex64,
    pub arc: usize,
    pub t: f64,
}

#[derive(Debug, Clone)]
pub struct MeasureSpec {
    support: SupportSpec,
    arcs: Vec<ArcParametrization>,
    pieces: Vec<WeightPiece>,
    scale: f64,
    eval: EvalPoint,
}

impl MeasureSpec {
    pub fn new(support: SupportSpec, pieces: Vec<WeightPiece>, eval: EvalPoint) -> Result<Self> {
        let arcs = support.parametrize()?;
        let spec = Self {
            support,
            arcs,
            pieces,
            scale: 1.0,
            eval,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Single weight piece on every arc.
    pub fn with_weight(support: SupportSpec, piece: WeightPiece, eval: EvalPoint) -> Result<Self> {
        Self::new(support, vec![piece], eval)
    }

    fn validate(&self) -> Result<()> {
        if self.pieces.is_empty() {
            return Err(Error::input("measure has no weight"));
        }
        for piece in &self.pieces {
            if let Some(i) = piece.arc {
                if i >= self.arcs.len() {
                    return Err(Error::input(format!(
                        "weight piece refers to arc {i}, support has {}",
                        self.arcs.len()
                    )));
                }
            }
            if let WeightKind::Jump(j) = piece.kind {
                JumpWeight::new(j.a, j.b, j.jump_param)?;
            }
        }
        for (i, arc) in self.arcs.iter().enumerate() {
            let piece = self.piece_for(i)?;
            let (lo, hi) = if arc.is_angular() {
                (0.0, TAU)
            } else {
                (arc.t_lo, arc.t_hi)
            };
            piece.smooth.validate(lo, hi)?;
            if piece.profile == DensityProfile::Arcsine && arc.is_angular() {
                return Err(Error::input("arcsine profile is only defined on segments"));
            }
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::domain(format!("measure scale must be positive, got {}", self.scale)));
        }
        self.z0()?;
        Ok(())
    }

    pub fn support(&self) -> &SupportSpec {
        &self.support
    }

    pub fn arcs(&self) -> &[ArcParametrization] {
        &self.arcs
    }

    pub fn pieces(&self) -> &[WeightPiece] {
        &self.pieces
    }

    pub fn eval_point(&self) -> EvalPoint {
        self.eval
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// The measure `c * mu`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::domain(format!("scale factor must be positive, got {c}")));
        }
        let mut out = self.clone();
        out.scale *= c;
        Ok(out)
    }

    /// Same measure evaluated at another point.
    pub fn at(&self, eval: EvalPoint) -> Result<Self> {
        let mut out = self.clone();
        out.eval = eval;
        out.z0()?;
        Ok(out)
    }

    pub fn piece_for(&self, arc: usize) -> Result<&WeightPiece> {
        self.pieces
            .iter()
            .rev()
            .find(|p| p.arc == Some(arc))
            .or_else(|| self.pieces.iter().rev().find(|p| p.arc.is_none()))
            .ok_or_else(|| Error::input(format!("no weight given for arc {arc}")))
    }

    /// The jump of the first jump piece, if any.
    pub fn jump(&self) -> Option<JumpWeight> {
        self.pieces.iter().find_map(WeightPiece::jump_weight)
    }

    /// Density against arc length at parameter `t` of arc `arc`.
    pub fn weight_on_arc(&self, arc: usize, t: f64, side: Side) -> Result<f64> {
        let param = self
            .arcs
            .get(arc)
            .ok_or_else(|| Error::input(format!("arc index {arc} out of range")))?;
        let slack = 1e-12 * (1.0 + param.t_lo.abs().max(param.t_hi.abs()));
        if !(t >= param.t_lo - slack && t <= param.t_hi + slack) {
            return Err(Error::domain(format!(
                "parameter {t} outside [{}, {}]",
                param.t_lo, param.t_hi
            )));
        }
        let piece = self.piece_for(arc)?;
        let angular = param.is_angular();
        let smooth_t = if angular { t.rem_euclid(TAU) } else { t };
        let v = match piece.kind {
            WeightKind::Plain => 1.0,
            WeightKind::Jump(j) => j.value(t, side, angular),
        };
        let profile = match piece.profile {
            DensityProfile::ArcLength => 1.0,
            DensityProfile::Arcsine => {
                let s = (2.0 * t - param.t_lo - param.t_hi) / (param.t_hi - param.t_lo);
                let q = 1.0 - s * s;
                if !(q > 0.0) {
                    return Err(Error::domain(format!(
                        "arcsine density is unbounded at the endpoint t = {t}"
                    )));
                }
                1.0 / q.sqrt()
            }
        };
        Ok(self.scale * piece.smooth.eval(smooth_t) * v * profile)
    }

    /// [`weight_on_arc`](Self::weight_on_arc) on the first arc.
    pub fn weight_at(&self, t: f64, side: Side) -> Result<f64> {
        self.weight_on_arc(0, t, side)
    }

    /// Weight at a point of the support, found by locating it on an arc.
    pub fn weight_at_point(&self, z: Complex64, side: Side) -> Result<f64> {
        let p = self.locate(z, ON_SUPPORT_TOLERANCE)?;
        self.weight_on_arc(p.arc, p.t, side)
    }

    /// Arc and parameter of a support point.
    pub fn locate(&self, z: Complex64, tol: f64) -> Result<SupportPoint> {
        self.arcs
            .iter()
            .enumerate()
            .find_map(|(arc, a)| a.locate(z, tol).map(|t| SupportPoint { z, arc, t }))
            .ok_or_else(|| Error::domain(format!("point {z} is not on the {} support", self.support.kind_name())))
    }

    /// The evaluation point, resolved and located on the support.
    pub fn z0(&self) -> Result<SupportPoint> {
        match self.eval {
            EvalPoint::Point(z) => self.locate(z, ON_SUPPORT_TOLERANCE),
            EvalPoint::AutoJump => {
                let jump = self
                    .jump()
                    .ok_or_else(|| Error::input("auto-jump needs a jump weight"))?;
                let z = self.jump_image(jump.jump_param)?;
                let p = self.locate(z, 1e-8)?;
                Ok(SupportPoint { z: self.arcs[p.arc].point(p.t), ..p })
            }
        }
    }

    fn jump_image(&self, t0: f64) -> Result<Complex64> {
        if let SupportSpec::Lemniscate(poly) = &self.support {
            let mut fiber = preimages(poly, Complex64::from_polar(1.0, t0))?;
            fiber.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
            return Ok(fiber[0]);
        }
        self.arcs
            .iter()
            .find_map(|arc| {
                let t = if arc.is_angular() {
                    let k = ((arc.t_lo - t0) / TAU).ceil();
                    t0 + TAU * k
                } else {
                    t0
                };
                (t >= arc.t_lo && t <= arc.t_hi).then(|| arc.point(t))
            })
            .ok_or_else(|| Error::domain(format!("jump parameter {t0} is outside the support")))
    }

    /// Parameters on `arc` where the weight jumps.
    pub fn jump_params(&self, arc: usize) -> Result<Vec<f64>> {
        let param = &self.arcs[arc];
        let Some(j) = self.piece_for(arc)?.jump_weight() else {
            return Ok(Vec::new());
        };
        if !param.is_angular() {
            let inside = j.jump_param > param.t_lo && j.jump_param < param.t_hi;
            return Ok(if inside { vec![j.jump_param] } else { Vec::new() });
        }
        let k_lo = ((param.t_lo - j.jump_param) / PI).ceil() as i64;
        let k_hi = ((param.t_hi - j.jump_param) / PI).floor() as i64;
        Ok((k_lo..=k_hi)
            .map(|k| j.jump_param + PI * k as f64)
            .filter(|&t| t >= param.t_lo && t <= param.t_hi)
            .collect())
    }

    /// Total mass `mu(support)`.
    pub fn mass(&self) -> Result<f64> {
        let mut total = 0.0;
        for i in 0..self.arcs.len() {
            total += crate::quadrature::arc_mass(self, i)?;
        }
        Ok(total)
    }
}

fn is_unit_circle(support: &SupportSpec) -> bool {
    matches!(support, SupportSpec::Circle { center, radius } if center.norm() == 0.0 && *radius == 1.0)
}

fn circle_piece(measure: &MeasureSpec, op: &str) -> Result<WeightPiece> {
    if !is_unit_circle(measure.support()) {
        return Err(Error::input(format!("{op} needs a measure on the unit circle")));
    }
    let piece = measure.piece_for(0)?.clone();
    if piece.arc.is_some() && measure.pieces().len() > 1 {
        return Err(Error::input(format!("{op} needs a single weight piece")));
    }
    Ok(piece)
}

/// Transfers a circle measure symmetric under `t -> -t` to `[-1, 1]` through
/// `x = cos t`: the interval density is `v(e^{i arccos x}) / sqrt(1 - x^2)`,
/// and `integral f(cos t) dmu_circle = 2 integral f dmu_interval`.
pub fn symmetrize_to_interval(circle: &MeasureSpec) -> Result<MeasureSpec> {
    let piece = circle_piece(circle, "symmetrization")?;
    if !piece.smooth.is_constant() {
        return Err(Error::Symmetry(
            "symmetrization needs a constant smooth factor".into(),
        ));
    }
    let kind = match piece.kind {
        WeightKind::Plain => WeightKind::Plain,
        WeightKind::Jump(j) => {
            let s = wrap_angle(j.jump_param);
            let symmetric = j.a == j.b || (s.abs() - FRAC_PI_2).abs() < 1e-12;
            if !symmetric {
                return Err(Error::Symmetry(format!(
                    "jump at t = {} is not symmetric under t -> -t",
                    j.jump_param
                )));
            }
            // x < 0 sees the circle value at t = pi, x > 0 the value at t = 0
            let left = j.value(PI, Side::Left, true);
            let right = j.value(0.0, Side::Left, true);
            WeightKind::Jump(JumpWeight::new(left, right, 0.0)?)
        }
    };
    let mut out = MeasureSpec::with_weight(
        SupportSpec::Interval { a: -1.0, b: 1.0 },
        WeightPiece {
            arc: None,
            kind,
            smooth: piece.smooth.clone(),
            profile: DensityProfile::Arcsine,
        },
        EvalPoint::Point(Complex64::new(0.0, 0.0)),
    )?;
    out.scale = circle.scale;
    if let EvalPoint::Point(z) = circle.eval {
        if let Ok(p) = out.locate(Complex64::new(z.re, 0.0), ON_SUPPORT_TOLERANCE) {
            out.eval = EvalPoint::Point(p.z);
        }
    }
    Ok(out)
}

/// The measure `v(T(z)) ds` on the lemniscate `|T| = 1`, with `v` the weight
/// of a unit-circle measure. Its jumps sit at the preimages of the circle's
/// jump points.
pub fn pullback_to_lemniscate(circle: &MeasureSpec, poly: &ComplexPolynomial) -> Result<MeasureSpec> {
    let mut piece = circle_piece(circle, "pullback")?;
    piece.arc = None;
    let eval = match circle.eval {
        EvalPoint::AutoJump => EvalPoint::AutoJump,
        EvalPoint::Point(w) => {
            let mut fiber = preimages(poly, w)?;
            fiber.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
            EvalPoint::Point(fiber[0])
        }
    };
    let mut out = MeasureSpec::with_weight(SupportSpec::Lemniscate(poly.clone()), piece, eval)?;
    out.scale = circle.scale;
    Ok(out)
}

/// True when the shape of `arc` is a lemniscate component.
pub fn is_lemniscate_arc(arc: &ArcParametrization) -> bool {
    matches!(arc.shape, ArcShape::Lemniscate(_))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn circle_jump(a: f64, b: f64) -> MeasureSpec {
        MeasureSpec::with_weight(
            SupportSpec::unit_circle(),
            WeightPiece::jump(JumpWeight::new(a, b, FRAC_PI_2).unwrap()),
            EvalPoint::AutoJump,
        )
        .unwrap()
    }

    #[test]
    fn circle_jump_values_and_sides() {
        let mu = circle_jump(2.0, 1.0);
        assert_eq!(mu.weight_at(0.0, Side::Left).unwrap(), 2.0);
        assert_eq!(mu.weight_at(PI, Side::Left).unwrap(), 1.0);
        assert_eq!(mu.weight_at(FRAC_PI_2, Side::Left).unwrap(), 2.0);
        assert_eq!(mu.weight_at(FRAC_PI_2, Side::Right).unwrap(), 1.0);
        // second jump, B back to A
        assert_eq!(mu.weight_at(1.5 * PI, Side::Left).unwrap(), 1.0);
        assert_eq!(mu.weight_at(1.5 * PI, Side::Right).unwrap(), 2.0);
        assert!(mu.weight_at(7.0, Side::Left).is_err());
    }

    #[test]
    fn auto_jump_on_circle_is_i() {
        let p = circle_jump(2.0, 1.0).z0().unwrap();
        assert!((p.z - c(0.0, 1.0)).norm() < 1e-15);
        assert!((p.t - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn jump_params_on_circle() {
        let mu = circle_jump(2.0, 1.0);
        let t = mu.jump_params(0).unwrap();
        assert_eq!(t.len(), 2);
        assert!((t[0] - FRAC_PI_2).abs() < 1e-15 && (t[1] - 1.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn segment_convention() {
        let j = JumpWeight::new(3.0, 5.0, 0.25).unwrap();
        assert_eq!(j.value(0.0, Side::Right, false), 3.0);
        assert_eq!(j.value(0.25, Side::Left, false), 3.0);
        assert_eq!(j.value(0.25, Side::Right, false), 5.0);
        assert_eq!(j.value(0.9, Side::Left, false), 5.0);
    }

    #[test]
    fn rejects_nonpositive_weights() {
        assert!(JumpWeight::new(0.0, 1.0, 0.0).is_err());
        let bad = WeightPiece {
            smooth: SmoothFactor::Polynomial(vec![1.0, -1.0]),
            ..WeightPiece::plain()
        };
        let r = MeasureSpec::with_weight(
            SupportSpec::Interval { a: 0.0, b: 2.0 },
            bad,
            EvalPoint::Point(c(0.5, 0.0)),
        );
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn z0_must_lie_on_support() {
        let r = circle_jump(2.0, 1.0).at(EvalPoint::Point(c(0.0, 1.001)));
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn symmetrized_circle_jump() {
        let iv = symmetrize_to_interval(&circle_jump(2.0, 1.0)).unwrap();
        let x = 0.6f64;
        let root = (1.0 - x * x).sqrt();
        assert!((iv.weight_at(x, Side::Left).unwrap() - 2.0 / root).abs() < 1e-14);
        assert!((iv.weight_at(-x, Side::Left).unwrap() - 1.0 / root).abs() < 1e-14);
        let uniform = MeasureSpec::with_weight(
            SupportSpec::unit_circle(),
            WeightPiece::plain(),
            EvalPoint::Point(c(1.0, 0.0)),
        )
        .unwrap();
        let iv = symmetrize_to_interval(&uniform).unwrap();
        assert!((iv.weight_at(x, Side::Left).unwrap() - 1.0 / root).abs() < 1e-14);
    }

    #[test]
    fn asymmetric_jump_rejected() {
        let mu = MeasureSpec::with_weight(
            SupportSpec::unit_circle(),
            WeightPiece::jump(JumpWeight::new(2.0, 1.0, 0.0).unwrap()),
            EvalPoint::AutoJump,
        )
        .unwrap();
        assert!(matches!(symmetrize_to_interval(&mu), Err(Error::Symmetry(_))));
    }

    #[test]
    fn pullback_through_square() {
        let mu = pullback_to_lemniscate(&circle_jump(2.0, 1.0), &ComplexPolynomial::monomial(2)).unwrap();
        let z = Complex64::from_polar(1.0, PI / 8.0);
        assert_eq!(mu.weight_at_point(z, Side::Left).unwrap(), 2.0);
        let z0 = mu.z0().unwrap();
        assert!((z0.z - Complex64::from_polar(1.0, FRAC_PI_4)).norm() < 1e-13);
        // four jump points on the doubled parameter range
        assert_eq!(mu.jump_params(0).unwrap().len(), 4);
    }

    #[test]
    fn scaling_multiplies_weight() {
        let mu = circle_jump(2.0, 1.0).scaled(10.0).unwrap();
        assert_eq!(mu.weight_at(0.0, Side::Left).unwrap(), 20.0);
        assert!(circle_jump(2.0, 1.0).scaled(-1.0).is_err());
    }
}
