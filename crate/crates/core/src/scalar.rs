//! Floating point abstraction shared by the quadrature and orthonormalization
//! code, so the same routines run in `f64` or in double-double arithmetic.

use std::fmt::Debug;
use std::ops::{AddAssign, DivAssign, MulAssign, Neg, SubAssign};

use num_complex::{Complex, Complex64};
use num_traits::{Float, Num, One, Zero};
use twofloat::TwoFloat;

use crate::error::{Error, Result};

/// Real scalar used for rules and bases.
pub trait Scalar:
    Num
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Copy
    + PartialOrd
    + Debug
    + Default
    + Send
    + Sync
    + 'static
{
    /// Significand bits of the representation.
    const BITS: u32;

    fn of(x: f64) -> Self;

    /// Nearest `f64`.
    fn approx(self) -> f64;

    fn sqrt(self) -> Self;

    fn sin_cos(self) -> (Self, Self);

    /// Unit roundoff of the representation.
    fn epsilon() -> Self;

    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    fn is_finite(self) -> bool {
        self.approx().is_finite()
    }

    fn cx(z: Complex64) -> Complex<Self> {
        Complex::new(Self::of(z.re), Self::of(z.im))
    }

    fn cx_approx(z: Complex<Self>) -> Complex64 {
        Complex64::new(z.re.approx(), z.im.approx())
    }

    /// Modulus of a complex number.
    fn modulus(z: Complex<Self>) -> Self {
        z.norm_sqr().sqrt()
    }

    /// `sum a_i conj(b_i)`.
    fn dot_conj(a: &[Complex<Self>], b: &[Complex<Self>]) -> Complex<Self> {
        let (mut re, mut im) = (Self::zero(), Self::zero());
        for (x, y) in a.iter().zip(b) {
            re += x.re * y.re + x.im * y.im;
            im += x.im * y.re - x.re * y.im;
        }
        Complex::new(re, im)
    }

    /// `v_i -= c q_i`.
    fn sub_scaled(v: &mut [Complex<Self>], q: &[Complex<Self>], c: Complex<Self>) {
        for (vi, &qi) in v.iter_mut().zip(q) {
            *vi = *vi - qi * c;
        }
    }
}

impl Scalar for f64 {
    const BITS: u32 = 53;

    #[inline]
    fn of(x: f64) -> Self {
        x
    }

    #[inline]
    fn approx(self) -> f64 {
        self
    }

    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }

    #[inline]
    fn sin_cos(self) -> (Self, Self) {
        f64::sin_cos(self)
    }

    #[inline]
    fn epsilon() -> Self {
        f64::EPSILON
    }

    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }

    #[inline]
    fn modulus(z: Complex<Self>) -> Self {
        z.norm()
    }
}

/// Double-double number: an unevaluated sum `hi + lo` of two `f64`s.
///
/// Wraps [`TwoFloat`], whose quotient of two double-doubles is only accurate
/// to `f64` precision; division here is done by long division instead.
#[derive(Debug, Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct DoubleDouble(pub TwoFloat);

impl DoubleDouble {
    pub fn hi(self) -> f64 {
        self.0.hi()
    }

    pub fn lo(self) -> f64 {
        self.0.lo()
    }
}

macro_rules! delegate_binop {
    ($($tr:ident $f:ident $atr:ident $af:ident),*) => {$(
        impl std::ops::$tr for DoubleDouble {
            type Output = Self;
            #[inline]
            fn $f(self, rhs: Self) -> Self {
                DoubleDouble(std::ops::$tr::$f(self.0, rhs.0))
            }
        }
        impl std::ops::$atr for DoubleDouble {
            #[inline]
            fn $af(&mut self, rhs: Self) {
                *self = std::ops::$tr::$f(*self, rhs);
            }
        }
    )*};
}

delegate_binop!(
    Add add AddAssign add_assign,
    Sub sub SubAssign sub_assign,
    Mul mul MulAssign mul_assign,
    Rem rem RemAssign rem_assign
);

impl std::ops::Div for DoubleDouble {
    type Output = Self;

    fn div(self, rhs: Self) -> Self {
        let (a, b) = (self.0, rhs.0);
        let q1 = a.hi() / b.hi();
        if !q1.is_finite() || q1 == 0.0 {
            return DoubleDouble(TwoFloat::from(q1));
        }
        let r = a - b * q1;
        let q2 = r.hi() / b.hi();
        let r = r - b * q2;
        let q3 = r.hi() / b.hi();
        DoubleDouble(TwoFloat::new_add(q1, q2) + q3)
    }
}

impl DivAssign for DoubleDouble {
    fn div_assign(&mut self, rhs: Self) {
        *self = *self / rhs;
    }
}

impl Neg for DoubleDouble {
    type Output = Self;

    #[inline]
    fn neg(self) -> Self {
        DoubleDouble(-self.0)
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        DoubleDouble(TwoFloat::from(0.0))
    }

    fn is_zero(&self) -> bool {
        self.0.hi() == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        DoubleDouble(TwoFloat::from(1.0))
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = <TwoFloat as Num>::FromStrRadixErr;

    fn from_str_radix(s: &str, radix: u32) -> std::result::Result<Self, Self::FromStrRadixErr> {
        TwoFloat::from_str_radix(s, radix).map(DoubleDouble)
    }
}

impl Scalar for DoubleDouble {
    const BITS: u32 = 106;

    #[inline]
    fn of(x: f64) -> Self {
        DoubleDouble(TwoFloat::from(x))
    }

    #[inline]
    fn approx(self) -> f64 {
        self.0.hi() + self.0.lo()
    }

    fn sqrt(self) -> Self {
        DoubleDouble(Float::sqrt(self.0))
    }

    fn sin_cos(self) -> (Self, Self) {
        let (s, c) = Float::sin_cos(self.0);
        (DoubleDouble(s), DoubleDouble(c))
    }

    fn epsilon() -> Self {
        Self::of(f64::EPSILON * f64::EPSILON)
    }

    fn abs(self) -> Self {
        DoubleDouble(Float::abs(self.0))
    }

    fn dot_conj(a: &[Complex<Self>], b: &[Complex<Self>]) -> Complex<Self> {
        let mut re = Accumulator::default();
        let mut im = Accumulator::default();
        for (x, y) in a.iter().zip(b) {
            re.add_product(x.re, y.re);
            re.add_product(x.im, y.im);
            im.add_product(x.im, y.re);
            im.add_product(-x.re, y.im);
        }
        Complex::new(re.finish(), im.finish())
    }

    fn sub_scaled(v: &mut [Complex<Self>], q: &[Complex<Self>], c: Complex<Self>) {
        let neg = -c;
        for (vi, qi) in v.iter_mut().zip(q) {
            let mut re = Accumulator::starting_at(vi.re);
            re.add_product(qi.re, neg.re);
            re.add_product(-qi.im, neg.im);
            let mut im = Accumulator::starting_at(vi.im);
            im.add_product(qi.re, neg.im);
            im.add_product(qi.im, neg.re);
            *vi = Complex::new(re.finish(), im.finish());
        }
    }
}

#[inline(always)]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Sum of double-double products kept as an unevaluated `f64` sum plus a
/// running correction, renormalized once at the end.
#[derive(Default)]
struct Accumulator {
    hi: f64,
    lo: f64,
}

impl Accumulator {
    #[inline(always)]
    fn starting_at(x: DoubleDouble) -> Self {
        Self {
            hi: x.hi(),
            lo: x.lo(),
        }
    }

    #[inline(always)]
    fn add_product(&mut self, a: DoubleDouble, b: DoubleDouble) {
        let (ah, al, bh, bl) = (a.hi(), a.lo(), b.hi(), b.lo());
        let p = ah * bh;
        let e = ah.mul_add(bh, -p);
        let (s, err) = two_sum(self.hi, p);
        self.hi = s;
        self.lo += err + e + ah * bl + al * bh;
    }

    #[inline(always)]
    fn finish(self) -> DoubleDouble {
        DoubleDouble(TwoFloat::new_add(self.hi, self.lo))
    }
}

/// Degree above which [`Precision::Auto`] switches to extended arithmetic.
pub const AUTO_EXTENDED_ABOVE: usize = 150;

/// Arithmetic requested for rule construction and orthonormalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    /// `f64` up to degree 150, double-double beyond.
    #[default]
    Auto,
    Double,
    Extended,
}

/// Arithmetic actually used for one computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arithmetic {
    Double,
    Extended,
}

impl Arithmetic {
    pub fn bits(self) -> u32 {
        match self {
            Arithmetic::Double => <f64 as Scalar>::BITS,
            Arithmetic::Extended => <DoubleDouble as Scalar>::BITS,
        }
    }
}

impl Precision {
    /// Maps a requested bit count onto an available arithmetic. Requests of
    /// 54 to 128 bits are served by double-double (106 significand bits).
    pub fn from_bits(bits: u32) -> Result<Self> {
        match bits {
            0 => Err(Error::input("precision must be positive")),
            1..=53 => Ok(Precision::Double),
            54..=128 => Ok(Precision::Extended),
            _ => Err(Error::Capability(format!(
                "{bits}-bit arithmetic is not available (maximum 128, served as double-double)"
            ))),
        }
    }

    pub fn resolve(self, max_degree: usize) -> Arithmetic {
        match self {
            Precision::Double => Arithmetic::Double,
            Precision::Extended => Arithmetic::Extended,
            Precision::Auto if max_degree > AUTO_EXTENDED_ABOVE => Arithmetic::Extended,
            Precision::Auto => Arithmetic::Double,
        }
    }
}
