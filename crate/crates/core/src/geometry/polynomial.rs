use num_complex::{Complex, Complex64};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Polynomial with complex coefficients stored in ascending degree order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

impl ComplexPolynomial {
    /// Leading coefficient must be nonzero, so `degree() == coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        match coeffs.last() {
            None => Err(Error::input("polynomial needs at least one coefficient")),
            Some(_) if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) => {
                Err(Error::input("polynomial coefficients must be finite"))
            }
            Some(lead) if *lead == Complex64::new(0.0, 0.0) => {
                Err(Error::input("leading coefficient of polynomial is zero"))
            }
            Some(_) => Ok(Self { coeffs }),
        }
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative by a single Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        self.coeffs
            .iter()
            .rev()
            .fold((zero, zero), |(p, dp), &c| (p * z + c, dp * z + p))
    }

    /// Same as [`eval_with_derivative`](Self::eval_with_derivative) in any scalar type.
    pub fn eval_generic<T: Scalar>(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        let zero = Complex::new(T::zero(), T::zero());
        self.coeffs.iter().rev().fold((zero, zero), |(p, dp), &c| {
            (p * z + T::cx(c), dp * z + p)
        })
    }

    /// `None` for constants.
    pub fn derivative(&self) -> Option<ComplexPolynomial> {
        if self.degree() == 0 {
            return None;
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Some(Self { coeffs })
    }

    /// `T(z) - w`. Fails only if that leaves a zero constant polynomial.
    pub fn shifted(&self, w: Complex64) -> Result<Self> {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] -= w;
        if coeffs.len() == 1 && coeffs[0] == Complex64::new(0.0, 0.0) {
            return Err(Error::input("shifted polynomial vanishes identically"));
        }
        Ok(Self { coeffs })
    }

    /// `sum |c_k| |z|^k`, the natural scale for residuals of `eval(z)`.
    pub fn magnitude_bound(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }
}
