//! Polynomial roots, preimage fibers and critical points.
//!
//! Roots start as eigenvalues of the companion matrix (complex Schur form)
//! and are then polished by Newton iteration on the original coefficients.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::polynomial::ComplexPolynomial;
use crate::error::{Error, Result};

/// Scaled residual `|p(z)| / sum |c_k||z|^k` accepted after polishing.
const ACCEPT_RESIDUAL: f64 = 1e-8;
const NEWTON_STEPS: usize = 60;

/// All `degree()` roots with multiplicity.
pub fn roots(poly: &ComplexPolynomial) -> Result<Vec<Complex64>> {
    let n = poly.degree();
    let coeffs = poly.coeffs();
    let lead = poly.leading();
    let mut found = match n {
        0 => return Ok(Vec::new()),
        1 => vec![-coeffs[0] / lead],
        _ => {
            let mut companion = DMatrix::<Complex64>::zeros(n, n);
            for i in 1..n {
                companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
            }
            for i in 0..n {
                companion[(i, n - 1)] = -coeffs[i] / lead;
            }
            companion
                .eigenvalues()
                .ok_or_else(|| Error::RootFinding {
                    residuals: Vec::new(),
                    max_residual: f64::INFINITY,
                })?
                .iter()
                .copied()
                .collect()
        }
    };

    let residuals: Vec<f64> = found.iter_mut().map(|z| polish(poly, z)).collect();
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    if !(max_residual <= ACCEPT_RESIDUAL) {
        return Err(Error::RootFinding {
            residuals,
            max_residual,
        });
    }
    found.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(found)
}

/// Newton polishing; keeps the best iterate and returns its scaled residual.
fn polish(poly: &ComplexPolynomial, z: &mut Complex64) -> f64 {
    let scaled = |z: Complex64, v: Complex64| {
        let m = poly.magnitude_bound(z);
        if m > 0.0 {
            v.norm() / m
        } else {
            v.norm()
        }
    };
    let (v, _) = poly.eval_with_derivative(*z);
    let mut best = (*z, scaled(*z, v));
    let mut cur = *z;
    for _ in 0..NEWTON_STEPS {
        let (v, d) = poly.eval_with_derivative(cur);
        if v.norm() == 0.0 || d.norm() == 0.0 {
            break;
        }
        let step = v / d;
        cur -= step;
        let (v_new, _) = poly.eval_with_derivative(cur);
        let r = scaled(cur, v_new);
        if !r.is_finite() {
            break;
        }
        if r < best.1 {
            best = (cur, r);
        }
        if step.norm() <= 4.0 * f64::EPSILON * cur.norm().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    *z = best.0;
    best.1
}

/// The fiber `T^{-1}(w)`: all `N` solutions of `T(z) = w`.
pub fn preimages(poly: &ComplexPolynomial, w: Complex64) -> Result<Vec<Complex64>> {
    if poly.degree() == 0 {
        return Err(Error::input("preimages need a polynomial of degree >= 1"));
    }
    roots(&poly.shifted(w)?)
}

/// Roots of `T'`; empty for linear polynomials.
pub fn critical_points(poly: &ComplexPolynomial) -> Result<Vec<Complex64>> {
    match poly.derivative() {
        Some(d) if d.degree() >= 1 => roots(&d),
        _ => Ok(Vec::new()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn contains(set: &[Complex64], z: Complex64, tol: f64) -> bool {
        set.iter().any(|p| (p - z).norm() < tol)
    }

    #[test]
    fn square_roots_of_minus_one() {
        let z2 = ComplexPolynomial::monomial(2);
        let r = preimages(&z2, c(-1.0, 0.0)).unwrap();
        assert_eq!(r.len(), 2);
        assert!(contains(&r, c(0.0, 1.0), 1e-14));
        assert!(contains(&r, c(0.0, -1.0), 1e-14));
    }

    #[test]
    fn cube_roots_of_unity() {
        let z3 = ComplexPolynomial::monomial(3);
        let r = preimages(&z3, c(1.0, 0.0)).unwrap();
        assert_eq!(r.len(), 3);
        for k in 0..3 {
            let w = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 3.0);
            assert!(contains(&r, w, 1e-14), "missing {w}");
        }
    }

    #[test]
    fn shifted_square() {
        let p = ComplexPolynomial::from_real(&[-4.0, 0.0, 1.0]).unwrap();
        let r = preimages(&p, c(1.0, 0.0)).unwrap();
        assert!(contains(&r, c(5f64.sqrt(), 0.0), 1e-14));
        assert!(contains(&r, c(-(5f64.sqrt()), 0.0), 1e-14));
    }

    #[test]
    fn double_critical_point() {
        let r = critical_points(&ComplexPolynomial::monomial(3)).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|z| z.norm() < 1e-7));
        assert!(critical_points(&ComplexPolynomial::monomial(1)).unwrap().is_empty());
    }

    #[test]
    fn complex_coefficients() {
        // (z - i)(z - 2)(z + 1 + i)
        let roots_in = [c(0.0, 1.0), c(2.0, 0.0), c(-1.0, -1.0)];
        let mut coeffs = vec![c(1.0, 0.0)];
        for r in roots_in {
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (k, &a) in coeffs.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            coeffs = next;
        }
        let p = ComplexPolynomial::new(coeffs).unwrap();
        let r = roots(&p).unwrap();
        for z in roots_in {
            assert!(contains(&r, z, 1e-13));
        }
    }
}
