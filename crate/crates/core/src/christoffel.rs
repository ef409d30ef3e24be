//! Orthonormal polynomials by Arnoldi iteration in node space, the
//! Christoffel–Darboux kernel diagonal and the Christoffel function.
//!
//! With nodes `z_i` and weights `w_i` of a rule for `mu`, the vectors
//! `q_k = (sqrt(w_i) p_k(z_i))_i` are orthonormal in the plain Euclidean
//! inner product. Multiplying `q_k` by the node coordinates and
//! orthogonalizing (two classical Gram–Schmidt passes) gives `q_{k+1}` and
//! the Hessenberg column `z p_k = sum_{j <= k+1} h_{jk} p_j`, which evaluates
//! `p_k` anywhere.

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};

use crate::error::{Error, Result};
use crate::measure::{EvalPoint, MeasureSpec};
use crate::quadrature::{build_rule, GradingPolicy, QuadratureRule, RuleOptions, DEFAULT_NODES_PER_DEGREE};
use crate::scalar::{Arithmetic, DoubleDouble, Precision, Scalar};

/// Breakdown threshold for the Hessenberg subdiagonal, relative to `max |z_i|`.
pub const BREAKDOWN_TOLERANCE: f64 = 1e-14;
/// Kernel values below this are reported instead of inverted.
pub const KERNEL_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone)]
pub struct OrthoBasis<T: Scalar> {
    nodes: Vec<Complex<T>>,
    sqrt_w: Vec<T>,
    /// `q[k][i] = sqrt(w_i) p_k(z_i)`.
    q: Vec<Vec<Complex<T>>>,
    /// `h[k][j]`, `j <= k + 1`: column `k` of the Hessenberg matrix.
    h: Vec<Vec<Complex<T>>>,
    p0: T,
    requested: usize,
}

fn dot<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    T::dot_conj(a, b)
}

fn norm<T: Scalar>(a: &[Complex<T>]) -> T {
    T::dot_conj(a, a).re.sqrt()
}

impl<T: Scalar> OrthoBasis<T> {
    /// Orthonormalizes up to degree `n`, stopping early at breakdown.
    pub fn build_partial(rule: &QuadratureRule<T>, n: usize) -> Result<Self> {
        if rule.is_empty() {
            return Err(Error::input("quadrature rule has no nodes"));
        }
        if rule.max_exact_degree < n {
            return Err(Error::input(format!(
                "rule is exact to degree {}, basis needs {n}",
                rule.max_exact_degree
            )));
        }
        let sqrt_w: Vec<T> = rule.weights.iter().map(|&w| w.sqrt()).collect();
        let mass = rule.mass();
        if !(mass > T::zero()) {
            return Err(Error::domain("measure has no mass"));
        }
        let p0 = T::one() / mass.sqrt();
        let q0: Vec<Complex<T>> = sqrt_w.iter().map(|&s| Complex::new(s * p0, T::zero())).collect();
        let scale = rule
            .nodes
            .iter()
            .map(|&z| T::modulus(z).approx())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);

        let mut basis = OrthoBasis {
            nodes: rule.nodes.clone(),
            sqrt_w,
            q: vec![q0],
            h: Vec::with_capacity(n),
            p0,
            requested: n,
        };
        for k in 0..n {
            let mut v: Vec<Complex<T>> = basis.q[k].iter().zip(&basis.nodes).map(|(&q, &z)| q * z).collect();
            let mut col = vec![Complex::new(T::zero(), T::zero()); k + 2];
            for _pass in 0..2 {
                let coeffs: Vec<Complex<T>> = basis.q.iter().map(|qj| dot(&v, qj)).collect();
                for (qj, &c) in basis.q.iter().zip(&coeffs) {
                    T::sub_scaled(&mut v, qj, c);
                }
                for (cj, c) in col.iter_mut().zip(coeffs) {
                    *cj = *cj + c;
                }
            }
            let beta = norm(&v);
            if !(beta.approx() > BREAKDOWN_TOLERANCE * scale) {
                break;
            }
            col[k + 1] = Complex::new(beta, T::zero());
            let inv = T::one() / beta;
            for vi in v.iter_mut() {
                *vi = vi.scale(inv);
            }
            basis.q.push(v);
            basis.h.push(col);
        }
        Ok(basis)
    }

    /// Orthonormal basis through degree `n`, or a degeneracy error.
    pub fn build(rule: &QuadratureRule<T>, n: usize) -> Result<Self> {
        let basis = Self::build_partial(rule, n)?;
        if basis.degree() < n {
            return Err(Error::Degeneracy {
                requested: n,
                achieved: basis.degree(),
            });
        }
        Ok(basis)
    }

    /// Highest degree reached.
    pub fn degree(&self) -> usize {
        self.q.len() - 1
    }

    pub fn requested(&self) -> usize {
        self.requested
    }

    pub fn is_complete(&self) -> bool {
        self.degree() >= self.requested
    }

    /// Hessenberg matrix, `(degree + 1) x degree`, rounded to `f64`.
    pub fn hessenberg(&self) -> DMatrix<Complex64> {
        let n = self.degree();
        DMatrix::from_fn(n + 1, n, |j, k| {
            self.h[k].get(j).map(|&c| T::cx_approx(c)).unwrap_or_default()
        })
    }

    /// `p_k(z_i)` at every node.
    pub fn node_values(&self, k: usize) -> Vec<Complex<T>> {
        self.q[k]
            .iter()
            .zip(&self.sqrt_w)
            .map(|(&q, &s)| q.unscale(s))
            .collect()
    }

    pub fn nodes(&self) -> &[Complex<T>] {
        &self.nodes
    }

    /// Largest `|<p_j, p_k> - delta_jk|` under the rule.
    pub fn norm_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.q.len() {
            for k in 0..=j {
                let mut g = dot(&self.q[j], &self.q[k]);
                if j == k {
                    g = g - Complex::new(T::one(), T::zero());
                }
                worst = worst.max(T::modulus(g).approx());
            }
        }
        worst
    }

    /// `p_0(z), ..., p_m(z)` by the Hessenberg recurrence, `m <= degree()`.
    pub fn eval(&self, z: Complex<T>, m: usize) -> Result<Vec<Complex<T>>> {
        let m = m.min(self.degree());
        let mut p = Vec::with_capacity(m + 1);
        p.push(Complex::new(self.p0, T::zero()));
        for k in 0..m {
            let col = &self.h[k];
            let mut v = p[k] * z;
            for (pj, &c) in p.iter().zip(col) {
                v = v - *pj * c;
            }
            let next = v.unscale(col[k + 1].re);
            if !(next.re.is_finite() && next.im.is_finite()) {
                return Err(Error::Overflow { z: T::cx_approx(z) });
            }
            p.push(next);
        }
        Ok(p)
    }

    /// `K_m(z) = sum_{k <= m} |p_k(z)|^2` for `m = 0..=degree()`.
    pub fn kernel_partial_sums(&self, z: Complex64) -> Result<Vec<f64>> {
        let p = self.eval(T::cx(z), self.degree())?;
        let mut acc = T::zero();
        Ok(p.iter()
            .map(|pk| {
                acc += pk.norm_sqr();
                acc.approx()
            })
            .collect())
    }

    /// Coefficients of the minimizer, `c_k = conj(p_k(z)) / K_n(z)`, and
    /// `K_n(z)`.
    fn extremal(&self, z: Complex64, n: usize) -> Result<(Vec<Complex<T>>, T)> {
        let p = self.eval(T::cx(z), n)?;
        let k = p.iter().fold(T::zero(), |acc, pk| acc + pk.norm_sqr());
        if !(k.approx() >= KERNEL_FLOOR) {
            return Err(Error::KernelUnderflow { value: k.approx() });
        }
        if !k.is_finite() {
            return Err(Error::Overflow { z });
        }
        let inv = T::one() / k;
        Ok((p.iter().map(|pk| pk.conj().scale(inv)).collect(), k))
    }

    /// `integral |P|^2 dmu` for `P = sum c_k p_k`, summed at the nodes.
    fn l2_norm_sqr(&self, coeffs: &[Complex<T>]) -> T {
        let mut total = T::zero();
        for i in 0..self.nodes.len() {
            let mut v = Complex::new(T::zero(), T::zero());
            for (qk, &c) in self.q.iter().zip(coeffs) {
                v = v + qk[i] * c;
            }
            total += v.norm_sqr();
        }
        total
    }

    /// `P(zeta) = sum c_k p_k(zeta)`.
    pub fn combination(&self, coeffs: &[Complex<T>], zeta: Complex<T>) -> Result<Complex<T>> {
        let p = self.eval(zeta, coeffs.len().saturating_sub(1))?;
        Ok(p.iter().zip(coeffs).fold(Complex::new(T::zero(), T::zero()), |acc, (pk, &c)| acc + *pk * c))
    }

    /// `P` at every node from the stored node vectors.
    pub fn combination_at_nodes(&self, coeffs: &[Complex<T>]) -> Vec<Complex<T>> {
        (0..self.nodes.len())
            .map(|i| {
                let v = self
                    .q
                    .iter()
                    .zip(coeffs)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (qk, &c)| acc + qk[i] * c);
                v.unscale(self.sqrt_w[i])
            })
            .collect()
    }
}

/// How `lambda_n` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Reciprocal of the kernel diagonal.
    #[default]
    Kernel,
    /// Minimizer in the orthonormal basis, integrated at the nodes.
    Direct,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Kernel => "kernel",
            Method::Direct => "direct",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kernel" => Ok(Method::Kernel),
            "direct" => Ok(Method::Direct),
            _ => Err(Error::input(format!("unknown method '{s}' (kernel|direct)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChristoffelValue {
    pub n: usize,
    pub z: Complex64,
    pub lambda: f64,
    pub method: Method,
    /// Minimizer coefficients in the orthonormal basis (direct method).
    pub extremal_coeffs: Option<Vec<Complex64>>,
    /// `|P(z) - 1|` for the reconstructed minimizer (direct method).
    pub anchor_residual: Option<f64>,
    pub precision_bits: u32,
}

/// Rule and basis settings shared by the computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComputeOptions {
    pub precision: Precision,
    pub nodes_per_degree: usize,
    pub grading: GradingPolicy,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        Self {
            precision: Precision::Auto,
            nodes_per_degree: DEFAULT_NODES_PER_DEGREE,
            grading: GradingPolicy::default(),
        }
    }
}

/// Orthonormal basis in the arithmetic chosen for its degree.
#[derive(Debug, Clone)]
pub enum Basis {
    Double(OrthoBasis<f64>),
    Extended(OrthoBasis<DoubleDouble>),
}

macro_rules! with_basis {
    ($self:expr, $b:ident => $e:expr) => {
        match $self {
            Basis::Double($b) => $e,
            Basis::Extended($b) => $e,
        }
    };
}

impl Basis {
    /// Builds the rule for `measure` (graded toward its evaluation point) and
    /// orthonormalizes up to degree `n`, keeping a partial basis on breakdown.
    pub fn build_partial(measure: &MeasureSpec, n: usize, opts: &ComputeOptions) -> Result<Self> {
        let rule_opts = RuleOptions {
            max_degree: n,
            nodes_per_degree: opts.nodes_per_degree,
            grading: opts.grading,
        };
        Ok(match opts.precision.resolve(n) {
            Arithmetic::Double => {
                Basis::Double(OrthoBasis::build_partial(&build_rule(measure, &rule_opts)?, n)?)
            }
            Arithmetic::Extended => {
                Basis::Extended(OrthoBasis::build_partial(&build_rule(measure, &rule_opts)?, n)?)
            }
        })
    }

    pub fn build(measure: &MeasureSpec, n: usize, opts: &ComputeOptions) -> Result<Self> {
        let basis = Self::build_partial(measure, n, opts)?;
        if basis.degree() < n {
            return Err(Error::Degeneracy {
                requested: n,
                achieved: basis.degree(),
            });
        }
        Ok(basis)
    }

    pub fn degree(&self) -> usize {
        with_basis!(self, b => b.degree())
    }

    pub fn precision_bits(&self) -> u32 {
        match self {
            Basis::Double(_) => <f64 as Scalar>::BITS,
            Basis::Extended(_) => <DoubleDouble as Scalar>::BITS,
        }
    }

    pub fn norm_residual(&self) -> f64 {
        with_basis!(self, b => b.norm_residual())
    }

    pub fn hessenberg(&self) -> DMatrix<Complex64> {
        with_basis!(self, b => b.hessenberg())
    }

    pub fn kernel_partial_sums(&self, z: Complex64) -> Result<Vec<f64>> {
        with_basis!(self, b => b.kernel_partial_sums(z))
    }

    /// `sum_{k <= n} |p_k(z)|^2`.
    pub fn kernel_diag(&self, z: Complex64, n: usize) -> Result<f64> {
        self.check_degree(n)?;
        let sums = self.kernel_partial_sums(z)?;
        Ok(sums[n])
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.degree() {
            return Err(Error::Degeneracy {
                requested: n,
                achieved: self.degree(),
            });
        }
        Ok(())
    }

    pub fn lambda(&self, z: Complex64, n: usize, method: Method) -> Result<ChristoffelValue> {
        self.check_degree(n)?;
        let bits = self.precision_bits();
        match method {
            Method::Kernel => {
                let k = self.kernel_diag(z, n)?;
                if !(k >= KERNEL_FLOOR) {
                    return Err(Error::KernelUnderflow { value: k });
                }
                if !k.is_finite() {
                    return Err(Error::Overflow { z });
                }
                Ok(ChristoffelValue {
                    n,
                    z,
                    lambda: 1.0 / k,
                    method,
                    extremal_coeffs: None,
                    anchor_residual: None,
                    precision_bits: bits,
                })
            }
            Method::Direct => with_basis!(self, b => direct(b, z, n, bits)),
        }
    }

    /// Minimizer values at arbitrary points.
    pub fn extremal_polynomial_values(&self, value: &ChristoffelValue, points: &[Complex64]) -> Result<Vec<Complex64>> {
        let coeffs = value
            .extremal_coeffs
            .as_ref()
            .ok_or_else(|| Error::input("value carries no extremal coefficients (use the direct method)"))?;
        with_basis!(self, b => extremal_values(b, coeffs, points))
    }

    /// Minimizer values at the rule nodes, paired with the node positions.
    pub fn extremal_values_at_nodes(&self, value: &ChristoffelValue) -> Result<Vec<(Complex64, Complex64)>> {
        let coeffs = value
            .extremal_coeffs
            .as_ref()
            .ok_or_else(|| Error::input("value carries no extremal coefficients (use the direct method)"))?;
        with_basis!(self, b => {
            let c = lift(coeffs);
            let vals = b.combination_at_nodes(&c);
            Ok(b.nodes().iter().zip(vals).map(|(&z, v)| (cx_down(z), cx_down(v))).collect())
        })
    }
}

fn cx_down<T: Scalar>(z: Complex<T>) -> Complex64 {
    T::cx_approx(z)
}

fn lift<T: Scalar>(coeffs: &[Complex64]) -> Vec<Complex<T>> {
    coeffs.iter().map(|&c| T::cx(c)).collect()
}

fn direct<T: Scalar>(b: &OrthoBasis<T>, z: Complex64, n: usize, bits: u32) -> Result<ChristoffelValue> {
    let (coeffs, _) = b.extremal(z, n)?;
    let lambda = b.l2_norm_sqr(&coeffs).approx();
    let anchor = b.combination(&coeffs, T::cx(z))?;
    let residual = T::cx_approx(anchor - Complex::new(T::one(), T::zero())).norm();
    Ok(ChristoffelValue {
        n,
        z,
        lambda,
        method: Method::Direct,
        extremal_coeffs: Some(coeffs.into_iter().map(|c| T::cx_approx(c)).collect()),
        anchor_residual: Some(residual),
        precision_bits: bits,
    })
}

fn extremal_values<T: Scalar>(b: &OrthoBasis<T>, coeffs: &[Complex64], points: &[Complex64]) -> Result<Vec<Complex64>> {
    let c = lift(coeffs);
    points
        .iter()
        .map(|&z| b.combination(&c, T::cx(z)).map(T::cx_approx))
        .collect()
}

/// `lambda_n(mu, z)`, with the rule graded toward `z` when it lies on the
/// support.
pub fn lambda(measure: &MeasureSpec, n: usize, z: Complex64, method: Method, opts: &ComputeOptions) -> Result<ChristoffelValue> {
    let graded = measure.at(EvalPoint::Point(z));
    let measure = graded.as_ref().unwrap_or(measure);
    Basis::build(measure, n, opts)?.lambda(z, n, method)
}
