//! Gauss–Legendre nodes and weights on [-1, 1].

use crate::scalar::Scalar;

/// Panel order used throughout the crate.
pub const PANEL_ORDER: usize = 24;

/// Nodes (ascending) and weights of the `m`-point rule, by Newton iteration on
/// the three-term Legendre recurrence carried out in `T`.
pub fn gauss_legendre<T: Scalar>(m: usize) -> (Vec<T>, Vec<T>) {
    assert!(m >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![T::zero(); m];
    let mut weights = vec![T::zero(); m];
    let one = T::one();
    let two = T::of(2.0);
    let tol = T::epsilon() * T::of(4.0);
    for i in 0..(m + 1) / 2 {
        // Tricomi's initial guess for the i-th largest root.
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut x = T::of(guess);
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            dp = d;
            let dx = p / d;
            x = x - dx;
            if dx.abs() <= tol {
                let (_, d) = legendre_with_derivative(m, x);
                dp = d;
                break;
            }
        }
        let w = two / ((one - x * x) * dp * dp);
        nodes[m - 1 - i] = x;
        nodes[i] = -x;
        weights[m - 1 - i] = w;
        weights[i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = T::zero();
    }
    (nodes, weights)
}

fn legendre_with_derivative<T: Scalar>(m: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=m {
        let kf = T::of(k as f64);
        let p2 = ((T::of(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if m == 0 {
        return (T::one(), T::zero());
    }
    let mf = T::of(m as f64);
    let d = mf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Composite rule for a smooth integrand on `[a, b]`, doubling the panel
/// count until successive results agree to `rel_tol`.
pub fn integrate_adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    let (x, w) = gauss_legendre::<f64>(PANEL_ORDER);
    let composite = |panels: usize| {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|p| {
                let lo = a + h * p as f64;
                let mid = lo + 0.5 * h;
                x.iter()
                    .zip(&w)
                    .map(|(&xi, &wi)| wi * f(mid + 0.5 * h * xi))
                    .sum::<f64>()
                    * 0.5
                    * h
            })
            .sum::<f64>()
    };
    let mut panels = 4;
    let mut prev = composite(panels);
    while panels < 1 << 16 {
        panels *= 2;
        let next = composite(panels);
        if (next - prev).abs() <= rel_tol * next.abs().max(f64::MIN_POSITIVE) {
            return next;
        }
        prev = next;
    }
    prev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::DoubleDouble;
    use num_traits::Zero;

    #[test]
    fn weights_sum_to_two_and_integrate_monomials() {
        let (x, w) = gauss_legendre::<f64>(PANEL_ORDER);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for k in 0..2 * PANEL_ORDER {
            let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            let got: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k as i32)).sum();
            assert!((got - exact).abs() < 1e-14, "degree {k}: {got} vs {exact}");
        }
    }

    #[test]
    fn extended_nodes_agree_and_are_sharper() {
        let (xd, wd) = gauss_legendre::<f64>(PANEL_ORDER);
        let (xe, we) = gauss_legendre::<DoubleDouble>(PANEL_ORDER);
        for i in 0..PANEL_ORDER {
            assert!((xe[i].approx() - xd[i]).abs() < 1e-15);
            assert!((we[i].approx() - wd[i]).abs() < 1e-14);
        }
        let total = we.iter().fold(DoubleDouble::zero(), |acc, &w| acc + w);
        assert!((total - DoubleDouble::of(2.0)).abs().approx() < 1e-29);
        // x^46 integrates to 2/47
        let m46 = xe
            .iter()
            .zip(&we)
            .fold(DoubleDouble::zero(), |acc, (&x, &w)| acc + w * (0..46).fold(DoubleDouble::of(1.0), |p, _| p * x));
        let exact = DoubleDouble::of(2.0) / DoubleDouble::of(47.0);
        assert!(((m46 - exact) / exact).abs().approx() < 1e-28);
    }

    #[test]
    fn odd_order_has_zero_node() {
        let (x, w) = gauss_legendre::<f64>(5);
        assert_eq!(x[2], 0.0);
        assert!((w[2] - 128.0 / 225.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_integrates_periodic_function() {
        let v = integrate_adaptive(|t| (t.sin()).powi(2), 0.0, std::f64::consts::TAU, 1e-12);
        assert!((v - std::f64::consts::PI).abs() < 1e-12);
    }
}
