//! Gauss-Legendre nodes and weights on `[-1,1]`.
//!
//! Computed by Newton iteration on the Legendre recurrence. The 16-point rule
//! used by the panel integrator is cached; other sizes are computed on demand
//! (the classical rules also serve as test oracles elsewhere).

use std::sync::OnceLock;

/// Legendre polynomial `P_n(x)` and its derivative.
pub fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    // P'_n from the standard identity (1-x^2) P'_n = n (P_{n-1} - x P_n)
    let dp = if (1.0 - x * x).abs() > 1e-30 {
        n as f64 * (p0 - x * p1) / (1.0 - x * x)
    } else {
        0.0
    };
    (p1, dp)
}

/// Nodes (ascending) and weights of the `n`-point Gauss-Legendre rule on `[-1,1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Chebyshev-type initial guess, then Newton.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_pair(n, z);
            let step = p / dp;
            z -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_pair(n, z);
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        w[i] = wi;
        x[n - 1 - i] = z;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// The cached 16-point rule used per integration panel.
pub(crate) fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static GL16: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL16.get_or_init(|| gauss_legendre(16))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_rules_integrate_polynomials_exactly() {
        let (x, w) = gauss_legendre(5);
        // exact through degree 9
        for deg in 0..=9usize {
            let got: f64 = x
                .iter()
                .zip(&w)
                .map(|(&xi, &wi)| wi * xi.powi(deg as i32))
                .sum();
            let exact = if deg % 2 == 0 {
                2.0 / (deg as f64 + 1.0)
            } else {
                0.0
            };
            assert!((got - exact).abs() < 1e-14, "deg {deg}: {got} vs {exact}");
        }
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1usize, 2, 7, 16, 31] {
            let (_, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn nodes_ascending_and_symmetric() {
        let (x, _) = gauss_legendre(16);
        for i in 1..x.len() {
            assert!(x[i] > x[i - 1]);
        }
        for i in 0..8 {
            assert!((x[i] + x[15 - i]).abs() < 1e-15);
        }
    }
}
