//! Interpolation at nodes in `(-1,1)` and the Lagrange-type basis at the
//! zeros of an orthogonal family member.
//!
//! The cardinal functions live on the unit circle: with `z_k = e^{i theta_k}`,
//! `theta_k = 2 acos(x_k)`, the scaled Lagrange polynomial
//! `z_k^{(n-1)/2} prod_{l != k} (z - z_l)/(z_k - z_l)` over `n` nodes is
//! self-inversive of degree `n-1`, so its phase-stripped circle values form
//! the unique cardinal interpolant in the degree-bound-`(n-1)` space.
//! Half-integer powers are always taken as `e^{i p theta/2}` from the angle
//! itself, never through complex square roots, which fixes the branch
//! globally (`sin(theta/2) = +sqrt(1-x^2)` on `[0, 2*pi]`).

use num_complex::Complex64;
use thiserror::Error;

use crate::omega::OmegaFunction;
use crate::selfinv::{selfinv_to_omega, BridgeError, SelfInversivePoly};
use crate::zeros::ZeroSet;

#[derive(Debug, Error)]
pub enum InterpError {
    #[error("need at least one node")]
    Empty,
    #[error("nodes must be strictly inside (-1,1): node {index} is {x}")]
    NodeOutside { index: usize, x: f64 },
    #[error("duplicate nodes at x = {x}")]
    DuplicateNodes { x: f64 },
    #[error("x = {x} outside [-1,1]")]
    DomainX { x: f64 },
    #[error(transparent)]
    Bridge(#[from] BridgeError),
}

/// Cardinal basis over `n` distinct nodes in `(-1,1)`; spans the
/// degree-bound-`(n-1)` space.
#[derive(Debug, Clone)]
pub struct LagrangeBasis {
    theta: Vec<f64>,
    x: Vec<f64>,
    /// `prod_{l != k} (z_k - z_l)` per node.
    denom: Vec<Complex64>,
    /// Cached self-inversive form of each scaled Lagrange polynomial.
    polys: Vec<SelfInversivePoly>,
}

impl LagrangeBasis {
    /// Basis at the zeros of an orthogonal family member.
    pub fn at_zeros(zeros: &ZeroSet) -> Result<LagrangeBasis, InterpError> {
        Self::from_nodes(&zeros.x)
    }

    /// Basis at arbitrary distinct nodes in `(-1,1)`.
    pub fn from_nodes(x: &[f64]) -> Result<LagrangeBasis, InterpError> {
        if x.is_empty() {
            return Err(InterpError::Empty);
        }
        for (i, &xi) in x.iter().enumerate() {
            if !(xi > -1.0 && xi < 1.0) {
                return Err(InterpError::NodeOutside { index: i, x: xi });
            }
        }
        let mut sorted = x.to_vec();
        sorted.sort_by(f64::total_cmp);
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(InterpError::DuplicateNodes { x: pair[0] });
            }
        }
        let theta: Vec<f64> = x.iter().map(|&xi| 2.0 * xi.acos()).collect();
        let z: Vec<Complex64> = theta
            .iter()
            .map(|&t| Complex64::from_polar(1.0, t))
            .collect();
        let n = x.len();
        let mut denom = Vec::with_capacity(n);
        let mut polys = Vec::with_capacity(n);
        for k in 0..n {
            let mut d = Complex64::new(1.0, 0.0);
            // node polynomial prod_{l != k} (z - z_l), ascending coefficients
            let mut coeffs = vec![Complex64::new(1.0, 0.0)];
            for l in 0..n {
                if l == k {
                    continue;
                }
                d *= z[k] - z[l];
                let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
                for (j, &c) in coeffs.iter().enumerate() {
                    next[j + 1] += c;
                    next[j] -= c * z[l];
                }
                coeffs = next;
            }
            let phase = Complex64::from_polar(1.0, (n as f64 - 1.0) * theta[k] / 2.0);
            let scale = phase / d;
            for c in &mut coeffs {
                *c *= scale;
            }
            polys.push(SelfInversivePoly::new(coeffs)?);
            denom.push(d);
        }
        Ok(LagrangeBasis {
            theta,
            x: x.to_vec(),
            denom,
            polys,
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.x
    }

    /// Cached self-inversive form of the `k`-th cardinal function.
    pub fn poly(&self, k: usize) -> &SelfInversivePoly {
        &self.polys[k]
    }

    /// Evaluate the `k`-th cardinal function at `x` via the circle product
    /// form, sweeping factors in ascending `|z - z_l|` to limit cancellation.
    pub fn eval(&self, k: usize, x: f64) -> Result<f64, InterpError> {
        if !(-1.0..=1.0).contains(&x) {
            return Err(InterpError::DomainX { x });
        }
        Ok(self.eval_theta(k, 2.0 * x.acos()))
    }

    /// Same, from the angle `theta = 2 acos(x)`.
    pub fn eval_theta(&self, k: usize, theta: f64) -> f64 {
        let n = self.x.len();
        let z = Complex64::from_polar(1.0, theta);
        let mut factors: Vec<Complex64> = Vec::with_capacity(n - 1);
        for l in 0..n {
            if l != k {
                factors.push(z - Complex64::from_polar(1.0, self.theta[l]));
            }
        }
        factors.sort_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()));
        let mut prod = Complex64::new(1.0, 0.0);
        for f in factors {
            prod *= f;
        }
        let phase = Complex64::from_polar(1.0, (n as f64 - 1.0) * (self.theta[k] - theta) / 2.0);
        let v = phase * prod / self.denom[k];
        debug_assert!(v.im.abs() <= 1e-11 * v.norm().max(1.0));
        v.re
    }
}

/// The unique degree-bound-`m` interpolant through `m+1` pairs `(x_j, y_j)`
/// with distinct nodes strictly inside `(-1,1)`: the weighted sum of the
/// scaled Lagrange self-inversive polynomials, mapped back through the
/// bridge.
pub fn interpolate(points: &[(f64, f64)]) -> Result<OmegaFunction, InterpError> {
    if points.is_empty() {
        return Err(InterpError::Empty);
    }
    let xs: Vec<f64> = points.iter().map(|&(x, _)| x).collect();
    let basis = LagrangeBasis::from_nodes(&xs)?;
    let m = points.len() - 1;
    let mut sum = basis.poly(0).scale(points[0].1);
    for (k, &(_, y)) in points.iter().enumerate().skip(1) {
        sum = sum.add(&basis.poly(k).scale(y));
    }
    debug_assert_eq!(sum.degree(), m);
    Ok(selfinv_to_omega(&sum)?)
}
