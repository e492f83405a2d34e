//! The value type for functions `B0(x) + sqrt(1-x^2) * B1(x)` on `[-1,1]`
//! and its algebra.
//!
//! A function of degree bound `m` stores `B0` as `m+1` monomial coefficients
//! and `B1` as `m` coefficients (empty for `m = 0`), with the parity
//! constraints `B0(-x) = (-1)^m B0(x)` and `B1(-x) = (-1)^(m-1) B1(x)`
//! enforced as exact zeros at the wrong-parity indices.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OmegaError {
    #[error("coefficient arrays have wrong length for degree bound {m}: b0 has {b0_len}, b1 has {b1_len}")]
    BadLength {
        m: usize,
        b0_len: usize,
        b1_len: usize,
    },
    #[error("parity violation: {which}[{index}] = {value} must be zero for degree bound {m}")]
    ParityViolation {
        which: &'static str,
        index: usize,
        value: f64,
        m: usize,
    },
    #[error("x = {x} outside [-1,1]")]
    DomainX { x: f64 },
    #[error("degree bounds {a} and {b} are parity-incompatible")]
    ParityMismatch { a: usize, b: usize },
    #[error("order-{order} basis element is not of exact degree (lead factor {lead_factor})")]
    SingularElimination { order: usize, lead_factor: f64 },
    #[error("function of degree bound {m} does not fit in the order-{n} basis")]
    BoundExceeded { m: usize, n: usize },
}

/// Element of the `(m+1)`-dimensional space of functions
/// `B0(x) + sqrt(1-x^2) * B1(x)` with the parity constraints of degree
/// bound `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaFunction {
    m: usize,
    b0: Vec<f64>,
    b1: Vec<f64>,
}

impl OmegaFunction {
    /// Validating constructor: `b0` of length `m+1`, `b1` of length `m`
    /// (ascending monomial coefficients), wrong-parity entries exactly zero.
    pub fn new(m: usize, b0: Vec<f64>, b1: Vec<f64>) -> Result<OmegaFunction, OmegaError> {
        if b0.len() != m + 1 || b1.len() != m {
            return Err(OmegaError::BadLength {
                m,
                b0_len: b0.len(),
                b1_len: b1.len(),
            });
        }
        for (j, &c) in b0.iter().enumerate() {
            if (j % 2) != (m % 2) && c != 0.0 {
                return Err(OmegaError::ParityViolation {
                    which: "b0",
                    index: j,
                    value: c,
                    m,
                });
            }
        }
        for (j, &c) in b1.iter().enumerate() {
            if m >= 1 && (j % 2) != ((m - 1) % 2) && c != 0.0 {
                return Err(OmegaError::ParityViolation {
                    which: "b1",
                    index: j,
                    value: c,
                    m,
                });
            }
        }
        Ok(OmegaFunction { m, b0, b1 })
    }

    /// Construct without checks; callers guarantee lengths and parity.
    pub(crate) fn from_parts(m: usize, b0: Vec<f64>, b1: Vec<f64>) -> OmegaFunction {
        debug_assert_eq!(b0.len(), m + 1);
        debug_assert_eq!(b1.len(), m);
        OmegaFunction { m, b0, b1 }
    }

    /// The constant function `c` (degree bound 0).
    pub fn constant(c: f64) -> OmegaFunction {
        OmegaFunction {
            m: 0,
            b0: vec![c],
            b1: Vec::new(),
        }
    }

    /// The zero element of degree bound `m`.
    pub fn zero(m: usize) -> OmegaFunction {
        OmegaFunction {
            m,
            b0: vec![0.0; m + 1],
            b1: vec![0.0; m],
        }
    }

    pub fn degree_bound(&self) -> usize {
        self.m
    }

    pub fn b0(&self) -> &[f64] {
        &self.b0
    }

    pub fn b1(&self) -> &[f64] {
        &self.b1
    }

    /// First and second leading coefficients `(a0, a1)`.
    pub fn leading(&self) -> (f64, f64) {
        let a0 = self.b0[self.m];
        let a1 = if self.m >= 1 {
            self.b1[self.m - 1]
        } else {
            0.0
        };
        (a0, a1)
    }

    /// Lead factor `a0^2 + a1^2`; the function has exact degree `m` iff
    /// this is positive.
    pub fn lead_factor(&self) -> f64 {
        let (a0, a1) = self.leading();
        a0 * a0 + a1 * a1
    }

    pub fn is_exact_degree(&self) -> bool {
        self.lead_factor() > 0.0
    }

    /// Evaluate at `x` in `[-1,1]`.
    ///
    /// Near the endpoints (`|x| > 0.99`) the half-circle factor is computed
    /// as `sin(theta/2)` with `theta = 2 acos(x)`.
    pub fn eval(&self, x: f64) -> Result<f64, OmegaError> {
        if !(-1.0..=1.0).contains(&x) {
            return Err(OmegaError::DomainX { x });
        }
        let s = if x.abs() > 0.99 {
            (x.acos()).sin()
        } else {
            (1.0 - x * x).sqrt()
        };
        Ok(self.eval_parts(x, s))
    }

    /// Evaluate from the angle `theta` in `[0, 2*pi]`, where `x = cos(theta/2)`.
    pub fn eval_theta(&self, theta: f64) -> f64 {
        let half = theta / 2.0;
        self.eval_parts(half.cos(), half.sin())
    }

    fn eval_parts(&self, x: f64, s: f64) -> f64 {
        horner(&self.b0, x) + s * horner(&self.b1, x)
    }

    /// `[gamma*x - beta*sqrt(1-x^2)] * self`, expanded in degree bound `m+1`.
    pub fn mul_linear(&self, gamma: f64, beta: f64) -> OmegaFunction {
        let m = self.m;
        let mut b0 = vec![0.0; m + 2];
        let mut b1 = vec![0.0; m + 1];
        for (k, &c) in self.b0.iter().enumerate() {
            b0[k + 1] += gamma * c;
            b1[k] -= beta * c;
        }
        // -beta*sqrt(1-x^2) * sqrt(1-x^2)*B1 = -beta*(1-x^2)*B1
        for (k, &c) in self.b1.iter().enumerate() {
            b0[k] -= beta * c;
            b0[k + 2] += beta * c;
            b1[k + 1] += gamma * c;
        }
        OmegaFunction { m: m + 1, b0, b1 }
    }

    /// `sqrt(1-x^2) * self`, an element of degree bound `m+1`.
    pub fn mul_halfcircle(&self) -> OmegaFunction {
        self.mul_linear(0.0, -1.0)
    }

    /// Re-embed into the larger parity-compatible degree bound `n >= m`.
    pub fn lift_to(&self, n: usize) -> Result<OmegaFunction, OmegaError> {
        if n < self.m || (n - self.m) % 2 != 0 {
            return Err(OmegaError::ParityMismatch { a: self.m, b: n });
        }
        let mut b0 = vec![0.0; n + 1];
        let mut b1 = vec![0.0; n];
        b0[..self.b0.len()].copy_from_slice(&self.b0);
        b1[..self.b1.len()].copy_from_slice(&self.b1);
        Ok(OmegaFunction { m: n, b0, b1 })
    }

    /// `self + c * g`, for parity-compatible degree bounds; the result has
    /// the larger bound.
    pub fn add_scaled(&self, c: f64, g: &OmegaFunction) -> Result<OmegaFunction, OmegaError> {
        if (self.m + g.m) % 2 != 0 {
            return Err(OmegaError::ParityMismatch { a: self.m, b: g.m });
        }
        let n = self.m.max(g.m);
        let mut out = self.lift_to(n)?;
        for (k, &v) in g.b0.iter().enumerate() {
            out.b0[k] += c * v;
        }
        for (k, &v) in g.b1.iter().enumerate() {
            out.b1[k] += c * v;
        }
        Ok(out)
    }

    pub fn scale(&self, c: f64) -> OmegaFunction {
        OmegaFunction {
            m: self.m,
            b0: self.b0.iter().map(|&v| c * v).collect(),
            b1: self.b1.iter().map(|&v| c * v).collect(),
        }
    }

    /// Number of sign changes on a uniform `points`-point grid of `(-1,1)`;
    /// a cheap upper-bound witness for zero counting.
    pub fn grid_sign_changes(&self, points: usize) -> usize {
        let mut changes = 0;
        let mut prev = 0.0_f64;
        for i in 0..points {
            let x = -1.0 + 2.0 * (i as f64 + 0.5) / points as f64;
            let v = self.eval_parts(x, (1.0 - x * x).max(0.0).sqrt());
            if prev != 0.0 && v != 0.0 && prev.signum() != v.signum() {
                changes += 1;
            }
            if v != 0.0 {
                prev = v;
            }
        }
        changes
    }
}

fn horner(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Leading coefficients of one order of the recurrence, together with the
/// lead factor and the cross product with the previous order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeadingData {
    /// First leading coefficient `a0`.
    pub a0: f64,
    /// Second leading coefficient `a1`.
    pub a1: f64,
    /// Lead factor `a0^2 + a1^2` of this order.
    pub lambda_m: f64,
    /// Cross product with the previous order,
    /// `a0_m*a0_{m-1} + a1_m*a1_{m-1} = gamma_m * lambda_{m-1}`
    /// (zero for order 0, where no previous order exists).
    pub lambda_m1: f64,
}

impl LeadingData {
    /// Order-0 seed `(a0, a1) = (gamma0, 0)`.
    pub fn seed(gamma0: f64) -> LeadingData {
        LeadingData {
            a0: gamma0,
            a1: 0.0,
            lambda_m: gamma0 * gamma0,
            lambda_m1: 0.0,
        }
    }
}

/// One step of the leading-coefficient recursion: applies the matrix
/// `[[gamma, beta], [-beta, gamma]]` and carries
/// `lambda_{m+1} = (gamma^2 + beta^2) lambda_m` and the cross product
/// `lambda_{m,1} = gamma * lambda_m`.
pub fn leading_step(prev: &LeadingData, gamma: f64, beta: f64) -> LeadingData {
    LeadingData {
        a0: gamma * prev.a0 + beta * prev.a1,
        a1: -beta * prev.a0 + gamma * prev.a1,
        lambda_m: (gamma * gamma + beta * beta) * prev.lambda_m,
        lambda_m1: gamma * prev.lambda_m,
    }
}

/// Expand `f` in the mixed basis
/// `{ W_n, sqrt(1-x^2) W_{n-1}, W_{n-2}, sqrt(1-x^2) W_{n-3}, ... }`
/// built from a family of exact-degree functions, by successive elimination
/// of the two leading coefficients.
///
/// Returns `c` with `f = c[0]*W_n + c[1]*sqrt(1-x^2)*W_{n-1} + c[2]*W_{n-2} + ...`.
pub fn expand_in_w_basis(
    f: &OmegaFunction,
    basis: &[OmegaFunction],
) -> Result<Vec<f64>, OmegaError> {
    let n = basis
        .len()
        .checked_sub(1)
        .expect("basis must contain at least W_0");
    if f.degree_bound() > n {
        return Err(OmegaError::BoundExceeded {
            m: f.degree_bound(),
            n,
        });
    }
    for (k, w) in basis.iter().enumerate() {
        let lf = w.lead_factor();
        if lf <= 0.0 {
            return Err(OmegaError::SingularElimination {
                order: k,
                lead_factor: lf,
            });
        }
    }
    let mut coeffs = vec![0.0; n + 1];
    let mut r = f.lift_to(n)?;
    let mut k = n;
    loop {
        if k == 0 {
            coeffs[n] = r.b0[0] / basis[0].b0[0];
            return Ok(coeffs);
        }
        // eliminate the top pair against W_k and sqrt(1-x^2) W_{k-1}:
        //   t0 = c0*a0_k - c1*a1_{k-1}
        //   t1 = c0*a1_k + c1*a0_{k-1}
        let (a0k, a1k) = basis[k].leading();
        let (a0p, a1p) = basis[k - 1].leading();
        let det = a0k * a0p + a1k * a1p;
        if det == 0.0 {
            return Err(OmegaError::SingularElimination {
                order: k,
                lead_factor: det,
            });
        }
        let t0 = r.b0[k];
        let t1 = r.b1[k - 1];
        let c0 = (t0 * a0p + t1 * a1p) / det;
        let c1 = (t1 * a0k - t0 * a1k) / det;
        coeffs[n - k] = c0;
        coeffs[n - k + 1] = c1;
        if k == 1 {
            // the pair (W_1, sqrt(1-x^2) W_0) exhausts the remaining space
            return Ok(coeffs);
        }
        r = r.add_scaled(-c0, &basis[k])?;
        r = r.add_scaled(-c1, &basis[k - 1].mul_halfcircle())?;
        // the eliminated top entries are zero up to rounding; drop them
        r = OmegaFunction::from_parts(k - 2, r.b0[..k - 1].to_vec(), r.b1[..k - 2].to_vec());
        k -= 2;
    }
}
