//! Zero finding for orthogonal-family members and interlacing checks.
//!
//! An order-`m` member has exactly `m` distinct zeros in `(-1,1)`. The search
//! runs in `theta` (zeros clustered near `x = +-1` stay well separated
//! there): sign changes are bracketed on a uniform grid of `(0, 2*pi)` and
//! refined by bisection with safeguarded secant steps.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::omega::OmegaFunction;

#[derive(Debug, Error)]
pub enum ZeroError {
    #[error(
        "found {found} sign changes, expected {expected} (after {escalations} grid escalations)"
    )]
    CountMismatch {
        expected: usize,
        found: usize,
        escalations: usize,
    },
    #[error("function has degree bound 0: no zero structure")]
    DegreeZero,
}

/// The zeros of an order-`m` family member: strictly increasing `x` values in
/// `(-1,1)`, the matching angles `theta = 2 acos(x)` (decreasing), and the
/// residuals `|W_m(x_k)|`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZeroSet {
    pub m: usize,
    pub x: Vec<f64>,
    pub theta: Vec<f64>,
    pub residuals: Vec<f64>,
}

impl ZeroSet {
    /// Largest residual relative to the grid-sampled scale of the function.
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0_f64, |a, &b| a.max(b))
    }

    /// CSV export `k,x,theta,residual` (1-based `k`, ascending in `x`).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,x,theta,residual\n");
        for (i, ((&x, &theta), &r)) in self
            .x
            .iter()
            .zip(&self.theta)
            .zip(&self.residuals)
            .enumerate()
        {
            out.push_str(&format!("{},{:.14e},{:.14e},{:.14e}\n", i + 1, x, theta, r));
        }
        out
    }
}

/// Find all `m` zeros of an exact-degree-`m` orthogonal family member.
///
/// The grid starts at `20*m + 40` points and doubles (up to 6 times) until
/// exactly `m` sign changes are bracketed; each bracket is then refined to
/// `|delta theta| <= 1e-14`.
pub fn find_zeros(w: &OmegaFunction) -> Result<ZeroSet, ZeroError> {
    let m = w.degree_bound();
    if m == 0 {
        return Err(ZeroError::DegreeZero);
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut points = 20 * m + 40;
    let mut escalations = 0;
    loop {
        let mut brackets = Vec::new();
        let mut prev_t = 0.0;
        let mut prev_v = 0.0_f64;
        let mut have_prev = false;
        for i in 0..points {
            let t = two_pi * (i as f64 + 0.5) / points as f64;
            let v = w.eval_theta(t);
            if have_prev && prev_v != 0.0 && v != 0.0 && prev_v.signum() != v.signum() {
                brackets.push((prev_t, t));
            }
            if v != 0.0 {
                prev_t = t;
                prev_v = v;
                have_prev = true;
            }
        }
        if brackets.len() == m {
            let mut theta: Vec<f64> = brackets.iter().map(|&(a, b)| refine(w, a, b)).collect();
            // theta descending <-> x ascending
            theta.sort_by(|a, b| b.total_cmp(a));
            let x: Vec<f64> = theta.iter().map(|&t| (t / 2.0).cos()).collect();
            let residuals: Vec<f64> = theta.iter().map(|&t| w.eval_theta(t).abs()).collect();
            return Ok(ZeroSet {
                m,
                x,
                theta,
                residuals,
            });
        }
        if escalations >= 6 {
            return Err(ZeroError::CountMismatch {
                expected: m,
                found: brackets.len(),
                escalations,
            });
        }
        points *= 2;
        escalations += 1;
    }
}

/// Bisection with safeguarded secant acceleration on a sign-change bracket.
/// Alternating a bisection step in guarantees the bracket halves every other
/// iteration regardless of how the secant behaves.
fn refine(w: &OmegaFunction, mut a: f64, mut b: f64) -> f64 {
    let mut fa = w.eval_theta(a);
    let mut fb = w.eval_theta(b);
    debug_assert!(fa.signum() != fb.signum());
    for iter in 0..200 {
        if (b - a).abs() <= 1e-14 {
            break;
        }
        let mid = 0.5 * (a + b);
        let t = if iter % 2 == 0 && fb != fa {
            let sec = b - fb * (b - a) / (fb - fa);
            if sec > a && sec < b {
                sec
            } else {
                mid
            }
        } else {
            mid
        };
        let ft = w.eval_theta(t);
        if ft == 0.0 {
            return t;
        }
        if ft.signum() == fa.signum() {
            a = t;
            fa = ft;
        } else {
            b = t;
            fb = ft;
        }
    }
    if fa.abs() < fb.abs() {
        a
    } else {
        b
    }
}

/// Strict interlacing: between consecutive zeros of the order-`(m+1)` set lies
/// exactly one zero of the order-`m` set, and the outer zeros of the larger
/// set bracket all of the smaller set's.
pub fn check_interlacing(a: &ZeroSet, b: &ZeroSet) -> bool {
    if b.m != a.m + 1 || a.x.len() != a.m || b.x.len() != b.m {
        return false;
    }
    for k in 0..a.m {
        if !(b.x[k] < a.x[k] && a.x[k] < b.x[k + 1]) {
            return false;
        }
    }
    true
}
