//! Self-inversive (conjugate-reciprocal) polynomials and their bijection with
//! the `B0 + sqrt(1-x^2)*B1` functions.
//!
//! A polynomial `Q` of degree `m` is self-inversive here when
//! `z^m conj(Q(1/conj(z))) = Q(z)`, i.e. `k_j = conj(k_{m-j})`. Writing
//! `x = cos(theta/2)`, every such `Q` corresponds to exactly one function `f`
//! of degree bound `m` through `e^{-i m theta/2} Q(e^{i theta}) = f(x)`,
//! and the map is computed through Chebyshev T/U expansions of the two
//! polynomial parts.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cheb;
use crate::omega::OmegaFunction;

#[derive(Debug, Error)]
pub enum BridgeError {
    #[error("coefficient array length {len} does not match degree {m}")]
    BadLength { m: usize, len: usize },
    #[error(
        "conjugate-reciprocal symmetry violated at index {index}: |k_j - conj(k_(m-j))| = {residual:e} exceeds {tol:e} (relative)"
    )]
    SymmetryViolation {
        index: usize,
        residual: f64,
        tol: f64,
    },
    #[error("divisor has zero leading self-inversive coefficient (not of exact degree)")]
    ZeroLeadingCoeff,
    #[error("dividend degree bound {e} exceeds the class bound {class} for divisor order {n}")]
    DividendTooLarge { e: usize, class: usize, n: usize },
    #[error("degree bounds {a} and {b} are parity-incompatible")]
    ParityMismatch { a: usize, b: usize },
    #[error("divisor must have order >= 2, got {n}")]
    DivisorTooSmall { n: usize },
}

/// Self-inversive polynomial `Q(z) = k_0 + k_1 z + ... + k_m z^m` with
/// `k_j = conj(k_{m-j})`.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfInversivePoly {
    m: usize,
    k: Vec<Complex64>,
}

impl SelfInversivePoly {
    /// Validating constructor; the symmetry must hold within `1e-13` relative
    /// to the coefficient scale.
    pub fn new(k: Vec<Complex64>) -> Result<SelfInversivePoly, BridgeError> {
        if k.is_empty() {
            return Err(BridgeError::BadLength { m: 0, len: 0 });
        }
        let m = k.len() - 1;
        let scale = k
            .iter()
            .map(|c| c.norm())
            .fold(0.0_f64, f64::max)
            .max(1e-300);
        const TOL: f64 = 1e-13;
        for j in 0..=m {
            let residual = (k[j] - k[m - j].conj()).norm();
            if residual > TOL * scale {
                return Err(BridgeError::SymmetryViolation {
                    index: j,
                    residual,
                    tol: TOL,
                });
            }
        }
        // symmetrize so the invariant holds exactly
        let mut sym = k.clone();
        for j in 0..=m {
            sym[j] = (k[j] + k[m - j].conj()) * 0.5;
        }
        Ok(SelfInversivePoly { m, k: sym })
    }

    pub(crate) fn from_parts(k: Vec<Complex64>) -> SelfInversivePoly {
        debug_assert!(!k.is_empty());
        SelfInversivePoly { m: k.len() - 1, k }
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.k
    }

    /// Evaluate `Q(z)` by Horner.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.k
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `e^{-i m theta / 2} Q(e^{i theta})`, real for self-inversive `Q`.
    pub fn eval_on_circle(&self, theta: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, theta);
        let phase = Complex64::from_polar(1.0, -(self.m as f64) * theta / 2.0);
        phase * self.eval(z)
    }

    /// The image of the same function re-embedded in degree bound `m + 2s`:
    /// multiply by `z^s` and pad the array to the larger degree
    /// (`s` zeros on each end keeps the conjugate-reciprocal symmetry).
    pub fn lift_by(&self, s: usize) -> SelfInversivePoly {
        let mut k = vec![Complex64::new(0.0, 0.0); self.m + 2 * s + 1];
        k[s..s + self.m + 1].copy_from_slice(&self.k);
        SelfInversivePoly {
            m: self.m + 2 * s,
            k,
        }
    }

    /// Product of two self-inversive polynomials (self-inversive of the sum
    /// degree); on the function side this is the product of the functions.
    pub fn multiply(&self, other: &SelfInversivePoly) -> SelfInversivePoly {
        let mut k = vec![Complex64::new(0.0, 0.0); self.m + other.m + 1];
        for (i, &a) in self.k.iter().enumerate() {
            for (j, &b) in other.k.iter().enumerate() {
                k[i + j] += a * b;
            }
        }
        SelfInversivePoly {
            m: self.m + other.m,
            k,
        }
    }

    pub fn scale(&self, c: f64) -> SelfInversivePoly {
        SelfInversivePoly {
            m: self.m,
            k: self.k.iter().map(|&v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &SelfInversivePoly) -> SelfInversivePoly {
        assert_eq!(
            self.m, other.m,
            "sum of self-inversive polynomials needs equal degrees"
        );
        let mut k = self.k.clone();
        for (j, &v) in other.k.iter().enumerate() {
            k[j] += v;
        }
        SelfInversivePoly { m: self.m, k }
    }
}

/// Serialized form `{"m": .., "re": [..], "im": [..]}`.
#[derive(Serialize, Deserialize)]
struct PolyWire {
    m: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for SelfInversivePoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyWire {
            m: self.m,
            re: self.k.iter().map(|c| c.re).collect(),
            im: self.k.iter().map(|c| c.im).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SelfInversivePoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = PolyWire::deserialize(d)?;
        if w.re.len() != w.m + 1 || w.im.len() != w.m + 1 {
            return Err(serde::de::Error::custom(
                "coefficient arrays must have length m+1",
            ));
        }
        let k: Vec<Complex64> =
            w.re.iter()
                .zip(&w.im)
                .map(|(&re, &im)| Complex64::new(re, im))
                .collect();
        SelfInversivePoly::new(k).map_err(serde::de::Error::custom)
    }
}

/// Map a function of degree bound `m` to its self-inversive polynomial.
///
/// The T/U expansions of `B0` and `B1` are read off into the coefficients
/// `c_j + i d_j` with `c_j = c_{m-j}`, `d_j = -d_{m-j}`.
pub fn omega_to_selfinv(f: &OmegaFunction) -> SelfInversivePoly {
    let m = f.degree_bound();
    let t = cheb::monomial_to_t(f.b0());
    let u = if f.b1().is_empty() {
        Vec::new()
    } else {
        cheb::monomial_to_u(f.b1())
    };
    let mut c = vec![0.0; m + 1];
    let mut d = vec![0.0; m + 1];
    if m % 2 == 0 {
        let half = m / 2;
        // B0 = sum e_j T_{2j}, B1 = sum g_j U_{2j-1}
        c[half] = t[0];
        for j in 1..=half {
            let e = t[2 * j] / 2.0;
            c[half - j] = e;
            c[half + j] = e;
            let g = u.get(2 * j - 1).copied().unwrap_or(0.0) / 2.0;
            d[half - j] = g;
            d[half + j] = -g;
        }
    } else {
        let half = m.div_ceil(2); // m = 2*half - 1
                                  // B0 = sum e_j T_{2j+1}, B1 = sum g_j U_{2j}
        for j in 0..half {
            let e = t[2 * j + 1] / 2.0;
            c[half - 1 - j] = e;
            c[half + j] = e;
            let g = u.get(2 * j).copied().unwrap_or(0.0) / 2.0;
            d[half - 1 - j] = g;
            d[half + j] = -g;
        }
    }
    let k: Vec<Complex64> = c
        .iter()
        .zip(&d)
        .map(|(&re, &im)| Complex64::new(re, im))
        .collect();
    SelfInversivePoly { m, k }
}

/// Inverse of [`omega_to_selfinv`]; errors if the symmetry invariant is
/// violated beyond `1e-13` relative.
pub fn selfinv_to_omega(q: &SelfInversivePoly) -> Result<OmegaFunction, BridgeError> {
    // revalidate: q may have been constructed coefficientwise
    let q = SelfInversivePoly::new(q.k.clone())?;
    let m = q.m;
    let c: Vec<f64> = q.k.iter().map(|v| v.re).collect();
    let d: Vec<f64> = q.k.iter().map(|v| v.im).collect();
    let (b0, b1);
    if m % 2 == 0 {
        let half = m / 2;
        let mut t = vec![0.0; m + 1];
        t[0] = c[half];
        let mut u = vec![0.0; m.max(1)];
        for j in 1..=half {
            t[2 * j] = c[half - j] + c[half + j];
            u[2 * j - 1] = d[half - j] - d[half + j];
        }
        b0 = cheb::t_to_monomial(&t);
        b1 = if m == 0 {
            Vec::new()
        } else {
            cheb::u_to_monomial(&u[..m])
        };
    } else {
        let half = m.div_ceil(2);
        let mut t = vec![0.0; m + 1];
        let mut u = vec![0.0; m];
        for j in 0..half {
            t[2 * j + 1] = c[half - 1 - j] + c[half + j];
            u[2 * j] = d[half - 1 - j] - d[half + j];
        }
        b0 = cheb::t_to_monomial(&t);
        b1 = cheb::u_to_monomial(&u);
    }
    // the parity pattern is exact by construction of the T/U arrays
    let mut b0 = b0;
    let mut b1 = b1;
    for (j, v) in b0.iter_mut().enumerate() {
        if j % 2 != m % 2 {
            *v = 0.0;
        }
    }
    for (j, v) in b1.iter_mut().enumerate() {
        if m >= 1 && j % 2 != (m - 1) % 2 {
            *v = 0.0;
        }
    }
    Ok(OmegaFunction::from_parts(m, b0, b1))
}

/// Product of two functions, routed through the self-inversive images.
pub fn multiply(f: &OmegaFunction, g: &OmegaFunction) -> Result<OmegaFunction, BridgeError> {
    selfinv_to_omega(&omega_to_selfinv(f).multiply(&omega_to_selfinv(g)))
}

/// Division with remainder by an orthogonal-family member of exact degree.
///
/// For a divisor of even order `n = 2m` and `e` of degree bound `<= 4m-1`
/// the result is `(f, g)` with `f, g` of degree bound `2m-1`; for odd order
/// `n = 2m+1` and `e` of bound `<= 4m`, `f` has bound `2m-1`, `g` has bound
/// `2m`; in both cases `e = f*w + g`.
///
/// Computed in the `z`-domain by the forward coefficient recursion
/// `q_j = [p_j - sum q_l k_{j-l}] / k_0`, `r_j = p_{m+j} - sum q_l k_{m+j-l}`,
/// with the upper halves of `Q` and `R` supplied by conjugate symmetry.
pub fn divide(
    e: &OmegaFunction,
    w: &OmegaFunction,
) -> Result<(OmegaFunction, OmegaFunction), BridgeError> {
    let n = w.degree_bound();
    if n < 2 {
        return Err(BridgeError::DivisorTooSmall { n });
    }
    let even = n % 2 == 0;
    // even n = 2m: class bound 4m-1 = 2n-1, f and g of bound 2m-1
    // odd  n = 2m+1: class bound 4m = 2n-2, f of bound 2m-1, g of bound 2m
    let m = if even { n / 2 } else { (n - 1) / 2 };
    let class_bound = if even { 2 * n - 1 } else { 2 * n - 2 };
    if e.degree_bound() > class_bound {
        return Err(BridgeError::DividendTooLarge {
            e: e.degree_bound(),
            class: class_bound,
            n,
        });
    }
    if (class_bound - e.degree_bound()) % 2 != 0 {
        return Err(BridgeError::ParityMismatch {
            a: e.degree_bound(),
            b: class_bound,
        });
    }

    let k = omega_to_selfinv(w);
    let k0 = k.k[0];
    if k0.norm() == 0.0 {
        return Err(BridgeError::ZeroLeadingCoeff);
    }
    let p = omega_to_selfinv(e).lift_by((class_bound - e.degree_bound()) / 2);
    debug_assert_eq!(p.m, class_bound);

    let q_deg = 2 * m - 1;
    let r_deg = if even { 2 * m - 1 } else { 2 * m };
    let pc = &p.k;
    let kc = &k.k;

    // lower half of Q by forward recursion, upper half by conjugate symmetry
    let mut q = vec![Complex64::new(0.0, 0.0); q_deg + 1];
    for j in 0..m {
        let mut acc = pc[j];
        for l in 0..j {
            acc -= q[l] * kc[j - l];
        }
        q[j] = acc / k0;
    }
    for j in m..=q_deg {
        q[j] = q[q_deg - j].conj();
    }

    let mut r = vec![Complex64::new(0.0, 0.0); r_deg + 1];
    let computed = if even { m } else { m + 1 };
    for (j, rj) in r.iter_mut().enumerate().take(computed) {
        let mut acc = pc[m + j];
        for (l, &ql) in q.iter().enumerate() {
            let idx = m + j;
            if idx >= l && idx - l <= n {
                acc -= ql * kc[idx - l];
            }
        }
        *rj = acc;
    }
    if !even {
        // middle coefficient of R is real; its imaginary part is rounding noise
        r[m] = Complex64::new(r[m].re, 0.0);
    }
    for j in computed..=r_deg {
        r[j] = r[r_deg - j].conj();
    }

    let f = selfinv_to_omega(&SelfInversivePoly::from_parts(q))?;
    let g = selfinv_to_omega(&SelfInversivePoly::from_parts(r))?;
    Ok((f, g))
}
