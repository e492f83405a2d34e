//! The unit-circle side of the construction.
//!
//! With `x = cos(theta/2)` the measure transports to a positive measure `mu`
//! on the circle (`-sin(theta/2) d mu = d psi`, realized here with positive
//! orientation as `d mu = (1/2) w(cos(theta/2)) d theta`). The scaled
//! self-inversive images `K_m` of the normalized family satisfy a three-term
//! recurrence in `z` and are the kernel polynomials of the orthonormal
//! polynomials of `mu`. The recurrence coefficients `alpha` form a positive
//! chain sequence; its parameter sequences and the jump-at-1 probability
//! measures `mu^(t)` yield explicit Verblunsky coefficients, verified here
//! through the Szego recurrence.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::measure::{Measure, MeasureError};
use crate::recurrence::RecurrenceTable;
use crate::selfinv::SelfInversivePoly;

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("not a positive chain sequence: forward parameter g_{index} = {value} leaves (0,1)")]
    NotChainForward { index: usize, value: f64 },
    #[error("not a positive chain sequence: backward iteration hits h_{index} = {value} <= 0 at truncation {truncation}")]
    NotChainBackward {
        index: usize,
        value: f64,
        truncation: usize,
    },
    #[error("chain sequence entries must be positive: alpha[{index}] = {value}")]
    NonPositiveEntry { index: usize, value: f64 },
    #[error("need at least 4 entries, got {0}")]
    TooShort(usize),
}

#[derive(Debug, Error)]
pub enum OpucError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Integration(#[from] MeasureError),
    #[error("jump parameter t = {0} must lie in [0,1)")]
    BadJump(f64),
    #[error("minimal parameter m_{index} = {value} left (0,1): precision failure")]
    ParameterEscaped { index: usize, value: f64 },
    #[error(
        "kernel recurrence validation failed at order {order}: |scaled kernel - 2^m W_m| = {residual:e} at theta = {theta}"
    )]
    KernelMismatch {
        order: usize,
        residual: f64,
        theta: f64,
    },
    #[error("table depth {depth} is too small, need {need}")]
    TableTooShallow { depth: usize, need: usize },
    #[error(
        "first-moment identity violated: imaginary residual {residual:e} (measure inconsistent with its recurrence table)"
    )]
    MomentIdentity { residual: f64 },
}

/// Chain-sequence data for `{alpha_{m+1}}_{m>=1}`: the entries, the minimal
/// parameter sequence (slot 0 fixed at 0) and the maximal parameter sequence,
/// aligned so that `minimal[k]` and `maximal[k]` occupy the same slot and
/// `alpha[k-1] = (1 - g_{k-1}) g_k` for either parameter choice.
#[derive(Debug, Clone, Serialize)]
pub struct ChainSeqData {
    /// Chain entries `a_1, a_2, ...` (for the family: `alpha_2, alpha_3, ...`).
    pub alpha: Vec<f64>,
    /// Minimal parameters `[0, m_1, m_2, ...]`, length `alpha.len() + 1`.
    pub minimal: Vec<f64>,
    /// Maximal parameters, same length, slot-aligned with `minimal` (slot 0
    /// is the largest admissible starting parameter).
    pub maximal: Vec<f64>,
    /// Truncation depth at which the backward iteration stopped.
    pub trunc_depth: usize,
    /// Difference between the two last slot-0 estimates; the maximal
    /// parameters are accurate to roughly this (boundary chains with entries
    /// at 1/4 converge only algebraically in the truncation depth).
    pub head_uncertainty: f64,
    /// Whether the entries were extended past the supplied data by the last
    /// value to feed the backward iteration.
    pub tail_extended: bool,
}

impl ChainSeqData {
    /// Number of chain entries.
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// The slot-0 maximal parameter (for the family chain `{alpha_{m+1}}`
    /// this is the `M_1` entering the jump construction).
    pub fn first_maximal(&self) -> f64 {
        self.maximal[0]
    }

    /// Maximal parameter in slot `j` (`alpha[k-1] = (1 - g_{k-1}) g_k`).
    pub fn maximal_slot(&self, j: usize) -> f64 {
        self.maximal[j]
    }

    pub fn minimal_slot(&self, j: usize) -> f64 {
        self.minimal[j]
    }
}

/// Compute minimal and maximal parameter sequences of a positive chain
/// sequence.
///
/// Minimal: forward recursion `g_0 = 0`, `g_k = a_k / (1 - g_{k-1})`.
/// Maximal: backward truncation `h_T = 1`, `h_{k-1} = 1 - a_k / h_k`,
/// with `T` doubling from `depth + 20` until successive estimates of the
/// slot-0 parameter differ by less than `tol` or `T` exceeds `2^16` (the
/// iteration then stops with the last estimate and records the achieved
/// difference in `head_uncertainty`); entries beyond the supplied data are
/// extended by the last value.
pub fn chain_parameters(alpha: &[f64], depth: usize, tol: f64) -> Result<ChainSeqData, ChainError> {
    if alpha.len() < 4 && depth < 4 {
        return Err(ChainError::TooShort(alpha.len()));
    }
    let depth = depth.max(alpha.len());
    for (i, &a) in alpha.iter().enumerate() {
        if !(a > 0.0) {
            return Err(ChainError::NonPositiveEntry { index: i, value: a });
        }
    }
    let entry = |k: usize| -> f64 {
        // a_k, 1-based; tail extension by the last value
        alpha[(k - 1).min(alpha.len() - 1)]
    };
    let tail_extended = depth > alpha.len();

    // minimal parameters over the stored depth
    let mut minimal = vec![0.0; depth + 1];
    for k in 1..=depth {
        let g = entry(k) / (1.0 - minimal[k - 1]);
        if !(g > 0.0 && g < 1.0) {
            return Err(ChainError::NotChainForward { index: k, value: g });
        }
        minimal[k] = g;
    }

    // maximal parameters by backward truncation
    let mut truncation = depth + 20;
    let mut prev_head: Option<f64> = None;
    loop {
        let mut h = vec![0.0; truncation + 1];
        h[truncation] = 1.0;
        let mut ok = true;
        let mut bad = (0usize, 0.0f64);
        for k in (1..=truncation).rev() {
            let hk = 1.0 - entry(k) / h[k];
            if !(hk > 0.0) {
                ok = false;
                bad = (k - 1, hk);
                break;
            }
            h[k - 1] = hk;
        }
        if !ok {
            return Err(ChainError::NotChainBackward {
                index: bad.0,
                value: bad.1,
                truncation,
            });
        }
        if let Some(prev) = prev_head {
            let delta = (h[0] - prev).abs();
            if delta < tol || truncation > 1 << 16 {
                return Ok(ChainSeqData {
                    alpha: (1..=depth).map(entry).collect(),
                    minimal,
                    maximal: h[..=depth].to_vec(),
                    trunc_depth: truncation,
                    head_uncertainty: delta,
                    tail_extended,
                });
            }
        }
        prev_head = Some(h[0]);
        truncation *= 2;
    }
}

/// Chain parameters of the family's `{alpha_{m+1}}` with the maximal sequence
/// anchored by the measure itself.
///
/// Backward truncation of a finite table cannot pin the slot-0 maximal
/// parameter tightly (the tail extension is a declared convention, and
/// chains approaching 1/4 converge only algebraically in the truncation
/// depth). The first transport moment gives it directly:
/// `M_1 = Re[(1 - i beta_1)(1 - conj(<z>))] / 2` with
/// `<z> = int z d mu / int d mu` over the transported circle measure; the
/// remaining slots follow from the forward identity
/// `g_k = a_k / (1 - g_{k-1})`, which the maximal sequence satisfies exactly.
pub fn chain_for_measure(
    table: &RecurrenceTable,
    psi: &Measure,
) -> Result<ChainSeqData, OpucError> {
    let depth = table.depth() - 1;
    let alpha: Vec<f64> = (2..=table.depth()).map(|m| table.alpha(m)).collect();
    for (i, &a) in alpha.iter().enumerate() {
        if !(a > 0.0) {
            return Err(ChainError::NonPositiveEntry { index: i, value: a }.into());
        }
    }
    let mut minimal = vec![0.0; depth + 1];
    for k in 1..=depth {
        let g = alpha[k - 1] / (1.0 - minimal[k - 1]);
        if !(g > 0.0 && g < 1.0) {
            return Err(ChainError::NotChainForward { index: k, value: g }.into());
        }
        minimal[k] = g;
    }

    let mass = psi.circle_mass()?;
    let zbar = psi.integrate_circle(|_, z| z)? / mass;
    let b1 = table.beta(1);
    let m1c = Complex64::new(1.0, -b1) * (Complex64::new(1.0, 0.0) - zbar.conj()) * 0.5;
    let residual = m1c.im.abs();
    if residual > 1e-8 {
        return Err(OpucError::MomentIdentity { residual });
    }
    let mut maximal = vec![0.0; depth + 1];
    maximal[0] = m1c.re;
    if !(maximal[0] > 0.0 && maximal[0] < 1.0) {
        return Err(OpucError::ParameterEscaped {
            index: 0,
            value: maximal[0],
        });
    }
    for k in 1..=depth {
        let g = alpha[k - 1] / (1.0 - maximal[k - 1]);
        if !(g > 0.0 && g < 1.0) {
            return Err(OpucError::ParameterEscaped { index: k, value: g });
        }
        maximal[k] = g;
    }
    Ok(ChainSeqData {
        alpha,
        minimal,
        maximal,
        trunc_depth: 0,
        head_uncertainty: residual.max(psi.settings().tolerance),
        tail_extended: false,
    })
}

/// Verblunsky coefficients of the jump-`t` probability measure: the shifted
/// chain `alpha~_1 = (1-t) M_1`, its minimal parameters, the unimodular
/// phases `tau_m`, and `a_{m-1} = (1/tau_{m-1}) (1 - 2 m_m - i beta_m)/(1 - i beta_m)`.
#[derive(Debug, Clone)]
pub struct VerblunskySeq {
    pub t: f64,
    /// Minimal parameters of the shifted chain: `frak_m[0] = 0`,
    /// `frak_m[m]` in `(0,1)`.
    pub frak_m: Vec<f64>,
    /// Unimodular phase chain, `tau[0] = 1`.
    pub tau: Vec<Complex64>,
    /// Verblunsky coefficients `a[m]` = `a_m^{(t)}`, `|a_m| < 1`.
    pub a: Vec<Complex64>,
}

impl VerblunskySeq {
    /// Wire format `{"t": .., "a": [{"re": .., "im": ..}, ..]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "t": self.t,
            "a": self.a.iter().map(|c| serde_json::json!({"re": c.re, "im": c.im})).collect::<Vec<_>>(),
        })
    }
}

/// Build the Verblunsky sequence from chain data and the `beta` coefficients
/// (`beta[m-1]` = `beta_m`). The usable length is bounded by both inputs.
pub fn verblunsky(
    chain: &ChainSeqData,
    beta_hat: &[f64],
    t: f64,
) -> Result<VerblunskySeq, OpucError> {
    if !(0.0..1.0).contains(&t) {
        return Err(OpucError::BadJump(t));
    }
    // frak_m[m+1] consumes chain entries through index m-1, so the usable
    // length is one more than the chain length
    let n = beta_hat.len().min(chain.alpha.len() + 1);
    let m1 = chain.first_maximal();
    let mut frak_m = vec![0.0; n + 1];
    if n >= 1 {
        frak_m[1] = (1.0 - t) * m1;
        if !(frak_m[1] > 0.0 && frak_m[1] < 1.0) {
            return Err(OpucError::ParameterEscaped {
                index: 1,
                value: frak_m[1],
            });
        }
    }
    for m in 1..n {
        // alpha~_{m+1} = alpha_{m+1} = chain entry a_m
        let next = chain.alpha[m - 1] / (1.0 - frak_m[m]);
        if !(next > 0.0 && next < 1.0) {
            return Err(OpucError::ParameterEscaped {
                index: m + 1,
                value: next,
            });
        }
        frak_m[m + 1] = next;
    }
    let mut tau = Vec::with_capacity(n + 1);
    tau.push(Complex64::new(1.0, 0.0));
    for &b in beta_hat.iter().take(n) {
        let factor = Complex64::new(1.0, -b) / Complex64::new(1.0, b);
        tau.push(factor * tau.last().unwrap());
    }
    let mut a = Vec::with_capacity(n);
    for m in 1..=n {
        let b = beta_hat[m - 1];
        let num = Complex64::new(1.0 - 2.0 * frak_m[m], -b);
        let den = Complex64::new(1.0, -b);
        a.push(num / den / tau[m - 1]);
    }
    Ok(VerblunskySeq { t, frak_m, tau, a })
}

/// Kernel polynomials `K_m` by the three-term recurrence
/// `K_{m+1}(z) = [(1+i beta_{m+1}) z + (1-i beta_{m+1})] K_m(z) - 4 alpha_{m+1} z K_{m-1}(z)`,
/// validated against the independent definition
/// `e^{-i m theta/2} K_m(e^{i theta}) = 2^m W_m(cos(theta/2))` at 50
/// deterministic sample angles (tolerance `1e-10` relative to the `2^m`
/// scale); a mismatch aborts, signalling a transcription error.
pub fn khat_from_recurrence(
    table: &RecurrenceTable,
    n: usize,
) -> Result<Vec<SelfInversivePoly>, OpucError> {
    if table.depth() < n {
        return Err(OpucError::TableTooShallow {
            depth: table.depth(),
            need: n,
        });
    }
    let mut polys: Vec<Vec<Complex64>> = Vec::with_capacity(n + 1);
    polys.push(vec![Complex64::new(1.0, 0.0)]);
    if n >= 1 {
        let b1 = table.beta(1);
        polys.push(vec![Complex64::new(1.0, -b1), Complex64::new(1.0, b1)]);
    }
    for m in 1..n {
        let b = table.beta(m + 1);
        let alpha = table.alpha(m + 1);
        let lead = Complex64::new(1.0, b);
        let trail = Complex64::new(1.0, -b);
        let km = &polys[m];
        let kp = &polys[m - 1];
        let mut next = vec![Complex64::new(0.0, 0.0); m + 2];
        for (j, &c) in km.iter().enumerate() {
            next[j + 1] += lead * c;
            next[j] += trail * c;
        }
        for (j, &c) in kp.iter().enumerate() {
            next[j + 1] -= 4.0 * alpha * c;
        }
        polys.push(next);
    }
    let polys: Vec<SelfInversivePoly> = polys
        .into_iter()
        .map(|k| SelfInversivePoly::new(k).expect("kernel recurrence preserves symmetry"))
        .collect();

    // validate against the scaled family
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    for (m, k) in polys.iter().enumerate() {
        let scale = 2f64.powi(m as i32);
        for _ in 0..50 {
            let theta = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
            let lhs = k.eval_on_circle(theta);
            let rhs = scale * table.w(m).eval_theta(theta);
            let residual = (lhs.re - rhs).abs().max(lhs.im.abs());
            if residual > 1e-10 * scale {
                return Err(OpucError::KernelMismatch {
                    order: m,
                    residual,
                    theta,
                });
            }
        }
    }
    Ok(polys)
}

/// Moment residuals `|int z^{-m+s} K_m(z) (1-z) d mu(z)|`, `s = 0..m-1`,
/// normalized by `int |K_m(z)(1-z)| d mu`.
pub fn khat_moment_residuals(
    khat: &SelfInversivePoly,
    psi: &Measure,
) -> Result<Vec<f64>, OpucError> {
    let m = khat.degree();
    let scale = psi
        .integrate_circle(|_, z| {
            Complex64::new((khat.eval(z) * (Complex64::new(1.0, 0.0) - z)).norm(), 0.0)
        })?
        .re;
    let mut out = Vec::with_capacity(m);
    for s in 0..m {
        let p = s as f64 - m as f64;
        let v = psi.integrate_circle(|theta, z| {
            let phase = Complex64::from_polar(1.0, p * theta);
            phase * khat.eval(z) * (Complex64::new(1.0, 0.0) - z)
        })?;
        out.push(v.norm() / scale.max(1e-300));
    }
    Ok(out)
}

/// Monic Szego recurrence `S_{m+1}(z) = z S_m(z) - conj(a_m) S_m*(z)` from a
/// Verblunsky sequence (ascending coefficient vectors, `S_0 = 1`).
pub fn szego_polynomials(a: &[Complex64]) -> Vec<Vec<Complex64>> {
    let mut polys = vec![vec![Complex64::new(1.0, 0.0)]];
    for (m, &am) in a.iter().enumerate() {
        let s = &polys[m];
        // reversed-conjugate: S*(z) = z^m conj(S(1/conj z))
        let star: Vec<Complex64> = s.iter().rev().map(|c| c.conj()).collect();
        let mut next = vec![Complex64::new(0.0, 0.0); m + 2];
        for (j, &c) in s.iter().enumerate() {
            next[j + 1] += c;
        }
        for (j, &c) in star.iter().enumerate() {
            next[j] -= am.conj() * c;
        }
        polys.push(next);
    }
    polys
}

fn poly_eval(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Report from the Szego verification harness.
#[derive(Debug, Clone, Serialize)]
pub struct SzegoReport {
    pub t: f64,
    pub n: usize,
    /// `max_{n<m} |<S_n, S_m>| / (|S_n| |S_m|)` against `mu^(t)`.
    pub max_orthogonality_residual: f64,
    /// `max_m | -conj(S_m(0)) - a_{m-1} |` (exact by construction).
    pub verblunsky_roundtrip: f64,
    /// Relative spread of `K_m(z) / CD_m(z)` over sample points on the circle.
    pub cd_ratio_spread: f64,
}

/// Verify a Verblunsky sequence against its defining measure: builds the
/// monic Szego polynomials, checks orthogonality under
/// `d mu^(t) = c(t) * transport + t * (point mass at z=1)`, and checks that
/// the Christoffel-Darboux kernel at 1 stays proportional to the scaled
/// kernel polynomial of the family.
pub fn szego_verify(
    seq: &VerblunskySeq,
    psi: &Measure,
    table: &RecurrenceTable,
    n: usize,
    seed: u64,
) -> Result<SzegoReport, OpucError> {
    if !psi.integrability() {
        return Err(OpucError::Integration(MeasureError::NotIntegrable));
    }
    let n = n.min(seq.a.len());
    let polys = szego_polynomials(&seq.a[..n]);
    let t = seq.t;
    let transport_mass = psi.circle_mass()?;
    let c_t = (1.0 - t) / transport_mass;
    let one = Complex64::new(1.0, 0.0);
    // <f, g> = int f conj(g) d mu^(t)
    let inner = |f: &[Complex64], g: &[Complex64]| -> Result<Complex64, OpucError> {
        let cont = psi.integrate_circle(|_, z| poly_eval(f, z) * poly_eval(g, z).conj())?;
        Ok(c_t * cont + t * poly_eval(f, one) * poly_eval(g, one).conj())
    };

    let mut verblunsky_roundtrip = 0.0_f64;
    for (m, p) in polys.iter().enumerate().skip(1) {
        let back = -p[0].conj();
        verblunsky_roundtrip = verblunsky_roundtrip.max((back - seq.a[m - 1]).norm());
    }

    let mut norms = Vec::with_capacity(n + 1);
    for p in &polys {
        norms.push(inner(p, p)?.re.sqrt());
    }
    let mut max_res = 0.0_f64;
    for m in 1..=n {
        for k in 0..m {
            let v = inner(&polys[k], &polys[m])?;
            max_res = max_res.max(v.norm() / (norms[k] * norms[m]));
        }
    }

    // CD kernel sum_{j<=m} conj(s_j(1)) s_j(z) against the order-n kernel
    let m_top = n;
    let khat = khat_from_recurrence(table, m_top)?;
    let kernel = &khat[m_top];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ratios: Vec<Complex64> = Vec::new();
    for _ in 0..20 {
        let theta = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
        let z = Complex64::from_polar(1.0, theta);
        let mut cd = Complex64::new(0.0, 0.0);
        for (p, norm) in polys.iter().zip(&norms) {
            let sj_z = poly_eval(p, z) / norm;
            let sj_1 = poly_eval(p, one) / norm;
            cd += sj_1.conj() * sj_z;
        }
        ratios.push(kernel.eval(z) / cd);
    }
    let mean = ratios.iter().sum::<Complex64>() / ratios.len() as f64;
    let spread = ratios
        .iter()
        .map(|r| (r - mean).norm())
        .fold(0.0_f64, f64::max)
        / mean.norm().max(1e-300);

    Ok(SzegoReport {
        t,
        n,
        max_orthogonality_residual: max_res,
        verblunsky_roundtrip,
        cd_ratio_spread: spread,
    })
}
