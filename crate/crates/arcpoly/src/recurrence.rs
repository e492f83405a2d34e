//! The normalized orthogonal family of a measure, generated order by order
//! from inner-product integrals (Stieltjes-type procedure), plus closed-form
//! oracles for the exponential-ultraspherical weight family.
//!
//! The normalized family satisfies
//!
//! ```text
//! W_0 = 1,  W_1 = x - beta_1 sqrt(1-x^2),
//! W_{m+1} = [x - beta_{m+1} sqrt(1-x^2)] W_m - alpha_{m+1} W_{m-1},
//! ```
//!
//! with `rho_m = int W_m^2 sqrt(1-x^2) dpsi`,
//! `beta_{m+1} = (1/rho_m) int x W_m^2 dpsi` (note: plain `dpsi` there), and
//! `alpha_{m+1} = (1+beta_{m+1}^2)/(1+beta_m^2) * rho_m/rho_{m-1}`.

use num_complex::Complex64;
use thiserror::Error;

use crate::measure::{Measure, MeasureError};
use crate::omega::{leading_step, LeadingData, OmegaFunction};
use crate::special::{factorial, gamma, gamma_real, pochhammer, pochhammer_real};

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("integration failed while generating order {order}: {source}")]
    Integration {
        order: usize,
        #[source]
        source: MeasureError,
    },
    #[error("rho_{order} = {value} is not positive: orthogonality or precision lost at order {order} (table usable through order {reached})")]
    NonPositiveRho {
        order: usize,
        value: f64,
        reached: usize,
    },
    #[error("invalid parameters: {0}")]
    BadParams(String),
}

/// Recurrence data of the normalized family up to order `N`: coefficient
/// sequences, the functions themselves and their leading data.
#[derive(Debug, Clone)]
pub struct RecurrenceTable {
    n: usize,
    beta_hat: Vec<f64>,  // beta_hat[m-1] = beta_m, m = 1..=N
    alpha_hat: Vec<f64>, // alpha_hat[m-2] = alpha_m, m = 2..=N
    rho_hat: Vec<f64>,   // rho_hat[m] = rho_m, m = 0..=N
    functions: Vec<OmegaFunction>,
    leading: Vec<LeadingData>,
}

impl RecurrenceTable {
    /// Generate the table for `psi` through order `n` by the Stieltjes
    /// procedure. Aborts with the order reached if some `rho_m` fails to be
    /// positive (the precision canary).
    pub fn generate(psi: &Measure, n: usize) -> Result<RecurrenceTable, GenerateError> {
        if n < 1 {
            return Err(GenerateError::BadParams("table depth must be >= 1".into()));
        }
        let mut functions = vec![OmegaFunction::constant(1.0)];
        let mut leading = vec![LeadingData::seed(1.0)];
        let mut rho_hat = Vec::with_capacity(n + 1);
        let mut beta_hat = Vec::with_capacity(n);
        let mut alpha_hat = Vec::with_capacity(n.saturating_sub(1));

        let wrap =
            |order: usize| move |e: MeasureError| GenerateError::Integration { order, source: e };

        let rho0 = psi.integrate(|_| 1.0, true).map_err(wrap(0))?;
        if !(rho0 > 0.0) {
            return Err(GenerateError::NonPositiveRho {
                order: 0,
                value: rho0,
                reached: 0,
            });
        }
        rho_hat.push(rho0);
        // beta_1 uses the plain-dpsi mean of x over rho_0
        let beta1 = psi.integrate(|x| x, false).map_err(wrap(1))? / rho0;
        beta_hat.push(beta1);
        functions.push(functions[0].mul_linear(1.0, beta1));
        leading.push(leading_step(&leading[0], 1.0, beta1));

        for m in 1..n {
            let wm = functions[m].clone();
            let rho_m = psi
                .integrate_theta(|t, _| wm.eval_theta(t).powi(2), true)
                .map_err(wrap(m))?;
            if !(rho_m > 0.0) {
                return Err(GenerateError::NonPositiveRho {
                    order: m,
                    value: rho_m,
                    reached: m - 1,
                });
            }
            rho_hat.push(rho_m);
            let num = psi
                .integrate_theta(|t, x| x * wm.eval_theta(t).powi(2), false)
                .map_err(wrap(m + 1))?;
            let beta_next = num / rho_m;
            let alpha_next =
                (1.0 + beta_next * beta_next) / (1.0 + beta_hat[m - 1] * beta_hat[m - 1]) * rho_m
                    / rho_hat[m - 1];
            beta_hat.push(beta_next);
            alpha_hat.push(alpha_next);
            let next = wm
                .mul_linear(1.0, beta_next)
                .add_scaled(-alpha_next, &functions[m - 1])
                .expect("recurrence orders are parity-compatible");
            functions.push(next);
            leading.push(leading_step(&leading[m], 1.0, beta_next));
        }
        // final rho_N
        let wn = functions[n].clone();
        let rho_n = psi
            .integrate_theta(|t, _| wn.eval_theta(t).powi(2), true)
            .map_err(wrap(n))?;
        if !(rho_n > 0.0) {
            return Err(GenerateError::NonPositiveRho {
                order: n,
                value: rho_n,
                reached: n - 1,
            });
        }
        rho_hat.push(rho_n);

        Ok(RecurrenceTable {
            n,
            beta_hat,
            alpha_hat,
            rho_hat,
            functions,
            leading,
        })
    }

    /// Maximum stored order.
    pub fn depth(&self) -> usize {
        self.n
    }

    /// `beta_m`, defined for `1 <= m <= N`.
    pub fn beta(&self, m: usize) -> f64 {
        assert!((1..=self.n).contains(&m), "beta_{m} out of table range");
        self.beta_hat[m - 1]
    }

    /// `alpha_m`, defined for `2 <= m <= N`.
    pub fn alpha(&self, m: usize) -> f64 {
        assert!((2..=self.n).contains(&m), "alpha_{m} out of table range");
        self.alpha_hat[m - 2]
    }

    /// `rho_m`, defined for `0 <= m <= N`.
    pub fn rho(&self, m: usize) -> f64 {
        self.rho_hat[m]
    }

    /// The order-`m` function.
    pub fn w(&self, m: usize) -> &OmegaFunction {
        &self.functions[m]
    }

    /// All functions `W_0..W_N` (mixed-basis building material).
    pub fn functions(&self) -> &[OmegaFunction] {
        &self.functions
    }

    pub fn leading(&self, m: usize) -> &LeadingData {
        &self.leading[m]
    }

    /// The `alpha_{m+1}` integral form
    /// `(1/rho_{m-1}) int [x - beta_{m+1} sqrt(1-x^2)] W_{m-1} W_m sqrt(1-x^2) dpsi`,
    /// an independent route to the stored ratio form.
    pub fn alpha_integral_form(&self, psi: &Measure, m: usize) -> Result<f64, MeasureError> {
        assert!((2..=self.n).contains(&m));
        let beta = self.beta(m);
        let wm = &self.functions[m - 1];
        let wp = &self.functions[m - 2];
        let v = psi.integrate_theta(
            |t, x| {
                let s = (t / 2.0).sin();
                (x - beta * s) * wp.eval_theta(t) * wm.eval_theta(t)
            },
            true,
        )?;
        Ok(v / self.rho_hat[m - 2])
    }

    /// CSV table `m,beta_hat,alpha_hat,rho_hat` with 15 significant digits;
    /// `beta_hat` blank for `m = 0`, `alpha_hat` blank for `m <= 1`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,beta_hat,alpha_hat,rho_hat\n");
        for m in 0..=self.n {
            let beta = if m >= 1 {
                format!("{:.14e}", self.beta(m))
            } else {
                String::new()
            };
            let alpha = if m >= 2 {
                format!("{:.14e}", self.alpha(m))
            } else {
                String::new()
            };
            out.push_str(&format!("{m},{beta},{alpha},{:.14e}\n", self.rho(m)));
        }
        out
    }

    /// JSON form of the table coefficients.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "beta_hat": self.beta_hat,
            "alpha_hat": self.alpha_hat,
            "rho_hat": self.rho_hat,
        })
    }

    /// Rebuild a table from exported coefficients: the functions and leading
    /// data are reconstructed by running the recurrence on `beta`/`alpha`.
    pub fn from_coefficients(
        beta_hat: Vec<f64>,
        alpha_hat: Vec<f64>,
        rho_hat: Vec<f64>,
    ) -> Result<RecurrenceTable, GenerateError> {
        let n = beta_hat.len();
        if n < 1 || alpha_hat.len() + 1 != n || rho_hat.len() != n + 1 {
            return Err(GenerateError::BadParams(format!(
                "inconsistent lengths: beta {}, alpha {}, rho {}",
                beta_hat.len(),
                alpha_hat.len(),
                rho_hat.len()
            )));
        }
        let mut functions = vec![OmegaFunction::constant(1.0)];
        let mut leading = vec![LeadingData::seed(1.0)];
        functions.push(functions[0].mul_linear(1.0, beta_hat[0]));
        leading.push(leading_step(&leading[0], 1.0, beta_hat[0]));
        for m in 1..n {
            let next = functions[m]
                .mul_linear(1.0, beta_hat[m])
                .add_scaled(-alpha_hat[m - 1], &functions[m - 1])
                .expect("recurrence orders are parity-compatible");
            functions.push(next);
            leading.push(leading_step(&leading[m], 1.0, beta_hat[m]));
        }
        Ok(RecurrenceTable {
            n,
            beta_hat,
            alpha_hat,
            rho_hat,
            functions,
            leading,
        })
    }

    /// Parse the JSON produced by [`RecurrenceTable::to_json`].
    pub fn from_json(text: &str) -> Result<RecurrenceTable, GenerateError> {
        #[derive(serde::Deserialize)]
        struct Wire {
            beta_hat: Vec<f64>,
            alpha_hat: Vec<f64>,
            rho_hat: Vec<f64>,
        }
        let w: Wire = serde_json::from_str(text)
            .map_err(|e| GenerateError::BadParams(format!("bad table JSON: {e}")))?;
        Self::from_coefficients(w.beta_hat, w.alpha_hat, w.rho_hat)
    }
}

/// Closed-form recurrence coefficients for the weight
/// `[e^{-arccos x}]^{2 eta} (1-x^2)^{lambda-1} dx`:
/// `beta_m = eta/(m+lambda-1)` and
/// `alpha_{m+1} = (1/4) m (m+2 lambda-1) / ((m+lambda-1)(m+lambda))`.
///
/// Returns `(beta_m, alpha_{m+1})`.
pub fn gegenbauer_eta_coeffs(lambda: f64, eta: f64, m: usize) -> Result<(f64, f64), GenerateError> {
    if !(lambda >= 0.5) {
        return Err(GenerateError::BadParams(format!(
            "closed forms require lambda >= 1/2, got {lambda}"
        )));
    }
    if m < 1 {
        return Err(GenerateError::BadParams("order must be >= 1".into()));
    }
    let mf = m as f64;
    let beta = eta / (mf + lambda - 1.0);
    let alpha_next = 0.25 * mf * (mf + 2.0 * lambda - 1.0) / ((mf + lambda - 1.0) * (mf + lambda));
    Ok((beta, alpha_next))
}

/// Closed-form evaluation of the order-`m` normalized function for the same
/// weight family, via the terminating hypergeometric sum
/// `2^{-m} ((2 lambda)_m/(lambda)_m) e^{-i m theta/2} 2F1(-m, b; b+conj(b); 1-e^{i theta})`
/// with `b = lambda + i eta`. The imaginary residual must stay below `1e-10`
/// relative; a larger residual signals a parameter or branch error.
pub fn gegenbauer_eta_w_2f1(
    lambda: f64,
    eta: f64,
    m: usize,
    theta: f64,
) -> Result<f64, GenerateError> {
    if !(lambda >= 0.5) {
        return Err(GenerateError::BadParams(format!(
            "closed forms require lambda >= 1/2, got {lambda}"
        )));
    }
    let b = Complex64::new(lambda, eta);
    let c = 2.0 * lambda;
    let w = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, theta);
    // terminating series: sum_{k=0}^m ((-m)_k (b)_k / ((c)_k k!)) w^k
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..m {
        let kf = k as f64;
        term *= (Complex64::new(-(m as f64) + kf, 0.0) * (b + kf))
            / (Complex64::new(c + kf, 0.0) * (kf + 1.0));
        term *= w;
        sum += term;
    }
    let scale =
        2f64.powi(-(m as i32)) * pochhammer_real(2.0 * lambda, m) / pochhammer_real(lambda, m);
    let phase = Complex64::from_polar(1.0, -(m as f64) * theta / 2.0);
    let value = scale * phase * sum;
    let magnitude = value.norm().max(1e-30);
    if value.im.abs() > 1e-10 * magnitude.max(1.0) {
        return Err(GenerateError::BadParams(format!(
            "imaginary residual {:e} of the hypergeometric form exceeds tolerance",
            value.im
        )));
    }
    Ok(value.re)
}

/// Closed-form `rho_m` for the same weight family:
/// `pi m! (lambda+m) Gamma(2 lambda+m) / (2^{2 lambda+2m-1} e^{eta pi} |Gamma(b+m+1)|^2)
///  * [ (Re (b)_m)^2 + (Im (b)_m)^2 ] / [(lambda)_m]^2`.
pub fn gegenbauer_eta_rho(lambda: f64, eta: f64, m: usize) -> Result<f64, GenerateError> {
    if !(lambda >= 0.5) {
        return Err(GenerateError::BadParams(format!(
            "closed forms require lambda >= 1/2, got {lambda}"
        )));
    }
    let b = Complex64::new(lambda, eta);
    let pi = std::f64::consts::PI;
    let num = pi * factorial(m) * (lambda + m as f64) * gamma_real(2.0 * lambda + m as f64);
    let den = 2f64.powf(2.0 * lambda + 2.0 * m as f64 - 1.0)
        * (eta * pi).exp()
        * gamma(b + (m as f64 + 1.0)).norm_sqr();
    let pb = pochhammer(b, m);
    let bracket = pb.re * pb.re + pb.im * pb.im;
    Ok(num / den * bracket / pochhammer_real(lambda, m).powi(2))
}
