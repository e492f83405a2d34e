//! Positive measures on `[-1,1]` and the integration engine.
//!
//! All integration is performed in the variable `theta` with
//! `x = cos(theta/2)`, `theta` in `[0, 2*pi]`, so `dx = -(1/2) sin(theta/2) dtheta`.
//! Builtin weights are rewritten in `theta` directly, which softens the
//! algebraic endpoint singularities: e.g. `(1-x^2)^(lambda-1) dx` transported
//! to `theta` carries the factor `sin(theta/2)^(2*lambda-1)`, finite for
//! `lambda > 1/2`.
//!
//! The engine is composite 16-point Gauss-Legendre over an initially uniform
//! panel grid, with adaptive bisection of the worst panel until the summed
//! per-panel error estimate drops below `tolerance` relative to the L1 scale
//! of the integrand.

pub mod expr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BinaryHeap;
use thiserror::Error;

use crate::gauss::gl16;
pub use expr::{parse_weight, EvalError, ParseError, WeightExpr};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("weight is negative at x = {x}: {value}")]
    NegativeWeight { x: f64, value: f64 },
    #[error("non-finite integrand value at theta = {theta}")]
    NonFinite { theta: f64 },
    #[error("measure has non-positive or non-finite mass: {mass}")]
    BadMass { mass: f64 },
    #[error("invalid measure parameters: {0}")]
    BadParams(String),
    #[error(
        "integration did not converge: estimate {estimate}, error bound {bound} > target {target}"
    )]
    NonConvergent {
        estimate: f64,
        bound: f64,
        target: f64,
    },
    #[error("measure does not satisfy the (1-x^2)^(-1/2) integrability condition required here")]
    NotIntegrable,
    #[error("bad measure config: {0}")]
    Config(String),
}

/// Settings for the panel integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadSettings {
    /// Initial number of uniform panels in `theta` over `[0, 2*pi]`.
    pub panels: usize,
    /// Convergence target, relative to the integrand's L1 scale.
    pub tolerance: f64,
    /// Maximum bisection depth per panel beyond the initial grid.
    pub max_refinements: u32,
}

impl Default for QuadSettings {
    fn default() -> Self {
        QuadSettings {
            panels: 32,
            tolerance: 1e-12,
            max_refinements: 96,
        }
    }
}

/// Weight family of a measure.
#[derive(Debug, Clone)]
pub enum MeasureKind {
    /// `(1-x) dx`
    OneMinusX,
    /// `[e^{-arccos(x)}]^{2 eta} (1-x^2)^{lambda-1} dx`, `lambda > 0`
    GegenbauerEta { lambda: f64, eta: f64 },
    /// `dx`
    Lebesgue,
    /// `(1-x^2)^{-1/2} dx`
    Chebyshev1,
    /// Parsed weight expression `w(x) dx`
    Expression(WeightExpr),
}

/// A positive measure `d psi` on `[-1,1]` plus its integration engine.
#[derive(Debug, Clone)]
pub struct Measure {
    kind: MeasureKind,
    integrability: bool,
    quad: QuadSettings,
    mass: f64,
}

impl Measure {
    /// `d psi = (1-x) dx`.
    pub fn one_minus_x() -> Measure {
        Self::build(MeasureKind::OneMinusX, true, QuadSettings::default()).expect("builtin measure")
    }

    /// `d psi = [e^{-arccos x}]^{2 eta} (1-x^2)^{lambda-1} dx` with `lambda > 0`.
    ///
    /// The `(1-x^2)^{-1/2}` integrability flag is set iff `lambda > 1/2`.
    pub fn gegenbauer_eta(lambda: f64, eta: f64) -> Result<Measure, MeasureError> {
        if !(lambda > 0.0) || !eta.is_finite() {
            return Err(MeasureError::BadParams(format!(
                "gegenbauer_eta requires lambda > 0 and finite eta, got lambda={lambda}, eta={eta}"
            )));
        }
        Self::build(
            MeasureKind::GegenbauerEta { lambda, eta },
            lambda > 0.5,
            QuadSettings::default(),
        )
    }

    /// `d psi = dx`.
    pub fn lebesgue() -> Measure {
        Self::build(MeasureKind::Lebesgue, true, QuadSettings::default()).expect("builtin measure")
    }

    /// `d psi = (1-x^2)^{-1/2} dx`.
    pub fn chebyshev1() -> Measure {
        Self::build(MeasureKind::Chebyshev1, false, QuadSettings::default())
            .expect("builtin measure")
    }

    /// Measure from a parsed weight expression; `integrable` declares whether
    /// `int (1-x^2)^{-1/2} d psi` exists.
    pub fn from_expression(source: &str, integrable: bool) -> Result<Measure, MeasureError> {
        let w = parse_weight(source)?;
        Self::build(
            MeasureKind::Expression(w),
            integrable,
            QuadSettings::default(),
        )
    }

    /// Rebuild with different integrator settings.
    pub fn with_settings(&self, quad: QuadSettings) -> Result<Measure, MeasureError> {
        Self::build(self.kind.clone(), self.integrability, quad)
    }

    fn build(
        kind: MeasureKind,
        integrability: bool,
        quad: QuadSettings,
    ) -> Result<Measure, MeasureError> {
        if quad.panels == 0 || !(quad.tolerance > 0.0) {
            return Err(MeasureError::BadParams(
                "quad settings need panels >= 1 and tolerance > 0".into(),
            ));
        }
        let mut m = Measure {
            kind,
            integrability,
            quad,
            mass: f64::NAN,
        };
        m.sample_nonnegativity()?;
        let mass = m.integrate(|_| 1.0, false)?;
        if !(mass.is_finite() && mass > 0.0) {
            return Err(MeasureError::BadMass { mass });
        }
        m.mass = mass;
        Ok(m)
    }

    /// Expression weights are user input: sample them at the engine's initial
    /// grid nodes and abort on negative or non-evaluable samples. Builtins are
    /// nonnegative by construction.
    fn sample_nonnegativity(&self) -> Result<(), MeasureError> {
        if let MeasureKind::Expression(w) = &self.kind {
            let (nodes, _) = gl16();
            let h = TWO_PI / self.quad.panels as f64;
            for p in 0..self.quad.panels {
                let a = p as f64 * h;
                for &t in nodes {
                    let theta = a + 0.5 * h * (t + 1.0);
                    let x = (theta / 2.0).cos();
                    let v = w.eval(x)?;
                    if v < -1e-14 {
                        return Err(MeasureError::NegativeWeight { x, value: v });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            MeasureKind::OneMinusX => "one_minus_x",
            MeasureKind::GegenbauerEta { .. } => "gegenbauer_eta",
            MeasureKind::Lebesgue => "lebesgue",
            MeasureKind::Chebyshev1 => "chebyshev1",
            MeasureKind::Expression(_) => "expression",
        }
    }

    /// Whether `int (1-x^2)^{-1/2} d psi` exists.
    pub fn integrability(&self) -> bool {
        self.integrability
    }

    pub fn settings(&self) -> &QuadSettings {
        &self.quad
    }

    /// Total mass `int d psi`, computed at construction.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `int sqrt(1-x^2) d psi`.
    pub fn halfcircle_mass(&self) -> Result<f64, MeasureError> {
        self.integrate(|_| 1.0, true)
    }

    /// Transported weight in `theta`, Jacobian included:
    /// `w(cos(theta/2)) * (1/2) * sin(theta/2)`.
    fn theta_weight(&self, theta: f64) -> Result<f64, MeasureError> {
        let half = theta / 2.0;
        let s = half.sin();
        let v = match &self.kind {
            MeasureKind::OneMinusX => {
                let s4 = (theta / 4.0).sin();
                2.0 * s4 * s4 * 0.5 * s
            }
            MeasureKind::GegenbauerEta { lambda, eta } => {
                0.5 * (-eta * theta).exp() * s.powf(2.0 * lambda - 1.0)
            }
            MeasureKind::Lebesgue => 0.5 * s,
            MeasureKind::Chebyshev1 => 0.5,
            MeasureKind::Expression(w) => w.eval(half.cos())? * 0.5 * s,
        };
        if !v.is_finite() {
            return Err(MeasureError::NonFinite { theta });
        }
        Ok(v)
    }

    /// Circle transport `d mu`: the `theta`-weight with the `sin(theta/2)`
    /// Jacobian divided back out, i.e. `(1/2) w(cos(theta/2))`. Requires the
    /// integrability flag: without it the transport is not integrable.
    fn circle_weight(&self, theta: f64) -> Result<f64, MeasureError> {
        let half = theta / 2.0;
        let s = half.sin();
        let v = match &self.kind {
            MeasureKind::OneMinusX => {
                let s4 = (theta / 4.0).sin();
                s4 * s4
            }
            MeasureKind::GegenbauerEta { lambda, eta } => {
                0.5 * (-eta * theta).exp() * s.powf(2.0 * lambda - 2.0)
            }
            MeasureKind::Lebesgue => 0.5 * s,
            MeasureKind::Chebyshev1 => 0.5 / s,
            MeasureKind::Expression(w) => w.eval(half.cos())? * 0.5,
        };
        if !v.is_finite() {
            return Err(MeasureError::NonFinite { theta });
        }
        Ok(v)
    }

    /// `int f(x) [sqrt(1-x^2)]? d psi` with the estimated error bound.
    pub fn integrate_with_bound(
        &self,
        f: impl Fn(f64) -> f64,
        with_halfcircle_weight: bool,
    ) -> Result<(f64, f64), MeasureError> {
        self.integrate_theta_with_bound(|_, x| f(x), with_halfcircle_weight)
    }

    /// `int f(x) [sqrt(1-x^2)]? d psi`.
    pub fn integrate(
        &self,
        f: impl Fn(f64) -> f64,
        with_halfcircle_weight: bool,
    ) -> Result<f64, MeasureError> {
        self.integrate_with_bound(f, with_halfcircle_weight)
            .map(|(v, _)| v)
    }

    /// Same integral with the integrand given in `theta` form; the closure
    /// receives `(theta, x)` with `x = cos(theta/2)`.
    pub fn integrate_theta(
        &self,
        f: impl Fn(f64, f64) -> f64,
        with_halfcircle_weight: bool,
    ) -> Result<f64, MeasureError> {
        self.integrate_theta_with_bound(f, with_halfcircle_weight)
            .map(|(v, _)| v)
    }

    pub fn integrate_theta_with_bound(
        &self,
        f: impl Fn(f64, f64) -> f64,
        with_halfcircle_weight: bool,
    ) -> Result<(f64, f64), MeasureError> {
        let g = |theta: f64| -> Result<f64, MeasureError> {
            let x = (theta / 2.0).cos();
            let mut w = self.theta_weight(theta)?;
            if with_halfcircle_weight {
                w *= (theta / 2.0).sin();
            }
            let v = f(theta, x) * w;
            if !v.is_finite() {
                return Err(MeasureError::NonFinite { theta });
            }
            Ok(v)
        };
        adaptive(&g, &self.quad)
    }

    /// Complex integral against the transported circle measure
    /// `d mu = (1/sin(theta/2)) d psi`-transport, oriented so that `mu` is a
    /// positive measure; the closure receives `(theta, z)` with `z = e^{i theta}`.
    pub fn integrate_circle(
        &self,
        f: impl Fn(f64, Complex64) -> Complex64,
    ) -> Result<Complex64, MeasureError> {
        if !self.integrability {
            return Err(MeasureError::NotIntegrable);
        }
        let g = |theta: f64| -> Result<Complex64, MeasureError> {
            let z = Complex64::from_polar(1.0, theta);
            let w = self.circle_weight(theta)?;
            let v = f(theta, z) * w;
            if !v.is_finite() {
                return Err(MeasureError::NonFinite { theta });
            }
            Ok(v)
        };
        adaptive(&g, &self.quad).map(|(v, _)| v)
    }

    /// Total mass of the circle transport, `int (1-x^2)^{-1/2} d psi`.
    pub fn circle_mass(&self) -> Result<f64, MeasureError> {
        self.integrate_circle(|_, _| Complex64::new(1.0, 0.0))
            .map(|v| v.re)
    }

    /// Parse a measure from its JSON config.
    pub fn from_json(text: &str) -> Result<Measure, MeasureError> {
        let cfg: MeasureConfig =
            serde_json::from_str(text).map_err(|e| MeasureError::Config(e.to_string()))?;
        Self::from_config(cfg)
    }

    fn from_config(cfg: MeasureConfig) -> Result<Measure, MeasureError> {
        let quad = cfg.quad.unwrap_or_default();
        let m = match cfg.kind.as_str() {
            "builtin" => {
                let name = cfg.name.ok_or_else(|| {
                    MeasureError::Config("builtin measure needs a \"name\"".into())
                })?;
                match name.as_str() {
                    "one_minus_x" => Measure::one_minus_x(),
                    "lebesgue" => Measure::lebesgue(),
                    "chebyshev1" => Measure::chebyshev1(),
                    "gegenbauer_eta" => {
                        let lambda = cfg.lambda.ok_or_else(|| {
                            MeasureError::Config("gegenbauer_eta needs \"lambda\"".into())
                        })?;
                        let eta = cfg.eta.unwrap_or(0.0);
                        Measure::gegenbauer_eta(lambda, eta)?
                    }
                    other => {
                        return Err(MeasureError::Config(format!("unknown builtin `{other}`")))
                    }
                }
            }
            "expression" => {
                let weight = cfg.weight.ok_or_else(|| {
                    MeasureError::Config("expression measure needs \"weight\"".into())
                })?;
                Measure::from_expression(&weight, cfg.integrable.unwrap_or(false))?
            }
            other => {
                return Err(MeasureError::Config(format!(
                    "unknown measure kind `{other}`"
                )))
            }
        };
        m.with_settings(quad)
    }

    /// The JSON config this measure round-trips through.
    pub fn config_json(&self) -> serde_json::Value {
        let mut v = match &self.kind {
            MeasureKind::GegenbauerEta { lambda, eta } => serde_json::json!({
                "kind": "builtin", "name": "gegenbauer_eta", "lambda": lambda, "eta": eta,
            }),
            MeasureKind::Expression(w) => serde_json::json!({
                "kind": "expression", "weight": w.source(), "integrable": self.integrability,
            }),
            _ => serde_json::json!({ "kind": "builtin", "name": self.kind_name() }),
        };
        v["quad"] = serde_json::json!({
            "panels": self.quad.panels,
            "tolerance": self.quad.tolerance,
            "max_refinements": self.quad.max_refinements,
        });
        v
    }
}

#[derive(Deserialize)]
struct MeasureConfig {
    kind: String,
    name: Option<String>,
    lambda: Option<f64>,
    eta: Option<f64>,
    weight: Option<String>,
    integrable: Option<bool>,
    quad: Option<QuadSettings>,
}

/// Values the panel engine can accumulate.
pub trait PanelValue: Copy {
    fn zero() -> Self;
    fn add(self, o: Self) -> Self;
    fn sub(self, o: Self) -> Self;
    fn norm(self) -> f64;
    fn scale(self, s: f64) -> Self;
}

impl PanelValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn norm(self) -> f64 {
        self.abs()
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
}

impl PanelValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn norm(self) -> f64 {
        num_complex::ComplexFloat::abs(self)
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
}

struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    err: f64,
    l1: f64,
    depth: u32,
}

impl<V> PartialEq for Panel<V> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<V> Eq for Panel<V> {}
impl<V> PartialOrd for Panel<V> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Panel<V> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gl16_on<V: PanelValue>(
    g: &dyn Fn(f64) -> Result<V, MeasureError>,
    a: f64,
    b: f64,
) -> Result<(V, f64), MeasureError> {
    let (nodes, weights) = gl16();
    let mid = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    let mut acc = V::zero();
    let mut l1 = 0.0;
    for (&t, &w) in nodes.iter().zip(weights) {
        let v = g(mid + hw * t)?;
        acc = acc.add(v.scale(w));
        l1 += v.norm() * w;
    }
    Ok((acc.scale(hw), l1 * hw))
}

fn eval_panel<V: PanelValue>(
    g: &dyn Fn(f64) -> Result<V, MeasureError>,
    a: f64,
    b: f64,
    depth: u32,
) -> Result<Panel<V>, MeasureError> {
    let (coarse, _) = gl16_on(g, a, b)?;
    let mid = 0.5 * (a + b);
    let (left, l1l) = gl16_on(g, a, mid)?;
    let (right, l1r) = gl16_on(g, mid, b)?;
    let fine = left.add(right);
    Ok(Panel {
        a,
        b,
        value: fine,
        err: fine.sub(coarse).norm(),
        l1: l1l + l1r,
        depth,
    })
}

/// Adaptive composite Gauss-Legendre over `[0, 2*pi]`. Returns the value and
/// the summed per-panel error estimate.
fn adaptive<V: PanelValue>(
    g: &dyn Fn(f64) -> Result<V, MeasureError>,
    settings: &QuadSettings,
) -> Result<(V, f64), MeasureError> {
    let h = TWO_PI / settings.panels as f64;
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel<V>> = Vec::new();
    for p in 0..settings.panels {
        let a = p as f64 * h;
        heap.push(eval_panel(g, a, a + h, 0)?);
    }
    let total = |heap: &BinaryHeap<Panel<V>>, frozen: &[Panel<V>]| {
        let mut value = V::zero();
        let mut err = 0.0;
        let mut l1 = 0.0;
        for p in heap.iter().chain(frozen.iter()) {
            value = value.add(p.value);
            err += p.err;
            l1 += p.l1;
        }
        (value, err, l1)
    };
    const MAX_PANELS: usize = 20_000;
    loop {
        let (value, err, l1) = total(&heap, &frozen);
        let target = settings.tolerance * l1.max(1e-300);
        if err <= target {
            // the per-panel estimates bottom out below accumulation roundoff;
            // floor the reported bound there
            let floor = f64::EPSILON * l1 * (heap.len() + frozen.len()) as f64;
            return Ok((value, err.max(floor)));
        }
        // once the error locked into unsplittable panels exceeds the target
        // on its own, no further splitting can reach it
        let frozen_err: f64 = frozen.iter().map(|p| p.err).sum();
        if frozen_err > target || heap.len() + frozen.len() > MAX_PANELS {
            return Err(MeasureError::NonConvergent {
                estimate: value.norm(),
                bound: err,
                target,
            });
        }
        // split the worst refinable panel
        let worst = loop {
            match heap.pop() {
                Some(p) if p.depth >= settings.max_refinements => frozen.push(p),
                Some(p) => break Some(p),
                None => break None,
            }
        };
        match worst {
            Some(p) => {
                let mid = 0.5 * (p.a + p.b);
                heap.push(eval_panel(g, p.a, mid, p.depth + 1)?);
                heap.push(eval_panel(g, mid, p.b, p.depth + 1)?);
            }
            None => {
                return Err(MeasureError::NonConvergent {
                    estimate: value.norm(),
                    bound: err,
                    target,
                });
            }
        }
    }
}
