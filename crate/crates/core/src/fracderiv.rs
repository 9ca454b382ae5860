//! Left-sided Caputo and Riemann-Liouville fractional derivatives.
//!
//! For `n − 1 < α < n` the Caputo derivative is the fractional integral of
//! order `n − α` of `f⁽ⁿ⁾`:
//!
//! ```text
//! (ᶜDᵅ f)(x) = 1/Γ(n−α) ∫ₐˣ (x−z)^(n−α−1) f⁽ⁿ⁾(z) dz
//! ```
//!
//! Power functions centered at `a` have closed forms. Everything else goes
//! through a product trapezoidal rule: `f⁽ⁿ⁾` is replaced by its piecewise
//! linear interpolant on a uniform grid and the singular kernel is integrated
//! exactly against it. Riemann-Liouville values are obtained from the Caputo
//! value plus the Taylor boundary terms, never by differentiating a
//! quadrature result.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcmodel::FuncExpr;
use crate::specfun::{gamma, rgamma, FracOrder};

/// Discretisation of the weakly singular integral over `[a, x]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    nodes: usize,
    min_gap: f64,
}

impl QuadratureConfig {
    pub const DEFAULT_NODES: usize = 1024;
    pub const DEFAULT_MIN_GAP: f64 = 1e-12;

    pub fn new(nodes: usize, min_gap: f64) -> Result<Self> {
        if nodes < 2 {
            return Err(Error::InvalidConfig(format!(
                "quadrature needs at least 2 nodes, got {nodes}"
            )));
        }
        if !(min_gap > 0.0 && min_gap.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "min_gap must be positive, got {min_gap}"
            )));
        }
        Ok(QuadratureConfig { nodes, min_gap })
    }

    pub fn with_nodes(nodes: usize) -> Result<Self> {
        QuadratureConfig::new(nodes, Self::DEFAULT_MIN_GAP)
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn min_gap(&self) -> f64 {
        self.min_gap
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            nodes: Self::DEFAULT_NODES,
            min_gap: Self::DEFAULT_MIN_GAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DerivKind {
    Caputo,
    RiemannLiouville,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    ClosedForm,
    Quadrature,
    Bridge,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivResult {
    pub value: f64,
    pub kind: DerivKind,
    pub method: Method,
    /// Richardson estimate `|v(N) − v(N/2)| / 3`; present only for quadrature.
    pub est_error: Option<f64>,
}

impl DerivResult {
    fn closed(value: f64, kind: DerivKind) -> Self {
        DerivResult {
            value,
            kind,
            method: Method::ClosedForm,
            est_error: None,
        }
    }
}

/// A function whose integer-order derivatives can be evaluated pointwise.
///
/// Implemented by [`FuncExpr`] and by symbolic products (see
/// [`crate::leibniz::Product`]), so the same quadrature and bridge code serves
/// both.
pub trait Differentiable: Sync {
    /// Pointwise evaluator of the `k`-th derivative.
    fn derivative_fn(&self, k: u32) -> Result<Box<dyn Fn(f64) -> Result<f64> + Sync + '_>>;

    /// `(c, β)` pairs when the function is `Σ c (x − a)^β`.
    fn power_terms_at(&self, a: f64) -> Option<Vec<(f64, f64)>>;

    fn label(&self) -> String;

    fn derivative_at(&self, k: u32, x: f64) -> Result<f64> {
        self.derivative_fn(k)?(x)
    }
}

impl Differentiable for FuncExpr {
    fn derivative_fn(&self, k: u32) -> Result<Box<dyn Fn(f64) -> Result<f64> + Sync + '_>> {
        let d = self.derivative(k)?;
        Ok(Box::new(move |x| d.evaluate(x)))
    }

    fn power_terms_at(&self, a: f64) -> Option<Vec<(f64, f64)>> {
        FuncExpr::power_terms_at(self, a)
    }

    fn label(&self) -> String {
        self.to_string()
    }
}

fn check_interval(a: f64, x: f64) -> Result<f64> {
    let span = x - a;
    if !(span > 0.0) || !span.is_finite() {
        return Err(Error::domain(format!("need x > a, got a = {a}, x = {x}")));
    }
    Ok(span)
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > -1.0) {
        return Err(Error::domain(format!("power exponent {beta} must be > -1")));
    }
    Ok(())
}

/// Caputo derivative of `(x − a)^β`:
/// `Γ(β+1)/Γ(β−α+1) · (x−a)^(β−α)`, and exactly `0` for integer `β ≤ n−1`.
///
/// A non-integer `β < n − 1` has a non-integrable `n`-th derivative and is
/// rejected.
pub fn caputo_power(beta: f64, alpha: FracOrder, a: f64, x: f64) -> Result<DerivResult> {
    check_beta(beta)?;
    let span = check_interval(a, x)?;
    let n = f64::from(alpha.n());
    let value = if beta == beta.trunc() && beta <= n - 1.0 {
        0.0
    } else if beta < n - 1.0 {
        return Err(Error::domain(format!(
            "order-{n} derivative of (x-a)^{beta} is not integrable at a"
        )));
    } else {
        gamma(beta + 1.0)? * rgamma(beta - alpha.alpha() + 1.0) * span.powf(beta - alpha.alpha())
    };
    Ok(DerivResult::closed(value, DerivKind::Caputo))
}

/// Riemann-Liouville derivative of `(x − a)^β`:
/// `Γ(β+1)/Γ(β+1−α) · (x−a)^(β−α)`. Unlike Caputo this does not annihilate
/// constants for non-integer `α`.
pub fn rl_power(beta: f64, alpha: FracOrder, a: f64, x: f64) -> Result<DerivResult> {
    let value = rl_power_real(beta, alpha.alpha(), a, x)?;
    Ok(DerivResult::closed(value, DerivKind::RiemannLiouville))
}

/// Riemann-Liouville operator of arbitrary real order on `(x − a)^β`.
/// Negative `order` is the fractional integral of order `−order`; zero is the
/// identity.
pub fn rl_power_real(beta: f64, order: f64, a: f64, x: f64) -> Result<f64> {
    check_beta(beta)?;
    let span = check_interval(a, x)?;
    Ok(gamma(beta + 1.0)? * rgamma(beta + 1.0 - order) * span.powf(beta - order))
}

fn unsupported_closed<S: Differentiable + ?Sized>(f: &S, a: f64) -> Error {
    Error::UnsupportedFunction(format!(
        "{} is not a sum of powers centered at {a}",
        f.label()
    ))
}

fn caputo_closed_generic<S: Differentiable + ?Sized>(
    f: &S,
    alpha: FracOrder,
    a: f64,
    x: f64,
) -> Result<DerivResult> {
    let terms = f
        .power_terms_at(a)
        .ok_or_else(|| unsupported_closed(f, a))?;
    check_interval(a, x)?;
    let mut value = 0.0;
    for (c, beta) in terms {
        value += c * caputo_power(beta, alpha, a, x)?.value;
    }
    Ok(DerivResult::closed(value, DerivKind::Caputo))
}

/// Term-by-term closed form for `f = Σ c (x − a)^β`.
pub fn caputo_closed(f: &FuncExpr, alpha: FracOrder, a: f64, x: f64) -> Result<DerivResult> {
    caputo_closed_generic(f, alpha, a, x)
}

/// Unit-step moments of the kernel `σ^(μ−1)` against the two hat functions
/// on the cell `σ ∈ [m−1, m]`:
/// `P = ∫₀¹ (m−τ)^(μ−1) dτ`, `Q = ∫₀¹ (m−τ)^(μ−1) τ dτ`.
fn cell_moments(m: usize, mu: f64) -> (f64, f64) {
    let mf = m as f64;
    if m < 8 {
        let lo = mf - 1.0;
        let p = (mf.powf(mu) - lo.powf(mu)) / mu;
        let q = mf * p - (mf.powf(mu + 1.0) - lo.powf(mu + 1.0)) / (mu + 1.0);
        return (p, q);
    }
    // Binomial series in 1/m avoids the O(m) cancellation of the differences.
    let lead = mf.powf(mu - 1.0);
    let mut b = 1.0;
    let mut x = 1.0;
    let (mut p, mut q) = (0.0, 0.0);
    for k in 0..80 {
        let kf = f64::from(k);
        let bp = b * x / (kf + 1.0);
        let bq = b * x / (kf + 2.0);
        p += bp;
        q += bq;
        if bp.abs() < 1e-18 * p.abs() {
            break;
        }
        b *= (mu - 1.0 - kf) / (kf + 1.0);
        x *= -1.0 / mf;
    }
    (lead * p, lead * q)
}

/// `∫ₐˣ (x−z)^(μ−1) g(z) dz` from samples `g(a + j h)`, `j = 0..=N`, by the
/// product trapezoidal rule. `μ > 0`.
fn product_trapezoid(samples: &[f64], span: f64, mu: f64) -> f64 {
    let cells = samples.len() - 1;
    let h = span / cells as f64;
    let mut acc = 0.0;
    for j in 0..cells {
        let (p, q) = cell_moments(cells - j, mu);
        acc += samples[j] * (p - q) + samples[j + 1] * q;
    }
    acc * h.powf(mu)
}

/// Value and Richardson error estimate for `∫ₐˣ (x−z)^(μ−1) g(z) dz`.
pub(crate) fn weakly_singular_integral(
    g: &(dyn Fn(f64) -> Result<f64> + Sync),
    mu: f64,
    a: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let span = check_interval(a, x)?;
    if span < cfg.min_gap {
        return Err(Error::domain(format!(
            "x - a = {span} is below the quadrature minimum gap {}",
            cfg.min_gap
        )));
    }
    let n = cfg.nodes;
    let h = span / n as f64;
    let fine = (0..=n)
        .map(|j| if j == n { g(x) } else { g(a + j as f64 * h) })
        .collect::<Result<Vec<f64>>>()?;
    let fine_value = product_trapezoid(&fine, span, mu);
    let coarse_value = if n.is_multiple_of(2) {
        let coarse: Vec<f64> = fine.iter().step_by(2).copied().collect();
        product_trapezoid(&coarse, span, mu)
    } else {
        let m = n / 2;
        let hc = span / m as f64;
        let coarse = (0..=m)
            .map(|j| if j == m { g(x) } else { g(a + j as f64 * hc) })
            .collect::<Result<Vec<f64>>>()?;
        product_trapezoid(&coarse, span, mu)
    };
    Ok((fine_value, (fine_value - coarse_value).abs() / 3.0))
}

pub(crate) fn caputo_quadrature_generic<S: Differentiable + ?Sized>(
    f: &S,
    alpha: FracOrder,
    a: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<DerivResult> {
    check_interval(a, x)?;
    if alpha.is_integer() {
        // Γ(n−α) has a pole: the operator is the classical n-th derivative.
        let value = f.derivative_at(alpha.n(), x)?;
        return Ok(DerivResult::closed(value, DerivKind::Caputo));
    }
    let g = f.derivative_fn(alpha.n())?;
    let mu = alpha.complement();
    let (raw, err) = weakly_singular_integral(&*g, mu, a, x, cfg)?;
    let scale = rgamma(mu);
    Ok(DerivResult {
        value: raw * scale,
        kind: DerivKind::Caputo,
        method: Method::Quadrature,
        est_error: Some(err * scale),
    })
}

/// Caputo derivative by product integration of `f⁽ⁿ⁾`. Integer `α` returns
/// the exact symbolic derivative.
pub fn caputo_quadrature(
    f: &FuncExpr,
    alpha: FracOrder,
    a: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<DerivResult> {
    caputo_quadrature_generic(f, alpha, a, x, cfg)
}

pub(crate) fn caputo_generic<S: Differentiable + ?Sized>(
    f: &S,
    alpha: FracOrder,
    a: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<DerivResult> {
    match caputo_closed_generic(f, alpha, a, x) {
        Err(Error::UnsupportedFunction(_)) => caputo_quadrature_generic(f, alpha, a, x, cfg),
        other => other,
    }
}

/// Caputo derivative, closed form when `f` is a sum of powers centered at
/// `a`, quadrature otherwise.
pub fn caputo(
    f: &FuncExpr,
    alpha: FracOrder,
    a: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<DerivResult> {
    caputo_generic(f, alpha, a, x, cfg)
}

/// Coefficient multiplying `f⁽ᵏ⁾(a) (x − a)^(k−α)` in the boundary sum that
/// turns a Caputo value into a Riemann-Liouville value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCoefficient {
    /// `1/Γ(k+1−α)`, the form consistent with the RL power rule.
    ReciprocalGamma,
    /// `1/k!`. Kept only to demonstrate that it disagrees with the power rule.
    Factorial,
}

pub(crate) fn bridge_generic<S: Differentiable + ?Sized>(
    f: &S,
    alpha: FracOrder,
    a: f64,
    x: f64,
    cfg: &QuadratureConfig,
    coefficient: BoundaryCoefficient,
) -> Result<DerivResult> {
    let span = check_interval(a, x)?;
    let caputo = caputo_generic(f, alpha, a, x, cfg)?;
    let mut boundary = 0.0;
    let mut factorial = 1.0;
    for k in 0..alpha.n() {
        let kf = f64::from(k);
        if k > 0 {
            factorial *= kf;
        }
        let weight = match coefficient {
            BoundaryCoefficient::ReciprocalGamma => rgamma(kf + 1.0 - alpha.alpha()),
            BoundaryCoefficient::Factorial => 1.0 / factorial,
        };
        if weight == 0.0 {
            continue;
        }
        boundary += f.derivative_at(k, a)? * weight * span.powf(kf - alpha.alpha());
    }
    Ok(DerivResult {
        value: caputo.value + boundary,
        kind: DerivKind::RiemannLiouville,
        method: Method::Bridge,
        est_error: None,
    })
}

/// Riemann-Liouville derivative as Caputo plus
/// `Σ_{k<n} f⁽ᵏ⁾(a)/Γ(k+1−α) · (x−a)^(k−α)`.
pub fn rl_caputo_bridge(
    f: &FuncExpr,
    alpha: FracOrder,
    a: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<DerivResult> {
    bridge_generic(f, alpha, a, x, cfg, BoundaryCoefficient::ReciprocalGamma)
}

/// [`rl_caputo_bridge`] with a selectable boundary coefficient.
pub fn rl_caputo_bridge_with(
    f: &FuncExpr,
    alpha: FracOrder,
    a: f64,
    x: f64,
    cfg: &QuadratureConfig,
    coefficient: BoundaryCoefficient,
) -> Result<DerivResult> {
    bridge_generic(f, alpha, a, x, cfg, coefficient)
}

pub(crate) fn riemann_liouville_generic<S: Differentiable + ?Sized>(
    f: &S,
    alpha: FracOrder,
    a: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<DerivResult> {
    match f.power_terms_at(a) {
        Some(terms) => {
            let mut value = 0.0;
            for (c, beta) in terms {
                value += c * rl_power_real(beta, alpha.alpha(), a, x)?;
            }
            check_interval(a, x)?;
            Ok(DerivResult::closed(value, DerivKind::RiemannLiouville))
        }
        None => bridge_generic(f, alpha, a, x, cfg, BoundaryCoefficient::ReciprocalGamma),
    }
}

/// Riemann-Liouville derivative: power-rule closed form when available,
/// otherwise the Caputo bridge.
pub fn riemann_liouville(
    f: &FuncExpr,
    alpha: FracOrder,
    a: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<DerivResult> {
    riemann_liouville_generic(f, alpha, a, x, cfg)
}

/// Riemann-Liouville fractional integral of order `nu > 0`,
/// `1/Γ(ν) ∫ₐˣ (x−z)^(ν−1) f(z) dz`.
pub(crate) fn rl_integral_generic<S: Differentiable + ?Sized>(
    f: &S,
    nu: f64,
    a: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<DerivResult> {
    if !(nu > 0.0) {
        return Err(Error::domain(format!(
            "integral order {nu} must be positive"
        )));
    }
    if let Some(terms) = f.power_terms_at(a) {
        check_interval(a, x)?;
        let mut value = 0.0;
        for (c, beta) in terms {
            value += c * rl_power_real(beta, -nu, a, x)?;
        }
        return Ok(DerivResult::closed(value, DerivKind::RiemannLiouville));
    }
    let g = f.derivative_fn(0)?;
    let (raw, err) = weakly_singular_integral(&*g, nu, a, x, cfg)?;
    let scale = rgamma(nu);
    Ok(DerivResult {
        value: raw * scale,
        kind: DerivKind::RiemannLiouville,
        method: Method::Quadrature,
        est_error: Some(err * scale),
    })
}

pub fn rl_integral(
    f: &FuncExpr,
    nu: f64,
    a: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<DerivResult> {
    rl_integral_generic(f, nu, a, x, cfg)
}

/// Riemann-Liouville operator of any real order: integral for `order < 0`,
/// identity at `0`, derivative for `order > 0`.
pub(crate) fn rl_any_order<S: Differentiable + ?Sized>(
    f: &S,
    order: f64,
    a: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if order < 0.0 {
        Ok(rl_integral_generic(f, -order, a, x, cfg)?.value)
    } else if order == 0.0 {
        f.derivative_at(0, x)
    } else {
        Ok(riemann_liouville_generic(f, FracOrder::new(order)?, a, x, cfg)?.value)
    }
}
