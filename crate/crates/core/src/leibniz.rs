//! Product rules for fractional operators.
//!
//! The classical product rule `D(fg) = (Df)g + f(Dg)` holds only for the
//! first derivative. This module measures the defect
//! `Δ = Dᵅ(fg) − (Dᵅf)g − f(Dᵅg)` and evaluates the two correct
//! generalisations: the finite binomial sum for integer orders and the
//! symmetrized infinite series for Riemann-Liouville derivatives,
//!
//! ```text
//! Dᵅ(fg) = Σ_k  Γ(α+1)/(2Γ(α−k+1)Γ(k+1)) · [ (D^{α−k} f) g⁽ᵏ⁾ + (D^{α−k} g) f⁽ᵏ⁾ ]
//! ```
//!
//! whose terms with `k > α` are fractional integrals.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fracderiv::{
    caputo_generic, riemann_liouville_generic, rl_any_order, DerivKind, Differentiable,
    QuadratureConfig,
};
use crate::funcmodel::FuncExpr;
use crate::specfun::{frac_binomial, BinomialConvention, FracOrder};

/// Truncation used for non-polynomial factors.
pub const DEFAULT_SERIES_TERMS: u32 = 12;

/// `f · g`, symbolically expanded when both are same-center polynomials and
/// differentiated by the general Leibniz expansion otherwise.
pub struct Product<'a> {
    f: &'a FuncExpr,
    g: &'a FuncExpr,
    expanded: Option<FuncExpr>,
}

impl<'a> Product<'a> {
    pub fn new(f: &'a FuncExpr, g: &'a FuncExpr) -> Self {
        Product {
            f,
            g,
            expanded: f.poly_product(g).ok(),
        }
    }

    pub fn expanded(&self) -> Option<&FuncExpr> {
        self.expanded.as_ref()
    }
}

impl Differentiable for Product<'_> {
    fn derivative_fn(&self, k: u32) -> Result<Box<dyn Fn(f64) -> Result<f64> + Sync + '_>> {
        if let Some(p) = &self.expanded {
            let d = p.derivative(k)?;
            return Ok(Box::new(move |x| d.evaluate(x)));
        }
        let mut parts = Vec::with_capacity(k as usize + 1);
        for j in 0..=k {
            let c = frac_binomial(f64::from(k), j, BinomialConvention::Unhalved);
            parts.push((c, self.f.derivative(k - j)?, self.g.derivative(j)?));
        }
        Ok(Box::new(move |x| {
            parts.iter().try_fold(0.0, |acc, (c, df, dg)| {
                if df.is_zero() || dg.is_zero() {
                    return Ok(acc);
                }
                Ok(acc + c * df.evaluate(x)? * dg.evaluate(x)?)
            })
        }))
    }

    fn power_terms_at(&self, a: f64) -> Option<Vec<(f64, f64)>> {
        self.expanded.as_ref().and_then(|p| p.power_terms_at(a))
    }

    fn label(&self) -> String {
        format!("({}) * ({})", self.f, self.g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuleForm {
    Unviolated,
    IntegerSum,
    SymmetrizedSeries,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeibnizReport {
    pub alpha: FracOrder,
    pub operator: DerivKind,
    pub rule_form: RuleForm,
    pub points: Vec<f64>,
    /// `Dᵅ(fg)` for the unviolated form, the rule's value otherwise.
    pub values: Vec<f64>,
    pub defect: Vec<f64>,
    pub max_abs_defect: f64,
    pub truncation_k: Option<u32>,
    pub series_residual: Option<f64>,
    pub nonconvergent: Option<bool>,
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, d| m.max(d.abs()))
}

fn apply<S: Differentiable + ?Sized>(
    op: DerivKind,
    f: &S,
    alpha: FracOrder,
    a: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    Ok(match op {
        DerivKind::Caputo => caputo_generic(f, alpha, a, x, cfg)?.value,
        DerivKind::RiemannLiouville => riemann_liouville_generic(f, alpha, a, x, cfg)?.value,
    })
}

/// `Δ(x) = Dᵅ(fg) − (Dᵅf)g − f(Dᵅg)` at each point, with `D` the Caputo or
/// Riemann-Liouville operator.
pub fn leibniz_defect(
    f: &FuncExpr,
    g: &FuncExpr,
    alpha: FracOrder,
    a: f64,
    points: &[f64],
    cfg: &QuadratureConfig,
    operator: DerivKind,
) -> Result<LeibnizReport> {
    let fg = Product::new(f, g);
    let mut values = Vec::with_capacity(points.len());
    let mut defect = Vec::with_capacity(points.len());
    for &x in points {
        let d_fg = apply(operator, &fg, alpha, a, x, cfg)?;
        let d_f = apply(operator, f, alpha, a, x, cfg)?;
        let d_g = apply(operator, g, alpha, a, x, cfg)?;
        values.push(d_fg);
        defect.push(d_fg - d_f * g.evaluate(x)? - f.evaluate(x)? * d_g);
    }
    Ok(LeibnizReport {
        alpha,
        operator,
        rule_form: RuleForm::Unviolated,
        points: points.to_vec(),
        max_abs_defect: max_abs(&defect),
        values,
        defect,
        truncation_k: None,
        series_residual: None,
        nonconvergent: None,
    })
}

/// `Σ_{k=0}^{n} C(n,k) f⁽ⁿ⁻ᵏ⁾(x) g⁽ᵏ⁾(x)`.
pub fn integer_leibniz(f: &FuncExpr, g: &FuncExpr, n: u32, x: f64) -> Result<f64> {
    let nf = f64::from(n);
    let mut acc = 0.0;
    for k in 0..=n {
        let c = frac_binomial(nf, k, BinomialConvention::Unhalved);
        acc += c * f.derivative(n - k)?.evaluate(x)? * g.derivative(k)?.evaluate(x)?;
    }
    Ok(acc)
}

/// Integer-order sum against the `n`-th derivative of the product.
pub fn integer_leibniz_report(
    f: &FuncExpr,
    g: &FuncExpr,
    n: u32,
    a: f64,
    points: &[f64],
    cfg: &QuadratureConfig,
) -> Result<LeibnizReport> {
    let alpha = FracOrder::new(f64::from(n))?;
    let fg = Product::new(f, g);
    let mut values = Vec::with_capacity(points.len());
    let mut defect = Vec::with_capacity(points.len());
    for &x in points {
        let sum = integer_leibniz(f, g, n, x)?;
        let reference = caputo_generic(&fg, alpha, a, x, cfg)?.value;
        values.push(sum);
        defect.push(sum - reference);
    }
    Ok(LeibnizReport {
        alpha,
        operator: DerivKind::Caputo,
        rule_form: RuleForm::IntegerSum,
        points: points.to_vec(),
        max_abs_defect: max_abs(&defect),
        values,
        defect,
        truncation_k: None,
        series_residual: None,
        nonconvergent: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    /// Partial sum through `k = K`.
    pub value: f64,
    /// `|term_K|`
    pub residual: f64,
    pub terms: Vec<f64>,
    /// The last three terms grow in magnitude.
    pub nonconvergent: bool,
}

/// Partial sum of the symmetrized generalized Leibniz series for the
/// Riemann-Liouville derivative of `f·g`, through `k = terms`.
pub fn symmetrized_series(
    f: &FuncExpr,
    g: &FuncExpr,
    alpha: FracOrder,
    a: f64,
    x: f64,
    terms: u32,
    cfg: &QuadratureConfig,
) -> Result<SeriesValue> {
    let mut out = Vec::with_capacity(terms as usize + 1);
    for k in 0..=terms {
        let coeff = frac_binomial(alpha.alpha(), k, BinomialConvention::Halved);
        if coeff == 0.0 {
            out.push(0.0);
            continue;
        }
        let order = alpha.alpha() - f64::from(k);
        let dg = g.derivative(k)?;
        let df = f.derivative(k)?;
        let mut t = 0.0;
        if !dg.is_zero() && !f.is_zero() {
            t += rl_any_order(f, order, a, x, cfg)? * dg.evaluate(x)?;
        }
        if !df.is_zero() && !g.is_zero() {
            t += rl_any_order(g, order, a, x, cfg)? * df.evaluate(x)?;
        }
        out.push(coeff * t);
    }
    let residual = out.last().map_or(0.0, |t| t.abs());
    let nonconvergent = out.len() >= 3 && {
        let tail = &out[out.len() - 3..];
        tail[0].abs() < tail[1].abs() && tail[1].abs() < tail[2].abs()
    };
    Ok(SeriesValue {
        value: out.iter().sum(),
        residual,
        terms: out,
        nonconvergent,
    })
}

/// `deg f + deg g` for polynomial factors, where the series terminates;
/// [`DEFAULT_SERIES_TERMS`] otherwise.
pub fn default_truncation(f: &FuncExpr, g: &FuncExpr) -> u32 {
    fn degree(p: &FuncExpr) -> Option<u32> {
        p.terms().iter().try_fold(0u32, |d, t| match *t {
            crate::funcmodel::Term::Power { beta, .. } if beta >= 0.0 && beta == beta.trunc() => {
                Some(d.max(beta as u32))
            }
            _ => None,
        })
    }
    match (degree(f), degree(g)) {
        (Some(p), Some(q)) => p + q,
        _ => DEFAULT_SERIES_TERMS,
    }
}

/// Symmetrized series at each point, compared against the Riemann-Liouville
/// derivative of the product.
pub fn symmetrized_report(
    f: &FuncExpr,
    g: &FuncExpr,
    alpha: FracOrder,
    a: f64,
    points: &[f64],
    terms: Option<u32>,
    cfg: &QuadratureConfig,
) -> Result<LeibnizReport> {
    let k = terms.unwrap_or_else(|| default_truncation(f, g));
    let fg = Product::new(f, g);
    let mut values = Vec::with_capacity(points.len());
    let mut defect = Vec::with_capacity(points.len());
    let mut residual: f64 = 0.0;
    let mut nonconvergent = false;
    for &x in points {
        let s = symmetrized_series(f, g, alpha, a, x, k, cfg)?;
        let reference = riemann_liouville_generic(&fg, alpha, a, x, cfg)?.value;
        defect.push(s.value - reference);
        values.push(s.value);
        residual = residual.max(s.residual);
        nonconvergent |= s.nonconvergent;
    }
    Ok(LeibnizReport {
        alpha,
        operator: DerivKind::RiemannLiouville,
        rule_form: RuleForm::SymmetrizedSeries,
        points: points.to_vec(),
        max_abs_defect: max_abs(&defect),
        values,
        defect,
        truncation_k: Some(k),
        series_residual: Some(residual),
        nonconvergent: Some(nonconvergent),
    })
}
