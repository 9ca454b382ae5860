//! Local fractional derivative as the `x → a⁺` limit of the Caputo derivative.
//!
//! For an `n`-times differentiable `f` the Caputo derivative behaves like
//! `f⁽ⁿ⁾(a)/Γ(n+1−α) · (x−a)^(n−α)` near `a`, so the limit is `0` for
//! non-integer `α` and `f⁽ⁿ⁾(a)` for `α = n`. The scan samples the Caputo
//! derivative on a geometric sequence `x_k = a + h0·rᵏ`, fits the log-log
//! slope and classifies the limit from its sign.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fracderiv::{caputo, QuadratureConfig};
use crate::funcmodel::FuncExpr;
use crate::specfun::{gamma, rgamma, FracOrder};

pub const DEFAULT_EXPONENT_TOL: f64 = 0.05;
/// Tolerance on `|limit − f⁽ⁿ⁾(a)|` for integer orders in [`verify_case`].
pub const INTEGER_LIMIT_TOL: f64 = 1e-6;
const MIN_USABLE: usize = 4;
const NOISE_FACTOR: f64 = 10.0;
const TAIL: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub h0: f64,
    pub ratio: f64,
    pub count: usize,
    pub quad: QuadratureConfig,
}

impl ScanConfig {
    pub fn new(h0: f64, ratio: f64, count: usize, quad: QuadratureConfig) -> Result<Self> {
        let cfg = ScanConfig {
            h0,
            ratio,
            count,
            quad,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h0 > 0.0 && self.h0.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "h0 must be positive, got {}",
                self.h0
            )));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "ratio must lie in (0, 1), got {}",
                self.ratio
            )));
        }
        if self.count == 0 {
            return Err(Error::InvalidConfig("count must be positive".into()));
        }
        let last = self.h0 * self.ratio.powi(self.count as i32 - 1);
        if last < self.quad.min_gap() {
            return Err(Error::InvalidConfig(format!(
                "smallest offset {last:e} is below the quadrature min_gap {:e}",
                self.quad.min_gap()
            )));
        }
        Ok(())
    }

    pub fn offsets(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |k| self.h0 * self.ratio.powi(k as i32))
    }
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            h0: 0.5,
            ratio: 0.5,
            count: 20,
            quad: QuadratureConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub x: f64,
    pub value: f64,
    /// Zero for closed-form values.
    pub est_error: f64,
    /// False when the error estimate exceeds `|value|`.
    pub usable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Classification {
    Zero,
    Finite { limit: f64 },
    Divergent,
}

impl Classification {
    /// The limit as a number: `0` for `Zero`, `None` for `Divergent`.
    pub fn limit(&self) -> Option<f64> {
        match *self {
            Classification::Zero => Some(0.0),
            Classification::Finite { limit } => Some(limit),
            Classification::Divergent => None,
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::Zero => f.write_str("Zero"),
            Classification::Finite { limit } => write!(f, "Finite({limit})"),
            Classification::Divergent => f.write_str("Divergent"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LfdReport {
    pub samples: Vec<Sample>,
    /// Slope of `log|value|` against `log(x − a)`; `None` when every sample
    /// sits below the noise floor.
    pub fitted_exponent: Option<f64>,
    pub fitted_prefactor: Option<f64>,
    pub classification: Classification,
    /// `n − α`
    pub theory_exponent: f64,
    /// `f⁽ⁿ⁾(a)/Γ(n+1−α)`, when `f⁽ⁿ⁾(a)` exists.
    pub theory_prefactor: Option<f64>,
}

/// Caputo derivative at `x_k = a + h0·rᵏ`, `k = 0..count`, in decreasing `x`.
pub fn lfd_scan(f: &FuncExpr, alpha: FracOrder, a: f64, cfg: &ScanConfig) -> Result<Vec<Sample>> {
    cfg.validate()?;
    let offsets: Vec<f64> = cfg.offsets().collect();
    offsets
        .par_iter()
        .map(|&h| {
            let x = a + h;
            let r = caputo(f, alpha, a, x, &cfg.quad)?;
            let est_error = r.est_error.unwrap_or(0.0);
            Ok(Sample {
                x,
                value: r.value,
                est_error,
                usable: !(est_error > r.value.abs()),
            })
        })
        .collect()
}

struct Fit {
    slope: f64,
    intercept: f64,
}

fn least_squares(points: &[(f64, f64)]) -> Fit {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y) in points {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let slope = sxy / sxx;
    Fit {
        slope,
        intercept: my - slope * mx,
    }
}

/// Fit and classify a scan taken about `a`.
pub fn lfd_classify(
    samples: &[Sample],
    a: f64,
    alpha: FracOrder,
    exponent_tol: f64,
) -> Result<LfdReport> {
    let usable: Vec<&Sample> = samples.iter().filter(|s| s.usable).collect();
    if usable.len() < MIN_USABLE {
        return Err(Error::InsufficientData {
            usable: usable.len(),
            required: MIN_USABLE,
        });
    }
    let above: Vec<&Sample> = usable
        .iter()
        .copied()
        .filter(|s| s.value != 0.0 && s.value.abs() > NOISE_FACTOR * s.est_error)
        .collect();

    let mut report = LfdReport {
        samples: samples.to_vec(),
        fitted_exponent: None,
        fitted_prefactor: None,
        classification: Classification::Zero,
        theory_exponent: alpha.complement(),
        theory_prefactor: None,
    };
    if above.len() < 2 {
        return Ok(report);
    }
    let points: Vec<(f64, f64)> = above
        .iter()
        .map(|s| ((s.x - a).ln(), s.value.abs().ln()))
        .collect();
    let fit = least_squares(&points);
    let sign = above.last().map_or(1.0, |s| s.value.signum());
    report.fitted_exponent = Some(fit.slope);
    report.fitted_prefactor = Some(sign * fit.intercept.exp());
    report.classification = if fit.slope > exponent_tol {
        Classification::Zero
    } else if fit.slope < -exponent_tol {
        Classification::Divergent
    } else {
        let tail = &usable[usable.len() - TAIL..];
        let limit = tail.iter().map(|s| s.value).sum::<f64>() / TAIL as f64;
        Classification::Finite { limit }
    };
    Ok(report)
}

/// Scan, classify and attach the theoretical prefactor.
pub fn lfd_estimate(
    f: &FuncExpr,
    alpha: FracOrder,
    a: f64,
    cfg: &ScanConfig,
    exponent_tol: f64,
) -> Result<LfdReport> {
    let samples = lfd_scan(f, alpha, a, cfg)?;
    let mut report = lfd_classify(&samples, a, alpha, exponent_tol)?;
    report.theory_prefactor = leading_derivative(f, alpha, a)
        .ok()
        .map(|d| d * rgamma(f64::from(alpha.n()) + 1.0 - alpha.alpha()));
    Ok(report)
}

/// `f⁽ⁿ⁾(a)`
pub fn leading_derivative(f: &FuncExpr, alpha: FracOrder, a: f64) -> Result<f64> {
    f.derivative(alpha.n())?.evaluate(a)
}

/// Exact limit for a sum of powers centered at `a`, from the power rule.
pub fn lfd_exact(f: &FuncExpr, alpha: FracOrder, a: f64) -> Result<Classification> {
    let terms = f.power_terms_at(a).ok_or_else(|| {
        Error::UnsupportedFunction(format!("{f} is not a sum of powers centered at {a}"))
    })?;
    let n = f64::from(alpha.n());
    let mut finite = 0.0;
    let mut any_finite = false;
    for (c, beta) in terms {
        if beta == beta.trunc() && beta <= n - 1.0 {
            continue;
        }
        if beta < n - 1.0 {
            return Err(Error::domain(format!(
                "order-{n} derivative of (x-a)^{beta} is not integrable at a"
            )));
        }
        let exponent = beta - alpha.alpha();
        if exponent < 0.0 {
            return Ok(Classification::Divergent);
        }
        if exponent == 0.0 {
            finite += c * gamma(beta + 1.0)?;
            any_finite = true;
        }
    }
    Ok(if any_finite {
        Classification::Finite { limit: finite }
    } else {
        Classification::Zero
    })
}

/// One row of a zero-or-`f⁽ⁿ⁾` check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremRow {
    pub function: String,
    pub a: f64,
    pub alpha: f64,
    pub classification: Classification,
    pub fitted_exponent: Option<f64>,
    pub theory_exponent: f64,
    /// `0` for non-integer orders, `f⁽ⁿ⁾(a)` for `α = n`.
    pub expected: f64,
    pub pass: bool,
}

/// Expected limit: `0` for non-integer `α`, `f⁽ⁿ⁾(a)` for integer `α`.
pub fn expected_limit(f: &FuncExpr, alpha: FracOrder, a: f64) -> Result<f64> {
    if alpha.is_integer() {
        leading_derivative(f, alpha, a)
    } else {
        Ok(0.0)
    }
}

/// Classify `f` at `a` and compare with the expected limit. Non-integer
/// orders pass on `Zero`; integer orders pass when the reported limit (a
/// `Zero` counts as `0`) is within [`INTEGER_LIMIT_TOL`] of `f⁽ⁿ⁾(a)`.
pub fn verify_case(
    f: &FuncExpr,
    alpha: FracOrder,
    a: f64,
    cfg: &ScanConfig,
    exponent_tol: f64,
) -> Result<TheoremRow> {
    let report = lfd_estimate(f, alpha, a, cfg, exponent_tol)?;
    let expected = expected_limit(f, alpha, a)?;
    let pass = if alpha.is_integer() {
        report
            .classification
            .limit()
            .is_some_and(|v| (v - expected).abs() <= INTEGER_LIMIT_TOL)
    } else {
        report.classification == Classification::Zero
    };
    Ok(TheoremRow {
        function: f.to_string(),
        a,
        alpha: alpha.alpha(),
        classification: report.classification,
        fitted_exponent: report.fitted_exponent,
        theory_exponent: report.theory_exponent,
        expected,
        pass,
    })
}
