//! Fractional calculus on an exact function model.
//!
//! The crate computes left-sided Caputo and Riemann-Liouville derivatives of
//! functions built from power, sine, cosine and exponential terms, estimates
//! the local fractional derivative as the `x -> a` limit of the Caputo
//! derivative, and measures how far fractional operators are from obeying the
//! classical product rule.
//!
//! Module map:
//!
//! - [`specfun`]: gamma, reciprocal gamma, fractional binomial coefficients
//!   and the [`FracOrder`] type.
//! - [`funcmodel`]: [`FuncExpr`], its symbolic derivatives, Taylor
//!   polynomials, products and the text grammar.
//! - [`fracderiv`]: closed-form power rules, product-integration quadrature
//!   and the Riemann-Liouville/Caputo bridge.
//! - [`lfd`]: limit scans, log-log fits and classification.
//! - [`leibniz`]: product-rule defect, the integer Leibniz sum and the
//!   symmetrized generalized series.

// `!(x > y)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fracderiv;
pub mod funcmodel;
pub mod leibniz;
pub mod lfd;
pub mod specfun;

pub use error::{Error, Result};
pub use fracderiv::{DerivKind, DerivResult, Method, QuadratureConfig};
pub use funcmodel::{FuncExpr, TaylorPoly, Term};
pub use leibniz::{LeibnizReport, RuleForm};
pub use lfd::{Classification, LfdReport, Sample, ScanConfig};
pub use specfun::FracOrder;
