//! Exact function model closed under integer-order differentiation.
//!
//! A [`FuncExpr`] is a finite sum of [`Term`]s. Every derivative of such a sum
//! is again such a sum, so `f⁽ⁿ⁾` and the Taylor coefficients `f⁽ᵏ⁾(a)/k!` are
//! computed symbolically and only evaluated at the end.
//!
//! Text form, parsed by [`FuncExpr::from_str`] and produced by `Display`:
//!
//! ```text
//! pow(c=1,x0=0,beta=2.5) + sin(c=1,w=2,phi=0) + cos(c=1,w=1,phi=0) + exp(c=1,lambda=1)
//! ```
//!
//! Missing keys take defaults (`c=1`, `x0=0`, `w=1`, `phi=0`, `lambda=1`);
//! `beta` is required. The empty sum is written `0`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One summand of a [`FuncExpr`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Term {
    /// `c · (x − x0)^beta`, `beta > −1`.
    Power { c: f64, x0: f64, beta: f64 },
    /// `c · sin(omega·x + phi)`
    Sin { c: f64, omega: f64, phi: f64 },
    /// `c · cos(omega·x + phi)`
    Cos { c: f64, omega: f64, phi: f64 },
    /// `c · exp(lambda·x)`
    Exp { c: f64, lambda: f64 },
}

fn is_integer(v: f64) -> bool {
    v == v.trunc()
}

// -0.0 and 0.0 must collide as keys.
fn key_bits(v: f64) -> u64 {
    (v + 0.0).to_bits()
}

#[derive(PartialEq, Eq, Clone, Copy)]
enum TermKey {
    Power(u64, u64),
    Sin(u64, u64),
    Cos(u64, u64),
    Exp(u64),
}

impl Term {
    pub fn coefficient(&self) -> f64 {
        match *self {
            Term::Power { c, .. }
            | Term::Sin { c, .. }
            | Term::Cos { c, .. }
            | Term::Exp { c, .. } => c,
        }
    }

    fn coefficient_mut(&mut self) -> &mut f64 {
        match self {
            Term::Power { c, .. }
            | Term::Sin { c, .. }
            | Term::Cos { c, .. }
            | Term::Exp { c, .. } => c,
        }
    }

    fn key(&self) -> TermKey {
        match *self {
            Term::Power { x0, beta, .. } => TermKey::Power(key_bits(x0), key_bits(beta)),
            Term::Sin { omega, phi, .. } => TermKey::Sin(key_bits(omega), key_bits(phi)),
            Term::Cos { omega, phi, .. } => TermKey::Cos(key_bits(omega), key_bits(phi)),
            Term::Exp { lambda, .. } => TermKey::Exp(key_bits(lambda)),
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = match *self {
            Term::Power { c, x0, beta } => {
                if beta <= -1.0 {
                    return Err(Error::domain(format!("power exponent {beta} must be > -1")));
                }
                c.is_finite() && x0.is_finite() && beta.is_finite()
            }
            Term::Sin { c, omega, phi } | Term::Cos { c, omega, phi } => {
                c.is_finite() && omega.is_finite() && phi.is_finite()
            }
            Term::Exp { c, lambda } => c.is_finite() && lambda.is_finite(),
        };
        if finite {
            Ok(())
        } else {
            Err(Error::domain(format!("non-finite parameter in {self}")))
        }
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        match *self {
            Term::Power { c, x0, beta } => {
                let d = x - x0;
                if is_integer(beta) {
                    if beta < 0.0 && d == 0.0 {
                        return Err(Error::domain(format!("{self} is singular at x = {x}")));
                    }
                    Ok(c * d.powi(beta as i32))
                } else if d < 0.0 {
                    Err(Error::domain(format!(
                        "{self} with non-integer exponent is undefined at x = {x} < x0"
                    )))
                } else if d == 0.0 && beta < 0.0 {
                    Err(Error::domain(format!("{self} is singular at x = {x}")))
                } else {
                    Ok(c * d.powf(beta))
                }
            }
            Term::Sin { c, omega, phi } => Ok(c * (omega * x + phi).sin()),
            Term::Cos { c, omega, phi } => Ok(c * (omega * x + phi).cos()),
            Term::Exp { c, lambda } => Ok(c * (lambda * x).exp()),
        }
    }

    /// First derivative. `None` is the zero function.
    fn derivative_once(&self) -> Result<Option<Term>> {
        let t = match *self {
            Term::Power { c, x0, beta } => {
                if beta == 0.0 {
                    return Ok(None);
                }
                let next = beta - 1.0;
                if next <= -1.0 {
                    return Err(Error::domain(format!(
                        "derivative of {self} has exponent {next} <= -1"
                    )));
                }
                Term::Power {
                    c: c * beta,
                    x0,
                    beta: next,
                }
            }
            Term::Sin { c, omega, phi } => Term::Cos {
                c: c * omega,
                omega,
                phi,
            },
            Term::Cos { c, omega, phi } => Term::Sin {
                c: -c * omega,
                omega,
                phi,
            },
            Term::Exp { c, lambda } => Term::Exp {
                c: c * lambda,
                lambda,
            },
        };
        Ok((t.coefficient() != 0.0).then_some(t))
    }

    pub fn derivative(&self, k: u32) -> Result<Option<Term>> {
        let mut cur = Some(*self);
        for _ in 0..k {
            match cur {
                Some(t) => cur = t.derivative_once()?,
                None => break,
            }
        }
        Ok(cur)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Term::Power { c, x0, beta } => write!(f, "pow(c={c},x0={x0},beta={beta})"),
            Term::Sin { c, omega, phi } => write!(f, "sin(c={c},w={omega},phi={phi})"),
            Term::Cos { c, omega, phi } => write!(f, "cos(c={c},w={omega},phi={phi})"),
            Term::Exp { c, lambda } => write!(f, "exp(c={c},lambda={lambda})"),
        }
    }
}

/// Immutable sum of terms in canonical form: no zero coefficients and one
/// term per (kind, center, exponent/frequency) key, in first-seen order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Term>", into = "Vec<Term>")]
pub struct FuncExpr {
    terms: Vec<Term>,
}

impl TryFrom<Vec<Term>> for FuncExpr {
    type Error = Error;

    fn try_from(terms: Vec<Term>) -> Result<Self> {
        FuncExpr::from_terms(terms)
    }
}

impl From<FuncExpr> for Vec<Term> {
    fn from(f: FuncExpr) -> Self {
        f.terms
    }
}

impl FuncExpr {
    pub fn zero() -> Self {
        FuncExpr::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Result<Self> {
        let mut out: Vec<Term> = Vec::new();
        for t in terms {
            t.validate()?;
            let key = t.key();
            match out.iter_mut().find(|u| u.key() == key) {
                Some(existing) => *existing.coefficient_mut() += t.coefficient(),
                None => out.push(t),
            }
        }
        out.retain(|t| t.coefficient() != 0.0);
        Ok(FuncExpr { terms: out })
    }

    // Terms already validated; only collection and pruning remain.
    fn collect(terms: impl IntoIterator<Item = Term>) -> Self {
        FuncExpr::from_terms(terms).expect("terms derived from a valid FuncExpr")
    }

    pub fn power(c: f64, x0: f64, beta: f64) -> Result<Self> {
        FuncExpr::from_terms([Term::Power { c, x0, beta }])
    }

    pub fn constant(c: f64) -> Self {
        FuncExpr::collect([Term::Power {
            c,
            x0: 0.0,
            beta: 0.0,
        }])
    }

    /// `c · (x − x0)^k` for a non-negative integer `k`.
    pub fn monomial(c: f64, x0: f64, k: u32) -> Self {
        FuncExpr::collect([Term::Power {
            c,
            x0,
            beta: f64::from(k),
        }])
    }

    /// Polynomial `Σ coeffs[k] (x − x0)^k`.
    pub fn polynomial(x0: f64, coeffs: &[f64]) -> Self {
        FuncExpr::collect(coeffs.iter().enumerate().map(|(k, &c)| Term::Power {
            c,
            x0,
            beta: k as f64,
        }))
    }

    pub fn sin(c: f64, omega: f64, phi: f64) -> Self {
        FuncExpr::collect([Term::Sin { c, omega, phi }])
    }

    pub fn cos(c: f64, omega: f64, phi: f64) -> Self {
        FuncExpr::collect([Term::Cos { c, omega, phi }])
    }

    pub fn exp(c: f64, lambda: f64) -> Self {
        FuncExpr::collect([Term::Exp { c, lambda }])
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: f64) -> Self {
        FuncExpr::collect(self.terms.iter().map(|t| {
            let mut t = *t;
            *t.coefficient_mut() *= s;
            t
        }))
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        self.terms
            .iter()
            .try_fold(0.0, |acc, t| Ok(acc + t.evaluate(x)?))
    }

    /// Exact `k`-th derivative.
    pub fn derivative(&self, k: u32) -> Result<Self> {
        let mut out = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if let Some(d) = t.derivative(k)? {
                out.push(d);
            }
        }
        Ok(FuncExpr::collect(out))
    }

    /// If every term is a power term centered at `a`, the `(c, beta)` pairs.
    /// Constants are centered anywhere.
    pub fn power_terms_at(&self, a: f64) -> Option<Vec<(f64, f64)>> {
        self.terms
            .iter()
            .map(|t| match *t {
                Term::Power { c, x0, beta } if x0 == a || beta == 0.0 => Some((c, beta)),
                _ => None,
            })
            .collect()
    }

    /// Common center and integer-exponent coefficient table, when `self` is a
    /// polynomial in `(x − x0)`. The zero function has no center.
    fn as_polynomial(&self) -> Option<(Option<f64>, Vec<f64>)> {
        let mut center = None;
        let mut coeffs = Vec::new();
        for t in &self.terms {
            let Term::Power { c, x0, beta } = *t else {
                return None;
            };
            if beta < 0.0 || !is_integer(beta) {
                return None;
            }
            match center {
                None => center = Some(x0),
                Some(x) if x == x0 => {}
                Some(_) => return None,
            }
            let k = beta as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, 0.0);
            }
            coeffs[k] += c;
        }
        Some((center, coeffs))
    }

    /// Expanded product of two same-center integer-power polynomials.
    pub fn poly_product(&self, other: &FuncExpr) -> Result<FuncExpr> {
        let unsupported = || {
            Error::UnsupportedProduct(format!(
                "({self}) * ({other}) is not a same-center polynomial product"
            ))
        };
        let (ca, pa) = self.as_polynomial().ok_or_else(unsupported)?;
        let (cb, pb) = other.as_polynomial().ok_or_else(unsupported)?;
        let center = match (ca, cb) {
            (Some(x), Some(y)) if x != y => return Err(unsupported()),
            (Some(x), _) | (None, Some(x)) => x,
            (None, None) => return Ok(FuncExpr::zero()),
        };
        if pa.is_empty() || pb.is_empty() {
            return Ok(FuncExpr::zero());
        }
        let mut prod = vec![0.0; pa.len() + pb.len() - 1];
        for (i, &x) in pa.iter().enumerate() {
            for (j, &y) in pb.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        Ok(FuncExpr::polynomial(center, &prod))
    }

    /// Taylor polynomial of degree `n − 1` about `a`.
    pub fn taylor_poly(&self, a: f64, n: u32) -> Result<TaylorPoly> {
        let mut coeffs = Vec::with_capacity(n as usize);
        let mut d = self.clone();
        let mut factorial = 1.0;
        for k in 0..n {
            if k > 0 {
                d = d.derivative(1)?;
                factorial *= f64::from(k);
            }
            coeffs.push(d.evaluate(a)? / factorial);
        }
        Ok(TaylorPoly { center: a, coeffs })
    }
}

impl Add for FuncExpr {
    type Output = FuncExpr;

    fn add(self, rhs: FuncExpr) -> FuncExpr {
        FuncExpr::collect(self.terms.into_iter().chain(rhs.terms))
    }
}

impl Add for &FuncExpr {
    type Output = FuncExpr;

    fn add(self, rhs: &FuncExpr) -> FuncExpr {
        self.clone() + rhs.clone()
    }
}

impl Neg for FuncExpr {
    type Output = FuncExpr;

    fn neg(self) -> FuncExpr {
        self.scale(-1.0)
    }
}

impl Sub for FuncExpr {
    type Output = FuncExpr;

    fn sub(self, rhs: FuncExpr) -> FuncExpr {
        self + (-rhs)
    }
}

impl Mul<&FuncExpr> for f64 {
    type Output = FuncExpr;

    fn mul(self, rhs: &FuncExpr) -> FuncExpr {
        rhs.scale(self)
    }
}

impl fmt::Display for FuncExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Taylor polynomial `Σ_{k<n} coeffs[k] (x − center)^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorPoly {
    pub center: f64,
    /// `f⁽ᵏ⁾(center) / k!`
    pub coeffs: Vec<f64>,
}

impl TaylorPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let d = x - self.center;
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * d + c)
    }

    pub fn to_func_expr(&self) -> FuncExpr {
        FuncExpr::polynomial(self.center, &self.coeffs)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(ch) = self.src[self.pos..].chars().next() {
            if !ch.is_whitespace() {
                break;
            }
            self.pos += ch.len_utf8();
        }
    }

    fn eat(&mut self, ch: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(ch) {
            self.pos += ch.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        if self.eat(ch) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{ch}'")))
        }
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || matches!(c, '.' | '-' | '+')))
            .unwrap_or(rest.len());
        let text = &rest[..len];
        let v: f64 = text
            .parse()
            .map_err(|_| self.err(format!("invalid number '{text}'")))?;
        self.pos += len;
        Ok(v)
    }

    fn term(&mut self) -> Result<Term> {
        let start = self.pos;
        let name = self.word();
        let allowed: &[&str] = match name {
            "pow" => &["c", "x0", "beta"],
            "sin" | "cos" => &["c", "w", "phi"],
            "exp" => &["c", "lambda"],
            "" => return Err(self.err("expected a term")),
            other => {
                self.pos = start;
                return Err(self.err(format!("unknown term '{other}'")));
            }
        };
        self.expect('(')?;
        let mut vals: Vec<(&str, f64)> = Vec::new();
        if !self.eat(')') {
            loop {
                let key_pos = self.pos;
                let key = self.word();
                if !allowed.contains(&key) {
                    self.pos = key_pos;
                    return Err(self.err(format!("unknown key '{key}' for {name}")));
                }
                if vals.iter().any(|(k, _)| *k == key) {
                    return Err(self.err(format!("duplicate key '{key}'")));
                }
                self.expect('=')?;
                vals.push((key, self.number()?));
                if self.eat(')') {
                    break;
                }
                self.expect(',')?;
            }
        }
        let get = |k: &str, default: f64| {
            vals.iter()
                .find(|(key, _)| *key == k)
                .map_or(default, |(_, v)| *v)
        };
        let term = match name {
            "pow" => {
                if !vals.iter().any(|(k, _)| *k == "beta") {
                    return Err(self.err("pow requires beta"));
                }
                Term::Power {
                    c: get("c", 1.0),
                    x0: get("x0", 0.0),
                    beta: get("beta", 0.0),
                }
            }
            "sin" => Term::Sin {
                c: get("c", 1.0),
                omega: get("w", 1.0),
                phi: get("phi", 0.0),
            },
            "cos" => Term::Cos {
                c: get("c", 1.0),
                omega: get("w", 1.0),
                phi: get("phi", 0.0),
            },
            _ => Term::Exp {
                c: get("c", 1.0),
                lambda: get("lambda", 1.0),
            },
        };
        term.validate().map_err(|e| self.err(e.to_string()))?;
        Ok(term)
    }

    fn expr(&mut self) -> Result<FuncExpr> {
        self.skip_ws();
        if self.src[self.pos..].trim() == "0" {
            self.pos = self.src.len();
            return Ok(FuncExpr::zero());
        }
        let mut terms = vec![self.term()?];
        while self.eat('+') {
            terms.push(self.term()?);
        }
        self.skip_ws();
        if self.pos != self.src.len() {
            return Err(self.err("unexpected trailing input"));
        }
        FuncExpr::from_terms(terms)
    }
}

impl FromStr for FuncExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Parser { src: s, pos: 0 }.expr()
    }
}
