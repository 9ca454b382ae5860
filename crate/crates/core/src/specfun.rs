//! Gamma-function machinery and the fractional order type.
//!
//! Every coefficient in the fractional power rules is a ratio of gamma
//! functions, frequently with a pole in the denominator. [`rgamma`] is the
//! workhorse: it is entire, so a coefficient such as `Γ(β+1)/Γ(β−α+1)` is
//! computed as `gamma(β+1) * rgamma(β−α+1)` and vanishes exactly where the
//! classical formula has a pole.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;

// Lanczos coefficients for g = 7, n = 9.
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Fractional order `α > 0` together with its integer ceiling `n`,
/// the unique integer with `n − 1 < α ≤ n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FracOrder {
    alpha: f64,
    n: u32,
}

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 || alpha > f64::from(u32::MAX) {
            return Err(Error::InvalidOrder(alpha));
        }
        let n = alpha.ceil() as u32;
        Ok(FracOrder { alpha, n })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Number of classical derivatives the Caputo form consumes.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_integer(&self) -> bool {
        self.alpha == f64::from(self.n)
    }

    /// `n − α`, the order of the fractional integral applied to `f⁽ⁿ⁾`.
    pub fn complement(&self) -> f64 {
        f64::from(self.n) - self.alpha
    }
}

impl TryFrom<f64> for FracOrder {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        FracOrder::new(alpha)
    }
}

impl From<FracOrder> for f64 {
    fn from(order: FracOrder) -> f64 {
        order.alpha
    }
}

impl std::fmt::Display for FracOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.alpha)
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// `sin(πx)` with exact zeros at the integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x.round();
    let s = (PI * (x - r)).sin();
    if r.rem_euclid(2.0) == 0.0 {
        s
    } else {
        -s
    }
}

/// Lanczos evaluation for `x ≥ 0.5`.
fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let sum = LANCZOS_COEF
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_COEF[0], |acc, (i, &c)| acc + c / (z + i as f64));
    let t = z + LANCZOS_G + 0.5;
    // t^(z+1/2) overflows long before Γ does; split the power in half.
    let half_pow = t.powf((z + 0.5) / 2.0);
    (2.0 * PI).sqrt() * half_pow * (half_pow * (-t).exp()) * sum
}

/// Γ(x) for real `x`. Uses the reflection formula below `x = 0.5`.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Ok(f64::NAN);
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x == x.floor() && x <= 171.0 {
        // (x−1)! by direct product; exact through 22!.
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return Ok(acc);
    }
    if x < 0.5 {
        Ok(PI / (sin_pi(x) * lanczos(1.0 - x)))
    } else {
        Ok(lanczos(x))
    }
}

/// 1/Γ(x); exactly zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x < 0.5 {
        // 1/Γ(x) = Γ(1−x) sin(πx) / π
        lanczos(1.0 - x) * sin_pi(x) / PI
    } else {
        match gamma(x) {
            Ok(g) => 1.0 / g,
            Err(_) => unreachable!("x >= 0.5 is never a pole"),
        }
    }
}

/// Which normalisation of the fractional binomial coefficient to return.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinomialConvention {
    /// `Γ(α+1) / (Γ(α−k+1) Γ(k+1))`, the integer-order Leibniz coefficient.
    Unhalved,
    /// Half of [`BinomialConvention::Unhalved`], used by the symmetrized
    /// generalized Leibniz series.
    Halved,
}

/// Fractional binomial coefficient `Γ(α+1) / (Γ(α−k+1) Γ(k+1))`, optionally
/// halved.
///
/// Evaluated as the falling factorial `∏ (α−j)` over `k!`, which equals
/// the gamma ratio for `α > 0` and is exactly zero when `α` is an integer
/// smaller than `k`.
pub fn frac_binomial(alpha: f64, k: u32, convention: BinomialConvention) -> f64 {
    let mut num = 1.0;
    let mut den = 1.0;
    for j in 0..k {
        let j = f64::from(j);
        num *= alpha - j;
        den *= j + 1.0;
    }
    let c = num / den;
    match convention {
        BinomialConvention::Unhalved => c,
        BinomialConvention::Halved => 0.5 * c,
    }
}
