//! Arithmetic, logarithmic, identric and p-logarithmic means, and checks of the
//! mean inequalities obtained by instantiating the midpoint bounds with
//! `x^n`, `−ln x` and `1/x`.

use std::fmt;

use serde::Serialize;

use crate::bounds::{conjugate_of, HOLDS_SLACK};
use crate::error::{Error, Result};
use crate::kernel::kernel_p_norm;

/// Pair of strictly positive reals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanPair {
    a: f64,
    b: f64,
}

impl MeanPair {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0 {
            Ok(Self { a, b })
        } else {
            Err(Error::InvalidMeanPair { a, b, reason: "both entries must be finite and positive" })
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }
}

pub fn mean_arithmetic(mp: &MeanPair) -> f64 {
    0.5 * (mp.a + mp.b)
}

pub fn mean_logarithmic(mp: &MeanPair) -> f64 {
    let (a, b) = (mp.a, mp.b);
    if a == b {
        return a;
    }
    (b - a) / ((b - a) / a).ln_1p()
}

/// Log of the identric mean, `(b ln b − a ln a)/(b − a) − 1`.
fn ln_identric(mp: &MeanPair) -> f64 {
    let (a, b) = (mp.a, mp.b);
    if a == b {
        return a.ln();
    }
    (b * b.ln() - a * a.ln()) / (b - a) - 1.0
}

/// Evaluated in log space, so `b^b` never materialises.
pub fn mean_identric(mp: &MeanPair) -> f64 {
    if mp.is_degenerate() {
        return mp.a;
    }
    ln_identric(mp).exp()
}

pub fn mean_p_logarithmic(mp: &MeanPair, p: f64) -> Result<f64> {
    if !p.is_finite() || p == 0.0 || p == -1.0 {
        return Err(Error::InvalidExponent { value: p, reason: "p-logarithmic mean needs p outside {-1, 0}" });
    }
    let (a, b) = (mp.a, mp.b);
    if a == b {
        return Ok(a);
    }
    Ok(a * power_mean_ratio(a, b, p).powf(1.0 / p))
}

/// `(b^{p+1} − a^{p+1}) / ((p+1)(b−a) a^p)` written through `expm1(·)` of `ln(b/a)` so it
/// stays accurate when `b` is close to `a`.
fn power_mean_ratio(a: f64, b: f64, p: f64) -> f64 {
    let rel = (b - a) / a;
    ((p + 1.0) * rel.ln_1p()).exp_m1() / ((p + 1.0) * rel)
}

/// Mean value of `x^n` over `[a, b]`, i.e. `L_n^n`, with `n = −1` giving `1/L`.
fn monomial_mean(mp: &MeanPair, n: i32) -> f64 {
    let (a, b) = (mp.a, mp.b);
    if a == b {
        return a.powi(n);
    }
    if n == -1 {
        return 1.0 / mean_logarithmic(mp);
    }
    a.powi(n) * power_mean_ratio(a, b, f64::from(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Proposition {
    /// `f(x) = x^n` under the Cauchy–Schwarz bound.
    P1,
    /// `f(x) = x^n` under the Hölder bound.
    P2,
    /// `f(x) = −ln x` under the Hölder bound.
    P3,
    /// `f(x) = 1/x` under the Hölder bound.
    P4,
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// `AsPrinted` follows the published statements literally; `AsDerived` follows what the
/// underlying bound actually yields. They differ only for P1 (missing square root on
/// the right) and P3 (sign of the left side).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    AsPrinted,
    AsDerived,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::AsPrinted => "as-printed",
            Variant::AsDerived => "as-derived",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PropositionReport {
    pub proposition: Proposition,
    pub variant: Variant,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

fn require_n(n: Option<i32>) -> Result<i32> {
    let n = n.ok_or(Error::MissingArgument("n"))?;
    if n == 0 {
        return Err(Error::InvalidParameter { id: "n".into(), reason: "need |n| >= 1".into() });
    }
    Ok(n)
}

fn require_kernel(q: Option<f64>) -> Result<(f64, f64)> {
    let q = q.ok_or(Error::MissingArgument("q"))?;
    let pair = conjugate_of(q)?;
    Ok((q, kernel_p_norm(pair.p)?))
}

fn arithmetic(x: f64, y: f64) -> f64 {
    0.5 * (x + y)
}

pub fn check_proposition(
    id: Proposition,
    mp: &MeanPair,
    n: Option<i32>,
    q: Option<f64>,
    variant: Variant,
) -> Result<PropositionReport> {
    let (a, b) = (mp.a, mp.b);
    let report =
        |lhs: f64, rhs: f64| PropositionReport { proposition: id, variant, lhs, rhs, holds: lhs <= rhs + HOLDS_SLACK };

    let (lhs, rhs) = match id {
        Proposition::P1 => {
            let n = require_n(n)?;
            if a == b {
                return Ok(report(0.0, 0.0));
            }
            check_order(mp)?;
            let lhs = (mean_arithmetic(mp).powi(n) - monomial_mean(mp, n)).abs();
            let base = arithmetic(a.powi(2 * (n - 1)), b.powi(2 * (n - 1)));
            let factor = match variant {
                Variant::AsPrinted => base,
                Variant::AsDerived => base.sqrt(),
            };
            (lhs, f64::from(n.abs()) * (b - a) / 6f64.sqrt() * factor)
        }
        Proposition::P2 => {
            let n = require_n(n)?;
            let (q, kernel) = require_kernel(q)?;
            if a == b {
                return Ok(report(0.0, 0.0));
            }
            check_order(mp)?;
            let lhs = (arithmetic(a.powi(n), b.powi(n)) - monomial_mean(mp, n)).abs();
            let e = q * f64::from(n - 1);
            let rhs = f64::from(n.abs()) * (b - a) * kernel * arithmetic(a.powf(e), b.powf(e)).powf(1.0 / q);
            (lhs, rhs)
        }
        Proposition::P3 => {
            let (q, kernel) = require_kernel(q)?;
            if a == b {
                return Ok(report(0.0, 0.0));
            }
            check_order(mp)?;
            let ln_i_over_a = ln_identric(mp) - mean_arithmetic(mp).ln();
            let lhs = match variant {
                Variant::AsPrinted => ln_i_over_a,
                Variant::AsDerived => ln_i_over_a.abs(),
            };
            (lhs, (b - a) / (a * b) * kernel * arithmetic(b.powf(q), a.powf(q)).powf(1.0 / q))
        }
        Proposition::P4 => {
            let (q, kernel) = require_kernel(q)?;
            if a == b {
                return Ok(report(0.0, 0.0));
            }
            check_order(mp)?;
            let lhs = (1.0 / mean_arithmetic(mp) - 1.0 / mean_logarithmic(mp)).abs();
            let ab = a * b;
            (lhs, (b - a) / (ab * ab) * kernel * arithmetic(a.powf(2.0 * q), b.powf(2.0 * q)).powf(1.0 / q))
        }
    };
    Ok(report(lhs, rhs))
}

fn check_order(mp: &MeanPair) -> Result<()> {
    if mp.a < mp.b {
        Ok(())
    } else {
        Err(Error::InvalidMeanPair { a: mp.a, b: mp.b, reason: "propositions require a < b" })
    }
}
