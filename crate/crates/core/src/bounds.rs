//! Midpoint gaps, the three midpoint-rule error bounds, the Hermite–Hadamard sandwich,
//! and numerical checks of the two kernel identities behind the bounds.
//!
//! Bounds are evaluated even when the sampled hypothesis check fails; the verdict is
//! carried in the report so violating inputs can be inspected rather than refused.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcat::{check_hypothesis_with, ConvexityOptions, ConvexityReport, FunctionDescriptor, Interval};
use crate::kernel::{kernel_p_norm, m};
use crate::quadrature::{integrate_1d_with, integrate_2d_with, QuadratureOptions};

/// Absolute slack allowed between a gap and its bound.
pub const HOLDS_SLACK: f64 = 1e-12;
/// Absolute slack allowed between consecutive sandwich terms.
pub const SANDWICH_SLACK: f64 = 1e-10;

/// Hölder exponents with `1/p + 1/q = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConjugatePair {
    pub p: f64,
    pub q: f64,
}

pub fn conjugate_of(q: f64) -> Result<ConjugatePair> {
    if !(q.is_finite() && q > 1.0) {
        return Err(Error::InvalidExponent { value: q, reason: "conjugate exponents need q > 1" });
    }
    Ok(ConjugatePair { p: q / (q - 1.0), q })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Theorem {
    /// Cauchy–Schwarz bound for convex `|f'|²`.
    T2,
    /// Hölder bound for convex `|f'|^q`.
    T3,
    /// Kırmacı–Özdemir reference bound.
    KO,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::T2 => "T2",
            Theorem::T3 => "T3",
            Theorem::KO => "KO",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Lemma {
    /// `mean − f(mid) = (b−a)·∫ m(t) f'(ta+(1−t)b) dt`.
    L1,
    /// The symmetrised double-integral form with factor `(b−a)/2`.
    L2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub theorem: Theorem,
    /// Exponent `q` fed to the hypothesis check (2 for [`Theorem::T2`]).
    pub q: f64,
    pub gap: f64,
    pub bound: f64,
    /// `gap / bound`; NaN when both vanish.
    pub ratio: f64,
    pub hypothesis: ConvexityReport,
    pub holds: bool,
}

impl BoundReport {
    fn new(theorem: Theorem, q: f64, gap: f64, bound: f64, hypothesis: ConvexityReport) -> Self {
        Self { theorem, q, gap, bound, ratio: gap / bound, hypothesis, holds: gap <= bound + HOLDS_SLACK }
    }

    /// True when the hypothesis check passed, so a failure would contradict the theorem.
    pub fn applicable(&self) -> bool {
        self.hypothesis.passed()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichReport {
    /// `f((a+b)/2)`
    pub lower: f64,
    /// `(1/(b−a)) ∫ f`
    pub middle: f64,
    /// `(f(a) + f(b)) / 2`
    pub upper: f64,
    pub ordered: bool,
}

/// Evaluation settings shared by gaps, bounds and identity checks.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Certifier {
    /// Quadrature settings; `tol` bounds the error of interval means.
    pub quadrature: QuadratureOptions,
    pub convexity: ConvexityOptions,
}

impl Certifier {
    pub fn with_tol(tol: f64) -> Self {
        Self { quadrature: QuadratureOptions::with_tol(tol), ..Self::default() }
    }

    /// `(1/(b−a)) ∫ f − f(mid)`, integrated as the mean of `f − f(mid)` to avoid cancellation.
    fn mean_minus_midpoint(&self, fd: &FunctionDescriptor, iv: &Interval) -> Result<f64> {
        fd.check_interval(iv)?;
        if iv.is_degenerate() {
            return Ok(0.0);
        }
        let mid = iv.midpoint();
        let f_mid = fd.eval(mid);
        let opts = QuadratureOptions { tol: self.quadrature.tol * iv.length(), ..self.quadrature };
        let integral = integrate_1d_with(|x| fd.eval(x) - f_mid, iv, &[mid], &opts)?.require_converged()?;
        Ok(integral.value / iv.length())
    }

    pub fn midpoint_gap(&self, fd: &FunctionDescriptor, iv: &Interval) -> Result<f64> {
        Ok(self.mean_minus_midpoint(fd, iv)?.abs())
    }

    /// A degenerate interval yields three copies of `f(a)`, ordered.
    pub fn hh_sandwich(&self, fd: &FunctionDescriptor, iv: &Interval) -> Result<SandwichReport> {
        let defect = self.mean_minus_midpoint(fd, iv)?;
        let lower = fd.eval(iv.midpoint());
        let middle = lower + defect;
        let upper = 0.5 * (fd.eval(iv.a()) + fd.eval(iv.b()));
        let ordered = lower <= middle + SANDWICH_SLACK && middle <= upper + SANDWICH_SLACK;
        Ok(SandwichReport { lower, middle, upper, ordered })
    }

    fn hypothesis(&self, fd: &FunctionDescriptor, iv: &Interval, q: f64) -> Result<ConvexityReport> {
        check_hypothesis_with(fd, iv, q, &self.convexity)
    }

    /// `((b−a)/√6) · ((|f'(a)|² + |f'(b)|²)/2)^{1/2}`
    pub fn theorem2(&self, fd: &FunctionDescriptor, iv: &Interval) -> Result<BoundReport> {
        let hypothesis = self.hypothesis(fd, iv, 2.0)?;
        let gap = self.midpoint_gap(fd, iv)?;
        let (da, db) = (fd.deriv(iv.a()), fd.deriv(iv.b()));
        let bound = iv.length() / 6f64.sqrt() * ((da * da + db * db) / 2.0).sqrt();
        Ok(BoundReport::new(Theorem::T2, 2.0, gap, bound, hypothesis))
    }

    /// `(b−a) · (2/((p+1)(p+2)))^{1/p} · ((|f'(a)|^q + |f'(b)|^q)/2)^{1/q}`
    pub fn theorem3(&self, fd: &FunctionDescriptor, iv: &Interval, q: f64) -> Result<BoundReport> {
        let pair = conjugate_of(q)?;
        let kernel = kernel_p_norm(pair.p)?;
        let hypothesis = self.hypothesis(fd, iv, q)?;
        let gap = self.midpoint_gap(fd, iv)?;
        let (da, db) = (fd.deriv(iv.a()).abs(), fd.deriv(iv.b()).abs());
        let mean = ((da.powf(q) + db.powf(q)) / 2.0).powf(1.0 / q);
        Ok(BoundReport::new(Theorem::T3, q, gap, iv.length() * kernel * mean, hypothesis))
    }

    /// `(3^{1−1/q}/8) · (b−a) · (|f'(a)| + |f'(b)|)`, with the hypothesis checked at exponent `q`.
    pub fn kirmaci_ozdemir(&self, fd: &FunctionDescriptor, iv: &Interval, q: f64) -> Result<BoundReport> {
        conjugate_of(q)?;
        let hypothesis = self.hypothesis(fd, iv, q)?;
        let gap = self.midpoint_gap(fd, iv)?;
        let constant = 3f64.powf(1.0 - 1.0 / q) / 8.0;
        let bound = constant * iv.length() * (fd.deriv(iv.a()).abs() + fd.deriv(iv.b()).abs());
        Ok(BoundReport::new(Theorem::KO, q, gap, bound, hypothesis))
    }

    pub fn bound(&self, theorem: Theorem, fd: &FunctionDescriptor, iv: &Interval, q: f64) -> Result<BoundReport> {
        match theorem {
            Theorem::T2 => self.theorem2(fd, iv),
            Theorem::T3 => self.theorem3(fd, iv, q),
            Theorem::KO => self.kirmaci_ozdemir(fd, iv, q),
        }
    }

    /// Absolute residual between the two sides of the chosen identity.
    pub fn verify_identity(&self, lemma: Lemma, fd: &FunctionDescriptor, iv: &Interval) -> Result<f64> {
        fd.check_interval(iv)?;
        if iv.is_degenerate() {
            return Err(Error::DegenerateInterval(iv.a()));
        }
        let defect = self.mean_minus_midpoint(fd, iv)?;
        let df = |t: f64| fd.deriv(iv.convex_combination(t));
        let (lhs, rhs) = match lemma {
            Lemma::L1 => {
                let r = integrate_1d_with(|t| m(t) * df(t), &Interval::unit(), &[0.5], &self.quadrature)?
                    .require_converged()?;
                (defect, iv.length() * r.value)
            }
            Lemma::L2 => {
                let r = integrate_2d_with(|t, s| (df(t) - df(s)) * (m(s) - m(t)), &[0.5], &[0.5], &self.quadrature)?
                    .require_converged()?;
                (-defect, iv.length() / 2.0 * r.value)
            }
        };
        Ok((lhs - rhs).abs())
    }
}

pub fn midpoint_gap(fd: &FunctionDescriptor, iv: &Interval, tol: f64) -> Result<f64> {
    Certifier::with_tol(tol).midpoint_gap(fd, iv)
}

pub fn hh_sandwich(fd: &FunctionDescriptor, iv: &Interval, tol: f64) -> Result<SandwichReport> {
    Certifier::with_tol(tol).hh_sandwich(fd, iv)
}

pub fn bound_theorem2(fd: &FunctionDescriptor, iv: &Interval) -> Result<BoundReport> {
    Certifier::default().theorem2(fd, iv)
}

pub fn bound_theorem3(fd: &FunctionDescriptor, iv: &Interval, q: f64) -> Result<BoundReport> {
    Certifier::default().theorem3(fd, iv, q)
}

pub fn bound_kirmaci_ozdemir(fd: &FunctionDescriptor, iv: &Interval, q: f64) -> Result<BoundReport> {
    Certifier::default().kirmaci_ozdemir(fd, iv, q)
}

pub fn verify_identity(lemma: Lemma, fd: &FunctionDescriptor, iv: &Interval, tol: f64) -> Result<f64> {
    Certifier::with_tol(tol).verify_identity(lemma, fd, iv)
}
