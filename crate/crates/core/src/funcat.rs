//! Closed catalog of differentiable test functions and sampled convexity checks.
//!
//! Every catalog entry carries its derivative in closed form, so bound
//! evaluators can read `f'(a)` and `f'(b)` exactly instead of differencing.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Number of interior secant weights `t = k/8`, `k = 1..=7`.
const SECANT_DIVISIONS: usize = 8;

/// Closed integration interval `[a, b]` with `a <= b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInterval { a, b, reason: "endpoints must be finite" });
        }
        if a > b {
            return Err(Error::InvalidInterval { a, b, reason: "left endpoint exceeds right endpoint" });
        }
        Ok(Self { a, b })
    }

    /// The unit interval `[0, 1]`.
    pub fn unit() -> Self {
        Self { a: 0.0, b: 1.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    /// Point `t·a + (1−t)·b`, the parametrisation used by both integral identities.
    pub fn convex_combination(&self, t: f64) -> f64 {
        t * self.a + (1.0 - t) * self.b
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

/// Open subset of the reals on which a catalog function and its derivative are finite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    Reals,
    Positive,
}

impl Domain {
    pub fn contains(&self, x: f64) -> bool {
        match self {
            Domain::Reals => x.is_finite(),
            Domain::Positive => x.is_finite() && x > 0.0,
        }
    }

    /// Range used for random interval generation when none is configured.
    pub fn default_range(&self) -> (f64, f64) {
        match self {
            Domain::Reals => (-3.0, 3.0),
            Domain::Positive => (0.1, 5.0),
        }
    }

    pub fn contains_interval(&self, iv: &Interval) -> Result<()> {
        for x in [iv.a(), iv.b()] {
            if !self.contains(x) {
                return Err(Error::DomainViolation { x });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Family {
    Pow(i32),
    Exp,
    Ln,
    Recip,
    NegLn,
    AbsPow(f64),
}

/// A catalog entry: `f`, its analytic derivative `f'`, and the domain both live on.
///
/// Descriptors are immutable. [`FunctionDescriptor::scaled`] yields `c·f`, which keeps
/// the derivative analytic.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionDescriptor {
    id: String,
    parameters: Vec<f64>,
    family: Family,
    scale: f64,
    domain: Domain,
}

/// Catalog ids accepted by [`lookup_function`].
pub const CATALOG_IDS: [&str; 6] = ["pow", "exp", "ln", "recip", "neg_ln", "abs_pow"];

/// Resolve a catalog id and its parameters into a descriptor.
pub fn lookup_function(id: &str, parameters: &[f64]) -> Result<FunctionDescriptor> {
    let invalid = |reason: String| Error::InvalidParameter { id: id.to_string(), reason };
    let expect_arity = |n: usize| {
        if parameters.len() == n {
            Ok(())
        } else {
            Err(invalid(format!("expected {n} parameter(s), got {}", parameters.len())))
        }
    };

    let family = match id {
        "pow" => {
            expect_arity(1)?;
            let n = parameters[0];
            if !n.is_finite() || n.fract() != 0.0 || n.abs() > i32::MAX as f64 {
                return Err(invalid(format!("exponent {n} is not an integer")));
            }
            if n == 0.0 {
                return Err(invalid("exponent must satisfy |n| >= 1".into()));
            }
            Family::Pow(n as i32)
        }
        "exp" => {
            expect_arity(0)?;
            Family::Exp
        }
        "ln" => {
            expect_arity(0)?;
            Family::Ln
        }
        "recip" => {
            expect_arity(0)?;
            Family::Recip
        }
        "neg_ln" => {
            expect_arity(0)?;
            Family::NegLn
        }
        "abs_pow" => {
            expect_arity(1)?;
            let r = parameters[0];
            if !(r.is_finite() && r >= 2.0) {
                return Err(invalid(format!("exponent {r} must satisfy r >= 2")));
            }
            Family::AbsPow(r)
        }
        _ => return Err(Error::UnknownFunction(id.to_string())),
    };

    let domain = match family {
        Family::Pow(n) if n < 0 => Domain::Positive,
        Family::Pow(_) | Family::Exp | Family::AbsPow(_) => Domain::Reals,
        Family::Ln | Family::Recip | Family::NegLn => Domain::Positive,
    };

    Ok(FunctionDescriptor { id: id.to_string(), parameters: parameters.to_vec(), family, scale: 1.0, domain })
}

impl FunctionDescriptor {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn parameters(&self) -> &[f64] {
        &self.parameters
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Descriptor for `c·f`.
    pub fn scaled(&self, c: f64) -> Self {
        Self { scale: self.scale * c, ..self.clone() }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let v = match self.family {
            Family::Pow(n) => x.powi(n),
            Family::Exp => x.exp(),
            Family::Ln => x.ln(),
            Family::Recip => 1.0 / x,
            Family::NegLn => -x.ln(),
            Family::AbsPow(r) => x.abs().powf(r),
        };
        self.scale * v
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let v = match self.family {
            Family::Pow(1) => 1.0,
            Family::Pow(n) => n as f64 * x.powi(n - 1),
            Family::Exp => x.exp(),
            Family::Ln => 1.0 / x,
            Family::Recip => -1.0 / (x * x),
            Family::NegLn => -1.0 / x,
            Family::AbsPow(r) => {
                if x == 0.0 {
                    0.0
                } else {
                    r * x.signum() * x.abs().powf(r - 1.0)
                }
            }
        };
        self.scale * v
    }

    /// Fails with [`Error::DomainViolation`] unless both endpoints lie in the domain.
    pub fn check_interval(&self, iv: &Interval) -> Result<()> {
        self.domain.contains_interval(iv)
    }
}

impl fmt::Display for FunctionDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale != 1.0 {
            write!(f, "{}*", self.scale)?;
        }
        f.write_str(&self.id)?;
        for (i, p) in self.parameters.iter().enumerate() {
            f.write_str(if i == 0 { ":" } else { "," })?;
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Parses the `name` / `name:param1[,param2]` grammar, e.g. `pow:3` or `abs_pow:2.5`.
impl FromStr for FunctionDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, params) = match s.split_once(':') {
            Some((name, rest)) => {
                let params = rest
                    .split(',')
                    .map(|p| {
                        p.trim().parse::<f64>().map_err(|_| Error::InvalidParameter {
                            id: name.to_string(),
                            reason: format!("cannot parse `{p}` as a number"),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                (name, params)
            }
            None => (s, Vec::new()),
        };
        lookup_function(name, &params)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NoViolationFound,
    Violated,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NoViolationFound => "no-violation-found",
            Verdict::Violated => "violated",
        })
    }
}

/// Outcome of a sampled secant-inequality test.
///
/// `worst_violation` is the most negative secant slack
/// `t·g(x) + (1−t)·g(y) − g(tx + (1−t)y)` divided by
/// `max(1, |t·g(x) + (1−t)·g(y)|, |g(tx + (1−t)y)|)`, or 0 when no slack is negative.
/// A no-violation verdict is evidence of convexity on the sampled grid, not a proof.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub verdict: Verdict,
    pub worst_violation: f64,
    pub witness: Option<(f64, f64, f64)>,
    pub samples: usize,
}

impl ConvexityReport {
    /// Report for a single point, where convexity holds vacuously.
    pub fn vacuous() -> Self {
        Self { verdict: Verdict::NoViolationFound, worst_violation: 0.0, witness: None, samples: 0 }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::NoViolationFound
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityOptions {
    /// Uniform grid points per axis for `x` and `y`.
    pub grid_points: usize,
    /// Violation threshold on the normalised slack.
    pub tol: f64,
}

impl Default for ConvexityOptions {
    fn default() -> Self {
        Self { grid_points: 257, tol: 1e-12 }
    }
}

/// Tests `g(tx + (1−t)y) <= t·g(x) + (1−t)·g(y)` for every pair of grid points
/// `x < y` and `t ∈ {1/8, …, 7/8}`, plus midpoint convexity between neighbours of
/// the refined grid.
///
/// Every point `tx + (1−t)y` with `t = k/8` lands on the grid refined eightfold, so
/// `g` is evaluated exactly once per refined node.
pub fn check_convexity<G>(g: G, iv: &Interval, grid_points: usize, tol: f64) -> Result<ConvexityReport>
where
    G: Fn(f64) -> f64,
{
    if iv.is_degenerate() {
        return Err(Error::DegenerateInterval(iv.a()));
    }
    if grid_points < 3 {
        return Err(Error::InvalidParameter {
            id: "grid_points".into(),
            reason: format!("need at least 3 grid points, got {grid_points}"),
        });
    }
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::InvalidParameter { id: "tol".into(), reason: format!("tolerance {tol} must be >= 0") });
    }

    let last = SECANT_DIVISIONS * (grid_points - 1);
    let node = |k: usize| {
        if k == last {
            iv.b()
        } else {
            iv.a() + iv.length() * (k as f64 / last as f64)
        }
    };
    let values = (0..=last)
        .map(|k| {
            let x = node(k);
            let v = g(x);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::DomainViolation { x })
            }
        })
        .collect::<Result<Vec<f64>>>()?;

    let mut worst = 0.0_f64;
    let mut witness = None;
    let mut samples = 0usize;
    let mut test = |xi: usize, yi: usize, zi: usize, t: f64| {
        let chord = t * values[xi] + (1.0 - t) * values[yi];
        let gz = values[zi];
        let slack = (chord - gz) / chord.abs().max(gz.abs()).max(1.0);
        samples += 1;
        if slack < worst {
            worst = slack;
            witness = Some((node(xi), node(yi), t));
        }
    };

    for i in 0..grid_points {
        for j in (i + 1)..grid_points {
            for k in 1..SECANT_DIVISIONS {
                let t = k as f64 / SECANT_DIVISIONS as f64;
                let z = k * i + (SECANT_DIVISIONS - k) * j;
                test(SECANT_DIVISIONS * i, SECANT_DIVISIONS * j, z, t);
            }
        }
    }
    for z in 1..last {
        test(z - 1, z + 1, z, 0.5);
    }

    let verdict = if worst < -tol { Verdict::Violated } else { Verdict::NoViolationFound };
    Ok(ConvexityReport { verdict, worst_violation: worst, witness, samples })
}

/// Sampled check that `|f'|^q` is convex on `iv`, the hypothesis of both midpoint bounds.
pub fn check_hypothesis(fd: &FunctionDescriptor, iv: &Interval, q: f64) -> Result<ConvexityReport> {
    check_hypothesis_with(fd, iv, q, &ConvexityOptions::default())
}

pub fn check_hypothesis_with(
    fd: &FunctionDescriptor,
    iv: &Interval,
    q: f64,
    opts: &ConvexityOptions,
) -> Result<ConvexityReport> {
    if !(q.is_finite() && q >= 1.0) {
        return Err(Error::InvalidExponent { value: q, reason: "hypothesis exponent must satisfy q >= 1" });
    }
    fd.check_interval(iv)?;
    if iv.is_degenerate() {
        return Ok(ConvexityReport::vacuous());
    }
    check_convexity(|x| fd.deriv(x).abs().powf(q), iv, opts.grid_points, opts.tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_check<G: Fn(f64) -> f64>(g: G, a: f64, b: f64) -> ConvexityReport {
        let opts = ConvexityOptions::default();
        check_convexity(g, &Interval::new(a, b).unwrap(), opts.grid_points, opts.tol).unwrap()
    }

    #[test]
    fn lookup_examples() {
        let sq = lookup_function("pow", &[2.0]).unwrap();
        assert_eq!(sq.eval(3.0), 9.0);
        assert_eq!(sq.deriv(3.0), 6.0);

        let recip = lookup_function("recip", &[]).unwrap();
        assert_eq!(recip.eval(2.0), 0.5);
        assert_eq!(recip.deriv(2.0), -0.25);

        assert!(matches!(lookup_function("pow", &[0.0]), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn lookup_rejects_bad_input() {
        assert!(matches!(lookup_function("sin", &[]), Err(Error::UnknownFunction(_))));
        assert!(matches!(lookup_function("pow", &[1.5]), Err(Error::InvalidParameter { .. })));
        assert!(matches!(lookup_function("pow", &[]), Err(Error::InvalidParameter { .. })));
        assert!(matches!(lookup_function("exp", &[1.0]), Err(Error::InvalidParameter { .. })));
        assert!(matches!(lookup_function("abs_pow", &[1.5]), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn domains_follow_family() {
        assert_eq!(lookup_function("pow", &[-2.0]).unwrap().domain(), Domain::Positive);
        assert_eq!(lookup_function("pow", &[3.0]).unwrap().domain(), Domain::Reals);
        assert_eq!(lookup_function("neg_ln", &[]).unwrap().domain(), Domain::Positive);
        let ln = lookup_function("ln", &[]).unwrap();
        assert!(ln.check_interval(&Interval::new(0.0, 1.0).unwrap()).is_err());
        assert!(ln.check_interval(&Interval::new(0.5, 1.0).unwrap()).is_ok());
    }

    #[test]
    fn parses_function_grammar() {
        let fd: FunctionDescriptor = "pow:3".parse().unwrap();
        assert_eq!(fd.eval(2.0), 8.0);
        let fd: FunctionDescriptor = "abs_pow:2.5".parse().unwrap();
        assert!((fd.eval(-4.0) - 32.0).abs() < 1e-12);
        let fd: FunctionDescriptor = "exp".parse().unwrap();
        assert_eq!(fd.to_string(), "exp");
        assert!("pow:x".parse::<FunctionDescriptor>().is_err());
        assert!("pow:2,3".parse::<FunctionDescriptor>().is_err());
    }

    #[test]
    fn interval_validation() {
        assert!(Interval::new(1.0, 0.0).is_err());
        assert!(Interval::new(f64::NAN, 0.0).is_err());
        assert!(Interval::new(1.0, 1.0).unwrap().is_degenerate());
    }

    #[test]
    fn abs_pow_derivative_at_origin() {
        let fd = lookup_function("abs_pow", &[2.5]).unwrap();
        assert_eq!(fd.deriv(0.0), 0.0);
        assert!((fd.deriv(-1.0) + 2.5).abs() < 1e-15);
    }

    #[test]
    fn convexity_examples() {
        assert_eq!(default_check(|x| x * x, -1.0, 1.0).verdict, Verdict::NoViolationFound);
        let ln = default_check(f64::ln, 1.0, 2.0);
        assert_eq!(ln.verdict, Verdict::Violated);
        assert!(ln.witness.is_some());
        assert_eq!(default_check(|x| x * x * x, -1.0, 1.0).verdict, Verdict::Violated);
    }

    #[test]
    fn convexity_rejects_bad_arguments() {
        let iv = Interval::new(0.0, 1.0).unwrap();
        assert!(check_convexity(|x| x, &iv, 2, 1e-12).is_err());
        let point = Interval::new(1.0, 1.0).unwrap();
        assert!(matches!(check_convexity(|x| x, &point, 5, 1e-12), Err(Error::DegenerateInterval(_))));
        let iv = Interval::new(-1.0, 1.0).unwrap();
        assert!(matches!(check_convexity(|x| 1.0 / x, &iv, 5, 1e-12), Err(Error::DomainViolation { .. })));
    }

    #[test]
    fn affine_has_zero_violation() {
        let r = default_check(|x| 3.0 * x - 7.0, -2.0, 5.0);
        assert_eq!(r.verdict, Verdict::NoViolationFound);
        assert!(r.worst_violation.abs() <= 1e-12);
    }

    #[test]
    fn sample_count_matches_grid() {
        let r = check_convexity(|x| x * x, &Interval::unit(), 5, 1e-12).unwrap();
        // 10 pairs × 7 weights + 31 refined neighbours
        assert_eq!(r.samples, 10 * 7 + 31);
    }

    #[test]
    fn hypothesis_examples() {
        let sq = lookup_function("pow", &[2.0]).unwrap();
        assert!(check_hypothesis(&sq, &Interval::unit(), 2.0).unwrap().passed());

        let neg_ln = lookup_function("neg_ln", &[]).unwrap();
        assert!(check_hypothesis(&neg_ln, &Interval::new(1.0, 2.0).unwrap(), 2.0).unwrap().passed());

        let abs2 = lookup_function("abs_pow", &[2.0]).unwrap();
        assert!(check_hypothesis(&abs2, &Interval::new(-1.0, 1.0).unwrap(), 1.0).unwrap().passed());
    }

    #[test]
    fn hypothesis_argument_checks() {
        let fd = lookup_function("recip", &[]).unwrap();
        assert!(matches!(check_hypothesis(&fd, &Interval::unit(), 2.0), Err(Error::DomainViolation { .. })));
        assert!(matches!(
            check_hypothesis(&fd, &Interval::new(1.0, 2.0).unwrap(), 0.5),
            Err(Error::InvalidExponent { .. })
        ));
        let point = Interval::new(1.0, 1.0).unwrap();
        assert_eq!(check_hypothesis(&fd, &point, 2.0).unwrap(), ConvexityReport::vacuous());
    }
}
