//! Adaptive Gauss–Kronrod integration on intervals and iterated integration on the unit square.
//!
//! Each panel is integrated with the 7-point Gauss rule and its 15-point Kronrod
//! extension; the panel error estimate is the plain difference of the pair. Both rules
//! integrate cubics exactly, so low-degree polynomials converge on the first panel.
//! Refinement is global: the panel with the largest estimate is bisected until the
//! summed estimate meets the tolerance or the budget runs out.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcat::Interval;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Absolute tolerance on the integral.
    pub tol: f64,
    /// Maximum number of bisections below an initial panel.
    pub max_depth: u32,
    /// Total bisections allowed per call (per axis for iterated integrals).
    pub max_subdivisions: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_depth: 60, max_subdivisions: 5_000 }
    }
}

impl QuadratureOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    /// Absolute error estimate.
    pub error_estimate: f64,
    pub subdivisions: usize,
    pub converged: bool,
}

impl QuadratureResult {
    /// Turns an unconverged result into [`Error::BudgetExhausted`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::BudgetExhausted { estimate: self.value, error_estimate: self.error_estimate })
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gauss_kronrod<F>(f: &mut F, a: f64, b: f64, depth: u32) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }

    Ok(Panel { a, b, value: kronrod * half, error: ((kronrod - gauss) * half).abs(), depth })
}

fn validate(iv: &Interval, breakpoints: &[f64], tol: f64) -> Result<Vec<f64>> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidQuadrature("tolerance must be positive and finite"));
    }
    let mut cuts = Vec::with_capacity(breakpoints.len() + 2);
    cuts.push(iv.a());
    for &x in breakpoints {
        if !(x >= iv.a() && x <= iv.b()) {
            return Err(Error::InvalidQuadrature("breakpoint outside the integration interval"));
        }
        cuts.push(x);
    }
    cuts.push(iv.b());
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    Ok(cuts)
}

fn adaptive<F>(mut f: F, iv: &Interval, breakpoints: &[f64], opts: &QuadratureOptions) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let cuts = validate(iv, breakpoints, opts.tol)?;
    if iv.is_degenerate() {
        return Ok(QuadratureResult { value: 0.0, error_estimate: 0.0, subdivisions: 0, converged: true });
    }

    let mut heap = BinaryHeap::with_capacity(64);
    for w in cuts.windows(2) {
        heap.push(gauss_kronrod(&mut f, w[0], w[1], 0)?);
    }
    let mut frozen: Vec<Panel> = Vec::new();
    let mut subdivisions = 0usize;

    let total_error =
        |heap: &BinaryHeap<Panel>, frozen: &[Panel]| heap.iter().chain(frozen).map(|p| p.error).sum::<f64>();

    while total_error(&heap, &frozen) > opts.tol && subdivisions < opts.max_subdivisions {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if worst.depth >= opts.max_depth || mid <= worst.a || mid >= worst.b {
            frozen.push(worst);
            continue;
        }
        heap.push(gauss_kronrod(&mut f, worst.a, mid, worst.depth + 1)?);
        heap.push(gauss_kronrod(&mut f, mid, worst.b, worst.depth + 1)?);
        subdivisions += 1;
    }

    let mut panels: Vec<Panel> = heap.into_vec();
    panels.extend(frozen);
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().map(|p| p.value).sum();
    let error_estimate = panels.iter().map(|p| p.error).sum::<f64>();

    Ok(QuadratureResult { value, error_estimate, subdivisions, converged: error_estimate <= opts.tol })
}

/// Integrates `g` over `iv`, pre-splitting at every breakpoint.
///
/// A non-finite integrand value aborts with [`Error::NonFiniteEvaluation`]. Running out
/// of budget is not an error here: the best estimate comes back with `converged = false`.
pub fn integrate_1d<G>(g: G, iv: &Interval, tol: f64, breakpoints: &[f64]) -> Result<QuadratureResult>
where
    G: Fn(f64) -> f64,
{
    integrate_1d_with(g, iv, breakpoints, &QuadratureOptions::with_tol(tol))
}

pub fn integrate_1d_with<G>(
    g: G,
    iv: &Interval,
    breakpoints: &[f64],
    opts: &QuadratureOptions,
) -> Result<QuadratureResult>
where
    G: Fn(f64) -> f64,
{
    adaptive(
        |x| {
            let v = g(x);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFiniteEvaluation { at: vec![x] })
            }
        },
        iv,
        breakpoints,
        opts,
    )
}

/// Iterated integral of `g(t, s)` over `[0, 1]²`: outer over `s`, inner over `t`.
///
/// Inner integrals run at `tol / 10`; the outer integral gets the remaining budget.
/// The reported error adds the outer estimate to the worst inner estimate, and
/// `subdivisions` counts outer bisections only.
pub fn integrate_2d<G>(g: G, tol: f64, breakpoints_t: &[f64], breakpoints_s: &[f64]) -> Result<QuadratureResult>
where
    G: Fn(f64, f64) -> f64,
{
    integrate_2d_with(g, breakpoints_t, breakpoints_s, &QuadratureOptions::with_tol(tol))
}

pub fn integrate_2d_with<G>(
    g: G,
    breakpoints_t: &[f64],
    breakpoints_s: &[f64],
    opts: &QuadratureOptions,
) -> Result<QuadratureResult>
where
    G: Fn(f64, f64) -> f64,
{
    validate(&Interval::unit(), breakpoints_t, opts.tol)?;
    integrate_2d_moving(g, |_| breakpoints_t.to_vec(), breakpoints_s, opts)
}

/// Like [`integrate_2d_with`], but the inner breakpoints are recomputed for every outer
/// `s`. Use it when `g` has kinks or jumps along curves, e.g. `|t − s|`: a kink lying
/// between a panel end and its outermost node is invisible to the Kronrod estimate.
/// Breakpoints outside `(0, 1)` are dropped.
pub fn integrate_2d_moving<G, B>(
    g: G,
    breakpoints_t: B,
    breakpoints_s: &[f64],
    opts: &QuadratureOptions,
) -> Result<QuadratureResult>
where
    G: Fn(f64, f64) -> f64,
    B: Fn(f64) -> Vec<f64>,
{
    let unit = Interval::unit();
    let inner_opts = QuadratureOptions { tol: opts.tol / 10.0, ..*opts };
    let outer_opts = QuadratureOptions { tol: opts.tol - inner_opts.tol, ..*opts };
    let mut inner_error = 0.0_f64;
    let mut inner_converged = true;

    let outer = adaptive(
        |s| {
            let cuts: Vec<f64> = breakpoints_t(s).into_iter().filter(|&t| t > 0.0 && t < 1.0).collect();
            let inner = adaptive(
                |t| {
                    let v = g(t, s);
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(Error::NonFiniteEvaluation { at: vec![t, s] })
                    }
                },
                &unit,
                &cuts,
                &inner_opts,
            )?;
            inner_error = inner_error.max(inner.error_estimate);
            inner_converged &= inner.converged;
            Ok(inner.value)
        },
        &unit,
        breakpoints_s,
        &outer_opts,
    )?;

    let error_estimate = outer.error_estimate + inner_error;
    Ok(QuadratureResult {
        value: outer.value,
        error_estimate,
        subdivisions: outer.subdivisions,
        converged: outer.converged && inner_converged && error_estimate <= opts.tol,
    })
}
