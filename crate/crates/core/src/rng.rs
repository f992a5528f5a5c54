//! SplitMix64 generator and seeded interval sampling.
//!
//! The generator is fixed so a sweep can be replayed bit-for-bit by any
//! implementation of the same three-line mixing function.

use crate::error::{Error, Result};
use crate::funcat::{Domain, Interval};

/// Identifier written into sweep headers.
pub const GENERATOR_ID: &str = "splitmix64";

/// Shortest interval a sweep will accept; shorter draws are redrawn.
pub const MIN_INTERVAL_LENGTH: f64 = 1e-6;

const MAX_DRAWS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform index in `0..n` (modulo reduction; bias is irrelevant at catalog sizes).
    pub fn index(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// Draws `[a, b]` with both endpoints uniform on `range ∩ domain`, redrawing points
/// outside the domain and intervals shorter than [`MIN_INTERVAL_LENGTH`].
pub fn random_interval(rng: &mut SplitMix64, domain: Domain, range: (f64, f64)) -> Result<Interval> {
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidInterval { a: lo, b: hi, reason: "sampling range must satisfy lo < hi" });
    }
    if hi - lo < MIN_INTERVAL_LENGTH || (domain == Domain::Positive && hi <= MIN_INTERVAL_LENGTH) {
        return Err(Error::InvalidInterval {
            a: lo,
            b: hi,
            reason: "sampling range does not meet the function domain",
        });
    }
    for _ in 0..MAX_DRAWS {
        let x = rng.uniform(lo, hi);
        let y = rng.uniform(lo, hi);
        let (a, b) = if x <= y { (x, y) } else { (y, x) };
        if domain.contains(a) && domain.contains(b) && b - a >= MIN_INTERVAL_LENGTH {
            return Interval::new(a, b);
        }
    }
    Err(Error::InvalidInterval { a: lo, b: hi, reason: "could not draw an admissible interval" })
}
