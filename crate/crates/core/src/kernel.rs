//! The piecewise kernel `m` and its closed-form moments over the unit square.
//!
//! `m(t) = t` on `[0, 1/2]` and `m(t) = t − 1` on `(1/2, 1]`. The moment
//! `∬ |m(t) − m(s)|^p dt ds = 2 / ((p+1)(p+2))` splits over the four quarter squares as
//!
//! | quarter                     | integrand       | value                                     |
//! |-----------------------------|-----------------|-------------------------------------------|
//! | `t, s ∈ [0, ½]`             | `|t − s|^p`     | `1 / (2^{p+1}(p+1)(p+2))`                 |
//! | `t ∈ [0, ½], s ∈ [½, 1]`    | `(t − s + 1)^p` | `1/((p+1)(p+2)) − 1/(2^{p+1}(p+1)(p+2))`  |
//! | `t ∈ [½, 1], s ∈ [0, ½]`    | `(s − t + 1)^p` | same as above                             |
//! | `t, s ∈ [½, 1]`             | `|t − s|^p`     | `1 / (2^{p+1}(p+1)(p+2))`                 |
//!
//! The first piece is sometimes printed with an extra factor of two; that value does not
//! sum to the total and disagrees with direct quadrature.

use serde::Serialize;

use crate::error::{Error, Result};

/// Kernel value without range checking; callers guarantee `t ∈ [0, 1]`.
#[inline]
pub(crate) fn m(t: f64) -> f64 {
    if t <= 0.5 {
        t
    } else {
        t - 1.0
    }
}

/// `m(t)`, with the closed left branch taking `t = 1/2`.
pub fn kernel_m(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange(t));
    }
    Ok(m(t))
}

/// Points in `t` where `m(t) − m(s)` jumps or vanishes for fixed `s`: `1/2`, `s` and
/// `s ± 1/2`, restricted to `(0, 1)`. Inner breakpoints for 2D quadrature of `|m(t) − m(s)|^p`.
pub fn kernel_breakpoints(s: f64) -> Vec<f64> {
    let mut cuts: Vec<f64> = [0.5, s, s - 0.5, s + 0.5].into_iter().filter(|&t| t > 0.0 && t < 1.0).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts
}

/// Closed-form `p`-th moment of `m(t) − m(s)` and its quarter-square pieces `J₁..J₄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelMoment {
    pub p: f64,
    pub closed_form: f64,
    pub pieces: [f64; 4],
}

impl KernelMoment {
    pub fn pieces_sum(&self) -> f64 {
        self.pieces.iter().sum()
    }
}

fn check_order(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent { value: p, reason: "kernel moment order must satisfy p >= 1" })
    }
}

pub fn kernel_p_moment(p: f64) -> Result<KernelMoment> {
    check_order(p)?;
    let denom = (p + 1.0) * (p + 2.0);
    let diagonal = 1.0 / (2f64.powf(p + 1.0) * denom);
    let off_diagonal = 1.0 / denom - diagonal;
    Ok(KernelMoment { p, closed_form: 2.0 / denom, pieces: [diagonal, off_diagonal, off_diagonal, diagonal] })
}

/// `(2 / ((p+1)(p+2)))^{1/p}`, the kernel constant of the Hölder bound.
pub fn kernel_p_norm(p: f64) -> Result<f64> {
    check_order(p)?;
    Ok((2.0 / ((p + 1.0) * (p + 2.0))).powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_m(0.25).unwrap(), 0.25);
        assert_eq!(kernel_m(0.75).unwrap(), -0.25);
        assert_eq!(kernel_m(0.5).unwrap(), 0.5);
        assert_eq!(kernel_m(0.0).unwrap(), 0.0);
        assert_eq!(kernel_m(1.0).unwrap(), 0.0);
    }

    #[test]
    fn kernel_rejects_out_of_range() {
        assert!(matches!(kernel_m(-0.1), Err(Error::OutOfRange(_))));
        assert!(matches!(kernel_m(1.0001), Err(Error::OutOfRange(_))));
        assert!(matches!(kernel_m(f64::NAN), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn square_moment_pieces() {
        let k = kernel_p_moment(2.0).unwrap();
        assert!((k.closed_form - 1.0 / 6.0).abs() < 1e-16);
        let expected = [1.0 / 96.0, 7.0 / 96.0, 7.0 / 96.0, 1.0 / 96.0];
        for (got, want) in k.pieces.iter().zip(expected) {
            assert!((got - want).abs() < 1e-16, "{got} vs {want}");
        }
        assert!((k.pieces_sum() - 1.0 / 6.0).abs() < 1e-16);
    }

    #[test]
    fn first_moment() {
        assert!((kernel_p_moment(1.0).unwrap().closed_form - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn norm_examples() {
        assert!((kernel_p_norm(2.0).unwrap() - (1.0f64 / 6.0).sqrt()).abs() < 1e-15);
        assert!((kernel_p_norm(1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((kernel_p_norm(3.0).unwrap() - 0.1f64.cbrt()).abs() < 1e-15);
        assert!((kernel_p_norm(3.0).unwrap() - 0.464_158_9).abs() < 1e-7);
    }

    #[test]
    fn rejects_low_order() {
        assert!(matches!(kernel_p_moment(0.5), Err(Error::InvalidExponent { .. })));
        assert!(matches!(kernel_p_norm(0.999), Err(Error::InvalidExponent { .. })));
        assert!(kernel_p_norm(f64::INFINITY).is_err());
    }
}
