//! Numerical certification of midpoint-rule error bounds.
//!
//! For a differentiable `f` with convex `|f'|^q` on `[a, b]`, the gap
//! `|f((a+b)/2) − (1/(b−a))∫f|` is bounded in terms of `|f'(a)|`, `|f'(b)|` and the
//! moments of a piecewise-linear kernel. This crate evaluates those bounds on a closed
//! catalog of functions, checks the hypothesis by sampling, cross-checks the kernel
//! constants and integral identities with an independent adaptive quadrature, and
//! evaluates the resulting special-mean inequalities.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod funcat;
pub mod kernel;
pub mod means;
pub mod quadrature;
pub mod rng;

pub use bounds::{
    bound_kirmaci_ozdemir, bound_theorem2, bound_theorem3, conjugate_of, hh_sandwich, midpoint_gap, verify_identity,
    BoundReport, Certifier, ConjugatePair, Lemma, SandwichReport, Theorem,
};
pub use error::{Error, Result};
pub use funcat::{
    check_convexity, check_hypothesis, lookup_function, ConvexityOptions, ConvexityReport, Domain, FunctionDescriptor,
    Interval, Verdict,
};
pub use kernel::{kernel_breakpoints, kernel_m, kernel_p_moment, kernel_p_norm, KernelMoment};
pub use means::{
    check_proposition, mean_arithmetic, mean_identric, mean_logarithmic, mean_p_logarithmic, MeanPair, Proposition,
    PropositionReport, Variant,
};
pub use quadrature::{integrate_1d, integrate_2d, integrate_2d_moving, QuadratureOptions, QuadratureResult};
