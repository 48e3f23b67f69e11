//! Scalar abstraction: the numeric tolerances and conversions the rest of the
//! crate needs, on top of `num_traits::Float`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating scalar used throughout the crate.
///
/// The associated constants fix the tolerance policy per precision. All order
/// and inequality checks in the crate are one-sided: a violation beyond the
/// tolerance fails, anything within it passes.
pub trait Real: Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + 'static {
    /// Base residual tolerance for cone-membership feasibility. Membership of
    /// `v` is accepted when the scaled phase-1 residual is below
    /// `ORDER_TOL * (1 + sup_norm(v))`.
    const ORDER_TOL: Self;
    /// One-sided tolerance for inequality checks (chord inequalities,
    /// certificate soundness, seminorm axioms).
    const CHECK_TOL: Self;
    /// Tight tolerance for values that are exact up to a few ulps.
    const TIGHT_TOL: Self;
    /// Simplex pivot threshold: entries below this (after scaling) are
    /// treated as zero.
    const PIVOT_TOL: Self;
    /// Simplex reduced-cost threshold.
    const RCOST_TOL: Self;

    /// Lossy conversion from `f64`; panics only if the target type cannot
    /// represent any nearby value (never for f32/f64).
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable in scalar type")
    }

    /// Conversion from usize through f64.
    fn of_usize(n: usize) -> Self {
        Self::of(n as f64)
    }
}

impl Real for f64 {
    const ORDER_TOL: Self = 1e-9;
    const CHECK_TOL: Self = 1e-9;
    const TIGHT_TOL: Self = 1e-12;
    const PIVOT_TOL: Self = 1e-11;
    const RCOST_TOL: Self = 1e-10;
}

impl Real for f32 {
    const ORDER_TOL: Self = 1e-4;
    const CHECK_TOL: Self = 1e-4;
    const TIGHT_TOL: Self = 1e-5;
    const PIVOT_TOL: Self = 1e-6;
    const RCOST_TOL: Self = 1e-5;
}
