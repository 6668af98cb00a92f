//! Scalar abstraction behind all trajectory arithmetic.
//!
//! The collapse patterns studied here are repelling: a relative error in the
//! initial shape grows by a large constant factor per pattern period, so the
//! horizon over which a self-similar trajectory can be verified is set by the
//! working precision. Everything that advances states is therefore generic
//! over [`Scalar`], and an extended-precision run only swaps the scalar type
//! (see [`crate::dd::DoubleDouble`]).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Minimal floating-point interface used by the simulation kernels.
pub trait Scalar:
    Copy
    + PartialEq
    + PartialOrd
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const ZERO: Self;
    const ONE: Self;
    /// Unit roundoff of the representation.
    const EPSILON: Self;
    /// pi/2 at the full precision of the representation (the octant
    /// boundaries live there, so a rounded constant would widen the corner
    /// bands far beyond the scaled tolerances).
    const HALF_PI: Self;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    /// (sin x, cos x); inputs stay within a few radians here.
    fn sin_cos(self) -> (Self, Self);
    /// Four-quadrant arctangent of self / other.
    fn atan2(self, other: Self) -> Self;
    fn hypot(self, other: Self) -> Self;

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    const EPSILON: Self = f64::EPSILON;
    const HALF_PI: Self = std::f64::consts::FRAC_PI_2;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn sin_cos(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
    #[inline]
    fn atan2(self, other: Self) -> Self {
        f64::atan2(self, other)
    }
    #[inline]
    fn hypot(self, other: Self) -> Self {
        f64::hypot(self, other)
    }
}

/// Two candidate collision times count as simultaneous when they differ by
/// less than this fraction of the earlier one.
pub const SIMULTANEITY_REL_TOL: f64 = 1e-12;

/// A trajectory stops with `TimeUnderflow` when the time to the next
/// collision falls below this fraction of `max(1, t)`.
pub const TIME_UNDERFLOW_REL_TOL: f64 = 1e-14;

/// Two adjacent gaps both below this fraction of the largest gap put three
/// particles at one point; the collision law has no continuation there.
pub const TRIPLE_COLLISION_REL_TOL: f64 = 1e-12;

/// |cos φ| below this cannot safely decide the successor contact.
pub const PHI_SIGN_TOL: f64 = 1e-14;

/// Successor angles closer than this to an excluded corner of the spherical
/// octant stop the reduced orbit.
pub const CORNER_TOL: f64 = 1e-12;

/// Tangential velocity parts smaller than this leave φ undefined.
pub const DEGENERATE_TANGENT_TOL: f64 = 1e-13;

/// Unit-norm slack accepted on plane normals.
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// Scales an `f64` reference tolerance to the precision of `S`.
///
/// The defaults above are calibrated for `f64`; a scalar with unit roundoff
/// `u` gets the same tolerance measured in its own ulps.
pub fn scaled_tol<S: Scalar>(f64_tol: f64) -> S {
    S::from_f64(f64_tol) * S::EPSILON / S::from_f64(f64::EPSILON)
}
