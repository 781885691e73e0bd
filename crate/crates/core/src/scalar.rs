//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the kinetic machinery is generic over (`f32` or `f64`).
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Candidate roots closer than this to the query time are treated as the query time itself.
    fn time_eps() -> Self;

    /// Relative threshold under which a difference of two curve values counts as zero.
    fn zero_tol() -> Self;

    fn two_pi() -> Self {
        Self::TAU()
    }

    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl Scalar for f64 {
    fn time_eps() -> Self {
        1e-12
    }

    fn zero_tol() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn time_eps() -> Self {
        64.0 * f32::EPSILON
    }

    fn zero_tol() -> Self {
        64.0 * f32::EPSILON
    }
}

/// Reduces an angle into `[0, 2π)`.
pub fn wrap_angle<T: Scalar>(theta: T) -> T {
    let tau = T::two_pi();
    let mut r = theta % tau;
    if r < T::zero() {
        r = r + tau;
    }
    if r >= tau {
        r = r - tau;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_angle_reduces_into_range() {
        let tau = std::f64::consts::TAU;
        assert!((wrap_angle(-0.5f64) - (tau - 0.5)).abs() < 1e-15);
        assert!((wrap_angle(3.0 * tau + 1.0) - 1.0).abs() < 1e-12);
        assert_eq!(wrap_angle(0.0f64), 0.0);
        assert!(wrap_angle(tau) < tau);
    }

    #[test]
    fn tolerances_are_positive_for_both_widths() {
        assert!(f32::time_eps() > 0.0 && f64::time_eps() > 0.0);
        assert!(f32::zero_tol() > f64::zero_tol() as f32);
    }
}
