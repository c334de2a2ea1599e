//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
///
/// The associated tolerances are the fixed acceptance thresholds of the geometry and chart
/// layers. They are precision dependent and are not configurable.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Bound on `‖RᵀR − I‖∞` and `|det R − 1|` accepted for a rotation matrix.
    const ORTHO_TOL: Self;
    /// Bound on `|‖u‖ − 1|` accepted for a rotation axis.
    const UNIT_TOL: Self;
    /// Relative distance to `|L| = G` or `|Θ| = G` below which node lines are undefined.
    const CHART_TOL: Self;

    /// Converts a literal. Every `f64` literal used by the crate is representable.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn two_pi() -> Self {
        Self::TAU()
    }
}

impl Real for f64 {
    const ORTHO_TOL: f64 = 1e-12;
    const UNIT_TOL: f64 = 1e-9;
    const CHART_TOL: f64 = 1e-9;
}

impl Real for f32 {
    const ORTHO_TOL: f32 = 1e-5;
    const UNIT_TOL: f32 = 1e-5;
    const CHART_TOL: f32 = 1e-5;
}

/// Reduces an angle to `[0, 2π)`.
pub fn normalize_angle<T: Real>(a: T) -> T {
    let tau = T::two_pi();
    let mut r = a % tau;
    if r < T::zero() {
        r = r + tau;
    }
    // `r + tau` can round up to exactly `tau` for tiny negative `a`.
    if r >= tau {
        r = T::zero();
    }
    r
}

/// Wraps an angle difference to `(−π, π]`.
pub fn wrap_angle_diff<T: Real>(d: T) -> T {
    let pi = T::PI();
    let tau = T::two_pi();
    let mut r = d % tau;
    if r > pi {
        r = r - tau;
    } else if r <= -pi {
        r = r + tau;
    }
    r
}
