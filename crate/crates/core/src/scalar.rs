//! Generic floating-point scalar used throughout the crate.

use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Debug
        + Display
        + 'static
{
}

/// Shorthand for pulling literal constants into the working precision.
#[inline]
pub fn lit<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("literal out of range for scalar type")
}

/// Integer dimension as a scalar.
#[inline]
pub fn dim<R: Real>(n: u32) -> R {
    R::from_u32(n).expect("dimension out of range for scalar type")
}

/// Surface area of the unit (n-1)-sphere, `2 pi^{n/2} / Gamma(n/2)`.
///
/// Computed by the Gamma recursion from `Gamma(1) = 1`, `Gamma(1/2) = sqrt(pi)`,
/// so it is exact up to rounding for every integer `n >= 1`.
pub fn sphere_area<R: Real>(n: u32) -> R {
    assert!(n >= 1, "sphere_area needs n >= 1");
    let half: R = lit(0.5);
    let pi = R::PI();
    // Gamma(n/2)
    let mut z: R;
    let mut g: R;
    if n.is_multiple_of(2) {
        z = R::one();
        g = R::one();
    } else {
        z = half;
        g = pi.sqrt();
    }
    let target: R = dim::<R>(n) * half;
    while z < target - lit::<R>(0.25) {
        g *= z;
        z += R::one();
    }
    lit::<R>(2.0) * pi.powf(dim::<R>(n) * half) / g
}
