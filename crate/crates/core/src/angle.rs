//! Angle bookkeeping on the unit circle.

use crate::scalar::{lit, Scalar};

/// Reduces an angle to `[0, 2π)`.
pub fn normalize<T: Scalar>(angle: T) -> T {
    let tau = T::TAU();
    let mut a = angle % tau;
    if a < T::zero() {
        a = a + tau;
    }
    // `a + tau` can round up to exactly tau for tiny negative inputs.
    if a >= tau {
        a = a - tau;
    }
    a
}

/// Reduces an angle to the principal range `(-π, π]`.
pub fn principal<T: Scalar>(angle: T) -> T {
    let a = normalize(angle);
    if a > T::PI() {
        a - T::TAU()
    } else {
        a
    }
}

/// Distance from `angle` to the nearest multiple of `2π`, in `[0, π]`.
pub fn dist_to_zero<T: Scalar>(angle: T) -> T {
    principal(angle).abs()
}

/// Circular distance between two angles, in `[0, π]`.
pub fn circular_distance<T: Scalar>(a: T, b: T) -> T {
    dist_to_zero(a - b)
}

/// Angular width of the fundamental sector `S_n`.
pub fn sector_width<T: Scalar>(n: u32) -> T {
    T::TAU() / lit::<T>(f64::from(n - 1))
}

/// Reduces an argument into the half-open sector `[0, 2π/(n-1))`.
///
/// Values within `1e-12` of the upper seam wrap to `0`.
pub fn reduce_to_sector<T: Scalar>(n: u32, angle: T) -> T {
    let width = sector_width::<T>(n);
    let mut a = normalize(angle) % width;
    if a < T::zero() {
        a = a + width;
    }
    if width - a <= lit(1e-12) {
        a = T::zero();
    }
    a
}

/// Whether `angle` lies in `[0, 2π/(n-1))`.
pub fn in_sector<T: Scalar>(n: u32, angle: T) -> bool {
    normalize(angle) < sector_width::<T>(n)
}
