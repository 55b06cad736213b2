//! Conformal automorphisms of the unit disk.
//!
//! Every automorphism is stored in the normal form
//! `A(z) = e^{iθ} (z - w) / (1 - conj(w) z)` with `θ ∈ [0, 2π)` and `|w| < 1`.
//! The classification into elliptic, parabolic and hyperbolic maps follows
//! the squared trace of the unit-determinant matrix representing `A`.

use num_complex::Complex;

use crate::angle;
use crate::error::{Error, Result};
use crate::scalar::{cis, lit, Scalar};

/// Half-width of the parabolic band around `τ = 4`.
pub const PARABOLIC_TOL: f64 = 1e-9;
/// Below this in both `θ` and `|w|` the map is treated as the identity.
pub const IDENTITY_TOL: f64 = 1e-12;

/// A disk automorphism `e^{iθ}(z - w)/(1 - conj(w) z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskMobius<T> {
    theta: T,
    w: Complex<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MobiusClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpherePoint<T> {
    Finite(Complex<T>),
    Infinity,
}

impl<T: Scalar> SpherePoint<T> {
    pub fn finite(self) -> Option<Complex<T>> {
        match self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }
}

impl<T: Scalar> DiskMobius<T> {
    /// Builds the automorphism, reducing `theta` into `[0, 2π)`.
    pub fn new(theta: T, w: Complex<T>) -> Result<Self> {
        if !theta.is_finite() || !w.re.is_finite() || !w.im.is_finite() {
            return Err(Error::Domain("non-finite Möbius parameter".into()));
        }
        if w.norm() >= T::one() {
            return Err(Error::Domain(format!("|w| = {} is not < 1", w.norm())));
        }
        Ok(Self {
            theta: angle::normalize(theta),
            w,
        })
    }

    pub fn identity() -> Self {
        Self {
            theta: T::zero(),
            w: Complex::new(T::zero(), T::zero()),
        }
    }

    /// `z ↦ e^{iθ} z`.
    pub fn rotation(theta: T) -> Self {
        Self {
            theta: angle::normalize(theta),
            w: Complex::new(T::zero(), T::zero()),
        }
    }

    /// `z ↦ (z - w)/(1 - conj(w) z)`, the map sending `w` to `0`.
    pub fn translation(w: Complex<T>) -> Result<Self> {
        Self::new(T::zero(), w)
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn w(&self) -> Complex<T> {
        self.w
    }

    pub fn apply(&self, z: Complex<T>) -> Result<Complex<T>> {
        let den = Complex::new(T::one(), T::zero()) - self.w.conj() * z;
        if den.norm() <= T::epsilon() * lit(4.0) || !den.norm().is_finite() {
            return Err(Error::Domain(format!(
                "z = {z} is the pole of the automorphism"
            )));
        }
        Ok(cis(self.theta) * (z - self.w) / den)
    }

    /// Evaluates at an angle on the unit circle; the pole is never on ∂𝔻.
    pub fn apply_boundary(&self, phi: T) -> Complex<T> {
        let z = cis(phi);
        let den = Complex::new(T::one(), T::zero()) - self.w.conj() * z;
        cis(self.theta) * (z - self.w) / den
    }

    pub fn inverse(&self) -> Self {
        Self {
            theta: angle::normalize(-self.theta),
            w: -(self.w * cis(self.theta)),
        }
    }

    /// `z ↦ self(other(z))`, re-extracted into normal form.
    pub fn compose(&self, other: &Self) -> Self {
        // The composite's zero is other⁻¹(w_self); its rotation factor is read
        // off the boundary value at z = 1.
        let w = other
            .inverse()
            .apply(self.w)
            .expect("automorphisms have no pole inside the disk");
        let one = Complex::new(T::one(), T::zero());
        let at_one = self.apply_boundary_point(other.apply_boundary(T::zero()));
        let rot = at_one * (one - w.conj()) / (one - w);
        Self {
            theta: angle::normalize(rot.arg()),
            w,
        }
    }

    fn apply_boundary_point(&self, z: Complex<T>) -> Complex<T> {
        let den = Complex::new(T::one(), T::zero()) - self.w.conj() * z;
        cis(self.theta) * (z - self.w) / den
    }

    /// The unit-determinant matrix `C·[[e^{iθ/2}, -e^{iθ/2} w], [-e^{-iθ/2} w̄, e^{-iθ/2}]]`
    /// with `C = (1 - |w|²)^{-1/2}`.
    pub fn unit_matrix(&self) -> [[Complex<T>; 2]; 2] {
        let c = (T::one() - self.w.norm_sqr()).sqrt().recip();
        let half = lit::<T>(0.5) * self.theta;
        let p = cis(half) * c;
        let m = cis(-half) * c;
        [[p, -(p * self.w)], [-(m * self.w.conj()), m]]
    }

    /// Squared trace `2(1 + cos θ)/(1 - |w|²)`; always non-negative.
    pub fn trace_squared(&self) -> T {
        lit::<T>(2.0) * (T::one() + self.theta.cos()) / (T::one() - self.w.norm_sqr())
    }

    pub fn is_identity(&self) -> bool {
        let tol = lit::<T>(IDENTITY_TOL);
        angle::dist_to_zero(self.theta) < tol && self.w.norm() < tol
    }

    pub fn classify(&self) -> MobiusClass {
        if self.is_identity() {
            return MobiusClass::Identity;
        }
        let tau = self.trace_squared();
        let four = lit::<T>(4.0);
        let eps = lit::<T>(PARABOLIC_TOL);
        if (tau - four).abs() <= eps {
            MobiusClass::Parabolic
        } else if tau < four {
            MobiusClass::Elliptic
        } else {
            MobiusClass::Hyperbolic
        }
    }

    /// Both solutions of `A(z) = z` on the Riemann sphere (a double root is
    /// reported twice).
    pub fn fixed_points(&self) -> Result<[SpherePoint<T>; 2]> {
        if self.is_identity() {
            return Err(Error::Precondition("the identity fixes every point".into()));
        }
        // e^{iθ}(z - w) = z(1 - w̄z)  ⇔  w̄ z² + (e^{iθ} - 1) z - e^{iθ} w = 0
        let rot = cis(self.theta);
        let one = Complex::new(T::one(), T::zero());
        let a = self.w.conj();
        let b = rot - one;
        let c = -(rot * self.w);
        if a.norm() == T::zero() {
            // A rotation fixes 0 and ∞.
            return Ok([
                SpherePoint::Finite(Complex::new(T::zero(), T::zero())),
                SpherePoint::Infinity,
            ]);
        }
        let disc = (b * b - a * c * lit::<T>(4.0)).sqrt();
        let sign = if (b.conj() * disc).re >= T::zero() {
            T::one()
        } else {
            -T::one()
        };
        let q = -(b + disc * sign) * lit::<T>(0.5);
        if q.norm() == T::zero() {
            return Ok([SpherePoint::Finite(Complex::new(T::zero(), T::zero())); 2]);
        }
        Ok([SpherePoint::Finite(q / a), SpherePoint::Finite(c / q)])
    }
}

/// Whether `(θ, w)` lies in the domain of ellipticity `|w| < sin(θ/2)`.
pub fn in_ellipticity_domain<T: Scalar>(theta: T, w: Complex<T>) -> bool {
    let theta = angle::normalize(theta);
    w.norm() < (theta * lit(0.5)).sin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    type M = DiskMobius<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn apply_examples() {
        let id = M::identity();
        assert_eq!(id.apply(c(0.3, 0.4)).unwrap(), c(0.3, 0.4));
        let a = M::new(0.0, c(0.5, 0.0)).unwrap();
        assert!(a.apply(c(0.5, 0.0)).unwrap().norm() < 1e-16);
        let b = M::new(FRAC_PI_2, c(0.2, 0.0)).unwrap();
        assert!((b.apply(c(1.0, 0.0)).unwrap().norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pole_is_a_domain_error() {
        let a = M::new(0.3, c(0.5, 0.0)).unwrap();
        assert!(matches!(a.apply(c(2.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn rejects_parameters_off_the_disk() {
        assert!(M::new(0.0, c(1.0, 0.0)).is_err());
        assert!(M::new(0.0, c(0.8, 0.8)).is_err());
        assert!(M::new(f64::NAN, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(M::identity().inverse(), M::identity());
        let a = M::new(0.0, c(0.5, 0.0)).unwrap().inverse();
        assert_eq!(a.theta(), 0.0);
        assert!((a.w() - c(-0.5, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn inverse_round_trip_on_grid() {
        let a = M::new(FRAC_PI_3, c(0.0, 0.2)).unwrap();
        let inv = a.inverse();
        for k in 0..100 {
            let r = 0.95 * ((k as f64 * 0.37).sin().abs());
            let z = Complex::from_polar(r, k as f64 * 0.61);
            let back = inv.apply(a.apply(z).unwrap()).unwrap();
            assert!((back - z).norm() < 1e-13);
        }
    }

    #[test]
    fn compose_with_identity_and_inverse() {
        let a = M::new(2.1, c(-0.3, 0.45)).unwrap();
        let left = M::identity().compose(&a);
        assert!((left.theta() - a.theta()).abs() < 1e-14 && (left.w() - a.w()).norm() < 1e-15);
        let id = a.compose(&a.inverse());
        assert!(angle::dist_to_zero(id.theta()) < 1e-13);
        assert!(id.w().norm() < 1e-13);
    }

    #[test]
    fn trace_squared_examples() {
        assert_eq!(M::identity().trace_squared(), 4.0);
        assert!(M::rotation(PI).trace_squared().abs() < 1e-15);
        let a = M::new(FRAC_PI_2, c(0.5, 0.0)).unwrap();
        assert!((a.trace_squared() - 8.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(M::identity().classify(), MobiusClass::Identity);
        assert_eq!(M::rotation(PI).classify(), MobiusClass::Elliptic);
        let boundary = (FRAC_PI_2 / 2.0).sin();
        assert_eq!(
            M::new(FRAC_PI_2, c(boundary, 0.0)).unwrap().classify(),
            MobiusClass::Parabolic
        );
        assert_eq!(
            M::new(FRAC_PI_2, c(0.9, 0.0)).unwrap().classify(),
            MobiusClass::Hyperbolic
        );
    }

    #[test]
    fn fixed_point_examples() {
        let r = M::rotation(PI).fixed_points().unwrap();
        assert_eq!(r[0], SpherePoint::Finite(c(0.0, 0.0)));
        assert_eq!(r[1], SpherePoint::Infinity);

        let p = M::new(FRAC_PI_2, c((FRAC_PI_2 / 2.0).sin(), 0.0)).unwrap();
        let [a, b] = p.fixed_points().unwrap();
        let (a, b) = (a.finite().unwrap(), b.finite().unwrap());
        assert!((a - b).norm() < 1e-6);
        assert!((a.norm() - 1.0).abs() < 1e-6);

        let h = M::new(0.0, c(0.5, 0.0)).unwrap();
        let mut fps: Vec<f64> = h
            .fixed_points()
            .unwrap()
            .iter()
            .map(|p| p.finite().unwrap().re)
            .collect();
        fps.sort_by(f64::total_cmp);
        assert!((fps[0] + 1.0).abs() < 1e-14 && (fps[1] - 1.0).abs() < 1e-14);

        assert!(M::identity().fixed_points().is_err());
    }

    #[test]
    fn ellipticity_domain_examples() {
        assert!(!in_ellipticity_domain(0.0, c(0.0, 0.0)));
        assert!(!in_ellipticity_domain(0.0, c(0.3, 0.1)));
        assert!(in_ellipticity_domain(PI, c(0.99, 0.0)));
        assert!(!in_ellipticity_domain(FRAC_PI_2, c(0.8, 0.0)));
    }

    #[test]
    fn generic_over_f32() {
        let a = DiskMobius::<f32>::new(1.0, Complex::new(0.25, -0.1)).unwrap();
        let z = Complex::new(0.1_f32, 0.2);
        let back = a.inverse().apply(a.apply(z).unwrap()).unwrap();
        assert!((back - z).norm() < 1e-5);
    }
}
