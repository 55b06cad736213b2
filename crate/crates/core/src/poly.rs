//! Dense complex polynomials and a Durand-Kerner root finder.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Scalar};

pub const DK_MAX_ITER: usize = 500;
pub const DK_TOL: f64 = 1e-13;
pub const DK_START_RADIUS: f64 = 0.5;

/// Coefficients in ascending order: `c[0] + c[1] z + ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `Π (z - r)`.
    pub fn from_roots(roots: &[Complex<T>]) -> Self {
        roots
            .iter()
            .fold(Self::constant(Complex::new(T::one(), T::zero())), |p, r| {
                p.mul(&Self::new(vec![-*r, Complex::new(T::one(), T::zero())]))
            })
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Formal degree (length minus one); zero for the empty polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, c| acc * z + c)
    }

    /// `Σ |c_k| |z|^k`, the scale of rounding error in [`Poly::eval`].
    pub fn eval_abs(&self, z: Complex<T>) -> T {
        let r = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::constant(Complex::new(T::zero(), T::zero()));
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * from_usize::<T>(k))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::new(Vec::new());
        }
        let mut out =
            vec![Complex::new(T::zero(), T::zero()); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex::new(T::zero(), T::zero());
        Self::new(
            (0..len)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(zero)
                        - other.coeffs.get(k).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }

    /// Drops leading coefficients below `rel` times the largest coefficient.
    pub fn trimmed(&self, rel: T) -> Self {
        let scale = self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()));
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= scale * rel) {
            coeffs.pop();
        }
        Self::new(coeffs)
    }

    /// All roots by Durand-Kerner iteration from a circle of radius 0.5.
    ///
    /// Converges when every correction is below `1e-13` (relative to the root
    /// size). Clusters from multiple roots converge only linearly, so after
    /// the iteration cap the roots are still accepted if each one's residual
    /// is at the rounding level of the evaluation.
    pub fn roots(&self) -> Result<Vec<Complex<T>>> {
        let d = self.degree();
        let lead = *self
            .coeffs
            .last()
            .ok_or_else(|| Error::Precondition("empty polynomial".into()))?;
        if lead.norm() == T::zero() {
            return Err(Error::Precondition("leading coefficient is zero".into()));
        }
        if d == 0 {
            return Ok(Vec::new());
        }
        let monic = Self::new(self.coeffs.iter().map(|c| c / lead).collect());
        let tau = T::TAU();
        let mut z: Vec<Complex<T>> = (0..d)
            .map(|k| {
                let a = tau * from_usize::<T>(k) / from_usize::<T>(d) + lit(0.4);
                Complex::from_polar(lit::<T>(DK_START_RADIUS), a)
            })
            .collect();
        let tol = lit::<T>(DK_TOL);
        for _ in 0..DK_MAX_ITER {
            let mut worst = T::zero();
            for i in 0..d {
                let mut den = Complex::new(T::one(), T::zero());
                for j in 0..d {
                    if i != j {
                        den = den * (z[i] - z[j]);
                    }
                }
                if den.norm() == T::zero() {
                    den = Complex::new(T::epsilon(), T::zero());
                }
                let step = monic.eval(z[i]) / den;
                z[i] = z[i] - step;
                worst = worst.max(step.norm() / T::one().max(z[i].norm()));
            }
            if worst <= tol {
                return Ok(z);
            }
        }
        let noise = T::epsilon() * lit(1e3);
        if z.iter()
            .all(|r| monic.eval(*r).norm() <= noise * monic.eval_abs(*r))
        {
            Ok(z)
        } else {
            Err(Error::Numeric(format!(
                "Durand-Kerner did not converge in {DK_MAX_ITER} iterations"
            )))
        }
    }

    /// Newton's method from `start`; returns the last iterate.
    pub fn newton(&self, start: Complex<T>, iterations: usize) -> Complex<T> {
        let d = self.derivative();
        let mut z = start;
        for _ in 0..iterations {
            let dz = d.eval(z);
            if dz.norm() == T::zero() {
                break;
            }
            let step = self.eval(z) / dz;
            z = z - step;
            if step.norm() <= T::epsilon() * T::one().max(z.norm()) {
                break;
            }
        }
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn arithmetic() {
        let p = Poly::from_roots(&[c(1.0, 0.0), c(-2.0, 0.0)]);
        assert_eq!(p.coeffs(), &[c(-2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(p.derivative().coeffs(), &[c(1.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(p.eval(c(3.0, 0.0)), c(10.0, 0.0));
        let q = p.sub(&Poly::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]));
        assert_eq!(q.trimmed(1e-14).degree(), 1);
    }

    #[test]
    fn simple_roots() {
        let expected = [c(0.3, 0.1), c(-0.7, 0.2), c(2.0, -1.0), c(0.0, 0.5)];
        let mut roots = Poly::from_roots(&expected).roots().unwrap();
        for e in expected {
            let (i, _) = roots
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - e).norm().partial_cmp(&(b.1 - e).norm()).unwrap())
                .unwrap();
            assert!((roots[i] - e).norm() < 1e-12);
            roots.remove(i);
        }
    }

    #[test]
    fn double_root_polished_from_centroid() {
        let r = c(0.4, -0.2);
        let p = Poly::from_roots(&[r, r, c(3.0, 1.0)]);
        let roots = p.roots().unwrap();
        let mut near: Vec<_> = roots.iter().filter(|z| (*z - r).norm() < 1e-4).collect();
        assert_eq!(near.len(), 2);
        let centroid = (near.pop().unwrap() + near.pop().unwrap()) / 2.0;
        assert!((centroid - r).norm() < 1e-7);
        let polished = p.derivative().newton(centroid, 50);
        assert!((polished - r).norm() < 1e-14);
    }

    #[test]
    fn rejects_zero_leading_coefficient() {
        assert!(Poly::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).roots().is_err());
    }
}
