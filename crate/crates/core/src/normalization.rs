//! Reduction of a unicritical finite Blaschke product to its normal form
//! `B_w` with `arg w` in the fundamental sector `[0, 2π/(n-1))`.

use num_complex::Complex;

use crate::angle;
use crate::blaschke::UnicriticalBlaschke;
use crate::error::{Error, Result};
use crate::mobius::DiskMobius;
use crate::poly::Poly;
use crate::scalar::{cis, from_usize, lit, Scalar};

/// Largest acceptable verification error.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Boundary points used to verify the factorisation and the final conjugacy.
pub const VERIFY_POINTS: usize = 32;
/// Tolerance for `|a/d| = 1` when reading the interpolated map as a disk
/// automorphism.
pub const AUTOMORPHISM_TOL: f64 = 1e-9;

/// `e^{iθ} Π (z - wᵢ)/(1 - conj(wᵢ) z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteBlaschke<T> {
    theta: T,
    zeros: Vec<Complex<T>>,
}

/// Output of [`normalize`].
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationResult<T> {
    /// Normal-form parameter; `arg w ∈ [0, 2π/(n-1))`.
    pub w: Complex<T>,
    pub n: u32,
    /// The critical point of the input.
    pub critical_point: Complex<T>,
    /// `A(z) = (z - z₀)/(1 - conj(z₀) z)`.
    pub a: DiskMobius<T>,
    /// `M` with `A∘F∘A⁻¹ = M(zⁿ)`.
    pub m: DiskMobius<T>,
    /// Final rotation angle.
    pub alpha: T,
    /// Worst of the factorisation check and the final conjugacy check.
    pub residual: T,
}

impl<T: Scalar> NormalizationResult<T> {
    /// `C = R_α ∘ M⁻¹ ∘ A`, so that `C∘F∘C⁻¹ = B_w`.
    pub fn conjugator(&self) -> DiskMobius<T> {
        DiskMobius::rotation(self.alpha).compose(&self.m.inverse().compose(&self.a))
    }

    pub fn normal_form(&self) -> UnicriticalBlaschke<T> {
        UnicriticalBlaschke::new(self.n, self.w).expect("normal-form parameter lies in the disk")
    }
}

impl<T: Scalar> FiniteBlaschke<T> {
    pub fn new(theta: T, zeros: Vec<Complex<T>>) -> Result<Self> {
        if zeros.len() < 2 {
            return Err(Error::Domain(format!("degree {} is below 2", zeros.len())));
        }
        if !theta.is_finite() {
            return Err(Error::Domain("theta is not finite".into()));
        }
        if let Some(z) = zeros
            .iter()
            .find(|z| !(z.re.is_finite() && z.im.is_finite()) || z.norm() >= T::one())
        {
            return Err(Error::Domain(format!("zero {z} is not inside the disk")));
        }
        Ok(Self {
            theta: angle::normalize(theta),
            zeros,
        })
    }

    /// `B_w` written as a finite product.
    pub fn from_unicritical(b: &UnicriticalBlaschke<T>) -> Self {
        Self {
            theta: T::zero(),
            zeros: vec![b.w(); b.n() as usize],
        }
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn zeros(&self) -> &[Complex<T>] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        let one = Complex::new(T::one(), T::zero());
        let mut acc = cis(self.theta);
        for w in &self.zeros {
            let den = one - w.conj() * z;
            if den.norm() <= T::epsilon() * lit(4.0) {
                return Err(Error::Domain(format!("z = {z} is a pole")));
            }
            acc = acc * (z - w) / den;
        }
        Ok(acc)
    }

    /// Numerator of `F'` up to the constant `e^{iθ}`: `P'Q - PQ'` with
    /// `P = Π(z - wᵢ)` and `Q = Π(1 - conj(wᵢ) z)`.
    pub fn derivative_numerator(&self) -> Poly<T> {
        let one = Complex::new(T::one(), T::zero());
        let p = Poly::from_roots(&self.zeros);
        let q = self.zeros.iter().fold(Poly::constant(one), |acc, w| {
            acc.mul(&Poly::new(vec![one, -w.conj()]))
        });
        p.derivative().mul(&q).sub(&p.mul(&q.derivative()))
    }

    /// The `n - 1` critical points inside the disk, with multiplicity.
    pub fn critical_points(&self) -> Result<Vec<Complex<T>>> {
        let numerator = self
            .derivative_numerator()
            .trimmed(T::epsilon() * lit(16.0));
        let mut roots = numerator.roots()?;
        roots.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).expect("finite roots"));
        roots.truncate(self.degree() - 1);
        if roots.len() != self.degree() - 1 || roots.iter().any(|r| r.norm() >= T::one()) {
            return Err(Error::Numeric(
                "could not separate the critical points inside the disk".into(),
            ));
        }
        Ok(roots)
    }

    /// The single critical point of a unicritical product.
    ///
    /// `F` is unicritical with critical point `z₀` exactly when `A_{z₀}` sends
    /// the zeros to the vertices of a regular `n`-gon centred at `0`, so `z₀`
    /// solves `Σ A_z(a_k) = 0`, a simple root even though `z₀` is a root of
    /// multiplicity `n - 1` of `F'`. It is found by the fixed-point iteration
    /// `z ← A_z⁻¹(mean A_z(a_k))` followed by Newton, and accepted when all
    /// `A_{z₀}(a_k)ⁿ` agree to `1e-8`.
    pub fn critical_point(&self) -> Result<Complex<T>> {
        let n = self.degree();
        let start = self
            .zeros
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
            / from_usize::<T>(n);
        let z0 = hyperbolic_centre(&self.zeros, start)?;
        let powers: Vec<Complex<T>> = self
            .zeros
            .iter()
            .map(|a| translate(z0, *a).powi(n as i32))
            .collect();
        let tol = lit::<T>(RESIDUAL_TOL);
        if let Some(p) = powers.iter().find(|p| (**p - powers[0]).norm() > tol) {
            return Err(Error::Precondition(format!(
                "not unicritical: zeros seen from {z0} do not form a regular polygon \
                 (power spread {})",
                (*p - powers[0]).norm()
            )));
        }
        Ok(z0)
    }
}

/// `A_z(a) = (a - z)/(1 - conj(z) a)`.
fn translate<T: Scalar>(z: Complex<T>, a: Complex<T>) -> Complex<T> {
    (a - z) / (Complex::new(T::one(), T::zero()) - z.conj() * a)
}

/// The point `z` with `Σ A_z(a_k) = 0`, from `start`.
fn hyperbolic_centre<T: Scalar>(zeros: &[Complex<T>], start: Complex<T>) -> Result<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    let nf = from_usize::<T>(zeros.len());
    let mut z = start;
    for _ in 0..60 {
        let mean = zeros
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, a| {
                acc + translate(z, *a)
            })
            / nf;
        let next = (mean + z) / (one + z.conj() * mean);
        let moved = (next - z).norm();
        z = next;
        if moved <= T::epsilon() * lit(4.0) {
            break;
        }
    }
    // Newton on the real-differentiable map g(z) = Σ A_z(a_k):
    // dg = P dz + Q conj(dz).
    for _ in 0..50 {
        let mut g = Complex::new(T::zero(), T::zero());
        let mut p = Complex::new(T::zero(), T::zero());
        let mut q = Complex::new(T::zero(), T::zero());
        for a in zeros {
            let den = one - z.conj() * a;
            g = g + (a - z) / den;
            p = p - one / den;
            q = q + a * (a - z) / (den * den);
        }
        let det = p.norm_sqr() - q.norm_sqr();
        if det == T::zero() {
            break;
        }
        let r = -g;
        let step = (p.conj() * r - q * r.conj()) / det;
        z = z + step;
        if step.norm() <= T::epsilon() * lit(4.0) {
            break;
        }
    }
    if !(z.norm() < T::one()) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Numeric(
            "critical point iteration left the disk".into(),
        ));
    }
    Ok(z)
}

/// Verification angles: a golden-ratio sequence on the circle.
fn verify_angles<T: Scalar>() -> impl Iterator<Item = T> {
    let golden = lit::<T>(0.618_033_988_749_894_8);
    (0..VERIFY_POINTS).map(move |k| {
        let x = lit::<T>(0.5) + golden * from_usize::<T>(k);
        T::TAU() * (x - x.floor())
    })
}

/// Reads `(az + b)/(cz + d)` as `e^{iθ}(z - u)/(1 - conj(u) z)`.
fn matrix_to_automorphism<T: Scalar>(m: [[Complex<T>; 2]; 2]) -> Result<DiskMobius<T>> {
    let [[a, b], [c, d]] = m;
    if a.norm() == T::zero() || d.norm() == T::zero() {
        return Err(Error::Numeric(
            "interpolated map is not a disk automorphism".into(),
        ));
    }
    let rot = a / d;
    let u = -b / a;
    let tol = lit::<T>(AUTOMORPHISM_TOL);
    if (rot.norm() - T::one()).abs() > tol
        || (c / d + u.conj()).norm() > tol
        || u.norm() >= T::one()
    {
        return Err(Error::Numeric(format!(
            "interpolated map is not a disk automorphism (|a/d| = {}, u = {u})",
            rot.norm()
        )));
    }
    DiskMobius::new(rot.arg(), u)
}

/// Conjugates a unicritical finite Blaschke product to its normal form.
pub fn normalize<T: Scalar>(f: &FiniteBlaschke<T>) -> Result<NormalizationResult<T>> {
    let n = f.degree();
    let nu = u32::try_from(n).map_err(|_| Error::Domain("degree too large".into()))?;
    let z0 = f.critical_point()?;
    let a = DiskMobius::translation(z0)?;
    let a_inv = a.inverse();
    let b1 = |z: Complex<T>| -> Result<Complex<T>> { a.apply(f.eval(a_inv.apply(z)?)?) };

    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let nf = from_usize::<T>(n);
    let y = [b1(zero)?, b1(one)?, b1(cis(T::PI() / nf))?];
    let m = matrix_to_automorphism(interpolate(y[0], y[1], y[2]))?;

    let mut residual = T::zero();
    for phi in verify_angles::<T>() {
        let z = cis(phi);
        let err = (b1(z)? - m.apply(z.powi(n as i32))?).norm();
        residual = residual.max(err);
    }
    if !(residual <= lit(RESIDUAL_TOL)) {
        return Err(Error::Numeric(format!(
            "factorisation through z^n failed verification (residual {residual})"
        )));
    }

    // B₂ = M⁻¹∘B₁∘M = (e^{iθ}(z - u)/(1 - conj(u) z))ⁿ; rotating by α with
    // (n - 1)α ≡ nθ removes the unimodular factor.
    let u = m.w();
    let arg_u = if u.norm() == T::zero() {
        T::zero()
    } else {
        u.arg()
    };
    let shift = nf * m.theta() / (nf - T::one());
    let target = angle::reduce_to_sector(nu, arg_u + shift);
    let alpha = angle::normalize(target - arg_u);
    let w = if target == T::zero() {
        Complex::new(u.norm(), T::zero())
    } else {
        Complex::from_polar(u.norm(), target)
    };

    let mut result = NormalizationResult {
        w,
        n: nu,
        critical_point: z0,
        a,
        m,
        alpha,
        residual,
    };
    let c = result.conjugator();
    let c_inv = c.inverse();
    let normal = result.normal_form();
    for phi in verify_angles::<T>() {
        let z = cis(phi);
        let err = (c.apply(f.eval(c_inv.apply(z)?)?)? - normal.evaluate(z)?).norm();
        result.residual = result.residual.max(err);
    }
    if !(result.residual <= lit(RESIDUAL_TOL)) {
        return Err(Error::Numeric(format!(
            "normal form failed verification (residual {})",
            result.residual
        )));
    }
    Ok(result)
}

/// The Möbius map sending `0, 1, -1` to `y0, y1, y2`, as a matrix.
fn interpolate<T: Scalar>(y0: Complex<T>, y1: Complex<T>, y2: Complex<T>) -> [[Complex<T>; 2]; 2] {
    // T_z: 0, 1, -1 ↦ 0, 1, ∞ is z ↦ 2z/(z + 1); T_y: y0, y1, y2 ↦ 0, 1, ∞.
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    let tz = [[one * lit::<T>(2.0), zero], [one, one]];
    let ty = [[y1 - y2, -y0 * (y1 - y2)], [y1 - y0, -y2 * (y1 - y0)]];
    let ty_inv = [[ty[1][1], -ty[0][1]], [-ty[1][0], ty[0][0]]];
    let mul = |i: usize, j: usize| ty_inv[i][0] * tz[0][j] + ty_inv[i][1] * tz[1][j];
    [[mul(0, 0), mul(0, 1)], [mul(1, 0), mul(1, 1)]]
}

/// The `n` solutions of `B(z) = q`: `A⁻¹(q^{1/n} e^{2πik/n})`.
pub fn preimages<T: Scalar>(b: &UnicriticalBlaschke<T>, q: Complex<T>) -> Result<Vec<Complex<T>>> {
    if q.norm() > T::one() + lit(1e-12) {
        return Err(Error::Precondition(format!("|q| = {} exceeds 1", q.norm())));
    }
    let n = b.n() as usize;
    let nf = from_usize::<T>(n);
    let root = if q.norm() == T::zero() {
        Complex::new(T::zero(), T::zero())
    } else {
        Complex::from_polar(q.norm().powf(T::one() / nf), q.arg() / nf)
    };
    let inner_inv = b.inner().inverse();
    (0..n)
        .map(|k| {
            let zeta = root * cis(T::TAU() * from_usize::<T>(k) / nf);
            inner_inv.apply(zeta)
        })
        .collect()
}

/// `C∘B∘C⁻¹` as a finite product.
pub fn conjugate<T: Scalar>(
    b: &UnicriticalBlaschke<T>,
    c: &DiskMobius<T>,
) -> Result<FiniteBlaschke<T>> {
    let zeros = preimages(b, c.w())?
        .into_iter()
        .map(|x| c.apply(x))
        .collect::<Result<Vec<_>>>()?;
    let one = Complex::new(T::one(), T::zero());
    let unrotated = FiniteBlaschke::new(T::zero(), zeros)?;
    let target = c.apply(b.evaluate(c.inverse().apply(one)?)?)?;
    let theta = (target / unrotated.eval(one)?).arg();
    FiniteBlaschke::new(theta, unrotated.zeros)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type B = UnicriticalBlaschke<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn eval_examples() {
        let f = FiniteBlaschke::new(0.0, vec![c(0.0, 0.0); 2]).unwrap();
        assert!((f.eval(c(0.3, 0.0)).unwrap() - c(0.09, 0.0)).norm() < 1e-16);
        let g = FiniteBlaschke::new(0.7, vec![c(0.3, 0.2), c(-0.5, 0.1), c(0.0, -0.8)]).unwrap();
        for k in 0..50 {
            assert!((g.eval(cis(0.13 * k as f64)).unwrap().norm() - 1.0).abs() < 1e-13);
        }
        assert!(FiniteBlaschke::new(0.0, vec![c(1.0, 0.0), c(0.0, 0.0)]).is_err());
        assert!(FiniteBlaschke::new(0.0, vec![c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn conjugate_matches_composition() {
        let b = B::new(3, c(0.4, 0.0)).unwrap();
        let m = DiskMobius::new(1.1, Complex::from_polar(0.3, 0.7)).unwrap();
        let f = conjugate(&b, &m).unwrap();
        let z = c(0.1, 0.0);
        let direct = m
            .apply(b.evaluate(m.inverse().apply(z).unwrap()).unwrap())
            .unwrap();
        assert!((f.eval(z).unwrap() - direct).norm() < 1e-12);
    }

    #[test]
    fn conjugate_by_identity() {
        let b = B::new(3, c(0.2, -0.1)).unwrap();
        let f = conjugate(&b, &DiskMobius::identity()).unwrap();
        assert!(f.theta().min(2.0 * PI - f.theta()) < 1e-12);
        assert!(f.zeros().iter().all(|z| (*z - b.w()).norm() < 1e-15));
    }

    #[test]
    fn critical_points_examples() {
        let f = FiniteBlaschke::new(0.0, vec![c(0.0, 0.0); 2]).unwrap();
        let cps = f.critical_points().unwrap();
        assert_eq!(cps.len(), 1);
        assert!(cps[0].norm() < 1e-15);

        let b = B::new(3, c(0.4, 0.0)).unwrap();
        let m = DiskMobius::new(0.0, c(0.0, 0.2)).unwrap();
        let f = conjugate(&b, &m).unwrap();
        let expected = m.apply(c(0.4, 0.0)).unwrap();
        let cps = f.critical_points().unwrap();
        assert_eq!(cps.len(), 2);
        assert!(cps.iter().all(|p| (*p - expected).norm() < 1e-6));
        let centre = f.critical_point().unwrap();
        let h = 1e-7;
        let fprime = (f.eval(centre + h).unwrap() - f.eval(centre - h).unwrap()) / (2.0 * h);
        assert!(fprime.norm() < 1e-9);
    }

    #[test]
    fn non_unicritical_is_rejected() {
        let f = FiniteBlaschke::new(0.0, vec![c(0.5, 0.0), c(-0.5, 0.0), c(0.0, 0.0)]).unwrap();
        let cps = f.critical_points().unwrap();
        assert!((cps[0] - cps[1]).norm() > 0.1);
        assert!(matches!(normalize(&f), Err(Error::Precondition(_))));
    }

    #[test]
    fn normalize_examples() {
        let b = B::new(3, c(0.4, 0.0)).unwrap();
        let r = normalize(&FiniteBlaschke::from_unicritical(&b)).unwrap();
        assert!((r.w - c(0.4, 0.0)).norm() < 1e-10);
        assert!(r.residual < 1e-10);

        let m = DiskMobius::new(1.1, Complex::from_polar(0.3, 0.7)).unwrap();
        let r = normalize(&conjugate(&b, &m).unwrap()).unwrap();
        assert!((r.w - c(0.4, 0.0)).norm() < 1e-9, "{}", r.w);

        let w = Complex::from_polar(0.35, 2.0 * PI / 3.0 * 0.99);
        let b4 = B::new(4, w).unwrap();
        let m = DiskMobius::new(-0.4, c(0.1, 0.25)).unwrap();
        let r = normalize(&conjugate(&b4, &m).unwrap()).unwrap();
        assert!((r.w - w).norm() < 1e-9, "{}", r.w);
    }

    #[test]
    fn rotation_subgroup_fixes_normal_form() {
        let w = Complex::from_polar(0.5, 0.3);
        let b = B::new(4, w).unwrap();
        for j in 0..3 {
            let rot = DiskMobius::rotation(2.0 * PI * j as f64 / 3.0);
            let r = normalize(&conjugate(&b, &rot).unwrap()).unwrap();
            assert!((r.w - w).norm() < 1e-9);
        }
    }

    #[test]
    fn conjugator_reproduces_normal_form() {
        let b = B::new(2, c(-0.2, 0.5)).unwrap();
        let m = DiskMobius::new(2.0, c(-0.3, -0.3)).unwrap();
        let f = conjugate(&b, &m).unwrap();
        let r = normalize(&f).unwrap();
        let k = r.conjugator();
        let z = c(0.2, 0.1);
        let lhs = k
            .apply(f.eval(k.inverse().apply(z).unwrap()).unwrap())
            .unwrap();
        assert!((lhs - r.normal_form().evaluate(z).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn preimage_examples() {
        let b = B::new(3, c(0.3, 0.1)).unwrap();
        let p = preimages(&b, c(0.0, 0.0)).unwrap();
        assert!(p.iter().all(|z| (*z - b.w()).norm() < 1e-15));
        let sq = B::new(2, c(0.0, 0.0)).unwrap();
        let mut p = preimages(&sq, c(0.25, 0.0)).unwrap();
        p.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((p[0] - c(-0.5, 0.0)).norm() < 1e-15 && (p[1] - c(0.5, 0.0)).norm() < 1e-15);
        let q = cis(2.2);
        for z in preimages(&b, q).unwrap() {
            assert!((z.norm() - 1.0).abs() < 1e-13);
            assert!((b.evaluate(z).unwrap() - q).norm() < 1e-11);
        }
        assert!(preimages(&b, c(1.5, 0.0)).is_err());
    }
}
