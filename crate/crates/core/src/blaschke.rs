//! Unicritical Blaschke products `B_w(z) = ((z - w)/(1 - conj(w) z))^n`.
//!
//! Besides evaluation this module owns the boundary circle map (its
//! continuous lift and fixed points), the slow Denjoy-Wolff iteration oracle
//! and the hyperbolic-step machinery used to separate the two parabolic
//! regimes.

use num_complex::Complex;

use crate::angle;
use crate::error::{Error, Result};
use crate::mobius::DiskMobius;
use crate::scalar::{cis, from_usize, lit, Scalar};

/// Uniform grid size for the boundary fixed-point scan.
pub const FIXED_POINT_GRID: usize = 4096;
/// Bisection tolerance (radians) for boundary fixed points.
pub const FIXED_POINT_ANGLE_TOL: f64 = 1e-12;
/// A `K` endpoint whose displacement is this close to `2πℤ` is a tangential
/// (neutral) fixed point.
pub const TANGENT_TOL: f64 = 1e-9;
/// Sign-change roots within this radius of a tangential root are merged into
/// it when the displacement stays flat in between.
pub const TANGENT_MERGE_RADIUS: f64 = 1e-3;

/// Orbit indices compared by the hyperbolic-step ratio test.
pub const STEP_PROBE_INDEX: usize = 100_000;
/// `d(2k)/d(k)` above this means the step stays positive.
pub const POSITIVE_STEP_RATIO: f64 = 0.9;
/// `d(2k)/d(k)` below this means the step decays to zero.
pub const ZERO_STEP_RATIO: f64 = 0.6;

/// `B_w(z) = ((z - w)/(1 - conj(w) z))^n` with `n ≥ 2` and `|w| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnicriticalBlaschke<T> {
    n: u32,
    w: Complex<T>,
}

/// Denjoy-Wolff classification of a Blaschke product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlaschkeClass<T> {
    /// Attracting fixed point inside the disk.
    Elliptic {
        dw_point: Complex<T>,
        multiplier: Complex<T>,
    },
    /// Neutral fixed point on the circle.
    Parabolic { dw_point: Complex<T> },
    /// Attracting fixed point on the circle; the multiplier is real in `(0, 1)`.
    Hyperbolic { dw_point: Complex<T>, multiplier: T },
}

impl<T: Scalar> BlaschkeClass<T> {
    pub fn dw_point(&self) -> Complex<T> {
        match *self {
            BlaschkeClass::Elliptic { dw_point, .. }
            | BlaschkeClass::Parabolic { dw_point }
            | BlaschkeClass::Hyperbolic { dw_point, .. } => dw_point,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BlaschkeClass::Elliptic { .. } => "elliptic",
            BlaschkeClass::Parabolic { .. } => "parabolic",
            BlaschkeClass::Hyperbolic { .. } => "hyperbolic",
        }
    }

    pub fn is_elliptic(&self) -> bool {
        matches!(self, BlaschkeClass::Elliptic { .. })
    }

    pub fn is_parabolic(&self) -> bool {
        matches!(self, BlaschkeClass::Parabolic { .. })
    }

    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, BlaschkeClass::Hyperbolic { .. })
    }
}

/// Limit behaviour of `d(B^k z, B^{k+1} z)` for a parabolic map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HyperbolicStepKind {
    ZeroStep,
    PositiveStep,
}

/// Where the forward-iteration oracle found the Denjoy-Wolff point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DwLocation {
    Interior,
    Boundary,
}

/// Branch choice for the boundary lift: `F(phi)` is the representative
/// closest to `value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftAnchor<T> {
    pub phi: T,
    pub value: T,
}

impl<T: Scalar> Default for LiftAnchor<T> {
    fn default() -> Self {
        Self {
            phi: T::zero(),
            value: T::zero(),
        }
    }
}

/// Consecutive hyperbolic distances along an orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSequence<T> {
    pub values: Vec<T>,
    /// The orbit reached `|z| ≥ 1 - 1e-15` and was cut short.
    pub truncated: bool,
}

impl<T: Scalar> UnicriticalBlaschke<T> {
    pub fn new(n: u32, w: Complex<T>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("degree {n} is below 2")));
        }
        if !(w.re.is_finite() && w.im.is_finite()) || w.norm() >= T::one() {
            return Err(Error::Domain(format!(
                "critical point {w} is not inside the disk"
            )));
        }
        Ok(Self { n, w })
    }

    /// Builds `B_w` from the polar form `w = s e^{iψ}`.
    ///
    /// `ψ` is reduced to `[0, 2π)` first so that exact angles such as `π`
    /// produce exact parameters.
    pub fn from_polar(n: u32, s: T, psi: T) -> Result<Self> {
        if !(T::zero()..T::one()).contains(&s) {
            return Err(Error::Domain(format!("modulus {s} is not in [0, 1)")));
        }
        let psi = angle::normalize(psi);
        let w = if psi == T::PI() {
            Complex::new(-s, T::zero())
        } else if psi == T::zero() {
            Complex::new(s, T::zero())
        } else {
            Complex::from_polar(s, psi)
        };
        Self::new(n, w)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn w(&self) -> Complex<T> {
        self.w
    }

    /// `|w|`.
    pub fn s(&self) -> T {
        self.w.norm()
    }

    /// `arg w` in `[0, 2π)`; zero when `w = 0`.
    pub fn psi(&self) -> T {
        if self.w.norm() == T::zero() {
            T::zero()
        } else {
            angle::normalize(self.w.arg())
        }
    }

    fn nf(&self) -> T {
        lit(f64::from(self.n))
    }

    /// The inner factor `A(z) = (z - w)/(1 - conj(w) z)`.
    pub fn inner(&self) -> DiskMobius<T> {
        DiskMobius::translation(self.w).expect("|w| < 1 checked at construction")
    }

    fn denominator(&self, z: Complex<T>) -> Result<Complex<T>> {
        let den = Complex::new(T::one(), T::zero()) - self.w.conj() * z;
        if den.norm() <= T::epsilon() * lit(4.0) || !den.norm().is_finite() {
            return Err(Error::Domain(format!("z = {z} is the pole 1/conj(w)")));
        }
        Ok(den)
    }

    pub fn evaluate(&self, z: Complex<T>) -> Result<Complex<T>> {
        let den = self.denominator(z)?;
        Ok(((z - self.w) / den).powi(self.n as i32))
    }

    /// `n A(z)^{n-1} A'(z)` with `A'(z) = (1 - |w|²)/(1 - conj(w) z)²`.
    pub fn derivative(&self, z: Complex<T>) -> Result<Complex<T>> {
        let den = self.denominator(z)?;
        let a = (z - self.w) / den;
        let da = Complex::new(T::one() - self.w.norm_sqr(), T::zero()) / (den * den);
        Ok(a.powi(self.n as i32 - 1) * da * self.nf())
    }

    /// `n(1-|w|²) A^{n-2} (1 - conj(w) z)^{-4} [(n-1)(1-|w|²) + 2 conj(w)(z - w)]`.
    pub fn second_derivative(&self, z: Complex<T>) -> Result<Complex<T>> {
        let den = self.denominator(z)?;
        let a = (z - self.w) / den;
        let one_minus = T::one() - self.w.norm_sqr();
        let factor = Complex::new((self.nf() - T::one()) * one_minus, T::zero())
            + self.w.conj() * (z - self.w) * lit::<T>(2.0);
        Ok(a.powi(self.n as i32 - 2) * factor * (self.nf() * one_minus) / den.powi(4))
    }

    /// `|B'(e^{iφ})| = n(1-s²)/(1+s²-2s cos(φ-ψ))`.
    pub fn boundary_derivative_modulus(&self, phi: T) -> T {
        let s = self.s();
        let two = lit::<T>(2.0);
        self.nf() * (T::one() - s * s) / (T::one() + s * s - two * s * (phi - self.psi()).cos())
    }

    /// Continuous argument of `A(e^{iφ})`: `φ + 2 atan2(s sin(φ-ψ), 1 - s cos(φ-ψ))`.
    pub fn inner_lift(&self, phi: T) -> T {
        let s = self.s();
        let x = phi - self.psi();
        phi + lit::<T>(2.0) * (s * x.sin()).atan2(T::one() - s * x.cos())
    }

    /// Canonical lift `n · inner_lift(φ)`; satisfies `e^{iF(φ)} = B(e^{iφ})`.
    fn lift_raw(&self, phi: T) -> T {
        self.nf() * self.inner_lift(phi)
    }

    /// Continuous lift `F` of the boundary map with `e^{iF(φ)} = B(e^{iφ})`,
    /// `F' = |B'| > 0` and `F(φ + 2π) = F(φ) + 2πn`. The `2πℤ` ambiguity is
    /// fixed by `anchor`.
    pub fn circle_lift(&self, phi: T, anchor: LiftAnchor<T>) -> T {
        let offset = ((anchor.value - self.lift_raw(anchor.phi)) / T::TAU()).round();
        self.lift_raw(phi) + offset * T::TAU()
    }

    /// `F(φ) - φ` for the canonical lift; fixed points are where this hits `2πℤ`.
    pub fn lift_displacement(&self, phi: T) -> T {
        self.lift_raw(phi) - phi
    }

    /// Angles in `[0, 2π)` of all fixed points on the unit circle.
    ///
    /// Transversal roots come from sign changes of `F(φ) - φ - 2πk` on an
    /// adaptively refined grid plus bisection. Tangential roots can only sit
    /// where `|B'| = 1`, i.e. at the ends of the arc `K`; those are tested
    /// directly and absorb nearby transversal roots.
    pub fn boundary_fixed_points(&self) -> Vec<T> {
        let tau = T::TAU();
        let start = self.psi();
        let step = tau / from_usize::<T>(FIXED_POINT_GRID);
        let mut roots: Vec<T> = Vec::new();
        let mut prev_phi = start;
        let mut prev_g = self.lift_displacement(start);
        for i in 1..=FIXED_POINT_GRID {
            let phi = start + step * from_usize::<T>(i);
            let g = self.lift_displacement(phi);
            self.scan_cell(prev_phi, phi, prev_g, g, 0, &mut roots);
            prev_phi = phi;
            prev_g = g;
        }

        let tangential = self.tangential_fixed_points();
        let mut out: Vec<T> = roots
            .into_iter()
            .map(angle::normalize)
            .filter(|r| tangential.iter().all(|t| !self.same_flat_root(*r, *t)))
            .collect();
        out.extend(tangential.iter().map(|t| angle::normalize(*t)));
        out.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
        out.dedup_by(|a, b| angle::circular_distance(*a, *b) < lit(1e-10));
        if out.len() > 1 {
            let (first, last) = (out[0], out[out.len() - 1]);
            if angle::circular_distance(first, last) < lit(1e-10) {
                out.pop();
            }
        }
        out
    }

    fn same_flat_root(&self, root: T, tangent: T) -> bool {
        let gap = angle::principal(root - tangent);
        gap.abs() <= lit(TANGENT_MERGE_RADIUS)
            && angle::dist_to_zero(self.lift_displacement(tangent + gap * lit(0.5)))
                < lit(TANGENT_TOL)
    }

    fn scan_cell(&self, a: T, b: T, ga: T, gb: T, depth: u32, roots: &mut Vec<T>) {
        let half_pi = T::FRAC_PI_2();
        if (gb - ga).abs() > half_pi && depth < 16 {
            let quarter = (b - a) / lit(4.0);
            let mut x0 = a;
            let mut g0 = ga;
            for j in 1..=4 {
                let x1 = if j == 4 {
                    b
                } else {
                    a + quarter * lit(f64::from(j))
                };
                let g1 = if j == 4 {
                    gb
                } else {
                    self.lift_displacement(x1)
                };
                self.scan_cell(x0, x1, g0, g1, depth + 1, roots);
                x0 = x1;
                g0 = g1;
            }
            return;
        }
        let tau = T::TAU();
        let (lo, hi) = if ga <= gb { (ga, gb) } else { (gb, ga) };
        // Levels 2πm with lo < 2πm ≤ hi; the half-open rule counts a root on
        // a grid node exactly once.
        let mut m = (lo / tau).floor() + T::one();
        while m * tau <= hi {
            let level = m * tau;
            roots.push(self.bisect_level(a, b, ga - level, level));
            m = m + T::one();
        }
    }

    fn bisect_level(&self, mut a: T, mut b: T, mut fa: T, level: T) -> T {
        if fa == T::zero() {
            return a;
        }
        if self.lift_displacement(b) - level == T::zero() {
            return b;
        }
        let tol = lit::<T>(FIXED_POINT_ANGLE_TOL);
        for _ in 0..200 {
            if (b - a).abs() <= tol {
                break;
            }
            let mid = (a + b) * lit(0.5);
            let fm = self.lift_displacement(mid) - level;
            if fm == T::zero() {
                return mid;
            }
            if (fm > T::zero()) == (fa > T::zero()) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        (a + b) * lit(0.5)
    }

    /// Ends of `K = {|B'| ≤ 1}` that are (numerically) fixed.
    fn tangential_fixed_points(&self) -> Vec<T> {
        let s = self.s();
        let nf = self.nf();
        let inner = (nf - T::one()) / (nf + T::one());
        let psi = self.psi();
        let candidates: Vec<T> = if (s - inner).abs() <= lit(1e-12) {
            vec![psi + T::PI()]
        } else if s > inner {
            let t = ((T::one() - nf + (T::one() + nf) * s * s) / (lit::<T>(2.0) * s))
                .max(-T::one())
                .min(T::one());
            let half = t.acos();
            vec![psi + half, psi + T::TAU() - half]
        } else {
            Vec::new()
        };
        candidates
            .into_iter()
            .filter(|phi| angle::dist_to_zero(self.lift_displacement(*phi)) < lit(TANGENT_TOL))
            .collect()
    }

    /// Newton's method on `B(z) - z` from `start`; returns an interior fixed
    /// point whose residual is below `tol`, if the iteration lands on one.
    pub fn newton_interior(&self, start: Complex<T>, tol: T) -> Option<Complex<T>> {
        let one = Complex::new(T::one(), T::zero());
        let mut z = start;
        for _ in 0..100 {
            let h = self.evaluate(z).ok()? - z;
            let dh = self.derivative(z).ok()? - one;
            if dh.norm() == T::zero() {
                return None;
            }
            let step = h / dh;
            z = z - step;
            if !z.re.is_finite() || !z.im.is_finite() || z.norm() > lit(4.0) {
                return None;
            }
            if step.norm() <= T::epsilon() * lit(4.0) * T::one().max(z.norm()) {
                break;
            }
        }
        // Near a multiple root on the circle B(z) - z is tiny for points
        // well inside the disk, so the residual alone proves nothing. Require
        // a Kantorovich-style simple-root certificate instead.
        let h = self.evaluate(z).ok()? - z;
        let dh = self.derivative(z).ok()? - one;
        let ddh = self.second_derivative(z).ok()?.norm();
        // B(z) - z can round to exactly zero; the evaluation noise floor
        // keeps the certificate honest.
        let eta = h.norm().max(T::epsilon() * lit(4.0)) / dh.norm();
        let margin = T::one() - z.norm();
        let simple = eta * ddh <= dh.norm() * lit(0.1);
        (simple && h.norm() <= tol && eta * lit(10.0) < margin).then_some(z)
    }

    /// The attracting interior fixed point, located by orbit iteration from
    /// the critical value with Newton polishing at growing checkpoints.
    pub fn interior_fixed_point(&self) -> Option<Complex<T>> {
        let tol = lit::<T>(1e-12);
        let checkpoints = [
            0usize, 16, 64, 256, 1024, 4096, 16_384, 65_536, 262_144, 1_048_576,
        ];
        let mut z = Complex::new(T::zero(), T::zero());
        let mut k = 0usize;
        for &cp in &checkpoints {
            while k < cp {
                z = self.evaluate(z).ok()?;
                k += 1;
            }
            if let Some(p) = self.newton_interior(z, tol) {
                return Some(p);
            }
        }
        None
    }

    /// Forward-iteration oracle for the Denjoy-Wolff point, started at the
    /// critical value `0`.
    ///
    /// Fifty consecutive steps shorter than `1e-3` (hyperbolic metric) trigger
    /// a Newton search for an interior fixed point; if that fails and the
    /// orbit is within `1e-3` of a non-repelling boundary fixed point, that
    /// point is returned. Twenty consecutive iterates with `|z| > 1 - 1e-6`
    /// also select the non-repelling boundary fixed point closest to the
    /// orbit. Anything else is reported as inconclusive.
    pub fn denjoy_wolff_iterate(
        &self,
        tol: T,
        max_iter: usize,
    ) -> Result<(Complex<T>, DwLocation)> {
        if tol <= T::zero() {
            return Err(Error::Precondition("tolerance must be positive".into()));
        }
        let near = lit::<T>(1e-3);
        let edge = T::one() - lit::<T>(1e-6);
        let mut z = Complex::new(T::zero(), T::zero());
        let mut close_run = 0usize;
        let mut edge_run = 0usize;
        let mut boundary_candidates: Option<Vec<Complex<T>>> = None;
        for _ in 0..max_iter {
            let next = self.evaluate(z)?;
            let step = if z.norm() < T::one() && next.norm() < T::one() {
                hyperbolic_distance(z, next).unwrap_or(T::infinity())
            } else {
                T::infinity()
            };
            close_run = if step < near { close_run + 1 } else { 0 };
            edge_run = if next.norm() > edge { edge_run + 1 } else { 0 };

            if close_run >= 50 {
                close_run = 0;
                if let Some(p) = self.newton_interior(next, tol) {
                    return Ok((p, DwLocation::Interior));
                }
                // A stalled orbit with no certified interior root, sitting
                // next to a non-repelling boundary fixed point: the orbit has
                // run into a multiple root on the circle that f64 cannot
                // approach further.
                let candidates =
                    boundary_candidates.get_or_insert_with(|| self.non_repelling_boundary_points());
                if let Some(best) = nearest(candidates, next) {
                    if (best - next).norm() < lit(1e-3) {
                        return Ok((best, DwLocation::Boundary));
                    }
                }
            }
            if edge_run >= 20 {
                edge_run = 0;
                let candidates =
                    boundary_candidates.get_or_insert_with(|| self.non_repelling_boundary_points());
                if let Some(best) = nearest(candidates, next) {
                    return Ok((best, DwLocation::Boundary));
                }
            }
            z = next;
        }
        Err(Error::Inconclusive(format!(
            "critical orbit undecided after {max_iter} iterations"
        )))
    }

    fn non_repelling_boundary_points(&self) -> Vec<Complex<T>> {
        self.boundary_fixed_points()
            .into_iter()
            .filter(|phi| self.boundary_derivative_modulus(*phi) <= T::one() + lit(1e-7))
            .map(cis)
            .collect()
    }

    /// Direction of the Denjoy-Wolff point: the least repelling boundary
    /// fixed point with `|B'| ≤ 1`, else the argument of the interior fixed
    /// point.
    fn chart_anchor(&self) -> T {
        let boundary = self
            .boundary_fixed_points()
            .into_iter()
            .map(|phi| (phi, self.boundary_derivative_modulus(phi)))
            .filter(|(_, m)| *m <= T::one() + lit(1e-7))
            .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite multipliers"));
        if let Some((phi, _)) = boundary {
            return phi;
        }
        match self.interior_fixed_point() {
            Some(p) if p.norm() > T::zero() => p.arg(),
            _ => T::zero(),
        }
    }

    /// Hyperbolic distances `d(B^k z, B^{k+1} z)` for `k = 0..count`.
    ///
    /// In disk coordinates an orbit point at depth `1 - |z|` carries a
    /// distance error of about `ε/(1 - |z|)`, enough to break monotonicity
    /// long before the circle is reached. The orbit is therefore run in the
    /// [`HalfPlaneChart`] anchored at the direction of the Denjoy-Wolff
    /// point, where the orbit keeps full relative precision.
    pub fn hyperbolic_step_sequence(&self, z: Complex<T>, count: usize) -> Result<StepSequence<T>> {
        if z.norm() >= T::one() {
            return Err(Error::Domain(format!(
                "start point {z} is not inside the disk"
            )));
        }
        let anchor = self.chart_anchor();
        let chart = HalfPlaneChart::new(self, anchor);
        // 1 - |z| ≤ 1e-15 in terms of 1 - |z|².
        let limit = lit::<T>(2e-15);
        let mut values = Vec::with_capacity(count);
        let mut cur = chart.to_chart(z);
        for _ in 0..count {
            let next = chart.step(cur);
            if !(HalfPlaneChart::depth(next) > limit) {
                return Ok(StepSequence {
                    values,
                    truncated: true,
                });
            }
            values.push(HalfPlaneChart::<T>::distance(cur, next));
            cur = next;
        }
        Ok(StepSequence {
            values,
            truncated: false,
        })
    }

    /// Step distances `d(B^k 0, B^{k+1} 0)` at the requested orbit indices,
    /// iterated in the [`HalfPlaneChart`] anchored at `e^{iφ₀}`, which should
    /// be a (near) fixed point of `B`.
    pub fn anchored_step_distances(&self, phi0: T, at: &[usize]) -> Vec<T> {
        let chart = HalfPlaneChart::new(self, phi0);
        let last = at.iter().copied().max().unwrap_or(0);
        let mut out = vec![T::nan(); at.len()];
        let mut zeta = Complex::new(T::zero(), T::one());
        for k in 0..=last {
            let next = chart.step(zeta);
            for (slot, idx) in out.iter_mut().zip(at) {
                if *idx == k {
                    *slot = HalfPlaneChart::<T>::distance(zeta, next);
                }
            }
            zeta = next;
        }
        out
    }

    /// `d(2k)/d(k)` for the anchored step sequence at `k = STEP_PROBE_INDEX`.
    pub fn step_ratio(&self, phi0: T) -> T {
        let d = self.anchored_step_distances(phi0, &[STEP_PROBE_INDEX, 2 * STEP_PROBE_INDEX]);
        d[1] / d[0]
    }
}

/// `B` in the upper half-plane, with `e^{iφ₀}` sent to infinity by
/// `ζ = i(e^{iφ₀} + z)/(e^{iφ₀} - z)`.
///
/// The circle becomes the real axis and every ingredient has real
/// coefficients, so orbits hugging the circle keep full relative precision
/// in their distance to it, which plain disk arithmetic loses.
pub struct HalfPlaneChart<T> {
    phi0: T,
    offset: T,
    scale: T,
    cos_turn: T,
    sin_turn: T,
    binom: Vec<T>,
}

impl<T: Scalar> HalfPlaneChart<T> {
    pub fn new(b: &UnicriticalBlaschke<T>, phi0: T) -> Self {
        let two = lit::<T>(2.0);
        let half = lit::<T>(0.5);
        let beta = b.inner_lift(phi0);
        // The inner factor in chart coordinates is the real affine map
        // x ↦ cot((β - Θ(φ₀ - 2 acot x))/2).
        let affine = |acot_x: T| {
            ((beta - b.inner_lift(phi0 - two * acot_x)) * half)
                .tan()
                .recip()
        };
        let offset = affine(T::FRAC_PI_2());
        let scale = affine(T::FRAC_PI_4()) - offset;
        let turn = angle::principal(b.nf() * beta - phi0) * half;
        let n = b.n as usize;
        let mut binom = vec![T::one(); n + 1];
        for k in 1..=n {
            binom[k] = binom[k - 1] * from_usize::<T>(n + 1 - k) / from_usize::<T>(k);
        }
        Self {
            phi0,
            offset,
            scale,
            cos_turn: turn.cos(),
            sin_turn: turn.sin(),
            binom,
        }
    }

    pub fn to_chart(&self, z: Complex<T>) -> Complex<T> {
        let e = cis(self.phi0);
        Complex::new(T::zero(), T::one()) * (e + z) / (e - z)
    }

    pub fn from_chart(&self, zeta: Complex<T>) -> Complex<T> {
        let i = Complex::new(T::zero(), T::one());
        cis(self.phi0) * (zeta - i) / (zeta + i)
    }

    /// `1 - |z|²` for the disk point of `ζ`, without cancellation.
    pub fn depth(zeta: Complex<T>) -> T {
        lit::<T>(4.0) * zeta.im / (zeta + Complex::new(T::zero(), T::one())).norm_sqr()
    }

    /// `B` in chart coordinates.
    pub fn step(&self, zeta: Complex<T>) -> Complex<T> {
        // z ↦ zⁿ becomes u ↦ X(1/u)/Y(1/u) with real binomial sums.
        let u = zeta * self.scale + self.offset;
        let r = u.inv();
        let mut x = Complex::new(T::zero(), T::zero());
        let mut y = Complex::new(T::zero(), T::zero());
        let mut rk = Complex::new(T::one(), T::zero());
        for (k, c) in self.binom.iter().enumerate() {
            let sign = if (k / 2) % 2 == 0 {
                T::one()
            } else {
                -T::one()
            };
            if k % 2 == 0 {
                x = x + rk * (*c * sign);
            } else {
                y = y + rk * (*c * sign);
            }
            rk = rk * r;
        }
        let v = x / y;
        (v * self.cos_turn + self.sin_turn)
            / (Complex::new(self.cos_turn, T::zero()) - v * self.sin_turn)
    }

    /// Hyperbolic distance in the normalisation of [`hyperbolic_distance`].
    pub fn distance(a: Complex<T>, b: Complex<T>) -> T {
        ((a - b).norm() / (a - b.conj()).norm())
            .min(T::one())
            .atanh()
    }
}

fn nearest<T: Scalar>(points: &[Complex<T>], z: Complex<T>) -> Option<Complex<T>> {
    points.iter().copied().min_by(|a, b| {
        (*a - z)
            .norm()
            .partial_cmp(&(*b - z).norm())
            .expect("finite distances")
    })
}

/// Decision rule for the hyperbolic-step ratio `d(2k)/d(k)`.
pub fn step_kind_from_ratio<T: Scalar>(ratio: T) -> Option<HyperbolicStepKind> {
    if ratio > lit(POSITIVE_STEP_RATIO) {
        Some(HyperbolicStepKind::PositiveStep)
    } else if ratio < lit(ZERO_STEP_RATIO) {
        Some(HyperbolicStepKind::ZeroStep)
    } else {
        None
    }
}

/// Hyperbolic distance `artanh |(z1 - z2)/(1 - conj(z2) z1)|`, without the
/// conventional factor 2.
pub fn hyperbolic_distance<T: Scalar>(z1: Complex<T>, z2: Complex<T>) -> Result<T> {
    if z1.norm() >= T::one() || z2.norm() >= T::one() {
        return Err(Error::Domain(
            "hyperbolic distance needs points inside the disk".into(),
        ));
    }
    let one = Complex::new(T::one(), T::zero());
    let rho = ((z1 - z2) / (one - z2.conj() * z1)).norm();
    Ok(rho.min(T::one()).atanh())
}
