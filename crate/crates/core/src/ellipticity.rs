//! The arc `K = {|B'| ≤ 1}` on the circle, the radial threshold `s₀(ψ)` and
//! exact classification of `B_w`.
//!
//! Write `γ = (n-1)(ψ+π)` for the displacement `F(φ) - φ` at the centre
//! `ψ+π` of `K` (it does not depend on `s`). The displacement is odd about
//! the centre, so at the ends of `K` it equals `γ ± (p - q)/2`, where `p` and
//! `q` are the lengths of `K` and `B(K)`. On each ray the endpoint
//! displacements therefore cross zero exactly once, at `s₀`.

use num_complex::Complex;

use crate::angle;
use crate::blaschke::{BlaschkeClass, UnicriticalBlaschke};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{lit, Scalar};

/// Angular tolerance for the special-angle closed forms.
pub const SPECIAL_ANGLE_TOL: f64 = 1e-12;
/// `|s - s₀|` at or below this is reported as parabolic.
pub const CLASSIFY_TOL: f64 = 1e-10;
/// Default absolute tolerance for the `s₀` bisection.
pub const S_ZERO_TOL: f64 = 1e-12;
/// Offset of the bisection bracket from the ends of `((n-1)/(n+1), 1)`.
pub const BRACKET_MARGIN: f64 = 1e-9;
/// Tolerance for reading `s` as the inner radius `(n-1)/(n+1)`.
pub const INNER_RADIUS_TOL: f64 = 1e-12;

/// A closed arc of the unit circle; angles lie in `[ψ, ψ+2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircleArc<T> {
    Empty,
    Point(T),
    Arc(T, T),
}

impl<T: Scalar> CircleArc<T> {
    /// Angular length; zero for points and the empty arc.
    pub fn length(&self) -> T {
        match *self {
            CircleArc::Arc(a, b) => b - a,
            _ => T::zero(),
        }
    }

    pub fn contains(&self, phi: T) -> bool {
        match *self {
            CircleArc::Empty => false,
            CircleArc::Point(a) => angle::circular_distance(a, phi) <= lit(SPECIAL_ANGLE_TOL),
            CircleArc::Arc(a, b) => angle::normalize(phi - a) <= b - a,
        }
    }
}

/// Radial behaviour along the ray `arg w = ψ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RayKind<T> {
    AlwaysElliptic,
    ThresholdAt(T),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayClassification<T> {
    pub kind: RayKind<T>,
    /// The ray carries the point of the connectedness locus outside the
    /// ellipticity domain; then `s₀ = (n-1)/(n+1)` exactly.
    pub is_m_point_ray: bool,
}

impl<T: Scalar> RayClassification<T> {
    pub fn s0(&self) -> Option<T> {
        match self.kind {
            RayKind::AlwaysElliptic => None,
            RayKind::ThresholdAt(s) => Some(s),
        }
    }
}

fn check_degree(n: u32) -> Result<()> {
    if n < 2 {
        Err(Error::Precondition(format!("degree {n} is below 2")))
    } else {
        Ok(())
    }
}

fn nf<T: Scalar>(n: u32) -> T {
    lit(f64::from(n))
}

/// `(n-1)/(n+1)`: below this modulus `K` is empty and `B_w` is elliptic.
pub fn inner_radius<T: Scalar>(n: u32) -> T {
    (nf::<T>(n) - T::one()) / (nf::<T>(n) + T::one())
}

fn check_threshold_domain<T: Scalar>(n: u32, s: T) -> Result<()> {
    check_degree(n)?;
    if !(s >= inner_radius::<T>(n) - lit(INNER_RADIUS_TOL) && s < T::one()) {
        return Err(Error::Precondition(format!(
            "s = {s} is outside [(n-1)/(n+1), 1) for n = {n}"
        )));
    }
    Ok(())
}

fn clamp_unit<T: Scalar>(x: T) -> T {
    x.max(-T::one()).min(T::one())
}

/// `t(s) = (1 - n + (1+n)s²)/(2s)`; the ends of `K` solve `cos(φ-ψ) = t`.
pub fn t_of_s<T: Scalar>(n: u32, s: T) -> Result<T> {
    check_threshold_domain(n, s)?;
    Ok(t_raw(n, s))
}

fn t_raw<T: Scalar>(n: u32, s: T) -> T {
    let n = nf::<T>(n);
    (T::one() - n + (T::one() + n) * s * s) / (lit::<T>(2.0) * s)
}

/// `u(s) = (1 - n - (1+n)s²)/(2ns)`.
pub fn u_of_s<T: Scalar>(n: u32, s: T) -> Result<T> {
    check_threshold_domain(n, s)?;
    Ok(u_raw(n, s))
}

fn u_raw<T: Scalar>(n: u32, s: T) -> T {
    let n = nf::<T>(n);
    (T::one() - n - (T::one() + n) * s * s) / (lit::<T>(2.0) * n * s)
}

/// The arc `K = {φ : |B'(e^{iφ})| ≤ 1}`.
pub fn k_arc<T: Scalar>(n: u32, s: T, psi: T) -> Result<CircleArc<T>> {
    check_degree(n)?;
    if !(s >= T::zero() && s < T::one()) {
        return Err(Error::Precondition(format!("s = {s} is not in [0, 1)")));
    }
    let psi = angle::normalize(psi);
    let r = inner_radius::<T>(n);
    if (s - r).abs() <= lit(INNER_RADIUS_TOL) {
        return Ok(CircleArc::Point(psi + T::PI()));
    }
    if s < r {
        return Ok(CircleArc::Empty);
    }
    let (phi1, phi2) = k_endpoints(n, s, psi);
    Ok(CircleArc::Arc(phi1, phi2))
}

fn k_endpoints<T: Scalar>(n: u32, s: T, psi: T) -> (T, T) {
    let half = clamp_unit(t_raw(n, s)).acos();
    (psi + half, psi + T::TAU() - half)
}

/// `p(s) = |K| = 2π - 2 arccos t(s)`.
pub fn arc_length_k<T: Scalar>(n: u32, s: T) -> Result<T> {
    let t = clamp_unit(t_of_s(n, s)?);
    Ok(T::TAU() - lit::<T>(2.0) * t.acos())
}

/// `q(s) = |B(K)| = n(2π - 2 arccos u(s))`.
pub fn arc_length_bk<T: Scalar>(n: u32, s: T) -> Result<T> {
    let u = clamp_unit(u_of_s(n, s)?);
    Ok(nf::<T>(n) * (T::TAU() - lit::<T>(2.0) * u.acos()))
}

fn derivative_denominator<T: Scalar>(n: u32, s: T) -> Result<T> {
    check_degree(n)?;
    if !(s > inner_radius::<T>(n) && s < T::one()) {
        return Err(Error::Precondition(format!(
            "s = {s} is outside ((n-1)/(n+1), 1) for n = {n}"
        )));
    }
    let nn = nf::<T>(n);
    let inner = (T::one() + nn).powi(2) * s * s - (T::one() - nn).powi(2);
    if inner <= T::zero() {
        return Err(Error::Precondition(format!(
            "s = {s} is at the singular endpoint"
        )));
    }
    Ok(s * (T::one() - s * s).sqrt() * inner.sqrt())
}

/// `p'(s) = 2(n-1+(n+1)s²) / (s √(1-s²) √((1+n)²s² - (1-n)²))`.
pub fn p_prime<T: Scalar>(n: u32, s: T) -> Result<T> {
    let den = derivative_denominator(n, s)?;
    let nn = nf::<T>(n);
    Ok(lit::<T>(2.0) * (nn - T::one() + (nn + T::one()) * s * s) / den)
}

/// `q'(s) = 2n(n-1-(n+1)s²) / (s √(1-s²) √((1+n)²s² - (1-n)²))`.
pub fn q_prime<T: Scalar>(n: u32, s: T) -> Result<T> {
    let den = derivative_denominator(n, s)?;
    let nn = nf::<T>(n);
    Ok(lit::<T>(2.0) * nn * (nn - T::one() - (nn + T::one()) * s * s) / den)
}

/// `γ = (n-1)(ψ+π)` reduced to `(-π, π]`.
fn centre_displacement<T: Scalar>(n: u32, psi: T) -> T {
    angle::principal((nf::<T>(n) - T::one()) * (angle::normalize(psi) + T::PI()))
}

/// Rays on which `B(e^{i(ψ+π)})` is antipodal to `e^{i(ψ+π)}`: `(n-1)ψ ≡ 0`
/// for even `n`, `≡ π` for odd `n`. `B_w` is elliptic for every `s`.
pub fn is_always_elliptic_angle<T: Scalar>(n: u32, psi: T) -> bool {
    n >= 2 && special_distance(n, psi, if n % 2 == 1 { T::PI() } else { T::zero() })
}

/// Rays on which `e^{i(ψ+π)}` is fixed for every `s`: `(n-1)ψ ≡ 0` for odd
/// `n`, `≡ π` for even `n`.
pub fn is_m_point_angle<T: Scalar>(n: u32, psi: T) -> bool {
    n >= 2 && special_distance(n, psi, if n % 2 == 1 { T::zero() } else { T::PI() })
}

fn special_distance<T: Scalar>(n: u32, psi: T, target: T) -> bool {
    let k = nf::<T>(n) - T::one();
    angle::dist_to_zero(k * angle::normalize(psi) - target) <= k * lit(SPECIAL_ANGLE_TOL)
}

fn displacement_pair<T: Scalar>(n: u32, s: T, psi: T) -> (T, T) {
    let b = UnicriticalBlaschke::from_polar(n, s, psi).expect("s < 1 checked by callers");
    let (phi1, phi2) = k_endpoints(n, s, angle::normalize(psi));
    (
        angle::principal(b.lift_displacement(phi1)),
        angle::principal(b.lift_displacement(phi2)),
    )
}

/// Signed displacements `F(φᵢ) - φᵢ` (principal values) at the two ends of
/// `K`. A zero means `B` fixes that end, where `|B'| = 1`.
pub fn endpoint_displacement<T: Scalar>(n: u32, s: T, psi: T) -> Result<(T, T)> {
    check_degree(n)?;
    if !(s > inner_radius::<T>(n) && s < T::one()) {
        return Err(Error::Precondition(format!(
            "s = {s} is outside ((n-1)/(n+1), 1) for n = {n}"
        )));
    }
    if is_always_elliptic_angle(n, psi) || is_m_point_angle(n, psi) {
        return Err(Error::Precondition(format!("ψ = {psi} is a special angle")));
    }
    Ok(displacement_pair(n, s, psi))
}

/// The radial threshold `s₀(ψ)`: `B_{sψ}` is elliptic for `s < s₀`,
/// parabolic at `s₀` and hyperbolic beyond.
///
/// Both endpoint displacements are bisected where they change sign; a sign
/// change that is a jump of the principal value rather than a zero is
/// discarded. The bracket starts at `((n-1)/(n+1) + 1e-9, 1 - 1e-9)` and is
/// extended to the full interval when the root sits in one of the margins,
/// which happens within about `1e-4` of a special angle.
pub fn s_zero<T: Scalar>(n: u32, psi: T, tol: T) -> Result<RayClassification<T>> {
    check_degree(n)?;
    if !(tol > T::zero()) {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    if is_always_elliptic_angle(n, psi) {
        return Ok(RayClassification {
            kind: RayKind::AlwaysElliptic,
            is_m_point_ray: false,
        });
    }
    let r = inner_radius::<T>(n);
    if is_m_point_angle(n, psi) {
        return Ok(RayClassification {
            kind: RayKind::ThresholdAt(r),
            is_m_point_ray: true,
        });
    }
    let margin = lit::<T>(BRACKET_MARGIN);
    let lo = r + margin;
    let hi = T::one() - margin;
    let top = T::one() - T::epsilon() * lit(0.5);
    let gamma = centre_displacement(n, psi);
    let order = if gamma > T::zero() {
        [1usize, 0]
    } else {
        [0, 1]
    };
    for (a, b) in [(lo, hi), (r, lo), (hi, top)] {
        let da = displacement_pair(n, a, psi);
        let db = displacement_pair(n, b, psi);
        for &idx in &order {
            let (fa, fb) = (pick(da, idx), pick(db, idx));
            if fa == T::zero() {
                return Ok(threshold(a));
            }
            if (fa > T::zero()) == (fb > T::zero()) {
                continue;
            }
            let root = bisect(|s| pick(displacement_pair(n, s, psi), idx), a, b, fa, tol);
            if pick(displacement_pair(n, root, psi), idx).abs() < lit(1e-3) {
                return Ok(threshold(root));
            }
        }
    }
    Err(Error::Numeric(format!(
        "no threshold found on the ray ψ = {psi} for n = {n}"
    )))
}

fn threshold<T: Scalar>(s: T) -> RayClassification<T> {
    RayClassification {
        kind: RayKind::ThresholdAt(s),
        is_m_point_ray: false,
    }
}

fn pick<T: Copy>(pair: (T, T), idx: usize) -> T {
    if idx == 0 {
        pair.0
    } else {
        pair.1
    }
}

fn bisect<T: Scalar>(f: impl Fn(T) -> T, mut a: T, mut b: T, mut fa: T, tol: T) -> T {
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let mid = (a + b) * lit(0.5);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
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

/// Exact Denjoy-Wolff classification of `B_w`.
///
/// Fails only if the attracting interior fixed point of an elliptic map
/// cannot be located numerically.
pub fn classify_unicritical<T: Scalar>(n: u32, w: Complex<T>) -> Result<BlaschkeClass<T>> {
    classify_unicritical_with_tol(n, w, lit(CLASSIFY_TOL))
}

/// [`classify_unicritical`] with a custom parabolic band `|s - s₀| <= tol`.
pub fn classify_unicritical_with_tol<T: Scalar>(
    n: u32,
    w: Complex<T>,
    tol: T,
) -> Result<BlaschkeClass<T>> {
    if !(tol >= T::zero()) {
        return Err(Error::Precondition("tolerance must be non-negative".into()));
    }
    let b = UnicriticalBlaschke::new(n, w)?;
    let s = b.s();
    let psi = b.psi();
    let ray = match s_zero(n, psi, lit(S_ZERO_TOL)) {
        Ok(ray) => ray,
        // Within ~1e-7 of an always-elliptic angle the threshold exceeds
        // every f64 below 1.
        Err(Error::Numeric(_)) => RayClassification {
            kind: RayKind::AlwaysElliptic,
            is_m_point_ray: false,
        },
        Err(e) => return Err(e),
    };
    let s0 = match ray.kind {
        RayKind::AlwaysElliptic => return elliptic(&b),
        RayKind::ThresholdAt(s0) => s0,
    };
    if (s - s0).abs() <= tol {
        let phi = if ray.is_m_point_ray {
            psi + T::PI()
        } else {
            let (phi1, phi2) = k_endpoints(n, s0, psi);
            if centre_displacement(n, psi) > T::zero() {
                phi2
            } else {
                phi1
            }
        };
        return Ok(BlaschkeClass::Parabolic {
            dw_point: cis_exact(phi),
        });
    }
    if s < s0 {
        return elliptic(&b);
    }
    let phi = attracting_boundary_point(&b);
    Ok(BlaschkeClass::Hyperbolic {
        dw_point: cis_exact(phi),
        multiplier: b.boundary_derivative_modulus(phi),
    })
}

/// `e^{iφ}` with exact values at multiples of `π/2`, so that e.g. the
/// closing example reports `1` rather than `1 - 2e-16 i`.
fn cis_exact<T: Scalar>(phi: T) -> Complex<T> {
    let x = angle::normalize(phi);
    let quarter = T::FRAC_PI_2();
    let k = (x / quarter).round();
    if (x - k * quarter).abs() <= T::epsilon() * lit(16.0) {
        let (zero, one) = (T::zero(), T::one());
        return match k.to_i32().unwrap_or(0).rem_euclid(4) {
            0 => Complex::new(one, zero),
            1 => Complex::new(zero, one),
            2 => Complex::new(-one, zero),
            _ => Complex::new(zero, -one),
        };
    }
    Complex::from_polar(T::one(), x)
}

/// The attracting fixed point on the circle of a hyperbolic `B`: the unique
/// point inside `K` where the displacement is a multiple of `2π`.
fn attracting_boundary_point<T: Scalar>(b: &UnicriticalBlaschke<T>) -> T {
    let (phi1, phi2) = k_endpoints(b.n(), b.s(), b.psi());
    let centre = b.psi() + T::PI();
    let level = (b.lift_displacement(centre) / T::TAU()).round() * T::TAU();
    let fa = b.lift_displacement(phi1) - level;
    angle::normalize(bisect(
        |phi| b.lift_displacement(phi) - level,
        phi1,
        phi2,
        fa,
        T::epsilon() * lit(8.0),
    ))
}

fn elliptic<T: Scalar>(b: &UnicriticalBlaschke<T>) -> Result<BlaschkeClass<T>> {
    let p = elliptic_fixed_point(b)?;
    Ok(BlaschkeClass::Elliptic {
        dw_point: p,
        multiplier: b.derivative(p)?,
    })
}

/// The interior fixed point of an elliptic `B`: Newton from the origin, then
/// the roots of `(z-w)ⁿ - z(1-conj(w)z)ⁿ`, then orbit iteration.
pub fn elliptic_fixed_point<T: Scalar>(b: &UnicriticalBlaschke<T>) -> Result<Complex<T>> {
    if b.w().norm() == T::zero() {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let tol = lit::<T>(1e-12);
    // There is exactly one fixed point in the open disk, so any certified
    // interior root is the right one.
    if let Some(p) = b.newton_interior(Complex::new(T::zero(), T::zero()), tol) {
        return Ok(p);
    }
    let one = Complex::new(T::one(), T::zero());
    let n = b.n() as usize;
    let lhs = Poly::from_roots(&vec![b.w(); n]);
    let factor = Poly::new(vec![one, -b.w().conj()]);
    let power = (0..n).fold(Poly::constant(one), |acc, _| acc.mul(&factor));
    let rhs = Poly::new(vec![Complex::new(T::zero(), T::zero()), one]).mul(&power);
    let from_roots = lhs
        .sub(&rhs)
        .trimmed(T::epsilon() * lit(16.0))
        .roots()
        .ok()
        .and_then(|roots| {
            roots
                .into_iter()
                .filter(|z| z.norm() < T::one())
                .find_map(|z| b.newton_interior(z, tol))
        });
    from_roots
        .or_else(|| b.interior_fixed_point())
        .ok_or_else(|| Error::Numeric(format!("interior fixed point of B_{} not found", b.w())))
}

fn check_sector<T: Scalar>(n: u32, w: Complex<T>) -> Result<()> {
    if w.norm() > T::zero() && !angle::in_sector(n, w.arg()) {
        return Err(Error::Precondition(format!(
            "arg w = {} is outside the sector [0, 2π/{})",
            angle::normalize(w.arg()),
            n - 1
        )));
    }
    Ok(())
}

/// Membership in the ellipticity domain `ℰₙ` (parameters in the sector).
pub fn in_e_n<T: Scalar>(n: u32, w: Complex<T>) -> Result<bool> {
    check_degree(n)?;
    check_sector(n, w)?;
    Ok(classify_unicritical(n, w)?.is_elliptic())
}

/// Membership in the connectedness locus `ℳₙ = ℰₙ ∪ {m-point}`.
pub fn in_m_n<T: Scalar>(n: u32, w: Complex<T>) -> Result<bool> {
    check_degree(n)?;
    check_sector(n, w)?;
    if (w - m_point::<T>(n)?).norm() <= lit(CLASSIFY_TOL) {
        return Ok(true);
    }
    in_e_n(n, w)
}

/// Rotates `w` into the sector `[0, 2π/(n-1))`.
pub fn reduce_parameter<T: Scalar>(n: u32, w: Complex<T>) -> Complex<T> {
    if w.norm() == T::zero() {
        return w;
    }
    let a = angle::reduce_to_sector(n, w.arg());
    if a == T::zero() {
        Complex::new(w.norm(), T::zero())
    } else {
        Complex::from_polar(w.norm(), a)
    }
}

/// Membership in the rotational closure of `ℰₙ`.
pub fn in_tilde_e_n<T: Scalar>(n: u32, w: Complex<T>) -> Result<bool> {
    check_degree(n)?;
    in_e_n(n, reduce_parameter(n, w))
}

/// Membership in the rotational closure of `ℳₙ`.
pub fn in_tilde_m_n<T: Scalar>(n: u32, w: Complex<T>) -> Result<bool> {
    check_degree(n)?;
    in_m_n(n, reduce_parameter(n, w))
}

/// The point of `ℳₙ ∖ ℰₙ` in the sector: modulus `(n-1)/(n+1)` on the
/// m-point ray (`ψ = 0` for odd `n`, `π/(n-1)` for even `n`).
pub fn m_point<T: Scalar>(n: u32) -> Result<Complex<T>> {
    check_degree(n)?;
    let r = inner_radius::<T>(n);
    if n % 2 == 1 {
        return Ok(Complex::new(r, T::zero()));
    }
    if n == 2 {
        return Ok(Complex::new(-r, T::zero()));
    }
    Ok(Complex::from_polar(r, T::PI() / (nf::<T>(n) - T::one())))
}
