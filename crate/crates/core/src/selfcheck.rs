//! Invariant checks across all modules, runnable from the binary.
//!
//! Every check draws its random inputs from its own seeded [`Lcg64`], so a
//! report is reproducible.

use std::f64::consts::TAU;

use num_complex::Complex;

use crate::angle;
use crate::blaschke::{BlaschkeClass, DwLocation, HyperbolicStepKind, UnicriticalBlaschke};
use crate::ellipticity::{
    classify_unicritical, in_e_n, inner_radius, is_always_elliptic_angle, m_point, p_prime,
    q_prime, s_zero, RayKind, S_ZERO_TOL,
};
use crate::julia::{backward_orbit, fatou_gap, hyperbolic_step_kind, JuliaType, Lcg64};
use crate::mobius::{DiskMobius, MobiusClass};
use crate::normalization::{conjugate, normalize};
use crate::render::{render_parameter_plane, Region};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    fn pick(self, quick: usize, full: usize) -> usize {
        match self {
            Level::Quick => quick,
            Level::Full => full,
        }
    }
}

/// Elliptic parameters for the gap check are drawn from `|w| <= 0.15`.
///
/// Uniform-branch inverse iteration samples the balanced measure, which is
/// thin near a repelling boundary fixed point of multiplier below `n`; for
/// `n = 2`, `w ≈ -0.18` the largest gap among `10⁴` samples already exceeds
/// `0.1`.
pub const ELLIPTIC_GAP_RADIUS: f64 = 0.15;

type Outcome = std::result::Result<(), String>;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub results: Vec<CheckResult>,
}

impl Report {
    /// `PASS <name>` or `FAIL <name>: <reason>` per check.
    pub fn lines(&self) -> Vec<String> {
        self.results
            .iter()
            .map(|r| match &r.outcome {
                Ok(()) => format!("PASS {}", r.name),
                Err(why) => format!("FAIL {}: {why}", r.name),
            })
            .collect()
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.outcome.is_ok())
    }

    pub fn failures(&self) -> usize {
        self.results.iter().filter(|r| r.outcome.is_err()).count()
    }

    pub fn len(&self) -> usize {
        self.results.len()
    }

    pub fn is_empty(&self) -> bool {
        self.results.is_empty()
    }
}

type Check = fn(Level, &mut Lcg64) -> Outcome;

const CHECKS: &[(&str, Check)] = &[
    ("mobius_group_laws", mobius_group_laws),
    ("mobius_fixed_points", mobius_fixed_points),
    ("blaschke_boundary_and_degree", blaschke_boundary_and_degree),
    (
        "blaschke_boundary_fixed_points",
        blaschke_boundary_fixed_points,
    ),
    ("normalization_round_trip", normalization_round_trip),
    (
        "normalization_rotation_subgroup",
        normalization_rotation_subgroup,
    ),
    ("ellipticity_inner_radius", ellipticity_inner_radius),
    ("ellipticity_arc_derivatives", ellipticity_arc_derivatives),
    (
        "ellipticity_always_elliptic_rays",
        ellipticity_always_elliptic_rays,
    ),
    ("classification_oracle", classification_oracle),
    ("julia_parents", julia_parents),
    ("julia_dichotomy", julia_dichotomy),
    ("step_dichotomy", step_dichotomy),
    ("render_determinism", render_determinism),
];

pub fn run(level: Level) -> Report {
    let results = CHECKS
        .iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let mut rng = Lcg64::new(0x5eed_0000 + i as u64);
            CheckResult {
                name,
                outcome: check(level, &mut rng),
            }
        })
        .collect();
    Report { results }
}

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn random_disk(r: &mut Lcg64, radius: f64) -> Complex<f64> {
    Complex::from_polar(radius * r.next_unit().sqrt(), TAU * r.next_unit())
}

fn random_degree(r: &mut Lcg64) -> u32 {
    2 + r.next_branch(5) as u32
}

fn random_sector_parameter(r: &mut Lcg64, n: u32) -> Complex<f64> {
    let psi = angle::sector_width::<f64>(n) * r.next_unit();
    Complex::from_polar(0.95 * r.next_unit(), psi)
}

fn mobius_group_laws(level: Level, r: &mut Lcg64) -> Outcome {
    for _ in 0..level.pick(200, 10_000) {
        let a = DiskMobius::new(TAU * r.next_unit(), random_disk(r, 0.95))
            .map_err(|e| e.to_string())?;
        let b = DiskMobius::new(TAU * r.next_unit(), random_disk(r, 0.95))
            .map_err(|e| e.to_string())?;
        let z = random_disk(r, 0.99);
        let az = a.apply(z).map_err(|e| e.to_string())?;
        ensure(az.norm() < 1.0, || {
            format!("{a:?} maps {z} outside the disk")
        })?;
        let back = a.inverse().apply(az).map_err(|e| e.to_string())?;
        ensure((back - z).norm() < 1e-9, || {
            format!("inverse of {a:?} misses {z} by {}", (back - z).norm())
        })?;
        let lhs = a.compose(&b).apply(z).map_err(|e| e.to_string())?;
        let rhs = a
            .apply(b.apply(z).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure((lhs - rhs).norm() < 1e-9, || {
            format!("composition differs by {}", (lhs - rhs).norm())
        })?;
        let phi = TAU * r.next_unit();
        let edge = a.apply_boundary(phi).norm();
        ensure((edge - 1.0).abs() < 1e-12, || {
            format!("boundary image has modulus {edge}")
        })?;
    }
    Ok(())
}

fn mobius_fixed_points(level: Level, r: &mut Lcg64) -> Outcome {
    for _ in 0..level.pick(200, 10_000) {
        let m = DiskMobius::new(TAU * r.next_unit(), random_disk(r, 0.95))
            .map_err(|e| e.to_string())?;
        let class = m.classify();
        if class == MobiusClass::Identity {
            continue;
        }
        let fixed = m.fixed_points().map_err(|e| e.to_string())?;
        let finite: Vec<Complex<f64>> = fixed.iter().filter_map(|p| p.finite()).collect();
        for p in &finite {
            if p.norm() < 1e6 {
                let image = m.apply(*p).map(|q| (q - p).norm());
                // Points outside the disk are fine as long as they are fixed.
                let moved = match image {
                    Ok(d) => d,
                    Err(_) => continue,
                };
                ensure(moved < 1e-7 * p.norm().max(1.0), || {
                    format!("{m:?} moves fixed point {p} by {moved}")
                })?;
            }
        }
        let inside = finite.iter().filter(|p| p.norm() < 1.0 - 1e-9).count();
        let on_circle = finite
            .iter()
            .filter(|p| (p.norm() - 1.0).abs() <= 1e-9)
            .count();
        let ok = match class {
            MobiusClass::Elliptic => inside == 1,
            MobiusClass::Hyperbolic => on_circle == 2,
            MobiusClass::Parabolic => on_circle >= 1,
            MobiusClass::Identity => true,
        };
        ensure(ok, || {
            format!("{m:?} is {class:?} with fixed points {finite:?}")
        })?;
    }
    Ok(())
}

fn blaschke_boundary_and_degree(level: Level, r: &mut Lcg64) -> Outcome {
    for _ in 0..level.pick(50, 500) {
        let n = random_degree(r);
        let b = UnicriticalBlaschke::new(n, random_disk(r, 0.95)).map_err(|e| e.to_string())?;
        let phi = TAU * r.next_unit();
        let image = b
            .evaluate(Complex::from_polar(1.0, phi))
            .map_err(|e| e.to_string())?;
        ensure((image.norm() - 1.0).abs() < 1e-12, || {
            format!("|B(e^iφ)| = {}", image.norm())
        })?;
        let turn = b.inner_lift(phi + TAU) - b.inner_lift(phi);
        ensure((turn - TAU).abs() < 1e-9, || {
            format!("inner lift turns by {turn}")
        })?;
    }
    Ok(())
}

fn blaschke_boundary_fixed_points(level: Level, r: &mut Lcg64) -> Outcome {
    for _ in 0..level.pick(20, 200) {
        let n = random_degree(r);
        let b = UnicriticalBlaschke::new(n, random_disk(r, 0.95)).map_err(|e| e.to_string())?;
        let fixed = b.boundary_fixed_points();
        let k = fixed.len() as u32;
        ensure((n - 1..=n + 1).contains(&k), || {
            format!("B_{} (n = {n}) has {k} boundary fixed points", b.w())
        })?;
        for phi in fixed {
            let z = Complex::from_polar(1.0, phi);
            let d = (b.evaluate(z).map_err(|e| e.to_string())? - z).norm();
            ensure(d < 1e-9, || format!("B_{} moves e^i{phi} by {d}", b.w()))?;
        }
    }
    Ok(())
}

fn normalization_round_trip(level: Level, r: &mut Lcg64) -> Outcome {
    for _ in 0..level.pick(20, 200) {
        let n = random_degree(r);
        let w = random_sector_parameter(r, n);
        let b = UnicriticalBlaschke::new(n, w).map_err(|e| e.to_string())?;
        let c =
            DiskMobius::new(TAU * r.next_unit(), random_disk(r, 0.9)).map_err(|e| e.to_string())?;
        let f = conjugate(&b, &c).map_err(|e| e.to_string())?;
        let got = normalize(&f)
            .map_err(|e| format!("n = {n}, w = {w}: {e}"))?
            .w;
        ensure((got - w).norm() < 1e-8, || {
            format!("n = {n}: w = {w} came back as {got}")
        })?;
    }
    Ok(())
}

fn normalization_rotation_subgroup(level: Level, r: &mut Lcg64) -> Outcome {
    for _ in 0..level.pick(10, 100) {
        let n = random_degree(r);
        let w = random_sector_parameter(r, n);
        let b = UnicriticalBlaschke::new(n, w).map_err(|e| e.to_string())?;
        let j = r.next_branch(n as usize - 1);
        let rot = DiskMobius::rotation(angle::sector_width::<f64>(n) * j as f64);
        let f = conjugate(&b, &rot).map_err(|e| e.to_string())?;
        let got = normalize(&f).map_err(|e| e.to_string())?.w;
        ensure((got - w).norm() < 1e-9, || {
            format!("rotation {j} of w = {w} gave {got}")
        })?;
    }
    Ok(())
}

fn ellipticity_inner_radius(level: Level, _r: &mut Lcg64) -> Outcome {
    let rays = level.pick(64, 1024);
    for n in 2..=6u32 {
        let rn = inner_radius::<f64>(n);
        let mut min = f64::INFINITY;
        for k in 0..rays {
            let psi = angle::sector_width::<f64>(n) * k as f64 / rays as f64;
            let ray = s_zero(n, psi, S_ZERO_TOL).map_err(|e| e.to_string())?;
            if let RayKind::ThresholdAt(s0) = ray.kind {
                ensure(s0 >= rn - 1e-9, || {
                    format!("n = {n}: s0({psi}) = {s0} < {rn}")
                })?;
                if (s0 - rn).abs() < 1e-6 {
                    ensure(ray.is_m_point_ray, || {
                        format!("n = {n}: s0({psi}) = {s0} at a non m-point ray")
                    })?;
                }
                min = min.min(s0);
            }
        }
        ensure((min - rn).abs() < 1e-6, || {
            format!("n = {n}: min s0 = {min}, expected {rn}")
        })?;
    }
    Ok(())
}

fn ellipticity_arc_derivatives(level: Level, _r: &mut Lcg64) -> Outcome {
    let points = level.pick(10, 50);
    for n in 2..=6u32 {
        let rn = inner_radius::<f64>(n);
        for k in 0..points {
            let s = rn + (1.0 - rn) * (k as f64 + 0.5) / points as f64;
            let p = p_prime(n, s).map_err(|e| e.to_string())?;
            let q = q_prime(n, s).map_err(|e| e.to_string())?;
            ensure(p > q, || format!("n = {n}, s = {s}: p' = {p} <= q' = {q}"))?;
        }
    }
    Ok(())
}

fn ellipticity_always_elliptic_rays(_level: Level, _r: &mut Lcg64) -> Outcome {
    for n in 2..=6u32 {
        let width = angle::sector_width::<f64>(n);
        // (n - 1)(ψ + π) ≡ π.
        for j in 0..(2 * n) {
            let psi =
                (std::f64::consts::PI * (2 * j + 1) as f64) / (n - 1) as f64 - std::f64::consts::PI;
            let psi = angle::normalize(psi);
            if psi >= width || !is_always_elliptic_angle(n, psi) {
                continue;
            }
            let w = Complex::from_polar(0.999, psi);
            let elliptic = in_e_n(n, w).map_err(|e| e.to_string())?;
            ensure(elliptic, || {
                format!("n = {n}: w = {w} on an always-elliptic ray is not elliptic")
            })?;
        }
    }
    Ok(())
}

fn classification_oracle(level: Level, r: &mut Lcg64) -> Outcome {
    let mut done = 0;
    while done < level.pick(30, 500) {
        let n = random_degree(r);
        let psi = TAU * r.next_unit();
        let s = r.next_unit();
        let s0 = match s_zero(n, psi, S_ZERO_TOL) {
            Ok(ray) => ray.s0(),
            Err(_) => None,
        };
        if s0.is_some_and(|s0| (s - s0).abs() < 1e-3) {
            continue;
        }
        done += 1;
        let b = UnicriticalBlaschke::from_polar(n, s, psi).map_err(|e| e.to_string())?;
        let class = classify_unicritical(n, b.w()).map_err(|e| e.to_string())?;
        let (p, loc) = b
            .denjoy_wolff_iterate(1e-12, 2_000_000)
            .map_err(|e| format!("oracle on n = {n}, w = {}: {e}", b.w()))?;
        let agree = match class {
            BlaschkeClass::Elliptic { dw_point, .. } => {
                loc == DwLocation::Interior && (dw_point - p).norm() < 1e-6
            }
            BlaschkeClass::Hyperbolic { dw_point, .. } => {
                loc == DwLocation::Boundary && (dw_point - p).norm() < 1e-6
            }
            BlaschkeClass::Parabolic { .. } => false,
        };
        ensure(agree, || {
            format!(
                "n = {n}, w = {}: {class:?} versus oracle {p} ({loc:?})",
                b.w()
            )
        })?;
    }
    Ok(())
}

fn julia_parents(level: Level, r: &mut Lcg64) -> Outcome {
    let count = level.pick(1000, 10_000);
    for _ in 0..level.pick(2, 10) {
        let n = random_degree(r);
        let b = UnicriticalBlaschke::new(n, random_disk(r, 0.95)).map_err(|e| e.to_string())?;
        let sample = backward_orbit(&b, r.next_u64(), 64, count).map_err(|e| e.to_string())?;
        for (a, p) in sample.angles.iter().zip(&sample.parents) {
            let image = b
                .evaluate(Complex::from_polar(1.0, *p))
                .map_err(|e| e.to_string())?;
            let d = (image - Complex::from_polar(1.0, *a)).norm();
            ensure(d < 1e-10, || format!("B(e^i{p}) misses e^i{a} by {d}"))?;
        }
    }
    Ok(())
}

fn julia_dichotomy(level: Level, r: &mut Lcg64) -> Outcome {
    let params = level.pick(3, 20);
    let mut elliptic = 0;
    let mut hyperbolic = 0;
    while elliptic < params || hyperbolic < params {
        let n = random_degree(r);
        let w = random_disk(r, 0.95);
        let b = UnicriticalBlaschke::new(n, w).map_err(|e| e.to_string())?;
        let class = classify_unicritical(n, w).map_err(|e| e.to_string())?;
        match class {
            BlaschkeClass::Elliptic { .. }
                if elliptic < params && w.norm() <= ELLIPTIC_GAP_RADIUS =>
            {
                elliptic += 1;
                let sample =
                    backward_orbit(&b, r.next_u64(), 64, 10_000).map_err(|e| e.to_string())?;
                let gap = sample.gaps().into_iter().fold(0.0, f64::max);
                ensure(gap < 0.1, || {
                    format!("elliptic w = {w} (n = {n}) has a gap of {gap}")
                })?;
            }
            BlaschkeClass::Hyperbolic { dw_point, .. } if hyperbolic < params => {
                hyperbolic += 1;
                let sample =
                    backward_orbit(&b, r.next_u64(), 64, 10_000).map_err(|e| e.to_string())?;
                let gap = fatou_gap(&b, &sample).map_err(|e| e.to_string())?;
                let mut gaps = sample.gaps();
                gaps.sort_by(|a, b| a.partial_cmp(b).expect("finite gaps"));
                let median = gaps[gaps.len() / 2];
                ensure(gap.contains(dw_point.arg()), || {
                    format!("hyperbolic w = {w}: gap {gap:?} misses the DW point")
                })?;
                ensure(gap.length() > 10.0 * median, || {
                    format!(
                        "hyperbolic w = {w}: gap {} vs median {median}",
                        gap.length()
                    )
                })?;
            }
            _ => {}
        }
    }
    Ok(())
}

fn step_dichotomy(level: Level, _r: &mut Lcg64) -> Outcome {
    let degrees: &[u32] = match level {
        Level::Quick => &[2],
        Level::Full => &[2, 3, 4, 5, 6],
    };
    for &n in degrees {
        let b = UnicriticalBlaschke::new(n, m_point::<f64>(n).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let kind = hyperbolic_step_kind(&b).map_err(|e| format!("m-point n = {n}: {e}"))?;
        ensure(kind == HyperbolicStepKind::ZeroStep, || {
            format!("m-point n = {n} has {kind:?}")
        })?;
        ensure(
            crate::julia::julia_type(&b).map_err(|e| e.to_string())? == JuliaType::FullCircle,
            || format!("m-point n = {n} does not have a full-circle Julia set"),
        )?;
    }
    let generic: &[(u32, f64)] = match level {
        Level::Quick => &[(2, 1.5)],
        Level::Full => &[(2, 1.5), (2, 2.5), (3, 0.7), (4, 1.2), (5, 0.4)],
    };
    for &(n, psi) in generic {
        let s0 = s_zero(n, psi, S_ZERO_TOL)
            .map_err(|e| e.to_string())?
            .s0()
            .ok_or_else(|| format!("n = {n}, ψ = {psi} is always elliptic"))?;
        let b = UnicriticalBlaschke::from_polar(n, s0, psi).map_err(|e| e.to_string())?;
        let kind = hyperbolic_step_kind(&b).map_err(|e| format!("n = {n}, ψ = {psi}: {e}"))?;
        ensure(kind == HyperbolicStepKind::PositiveStep, || {
            format!("n = {n}, ψ = {psi} has {kind:?}")
        })?;
        ensure(
            crate::julia::julia_type(&b).map_err(|e| e.to_string())? == JuliaType::Cantor,
            || format!("n = {n}, ψ = {psi} does not have a Cantor Julia set"),
        )?;
    }
    Ok(())
}

fn render_determinism(level: Level, _r: &mut Lcg64) -> Outcome {
    let size = level.pick(32, 128);
    for n in [2u32, 4] {
        let a = render_parameter_plane(n, size, size, Region::FullDisk, Some(1))
            .map_err(|e| e.to_string())?;
        let b = render_parameter_plane(n, size, size, Region::FullDisk, Some(3))
            .map_err(|e| e.to_string())?;
        ensure(a == b, || {
            format!("n = {n}: renders differ between 1 and 3 workers")
        })?;
    }
    Ok(())
}
