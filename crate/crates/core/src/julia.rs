//! Julia sets on the unit circle: full circle versus Cantor set, sampling by
//! inverse iteration, Fatou gaps and the hyperbolic-step probe.

use std::fmt::Write as _;
use std::path::Path;

use crate::angle;
use crate::blaschke::{
    step_kind_from_ratio, BlaschkeClass, HyperbolicStepKind, UnicriticalBlaschke,
};
use crate::ellipticity::{classify_unicritical, CircleArc};
use crate::error::{Error, Result};
use crate::format::sig17;
use crate::scalar::{from_usize, lit, Scalar};

/// `|B''(z₀)|` below this counts as zero at a parabolic point.
pub const SECOND_DERIVATIVE_TOL: f64 = 1e-8;
pub const DEFAULT_TRANSIENT: usize = 64;
pub const DEFAULT_COUNT: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JuliaType {
    FullCircle,
    Cantor,
}

impl JuliaType {
    pub fn name(self) -> &'static str {
        match self {
            JuliaType::FullCircle => "full_circle",
            JuliaType::Cantor => "cantor",
        }
    }
}

/// 64-bit LCG with Knuth's MMIX constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(6_364_136_223_846_793_005)
            .wrapping_add(1_442_695_040_888_963_407);
        self.state
    }

    /// Top 53 bits as a uniform value in `[0, 1)`.
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform index in `0..n`.
    pub fn next_branch(&mut self, n: usize) -> usize {
        ((n as f64 * self.next_unit()) as usize).min(n - 1)
    }
}

/// Inverse-iteration sample of `J(B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JuliaSample<T> {
    /// Sorted angles in `[0, 2π)`.
    pub angles: Vec<T>,
    /// `parents[i]` is an angle with `B(e^{i parents[i]}) = e^{i angles[i]}`.
    pub parents: Vec<T>,
    pub seed: u64,
    pub transient: usize,
    pub count: usize,
}

impl<T: Scalar> JuliaSample<T> {
    /// CSV with header `angle`, one 17-digit value per LF-terminated line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("angle\n");
        for a in &self.angles {
            let _ = writeln!(out, "{}", sig17(a.to_f64().unwrap_or(f64::NAN)));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Angular gaps between consecutive samples; the last one wraps around.
    pub fn gaps(&self) -> Vec<T> {
        let k = self.angles.len();
        (0..k)
            .map(|i| {
                if i + 1 < k {
                    self.angles[i + 1] - self.angles[i]
                } else {
                    self.angles[0] + T::TAU() - self.angles[i]
                }
            })
            .collect()
    }

    /// The largest gap as an arc `[a, a + width]`.
    pub fn largest_gap(&self) -> CircleArc<T> {
        let gaps = self.gaps();
        match gaps
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite gaps"))
        {
            Some((i, g)) => CircleArc::Arc(self.angles[i], self.angles[i] + *g),
            None => CircleArc::Empty,
        }
    }
}

/// Full circle for elliptic maps and for parabolic maps with `B''(z₀) = 0`;
/// Cantor set otherwise.
pub fn julia_type<T: Scalar>(b: &UnicriticalBlaschke<T>) -> Result<JuliaType> {
    julia_type_of(b, &classify_unicritical(b.n(), b.w())?)
}

/// [`julia_type`] for an already computed classification of `b`.
pub fn julia_type_of<T: Scalar>(
    b: &UnicriticalBlaschke<T>,
    class: &BlaschkeClass<T>,
) -> Result<JuliaType> {
    Ok(match *class {
        BlaschkeClass::Elliptic { .. } => JuliaType::FullCircle,
        BlaschkeClass::Hyperbolic { .. } => JuliaType::Cantor,
        BlaschkeClass::Parabolic { dw_point } => {
            if b.second_derivative(dw_point)?.norm() < lit(SECOND_DERIVATIVE_TOL) {
                JuliaType::FullCircle
            } else {
                JuliaType::Cantor
            }
        }
    })
}

/// Angles of the `n` preimages of `e^{iθ}`: `A⁻¹(e^{i(θ + 2πk)/n})` with
/// `θ` taken in `(-π, π]`, ordered by `k`.
pub fn preimage_angles<T: Scalar>(b: &UnicriticalBlaschke<T>, theta: T) -> Vec<T> {
    let n = b.n() as usize;
    let nf = from_usize::<T>(n);
    let base = angle::principal(theta) / nf;
    let inner_inv = b.inner().inverse();
    (0..n)
        .map(|k| {
            let a = base + T::TAU() * from_usize::<T>(k) / nf;
            angle::normalize(inner_inv.apply_boundary(a).arg())
        })
        .collect()
}

/// Random backward orbit from `e^{i(ψ+1)}`, choosing among the `n`
/// preimages with [`Lcg64`]. The first `transient` points are dropped.
pub fn backward_orbit<T: Scalar>(
    b: &UnicriticalBlaschke<T>,
    seed: u64,
    transient: usize,
    count: usize,
) -> Result<JuliaSample<T>> {
    if count == 0 {
        return Err(Error::Precondition("count must be positive".into()));
    }
    let n = b.n() as usize;
    let mut rng = Lcg64::new(seed);
    let mut q = angle::normalize(b.psi() + T::one());
    let mut step = |q: T| preimage_angles(b, q)[rng.next_branch(n)];
    for _ in 0..transient {
        q = step(q);
    }
    let mut pairs = Vec::with_capacity(count);
    for _ in 0..count {
        q = step(q);
        pairs.push(q);
    }
    let parent_of_last = step(q);
    let mut pairs: Vec<(T, T)> = pairs
        .iter()
        .enumerate()
        .map(|(i, a)| (*a, pairs.get(i + 1).copied().unwrap_or(parent_of_last)))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite angles"));
    let (angles, parents) = pairs.into_iter().unzip();
    Ok(JuliaSample {
        angles,
        parents,
        seed,
        transient,
        count,
    })
}

/// The largest complementary arc of the sample; only meaningful when `J(B)`
/// is a Cantor set.
pub fn fatou_gap<T: Scalar>(
    b: &UnicriticalBlaschke<T>,
    sample: &JuliaSample<T>,
) -> Result<CircleArc<T>> {
    if julia_type(b)? == JuliaType::FullCircle {
        return Err(Error::Precondition(
            "the Julia set is the whole circle; there is no Fatou gap".into(),
        ));
    }
    Ok(sample.largest_gap())
}

/// Zero versus positive hyperbolic step of a parabolic map, from the ratio
/// `d(2k)/d(k)` of step distances at `k = 10⁵`.
pub fn hyperbolic_step_kind<T: Scalar>(b: &UnicriticalBlaschke<T>) -> Result<HyperbolicStepKind> {
    hyperbolic_step_kind_of(b, &classify_unicritical(b.n(), b.w())?)
}

/// [`hyperbolic_step_kind`] for an already computed classification of `b`.
pub fn hyperbolic_step_kind_of<T: Scalar>(
    b: &UnicriticalBlaschke<T>,
    class: &BlaschkeClass<T>,
) -> Result<HyperbolicStepKind> {
    let BlaschkeClass::Parabolic { dw_point } = *class else {
        return Err(Error::Precondition(format!(
            "hyperbolic step kind needs a parabolic map, got {}",
            class.name()
        )));
    };
    let ratio = b.step_ratio(dw_point.arg());
    step_kind_from_ratio(ratio)
        .ok_or_else(|| Error::Inconclusive(format!("step ratio {ratio} is between the thresholds")))
}
