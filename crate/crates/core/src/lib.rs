//! Unicritical Blaschke products `B_w(z) = ((z - w)/(1 - conj(w) z))ⁿ` of the
//! unit disk: Denjoy-Wolff classification, the domain of ellipticity and the
//! connectedness locus in parameter space, Julia sets on the circle, and
//! normalization of unicritical finite Blaschke products.
//!
//! Numerical code is generic over [`scalar::Scalar`] (`f32` or `f64`); the
//! aliases below fix it to `f64`.

// `!(x < y)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod angle;
pub mod blaschke;
pub mod cli;
pub mod ellipticity;
pub mod error;
pub mod format;
pub mod julia;
pub mod mobius;
pub mod normalization;
pub mod poly;
pub mod render;
pub mod scalar;
pub mod selfcheck;

pub use blaschke::{BlaschkeClass, DwLocation, HyperbolicStepKind, UnicriticalBlaschke};
pub use ellipticity::{
    classify_unicritical, in_e_n, in_m_n, in_tilde_e_n, in_tilde_m_n, m_point, s_zero, CircleArc,
    RayClassification, RayKind,
};
pub use error::{Error, Result};
pub use julia::{
    backward_orbit, fatou_gap, hyperbolic_step_kind, julia_type, JuliaSample, JuliaType,
};
pub use mobius::{DiskMobius, MobiusClass};
pub use normalization::{conjugate, normalize, FiniteBlaschke, NormalizationResult};
pub use render::{
    boundary_curve, render_julia_circle, render_parameter_plane, CurveTable, RasterImage, Region,
};

pub type Complex64 = num_complex::Complex<f64>;
pub type Mobius = DiskMobius<f64>;
pub type Blaschke = UnicriticalBlaschke<f64>;
pub type Class = BlaschkeClass<f64>;
pub type Finite = FiniteBlaschke<f64>;
pub type Normalization = NormalizationResult<f64>;
pub type Arc = CircleArc<f64>;
pub type Ray = RayClassification<f64>;
pub type Sample = JuliaSample<f64>;
