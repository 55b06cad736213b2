//! Raster output: the parameter plane coloured by dynamics, the threshold
//! curve as a table, and Julia samples drawn on a circle.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex;
use rayon::prelude::*;

use crate::angle;
use crate::blaschke::{BlaschkeClass, UnicriticalBlaschke};
use crate::ellipticity::{
    classify_unicritical, elliptic_fixed_point, m_point, s_zero, RayKind, S_ZERO_TOL,
};
use crate::error::{Error, Result};
use crate::format::sig17;
use crate::julia::JuliaSample;

pub type Rgb = [u8; 3];

pub const BLACK: Rgb = [0, 0, 0];
pub const WHITE: Rgb = [255, 255, 255];
pub const RED: Rgb = [255, 0, 0];
pub const LIGHT_GRAY: Rgb = [211, 211, 211];

/// Minimum number of rays in the parameter-plane threshold table.
pub const MIN_RAYS: usize = 1024;
/// Side of the square marker drawn at m-points and Denjoy-Wolff points.
pub const MARKER_SIZE: usize = 5;
/// Outward radial offset of the m-point markers, in pixels.
pub const MARKER_OFFSET: f64 = 2.0;
/// Julia circle radius as a fraction of the image width.
pub const JULIA_RADIUS: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// Only parameters with `arg w` in `[0, 2π/(n-1))`; the rest is black.
    Sector,
    FullDisk,
}

/// Row-major 8-bit RGB image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, fill: Rgb) -> Self {
        Self {
            width,
            height,
            pixels: fill.repeat(width * height),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> Rgb {
        let i = 3 * (y * self.width + x);
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    pub fn set(&mut self, x: usize, y: usize, c: Rgb) {
        let i = 3 * (y * self.width + x);
        self.pixels[i..i + 3].copy_from_slice(&c);
    }

    /// Sets the pixel if `(x, y)` is inside the image.
    fn set_clipped(&mut self, x: i64, y: i64, c: Rgb) {
        if x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height {
            self.set(x as usize, y as usize, c);
        }
    }

    /// Square of side [`MARKER_SIZE`] centred on pixel `(x, y)`.
    fn marker(&mut self, x: i64, y: i64, c: Rgb) {
        let h = (MARKER_SIZE / 2) as i64;
        for dy in -h..=h {
            for dx in -h..=h {
                self.set_clipped(x + dx, y + dy, c);
            }
        }
    }

    /// Binary PPM (`P6`).
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn write_ppm(&self, path: &Path) -> Result<()> {
        write_file(path, &self.to_ppm())
    }
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub psi: f64,
    /// `None` on always-elliptic rays.
    pub s0: Option<f64>,
}

/// `s₀(ψ)` sampled on equally spaced rays.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    pub n: u32,
    pub rows: Vec<CurveRow>,
}

impl CurveTable {
    /// CSV with header `psi,s0`; always-elliptic rays are written as `nan`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("psi,s0\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{}", sig17(r.psi), sig17(r.s0.unwrap_or(f64::NAN)));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_file(path, self.to_csv().as_bytes())
    }
}

/// `s₀` at `ψ_k = 2πk/angles`, `k = 0..angles`.
pub fn boundary_curve(n: u32, angles: usize) -> Result<CurveTable> {
    if angles == 0 {
        return Err(Error::Precondition("angles must be positive".into()));
    }
    let rows = (0..angles)
        .into_par_iter()
        .map(|k| {
            let psi = std::f64::consts::TAU * k as f64 / angles as f64;
            let ray = s_zero(n, psi, S_ZERO_TOL)?;
            Ok(CurveRow { psi, s0: ray.s0() })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveTable { n, rows })
}

/// Centre of pixel `(i, j)` in the square `[-1, 1]²`.
pub fn pixel_parameter(i: usize, j: usize, width: usize, height: usize) -> Complex<f64> {
    Complex::new(
        2.0 * (i as f64 + 0.5) / width as f64 - 1.0,
        1.0 - 2.0 * (j as f64 + 0.5) / height as f64,
    )
}

/// Fractional pixel coordinates of the parameter `w`.
fn parameter_pixel(w: Complex<f64>, width: usize, height: usize) -> (f64, f64) {
    (
        (w.re + 1.0) * width as f64 / 2.0 - 0.5,
        (1.0 - w.im) * height as f64 / 2.0 - 0.5,
    )
}

/// Thresholds on `rays` equally spaced rays of the sector; always-elliptic
/// rays (and rays too close to one for `f64`) get `s₀ = 1`.
fn ray_table(n: u32, rays: usize) -> Result<Vec<f64>> {
    let width = angle::sector_width::<f64>(n);
    (0..rays)
        .into_par_iter()
        .map(|k| {
            let psi = width * k as f64 / rays as f64;
            match s_zero(n, psi, S_ZERO_TOL) {
                Ok(ray) => Ok(match ray.kind {
                    RayKind::AlwaysElliptic => 1.0,
                    RayKind::ThresholdAt(s0) => s0,
                }),
                Err(Error::Numeric(_)) => Ok(1.0),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Linear interpolation of the periodic ray table at `psi`.
fn interpolate_s0(table: &[f64], n: u32, psi: f64) -> f64 {
    let width = angle::sector_width::<f64>(n);
    let t = angle::reduce_to_sector(n, psi) / width * table.len() as f64;
    let k = (t.floor() as usize).min(table.len() - 1);
    let frac = t - k as f64;
    let next = table[(k + 1) % table.len()];
    if frac == 0.0 {
        table[k]
    } else {
        table[k] + frac * (next - table[k])
    }
}

fn elliptic_colour(n: u32, w: Complex<f64>) -> Rgb {
    let m = UnicriticalBlaschke::new(n, w)
        .ok()
        .and_then(|b| {
            elliptic_fixed_point(&b)
                .ok()
                .and_then(|p| b.derivative(p).ok())
        })
        .map_or(1.0, |d| d.norm().min(1.0));
    let a = (220.0 * m).round() as u8;
    [a, a, (128.0 + 127.0 * m).round() as u8]
}

fn hyperbolic_colour(s: f64, s0: f64) -> Rgb {
    let v = if s0 < 1.0 {
        ((s - s0) / (1.0 - s0)).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let g = (64.0 + 191.0 * v).round() as u8;
    [g, g, g]
}

/// Colours the disk of parameters by the type of `B_w`: elliptic in blue
/// (brighter as `|B'(p)|` approaches 1), hyperbolic in grey (brighter towards
/// the circle), pixels whose radial span contains `s₀` in black, and red
/// markers just outside the m-points.
///
/// Thresholds come from a table of at least [`MIN_RAYS`] rays over the
/// sector, interpolated linearly in angle. Every pixel is a pure function of
/// its position, so the output does not depend on `workers`.
pub fn render_parameter_plane(
    n: u32,
    width: usize,
    height: usize,
    region: Region,
    workers: Option<usize>,
) -> Result<RasterImage> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "degree must be at least 2, got {n}"
        )));
    }
    if width == 0 || height == 0 {
        return Err(Error::Precondition(
            "image dimensions must be positive".into(),
        ));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(Error::Precondition("worker count must be positive".into()));
        }
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Numeric(format!("cannot start worker pool: {e}")))?;

    let rays = MIN_RAYS.max(2 * (width + height)).next_multiple_of(2);
    let (dx, dy) = (2.0 / width as f64, 2.0 / height as f64);
    let mut image = pool.install(|| -> Result<RasterImage> {
        let table = ray_table(n, rays)?;
        let pixels: Vec<u8> = (0..height)
            .into_par_iter()
            .flat_map_iter(|j| {
                let table = &table;
                (0..width).flat_map(move |i| {
                    let w = pixel_parameter(i, j, width, height);
                    let s = w.norm();
                    let psi = w.arg();
                    if s >= 1.0
                        || (region == Region::Sector && s > 0.0 && !angle::in_sector(n, psi))
                    {
                        BLACK
                    } else {
                        let s0 = interpolate_s0(table, n, psi);
                        let span = if s > 0.0 {
                            0.5 * ((w.re / s).abs() * dx + (w.im / s).abs() * dy)
                        } else {
                            0.0
                        };
                        if (s - s0).abs() <= span {
                            BLACK
                        } else if s < s0 {
                            elliptic_colour(n, w)
                        } else {
                            hyperbolic_colour(s, s0)
                        }
                    }
                })
            })
            .collect();
        Ok(RasterImage {
            width,
            height,
            pixels,
        })
    })?;

    let m = m_point::<f64>(n)?;
    let copies = match region {
        Region::Sector => 1,
        Region::FullDisk => n as usize - 1,
    };
    for k in 0..copies {
        let w = m * Complex::from_polar(1.0, angle::sector_width::<f64>(n) * k as f64);
        let (x, y) = parameter_pixel(w, width, height);
        let u = w / w.norm();
        let x = x + MARKER_OFFSET * u.re;
        let y = y - MARKER_OFFSET * u.im;
        image.marker(x.round() as i64, y.round() as i64, RED);
    }
    Ok(image)
}

/// The sample drawn on a circle of radius `0.4·width` in a square image: a
/// 3-pixel light-grey annulus, samples in black across its thickness, and
/// the Denjoy-Wolff point as a red square.
pub fn render_julia_circle(
    b: &UnicriticalBlaschke<f64>,
    sample: &JuliaSample<f64>,
    width: usize,
) -> Result<RasterImage> {
    if width < 8 {
        return Err(Error::Precondition(format!(
            "image width {width} is below 8"
        )));
    }
    let mut image = RasterImage::new(width, width, WHITE);
    let c = width as f64 / 2.0;
    let r = JULIA_RADIUS * width as f64;
    for y in 0..width {
        for x in 0..width {
            let d = (x as f64 + 0.5 - c).hypot(y as f64 + 0.5 - c);
            if (d - r).abs() <= 1.5 {
                image.set(x, y, LIGHT_GRAY);
            }
        }
    }
    for &phi in &sample.angles {
        let (sin, cos) = phi.sin_cos();
        for dr in [-1.0, 0.0, 1.0] {
            let x = (c + (r + dr) * cos).floor() as i64;
            let y = (c - (r + dr) * sin).floor() as i64;
            image.set_clipped(x, y, BLACK);
        }
    }
    let dw = dw_point(b)?;
    let x = (c + r * dw.re).floor() as i64;
    let y = (c - r * dw.im).floor() as i64;
    image.marker(x, y, RED);
    Ok(image)
}

fn dw_point(b: &UnicriticalBlaschke<f64>) -> Result<Complex<f64>> {
    Ok(match classify_unicritical(b.n(), b.w())? {
        BlaschkeClass::Elliptic { dw_point, .. }
        | BlaschkeClass::Parabolic { dw_point }
        | BlaschkeClass::Hyperbolic { dw_point, .. } => dw_point,
    })
}
