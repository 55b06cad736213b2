use std::f64::consts::TAU;

use num_complex::Complex;
use unicritical::ellipticity::{m_point, S_ZERO_TOL};
use unicritical::render::{pixel_parameter, BLACK, LIGHT_GRAY, RED, WHITE};
use unicritical::{
    backward_orbit, boundary_curve, classify_unicritical, render_julia_circle,
    render_parameter_plane, s_zero, Blaschke, RasterImage, Region,
};

fn is_blue(c: [u8; 3]) -> bool {
    c[2] > c[0] && c[0] == c[1]
}

#[test]
fn renders_do_not_depend_on_worker_count() {
    for region in [Region::Sector, Region::FullDisk] {
        let one = render_parameter_plane(3, 96, 80, region, Some(1)).unwrap();
        let four = render_parameter_plane(3, 96, 80, region, Some(4)).unwrap();
        let default = render_parameter_plane(3, 96, 80, region, None).unwrap();
        assert_eq!(one.to_ppm(), four.to_ppm());
        assert_eq!(one.to_ppm(), default.to_ppm());
    }
}

#[test]
fn ppm_layout() {
    let image = render_parameter_plane(2, 40, 30, Region::FullDisk, Some(2)).unwrap();
    let ppm = image.to_ppm();
    let header = b"P6\n40 30\n255\n";
    assert_eq!(&ppm[..header.len()], header);
    assert_eq!(ppm.len(), header.len() + 40 * 30 * 3);
    assert_eq!(image.get(0, 0), BLACK);
}

#[test]
fn colours_follow_the_classification() {
    let (n, size) = (3u32, 128usize);
    let image = render_parameter_plane(n, size, size, Region::FullDisk, Some(2)).unwrap();
    let mut checked = 0;
    for j in (0..size).step_by(5) {
        for i in (0..size).step_by(5) {
            let w = pixel_parameter(i, j, size, size);
            let c = image.get(i, j);
            if w.norm() >= 1.0 || c == BLACK || c == RED {
                continue;
            }
            let class = classify_unicritical(n, w).unwrap();
            if class.is_elliptic() {
                assert!(is_blue(c), "w = {w}: {c:?}");
            } else {
                assert!(c[0] == c[1] && c[1] == c[2], "w = {w}: {c:?}");
            }
            checked += 1;
        }
    }
    assert!(checked > 300);
}

#[test]
fn boundary_pixels_lie_on_the_threshold_curve() {
    let (n, size) = (2u32, 160usize);
    let image = render_parameter_plane(n, size, size, Region::FullDisk, Some(2)).unwrap();
    let pixel = 2.0 / size as f64;
    let mut count = 0;
    for j in 0..size {
        for i in 0..size {
            let w = pixel_parameter(i, j, size, size);
            if w.norm() >= 1.0 - pixel || image.get(i, j) != BLACK {
                continue;
            }
            let s0 = s_zero(n, w.arg(), S_ZERO_TOL).unwrap().s0().unwrap_or(1.0);
            assert!((w.norm() - s0).abs() <= pixel, "w = {w}, s0 = {s0}");
            count += 1;
        }
    }
    assert!(count > 100);
}

#[test]
fn full_disk_render_is_rotation_symmetric() {
    // n = 3 rotates by π and n = 5 by π/2; both are symmetries of the grid.
    let size = 120;
    for n in [3u32, 5] {
        let image = render_parameter_plane(n, size, size, Region::FullDisk, Some(2)).unwrap();
        let turn = |i: usize, j: usize| -> (usize, usize) {
            if n == 3 {
                (size - 1 - i, size - 1 - j)
            } else {
                (j, size - 1 - i)
            }
        };
        for j in 0..size {
            for i in 0..size {
                if !is_blue(image.get(i, j)) {
                    continue;
                }
                let (x, y) = turn(i, j);
                let near = (x.saturating_sub(1)..=(x + 1).min(size - 1)).any(|a| {
                    (y.saturating_sub(1)..=(y + 1).min(size - 1)).any(|b| is_blue(image.get(a, b)))
                });
                assert!(near, "n = {n}: ({i}, {j}) is blue, ({x}, {y}) is not");
            }
        }
    }
}

#[test]
fn m_point_markers_are_red() {
    let size = 200;
    for n in [2u32, 3, 4] {
        let image = render_parameter_plane(n, size, size, Region::FullDisk, Some(1)).unwrap();
        let m = m_point::<f64>(n).unwrap();
        let u = m / m.norm();
        let x = ((m.re + 1.0) * size as f64 / 2.0 - 0.5 + 2.0 * u.re).round() as usize;
        let y = ((1.0 - m.im) * size as f64 / 2.0 - 0.5 - 2.0 * u.im).round() as usize;
        assert_eq!(image.get(x, y), RED, "n = {n}");
    }
}

#[test]
fn boundary_curve_table() {
    let table = boundary_curve(3, 1024).unwrap();
    assert_eq!(table.rows.len(), 1024);
    let csv = table.to_csv();
    assert!(csv.starts_with("psi,s0\n"));
    assert_eq!(csv.lines().count(), 1025);
    // ψ = π/2 is always elliptic for n = 3.
    assert!(table.rows[256].s0.is_none());
    assert!(csv.lines().nth(257).unwrap().ends_with(",nan"));
    let min = table.rows.iter().filter_map(|r| r.s0).fold(1.0, f64::min);
    assert!((min - 0.5).abs() < 1e-9);
    for r in &table.rows {
        assert!((0.0..TAU).contains(&r.psi));
    }
}

#[test]
fn julia_circle_marks_the_dw_point() {
    let b = Blaschke::new(2, Complex::new(0.8, 0.3)).unwrap();
    let class = classify_unicritical(2, b.w()).unwrap();
    let sample = backward_orbit(&b, 5, 64, 2000).unwrap();
    let width = 256;
    let image: RasterImage = render_julia_circle(&b, &sample, width).unwrap();
    let c = width as f64 / 2.0;
    let r = 0.4 * width as f64;
    let dw = class.dw_point();
    let x = (c + r * dw.re).floor() as usize;
    let y = (c - r * dw.im).floor() as usize;
    assert_eq!(image.get(x, y), RED);
    assert_eq!(image.get(0, 0), WHITE);
    let greys = image
        .pixels()
        .chunks(3)
        .filter(|p| *p == LIGHT_GRAY.as_slice())
        .count();
    assert!(greys > 0);
    assert!(render_julia_circle(&b, &sample, 4).is_err());
}
