use std::path::PathBuf;

use num_complex::Complex;
use unicritical::cli::{run_with, EXIT_OK, EXIT_USAGE};
use unicritical::{conjugate, normalize, Blaschke, Mobius};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("unicritical").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("unicritical-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn value<'a>(out: &'a str, key: &str) -> &'a str {
    out.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {out}"))
}

#[test]
fn closing_example_from_polar_input() {
    let (code, out, _) = call(&[
        "classify",
        "--n",
        "2",
        "--s",
        "0.333333333",
        "--psi",
        "3.14159265358979",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(value(&out, "class"), "parabolic");
    assert_eq!(value(&out, "multiplier"), "1");
    assert_eq!(value(&out, "julia"), "full_circle");
    assert_eq!(value(&out, "step"), "zero");
    let s0: f64 = value(&out, "s0").parse().unwrap();
    assert!((s0 - 1.0 / 3.0).abs() < 1e-9);
}

#[test]
fn strict_tolerance_leaves_the_parabolic_band() {
    let (code, out, _) = call(&[
        "classify",
        "--n",
        "2",
        "--s",
        "0.333333333",
        "--psi",
        "3.14159265358979",
        "--tol",
        "1e-12",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(value(&out, "class"), "elliptic");
    assert!(!out.contains("step="));
    assert_eq!(
        call(&["classify", "--n", "2", "--re", "0", "--im", "0", "--tol", "-1"]).0,
        EXIT_USAGE
    );
}

#[test]
fn always_elliptic_ray_prints_nan_threshold() {
    let (code, out, _) = call(&[
        "classify",
        "--n",
        "3",
        "--s",
        "0.99",
        "--psi",
        "1.5707963267948966",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(value(&out, "class"), "elliptic");
    assert_eq!(value(&out, "s0"), "nan");
}

#[test]
fn boundary_writes_the_curve() {
    let path = scratch("boundary.csv");
    let p = path.to_str().unwrap();
    assert_eq!(
        call(&["boundary", "--n", "2", "--angles", "64", "--out", p]).0,
        EXIT_OK
    );
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("psi,s0\n"));
    assert_eq!(text.lines().count(), 65);
    assert!(text.lines().skip(1).all(|l| l.split(',').count() == 2));
}

#[test]
fn parameter_render_is_byte_identical_across_workers() {
    let a = scratch("param-1.ppm");
    let b = scratch("param-3.ppm");
    for (path, workers) in [(&a, "1"), (&b, "3")] {
        let code = call(&[
            "render-param",
            "--n",
            "4",
            "--width",
            "64",
            "--height",
            "48",
            "--region",
            "sector",
            "--workers",
            workers,
            "--out",
            path.to_str().unwrap(),
        ])
        .0;
        assert_eq!(code, EXIT_OK);
    }
    let bytes = std::fs::read(&a).unwrap();
    assert!(bytes.starts_with(b"P6\n64 48\n255\n"));
    assert_eq!(bytes, std::fs::read(&b).unwrap());
}

#[test]
fn julia_render_is_reproducible() {
    let run = |tag: &str| {
        let image = scratch(&format!("julia-{tag}.ppm"));
        let csv = scratch(&format!("julia-{tag}.csv"));
        let code = call(&[
            "render-julia",
            "--n",
            "3",
            "--re",
            "0.6",
            "--im",
            "0.5",
            "--seed",
            "12",
            "--count",
            "3000",
            "--width",
            "128",
            "--out-image",
            image.to_str().unwrap(),
            "--out-csv",
            csv.to_str().unwrap(),
        ])
        .0;
        assert_eq!(code, EXIT_OK);
        (
            std::fs::read(image).unwrap(),
            std::fs::read_to_string(csv).unwrap(),
        )
    };
    let first = run("a");
    let second = run("b");
    assert_eq!(first, second);
    assert_eq!(first.1.lines().count(), 3001);
}

#[test]
fn normalize_reads_a_product_file() {
    let w = Complex::from_polar(0.55, 0.4);
    let b = Blaschke::new(3, w).unwrap();
    let f = conjugate(&b, &Mobius::new(1.1, Complex::new(0.3, -0.2)).unwrap()).unwrap();
    let mut text = format!("# conjugate of B_w\ntheta {:e}\nn 3\n", f.theta());
    for z in f.zeros() {
        text.push_str(&format!("zero {:e} {:e}\n", z.re, z.im));
    }
    let path = scratch("product.txt");
    std::fs::write(&path, text).unwrap();
    let (code, out, err) = call(&["normalize", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    let fields: Vec<f64> = out
        .lines()
        .next()
        .unwrap()
        .split_whitespace()
        .skip(1)
        .map(|x| x.parse().unwrap())
        .collect();
    assert!((Complex::new(fields[0], fields[1]) - w).norm() < 1e-8);
    assert_eq!(normalize(&f).unwrap().w.re, fields[0]);

    std::fs::write(&path, "theta 0\nn 2\nzero 0.1 0\n").unwrap();
    assert_eq!(call(&["normalize", path.to_str().unwrap()]).0, EXIT_USAGE);
}

#[test]
fn quick_selfcheck_passes() {
    let (code, out, _) = call(&["selfcheck", "--level", "quick"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.lines().all(|l| l.starts_with("PASS ")));
}
