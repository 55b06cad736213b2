use std::f64::consts::TAU;

use num_complex::Complex;
use proptest::prelude::*;
use unicritical::mobius::{in_ellipticity_domain, DiskMobius, MobiusClass};

fn disk_point(max: f64) -> impl Strategy<Value = Complex<f64>> {
    (0.0..max, 0.0..TAU).prop_map(|(r, a)| Complex::from_polar(r, a))
}

/// Roots of conj(w) z² + (e^{iθ} - 1) z - e^{iθ} w = 0 by the quadratic formula.
fn quadratic_fixed_points(theta: f64, w: Complex<f64>) -> Vec<Complex<f64>> {
    let e = Complex::from_polar(1.0, theta);
    let a = w.conj();
    let b = e - 1.0;
    let c = -e * w;
    if a.norm() < 1e-300 {
        return vec![-c / b];
    }
    let disc = (b * b - 4.0 * a * c).sqrt();
    vec![(-b + disc) / (2.0 * a), (-b - disc) / (2.0 * a)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn classification_matches_quadratic_oracle(theta in 0.0..TAU, w in disk_point(0.98)) {
        let m = DiskMobius::new(theta, w).unwrap();
        let class = m.classify();
        prop_assume!(class != MobiusClass::Identity);
        let roots = quadratic_fixed_points(theta, w);
        let inside = roots.iter().filter(|z| z.norm() < 1.0 - 1e-6).count();
        let on_circle = roots.iter().filter(|z| (z.norm() - 1.0).abs() <= 1e-6).count();
        let tau = 4.0 * (theta / 2.0).cos().powi(2) / (1.0 - w.norm_sqr());
        // The oracle itself cannot separate classes inside the parabolic band.
        prop_assume!((tau - 4.0).abs() > 1e-6);
        match class {
            MobiusClass::Elliptic => prop_assert_eq!(inside, 1, "{:?}", roots),
            MobiusClass::Hyperbolic => prop_assert_eq!(on_circle, 2, "{:?}", roots),
            other => prop_assert!(false, "{:?} with tau = {}", other, tau),
        }
        prop_assert_eq!(in_ellipticity_domain(theta, w), class == MobiusClass::Elliptic);

        // Library fixed points coincide with the oracle roots.
        let fixed = m.fixed_points().unwrap();
        for p in fixed.iter().filter_map(|p| p.finite()) {
            let nearest = roots.iter().map(|r| (r - p).norm() / r.norm().max(1.0)).fold(f64::INFINITY, f64::min);
            prop_assert!(nearest < 1e-6, "{} vs {:?}", p, roots);
        }
    }

    #[test]
    fn trace_squared_matches_explicit_matrix(theta in 0.0..TAU, w in disk_point(0.99)) {
        let m = DiskMobius::new(theta, w).unwrap();
        let c = 1.0 / (1.0 - w.norm_sqr()).sqrt();
        let h = Complex::from_polar(1.0, theta / 2.0);
        let a = h * c;
        let d = h.conj() * c;
        let b = -h * w * c;
        let cc = -w.conj() * h.conj() * c;
        prop_assert!(((a * d - b * cc) - 1.0).norm() < 1e-9);
        let tr2 = ((a + d) * (a + d)).re;
        prop_assert!((m.trace_squared() - tr2).abs() <= 1e-12 * tr2.abs().max(1.0));
    }

    #[test]
    fn composition_is_associative(
        t in proptest::array::uniform3(0.0..TAU),
        w1 in disk_point(0.9), w2 in disk_point(0.9), w3 in disk_point(0.9),
        z in disk_point(0.9),
    ) {
        let a = DiskMobius::new(t[0], w1).unwrap();
        let b = DiskMobius::new(t[1], w2).unwrap();
        let c = DiskMobius::new(t[2], w3).unwrap();
        let left = a.compose(&b).compose(&c).apply(z).unwrap();
        let right = a.compose(&b.compose(&c)).apply(z).unwrap();
        prop_assert!((left - right).norm() < 1e-11);
        let direct = a.apply(b.apply(c.apply(z).unwrap()).unwrap()).unwrap();
        prop_assert!((left - direct).norm() < 1e-11);
    }

    #[test]
    fn inverse_undoes_the_map(theta in 0.0..TAU, w in disk_point(0.95), z in disk_point(0.95)) {
        let m = DiskMobius::new(theta, w).unwrap();
        let back = m.inverse().apply(m.apply(z).unwrap()).unwrap();
        prop_assert!((back - z).norm() < 1e-12);
        prop_assert!(m.compose(&m.inverse()).is_identity());
    }
}

#[test]
fn rejects_parameters_off_the_disk() {
    assert!(DiskMobius::new(0.0, Complex::new(1.0, 0.0)).is_err());
    assert!(DiskMobius::new(f64::NAN, Complex::new(0.0, 0.0)).is_err());
}
