use std::f64::consts::PI;

use landauer_geo::special::{fermi, fermi_variance, integrate, polygamma, polygamma_all, Complex64, QuadratureSpec};
use proptest::prelude::*;

/// ψ^(1) and ψ^(2) by direct summation with an Euler–Maclaurin remainder.
fn psi12_by_sum(w: Complex64) -> (Complex64, Complex64) {
    let n = 2000;
    let (mut s1, mut s2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for k in (0..n).rev() {
        let z = (w + k as f64).inv();
        s1 += z * z;
        s2 += z * z * z;
    }
    let z = (w + n as f64).inv();
    let r1 = z + z * z / 2.0 + z * z * z / 6.0 - z.powi(5) / 30.0;
    let r2 = z * z + z * z * z + z.powi(4) / 2.0 - z.powi(6) / 6.0;
    (s1 + r1, -2.0 * s2 - r2)
}

#[test]
fn polygamma_special_values() {
    let one = Complex64::new(1.0, 0.0);
    let euler_gamma = 0.577_215_664_901_532_9;
    let zeta3 = 1.202_056_903_159_594_3;
    assert!((polygamma(0, one).unwrap().re + euler_gamma).abs() < 1e-15);
    assert!((polygamma(1, one).unwrap().re - PI * PI / 6.0).abs() < 1e-15);
    assert!((polygamma(2, one).unwrap().re + 2.0 * zeta3).abs() < 1e-14);
    assert!((polygamma(3, one).unwrap().re - PI.powi(4) / 15.0).abs() < 1e-14);
    // Im ψ(1/2 + iy) = (π/2) tanh(πy)
    for y in [0.01, 0.3, 2.0, 17.0] {
        let v = polygamma(0, Complex64::new(0.5, y)).unwrap();
        assert!((v.im - 0.5 * PI * (PI * y).tanh()).abs() < 1e-14, "y = {y}: {v}");
    }
}

#[test]
fn polygamma_rejects_left_half_plane() {
    assert!(polygamma(1, Complex64::new(-0.5, 1.0)).is_err());
    assert!(polygamma(4, Complex64::new(1.0, 0.0)).is_err());
}

#[test]
fn quadrature_smoke() {
    let spec = QuadratureSpec::default().with_tol(1e-13, 0.0);
    let r = integrate(|x| x.sin(), 0.0, PI, &spec).unwrap();
    assert!((r.value - 2.0).abs() < 1e-13);
    let r = integrate(|x| 1.0 / (1.0 + x * x), -1e3, 1e3, &spec).unwrap();
    assert!((r.value - 2.0 * 1e3f64.atan()).abs() < 1e-12);
}

proptest! {
    #[test]
    fn fermi_is_particle_hole_symmetric(x in -700.0f64..700.0) {
        prop_assert!((fermi(x) + fermi(-x) - 1.0).abs() <= 1e-15);
        prop_assert!((0.0..=1.0).contains(&fermi(x)));
        prop_assert!((fermi_variance(x) - fermi_variance(-x)).abs() <= 1e-300_f64.max(1e-15 * fermi_variance(x)));
    }

    #[test]
    fn fermi_variance_matches_product(x in -30.0f64..30.0) {
        let f = fermi(x);
        prop_assert!((fermi_variance(x) - f * (1.0 - f)).abs() <= 1e-15);
    }

    #[test]
    fn polygamma_recurrence(re in 0.02f64..40.0, im in -300.0f64..300.0) {
        let w = Complex64::new(re, im);
        let a = polygamma_all(w).unwrap();
        let b = polygamma_all(w + 1.0).unwrap();
        let mut fact = 1.0;
        for m in 0..4 {
            if m > 0 {
                fact *= m as f64;
            }
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let step = w.powi(-(m as i32 + 1)) * (sign * fact);
            let scale = a[m].norm().max(step.norm()).max(1e-300);
            prop_assert!((b[m] - a[m] - step).norm() <= 1e-12 * scale, "m = {}, w = {}", m, w);
        }
    }

    #[test]
    fn polygamma_matches_direct_sum(re in 0.5f64..20.0, im in -40.0f64..40.0) {
        let w = Complex64::new(re, im);
        let (s1, s2) = psi12_by_sum(w);
        let a = polygamma_all(w).unwrap();
        prop_assert!((a[1] - s1).norm() <= 1e-12 * s1.norm());
        prop_assert!((a[2] - s2).norm() <= 1e-11 * s2.norm());
    }
}
