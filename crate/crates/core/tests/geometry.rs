use std::f64::consts::PI;

use landauer_geo::cli::metric_consistency;
use landauer_geo::geodesic::christoffel;
use landauer_geo::geometry::{
    excess_work, metric_high_t, metric_polygamma, metric_quadrature, metric_zero_t, quasistatic_work_between,
    weak_coupling, MetricMethod, MetricTensor,
};
use landauer_geo::{AnalyticPath, ControlPoint, Protocol};
use proptest::prelude::*;

#[test]
fn closed_form_agrees_with_quadrature() {
    let (worst, at) = metric_consistency(metric_polygamma, 8, 1e-11).unwrap();
    assert!(worst <= 1e-6, "worst {worst:e} at {at:?}");
}

#[test]
fn consistency_check_catches_a_wrong_metric() {
    let flipped =
        |e: f64, m: f64, b: f64| metric_polygamma(e, m, b).map(|t| MetricTensor::new(t.m_ee, -t.m_em, t.m_mm));
    let (worst, _) = metric_consistency(flipped, 6, 1e-9).unwrap();
    assert!(worst > 0.1, "sign flip went unnoticed: {worst:e}");
    let swapped = |e: f64, m: f64, b: f64| metric_polygamma(e, m, b).map(|t| MetricTensor::new(t.m_mm, t.m_em, t.m_ee));
    assert!(metric_consistency(swapped, 6, 1e-9).unwrap().0 > 0.1);
}

#[test]
fn limits() {
    let ht = metric_polygamma(1e-5, 1e-4, 1.0).unwrap();
    assert!(ht.rel_diff(&metric_high_t(1e-4, 1.0).unwrap()) < 1e-3);
    let zt = metric_polygamma(400.0, 300.0, 1.0).unwrap();
    assert!(zt.rel_diff(&metric_zero_t(400.0, 300.0).unwrap()) < 1e-4);
    // infinite β falls through to the zero-temperature form
    let inf = metric_polygamma(2.0, 1.0, f64::INFINITY).unwrap();
    assert_eq!(inf, metric_zero_t(2.0, 1.0).unwrap());
    assert!(metric_zero_t(0.0, 0.0).is_err());
}

#[test]
fn christoffel_matches_finite_differences() {
    for &(e, m) in &[(0.4, 0.9), (-1.5, 0.2), (3.0, 2.0), (12.0, 0.8)] {
        let g = christoffel(e, m, 1.0).unwrap();
        let h = [1e-5 * (1.0 + e.abs()), 1e-5 * m];
        let at = |de: f64, dm: f64| metric_polygamma(e + de, m + dm, 1.0).unwrap().as_matrix();
        // ∂_l m_jk by central differences
        let mut dm = [[[0.0; 2]; 2]; 2];
        for l in 0..2 {
            let (dp, dn) = if l == 0 { (at(h[0], 0.0), at(-h[0], 0.0)) } else { (at(0.0, h[1]), at(0.0, -h[1])) };
            for j in 0..2 {
                for k in 0..2 {
                    dm[l][j][k] = (dp[j][k] - dn[j][k]) / (2.0 * h[l]);
                }
            }
        }
        let base = metric_polygamma(e, m, 1.0).unwrap();
        let [ie, iem, im] = base.inverse();
        let inv = [[ie, iem], [iem, im]];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let mut s = 0.0;
                    for l in 0..2 {
                        s += 0.5 * inv[i][l] * (dm[j][k][l] + dm[k][j][l] - dm[l][j][k]);
                    }
                    let scale = g.iter().flatten().flatten().fold(0.0f64, |a, b| a.max(b.abs()));
                    assert!(
                        (s - g[i][j][k]).abs() <= 1e-6 * scale,
                        "Γ^{i}_{j}{k} at ({e}, {m}): fd {s} vs {}",
                        g[i][j][k]
                    );
                }
            }
        }
    }
}

#[test]
fn erasure_free_energy_is_ln2() {
    let a = ControlPoint::new(0.0, 0.0).unwrap();
    let b = ControlPoint::new(20.0, 0.0).unwrap();
    let df = quasistatic_work_between(a, b, 1.0, None).unwrap();
    let exact = 2f64.ln() - (-20f64).exp().ln_1p();
    assert!((df - exact).abs() < 1e-11, "{df} vs {exact}");
    // unequal couplings need a cutoff
    assert!(quasistatic_work_between(a, ControlPoint::new(1.0, 1.0).unwrap(), 1.0, None).is_err());
}

#[test]
fn high_temperature_geodesic_cost() {
    let p = Protocol::analytic(AnalyticPath::HtGeodesic { eps_star: 1e-3, k: 1 }, 2.0, 1.0, 512).unwrap();
    let r = excess_work(&p, 1.0, MetricMethod::HighT).unwrap();
    // L² = πε*/2 under β/(8μ) 𝟙 at β = 1
    assert!((r.sigma_tau - PI * 1e-3 / 2.0).abs() < 1e-9 * PI * 1e-3, "{}", r.sigma_tau);
    assert!((r.sigma_kbt - r.sigma_tau / 2.0).abs() < 1e-15);
    assert!(r.cauchy_schwarz);
}

#[test]
fn weak_coupling_cost_approaches_limit() {
    let w = weak_coupling(25.0, 1.0, 1.0, 2e-3).unwrap();
    // θ₁ = π/2 - e^{-βε/2} + ..., so the ratio is 1 - (8/π)e^{-βε/2} + O(e^{-βε})
    let expected = 1.0 - 8.0 / PI * (-12.5f64).exp();
    assert!((w.sigma_tau / w.sigma_tau_limit - expected).abs() < 1e-9);
    // the full metric along the weak ramp reproduces the rate-equation cost
    let full = excess_work(&w.path, 1.0, MetricMethod::Polygamma).unwrap();
    assert!((full.sigma_tau / w.sigma_tau - 1.0).abs() < 1e-2, "{} vs {}", full.sigma_tau, w.sigma_tau);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scaling_symmetry(e in -50.0f64..50.0, m in 1e-3f64..50.0, b in 0.1f64..5.0, l in 1e-2f64..1e2) {
        let base = metric_polygamma(e, m, b).unwrap();
        let s = metric_polygamma(l * e, l * m, b / l).unwrap().scaled(l * l);
        prop_assert!(s.rel_diff(&base) <= 1e-10);
    }

    #[test]
    fn positive_definite_and_reflected(e in -100.0f64..100.0, m in 1e-3f64..100.0) {
        let t = metric_polygamma(e, m, 1.0).unwrap();
        prop_assert!(t.m_ee > 0.0 && t.m_mm > 0.0 && t.det() > 0.0);
        let r = metric_polygamma(-e, m, 1.0).unwrap();
        prop_assert!(MetricTensor::new(r.m_ee, -r.m_em, r.m_mm).rel_diff(&t) <= 1e-12);
    }

    #[test]
    fn closed_form_vs_quadrature_random(e in -30.0f64..30.0, m in 0.01f64..30.0) {
        let a = metric_polygamma(e, m, 1.0).unwrap();
        let b = metric_quadrature(e, m, 1.0).unwrap();
        prop_assert!(a.rel_diff(&b) <= 1e-8);
    }
}
