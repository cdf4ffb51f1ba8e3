use landauer_geo::dynamics::{
    exact_observables, frozen_relax, noise_integral, propagator, thermal_occupation, weak_relaxation, work_exact,
    BathContext,
};
use landauer_geo::special::fermi;
use landauer_geo::{AnalyticPath, ControlPoint, Protocol};
use proptest::prelude::*;

fn weak_ramp(tau: f64) -> Protocol {
    Protocol::analytic(AnalyticPath::WeakOptimal { beta: 1.0, mu_star: 0.3, eps_final: 5.0 }, tau, 1.0, 256).unwrap()
}

#[test]
fn frozen_controls_match_closed_form() {
    // before thermalization, so the transient is tested too
    let (e, m) = (0.8, 0.4);
    let pt = ControlPoint::new(e, m).unwrap();
    let proto = Protocol::sampled(3.0, 1.0, vec![0.0, 1.0], vec![e, e], vec![m, m]).unwrap();
    let ctx = BathContext::new(1.0).with_omega_max(1e5).with_p0(1.0);
    let t = [0.1, 0.5, 1.0];
    let o = exact_observables(&proto, &ctx, &t).unwrap();
    for (j, &tj) in t.iter().enumerate() {
        let (p, v) = frozen_relax(pt, &ctx, 3.0 * tj).unwrap();
        assert!((o.p[j] - p).abs() < 1e-7, "p at {tj}: {} vs {p}", o.p[j]);
        assert!((o.v[j] - v).abs() < 1e-6, "v at {tj}: {} vs {v}", o.v[j]);
    }
}

#[test]
fn occupation_stays_physical() {
    let proto = weak_ramp(4.0);
    let t: Vec<f64> = (0..=16).map(|i| i as f64 / 16.0).collect();
    for p0 in [0.0, 1.0] {
        let o = exact_observables(&proto, &BathContext::new(1.0).with_p0(p0), &t).unwrap();
        assert!((o.p[0] - p0).abs() < 1e-12);
        assert!(o.p.iter().all(|p| (0.0..=1.0).contains(p)), "{:?}", o.p);
    }
}

#[test]
fn static_protocol_does_no_work() {
    let proto = Protocol::sampled(2.0, 1.0, vec![0.0, 1.0], vec![0.5, 0.5], vec![0.2, 0.2]).unwrap();
    let r = work_exact(&proto, &BathContext::new(1.0).with_omega_max(1e4)).unwrap();
    assert_eq!(r.work, 0.0);
    assert!(r.delta_f.abs() < 1e-14);
}

#[test]
fn weak_rate_equation_relaxes_to_fermi() {
    let (e, m) = (0.7, 0.05);
    let proto = Protocol::sampled(400.0, 1.0, vec![0.0, 1.0], vec![e, e], vec![m, m]).unwrap();
    let p = weak_relaxation(&proto, &BathContext::new(1.0).with_p0(1.0), &[0.0, 0.01, 1.0]).unwrap();
    let f = fermi(e);
    assert!((p[1] - (f + (1.0 - f) * (-2.0 * m * 4.0f64).exp())).abs() < 1e-9);
    assert!((p[2] - f).abs() < 1e-12);
    // the exact thermal occupation tends to f as μ → 0
    let th = thermal_occupation(ControlPoint::new(e, 1e-6).unwrap(), 1.0).unwrap();
    assert!((th - f).abs() < 1e-5);
}

#[test]
fn rejects_bad_grids_and_contexts() {
    let proto = weak_ramp(1.0);
    assert!(exact_observables(&proto, &BathContext::new(1.0), &[0.5, 0.2]).is_err());
    assert!(exact_observables(&proto, &BathContext::new(-1.0), &[0.5]).is_err());
    assert!(propagator(&proto, 0.7, 0.2).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn propagator_composes(a in 0.0f64..1.0, b in 0.0f64..1.0, c in 0.0f64..1.0, tau in 0.1f64..20.0) {
        let mut x = [a, b, c];
        x.sort_by(f64::total_cmp);
        let proto = weak_ramp(tau);
        let g02 = propagator(&proto, x[0], x[2]).unwrap();
        let g01 = propagator(&proto, x[0], x[1]).unwrap();
        let g12 = propagator(&proto, x[1], x[2]).unwrap();
        prop_assert!((g12 * g01 - g02).norm() <= 1e-10);
        prop_assert!(g02.norm() <= 1.0 + 1e-15);
    }

    #[test]
    fn noise_integral_obeys_unitarity_bound(omega in -30.0f64..30.0) {
        // |G| ≤ 1 gives |I(t, ω)| ≤ τ∫₀ᵗ g
        let proto = weak_ramp(2.0);
        let t = [0.25, 0.5, 1.0];
        let i = noise_integral(&proto, omega, &t).unwrap();
        let g = (2.0f64 * 0.3).sqrt();
        for (k, &tk) in t.iter().enumerate() {
            prop_assert!(i[k].norm() <= 2.0 * g * tk + 1e-12);
        }
    }
}
