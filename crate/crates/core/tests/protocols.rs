use std::f64::consts::PI;

use landauer_geo::protocols::{build_protocol, chebyshev_knots, l1, l2, l2_detailed, plan, ProtocolKind};
use landauer_geo::{AnalyticPath, Interpolation, Protocol, RadialProfile};
use proptest::prelude::*;

#[test]
fn step_lengths_in_the_limits() {
    // weak coupling: L1 → √(u/2), L2² → π²/(8u)
    let u = 1e-3;
    let v = l2(u).unwrap();
    assert!((v * v * 8.0 * u / (PI * PI) - 1.0).abs() < 0.02);
    assert!((l1(u).unwrap() / (u / 2.0).sqrt() - 1.0).abs() < 0.02);
    // strong coupling: L2 → √π/2
    assert!((l2(1e3).unwrap() / (PI.sqrt() / 2.0) - 1.0).abs() < 2e-3);
    let d = l2_detailed(10.0).unwrap();
    assert!(d.truncation_error < 1e-10 && d.tail > 0.0);
    assert!(l1(0.0).is_err() && l2(f64::NAN).is_err());
}

#[test]
fn optimal_split_minimizes_the_cost() {
    let p = plan(1.5, 1.0, 2.0, 0).unwrap();
    let best = p.cost_with_split(p.tau1_fraction);
    assert!((best - p.sigma_kbt).abs() < 1e-12 * best);
    for f in [0.05, 0.2, 0.4, 0.6, 0.9] {
        assert!(p.cost_with_split(f) >= best);
    }
}

#[test]
fn schedules_have_constant_speed() {
    let p = plan(0.8, 1.0, 1.0, 24).unwrap();
    let proto = p.protocol().unwrap();
    assert_eq!(proto.start().mu, 0.0);
    assert!((proto.end().mu - 0.8).abs() < 1e-14);
    let knots = chebyshev_knots(24);
    assert_eq!(knots.len(), 25);
    assert!(knots.windows(2).all(|w| w[1] > w[0]));
    assert!(plan(0.8, 1.0, 1.0, 0).unwrap().protocol().is_err());
}

#[test]
fn builders_and_tags() {
    let a = build_protocol(ProtocolKind::HtGeodesic { eps_star: 2.0, k: 1 }, 3.0, 1.0).unwrap();
    assert!(matches!(a.interpolation, Interpolation::Analytic(AnalyticPath::HtGeodesic { .. })));
    assert!((a.end().eps - 2.0).abs() < 1e-14 && a.end().mu.abs() < 1e-14);
    let z = build_protocol(
        ProtocolKind::ZeroT { phi0: 0.0, phi1: PI / 2.0, r: RadialProfile::Linear(1.0, 2.0) },
        1.0,
        f64::INFINITY,
    )
    .unwrap();
    assert!((z.end().mu - 2.0).abs() < 1e-14);
    let round = Protocol::from_json(&a.to_json()).unwrap();
    assert_eq!(round.interpolation, a.interpolation);
    assert!(Protocol::from_json(r#"{"tau": 1}"#).is_err());
    assert!(build_protocol(
        ProtocolKind::Sampled { knots: vec![0.0, 0.5], eps: vec![0.0, 1.0], mu: vec![0.0, 0.0] },
        1.0,
        1.0
    )
    .is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn one_parameter_cost_exceeds_zero_t_bound(lu in -3.0f64..3.0) {
        let p = plan(10f64.powf(lu), 1.0, 1.0, 0).unwrap();
        prop_assert!(p.sigma_tau_beta >= PI / 4.0 - 1e-9);
        prop_assert!(p.tau1_fraction > 0.0 && p.tau1_fraction < 1.0);
    }

    #[test]
    fn step_two_shrinks_with_coupling(lu in -2.0f64..2.0) {
        let u = 10f64.powf(lu);
        prop_assert!(l2(1.5 * u).unwrap() < l2(u).unwrap());
        prop_assert!(l1(1.5 * u).unwrap() > l1(u).unwrap());
    }
}
