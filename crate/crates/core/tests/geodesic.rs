use std::f64::consts::PI;

use landauer_geo::geodesic::{
    ht_seed, integrate_geodesic, shoot, zero_t_cost, GeodesicOptions, GeodesicStop, ShootOptions,
};
use landauer_geo::AnalyticPath;

/// sup |λ - λ_HT| / ε* over interior samples for a seed with parameter `eps_star`.
fn deviation_from_cycloid(eps_star: f64) -> (f64, f64) {
    let seed = ht_seed(eps_star, 1, 1e-2).unwrap();
    let sol = integrate_geodesic(&seed, 1.0, GeodesicStop::TimeOne, &GeodesicOptions::default()).unwrap();
    let ht = AnalyticPath::HtGeodesic { eps_star, k: 1 };
    let dev = (1..20)
        .map(|i| {
            let t = i as f64 / 20.0;
            let (a, b) = (sol.protocol.sample(t), ht.sample(t));
            (a.eps - b.eps).abs().max((a.mu - b.mu).abs())
        })
        .fold(0.0, f64::max);
    (dev / eps_star, sol.diagnostics.speed_variation)
}

#[test]
fn small_seed_follows_the_high_temperature_cycloid() {
    let (d3, s3) = deviation_from_cycloid(1e-3);
    let (d4, s4) = deviation_from_cycloid(1e-4);
    assert!(d3 < 1e-3, "relative deviation {d3:e}");
    // the correction is first order in βε*
    assert!(d4 < 0.2 * d3, "{d4:e} vs {d3:e}");
    assert!(s3 < 1e-6 && s4 < 1e-6, "speed variation {s3:e}, {s4:e}; deviation {d3:e}, {d4:e}");
}

#[test]
fn shooting_hits_the_target() {
    let s = shoot(2.0, 1, 1.0, &ShootOptions::default()).unwrap();
    assert!((s.achieved / 2.0 - 1.0).abs() <= 1e-6);
    assert!((s.solution.sigma_tau - s.solution.length.powi(2)).abs() < 1e-12 * s.solution.sigma_tau);
    // β only rescales ε: the same shot at β = 2 ends at ε = 1
    let h = shoot(2.0, 1, 2.0, &ShootOptions::default()).unwrap();
    assert!((h.solution.sigma_tau / s.solution.sigma_tau - 1.0).abs() < 1e-5);
    assert!((h.solution.protocol.end().eps - 1.0).abs() < 1e-5);
}

#[test]
fn erasure_cost_grows_with_the_target() {
    let opts = ShootOptions::default();
    let c: Vec<f64> = [0.5, 2.0, 8.0].iter().map(|&t| shoot(t, 1, 1.0, &opts).unwrap().solution.sigma_tau).collect();
    assert!(c.windows(2).all(|w| w[1] > w[0]), "{c:?}");
    assert!(shoot(-1.0, 1, 1.0, &opts).is_err());
}

#[test]
fn zero_temperature_cost() {
    assert!((zero_t_cost(0.0, PI / 2.0, 1.0) - PI / 4.0).abs() < 1e-15);
    assert!((zero_t_cost(0.3, 0.3, 5.0)).abs() == 0.0);
}
