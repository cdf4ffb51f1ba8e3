//! Release acceptance criteria. Each test prints one PASS/FAIL line; run with
//! `cargo test --release --test acceptance -- --nocapture --test-threads=1`.

use std::f64::consts::PI;
use std::time::Instant;

use landauer_geo::cli::{metric_consistency, run_suite};
use landauer_geo::dynamics::{
    exact_observables, frozen_relax, thermal_interaction, thermal_occupation, work_exact, BathContext,
};
use landauer_geo::geodesic::{landauer_constant, shoot, zero_t_geodesic, ShootOptions};
use landauer_geo::geometry::{
    excess_work, metric_high_t, metric_polygamma, metric_zero_t, weak_integrand, MetricMethod,
};
use landauer_geo::protocols::{l2, plan};
use landauer_geo::{AnalyticPath, ControlPoint, Protocol, RadialProfile};

fn report(id: u32, name: &str, pass: bool, detail: String) {
    println!("criterion {id:>2} [{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

#[test]
fn c01_landauer_constant() {
    let start = Instant::now();
    let est = landauer_constant(&[10.0, 20.0, 50.0], 1.0, &ShootOptions::default()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let pass = (2.575..=2.585).contains(&est.a);
    report(
        1,
        "finite-time Landauer constant",
        pass,
        format!("a = {:.6} (window [2.575, 2.585]), spread {:.2e}, {secs:.1} s", est.a, est.uncertainty),
    );
}

#[test]
fn c02_high_temperature_law() {
    let target = 0.01;
    let shot = shoot(target, 1, 1.0, &ShootOptions::default()).unwrap();
    let law = PI * target / 2.0;
    let rel = (shot.solution.sigma_kbt - law).abs() / law;
    let reference = AnalyticPath::HtGeodesic { eps_star: target, k: 1 };
    let p = &shot.solution.protocol;
    let sup = p
        .knots
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let s = reference.sample(t);
            (p.eps[i] - s.eps).abs().max((p.mu[i] - s.mu).abs())
        })
        .fold(0.0, f64::max);
    report(
        2,
        "high-temperature law",
        rel <= 0.01 && sup <= 1e-3 * target,
        format!("kBTΣ rel err {rel:.2e} (<= 1e-2), path sup {sup:.2e} (<= {:.0e})", 1e-3 * target),
    );
}

#[test]
fn c03_weak_coupling_law() {
    let u = 0.01;
    let v = l2(u).unwrap();
    let dev = (v * v * 8.0 * u / (PI * PI) - 1.0).abs();
    let c0 = weak_integrand(0.0, 1.0);
    let flat = (0..=200).map(|i| (weak_integrand(i as f64 / 200.0, 1.0) - c0).abs()).fold(0.0, f64::max);
    report(
        3,
        "weak-coupling law",
        dev <= 0.05 && flat <= 1e-10,
        format!("|L2²·8βμ*/π² - 1| = {dev:.3e} (<= 0.05), integrand spread {flat:.1e} (<= 1e-10)"),
    );
}

#[test]
fn c04_strong_coupling_saturation() {
    let v = l2(100.0).unwrap();
    let target = PI.sqrt() / 2.0;
    let rel = (v - target).abs() / target;
    let worst = log_grid(1e-3, 1e3, 31)
        .iter()
        .map(|&u| plan(u, 1.0, 1.0, 0).unwrap().sigma_tau_beta)
        .fold(f64::INFINITY, f64::min);
    report(
        4,
        "strong-coupling saturation",
        rel <= 0.02 && worst >= PI / 4.0 - 1e-6,
        format!("L2(100) = {v:.6} (rel {rel:.2e} <= 2e-2), min τβkBTΣ on grid {worst:.6} (>= π/4 - 1e-6)"),
    );
}

#[test]
fn c05_zero_temperature_limit() {
    let costs: Vec<f64> =
        [RadialProfile::Constant(1.0), RadialProfile::Linear(0.3, 4.0), RadialProfile::Bump(2.0, 0.8)]
            .into_iter()
            .map(|r| {
                let p = zero_t_geodesic(0.0, PI / 2.0, r, 1.0).unwrap();
                excess_work(&p, f64::INFINITY, MetricMethod::ZeroT).unwrap().sigma_kbt
            })
            .collect();
    let err = costs.iter().map(|c| (c - PI / 4.0).abs()).fold(0.0, f64::max);
    let spread =
        costs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - costs.iter().cloned().fold(f64::INFINITY, f64::min);
    report(
        5,
        "zero-temperature limit",
        err <= 1e-10 && spread <= 1e-10,
        format!("max |kBTΣ - π/4| = {err:.1e}, profile spread {spread:.1e} (both <= 1e-10)"),
    );
}

#[test]
fn c06_metric_cross_validation() {
    let (cross, at) = metric_consistency(metric_polygamma, 20, 1e-11).unwrap();
    let mut ht: f64 = 0.0;
    for &(e, m) in &[(1e-4, 1e-3), (-3e-3, 2e-3), (0.0, 5e-3)] {
        ht = ht.max(metric_polygamma(e, m, 1.0).unwrap().rel_diff(&metric_high_t(m, 1.0).unwrap()));
    }
    let mut zt: f64 = 0.0;
    for &(e, m) in &[(300.0, 200.0), (-400.0, 300.0), (50.0, 800.0)] {
        zt = zt.max(metric_polygamma(e, m, 1.0).unwrap().rel_diff(&metric_zero_t(e, m).unwrap()));
    }
    let mut scaling: f64 = 0.0;
    for &(e, m, b) in &[(0.7, 0.3, 1.0), (-5.0, 0.02, 2.0), (30.0, 8.0, 0.25)] {
        let base = metric_polygamma(e, m, b).unwrap();
        for &l in &[1e-2, 0.5, 7.0, 300.0] {
            scaling = scaling.max(metric_polygamma(l * e, l * m, b / l).unwrap().scaled(l * l).rel_diff(&base));
        }
    }
    report(
        6,
        "metric cross-validation",
        cross <= 1e-6 && ht <= 1e-2 && zt <= 1e-2 && scaling <= 1e-10,
        format!(
            "polygamma vs quadrature {cross:.2e} (worst at {at:?}), HT {ht:.1e}, zero-T {zt:.1e}, scaling {scaling:.1e}"
        ),
    );
}

#[test]
fn c07_thermalization() {
    let omega = 1e6;
    let mut worst: f64 = 0.0;
    for &(e, m, b) in &[(1.0, 1.0, 1.0), (0.0, 0.5, 2.0), (-0.7, 0.2, 5.0)] {
        let pt = ControlPoint::new(e, m).unwrap();
        let (p_th, v_th) = (thermal_occupation(pt, b).unwrap(), thermal_interaction(pt, b, omega).unwrap());
        // g²t = 2μt = 40, once in closed form and once through the driven solver
        let (p, v) = frozen_relax(pt, &BathContext::new(b).with_omega_max(omega).with_p0(0.0), 20.0 / m).unwrap();
        worst = worst.max((p - p_th).abs()).max((v - v_th).abs());
        let proto = Protocol::sampled(20.0 / m, b, vec![0.0, 1.0], vec![e, e], vec![m, m]).unwrap();
        let o = exact_observables(&proto, &BathContext::new(b).with_omega_max(omega).with_p0(1.0), &[1.0]).unwrap();
        worst = worst.max((o.p[0] - p_th).abs()).max((o.v[0] - v_th).abs());
    }
    report(7, "thermalization", worst <= 1e-6, format!("max deviation from thermal p, v: {worst:.2e} (<= 1e-6)"));
}

#[test]
fn c08_slow_driving_consistency() {
    let beta = 1.0;
    let path = AnalyticPath::HtGeodesic { eps_star: 20.0, k: 1 };
    let base = Protocol::analytic(path, 1.0, beta, 1024).unwrap();
    let gamma = base.gamma();
    let mut resid = Vec::new();
    let mut df_err: f64 = 0.0;
    let mut notes = Vec::new();
    for tau_gamma in [50.0, 100.0] {
        let proto = base.with_tau(tau_gamma / gamma).unwrap();
        let exact = work_exact(&proto, &BathContext::new(beta)).unwrap();
        let geo = excess_work(&proto, beta, MetricMethod::Polygamma).unwrap();
        resid.push(exact.work - exact.delta_f - geo.sigma_kbt);
        df_err = df_err.max((exact.delta_f - 2f64.ln() / beta).abs());
        notes.push(format!(
            "τΓ={tau_gamma}: W={:.9}, Σ_exact={:.6}, Σ_geo={:.6}, Ω-doubling {:.1e}",
            exact.work, exact.sigma_kbt, geo.sigma_kbt, exact.diagnostics.omega_doubling_rel
        ));
    }
    let ratio = resid[0] / resid[1];
    report(
        8,
        "slow-driving consistency",
        (3.2..=4.8).contains(&ratio) && df_err <= 1e-8,
        format!("residual ratio {ratio:.3} (4 ± 20%), |ΔF - ln2| = {df_err:.1e} (<= 1e-8); {}", notes.join("; ")),
    );
}

#[test]
fn c09_geodesic_invariants() {
    let opts = ShootOptions::default();
    let mut speed: f64 = 0.0;
    for &t in &[0.01, 0.5, 3.0, 10.0, 21.0] {
        speed = speed.max(shoot(t, 1, 1.0, &opts).unwrap().solution.diagnostics.speed_variation);
    }
    let a = shoot(21.0, 1, 1.0, &opts).unwrap().solution.protocol;
    let b_shot = shoot(21.0, 2, 1.0, &opts).unwrap();
    speed = speed.max(b_shot.solution.diagnostics.speed_variation);
    let b = b_shot.solution.protocol;
    let sup = (0..=2000)
        .map(|i| {
            let t = i as f64 / 2000.0;
            let (x, y) = (a.sample(t), b.sample(t));
            (x.eps - y.eps).abs().max((x.mu - y.mu).abs())
        })
        .fold(0.0, f64::max);
    report(
        9,
        "geodesic invariants",
        speed <= 1e-4 && sup <= 1e-3,
        format!("max speed variation {speed:.2e} (<= 1e-4), k=1 vs k=2 sup distance {sup:.2e} (<= 1e-3)"),
    );
}

#[test]
fn c10_property_suite() {
    let v = run_suite(false);
    let failed: Vec<String> =
        v.checks.iter().filter(|c| !c.passed).map(|c| format!("{} ({}: {})", c.name, c.observed, c.detail)).collect();
    report(
        10,
        "property suite",
        failed.is_empty() && v.seconds < 300.0,
        format!("{} checks in {:.1} s, failures: {:?}", v.checks.len(), v.seconds, failed),
    );
}
