//! Invariant suite behind `landauer-geo validate`.
//!
//! Every check records the observed worst deviation next to its tolerance.
//! `strict` tightens the numerical settings; the tolerances stay the same.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::control::{AnalyticPath, ControlPoint, Protocol, RadialProfile};
use crate::dynamics::{
    exact_observables, frozen_relax, propagator, thermal_interaction, thermal_occupation, BathContext,
};
use crate::error::Result;
use crate::geodesic::{christoffel, from_derivatives, shoot, zero_t_geodesic, ShootOptions};
use crate::geometry::{
    excess_work, metric_high_t, metric_polygamma, metric_quadrature_with, metric_zero_t, weak_integrand, MetricMethod,
    MetricTensor,
};
use crate::protocols::{l2, plan};
use crate::special::{fermi, polygamma_all, QuadratureSpec};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    /// computation the observed value comes from
    pub method: &'static str,
    pub passed: bool,
    /// worst observed deviation in the units of `tolerance`
    pub observed: f64,
    pub tolerance: f64,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub strict: bool,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Outcome {
    observed: f64,
    tolerance: f64,
    detail: String,
}

fn outcome(observed: f64, tolerance: f64, detail: impl Into<String>) -> Outcome {
    Outcome { observed, tolerance, detail: detail.into() }
}

fn run_check(name: &str, method: &'static str, f: impl FnOnce() -> Result<Outcome>) -> Check {
    let start = Instant::now();
    let (passed, observed, tolerance, detail) = match f() {
        // NaN never passes
        Ok(o) => (o.observed <= o.tolerance, o.observed, o.tolerance, o.detail),
        Err(e) => (false, f64::NAN, f64::NAN, format!("error: {e}")),
    };
    log::info!("{name}: {} (observed {observed:.3e}, tolerance {tolerance:.1e})", if passed { "pass" } else { "FAIL" });
    Check {
        name: name.to_string(),
        method,
        passed,
        observed,
        tolerance,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

/// Worst relative Frobenius distance between `candidate` and the quadrature
/// metric on an n×n log grid of (βε, βμ) ∈ [1e-3, 1e3]², at β = 1.
pub fn metric_consistency(
    candidate: impl Fn(f64, f64, f64) -> Result<MetricTensor>,
    n: usize,
    quad_tol: f64,
) -> Result<(f64, (f64, f64))> {
    let spec = QuadratureSpec::default().with_tol(quad_tol, 0.0);
    let mut worst = (0.0, (0.0, 0.0));
    for &e in &log_grid(1e-3, 1e3, n) {
        for &m in &log_grid(1e-3, 1e3, n) {
            let a = candidate(e, m, 1.0)?;
            let b = metric_quadrature_with(e, m, 1.0, &spec)?;
            let d = a.rel_diff(&b);
            if !(d <= worst.0) {
                worst = (d, (e, m));
            }
        }
    }
    Ok(worst)
}

fn fermi_symmetry() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for i in -400..=400 {
        let x = i as f64 * 0.1;
        worst = worst.max((fermi(x) + fermi(-x) - 1.0).abs());
    }
    Ok(outcome(worst, 1e-15, "f(x) + f(-x) = 1 on [-40, 40]"))
}

fn polygamma_recurrence() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for &re in &[0.05, 0.5, 1.3, 4.0, 9.5, 30.0] {
        for &im in &[-200.0, -7.0, -0.3, 0.0, 2.0, 55.0] {
            let w = Complex64::new(re, im);
            let a = polygamma_all(w)?;
            let b = polygamma_all(w + 1.0)?;
            let mut fact = 1.0;
            for m in 0..4 {
                if m > 0 {
                    fact *= m as f64;
                }
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                // ψ^(m)(w+1) = ψ^(m)(w) + (-1)^m m! / w^{m+1}
                let step = w.powi(-(m as i32 + 1)) * (sign * fact);
                let rel = (b[m] - a[m] - step).norm() / b[m].norm().max(step.norm()).max(a[m].norm());
                worst = worst.max(rel);
            }
        }
    }
    Ok(outcome(worst, 1e-12, "ψ^(m)(w+1) - ψ^(m)(w) = (-1)^m m!/w^{m+1}, m = 0..3"))
}

fn metric_cross(strict: bool) -> Result<Outcome> {
    let (n, tol) = if strict { (20, 1e-12) } else { (8, 1e-11) };
    let (d, at) = metric_consistency(metric_polygamma, n, tol)?;
    Ok(outcome(d, 1e-6, format!("{n}x{n} grid, worst at (βε, βμ) = ({:.3e}, {:.3e})", at.0, at.1)))
}

fn metric_scaling() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for &(e, m, b) in &[(0.3, 0.7, 1.0), (-2.0, 0.05, 3.0), (40.0, 2.0, 0.5), (0.0, 1e-3, 1.0)] {
        let base = metric_polygamma(e, m, b)?;
        for &l in &[0.1, 3.0, 50.0] {
            let s = metric_polygamma(l * e, l * m, b / l)?.scaled(l * l);
            worst = worst.max(s.rel_diff(&base));
        }
    }
    Ok(outcome(worst, 1e-10, "λ² m(λε, λμ, β/λ) = m(ε, μ, β)"))
}

fn metric_limits() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    // high temperature: β|λ| ≪ 1
    for &(e, m) in &[(1e-4, 1e-3), (-5e-4, 2e-3), (0.0, 1e-3)] {
        worst = worst.max(metric_polygamma(e, m, 1.0)?.rel_diff(&metric_high_t(m, 1.0)?));
    }
    // zero temperature: β|λ| ≫ 1
    for &(e, m) in &[(300.0, 200.0), (-500.0, 400.0), (10.0, 900.0)] {
        worst = worst.max(metric_polygamma(e, m, 1.0)?.rel_diff(&metric_zero_t(e, m)?));
    }
    Ok(outcome(worst, 1e-2, "high-T and zero-T limits"))
}

fn metric_positive() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for &e in &log_grid(1e-3, 1e3, 7) {
        for &m in &log_grid(1e-3, 1e3, 7) {
            for s in [1.0, -1.0] {
                let t = metric_polygamma(s * e, m, 1.0)?;
                let [lo, _] = t.eigenvalues();
                if !(lo > 0.0) {
                    worst = worst.max(1.0);
                }
                // ε → -ε flips only the off-diagonal
                let f = metric_polygamma(-s * e, m, 1.0)?;
                let mirrored = MetricTensor::new(f.m_ee, -f.m_em, f.m_mm);
                worst = worst.max(mirrored.rel_diff(&t));
            }
        }
    }
    Ok(outcome(worst, 1e-12, "positive definite; m(-ε) = reflected m(ε)"))
}

fn christoffel_fd() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for &(e, m) in &[(0.4, 0.9), (-1.5, 0.2), (3.0, 2.0), (0.05, 0.01), (12.0, 0.8)] {
        let g = christoffel(e, m, 1.0)?;
        let (he, hm) = (1e-5 * (1.0 + e.abs()), 1e-5 * m);
        let d = |a: MetricTensor, b: MetricTensor, h: f64| {
            let s = 0.5 / h;
            [[(a.m_ee - b.m_ee) * s, (a.m_em - b.m_em) * s], [(a.m_em - b.m_em) * s, (a.m_mm - b.m_mm) * s]]
        };
        let de = d(metric_polygamma(e + he, m, 1.0)?, metric_polygamma(e - he, m, 1.0)?, he);
        let dm = d(metric_polygamma(e, m + hm, 1.0)?, metric_polygamma(e, m - hm, 1.0)?, hm);
        let fd = from_derivatives(&metric_polygamma(e, m, 1.0)?, &[de, dm]);
        let scale = g.iter().flatten().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    worst = worst.max((g[i][j][k] - fd[i][j][k]).abs() / scale);
                }
            }
        }
    }
    Ok(outcome(worst, 1e-6, "analytic Γ against central differences of m"))
}

fn test_protocols() -> Result<Vec<Protocol>> {
    Ok(vec![
        Protocol::analytic(AnalyticPath::HtGeodesic { eps_star: 3.0, k: 1 }, 4.0, 1.0, 256)?,
        Protocol::analytic(AnalyticPath::WeakOptimal { beta: 1.0, mu_star: 0.3, eps_final: 5.0 }, 2.5, 1.0, 256)?,
        Protocol::sampled(1.5, 1.0, vec![0.0, 0.3, 0.6, 1.0], vec![-1.0, 0.5, 2.0, 4.0], vec![0.2, 0.8, 0.4, 0.1])?,
    ])
}

fn propagator_composition() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for p in test_protocols()? {
        for &(r, s, t) in &[(0.0, 0.3, 1.0), (0.1, 0.45, 0.8), (0.5, 0.5001, 0.9)] {
            let a = propagator(&p, s, t)? * propagator(&p, r, s)?;
            let b = propagator(&p, r, t)?;
            worst = worst.max((a - b).norm());
            if b.norm() > 1.0 + 1e-15 {
                worst = worst.max(1.0);
            }
        }
    }
    Ok(outcome(worst, 1e-10, "G(t,s)G(s,r) = G(t,r) and |G| <= 1"))
}

fn occupation_range() -> Result<Outcome> {
    let t: Vec<f64> = (0..=32).map(|i| i as f64 / 32.0).collect();
    let mut worst: f64 = 0.0;
    for p in test_protocols()? {
        for p0 in [0.0, 1.0] {
            let o = exact_observables(&p, &BathContext::new(1.0).with_p0(p0), &t)?;
            for &x in &o.p {
                worst = worst.max((-x).max(x - 1.0).max(0.0));
            }
        }
    }
    Ok(outcome(worst, 1e-9, "exact p(t) within [0, 1] from p0 = 0 and 1"))
}

fn cauchy_schwarz() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for p in test_protocols()? {
        let r = excess_work(&p, 1.0, MetricMethod::Polygamma)?;
        worst = worst.max((r.length * r.length - r.sigma_tau) / r.sigma_tau);
    }
    Ok(outcome(worst.max(0.0), 1e-10, "L² <= τ kBTΣ"))
}

fn protocol_round_trip() -> Result<Outcome> {
    let mut bad = 0.0;
    for p in test_protocols()? {
        let q = Protocol::from_json(&p.to_json())?;
        if q != p {
            bad = 1.0;
        }
        for i in 0..=97 {
            let t = i as f64 / 97.0;
            let (a, b) = (p.sample(t), q.sample(t));
            if a.eps.to_bits() != b.eps.to_bits() || a.mu.to_bits() != b.mu.to_bits() {
                bad = 1.0;
            }
        }
    }
    Ok(outcome(bad, 0.0, "write then read reproduces samples bit for bit"))
}

fn thermalization() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for &(e, m, b) in &[(1.0, 1.0, 1.0), (0.0, 0.5, 2.0), (-0.7, 0.2, 5.0)] {
        let pt = ControlPoint::new(e, m)?;
        // g²t = 2μt = 40
        let t = 20.0 / m;
        let w = 1e6;
        for p0 in [0.0, 1.0] {
            let (p, v) = frozen_relax(pt, &BathContext::new(b).with_omega_max(w).with_p0(p0), t)?;
            worst = worst.max((p - thermal_occupation(pt, b)?).abs());
            worst = worst.max((v - thermal_interaction(pt, b, w)?).abs());
        }
    }
    Ok(outcome(worst, 1e-6, "frozen relaxation at g²t = 40 against thermal p and v"))
}

fn zero_t_cost_check() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for r in [RadialProfile::Constant(1.0), RadialProfile::Linear(0.5, 3.0), RadialProfile::Bump(2.0, 0.7)] {
        let p = zero_t_geodesic(0.0, PI / 2.0, r, 1.0)?;
        let s = excess_work(&p, f64::INFINITY, MetricMethod::ZeroT)?;
        worst = worst.max((s.sigma_kbt - PI / 4.0).abs());
    }
    Ok(outcome(worst, 1e-10, "zero-T geodesic with Δφ = π/2, τ = 1 costs π/4"))
}

fn ht_law(strict: bool) -> Result<Outcome> {
    let target = 0.01;
    let mut o = ShootOptions::default();
    if strict {
        o.geodesic.rtol = 1e-13;
        o.geodesic.atol = 1e-13;
    }
    let shot = shoot(target, 1, 1.0, &o)?;
    let law = PI * target / 2.0;
    let rel = (shot.solution.sigma_tau - law).abs() / law;
    let reference = AnalyticPath::HtGeodesic { eps_star: target, k: 1 };
    let p = &shot.solution.protocol;
    let mut sup: f64 = 0.0;
    for i in 0..p.knots.len() {
        let s = reference.sample(p.knots[i]);
        sup = sup.max((p.eps[i] - s.eps).abs()).max((p.mu[i] - s.mu).abs());
    }
    let path = sup / (1e-3 * target);
    let speed = shot.solution.diagnostics.speed_variation / 1e-4;
    Ok(outcome(
        (rel / 1e-2).max(path).max(speed),
        1.0,
        format!("βε* = 0.01: Σ rel {rel:.2e} (1e-2), path sup {sup:.2e} (1e-5), speed variation x1e-4 {speed:.2e}"),
    ))
}

fn one_param_limits() -> Result<Outcome> {
    let weak = {
        let u = 0.01;
        let v = l2(u)?;
        (v * v * 8.0 * u / (PI * PI) - 1.0).abs() / 0.05
    };
    let strong = ((l2(100.0)? - PI.sqrt() / 2.0).abs() / (PI.sqrt() / 2.0)) / 0.02;
    let mut bound: f64 = 0.0;
    for &u in &log_grid(1e-2, 1e2, 9) {
        let pl = plan(u, 1.0, 1.0, 0)?;
        bound = bound.max((PI / 4.0 - 1e-6 - pl.sigma_tau_beta).max(0.0));
    }
    let mut flat: f64 = 0.0;
    let c0 = weak_integrand(0.0, 1.0);
    for i in 1..50 {
        flat = flat.max((weak_integrand(i as f64 / 50.0, 1.0) - c0).abs());
    }
    Ok(outcome(
        weak.max(strong).max(if bound > 0.0 { 2.0 } else { 0.0 }).max(flat / 1e-10),
        1.0,
        format!("weak {weak:.2e}, strong {strong:.2e} (in units of their tolerances), π/4 bound violation {bound:.1e}, ε_weak integrand spread {flat:.1e}"),
    ))
}

/// Runs every check; the slowest (geodesic shooting) takes a few seconds.
pub fn run_suite(strict: bool) -> ValidationReport {
    let start = Instant::now();
    let checks = vec![
        run_check("fermi_symmetry", "quadrature", fermi_symmetry),
        run_check("polygamma_recurrence", "polygamma", polygamma_recurrence),
        run_check("metric_polygamma_vs_quadrature", "quadrature", || metric_cross(strict)),
        run_check("metric_scaling_symmetry", "polygamma", metric_scaling),
        run_check("metric_limits", "polygamma", metric_limits),
        run_check("metric_positive_reflection", "polygamma", metric_positive),
        run_check("christoffel_vs_finite_difference", "polygamma", christoffel_fd),
        run_check("propagator_composition", "exact_dynamics", propagator_composition),
        run_check("occupation_in_unit_interval", "exact_dynamics", occupation_range),
        run_check("cauchy_schwarz", "polygamma", cauchy_schwarz),
        run_check("protocol_round_trip", "exact_dynamics", protocol_round_trip),
        run_check("thermalization", "exact_dynamics", thermalization),
        run_check("zero_t_cost", "zero_t", zero_t_cost_check),
        run_check("high_t_geodesic", "polygamma", || ht_law(strict)),
        run_check("one_param_limits", "polygamma", one_param_limits),
    ];
    ValidationReport { strict, checks, seconds: start.elapsed().as_secs_f64() }
}
