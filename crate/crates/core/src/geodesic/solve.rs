use std::cell::RefCell;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::christoffel::christoffel_with_limit;
use crate::control::{AnalyticPath, Protocol, RadialProfile};
use crate::error::{Error, Result};
use crate::geometry::metric_polygamma;
use crate::ode::{integrate, OdeOptions, OdeStats, Trajectory};

/// Position and normalized-time velocity along a geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeodesicState {
    pub eps: f64,
    pub mu: f64,
    pub deps: f64,
    pub dmu: f64,
}

impl GeodesicState {
    fn to_array(self) -> [f64; 4] {
        [self.eps, self.mu, self.deps, self.dmu]
    }

    fn from_array(y: [f64; 4]) -> Self {
        Self { eps: y[0], mu: y[1], deps: y[2], dmu: y[3] }
    }
}

/// Initial data for [`integrate_geodesic`]: a state at time `t0`, optionally
/// with the high-temperature solution it was taken from (used for t < t0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeodesicSeed {
    pub t0: f64,
    pub state: GeodesicState,
    pub ht_origin: Option<(f64, u32)>,
}

/// State of the high-temperature geodesic with parameters (ε*, k) at `t0`.
pub fn ht_seed(eps_star: f64, k: u32, t0: f64) -> Result<GeodesicSeed> {
    if !(t0 > 0.0) || !t0.is_finite() {
        return Err(Error::invalid(format!("seed time must be positive, got {t0}")));
    }
    if !(eps_star > 0.0) || k == 0 {
        return Err(Error::invalid("seed needs eps_star > 0 and k >= 1"));
    }
    let s = AnalyticPath::HtGeodesic { eps_star, k }.sample(t0);
    Ok(GeodesicSeed {
        t0,
        state: GeodesicState { eps: s.eps, mu: s.mu, deps: s.deps, dmu: s.dmu },
        ht_origin: Some((eps_star, k)),
    })
}

/// When to stop integrating.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum GeodesicStop {
    /// Integrate to t = 1 without reparametrization.
    TimeOne,
    /// Stop when μ falls to the floor (default 1e-8/β), then rescale time to [0, 1].
    MuFloor(Option<f64>),
    /// Stop when ε reaches the value, then rescale time to [0, 1].
    EpsTarget(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    ReachedTimeOne,
    MuFloor,
    Target,
    /// The path ran away to large |λ| (seed beyond the critical ε*).
    Escaped,
}

/// Integration settings.
#[derive(Debug, Clone, Copy)]
pub struct GeodesicOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Uniform knot panels of the output protocol.
    pub panels: usize,
    /// Physical duration stored in the output protocol.
    pub tau: f64,
    /// |λ| beyond which (in units of 1/β) the path counts as escaped.
    pub escape_radius: f64,
    /// Upper bound on the raw integration time.
    pub t_max: f64,
    /// Condition-number limit passed to the Christoffel evaluation.
    pub max_condition: f64,
}

impl Default for GeodesicOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-10, panels: 1024, tau: 1.0, escape_radius: 1e4, t_max: 4.0, max_condition: 1e20 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GeodesicDiagnostics {
    pub seed: GeodesicSeed,
    /// Raw time at which the stop condition fired.
    pub t_end_raw: f64,
    pub final_state: GeodesicState,
    pub beta_eps_final: f64,
    /// Upper bound on the dropped tail, Δφ²/π with Δφ the remaining angle.
    pub tail_bound: f64,
    /// max |s - s̄| / s̄ over interior knots
    pub speed_variation: f64,
    pub ode: OdeStats,
}

/// A solved geodesic, reparametrized to t ∈ [0, 1].
#[derive(Debug, Clone, Serialize)]
pub struct GeodesicSolution {
    #[serde(skip)]
    pub protocol: Protocol,
    pub beta: f64,
    pub length: f64,
    /// τ·kBTΣ = L², dimensionless
    pub sigma_tau: f64,
    pub sigma_kbt: f64,
    /// (t, λ̇ᵀ m λ̇) at interior knots
    pub speed_profile: Vec<(f64, f64)>,
    pub termination: Termination,
    pub diagnostics: GeodesicDiagnostics,
}

fn acceleration(y: &[f64; 4], beta: f64, max_condition: f64) -> Result<[f64; 2]> {
    let g = christoffel_with_limit(y[0], y[1], beta, max_condition)?;
    let v = [y[2], y[3]];
    let mut a = [0.0; 2];
    for (i, ai) in a.iter_mut().enumerate() {
        let mut s = 0.0;
        for j in 0..2 {
            for k in 0..2 {
                s += g[i][j][k] * v[j] * v[k];
            }
        }
        *ai = -s;
    }
    Ok(a)
}

fn speed(y: &[f64; 4], beta: f64) -> Result<f64> {
    Ok(metric_polygamma(y[0], y[1], beta)?.quadratic_form(y[2], y[3]))
}

/// Integrates λ̈ⁱ = -Γⁱ_jk λ̇ʲ λ̇ᵏ from the seed until the stop condition.
pub fn integrate_geodesic(
    seed: &GeodesicSeed,
    beta: f64,
    stop: GeodesicStop,
    opts: &GeodesicOptions,
) -> Result<GeodesicSolution> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::invalid("beta must be positive and finite"));
    }
    let floor = match stop {
        GeodesicStop::MuFloor(f) => f.unwrap_or(1e-8 / beta),
        _ => 0.0,
    };
    if !(seed.state.mu > floor) {
        return Err(Error::invalid(format!("seed mu = {} must exceed the floor {floor}", seed.state.mu)));
    }
    let escape = opts.escape_radius / beta;
    let fault: RefCell<Option<Error>> = RefCell::new(None);
    let rhs = |_t: f64, y: &[f64; 4], d: &mut [f64; 4]| {
        d[0] = y[2];
        d[1] = y[3];
        match acceleration(y, beta, opts.max_condition) {
            Ok([a, b]) => {
                d[2] = a;
                d[3] = b;
            }
            Err(e) => {
                // A trial stage outside the domain: make the step fail.
                if y[1] > floor * 0.5 || fault.borrow().is_none() {
                    fault.borrow_mut().get_or_insert(e);
                }
                d[2] = f64::NAN;
                d[3] = f64::NAN;
            }
        }
    };
    let event = |_t: f64, y: &[f64; 4]| -> f64 {
        let out = y[0].abs().max(y[1].abs()) - escape;
        let hit = match stop {
            GeodesicStop::MuFloor(_) => y[1] - floor,
            GeodesicStop::EpsTarget(x) => x - y[0],
            GeodesicStop::TimeOne => f64::INFINITY,
        };
        hit.min(-out)
    };
    let t_end = match stop {
        GeodesicStop::TimeOne => 1.0,
        _ => opts.t_max,
    };
    // small seeds live at small |λ|; an unscaled atol would swamp μ near the end
    let scale = match seed.ht_origin {
        Some((eps_star, _)) => beta * eps_star,
        None => beta * seed.state.deps.hypot(seed.state.dmu),
    };
    let ode = OdeOptions { rtol: opts.rtol, atol: opts.atol * scale.min(1.0), ..Default::default() };
    let s0 = speed(&seed.state.to_array(), beta)?;
    let tr: Trajectory<4> = match integrate(rhs, seed.t0, seed.state.to_array(), t_end, &[], ode, true, Some(event)) {
        Ok(t) => t,
        Err(e) => {
            if let Some(f) = fault.into_inner() {
                return Err(f);
            }
            return Err(e);
        }
    };
    let yf = tr.y_final;
    let escaped = yf[0].abs().max(yf[1].abs()) >= escape * (1.0 - 1e-12);
    let termination = if escaped {
        Termination::Escaped
    } else if tr.event {
        match stop {
            GeodesicStop::MuFloor(_) => Termination::MuFloor,
            GeodesicStop::EpsTarget(_) => Termination::Target,
            GeodesicStop::TimeOne => Termination::ReachedTimeOne,
        }
    } else if matches!(stop, GeodesicStop::TimeOne) {
        Termination::ReachedTimeOne
    } else {
        return Err(Error::Numerical(format!("geodesic did not reach its stop condition before t = {}", opts.t_max)));
    };
    let t_stop = tr.t_final;
    let rescale = if matches!(stop, GeodesicStop::TimeOne) { 1.0 } else { t_stop };

    let n = opts.panels.max(8);
    let mut knots = Vec::with_capacity(n + 1);
    let mut eps = Vec::with_capacity(n + 1);
    let mut mu = Vec::with_capacity(n + 1);
    let mut speed_profile = Vec::with_capacity(n);
    for i in 0..=n {
        let u = i as f64 / n as f64;
        let r = u * rescale;
        let y = if i == n {
            yf
        } else if r >= seed.t0 {
            tr.eval(r).unwrap_or(yf)
        } else if let Some((es, k)) = seed.ht_origin {
            let s = AnalyticPath::HtGeodesic { eps_star: es, k }.sample(r);
            [s.eps, s.mu, s.deps, s.dmu]
        } else {
            let w = r / seed.t0;
            let y0 = seed.state.to_array();
            [y0[0] * w, y0[1] * w, y0[2], y0[3]]
        };
        knots.push(u);
        eps.push(y[0]);
        mu.push(y[1].max(0.0));
        if i > 0 && i < n && y[1] > 0.0 {
            if let Ok(s) = speed(&y, beta) {
                speed_profile.push((u, s * rescale * rescale));
            }
        }
    }
    if let Some(m) = mu.last_mut() {
        if termination == Termination::MuFloor {
            *m = 0.0;
        }
    }
    if termination == Termination::MuFloor {
        mu[0] = 0.0;
        eps[0] = 0.0;
    }
    let protocol = Protocol::sampled(opts.tau, beta, knots, eps, mu)?;
    let mean = s0 * rescale * rescale;
    let speed_variation = speed_profile.iter().map(|&(_, s)| ((s - mean) / mean).abs()).fold(0.0, f64::max);
    let length = s0.sqrt() * rescale;
    let phi_left = yf[1].max(0.0).atan2(yf[0]);
    Ok(GeodesicSolution {
        protocol,
        beta,
        length,
        sigma_tau: length * length,
        sigma_kbt: length * length / opts.tau,
        speed_profile,
        termination,
        diagnostics: GeodesicDiagnostics {
            seed: *seed,
            t_end_raw: t_stop,
            final_state: GeodesicState::from_array(yf),
            beta_eps_final: beta * yf[0],
            tail_bound: phi_left * phi_left / PI,
            speed_variation,
            ode: tr.stats,
        },
    })
}

/// Outcome of [`shoot`].
#[derive(Debug, Clone, Serialize)]
pub struct ShotResult {
    pub eps_star: f64,
    pub k: u32,
    pub target: f64,
    pub achieved: f64,
    pub iterations: usize,
    pub solution: GeodesicSolution,
    /// (ε*, βε(1)) pairs evaluated while bracketing; escapes are +∞.
    pub scan: Vec<(f64, f64)>,
}

/// Settings for [`shoot`].
#[derive(Debug, Clone, Copy)]
pub struct ShootOptions {
    pub t0: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Seeds tried on each side of the bisection result when it stalls.
    pub ulp_walk: usize,
    pub geodesic: GeodesicOptions,
}

impl Default for ShootOptions {
    fn default() -> Self {
        // Near the critical seed βε(1) is so sensitive to ε* that adaptive-step
        // noise at 1e-10 exceeds the target tolerance; 1e-12 keeps the map monotone.
        let geodesic = GeodesicOptions { rtol: 1e-12, atol: 1e-12, ..GeodesicOptions::default() };
        Self { t0: 1e-3, rel_tol: 1e-6, max_iter: 200, ulp_walk: 0, geodesic }
    }
}

fn final_beta_eps(
    eps_star: f64,
    k: u32,
    beta: f64,
    target: f64,
    opts: &ShootOptions,
) -> Result<(f64, Option<GeodesicSolution>)> {
    // ε grows monotonically along these paths, so passing well beyond the
    // target already decides the comparison.
    let mut local = opts.geodesic;
    local.escape_radius = local.escape_radius.min(1.5 * target + 1.0);
    let seed = ht_seed(eps_star, k, opts.t0)?;
    match integrate_geodesic(&seed, beta, GeodesicStop::MuFloor(None), &local) {
        Ok(sol) if sol.termination == Termination::Escaped => Ok((f64::INFINITY, None)),
        Ok(sol) => Ok((sol.diagnostics.beta_eps_final, Some(sol))),
        Err(Error::NearSingularMetric { .. }) | Err(Error::OdeStepUnderflow { .. }) => Ok((f64::INFINITY, None)),
        Err(e) => Err(e),
    }
}

/// Finds ε* such that the k-seeded geodesic ends (μ → 0) at βε(1) = `target`.
pub fn shoot(target: f64, k: u32, beta: f64, opts: &ShootOptions) -> Result<ShotResult> {
    if !(target > 0.0 && target.is_finite()) {
        return Err(Error::invalid("shooting target must be positive"));
    }
    let mut scan = Vec::new();
    // ε* scales like k for a fixed endpoint: k-fold HT solutions retrace the k = 1 path.
    let mut lo = 0.0;
    let mut hi = (target / beta).min(4.0 / beta) * k as f64;
    let mut hi_sol = None;
    let mut lo_sol: Option<GeodesicSolution> = None;
    for _ in 0..80 {
        let (v, sol) = final_beta_eps(hi, k, beta, target, opts)?;
        scan.push((hi, v));
        if v >= target {
            hi_sol = sol;
            break;
        }
        lo = hi;
        lo_sol = sol;
        hi *= 1.25;
    }
    if scan.last().map(|s| s.1 < target).unwrap_or(true) {
        return Err(Error::Bracket(format!("no overshoot found; scan (eps*, beta*eps(1)) = {scan:?}")));
    }
    let mut best: Option<(f64, f64, GeodesicSolution)> = None;
    let consider = |best: &mut Option<(f64, f64, GeodesicSolution)>, es: f64, v: f64, sol: GeodesicSolution| {
        let d = (v - target).abs();
        if best.as_ref().map(|b| d < (b.1 - target).abs()).unwrap_or(true) {
            *best = Some((es, v, sol));
        }
    };
    if let Some(s) = hi_sol.take() {
        let v = s.diagnostics.beta_eps_final;
        consider(&mut best, hi, v, s);
    }
    if let Some(s) = lo_sol.take() {
        let v = s.diagnostics.beta_eps_final;
        consider(&mut best, lo, v, s);
    }
    let mut iterations = 0;
    while iterations < opts.max_iter {
        if let Some(b) = &best {
            if (b.1 - target).abs() <= opts.rel_tol * target {
                break;
            }
        }
        let mid = if lo > 0.0 { 0.5 * (lo + hi) } else { 0.5 * hi };
        if !(mid > lo && mid < hi) {
            break;
        }
        iterations += 1;
        let (v, sol) = final_beta_eps(mid, k, beta, target, opts)?;
        if v >= target {
            hi = mid;
        } else {
            lo = mid;
        }
        if let Some(s) = sol {
            consider(&mut best, mid, v, s);
        }
    }
    // Close to the critical seed one ulp of ε* moves βε(1) by about the
    // tolerance, so finish by walking neighbouring representable seeds.
    if let Some(b) = &best {
        if (b.1 - target).abs() > opts.rel_tol * target {
            let centre = b.0;
            for j in 1..=opts.ulp_walk as i64 {
                for dir in [-1i64, 1] {
                    let es = f64::from_bits((centre.to_bits() as i64 + dir * j) as u64);
                    iterations += 1;
                    let (v, sol) = final_beta_eps(es, k, beta, target, opts)?;
                    if let Some(s) = sol {
                        consider(&mut best, es, v, s);
                    }
                }
                if best.as_ref().map(|b| (b.1 - target).abs() <= opts.rel_tol * target).unwrap_or(false) {
                    break;
                }
            }
        }
    }
    let (eps_star, achieved, solution) =
        best.ok_or_else(|| Error::Bracket(format!("no converged geodesic near target; scan = {scan:?}")))?;
    if (achieved - target).abs() > 1e-3 * target {
        return Err(Error::Bracket(format!(
            "shooting stalled at beta*eps(1) = {achieved} for target {target} (eps* = {eps_star}); scan = {scan:?}"
        )));
    }
    Ok(ShotResult { eps_star, k, target, achieved, iterations, solution, scan })
}

/// Saturation estimate of the finite-time Landauer constant.
#[derive(Debug, Clone, Serialize)]
pub struct LandauerEstimate {
    pub a: f64,
    pub uncertainty: f64,
    /// (target, achieved βε(1), τ·kBTΣ, tail bound, ε*)
    pub per_target: Vec<(f64, f64, f64, f64, f64)>,
    pub saturating: bool,
    /// Relative change of the largest-target value when the seed time is halved.
    pub seed_time_delta: f64,
}

/// τ·kBTΣ of the optimal erasure geodesic for each target βε(1); the estimate
/// is the value at the largest target plus its tail bound, with the spread
/// across the two largest targets as uncertainty.
pub fn landauer_constant(targets: &[f64], beta: f64, opts: &ShootOptions) -> Result<LandauerEstimate> {
    if targets.len() < 2 || targets.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("need at least two strictly increasing targets"));
    }
    let last_target = targets[targets.len() - 1];
    let halved = ShootOptions { t0: 0.5 * opts.t0, ..*opts };
    let mut jobs: Vec<(f64, &ShootOptions)> = targets.iter().map(|&t| (t, opts)).collect();
    jobs.push((last_target, &halved));
    let mut shots: Vec<Result<ShotResult>> = jobs.par_iter().map(|&(t, o)| shoot(t, 1, beta, o)).collect();
    let half_shot = shots.pop().expect("halved job")?;
    let mut per_target = Vec::with_capacity(targets.len());
    for (t, s) in targets.iter().zip(shots) {
        let s = s?;
        per_target.push((*t, s.achieved, s.solution.sigma_tau, s.solution.diagnostics.tail_bound, s.eps_star));
    }
    let n = per_target.len();
    let last = per_target[n - 1];
    let prev = per_target[n - 2];
    let a = last.2 + last.3;
    let uncertainty = (last.2 - prev.2).abs();
    let seed_time_delta = ((half_shot.solution.sigma_tau - last.2) / last.2).abs();
    let saturating = uncertainty <= 1e-3 * a;
    Ok(LandauerEstimate { a, uncertainty, per_target, saturating, seed_time_delta })
}

/// Zero-temperature geodesic: φ linear between the angles, any radial profile.
pub fn zero_t_geodesic(phi_start: f64, phi_end: f64, r: RadialProfile, tau: f64) -> Result<Protocol> {
    Protocol::analytic(AnalyticPath::ZeroT { phi0: phi_start, phi1: phi_end, r }, tau, f64::INFINITY, 512)
}

/// kBTΣ = Δφ²/(πτ) for a zero-temperature geodesic.
pub fn zero_t_cost(phi_start: f64, phi_end: f64, tau: f64) -> f64 {
    (phi_end - phi_start).powi(2) / (PI * tau)
}
