//! Exact dynamics of the wide-band resonant level: propagator, occupation,
//! interaction energy, work, frozen relaxation and thermal values.
//!
//! Times passed to [`propagator`], [`noise_integral`] and the `*_exact`
//! functions are normalized, t ∈ [0, 1]; [`frozen_relax`] takes physical time.

mod panel;
mod tail;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::control::{ControlPoint, Protocol};
use crate::error::{Error, Result};
use crate::geometry::{quasistatic_work, quasistatic_work_regulated};
use crate::ode::{integrate_grid, OdeOptions};
use crate::special::{fermi, integrate_points, quad_fermi, quad_fermi_par, QuadratureSpec};

use panel::PanelPlan;

/// Bath temperature, regulator and initial occupation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BathContext {
    pub beta: f64,
    /// Ω_max for the interaction energy; a protocol-scaled default when `None`
    pub omega_max: Option<f64>,
    /// p(0); the Fermi occupation of ε(0) when `None`
    pub p0: Option<f64>,
}

/// Default regulator as a multiple of max(1/β, |ε|, μ).
pub const OMEGA_MAX_SCALE: f64 = 1e8;

impl BathContext {
    pub fn new(beta: f64) -> Self {
        Self { beta, omega_max: None, p0: None }
    }

    pub fn with_omega_max(mut self, omega_max: f64) -> Self {
        self.omega_max = Some(omega_max);
        self
    }

    pub fn with_p0(mut self, p0: f64) -> Self {
        self.p0 = Some(p0);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0) || self.beta.is_nan() {
            return Err(Error::invalid("beta must be positive"));
        }
        if let Some(w) = self.omega_max {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::invalid("omega_max must be positive and finite"));
            }
        }
        if let Some(p) = self.p0 {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid("p0 must lie in [0, 1]"));
            }
        }
        Ok(())
    }

    fn p0_for(&self, proto: &Protocol) -> f64 {
        self.p0.unwrap_or_else(|| fermi(self.beta * proto.start().eps))
    }

    fn omega_max_for(&self, proto: &Protocol) -> f64 {
        self.omega_max.unwrap_or_else(|| OMEGA_MAX_SCALE * energy_scale(proto, self.beta))
    }
}

fn energy_scale(proto: &Protocol, beta: f64) -> f64 {
    let mut s: f64 = if beta.is_finite() { 1.0 / beta } else { 0.0 };
    for i in 0..=256 {
        let p = proto.sample(i as f64 / 256.0);
        s = s.max(p.eps.abs()).max(p.mu);
    }
    s.max(f64::MIN_POSITIVE)
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err(Error::invalid("time samples must lie in [0, 1]"));
    }
    if t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("time samples must be non-decreasing"));
    }
    Ok(())
}

/// G(t, s) = exp[-τ∫_s^t (μ + iε) dr].
pub fn propagator(proto: &Protocol, s: f64, t: f64) -> Result<Complex64> {
    if !(0.0..=1.0).contains(&s) || !(0.0..=1.0).contains(&t) {
        return Err(Error::invalid("propagator times must lie in [0, 1]"));
    }
    if s > t {
        return Err(Error::invalid(format!("propagator needs s <= t, got s = {s}, t = {t}")));
    }
    if s == t {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut pts = vec![s];
    pts.extend(proto.knots.iter().copied().filter(|&k| k > s && k < t));
    pts.push(t);
    let spec = QuadratureSpec::default().with_tol(1e-13, 1e-16);
    let r = integrate_points(
        |r| {
            let p = proto.sample(r);
            [p.mu, p.eps]
        },
        &pts,
        &spec,
    )?;
    let [m, e] = r.value;
    Ok(Complex64::new(-proto.tau * m, -proto.tau * e).exp())
}

/// I(t, ω) on `t_grid` from dI/dt = τ[g - (μ + i(ε - ω))I], I(0) = 0, with
/// an adaptive eighth-order Runge–Kutta method.
pub fn noise_integral(proto: &Protocol, omega: f64, t_grid: &[f64]) -> Result<Vec<Complex64>> {
    check_grid(t_grid)?;
    let tau = proto.tau;
    let opts = OdeOptions { rtol: 1e-11, atol: 1e-13, ..OdeOptions::default() };
    let traj = integrate_grid(
        |t, y: &[f64; 2], dy: &mut [f64; 2]| {
            let p = proto.sample(t);
            let x = p.eps - omega;
            dy[0] = tau * (p.g - p.mu * y[0] + x * y[1]);
            dy[1] = tau * (-p.mu * y[1] - x * y[0]);
        },
        0.0,
        [0.0, 0.0],
        t_grid,
        opts,
    )?;
    Ok(traj.outputs.iter().map(|y| Complex64::new(y[0], y[1])).collect())
}

/// p(t) and v(t) from one frequency sweep.
#[derive(Debug, Clone, Serialize)]
pub struct ExactSamples {
    pub t: Vec<f64>,
    pub p: Vec<f64>,
    pub v: Vec<f64>,
    pub omega_max: f64,
    pub quad_error: f64,
    pub evaluations: usize,
    /// time panels of the exact per-frequency propagation
    pub time_panels: usize,
}

fn time_step_limit(proto: &Protocol) -> f64 {
    let tau = proto.tau;
    let (mut mu_max, mut rate_max) = (0.0f64, 0.0f64);
    for i in 0..=1024 {
        let p = proto.sample(i as f64 / 1024.0);
        mu_max = mu_max.max(p.mu);
        rate_max = rate_max.max(p.deps.abs());
    }
    let mut h: f64 = 1.0 / 1024.0;
    if mu_max > 0.0 {
        h = h.min(0.1 / (tau * mu_max));
    }
    if rate_max > 0.0 {
        h = h.min((0.1 / (tau * rate_max)).sqrt());
    }
    h.max(1e-6)
}

fn omega_points(proto: &Protocol, beta: f64) -> Vec<f64> {
    let mut pts = Vec::new();
    for i in 0..=32 {
        let p = proto.sample(i as f64 / 32.0);
        pts.push(p.eps);
        if p.mu > 0.0 {
            pts.push(p.eps - 4.0 * p.mu);
            pts.push(p.eps + 4.0 * p.mu);
        }
    }
    if beta.is_finite() {
        pts.extend([-4.0 / beta, 4.0 / beta]);
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * (1.0 + b.abs()));
    pts
}

/// Leading boundary terms of I(t, ω) at one end of the protocol,
/// A(s) = g/z - ġ/(τz²) + gż/(τz³) = Σ a_k (ω - w)^{-k} with w = ε - iμ.
#[derive(Clone, Copy)]
struct Boundary {
    w: Complex64,
    a: [Complex64; 3],
}

impl Boundary {
    fn at(proto: &Protocol, t: f64) -> Self {
        let s = proto.sample(t);
        let tau = proto.tau;
        let i = Complex64::new(0.0, 1.0);
        let zdot = Complex64::new(s.dmu, s.deps);
        Self { w: Complex64::new(s.eps, -s.mu), a: [i * s.g, Complex64::new(s.dg / tau, 0.0), -i * s.g * zdot / tau] }
    }

    fn eval(&self, omega: f64) -> Complex64 {
        let r = Complex64::new(1.0, 0.0) / (omega - self.w);
        r * (self.a[0] + r * (self.a[1] + r * self.a[2]))
    }
}

fn control_scale(proto: &Protocol) -> (f64, f64) {
    let (mut e, mut g): (f64, f64) = (0.0, 0.0);
    for i in 0..=256 {
        let p = proto.sample(i as f64 / 256.0);
        e = e.max(p.eps.abs()).max(p.mu);
        g = g.max(p.g);
    }
    (e, g)
}

/// Occupation and interaction energy at `t_grid` for the regulator `omega_max`.
///
/// Below -Ω_c the transient G(t,0)e^{iωτt}A(0) and its cross term with A(t)
/// are subtracted from the integrand and added back in closed form, so the
/// quadrature never has to follow the e^{iωτt} oscillation far out. Below
/// -Ω_r the boundary expansion A(t) - G(t,0)e^{iωτt}A(0) replaces the
/// propagated I, whose phase accumulates rounding at large |ω|.
pub fn exact_observables(proto: &Protocol, ctx: &BathContext, t_grid: &[f64]) -> Result<ExactSamples> {
    ctx.validate()?;
    proto.validate()?;
    check_grid(t_grid)?;
    let omega_max = ctx.omega_max_for(proto);
    let p0 = ctx.p0_for(proto);
    let plan = PanelPlan::new(proto, t_grid, time_step_limit(proto));
    let n = t_grid.len();
    let tau = proto.tau;
    let log_g = plan.log_propagator_at_outputs();
    let b0 = Boundary::at(proto, 0.0);
    let bt: Vec<Boundary> = t_grid.iter().map(|&t| Boundary::at(proto, t)).collect();
    let (e_ctrl, g_max) = control_scale(proto);
    let thermal = if ctx.beta.is_finite() { 1.0 / ctx.beta } else { 0.0 };
    let omega_c = (8.0 * e_ctrl).max(40.0 * thermal).max(1.0);
    let omega_r = omega_c.max(1e4 * e_ctrl.max(thermal));
    let far = omega_c < omega_max;
    // v carries g ln Ω; rescaling keeps the shared error test meaningful for p
    let v_scale = 1.0 / (1.0 + g_max * (omega_max / omega_c).max(1.0).ln() / PI);
    let spec = QuadratureSpec::default().with_tol(1e-10, 1e-14).with_cutoff(omega_max);
    let mut pts = omega_points(proto, ctx.beta);
    if far {
        pts.push(-omega_c);
        if omega_r < omega_max {
            pts.push(-omega_r);
        }
    }
    let r = quad_fermi_par(
        |w| {
            let mut out = vec![0.0; 2 * n];
            let in_far = far && w < -omega_c;
            let panels = if w < -omega_r { None } else { Some(plan.noise_integral(w)) };
            let a0 = b0.eval(w);
            for j in 0..n {
                let tr = if in_far {
                    (log_g[j] + Complex64::new(0.0, w * tau * t_grid[j])).exp() * a0
                } else {
                    Complex64::new(0.0, 0.0)
                };
                let at = if in_far { bt[j].eval(w) } else { Complex64::new(0.0, 0.0) };
                let i = match &panels {
                    Some(v) => v[j],
                    None => at - tr,
                };
                let (mut pj, mut vj) = (i.norm_sqr(), i.im);
                if in_far {
                    pj += 2.0 * (at * tr.conj()).re;
                    vj += tr.im;
                }
                out[j] = pj;
                out[n + j] = vj * v_scale;
            }
            out
        },
        ctx.beta,
        &pts,
        &spec,
    )?;
    let mut p = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    for (j, &t) in t_grid.iter().enumerate() {
        let g = log_g[j].exp();
        let big_t = tau * t;
        let (mut p_add, mut v_add) = (0.0, 0.0);
        if far {
            let (a, b) = (-omega_max, -omega_c);
            let mut cross = Complex64::new(0.0, 0.0);
            for (jj, at) in bt[j].a.iter().enumerate() {
                for (kk, a0) in b0.a.iter().enumerate() {
                    if at.norm() == 0.0 || a0.norm() == 0.0 {
                        continue;
                    }
                    cross += at * a0.conj() * tail::pair_integral(jj + 1, kk + 1, -big_t, bt[j].w, b0.w.conj(), a, b);
                }
            }
            p_add = -2.0 * (g.conj() * cross).re;
            let mut lin = Complex64::new(0.0, 0.0);
            for (kk, a0) in b0.a.iter().enumerate() {
                if a0.norm() != 0.0 {
                    lin += a0 * tail::pole_integral(kk + 1, big_t, b0.w, a, b);
                }
            }
            v_add = (-g * lin).im;
        }
        let s = proto.sample(t);
        let g0 = b0.a[0].norm();
        // |I|² ≈ (g² + |G|²g₀² - 2gg₀ Re[G* e^{-iωT}])/ω² below the cutoff
        let edge = omega_max + s.eps.abs();
        let cross = 2.0 * s.g * g0 * (g.conj() * tail::inverse_square_tail(big_t, edge)).re;
        let tail = ((s.g * s.g + g.norm_sqr() * g0 * g0) / edge - cross) / (2.0 * PI);
        let mut pj = g.norm_sqr() * p0 + (r.value[j] + p_add) / (2.0 * PI) + tail;
        if pj < 0.0 && pj > -1e-9 {
            pj = 0.0;
        }
        if pj > 1.0 && pj < 1.0 + 1e-9 {
            pj = 1.0;
        }
        p.push(pj);
        v.push((r.value[n + j] / v_scale + v_add) / PI);
    }
    Ok(ExactSamples {
        t: t_grid.to_vec(),
        p,
        v,
        omega_max,
        quad_error: r.abs_error,
        evaluations: r.evaluations,
        time_panels: plan.panels(),
    })
}

/// p(t) = |G(t,0)|² p0 + (1/2π)∫ f|I|² dω.
pub fn occupation_exact(proto: &Protocol, ctx: &BathContext, t_grid: &[f64]) -> Result<Vec<f64>> {
    Ok(exact_observables(proto, ctx, t_grid)?.p)
}

/// v(t) = (1/π) Im ∫_{-Ω_max}^∞ f I dω. The regulator must be given.
pub fn interaction_exact(proto: &Protocol, ctx: &BathContext, t_grid: &[f64]) -> Result<Vec<f64>> {
    if ctx.omega_max.is_none() {
        return Err(Error::invalid(
            "the interaction energy diverges logarithmically: set omega_max in the bath context",
        ));
    }
    Ok(exact_observables(proto, ctx, t_grid)?.v)
}

fn require_mu(pt: ControlPoint) -> Result<()> {
    if !(pt.mu > 0.0) {
        return Err(Error::Singular(format!("mu = {} leaves no relaxation channel", pt.mu)));
    }
    Ok(())
}

fn lorentz_points(pt: ControlPoint) -> Vec<f64> {
    let mut pts = vec![pt.eps];
    for k in [0.25, 1.0, 4.0, 16.0] {
        pts.push(pt.eps - k * pt.mu);
        pts.push(pt.eps + k * pt.mu);
    }
    pts
}

/// Equilibrium occupation (1/π)∫ f μ/(μ² + (ω-ε)²) dω.
pub fn thermal_occupation(pt: ControlPoint, beta: f64) -> Result<f64> {
    require_mu(pt)?;
    let mu = pt.mu;
    let spec = QuadratureSpec::default().with_tol(1e-12, 1e-15);
    let r = quad_fermi(|w| mu / (mu * mu + (w - pt.eps).powi(2)), beta, &lorentz_points(pt), &spec)?;
    Ok(r.value / PI)
}

/// Equilibrium interaction energy (g/π)∫_{-Ω}^∞ f (ω-ε)/(μ² + (ω-ε)²) dω.
pub fn thermal_interaction(pt: ControlPoint, beta: f64, omega_max: f64) -> Result<f64> {
    require_mu(pt)?;
    let mu = pt.mu;
    let spec = QuadratureSpec::default().with_tol(1e-12, 1e-15).with_cutoff(omega_max);
    let r = quad_fermi(
        |w| {
            let x = w - pt.eps;
            x / (mu * mu + x * x)
        },
        beta,
        &lorentz_points(pt),
        &spec,
    )?;
    Ok(pt.g() * r.value / PI)
}

/// (p, v) after physical time `t` at frozen controls, from the finite-time
/// frequency integrals with g² = 2μ. Far below the Fermi level the
/// oscillating e^{i(ω-ε)t} terms are integrated in closed form.
pub fn frozen_relax(pt: ControlPoint, ctx: &BathContext, t: f64) -> Result<(f64, f64)> {
    ctx.validate()?;
    require_mu(pt)?;
    if !(t >= 0.0) {
        return Err(Error::invalid("relaxation time must be >= 0"));
    }
    let omega_max = ctx.omega_max.ok_or_else(|| Error::invalid("frozen_relax needs omega_max for v(t)"))?;
    let p0 = ctx.p0.unwrap_or_else(|| fermi(ctx.beta * pt.eps));
    let (eps, mu) = (pt.eps, pt.mu);
    let e1 = (-mu * t).exp();
    let mut omega_c = 8.0 * (eps.abs() + mu);
    if ctx.beta.is_finite() {
        omega_c = omega_c.max(40.0 / ctx.beta);
    }
    let far = omega_c < omega_max;
    let mut pts = lorentz_points(pt);
    if far {
        pts.push(-omega_c);
    }
    let spec = QuadratureSpec::default().with_tol(1e-12, 1e-15).with_cutoff(omega_max);
    let r = quad_fermi(
        |w| {
            let x = w - eps;
            let d = mu * mu + x * x;
            if far && w < -omega_c {
                return [(1.0 + e1 * e1) / d, x / d];
            }
            let (s, c) = (x * t).sin_cos();
            [(1.0 - 2.0 * e1 * c + e1 * e1) / d, (x * (1.0 - e1 * c) - mu * e1 * s) / d]
        },
        ctx.beta,
        &pts,
        &spec,
    )?;
    let [mut a, mut b] = r.value;
    if far {
        let (lo, hi) = (-omega_max, -omega_c);
        let phase = Complex64::new(0.0, -eps * t).exp();
        let up = Complex64::new(eps, mu);
        let down = Complex64::new(eps, -mu);
        // ∫ cos(xt)/(μ² + x²) and ∫ (x cos + μ sin)/(μ² + x²) over the far range
        let cos_part = (phase * tail::pair_integral(1, 1, t, up, down, lo, hi)).re;
        let mixed = (phase * tail::pole_integral(1, t, down, lo, hi)).re;
        a -= 2.0 * e1 * cos_part;
        b -= e1 * mixed;
    }
    // p converges without the cutoff: restore the non-oscillating part below -Ω
    a += (1.0 + e1 * e1) * (0.5 * PI - ((omega_max + eps) / mu).atan()) / mu;
    Ok((p0 * e1 * e1 + mu * a / PI, pt.g() * b / PI))
}

/// ṗ = -τ·2μ(t)[p - f(βε(t))], the weak-coupling rate equation.
pub fn weak_relaxation(proto: &Protocol, ctx: &BathContext, t_grid: &[f64]) -> Result<Vec<f64>> {
    ctx.validate()?;
    check_grid(t_grid)?;
    let tau = proto.tau;
    let beta = ctx.beta;
    let p0 = ctx.p0_for(proto);
    let opts = OdeOptions { rtol: 1e-11, atol: 1e-13, ..OdeOptions::default() };
    let traj = integrate_grid(
        |t, y: &[f64; 1], dy: &mut [f64; 1]| {
            let s = proto.sample(t);
            dy[0] = -tau * 2.0 * s.mu * (y[0] - fermi(beta * s.eps));
        },
        0.0,
        [p0],
        t_grid,
        opts,
    )?;
    Ok(traj.outputs.iter().map(|y| y[0]).collect())
}

/// Accuracy record of [`work_exact`].
#[derive(Debug, Clone, Serialize)]
pub struct WorkDiagnostics {
    pub method: &'static str,
    pub simpson_panels: usize,
    /// |S(n) - S(n/2)| / |S(n)| at acceptance
    pub simpson_rel_change: f64,
    pub omega_max: f64,
    /// |W(2Ω) - W(Ω)| / |W|
    pub omega_doubling_rel: f64,
    /// Some(pass) when both boundary couplings vanish
    pub omega_independent: Option<bool>,
    pub quad_error: f64,
    pub evaluations: usize,
    pub time_panels: usize,
    pub p_in_range: bool,
}

/// Exact work and entropy production of a protocol.
#[derive(Debug, Clone, Serialize)]
pub struct DynamicsResult {
    pub t: Vec<f64>,
    pub p: Vec<f64>,
    pub v: Vec<f64>,
    pub work: f64,
    pub delta_f: f64,
    /// W - ΔF
    pub sigma_kbt: f64,
    pub diagnostics: WorkDiagnostics,
}

fn simpson(y: &[f64], stride: usize) -> f64 {
    let n = (y.len() - 1) / stride;
    let h = 1.0 / n as f64;
    let mut s = y[0] + y[n * stride];
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * y[i * stride];
    }
    s * h / 3.0
}

fn interleave(even: &[f64], odd: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(even.len() + odd.len());
    for (i, &e) in even.iter().enumerate() {
        out.push(e);
        if let Some(&o) = odd.get(i) {
            out.push(o);
        }
    }
    out
}

const MAX_WORK_PANELS: usize = 16384;

/// W = ∫₀¹ (ε̇ p + ġ v) dt by composite Simpson on a uniform grid, refined
/// until successive panel doublings agree to 1e-7 relative.
pub fn work_exact(proto: &Protocol, ctx: &BathContext) -> Result<DynamicsResult> {
    ctx.validate()?;
    proto.validate()?;
    let omega_max = ctx.omega_max_for(proto);
    let ctx = BathContext { omega_max: Some(omega_max), ..*ctx };
    let mut n = 2048;
    let mut t: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let first = exact_observables(proto, &ctx, &t)?;
    let (mut p, mut v) = (first.p, first.v);
    let (mut quad_error, mut evaluations, mut time_panels) = (first.quad_error, first.evaluations, first.time_panels);
    loop {
        let rates: Vec<(f64, f64)> = t
            .iter()
            .map(|&r| {
                let s = proto.sample(r);
                (s.deps, s.dg)
            })
            .collect();
        let f: Vec<f64> = rates.iter().zip(p.iter().zip(&v)).map(|(r, (p, v))| r.0 * p + r.1 * v).collect();
        let w = simpson(&f, 1);
        let w_half = simpson(&f, 2);
        let w_quarter = simpson(&f, 4);
        let scale = w.abs().max(1e-12);
        let change = (w - w_half).abs() / scale;
        let prev_change = (w_half - w_quarter).abs() / scale;
        log::debug!("work: n = {n}, W = {w:.12e}, changes {prev_change:.2e} {change:.2e}");
        if change >= 1e-7 && n < MAX_WORK_PANELS {
            // only the new midpoints need a frequency sweep
            n *= 2;
            let mid: Vec<f64> = (0..n / 2).map(|i| (2 * i + 1) as f64 / n as f64).collect();
            let obs = exact_observables(proto, &ctx, &mid)?;
            quad_error = quad_error.max(obs.quad_error);
            evaluations += obs.evaluations;
            time_panels = time_panels.max(obs.time_panels);
            t = (0..=n).map(|i| i as f64 / n as f64).collect();
            p = interleave(&p, &obs.p);
            v = interleave(&v, &obs.v);
            continue;
        }
        if change >= 1e-7 {
            log::warn!("work quadrature stopped at {n} panels with relative change {change:.2e}");
        }
        // regulator doubling: only v moves, by the piece over (-2Ω, -Ω)
        let dv = extra_interaction(proto, &t, omega_max)?;
        let dw_vals: Vec<f64> = rates.iter().zip(&dv).map(|(r, d)| r.1 * d).collect();
        let dw = simpson(&dw_vals, 1);
        let start = proto.start();
        let end = proto.end();
        let delta_f = match quasistatic_work(proto, ctx.beta) {
            Ok(v) => v,
            Err(Error::InvalidInput(_)) => quasistatic_work_regulated(proto, ctx.beta, omega_max)?,
            Err(e) => return Err(e),
        };
        let doubling = dw.abs() / scale;
        let tiny = 1e-12 * energy_scale(proto, ctx.beta);
        let omega_independent = (start.mu <= tiny && end.mu <= tiny).then_some(doubling < 1e-6);
        if omega_independent == Some(false) {
            log::info!("work changes by {doubling:.2e} relative under regulator doubling");
        }
        let p_in_range = p.iter().all(|&p| (-1e-9..=1.0 + 1e-9).contains(&p));
        return Ok(DynamicsResult {
            t,
            p,
            v,
            work: w,
            delta_f,
            sigma_kbt: w - delta_f,
            diagnostics: WorkDiagnostics {
                method: "exact_dynamics",
                simpson_panels: n,
                simpson_rel_change: change,
                omega_max,
                omega_doubling_rel: doubling,
                omega_independent,
                quad_error,
                evaluations,
                time_panels,
                p_in_range,
            },
        });
    }
}

/// (1/π) Im ∫_{-2Ω}^{-Ω} I dω, with f = 1 that deep below the Fermi level.
/// There I = A(t) - G(t,0)e^{iωτt}A(0) up to O(ω⁻⁴), integrated in closed form.
fn extra_interaction(proto: &Protocol, t: &[f64], omega_max: f64) -> Result<Vec<f64>> {
    let plan = PanelPlan::new(proto, t, time_step_limit(proto));
    let log_g = plan.log_propagator_at_outputs();
    let (a, b) = (-2.0 * omega_max, -omega_max);
    let b0 = Boundary::at(proto, 0.0);
    Ok(t.iter()
        .zip(&log_g)
        .map(|(&tj, lg)| {
            let bt = Boundary::at(proto, tj);
            let mut i = Complex64::new(0.0, 0.0);
            for (k, c) in bt.a.iter().enumerate() {
                i += c * power_integral(k + 1, bt.w, a, b);
            }
            let mut tr = Complex64::new(0.0, 0.0);
            for (k, c) in b0.a.iter().enumerate() {
                if c.norm() != 0.0 {
                    tr += c * tail::pole_integral(k + 1, proto.tau * tj, b0.w, a, b);
                }
            }
            (i - lg.exp() * tr).im / PI
        })
        .collect())
}

/// ∫_a^b (ω - w)^{-k} dω for w off [a, b].
fn power_integral(k: usize, w: Complex64, a: f64, b: f64) -> Complex64 {
    let (za, zb) = (a - w, b - w);
    if k == 1 {
        zb.ln() - za.ln()
    } else {
        let e = 1 - k as i32;
        (zb.powi(e) - za.powi(e)) / e as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::AnalyticPath;

    #[test]
    fn panels_agree_with_runge_kutta() {
        let path = AnalyticPath::WeakOptimal { beta: 1.0, mu_star: 0.4, eps_final: 6.0 };
        let proto = Protocol::analytic(path, 3.0, 1.0, 512).unwrap();
        let t = [0.0, 0.1, 0.37, 0.8, 1.0];
        let plan = PanelPlan::new(&proto, &t, time_step_limit(&proto));
        for &w in &[-40.0, -3.0, 0.2, 1.1, 25.0] {
            let a = noise_integral(&proto, w, &t).unwrap();
            let b = plan.noise_integral(w);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).norm() < 1e-9, "omega {w}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn doubling_piece_matches_quadrature() {
        let path = AnalyticPath::WeakOptimal { beta: 1.0, mu_star: 0.3, eps_final: 3.0 };
        let proto = Protocol::analytic(path, 2.0, 1.0, 512).unwrap();
        let t = [0.0, 0.3, 1.0];
        let omega = 300.0;
        let plan = PanelPlan::new(&proto, &t, time_step_limit(&proto));
        let pts: Vec<f64> = (0..=256).map(|i| -2.0 * omega + omega * i as f64 / 256.0).collect();
        let spec = QuadratureSpec::default().with_tol(1e-12, 1e-15);
        let r =
            integrate_points(|w| plan.noise_integral(w).iter().map(|c| c.im / PI).collect::<Vec<f64>>(), &pts, &spec)
                .unwrap();
        let closed = extra_interaction(&proto, &t, omega).unwrap();
        for (x, y) in r.value.iter().zip(&closed) {
            assert!((x - y).abs() < 1e-8, "{x} vs {y}");
        }
    }

    #[test]
    fn ht_panels_agree_with_runge_kutta() {
        let proto = Protocol::analytic(AnalyticPath::HtGeodesic { eps_star: 20.0, k: 1 }, 7.85, 1.0, 512).unwrap();
        let t = [0.05, 0.5, 0.99, 1.0];
        let plan = PanelPlan::new(&proto, &t, time_step_limit(&proto));
        for &w in &[-100.0, 0.0, 10.0, 19.0] {
            let a = noise_integral(&proto, w, &t).unwrap();
            let b = plan.noise_integral(w);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).norm() < 1e-9, "omega {w}: {x} vs {y}");
            }
        }
    }
}
