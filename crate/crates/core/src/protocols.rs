//! Sequential one-parameter erasure: turn the coupling on at ε = 0, raise ε
//! at fixed coupling, then switch the coupling off at large ε.
//!
//! Each step is a one-dimensional geodesic, so its length is a plain integral
//! of √m along the varied coordinate. All lengths depend on u = βμ* only.

use std::f64::consts::PI;

use serde::Serialize;

use crate::control::{AnalyticPath, Protocol, RadialProfile};
use crate::error::{Error, Result};
use crate::geometry::metric_polygamma;
use crate::special::{integrate_points, QuadratureSpec};

fn check_u(u: f64) -> Result<()> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::invalid(format!("u = beta*mu* must be positive and finite, got {u}")));
    }
    Ok(())
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default().with_tol(1e-11, 1e-15)
}

/// √m_μμ(0, μ) at β = 1, written in s = √μ so the μ^{-1/2} endpoint is regular.
fn step1_density_s(s: f64) -> f64 {
    if s == 0.0 {
        // m_μμ → 1/(8μ), so 2s√m → 1/√2
        return std::f64::consts::FRAC_1_SQRT_2;
    }
    let m = metric_polygamma(0.0, s * s, 1.0).map(|m| m.m_mm).unwrap_or(f64::NAN);
    2.0 * s * m.sqrt()
}

/// √m_εε(ε, u) at β = 1.
fn step2_density(eps: f64, u: f64) -> f64 {
    metric_polygamma(eps, u, 1.0).map(|m| m.m_ee.max(0.0).sqrt()).unwrap_or(f64::NAN)
}

fn geometric_points(lo: f64, hi: f64, anchors: &[f64]) -> Vec<f64> {
    let mut p = vec![lo, hi];
    p.extend(anchors.iter().copied().filter(|&a| a > lo && a < hi));
    p.sort_by(f64::total_cmp);
    p.dedup();
    p
}

/// Length of step 1, ∫₀^{μ*} √m_μμ(0, μ) dμ, as a function of u = βμ*.
pub fn l1(u: f64) -> Result<f64> {
    check_u(u)?;
    l1_partial(u.sqrt())
}

fn l1_partial(s_end: f64) -> Result<f64> {
    if s_end == 0.0 {
        return Ok(0.0);
    }
    let pts = geometric_points(0.0, s_end, &[0.1, 0.3, 1.0, 3.0, 10.0]);
    let r = integrate_points(step1_density_s, &pts, &spec())?;
    Ok(r.value)
}

/// Result of [`l2_detailed`]: the value and how the infinite range was closed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L2Result {
    pub value: f64,
    /// ε (in units of 1/β) where numerical integration stops
    pub cutoff: f64,
    /// zero-temperature tail (1/√π) atan(u/E) added beyond the cutoff
    pub tail: f64,
    /// bound on the tail's deviation from the zero-temperature form
    pub truncation_error: f64,
    pub quad_error: f64,
}

/// Cutoff where the integrand has fallen below 1e-14 (zero-temperature decay u/(√π ε²)).
fn l2_cutoff(u: f64) -> f64 {
    (u / (PI.sqrt() * 1e-14)).sqrt().max(1e3 * (1.0 + u))
}

/// Length of step 2, ∫₀^∞ √m_εε(ε, μ*) dε, as a function of u = βμ*.
pub fn l2(u: f64) -> Result<f64> {
    Ok(l2_detailed(u)?.value)
}

pub fn l2_detailed(u: f64) -> Result<L2Result> {
    check_u(u)?;
    let e = l2_cutoff(u);
    let (body, quad_error) = l2_partial(u, e)?;
    let tail = (u / e).atan() / PI.sqrt();
    // relative corrections to the zero-temperature metric fall off like (βr)^{-2}
    let zt = u / (PI.sqrt() * (u * u + e * e));
    let dev = ((step2_density(e, u) - zt) / zt).abs();
    let truncation_error = tail * dev.max(1.0 / (e * e + u * u));
    Ok(L2Result { value: body + tail, cutoff: e, tail, truncation_error, quad_error })
}

fn l2_partial(u: f64, eps_end: f64) -> Result<(f64, f64)> {
    if eps_end == 0.0 {
        return Ok((0.0, 0.0));
    }
    let r = integrate_points(|e| step2_density(e, u), &step2_points(u, eps_end), &spec())?;
    Ok((r.value, r.abs_error))
}

/// Cumulative length C(x) = ∫₀ˣ density, tabulated at panel breakpoints.
struct Cumulative<D: Fn(f64) -> f64> {
    density: D,
    points: Vec<f64>,
    values: Vec<f64>,
}

impl<D: Fn(f64) -> f64> Cumulative<D> {
    fn new(density: D, points: Vec<f64>) -> Result<Self> {
        let mut values = vec![0.0];
        for w in points.windows(2) {
            let r = integrate_points(&density, &[w[0], w[1]], &spec())?;
            values.push(values.last().copied().unwrap_or(0.0) + r.value);
        }
        Ok(Self { density, points, values })
    }

    fn eval_in(&self, panel: usize, x: f64) -> Result<f64> {
        let a = self.points[panel];
        Ok(self.values[panel] + integrate_points(&self.density, &[a, x], &spec())?.value)
    }

    /// Solves C(x) = target by safeguarded Newton inside the bracketing panel.
    fn invert(&self, target: f64, t: f64) -> Result<f64> {
        let panel = match self.values.iter().position(|&v| v >= target) {
            Some(0) => return Ok(self.points[0]),
            Some(k) => k - 1,
            None => return Err(Error::Bracket(format!("schedule inversion out of range at t = {t}"))),
        };
        let (mut lo, mut hi) = (self.points[panel], self.points[panel + 1]);
        let tol = 1e-13 * target.abs().max(1e-300);
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let f = self.eval_in(panel, x)? - target;
            if f.abs() <= tol {
                return Ok(x);
            }
            if f > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let d = (self.density)(x);
            let newton = x - f / d;
            x = if d > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if hi - lo <= 1e-15 * hi.abs() {
                return Ok(x);
            }
        }
        Err(Error::Bracket(format!("schedule inversion did not converge at t = {t}")))
    }
}

fn step2_points(u: f64, eps_end: f64) -> Vec<f64> {
    let mut anchors = vec![u, 0.5 * u, 2.0 * u];
    let mut x = 0.25;
    while x < eps_end {
        anchors.push(x);
        x *= 4.0;
    }
    geometric_points(0.0, eps_end, &anchors)
}

/// Constant-speed schedules of both steps on a Chebyshev-spaced grid.
#[derive(Debug, Clone, Serialize)]
pub struct StepSchedules {
    pub u: f64,
    pub beta: f64,
    pub knots: Vec<f64>,
    /// step 1: μ(t) at ε = 0
    pub mu: Vec<f64>,
    /// step 2: ε(t) at μ = μ*; the last entry is the finite cutoff standing in for ∞
    pub eps: Vec<f64>,
    pub l1: f64,
    pub l2: f64,
}

/// Chebyshev–Lobatto points on [0, 1].
pub fn chebyshev_knots(n: usize) -> Vec<f64> {
    let n = n.max(2);
    let mut k: Vec<f64> = (0..=n).map(|j| 0.5 * (1.0 - (PI * j as f64 / n as f64).cos())).collect();
    k[0] = 0.0;
    k[n] = 1.0;
    k
}

/// Inverts t·L = (cumulative length) for both steps at `n + 1` Chebyshev samples.
pub fn step_schedules(u: f64, beta: f64, n: usize) -> Result<StepSchedules> {
    check_u(u)?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::invalid("beta must be positive and finite"));
    }
    let knots = chebyshev_knots(n);
    let len1 = l1(u)?;
    let l2r = l2_detailed(u)?;
    let c1 = Cumulative::new(step1_density_s, geometric_points(0.0, u.sqrt(), &[0.1, 0.3, 1.0, 3.0, 10.0]))?;
    let c2 = Cumulative::new(|x| step2_density(x, u), step2_points(u, l2r.cutoff))?;
    let mut mu = Vec::with_capacity(knots.len());
    let mut eps = Vec::with_capacity(knots.len());
    let last = knots.len() - 1;
    for (i, &t) in knots.iter().enumerate() {
        let m = if i == 0 {
            0.0
        } else if i == last {
            u
        } else {
            let s = c1.invert(t * len1, t)?;
            s * s
        };
        mu.push(m / beta);
        let e = if i == 0 {
            0.0
        } else if i == last {
            l2r.cutoff
        } else {
            // beyond the cutoff the zero-temperature tail is exact enough to invert in closed form
            let want = t * l2r.value;
            let body = l2r.value - l2r.tail;
            if want >= body {
                let rem = (l2r.value - want) * PI.sqrt();
                u / rem.tan()
            } else {
                c2.invert(want, t)?
            }
        };
        eps.push(e / beta);
    }
    Ok(StepSchedules { u, beta, knots, mu, eps, l1: len1, l2: l2r.value })
}

/// The three-step plan with the optimal time split.
#[derive(Debug, Clone, Serialize)]
pub struct OneParamPlan {
    pub u: f64,
    pub beta: f64,
    pub tau: f64,
    pub l1: f64,
    pub l2: f64,
    pub tau1_fraction: f64,
    /// τ·kBTΣ = (L1 + L2)²
    pub sigma_tau_beta: f64,
    pub sigma_kbt: f64,
    pub l2_detail: L2Result,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedules: Option<StepSchedules>,
}

impl OneParamPlan {
    /// First-order dissipation for an arbitrary split τ1 = fraction·τ.
    pub fn cost_with_split(&self, fraction: f64) -> f64 {
        let t1 = fraction * self.tau;
        let t2 = self.tau - t1;
        self.l1 * self.l1 / t1 + self.l2 * self.l2 / t2
    }

    /// Steps 1 and 2 joined on [0, 1] with the optimal split; step 3 takes no
    /// time and is the jump of μ to zero after the last knot.
    pub fn protocol(&self) -> Result<Protocol> {
        let s = self.schedules.as_ref().ok_or_else(|| Error::invalid("plan was built without schedules"))?;
        let f = self.tau1_fraction;
        let mut knots = Vec::new();
        let mut eps = Vec::new();
        let mut mu = Vec::new();
        let mu_star = self.u / self.beta;
        for (i, &t) in s.knots.iter().enumerate() {
            knots.push(f * t);
            eps.push(0.0);
            mu.push(s.mu[i]);
        }
        for (i, &t) in s.knots.iter().enumerate().skip(1) {
            knots.push(f + (1.0 - f) * t);
            eps.push(s.eps[i]);
            mu.push(mu_star);
        }
        if let Some(k) = knots.last_mut() {
            *k = 1.0;
        }
        Protocol::sampled(self.tau, self.beta, knots, eps, mu)
    }
}

/// Builds the plan for u = βμ* and duration τ; `samples` > 0 also inverts the schedules.
pub fn plan(u: f64, beta: f64, tau: f64, samples: usize) -> Result<OneParamPlan> {
    check_u(u)?;
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::invalid("tau must be positive and finite"));
    }
    let len1 = l1(u)?;
    let l2_detail = l2_detailed(u)?;
    let len2 = l2_detail.value;
    let total = len1 + len2;
    let schedules = if samples > 0 { Some(step_schedules(u, beta, samples)?) } else { None };
    Ok(OneParamPlan {
        u,
        beta,
        tau,
        l1: len1,
        l2: len2,
        tau1_fraction: len1 / total,
        sigma_tau_beta: total * total,
        sigma_kbt: total * total / tau,
        l2_detail,
        schedules,
    })
}

/// Named protocol constructors.
#[derive(Debug, Clone, PartialEq)]
pub enum ProtocolKind {
    HtGeodesic { eps_star: f64, k: u32 },
    WeakOptimal { mu_star: f64, eps_final: f64 },
    ZeroT { phi0: f64, phi1: f64, r: RadialProfile },
    Sampled { knots: Vec<f64>, eps: Vec<f64>, mu: Vec<f64> },
}

/// Protocol of the given kind; analytic kinds keep exact derivatives.
pub fn build_protocol(kind: ProtocolKind, tau: f64, beta: f64) -> Result<Protocol> {
    let n = 512;
    match kind {
        ProtocolKind::HtGeodesic { eps_star, k } => {
            Protocol::analytic(AnalyticPath::HtGeodesic { eps_star, k }, tau, beta, n)
        }
        ProtocolKind::WeakOptimal { mu_star, eps_final } => {
            Protocol::analytic(AnalyticPath::WeakOptimal { beta, mu_star, eps_final }, tau, beta, n)
        }
        ProtocolKind::ZeroT { phi0, phi1, r } => {
            Protocol::analytic(AnalyticPath::ZeroT { phi0, phi1, r }, tau, beta, n)
        }
        ProtocolKind::Sampled { knots, eps, mu } => Protocol::sampled(tau, beta, knots, eps, mu),
    }
}
