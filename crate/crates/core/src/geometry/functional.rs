//! Path functionals: quasistatic work, first-order excess work, thermodynamic
//! length, first-order observables, and the weak-coupling optimum.

use std::f64::consts::PI;

use serde::Serialize;

use super::metric::{metric, metric_quadrature, MetricMethod};
use crate::control::{AnalyticPath, ControlPoint, Protocol};
use crate::error::{Error, Result};
use crate::special::{fermi_variance, integrate_points, quad_fermi, QuadratureSpec};

/// Length and first-order dissipation of a protocol.
#[derive(Debug, Clone, Serialize)]
pub struct PathFunctionalResult {
    pub method: &'static str,
    /// L = ∫ √(λ̇ᵀ m λ̇) dt
    pub length: f64,
    /// kBTΣ = (1/τ) ∫ λ̇ᵀ m λ̇ dt
    pub sigma_kbt: f64,
    /// τ·kBTΣ, dimensionless
    pub sigma_tau: f64,
    pub delta_f: Option<f64>,
    /// (t, λ̇ᵀ m λ̇) at the knots
    pub speed_samples: Vec<(f64, f64)>,
    /// τ kBTΣ ≥ L² up to 1e-8 relative
    pub cauchy_schwarz: bool,
    pub quad_error: f64,
}

fn atan_branch(mu: f64, x: f64) -> f64 {
    // φ ∈ [0, π] with the μ → 0⁺ limit at μ = 0
    (mu.max(0.0) + 0.0).atan2(x)
}

/// ΔF = (1/π) ∫ dω f_β(ω) [φ(λ₀, ω) - φ(λ₁, ω)] with φ = atan2(μ, ε - ω).
///
/// Depends on the endpoints only. When the endpoint couplings differ the
/// integral diverges logarithmically and [`quasistatic_work_regulated`] must
/// be used instead.
pub fn quasistatic_work(proto: &Protocol, beta: f64) -> Result<f64> {
    quasistatic_work_between(proto.start(), proto.end(), beta, None)
}

pub fn quasistatic_work_regulated(proto: &Protocol, beta: f64, omega_max: f64) -> Result<f64> {
    quasistatic_work_between(proto.start(), proto.end(), beta, Some(omega_max))
}

pub fn quasistatic_work_between(a: ControlPoint, b: ControlPoint, beta: f64, omega_max: Option<f64>) -> Result<f64> {
    let scale = a.eps.abs().max(b.eps.abs()).max(a.mu).max(b.mu).max(1.0 / beta);
    if (a.mu - b.mu).abs() > 1e-12 * scale && omega_max.is_none() {
        return Err(Error::invalid(
            "endpoint couplings differ: the quasistatic work needs a frequency cutoff (omega_max)",
        ));
    }
    let mut spec = QuadratureSpec::default().with_tol(1e-12, 1e-15);
    spec.cutoff = omega_max;
    let pts = [a.eps, b.eps, a.eps - a.mu, a.eps + a.mu, b.eps - b.mu, b.eps + b.mu];
    let r = quad_fermi(|w| atan_branch(a.mu, a.eps - w) - atan_branch(b.mu, b.eps - w), beta, &pts, &spec)?;
    Ok(r.value / PI)
}

/// First-order excess work and thermodynamic length of `proto` under the
/// chosen metric.
pub fn excess_work(proto: &Protocol, beta: f64, method: MetricMethod) -> Result<PathFunctionalResult> {
    let n = proto.knots.len();
    for i in 1..n - 1 {
        let s = proto.sample(proto.knots[i]);
        if s.mu <= 0.0 && (s.deps != 0.0 || s.dmu != 0.0) && method != MetricMethod::ZeroT {
            return Err(Error::Singular(format!(
                "excess work diverges: mu = 0 while driving at interior time t = {}",
                proto.knots[i]
            )));
        }
    }
    let integrand = |t: f64| -> Result<f64> {
        let s = proto.sample(t);
        if s.deps == 0.0 && s.dmu == 0.0 {
            return Ok(0.0);
        }
        let m = metric(s.eps, s.mu, beta, method).map_err(|e| match e {
            Error::Singular(msg) => Error::Singular(format!("{msg} at t = {t}")),
            other => other,
        })?;
        Ok(m.quadratic_form(s.deps, s.dmu).max(0.0))
    };
    let first_err = std::cell::RefCell::new(None);
    let mut pts = proto.knots.clone();
    if pts.len() < 5 {
        pts = vec![0.0, 0.25, 0.5, 0.75, 1.0];
    }
    let spec = QuadratureSpec::default().with_tol(1e-11, 1e-300);
    let r = integrate_points(
        |t| match integrand(t) {
            Ok(q) => [q, q.sqrt()],
            Err(e) => {
                first_err.borrow_mut().get_or_insert(e);
                [0.0, 0.0]
            }
        },
        &pts,
        &spec,
    )?;
    if let Some(e) = first_err.into_inner() {
        return Err(e);
    }
    let [q, len] = r.value;
    let mut speed_samples = Vec::with_capacity(n);
    for &t in &proto.knots {
        let tc = t.clamp(1e-6, 1.0 - 1e-6);
        if let Ok(v) = integrand(tc) {
            speed_samples.push((t, v));
        }
    }
    let delta_f = quasistatic_work(proto, beta).ok();
    Ok(PathFunctionalResult {
        method: method.name(),
        length: len,
        sigma_kbt: q / proto.tau,
        sigma_tau: q,
        delta_f,
        speed_samples,
        cauchy_schwarz: q >= len * len * (1.0 - 1e-8),
        quad_error: r.abs_error,
    })
}

/// First-order corrections to occupation and interaction energy.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FirstOrder {
    pub p1: f64,
    pub v1: f64,
    /// local τ·2μ; the expansion needs it large
    pub tau_gamma: f64,
}

/// p ≈ p_th + p1 and v ≈ v_th + v1 for normalized-time rates (ε̇, μ̇) and
/// physical duration τ, from the printed first-order frequency kernels.
pub fn first_order_observables(pt: ControlPoint, rates: (f64, f64), beta: f64, tau: f64) -> Result<FirstOrder> {
    if !(tau > 0.0) {
        return Err(Error::invalid("tau must be positive"));
    }
    let (de, dm) = rates;
    if de == 0.0 && dm == 0.0 {
        return Ok(FirstOrder { p1: 0.0, v1: 0.0, tau_gamma: tau * 2.0 * pt.mu });
    }
    let m = metric_quadrature(pt.eps, pt.mu, beta)?;
    let g = pt.g();
    Ok(FirstOrder {
        p1: (m.m_ee * de + m.m_em * dm) / tau,
        v1: g * (m.m_em * de + m.m_mm * dm) / tau,
        tau_gamma: tau * 2.0 * pt.mu,
    })
}

/// Optimal constant-coupling erasure in the weak-coupling limit.
#[derive(Debug, Clone, Serialize)]
pub struct WeakCouplingResult {
    /// ε_weak sampled on its knots (analytic tag carries the closed form)
    #[serde(skip)]
    pub path: Protocol,
    /// kBTΣ for the finite endpoint ε(1)
    pub sigma_kbt: f64,
    /// τ·kBTΣ for the finite endpoint
    pub sigma_tau: f64,
    /// τ·kBTΣ in the erasure limit βε(1) → ∞: π²/(4βΓ)
    pub sigma_tau_limit: f64,
    pub delta_f: f64,
}

/// ε_weak(t) = 2β⁻¹ ln tan(π(t+1)/4), the erasure-limit optimum.
pub fn eps_weak(t: f64, beta: f64) -> f64 {
    2.0 / beta * (PI * (t + 1.0) / 4.0).tan().ln()
}

/// dε_weak/dt.
pub fn eps_weak_rate(t: f64, beta: f64) -> f64 {
    let th = PI * (t + 1.0) / 4.0;
    2.0 / beta * (PI / 4.0) / (th.sin() * th.cos())
}

/// ε̇ √(f(1-f)) along ε_weak; constant in t.
pub fn weak_integrand(t: f64, beta: f64) -> f64 {
    eps_weak_rate(t, beta) * fermi_variance(beta * eps_weak(t, beta)).sqrt()
}

/// Weak-coupling optimum from ε = 0 to `eps_final` at rate Γ = 2μ*.
pub fn weak_coupling(eps_final: f64, beta: f64, tau: f64, gamma: f64) -> Result<WeakCouplingResult> {
    if !(beta > 0.0 && tau > 0.0 && gamma > 0.0) {
        return Err(Error::invalid("weak coupling needs beta, tau, gamma > 0"));
    }
    let path = AnalyticPath::WeakOptimal { beta, mu_star: gamma / 2.0, eps_final };
    let proto = Protocol::analytic(path, tau, beta, 512)?;
    let th1 = (0.5 * beta * eps_final).exp().atan();
    let sigma_tau = 4.0 * (th1 - PI / 4.0).powi(2) / (beta * gamma);
    let sigma_tau_limit = PI * PI / (4.0 * beta * gamma);
    let delta_f = ((2.0f64).ln() - (-beta * eps_final).exp().ln_1p()) / beta;
    Ok(WeakCouplingResult { path: proto, sigma_kbt: sigma_tau / tau, sigma_tau, sigma_tau_limit, delta_f })
}
