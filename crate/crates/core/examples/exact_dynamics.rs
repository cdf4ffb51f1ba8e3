//! Exact work along the high-temperature geodesic against the slow-driving
//! prediction ΔF + kBTΣ. The residual is second order in 1/τ.
//!
//! cargo run --release --example exact_dynamics

use landauer_geo::dynamics::{work_exact, BathContext};
use landauer_geo::geometry::{excess_work, MetricMethod};
use landauer_geo::{AnalyticPath, Protocol};

fn main() -> landauer_geo::Result<()> {
    let beta = 1.0;
    let base = Protocol::analytic(AnalyticPath::HtGeodesic { eps_star: 20.0, k: 1 }, 1.0, beta, 1024)?;
    let gamma = base.gamma();
    let mut prev: Option<f64> = None;
    for tau_gamma in [25.0, 50.0] {
        let proto = base.with_tau(tau_gamma / gamma)?;
        let r = work_exact(&proto, &BathContext::new(beta))?;
        let geo = excess_work(&proto, beta, MetricMethod::Polygamma)?;
        let resid = r.work - r.delta_f - geo.sigma_kbt;
        println!(
            "τΓ = {tau_gamma:>4}: W = {:.8}, ΔF = {:.8}, Σ = {:.6}, Σ_geo = {:.6}, residual {resid:.3e}{}",
            r.work,
            r.delta_f,
            r.sigma_kbt,
            geo.sigma_kbt,
            prev.map(|p| format!(" (ratio {:.2})", p / resid)).unwrap_or_default()
        );
        prev = Some(resid);
        let d = &r.diagnostics;
        println!(
            "    {} panels, Simpson change {:.1e}, Ω_max {:.1e}, Ω-doubling {:.1e}, p in [0,1]: {}",
            d.simpson_panels, d.simpson_rel_change, d.omega_max, d.omega_doubling_rel, d.p_in_range
        );
    }
    Ok(())
}
