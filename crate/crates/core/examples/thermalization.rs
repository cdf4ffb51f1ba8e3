//! Frozen controls: the occupation and interaction energy relax to their
//! thermal values on the time scale 1/(2μ).
//!
//! cargo run --release --example thermalization

use landauer_geo::dynamics::{frozen_relax, thermal_interaction, thermal_occupation, BathContext};
use landauer_geo::ControlPoint;

fn main() -> landauer_geo::Result<()> {
    let (beta, omega_max) = (1.0, 1e6);
    let pt = ControlPoint::new(1.0, 0.5)?;
    let ctx = BathContext::new(beta).with_omega_max(omega_max).with_p0(0.0);
    let (p_th, v_th) = (thermal_occupation(pt, beta)?, thermal_interaction(pt, beta, omega_max)?);
    println!("thermal: p = {p_th:.10}, v = {v_th:.10}");
    for gt in [0.5, 2.0, 8.0, 20.0, 40.0] {
        let (p, v) = frozen_relax(pt, &ctx, gt / (2.0 * pt.mu))?;
        println!("2μt = {gt:>4}: p = {p:.10} ({:+.1e}), v = {v:.10} ({:+.1e})", p - p_th, v - v_th);
    }
    Ok(())
}
