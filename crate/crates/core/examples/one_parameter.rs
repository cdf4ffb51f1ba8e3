//! The sequential three-step protocol: switch the coupling on, raise the
//! level at fixed coupling, switch off. Its cost is (L1 + L2)² in units of 1/τ.
//!
//! cargo run --release --example one_parameter

use std::f64::consts::PI;

use landauer_geo::protocols::plan;

fn main() -> landauer_geo::Result<()> {
    println!("{:>10} {:>10} {:>10} {:>8} {:>10}", "βμ*", "L1", "L2", "τ1/τ", "(L1+L2)²");
    let mut best = (f64::INFINITY, 0.0);
    for i in 0..=24 {
        let u = 10f64.powf(-2.0 + 4.0 * i as f64 / 24.0);
        let p = plan(u, 1.0, 1.0, 0)?;
        println!("{u:>10.4} {:>10.6} {:>10.6} {:>8.4} {:>10.6}", p.l1, p.l2, p.tau1_fraction, p.sigma_tau_beta);
        if p.sigma_tau_beta < best.0 {
            best = (p.sigma_tau_beta, u);
        }
    }
    println!("grid minimum {:.4} near βμ* = {:.3}; lower bound π/4 = {:.4}", best.0, best.1, PI / 4.0);

    let p = plan(1.863, 1.0, 1.0, 16)?;
    let proto = p.protocol()?;
    println!("schedule at βμ* = 1.863 ({} knots):", proto.knots.len());
    for i in (0..proto.knots.len()).step_by(4) {
        println!("  t = {:.4}  ε = {:>10.4}  μ = {:.4}", proto.knots[i], proto.eps[i], proto.mu[i]);
    }
    Ok(())
}
