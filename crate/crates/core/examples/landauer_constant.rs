//! Optimal erasure geodesics and the saturation of τ·kBTΣ with the final
//! level energy, which defines the finite-time Landauer constant.
//!
//! cargo run --release --example landauer_constant

use landauer_geo::geodesic::{landauer_constant, shoot, ShootOptions};

fn main() -> landauer_geo::Result<()> {
    let opts = ShootOptions::default();
    for target in [0.1, 1.0, 5.0] {
        let s = shoot(target, 1, 1.0, &opts)?;
        println!(
            "βε(1) = {target:>4}: ε* = {:.6}, L = {:.6}, τ·kBTΣ = {:.6}, speed variation {:.1e}",
            s.eps_star, s.solution.length, s.solution.sigma_tau, s.solution.diagnostics.speed_variation
        );
    }
    let est = landauer_constant(&[10.0, 20.0, 50.0], 1.0, &opts)?;
    for (t, achieved, sigma, tail, es) in &est.per_target {
        println!("target {t:>4}: reached {achieved:.6}, τ·kBTΣ = {sigma:.6} (+ tail bound {tail:.1e}), ε* = {es:.10}");
    }
    println!("a = {:.6} ± {:.1e}, saturating: {}", est.a, est.uncertainty, est.saturating);
    Ok(())
}
