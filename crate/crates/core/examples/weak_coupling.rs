//! Weak coupling: the optimal level ramp at fixed small μ*, its constant
//! ε̇√(f(1-f)) integrand, and the rate equation along it.
//!
//! cargo run --release --example weak_coupling

use landauer_geo::dynamics::{weak_relaxation, BathContext};
use landauer_geo::geometry::{weak_coupling, weak_integrand};
use landauer_geo::protocols::l2;

fn main() -> landauer_geo::Result<()> {
    let (beta, mu_star) = (1.0, 0.01);
    let w = weak_coupling(30.0, beta, 500.0, 2.0 * mu_star)?;
    println!("τ·kBTΣ at βε(1) = 30: {:.6}, erasure limit π²/(8βμ*) = {:.6}", w.sigma_tau, w.sigma_tau_limit);
    let v = l2(beta * mu_star)?;
    println!("one-parameter step 2: L2² = {:.6}", v * v);
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        println!("  t = {t:.2}: ε̇√(f(1-f)) = {:.12}", weak_integrand(t, beta));
    }
    let t: Vec<f64> = (0..=5).map(|i| i as f64 / 5.0).collect();
    let p = weak_relaxation(&w.path, &BathContext::new(beta), &t)?;
    for (ti, pi) in t.iter().zip(&p) {
        let eps = w.path.sample(*ti).eps;
        println!("  t = {ti:.1}: p = {pi:.6}, f(βε) = {:.6}", landauer_geo::special::fermi(beta * eps));
    }
    Ok(())
}
