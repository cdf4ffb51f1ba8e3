//! The thermodynamic metric at a few control points, by every method.
//!
//! cargo run --release --example metric_tensor

use landauer_geo::geometry::{metric, MetricMethod};

fn main() -> landauer_geo::Result<()> {
    let beta = 1.0;
    let methods = [MetricMethod::Polygamma, MetricMethod::Quadrature, MetricMethod::HighT, MetricMethod::ZeroT];
    for &(eps, mu) in &[(0.0, 1e-3), (0.5, 1.0), (-3.0, 0.2), (200.0, 150.0)] {
        println!("(βε, βμ) = ({eps}, {mu})");
        for m in methods {
            let t = metric(eps, mu, beta, m)?;
            let [lo, hi] = t.eigenvalues();
            println!(
                "  {:<10} m_εε = {:>12.6e}  m_εμ = {:>13.6e}  m_μμ = {:>12.6e}  eig = ({lo:.4e}, {hi:.4e})",
                m.name(),
                t.m_ee,
                t.m_em,
                t.m_mm
            );
        }
    }
    Ok(())
}
