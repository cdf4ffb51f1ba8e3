//! At zero temperature the geodesics are straight lines in the polar angle
//! φ = atan2(μ, ε); the radius is free and the cost is Δφ²/(πτ).
//!
//! cargo run --release --example zero_temperature

use std::f64::consts::PI;

use landauer_geo::geodesic::{zero_t_cost, zero_t_geodesic};
use landauer_geo::geometry::{excess_work, MetricMethod};
use landauer_geo::RadialProfile;

fn main() -> landauer_geo::Result<()> {
    for r in [RadialProfile::Constant(1.0), RadialProfile::Linear(0.5, 3.0), RadialProfile::Bump(2.0, 0.7)] {
        let p = zero_t_geodesic(0.0, PI / 2.0, r, 1.0)?;
        let s = excess_work(&p, f64::INFINITY, MetricMethod::ZeroT)?;
        println!("r(t) = {r:<14} kBTΣ = {:.12} (closed form {:.12})", s.sigma_kbt, zero_t_cost(0.0, PI / 2.0, 1.0));
    }
    Ok(())
}
