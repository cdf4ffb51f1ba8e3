//! Protocol files: solve a geodesic, write it in the JSON schema the CLI
//! reads, read it back and check the samples agree bit for bit.
//!
//! cargo run --release --example protocol_files

use landauer_geo::geodesic::{shoot, ShootOptions};
use landauer_geo::Protocol;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let shot = shoot(5.0, 1, 1.0, &ShootOptions::default())?;
    let json = shot.solution.protocol.to_json();
    let path = std::env::temp_dir().join("erasure_geodesic.json");
    std::fs::write(&path, &json)?;
    let back = Protocol::from_json(&std::fs::read_to_string(&path)?)?;
    let same = (0..=1000).all(|i| {
        let t = i as f64 / 1000.0;
        back.sample(t).eps.to_bits() == shot.solution.protocol.sample(t).eps.to_bits()
    });
    println!(
        "wrote {} ({} knots, interpolation {}); round trip exact: {same}",
        path.display(),
        back.knots.len(),
        back.interpolation
    );
    println!("try: landauer-geo dynamics --protocol {} --tau 20 --format csv", path.display());
    Ok(())
}
