//! Balance of ∫A² against the double integral of B over |r − r′| for the flux
//! tube, with and without an added gauge gradient, across two resolutions.
//!
//! cargo run --release --example a_squared_identity -- [out_dir]

use std::path::PathBuf;

use coulomb_gauge::fieldcore::io::write_json;
use coulomb_gauge::fieldcore::Grid3;
use coulomb_gauge::potentials::a_squared_identity;
use coulomb_gauge::presets::{FluxTube, GaussianBump};
use coulomb_gauge::Result;

fn main() -> Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/examples".into()));
    std::fs::create_dir_all(&out)?;
    let mut reports = Vec::new();
    for n in [16, 24] {
        let grid = Grid3::cube(n, 1.0)?;
        let b = FluxTube::for_grid(&grid).sample_b(&grid)?;
        let chi = GaussianBump { center: [0.1, -0.05, 0.08], width: 0.3, amplitude: 0.1 }.sample(&grid)?;
        let plain = a_squared_identity(&b, None)?;
        let gauged = a_squared_identity(&b, Some(&chi))?;
        println!(
            "{n}³: lhs {:.6e}, rhs {:.6e}, (lhs - rhs)/rhs {:+.3}%",
            plain.lhs,
            plain.rhs_bb,
            100.0 * plain.coulomb_error()
        );
        println!(
            "     with χ: gauge term {:.6e}, (lhs - rhs - gauge)/lhs {:+.3}%, I₂/rhs {:+.3}%",
            gauged.gauge_term,
            100.0 * (gauged.lhs - gauged.rhs_bb - gauged.gauge_term) / gauged.lhs,
            100.0 * plain.cross_ratio()
        );
        reports.push(plain);
        reports.push(gauged);
    }
    let path = out.join("a_squared_identity.json");
    write_json(&path, &reports)?;
    println!("wrote {}", path.display());
    Ok(())
}
