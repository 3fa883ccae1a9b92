//! Two-slit fringes shifted by an enclosed flux: half-path phases, the fringe
//! intensity over a flux scan and the fitted flux period for q = 1 and q = 2.
//!
//! cargo run --release --example ab_fringes -- [out_dir]

use std::path::PathBuf;

use coulomb_gauge::abphase::{
    flux_period_fit, linspace, path_abd, path_acd, path_phase, FringeParams, FringeScan, PureGaugeField,
};
use coulomb_gauge::{Constants, Result};

fn main() -> Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/examples".into()));
    std::fs::create_dir_all(&out)?;
    let geometry = FringeParams::default();
    let screen = linspace(-3.0 * geometry.fringe_spacing(), 3.0 * geometry.fringe_spacing(), 256);
    for q in [1.0, 2.0] {
        let units = Constants { q, ..Constants::default() };
        let gauge = PureGaugeField::new(1.0);
        println!(
            "q = {q}: phase along ABD {:.4}, along ACD {:.4} for Φ = 1",
            path_phase(&path_abd(), &gauge, &units)?,
            path_phase(&path_acd(), &gauge, &units)?
        );
        let flux = linspace(0.0, 4.0 * units.flux_quantum(), 129);
        let scan = FringeScan::synthesize(geometry, flux, screen.clone(), &units)?.with_noise(0.02, 7)?;
        let fit = flux_period_fit(&scan)?;
        println!(
            "  fitted flux period {:.6} (2πħ/q = {:.6}) from {:.1} periods",
            fit.period,
            units.flux_quantum(),
            fit.periods_covered
        );
        let path = out.join(format!("ab_fringes_q{q}.csv"));
        std::fs::write(&path, scan.to_csv())?;
        println!("  wrote {}", path.display());
    }
    Ok(())
}
