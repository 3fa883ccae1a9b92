//! Potential of a long square flux loop: near-side closed form, its series,
//! the Stokes value and the full four-sided loop, plus the return-path scaling.
//!
//! cargo run --release --example square_solenoid -- [out_dir]

use std::f64::consts::TAU;
use std::path::PathBuf;

use coulomb_gauge::abphase::linspace;
use coulomb_gauge::fieldcore::io::{write_csv, Cell};
use coulomb_gauge::solenoid::{profile, return_path_fit, stokes_consistency, SquareFluxLoop};
use coulomb_gauge::Result;

fn main() -> Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/examples".into()));
    std::fs::create_dir_all(&out)?;
    let rhos = linspace(0.25, 8.0, 32);
    let mut rows = Vec::new();
    for r in [5.0, 10.0, 50.0] {
        let lp = SquareFluxLoop::new(r, TAU)?;
        for row in profile(&rhos, 0.0, &lp)? {
            rows.push(
                [row.rho, row.half_side, row.a_exact, row.a_series, row.a_stokes, row.a_full_theta]
                    .into_iter()
                    .map(Cell::Num)
                    .collect(),
            );
        }
        println!("R = {r}: circulation on ρ = 0.1 recovers Φ as {:.6}", stokes_consistency(&lp, 0.1)?);
    }
    let path = out.join("square_solenoid_profile.csv");
    write_csv(&path, &["rho", "R", "a_near_side", "a_series", "a_stokes", "a_full_theta"], &rows)?;
    println!("wrote {}", path.display());

    let fit = return_path_fit(1.0, 0.0, TAU, &[25.0, 50.0, 100.0, 200.0, 400.0])?;
    println!("return-path deviation ≈ {:.4} Φ/R^{:.3}", fit.constant, -fit.exponent);
    let rows: Vec<Vec<Cell>> =
        fit.half_sides.iter().zip(&fit.deviations).map(|(r, d)| vec![Cell::Num(*r), Cell::Num(*d)]).collect();
    let path = out.join("square_solenoid_return_path.csv");
    write_csv(&path, &["R", "deviation"], &rows)?;
    println!("wrote {}", path.display());
    Ok(())
}
