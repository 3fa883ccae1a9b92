//! Coulomb-gauge potentials from field snapshots: A from the flux-tube B and
//! φ from a smoothed point charge's E, each checked against its source.
//!
//! cargo run --release --example field_potentials -- [out_dir]

use std::path::PathBuf;

use coulomb_gauge::cli::offset_fitted_error;
use coulomb_gauge::fieldcore::io::{write_csv, Cell};
use coulomb_gauge::fieldcore::{curl, divergence, Grid3};
use coulomb_gauge::potentials::{
    scalar_potential_from_charges, scalar_potential_from_e, vector_potential_from_b, PointCharge,
};
use coulomb_gauge::presets::{FluxTube, SmoothPointCharge};
use coulomb_gauge::{Constants, Result};

fn main() -> Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/examples".into()));
    std::fs::create_dir_all(&out)?;
    let units = Constants::default();
    let n = 24;
    let grid = Grid3::cube(n, 1.0)?;

    let tube = FluxTube::for_grid(&grid);
    let b = tube.sample_b(&grid)?;
    let a = vector_potential_from_b(&b)?;
    let exact = tube.sample_a(&grid)?;
    println!("flux tube: warnings {:?}", a.warnings);
    println!("  |curl A - B| / |B| = {:.3e}", curl(&a.field)?.relative_error_interior(&b, 2)?);
    println!("  |A - A_exact| / |A_exact| = {:.3e}", a.field.relative_error_interior(&exact, 2)?);
    println!("  interior max |div A| = {:.2e}", divergence(&a.field)?.max_abs_interior(2));

    let h = grid.min_spacing();
    let source = SmoothPointCharge {
        position: [0.5 * h, 0.25 * h, -0.35 * h],
        charge: 4.0 * std::f64::consts::PI,
        core_radius: 5.0 * h,
    };
    let e = source.sample_field(&grid, units.eps0)?;
    let from_e = scalar_potential_from_e(&e)?.field;
    let from_q = scalar_potential_from_charges(
        &[PointCharge { position: source.position, charge: source.charge }],
        &grid,
        &units,
    )?
    .field;
    let err = offset_fitted_error(&from_e, &from_q, source.position, source.core_radius)?;
    println!("point charge: offset-fitted |phi_E - phi_q| / |phi_q| = {err:.3e}");

    let (j, k) = (n / 2, n / 2);
    let rows: Vec<Vec<Cell>> = (0..n)
        .map(|i| {
            let idx = grid.index(i, j, k);
            let p = grid.center_of(idx);
            vec![
                Cell::Num(p[0]),
                Cell::Num(a.field.values()[idx][1]),
                Cell::Num(exact.values()[idx][1]),
                Cell::Num(from_e.values()[idx]),
                Cell::Num(from_q.values()[idx]),
                Cell::Num(source.potential(p, units.eps0)),
            ]
        })
        .collect();
    let path = out.join("field_potentials_line.csv");
    write_csv(&path, &["x", "a_y", "a_y_exact", "phi_from_e", "phi_from_charges", "phi_exact"], &rows)?;
    println!("wrote {}", path.display());
    Ok(())
}
