//! Splits a mixed field (flux-tube potential plus a pure gradient) into its
//! longitudinal and transverse parts and writes the z = 0 slice.
//!
//! cargo run --release --example helmholtz_decomposition -- [out_dir]

use std::path::PathBuf;

use coulomb_gauge::fieldcore::io::{write_csv, Cell};
use coulomb_gauge::fieldcore::{curl, divergence, norm3, Grid3};
use coulomb_gauge::helmholtz::{decompose, report};
use coulomb_gauge::presets::{FluxTube, GradientBump};
use coulomb_gauge::Result;

fn main() -> Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/examples".into()));
    std::fs::create_dir_all(&out)?;
    let n = 24;
    let grid = Grid3::cube(n, 1.0)?;
    let tube = FluxTube::new([0.0; 3], 0.6).sample_a(&grid)?;
    // Gradient part scaled to the tube's size so neither part swamps the other.
    let raw = GradientBump::for_grid(&grid).sample(&grid)?;
    let bump = raw.scaled(tube.max_norm() / raw.max_norm());
    let field = tube.add(&bump)?;

    let d = decompose(&field)?;
    let r = report(&field, &d, 2)?;
    println!("input max {:.4e}", r.input_max);
    println!("longitudinal max {:.4e}, transverse max {:.4e}", r.longitudinal_max, r.transverse_max);
    println!("reconstruction residual {:.3e}", r.reconstruction_residual);
    println!("|T - tube| / |tube| = {:.3e}", d.transverse.relative_error_interior(&tube, 2)?);
    println!("|L - grad| / |grad| = {:.3e}", d.longitudinal.relative_error_interior(&bump, 2)?);
    println!("max |curl L| = {:.2e}", curl(&d.longitudinal)?.max_norm());
    println!("interior max |div T| = {:.2e}", divergence(&d.transverse)?.max_abs_interior(2));

    let k = n / 2;
    let mut rows = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let idx = grid.index(i, j, k);
            let p = grid.center_of(idx);
            rows.push(
                [
                    p[0],
                    p[1],
                    norm3(field.values()[idx]),
                    norm3(d.longitudinal.values()[idx]),
                    norm3(d.transverse.values()[idx]),
                ]
                .into_iter()
                .map(Cell::Num)
                .collect(),
            );
        }
    }
    let path = out.join("helmholtz_slice.csv");
    write_csv(&path, &["x", "y", "input", "longitudinal", "transverse"], &rows)?;
    println!("wrote {}", path.display());
    Ok(())
}
