//! Field tensor of an oscillating dipole snapshot and the equal-time
//! four-potential read back from it, compared with the direct potentials.
//!
//! cargo run --release --example field_tensor -- [out_dir]

use std::path::PathBuf;

use coulomb_gauge::fieldcore::io::{write_csv, Cell};
use coulomb_gauge::fieldcore::Grid3;
use coulomb_gauge::potentials::{
    field_tensor, four_potential_equal_time, scalar_potential_from_e, vector_potential_from_b,
};
use coulomb_gauge::presets::CompactDipole;
use coulomb_gauge::{Constants, Result};

fn main() -> Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/examples".into()));
    std::fs::create_dir_all(&out)?;
    let units = Constants { c: 2.0, ..Constants::default() };
    let n = 16;
    let grid = Grid3::cube(n, 1.0)?;
    let (e, b) = CompactDipole::for_grid(&grid, 2.0).sample(&grid, 0.3)?;
    let f = field_tensor(&e, &b, &units)?;
    f.check_antisymmetry()?;
    let centre = grid.index(n / 2, n / 2, n / 2);
    println!("F^μν at cell ({0}, {0}, {0}):", n / 2);
    for row in f.values()[centre] {
        println!("  {:+.4e} {:+.4e} {:+.4e} {:+.4e}", row[0], row[1], row[2], row[3]);
    }

    let (a0, a) = four_potential_equal_time(&f)?;
    let phi = scalar_potential_from_e(&e)?.field;
    let direct = vector_potential_from_b(&b)?.field;
    let phi_gap = a0.values().iter().zip(phi.values()).fold(0.0f64, |m, (x, y)| m.max((x * units.c - y).abs()));
    println!("max |c A⁰ - φ| = {phi_gap:.2e}, max |A - A_direct| = {:.2e}", a.sub(&direct)?.max_norm());

    let (j, k) = (n / 2, n / 2);
    let rows: Vec<Vec<Cell>> = (0..n)
        .map(|i| {
            let idx = grid.index(i, j, k);
            let p = grid.center_of(idx);
            [p[0], a0.values()[idx], a.values()[idx][0], a.values()[idx][1], a.values()[idx][2]]
                .into_iter()
                .map(Cell::Num)
                .collect()
        })
        .collect();
    let path = out.join("field_tensor_line.csv");
    write_csv(&path, &["x", "a0", "a_x", "a_y", "a_z"], &rows)?;
    println!("wrote {}", path.display());
    Ok(())
}
