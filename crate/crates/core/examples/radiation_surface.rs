//! Far-field surface term over growing spheres for a radiating dipole and a
//! static point charge, with the fitted decay exponents and the Poynting flux.
//!
//! cargo run --release --example radiation_surface -- [out_dir]

use std::path::PathBuf;

use coulomb_gauge::fieldcore::integrate::SphereQuadrature;
use coulomb_gauge::fieldcore::io::{write_csv, Cell};
use coulomb_gauge::radiation::{
    phase_locked_radii, poynting_flux, surface_decay_scan, surface_term, DecayFit, DipoleFarField, PointChargeFarField,
};
use coulomb_gauge::Result;

fn main() -> Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/examples".into()));
    std::fs::create_dir_all(&out)?;
    let quad = SphereQuadrature::default();
    let eval = [1.0, 0.5, 2.0];
    let dipole = DipoleFarField::new(1.0)?;
    let charge = PointChargeFarField { charge: 1.0 };

    let locked = phase_locked_radii(1.0, &[50.0, 100.0, 200.0, 400.0, 800.0]);
    for (name, scan) in [
        ("dipole", surface_decay_scan(&dipole, &locked, eval, quad)?),
        ("point charge", surface_decay_scan(&charge, &locked, eval, quad)?),
    ] {
        match scan.fit {
            DecayFit::Exponent(s) => println!("{name}: surface term ∝ r^{s:.4}"),
            DecayFit::VanishesIdentically => println!("{name}: surface term vanishes identically"),
        }
    }

    let mut rows = Vec::new();
    let mut r: f64 = 10.0;
    while r <= 1000.0 {
        rows.push(vec![
            Cell::Num(r),
            Cell::Num(surface_term(&dipole, r, eval, quad)?),
            Cell::Num(surface_term(&charge, r, eval, quad)?),
            Cell::Num(poynting_flux(&dipole, r, quad)?),
        ]);
        r *= 1.05;
    }
    let path = out.join("radiation_surface.csv");
    write_csv(&path, &["r", "dipole_surface", "charge_surface", "dipole_poynting"], &rows)?;
    println!("wrote {}", path.display());
    Ok(())
}
