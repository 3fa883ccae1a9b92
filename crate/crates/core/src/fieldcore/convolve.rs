//! Direct-sum convolution with the Newtonian kernel `1 / (4π|r − r′|)`.
//!
//! Every pair of cells contributes `vol / (4π|d|)` where `d` is the offset
//! between centres. The self cell instead contributes the exact integral of
//! `1 / (4π|r|)` over one cell, obtained by quadrature at construction time.
//! Summation order within each target cell is fixed, so results do not
//! depend on the thread schedule.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fieldcore::field::{ScalarField, Vec3, VectorField3};
use crate::fieldcore::grid::Grid3;
use crate::fieldcore::quadrature::GaussLegendre;

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// `∫ 1/|r| d³r` over the box `[-hx/2, hx/2] × [-hy/2, hy/2] × [-hz/2, hz/2]`.
///
/// The box splits into six pyramids with apex at the singularity. Radial
/// integration is exact, leaving a smooth face integral per pyramid
/// `(a/2) ∫∫ dy dz / sqrt(a² + y² + z²)` that a tensor Gauss–Legendre rule
/// resolves to machine precision.
pub fn self_cell_integral(spacing: [f64; 3]) -> f64 {
    let rule = GaussLegendre::new(48);
    let half = spacing.map(|h| 0.5 * h);
    let face = |a: f64, b: f64, c: f64| -> f64 {
        let mut sum = 0.0;
        for (y, wy) in rule.mapped(0.0, b) {
            for (z, wz) in rule.mapped(0.0, c) {
                sum += wy * wz / (a * a + y * y + z * z).sqrt();
            }
        }
        0.5 * a * sum
    };
    let octant = face(half[0], half[1], half[2]) + face(half[1], half[2], half[0]) + face(half[2], half[0], half[1]);
    8.0 * octant
}

/// Kernel weights `vol/(4π|d|)` indexed by absolute cell offsets.
struct KernelTable {
    extent: [usize; 3],
    weights: Vec<f64>,
}

impl KernelTable {
    fn newtonian(spacing: [f64; 3], extent: [usize; 3]) -> Self {
        let vol = spacing[0] * spacing[1] * spacing[2];
        let mut weights = Vec::with_capacity(extent[0] * extent[1] * extent[2]);
        for dk in 0..extent[2] {
            for dj in 0..extent[1] {
                for di in 0..extent[0] {
                    let d = [di as f64 * spacing[0], dj as f64 * spacing[1], dk as f64 * spacing[2]];
                    let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
                    weights.push(if r == 0.0 { 0.0 } else { vol / (FOUR_PI * r) });
                }
            }
        }
        weights[0] = self_cell_integral(spacing) / FOUR_PI;
        Self { extent, weights }
    }

    fn row(&self, dj: usize, dk: usize) -> &[f64] {
        let start = self.extent[0] * (dj + self.extent[1] * dk);
        &self.weights[start..start + self.extent[0]]
    }
}

/// Convolves `M` channels sampled on `source` onto a lattice-aligned `target` grid.
pub fn convolve_channels<const M: usize>(source: &Grid3, values: &[[f64; M]], target: &Grid3) -> Result<Vec<[f64; M]>> {
    if values.len() != source.len() {
        return Err(Error::GridMismatch("channel count does not match the source grid".into()));
    }
    let offset = source.lattice_offset(target)?;
    let ns = source.dims();
    let nt = target.dims();
    let mut extent = [0usize; 3];
    for a in 0..3 {
        let lo = offset[a];
        let hi = offset[a] + nt[a] as i64 - 1;
        let reach = (lo - (ns[a] as i64 - 1)).abs().max(hi.abs());
        extent[a] = reach as usize + 1;
    }
    let table = KernelTable::newtonian(source.spacing(), extent);

    let out = (0..target.len())
        .into_par_iter()
        .map(|t| {
            let [ti, tj, tk] = target.coords(t);
            let pos = [ti as i64 + offset[0], tj as i64 + offset[1], tk as i64 + offset[2]];
            let di: Vec<usize> = (0..ns[0]).map(|si| (pos[0] - si as i64).unsigned_abs() as usize).collect();
            let mut acc = [0.0; M];
            for sk in 0..ns[2] {
                let dk = (pos[2] - sk as i64).unsigned_abs() as usize;
                for sj in 0..ns[1] {
                    let dj = (pos[1] - sj as i64).unsigned_abs() as usize;
                    let row = table.row(dj, dk);
                    let base = ns[0] * (sj + ns[1] * sk);
                    let src = &values[base..base + ns[0]];
                    for (v, &d) in src.iter().zip(&di) {
                        let w = row[d];
                        for c in 0..M {
                            acc[c] += w * v[c];
                        }
                    }
                }
            }
            acc
        })
        .collect();
    Ok(out)
}

pub fn newtonian_convolve_scalar(f: &ScalarField) -> Result<ScalarField> {
    newtonian_convolve_scalar_onto(f, f.grid())
}

pub fn newtonian_convolve_scalar_onto(f: &ScalarField, target: &Grid3) -> Result<ScalarField> {
    let channels: Vec<[f64; 1]> = f.values().iter().map(|v| [*v]).collect();
    let out = convolve_channels(f.grid(), &channels, target)?;
    ScalarField::new(*target, out.into_iter().map(|v| v[0]).collect())
}

pub fn newtonian_convolve_vector(f: &VectorField3) -> Result<VectorField3> {
    newtonian_convolve_vector_onto(f, f.grid())
}

pub fn newtonian_convolve_vector_onto(f: &VectorField3, target: &Grid3) -> Result<VectorField3> {
    let out = convolve_channels(f.grid(), f.values(), target)?;
    VectorField3::new(*target, out)
}

/// Scalar or vector input to [`newtonian_convolve`].
#[derive(Debug, Clone, PartialEq)]
pub enum FieldKind {
    Scalar(ScalarField),
    Vector(VectorField3),
}

/// Convolution that preserves the kind of its input.
pub fn newtonian_convolve(f: &FieldKind) -> Result<FieldKind> {
    match f {
        FieldKind::Scalar(s) => newtonian_convolve_scalar(s).map(FieldKind::Scalar),
        FieldKind::Vector(v) => newtonian_convolve_vector(v).map(FieldKind::Vector),
    }
}

/// `M[i][j](r) = Σ_{r′} B_i(r′) ∂_j G(r − r′) vol` with `G = 1/(4π|d|)`.
///
/// The self cell contributes nothing because the kernel gradient is odd.
pub fn gradient_kernel_convolve(b: &VectorField3) -> Vec<[[f64; 3]; 3]> {
    let grid = b.grid();
    let n = grid.dims();
    let h = grid.spacing();
    let vol = grid.cell_volume();
    let mut cube = Vec::with_capacity(n[0] * n[1] * n[2]);
    for dk in 0..n[2] {
        for dj in 0..n[1] {
            for di in 0..n[0] {
                let d = [di as f64 * h[0], dj as f64 * h[1], dk as f64 * h[2]];
                let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                cube.push(if r2 == 0.0 { 0.0 } else { vol / (FOUR_PI * r2 * r2.sqrt()) });
            }
        }
    }
    let values = b.values();
    (0..grid.len())
        .into_par_iter()
        .map(|t| {
            let [ti, tj, tk] = grid.coords(t);
            let mut acc = [[0.0; 3]; 3];
            for sk in 0..n[2] {
                let ddk = tk as i64 - sk as i64;
                let dz = ddk as f64 * h[2];
                for sj in 0..n[1] {
                    let ddj = tj as i64 - sj as i64;
                    let dy = ddj as f64 * h[1];
                    let row = n[0] * (ddj.unsigned_abs() as usize + n[1] * ddk.unsigned_abs() as usize);
                    let base = n[0] * (sj + n[1] * sk);
                    for si in 0..n[0] {
                        let ddi = ti as i64 - si as i64;
                        let g = cube[row + ddi.unsigned_abs() as usize];
                        let d: Vec3 = [ddi as f64 * h[0], dy, dz];
                        let v = values[base + si];
                        for i in 0..3 {
                            for j in 0..3 {
                                acc[i][j] -= g * v[i] * d[j];
                            }
                        }
                    }
                }
            }
            acc
        })
        .collect()
}
