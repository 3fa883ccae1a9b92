//! Second-order finite-difference operators on cell-centred grids.
//!
//! Interior cells use the central stencil; the first and last cell on each
//! axis use the one-sided three-point stencil, so every output is second
//! order everywhere. With central stencils in the interior, `div ∘ curl` and
//! `curl ∘ grad` vanish identically on cells at least two cells from a face.

use crate::error::Result;
use crate::fieldcore::field::{ScalarField, VectorField3};
use crate::fieldcore::grid::Grid3;

/// Derivative of one scalar channel along `axis`.
pub fn partial(grid: &Grid3, values: &[f64], axis: usize) -> Vec<f64> {
    let dims = grid.dims();
    let n = dims[axis];
    let stride = match axis {
        0 => 1,
        1 => dims[0],
        _ => dims[0] * dims[1],
    };
    let inv = 1.0 / (2.0 * grid.spacing()[axis]);
    (0..values.len())
        .map(|idx| {
            let c = (idx / stride) % n;
            if c == 0 {
                (-3.0 * values[idx] + 4.0 * values[idx + stride] - values[idx + 2 * stride]) * inv
            } else if c == n - 1 {
                (3.0 * values[idx] - 4.0 * values[idx - stride] + values[idx - 2 * stride]) * inv
            } else {
                (values[idx + stride] - values[idx - stride]) * inv
            }
        })
        .collect()
}

pub fn gradient(f: &ScalarField) -> Result<VectorField3> {
    let grid = *f.grid();
    grid.require_min_dims(3)?;
    let dx = partial(&grid, f.values(), 0);
    let dy = partial(&grid, f.values(), 1);
    let dz = partial(&grid, f.values(), 2);
    VectorField3::from_components(grid, &dx, &dy, &dz)
}

pub fn divergence(field: &VectorField3) -> Result<ScalarField> {
    let grid = *field.grid();
    grid.require_min_dims(3)?;
    let dx = partial(&grid, &field.component(0), 0);
    let dy = partial(&grid, &field.component(1), 1);
    let dz = partial(&grid, &field.component(2), 2);
    let values = (0..grid.len()).map(|i| dx[i] + dy[i] + dz[i]).collect();
    ScalarField::new(grid, values)
}

pub fn curl(field: &VectorField3) -> Result<VectorField3> {
    let grid = *field.grid();
    grid.require_min_dims(3)?;
    let [fx, fy, fz] = [0, 1, 2].map(|c| field.component(c));
    let dy_fz = partial(&grid, &fz, 1);
    let dz_fy = partial(&grid, &fy, 2);
    let dz_fx = partial(&grid, &fx, 2);
    let dx_fz = partial(&grid, &fz, 0);
    let dx_fy = partial(&grid, &fy, 0);
    let dy_fx = partial(&grid, &fx, 1);
    let values = (0..grid.len()).map(|i| [dy_fz[i] - dz_fy[i], dz_fx[i] - dx_fz[i], dx_fy[i] - dy_fx[i]]).collect();
    VectorField3::new(grid, values)
}
