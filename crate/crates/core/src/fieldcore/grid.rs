use serde::Serialize;

use crate::error::{Error, Result};

/// Upper bound on the number of cells a grid may hold.
pub const MAX_CELLS: usize = 1 << 22;

/// Uniform cell-centred Cartesian grid.
///
/// Cell `(i, j, k)` has centre `origin + (i + ½, j + ½, k + ½) * spacing`.
/// Values are stored x-fastest: `idx = i + nx * (j + ny * k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid3 {
    origin: [f64; 3],
    spacing: [f64; 3],
    dims: [usize; 3],
}

impl Grid3 {
    pub fn new(origin: [f64; 3], spacing: [f64; 3], dims: [usize; 3]) -> Result<Self> {
        for axis in 0..3 {
            if dims[axis] < 2 {
                return Err(Error::Dimension { axis, got: dims[axis], min: 2 });
            }
            if !(spacing[axis] > 0.0 && spacing[axis].is_finite()) {
                return Err(Error::InvalidGrid(format!("spacing along axis {axis} must be positive and finite")));
            }
            if !origin[axis].is_finite() {
                return Err(Error::InvalidGrid(format!("origin along axis {axis} is not finite")));
            }
        }
        let cells = dims.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n)).unwrap_or(usize::MAX);
        if cells > MAX_CELLS {
            return Err(Error::SizeGuard { cells, limit: MAX_CELLS });
        }
        Ok(Self { origin, spacing, dims })
    }

    /// `n³` cube covering `[-half_width, half_width]³`.
    pub fn cube(n: usize, half_width: f64) -> Result<Self> {
        let h = 2.0 * half_width / n as f64;
        Self::new([-half_width; 3], [h; 3], [n; 3])
    }

    /// Box covering `[-half[a], half[a]]` on each axis with the given cell counts.
    pub fn centered(dims: [usize; 3], half: [f64; 3]) -> Result<Self> {
        let spacing = [0, 1, 2].map(|a| 2.0 * half[a] / dims[a] as f64);
        Self::new([-half[0], -half[1], -half[2]], spacing, dims)
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing[0] * self.spacing[1] * self.spacing[2]
    }

    /// Smallest spacing over the three axes.
    pub fn min_spacing(&self) -> f64 {
        self.spacing.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.dims[0] * (j + self.dims[1] * k)
    }

    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let [nx, ny, _] = self.dims;
        [idx % nx, (idx / nx) % ny, idx / (nx * ny)]
    }

    pub fn center(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        let c = [i, j, k];
        [0, 1, 2].map(|a| self.origin[a] + (c[a] as f64 + 0.5) * self.spacing[a])
    }

    pub fn center_of(&self, idx: usize) -> [f64; 3] {
        let [i, j, k] = self.coords(idx);
        self.center(i, j, k)
    }

    /// Distance in cells from `idx` to the nearest grid face (0 for boundary cells).
    pub fn boundary_distance(&self, idx: usize) -> usize {
        let c = self.coords(idx);
        (0..3).map(|a| c[a].min(self.dims[a] - 1 - c[a])).min().unwrap_or(0)
    }

    /// True when `idx` sits at least `margin` cells inside every face.
    pub fn is_interior(&self, idx: usize, margin: usize) -> bool {
        self.boundary_distance(idx) >= margin
    }

    /// Cell indices at least `margin` cells away from every face.
    pub fn interior(&self, margin: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&idx| self.is_interior(idx, margin))
    }

    /// Lower and upper corners of the region spanned by cell centres.
    pub fn center_bounds(&self) -> ([f64; 3], [f64; 3]) {
        let lo = [0, 1, 2].map(|a| self.origin[a] + 0.5 * self.spacing[a]);
        let hi = [0, 1, 2].map(|a| self.origin[a] + (self.dims[a] as f64 - 0.5) * self.spacing[a]);
        (lo, hi)
    }

    /// Integer cell offset taking `self` onto `other` when both share a lattice.
    pub fn lattice_offset(&self, other: &Grid3) -> Result<[i64; 3]> {
        let mut offset = [0i64; 3];
        for a in 0..3 {
            let h = self.spacing[a];
            if (other.spacing[a] - h).abs() > 1e-12 * h {
                return Err(Error::GridMismatch(format!("spacing differs along axis {a}")));
            }
            let shift = (other.origin[a] - self.origin[a]) / h;
            let rounded = shift.round();
            if (shift - rounded).abs() > 1e-9 {
                return Err(Error::GridMismatch(format!("origins are not lattice-aligned along axis {a}")));
            }
            offset[a] = rounded as i64;
        }
        Ok(offset)
    }

    pub fn ensure_same(&self, other: &Grid3) -> Result<()> {
        if self.dims != other.dims || self.lattice_offset(other)? != [0, 0, 0] {
            return Err(Error::GridMismatch("fields live on different grids".into()));
        }
        Ok(())
    }

    pub fn require_min_dims(&self, min: usize) -> Result<()> {
        for axis in 0..3 {
            if self.dims[axis] < min {
                return Err(Error::Dimension { axis, got: self.dims[axis], min });
            }
        }
        Ok(())
    }
}
