use crate::error::{Error, Result};
use crate::fieldcore::grid::Grid3;

pub type Vec3 = [f64; 3];

pub fn dot3(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross3(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn norm3(a: Vec3) -> f64 {
    dot3(a, a).sqrt()
}

pub fn sub3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn add3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn scale3(s: f64, a: Vec3) -> Vec3 {
    [s * a[0], s * a[1], s * a[2]]
}

/// One real value per grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid3,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Grid3, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!("{} values for {} cells", values.len(), grid.len())));
        }
        if let Some(idx) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("scalar value at cell {idx}")));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid3) -> Self {
        Self { grid, values: vec![0.0; grid.len()] }
    }

    /// Samples `f` at every cell centre.
    pub fn from_fn(grid: Grid3, f: impl Fn(Vec3) -> f64) -> Result<Self> {
        let values = (0..grid.len()).map(|idx| f(grid.center_of(idx))).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_interior(&self, margin: usize) -> f64 {
        self.grid.interior(margin).fold(0.0, |m, idx| m.max(self.values[idx].abs()))
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &ScalarField, b: f64) -> Result<ScalarField> {
        self.grid.ensure_same(&other.grid)?;
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        ScalarField::new(self.grid, values)
    }

    /// Σ f · cell volume.
    pub fn volume_sum(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }
}

/// One real 3-vector per grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField3 {
    grid: Grid3,
    values: Vec<Vec3>,
}

impl VectorField3 {
    pub fn new(grid: Grid3, values: Vec<Vec3>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!("{} vectors for {} cells", values.len(), grid.len())));
        }
        if let Some(idx) = values.iter().position(|v| v.iter().any(|c| !c.is_finite())) {
            return Err(Error::NonFinite(format!("vector value at cell {idx}")));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid3) -> Self {
        Self { grid, values: vec![[0.0; 3]; grid.len()] }
    }

    pub fn from_fn(grid: Grid3, f: impl Fn(Vec3) -> Vec3) -> Result<Self> {
        let values = (0..grid.len()).map(|idx| f(grid.center_of(idx))).collect();
        Self::new(grid, values)
    }

    /// Assembles a field from three component arrays.
    pub fn from_components(grid: Grid3, x: &[f64], y: &[f64], z: &[f64]) -> Result<Self> {
        let values = (0..x.len().min(y.len()).min(z.len())).map(|i| [x[i], y[i], z[i]]).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    pub fn values(&self) -> &[Vec3] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Vec3> {
        self.values
    }

    pub fn component(&self, axis: usize) -> Vec<f64> {
        self.values.iter().map(|v| v[axis]).collect()
    }

    /// Largest Euclidean norm over all cells.
    pub fn max_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(norm3(*v)))
    }

    pub fn max_norm_interior(&self, margin: usize) -> f64 {
        self.grid.interior(margin).fold(0.0, |m, idx| m.max(norm3(self.values[idx])))
    }

    /// Largest norm among cells within `width` cells of a face.
    pub fn max_norm_boundary(&self, width: usize) -> f64 {
        (0..self.grid.len())
            .filter(|&idx| self.grid.boundary_distance(idx) < width)
            .fold(0.0, |m, idx| m.max(norm3(self.values[idx])))
    }

    pub fn combine(&self, a: f64, other: &VectorField3, b: f64) -> Result<VectorField3> {
        self.grid.ensure_same(&other.grid)?;
        let values =
            self.values.iter().zip(&other.values).map(|(x, y)| [0, 1, 2].map(|c| a * x[c] + b * y[c])).collect();
        VectorField3::new(self.grid, values)
    }

    pub fn add(&self, other: &VectorField3) -> Result<VectorField3> {
        self.combine(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &VectorField3) -> Result<VectorField3> {
        self.combine(1.0, other, -1.0)
    }

    pub fn scaled(&self, s: f64) -> VectorField3 {
        VectorField3 { grid: self.grid, values: self.values.iter().map(|v| scale3(s, *v)).collect() }
    }

    /// Σ |F|² · cell volume.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| dot3(*v, *v)).sum::<f64>() * self.grid.cell_volume()
    }

    /// Σ F·G · cell volume.
    pub fn inner(&self, other: &VectorField3) -> Result<f64> {
        self.grid.ensure_same(&other.grid)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| dot3(*a, *b)).sum::<f64>() * self.grid.cell_volume())
    }

    /// Largest `|self - other|` over interior cells, divided by the largest `|other|` anywhere.
    pub fn relative_error_interior(&self, reference: &VectorField3, margin: usize) -> Result<f64> {
        let diff = self.sub(reference)?;
        let scale = reference.max_norm();
        if scale == 0.0 {
            return Ok(diff.max_norm_interior(margin));
        }
        Ok(diff.max_norm_interior(margin) / scale)
    }
}

/// Ordered polyline path; a closed path implies the segment from last back to first.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPolyline {
    points: Vec<Vec3>,
    closed: bool,
}

impl PathPolyline {
    pub fn new(points: Vec<Vec3>, closed: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Parameter("a path needs at least two points".into()));
        }
        if points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("path point".into()));
        }
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Parameter("consecutive path points coincide".into()));
        }
        if closed && points.first() == points.last() {
            return Err(Error::Parameter("closed paths must not repeat the first point".into()));
        }
        Ok(Self { points, closed })
    }

    /// Straight segment from `a` to `b`; `a == b` is allowed and gives a zero-length path.
    pub fn segment(a: Vec3, b: Vec3) -> Self {
        Self { points: vec![a, b], closed: false }
    }

    /// Regular polygon with `n` vertices approximating a circle in a plane of constant z.
    pub fn circle(center: Vec3, radius: f64, n: usize) -> Result<Self> {
        let n = n.max(3);
        let points = (0..n)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                [center[0] + radius * t.cos(), center[1] + radius * t.sin(), center[2]]
            })
            .collect();
        Self::new(points, true)
    }

    /// Polyline through `n + 1` points on the arc from angle `t0` to `t1` about the z-axis.
    pub fn arc(radius: f64, t0: f64, t1: f64, z: f64, n: usize) -> Result<Self> {
        let n = n.max(1);
        let points = (0..=n)
            .map(|i| {
                let t = t0 + (t1 - t0) * i as f64 / n as f64;
                [radius * t.cos(), radius * t.sin(), z]
            })
            .collect();
        Self::new(points, false)
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Segments in traversal order, including the closing segment.
    pub fn segments(&self) -> Vec<(Vec3, Vec3)> {
        let mut segs: Vec<(Vec3, Vec3)> = self.points.windows(2).map(|w| (w[0], w[1])).collect();
        if self.closed {
            segs.push((self.points[self.points.len() - 1], self.points[0]));
        }
        segs
    }

    /// Concatenation; `other` must start where `self` ends.
    pub fn concat(&self, other: &PathPolyline) -> Result<PathPolyline> {
        if self.closed || other.closed {
            return Err(Error::Parameter("only open paths can be concatenated".into()));
        }
        let end = self.points[self.points.len() - 1];
        if norm3(sub3(end, other.points[0])) > 1e-12 {
            return Err(Error::Parameter("paths do not join".into()));
        }
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points[1..]);
        if norm3(sub3(points[0], points[points.len() - 1])) <= 1e-12 && points.len() > 2 {
            points.pop();
            return PathPolyline::new(points, true);
        }
        PathPolyline::new(points, false)
    }
}
