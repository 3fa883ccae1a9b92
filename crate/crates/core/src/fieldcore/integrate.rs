use crate::error::{Error, Result};
use crate::fieldcore::field::{dot3, norm3, sub3, Vec3, VectorField3};
use crate::fieldcore::quadrature::GaussLegendre;

/// Anything that yields a vector at an arbitrary point.
pub trait VectorSource {
    fn eval(&self, p: Vec3) -> Result<Vec3>;
}

/// Wraps a closure as a [`VectorSource`].
pub struct Analytic<F>(pub F);

impl<F: Fn(Vec3) -> Vec3> VectorSource for Analytic<F> {
    fn eval(&self, p: Vec3) -> Result<Vec3> {
        Ok((self.0)(p))
    }
}

impl VectorSource for VectorField3 {
    fn eval(&self, p: Vec3) -> Result<Vec3> {
        trilinear(self, p)
    }
}

/// Trilinear interpolation between cell centres.
pub fn trilinear(field: &VectorField3, p: Vec3) -> Result<Vec3> {
    let grid = field.grid();
    let dims = grid.dims();
    let origin = grid.origin();
    let h = grid.spacing();
    let mut base = [0usize; 3];
    let mut frac = [0.0; 3];
    for a in 0..3 {
        let u = (p[a] - origin[a]) / h[a] - 0.5;
        let top = (dims[a] - 1) as f64;
        if !(u >= -1e-9 && u <= top + 1e-9) {
            return Err(Error::OutOfBounds { point: p });
        }
        let u = u.clamp(0.0, top);
        let i = (u.floor() as usize).min(dims[a] - 2);
        base[a] = i;
        frac[a] = u - i as f64;
    }
    let values = field.values();
    let mut out = [0.0; 3];
    for corner in 0..8 {
        let o = [corner & 1, (corner >> 1) & 1, (corner >> 2) & 1];
        let w: f64 = (0..3).map(|a| if o[a] == 1 { frac[a] } else { 1.0 - frac[a] }).product();
        if w == 0.0 {
            continue;
        }
        let v = values[grid.index(base[0] + o[0], base[1] + o[1], base[2] + o[2])];
        for c in 0..3 {
            out[c] += w * v[c];
        }
    }
    Ok(out)
}

/// Settings for composite Gauss–Legendre line integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineQuadrature {
    pub order: usize,
    pub subdivisions: usize,
}

impl Default for LineQuadrature {
    fn default() -> Self {
        Self { order: 8, subdivisions: 16 }
    }
}

/// `∫ F · dl` along one straight segment.
pub fn segment_integral(
    field: &dyn VectorSource,
    a: Vec3,
    b: Vec3,
    rule: &GaussLegendre,
    subdivisions: usize,
) -> Result<f64> {
    let t = sub3(b, a);
    if norm3(t) == 0.0 {
        return Ok(0.0);
    }
    let n = subdivisions.max(1);
    let mut sum = 0.0;
    for s in 0..n {
        let lo = s as f64 / n as f64;
        let hi = (s + 1) as f64 / n as f64;
        for (u, w) in rule.mapped(lo, hi) {
            let p = [a[0] + u * t[0], a[1] + u * t[1], a[2] + u * t[2]];
            sum += w * dot3(field.eval(p)?, t);
        }
    }
    Ok(sum)
}

/// `∫ F · dl` along a polyline, closing segment included for closed paths.
pub fn line_integral(
    field: &dyn VectorSource,
    path: &crate::fieldcore::field::PathPolyline,
    quad: LineQuadrature,
) -> Result<f64> {
    if quad.order < 4 {
        return Err(Error::Parameter("line quadrature order must be at least 4".into()));
    }
    let rule = GaussLegendre::new(quad.order);
    path.segments().into_iter().map(|(a, b)| segment_integral(field, a, b, &rule, quad.subdivisions)).sum()
}

/// Product rule on a sphere: Gauss–Legendre in cos θ, uniform in φ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereQuadrature {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for SphereQuadrature {
    fn default() -> Self {
        Self { n_theta: 32, n_phi: 64 }
    }
}

/// `∮ dS′ · F(r′) w(r′)` over the sphere of the given radius about the origin.
pub fn sphere_surface_integral(
    field: impl Fn(Vec3) -> Vec3,
    radius: f64,
    weight: impl Fn(Vec3) -> f64,
    quad: SphereQuadrature,
) -> Result<f64> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Parameter("sphere radius must be positive".into()));
    }
    if quad.n_theta == 0 || quad.n_phi == 0 {
        return Err(Error::Parameter("sphere quadrature orders must be positive".into()));
    }
    let rule = GaussLegendre::new(quad.n_theta);
    let dphi = 2.0 * std::f64::consts::PI / quad.n_phi as f64;
    let mut total = 0.0;
    for (mu, w) in rule.mapped(-1.0, 1.0) {
        let s = (1.0 - mu * mu).sqrt();
        let mut ring = 0.0;
        for j in 0..quad.n_phi {
            let phi = (j as f64 + 0.5) * dphi;
            let n = [s * phi.cos(), s * phi.sin(), mu];
            let p = [radius * n[0], radius * n[1], radius * n[2]];
            let value = dot3(field(p), n) * weight(p);
            if !value.is_finite() {
                return Err(Error::NonFinite(format!("surface integrand at radius {radius}")));
            }
            ring += value;
        }
        total += w * ring * dphi;
    }
    Ok(total * radius * radius)
}
