//! Analytic field configurations used by the CLI, the examples and the tests.
//!
//! Every preset is given with exact values and derivatives so that sampled
//! fields can be compared against closed forms.

use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use crate::abphase::GaugeFunction;
use crate::error::Result;
use crate::fieldcore::field::{sub3, Vec3};
use crate::fieldcore::{Grid3, ScalarField, VectorField3};

/// `amplitude · (1 − |r − c|²/a²)^power` inside the ball of radius `a`, zero outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolyBump {
    pub center: Vec3,
    pub radius: f64,
    pub power: f64,
    pub amplitude: f64,
}

impl PolyBump {
    fn local(&self, p: Vec3) -> (Vec3, f64) {
        let x = sub3(p, self.center);
        let s = 1.0 - (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (self.radius * self.radius);
        (x, s)
    }

    pub fn value(&self, p: Vec3) -> f64 {
        let (_, s) = self.local(p);
        if s <= 0.0 {
            return 0.0;
        }
        self.amplitude * s.powf(self.power)
    }

    pub fn gradient(&self, p: Vec3) -> Vec3 {
        let (x, s) = self.local(p);
        if s <= 0.0 {
            return [0.0; 3];
        }
        let a2 = self.radius * self.radius;
        let c = self.amplitude * self.power * s.powf(self.power - 1.0) * (-2.0 / a2);
        [c * x[0], c * x[1], c * x[2]]
    }

    pub fn hessian(&self, p: Vec3) -> [[f64; 3]; 3] {
        let (x, s) = self.local(p);
        if s <= 0.0 {
            return [[0.0; 3]; 3];
        }
        let a2 = self.radius * self.radius;
        let n = self.power;
        let outer = self.amplitude * n * (n - 1.0) * s.powf(n - 2.0) * 4.0 / (a2 * a2);
        let diag = -self.amplitude * n * s.powf(n - 1.0) * 2.0 / a2;
        let mut h = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                h[i][j] = outer * x[i] * x[j] + if i == j { diag } else { 0.0 };
            }
        }
        h
    }
}

/// Fraction of the largest half-width occupied by the flux-tube support.
pub const FLUX_TUBE_FILL: f64 = 0.92;

/// Closed, compactly supported flux tube `B = ∇×∇×(ẑψ)` with
/// `ψ = (1 − r²/a²)^3.5`. Field lines rise through the core and return
/// around the outside, all within radius `a`.
///
/// Its Coulomb-gauge potential is known exactly, `A = ∇ψ × ẑ`, and is
/// itself compactly supported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluxTube {
    psi: PolyBump,
}

impl FluxTube {
    /// Tube of support radius `a` about `center`, normalised to `B_z = 1` at the centre.
    pub fn new(center: Vec3, radius: f64) -> Self {
        let power = 3.5;
        let amplitude = radius * radius / (4.0 * power);
        Self { psi: PolyBump { center, radius, power, amplitude } }
    }

    /// Tube filling the grid: centred, radius `0.92` of the smallest half-width.
    pub fn for_grid(grid: &Grid3) -> Self {
        let (center, half) = grid_center_and_half_width(grid);
        Self::new(center, FLUX_TUBE_FILL * half)
    }

    pub fn radius(&self) -> f64 {
        self.psi.radius
    }

    pub fn potential(&self, p: Vec3) -> Vec3 {
        let g = self.psi.gradient(p);
        [g[1], -g[0], 0.0]
    }

    pub fn field(&self, p: Vec3) -> Vec3 {
        let h = self.psi.hessian(p);
        [h[0][2], h[1][2], -h[0][0] - h[1][1]]
    }

    pub fn sample_b(&self, grid: &Grid3) -> Result<VectorField3> {
        VectorField3::from_fn(*grid, |p| self.field(p))
    }

    pub fn sample_a(&self, grid: &Grid3) -> Result<VectorField3> {
        VectorField3::from_fn(*grid, |p| self.potential(p))
    }
}

/// Centre of the grid box and its smallest half-width.
pub fn grid_center_and_half_width(grid: &Grid3) -> (Vec3, f64) {
    let o = grid.origin();
    let h = grid.spacing();
    let n = grid.dims();
    let half = [0, 1, 2].map(|a| 0.5 * h[a] * n[a] as f64);
    let center = [0, 1, 2].map(|a| o[a] + half[a]);
    (center, half.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Gradient of a compact bump, `F = ∇f` with `f = (1 − r²/a²)^4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GradientBump {
    pub f: PolyBump,
}

impl GradientBump {
    pub fn new(center: Vec3, radius: f64) -> Self {
        Self { f: PolyBump { center, radius, power: 4.0, amplitude: radius } }
    }

    /// Bump whose support stays more than two cells from every face.
    pub fn for_grid(grid: &Grid3) -> Self {
        let (center, half) = grid_center_and_half_width(grid);
        Self::new(center, 0.8 * half)
    }

    pub fn potential(&self, p: Vec3) -> f64 {
        self.f.value(p)
    }

    pub fn field(&self, p: Vec3) -> Vec3 {
        self.f.gradient(p)
    }

    pub fn sample(&self, grid: &Grid3) -> Result<VectorField3> {
        VectorField3::from_fn(*grid, |p| self.field(p))
    }

    pub fn sample_potential(&self, grid: &Grid3) -> Result<ScalarField> {
        ScalarField::from_fn(*grid, |p| self.potential(p))
    }
}

/// `amplitude · exp(−|r − c|²/w²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianBump {
    pub center: Vec3,
    pub width: f64,
    pub amplitude: f64,
}

impl GaussianBump {
    /// Random bump with centre inside `[-extent, extent]³`, width in
    /// `[w_lo, w_hi]` and amplitude magnitude in `[0.2, 1]` with random sign.
    pub fn random(rng: &mut impl Rng, extent: f64, w_lo: f64, w_hi: f64) -> Self {
        let center = [0, 1, 2].map(|_| rng.random_range(-extent..=extent));
        let width = rng.random_range(w_lo..=w_hi);
        let mag = rng.random_range(0.2..=1.0);
        let amplitude = if rng.random_bool(0.5) { mag } else { -mag };
        Self { center, width, amplitude }
    }

    pub fn sample(&self, grid: &Grid3) -> Result<ScalarField> {
        ScalarField::from_fn(*grid, |p| GaugeFunction::value(self, p))
    }
}

impl GaugeFunction for GaussianBump {
    fn value(&self, p: Vec3) -> f64 {
        let x = sub3(p, self.center);
        self.amplitude * (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (self.width * self.width)).exp()
    }

    fn gradient(&self, p: Vec3) -> Vec3 {
        let x = sub3(p, self.center);
        let c = -2.0 * GaugeFunction::value(self, p) / (self.width * self.width);
        [c * x[0], c * x[1], c * x[2]]
    }
}

/// Smooth localized vector field: a sum of Gaussian envelopes times random constant vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomSmoothField {
    pub terms: Vec<(GaussianBump, Vec3)>,
}

impl RandomSmoothField {
    pub fn random(rng: &mut impl Rng, count: usize, extent: f64, w_lo: f64, w_hi: f64) -> Self {
        let terms = (0..count)
            .map(|_| {
                let bump = GaussianBump::random(rng, extent, w_lo, w_hi);
                let dir = [0, 1, 2].map(|_| rng.random_range(-1.0..=1.0));
                (bump, dir)
            })
            .collect();
        Self { terms }
    }

    pub fn value(&self, p: Vec3) -> Vec3 {
        let mut v = [0.0; 3];
        for (bump, dir) in &self.terms {
            let g = GaugeFunction::value(bump, p);
            for c in 0..3 {
                v[c] += g * dir[c];
            }
        }
        v
    }

    pub fn sample(&self, grid: &Grid3) -> Result<VectorField3> {
        VectorField3::from_fn(*grid, |p| self.value(p))
    }
}

/// Charge `q` spread over a ball of radius `a` with density ∝ `(1 − r²/a²)²`.
///
/// Outside the ball the field is that of a point charge; inside it is finite
/// and smooth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothPointCharge {
    pub position: Vec3,
    pub charge: f64,
    pub core_radius: f64,
}

impl SmoothPointCharge {
    /// Fraction of the charge inside `s = r/a`.
    fn enclosed(s: f64) -> f64 {
        if s >= 1.0 {
            return 1.0;
        }
        105.0 / 8.0 * (s.powi(3) / 3.0 - 2.0 * s.powi(5) / 5.0 + s.powi(7) / 7.0)
    }

    pub fn density(&self, p: Vec3) -> f64 {
        let x = sub3(p, self.position);
        let s2 = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (self.core_radius * self.core_radius);
        if s2 >= 1.0 {
            return 0.0;
        }
        105.0 * self.charge / (32.0 * PI * self.core_radius.powi(3)) * (1.0 - s2).powi(2)
    }

    /// Electric field with `ε₀ = eps0`.
    pub fn field(&self, p: Vec3, eps0: f64) -> Vec3 {
        let x = sub3(p, self.position);
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        if r == 0.0 {
            return [0.0; 3];
        }
        let e = self.charge * Self::enclosed(r / self.core_radius) / (4.0 * PI * eps0 * r * r);
        [e * x[0] / r, e * x[1] / r, e * x[2] / r]
    }

    /// Potential vanishing at infinity.
    pub fn potential(&self, p: Vec3, eps0: f64) -> f64 {
        let x = sub3(p, self.position);
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let a = self.core_radius;
        let k = self.charge / (4.0 * PI * eps0);
        if r >= a {
            return k / r;
        }
        let s2 = (r / a).powi(2);
        let tail = 19.0 / 210.0 - s2 / 6.0 + s2 * s2 / 10.0 - s2 * s2 * s2 / 42.0;
        k / a * (1.0 + 105.0 / 8.0 * tail)
    }

    pub fn sample_field(&self, grid: &Grid3, eps0: f64) -> Result<VectorField3> {
        VectorField3::from_fn(*grid, |p| self.field(p, eps0))
    }
}

/// Straight flux tube along z with Gaussian cross-section,
/// `B_z = Φ/(πσ²) · exp(−ρ²/σ²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StraightFluxTube {
    pub flux: f64,
    pub sigma: f64,
}

impl StraightFluxTube {
    pub fn field(&self, p: Vec3) -> Vec3 {
        let rho2 = p[0] * p[0] + p[1] * p[1];
        [0.0, 0.0, self.flux / (PI * self.sigma * self.sigma) * (-rho2 / (self.sigma * self.sigma)).exp()]
    }

    /// Azimuthal potential of the infinite tube, `Φ(1 − e^{−ρ²/σ²})/(2πρ)`.
    pub fn a_theta(&self, rho: f64) -> f64 {
        self.flux * (1.0 - (-rho * rho / (self.sigma * self.sigma)).exp()) / (2.0 * PI * rho)
    }

    pub fn sample_b(&self, grid: &Grid3) -> Result<VectorField3> {
        VectorField3::from_fn(*grid, |p| self.field(p))
    }
}

/// Oscillating dipole confined to a ball: with `g = (1 − r²/a²)^4` and
/// `p(t) = sin ωt`, the potentials `A = ẑ ṗ g`, `φ = −p ∂_z g` give
///
/// `E = sin ωt (∇∂_z g + ω² g ẑ)` and `B = ω cos ωt (∂_y g, −∂_x g, 0)`,
///
/// which satisfy `∇×E = −∂B/∂t` and `∇·B = 0` exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompactDipole {
    pub g: PolyBump,
    pub omega: f64,
}

impl CompactDipole {
    pub fn new(center: Vec3, radius: f64, omega: f64) -> Self {
        Self { g: PolyBump { center, radius, power: 4.0, amplitude: radius * radius }, omega }
    }

    pub fn for_grid(grid: &Grid3, omega: f64) -> Self {
        let (center, half) = grid_center_and_half_width(grid);
        Self::new(center, FLUX_TUBE_FILL * half, omega)
    }

    pub fn electric(&self, p: Vec3, t: f64) -> Vec3 {
        let h = self.g.hessian(p);
        let g = self.g.value(p);
        let s = (self.omega * t).sin();
        [s * h[0][2], s * h[1][2], s * (h[2][2] + self.omega * self.omega * g)]
    }

    pub fn magnetic(&self, p: Vec3, t: f64) -> Vec3 {
        let d = self.g.gradient(p);
        let c = self.omega * (self.omega * t).cos();
        [c * d[1], -c * d[0], 0.0]
    }

    pub fn sample(&self, grid: &Grid3, t: f64) -> Result<(VectorField3, VectorField3)> {
        Ok((
            VectorField3::from_fn(*grid, |p| self.electric(p, t))?,
            VectorField3::from_fn(*grid, |p| self.magnetic(p, t))?,
        ))
    }
}
