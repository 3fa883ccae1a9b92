//! Vector potential of an infinitely thin flux circuit shaped as a square.
//!
//! The near side runs along z from `(0,0,−R)` to `(0,0,R)` carrying flux `+Φ`
//! along `+z`. The circuit closes through `(−2R,0,R)` and `(−2R,0,−R)`, so a
//! small counter-clockwise circle about the near side (normal `+z`) encloses
//! flux `+Φ`. Each side contributes `Φ/4π ∫ t̂ × (p − r′)/|p − r′|³ ds`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fieldcore::field::{cross3, dot3, norm3, sub3, Vec3};
use crate::fieldcore::quadrature::{gauss_kronrod, GaussLegendre};

/// Square flux loop of half-side `R` carrying flux `Φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SquareFluxLoop {
    half_side: f64,
    flux: f64,
}

impl SquareFluxLoop {
    pub fn new(half_side: f64, flux: f64) -> Result<Self> {
        if !(half_side > 0.0 && half_side.is_finite()) {
            return Err(Error::Parameter("half side R must be positive".into()));
        }
        if !flux.is_finite() {
            return Err(Error::Parameter("flux must be finite".into()));
        }
        Ok(Self { half_side, flux })
    }

    pub fn half_side(&self) -> f64 {
        self.half_side
    }

    pub fn flux(&self) -> f64 {
        self.flux
    }

    /// Same geometry with the flux reversed.
    pub fn reversed(&self) -> Self {
        Self { half_side: self.half_side, flux: -self.flux }
    }

    /// Corners in circulation order, starting at the bottom of the near side.
    pub fn corners(&self) -> [Vec3; 4] {
        let r = self.half_side;
        [[0.0, 0.0, -r], [0.0, 0.0, r], [-2.0 * r, 0.0, r], [-2.0 * r, 0.0, -r]]
    }

    /// Centre of the square.
    pub fn center(&self) -> Vec3 {
        [-self.half_side, 0.0, 0.0]
    }
}

fn require_off_axis(rho: f64) -> Result<()> {
    if !(rho > 0.0) {
        return Err(Error::Singularity("the potential is singular on the flux line (ρ = 0)".into()));
    }
    Ok(())
}

/// `A_θ` of the near side alone, in closed form.
pub fn a_near_side(rho: f64, z: f64, lp: &SquareFluxLoop) -> Result<f64> {
    require_off_axis(rho)?;
    let r = lp.half_side;
    let up = r - z;
    let down = r + z;
    let bracket = up / (rho * rho + up * up).sqrt() + down / (rho * rho + down * down).sqrt();
    Ok(lp.flux / (4.0 * PI * rho) * bracket)
}

/// The near-side potential expanded to second order in `z`.
pub fn a_near_side_series(rho: f64, z: f64, lp: &SquareFluxLoop) -> f64 {
    let r = lp.half_side;
    let s = 1.0 + (rho / r).powi(2);
    let lead = lp.flux / (2.0 * PI * rho * s.sqrt());
    let quad = 3.0 * lp.flux / (4.0 * PI * r) * s.powf(-2.5) * (rho / r) * (z / r).powi(2);
    lead - quad
}

/// `Φ/(2πρ)` of an infinite line.
pub fn a_stokes(rho: f64, flux: f64) -> Result<f64> {
    require_off_axis(rho)?;
    Ok(flux / (2.0 * PI * rho))
}

/// Relative tolerance of the per-side adaptive quadrature.
pub const SIDE_RTOL: f64 = 1e-10;

/// Potential at `p` from one straight flux segment `a → b`.
pub fn a_segment(p: Vec3, a: Vec3, b: Vec3, flux: f64) -> Result<Vec3> {
    let t = sub3(b, a);
    let len = norm3(t);
    let tangent = [t[0] / len, t[1] / len, t[2] / len];
    let u = sub3(p, a);
    let along = dot3(u, tangent).clamp(0.0, len);
    let closest = [a[0] + along * tangent[0], a[1] + along * tangent[1], a[2] + along * tangent[2]];
    let gap = norm3(sub3(p, closest));
    if gap <= 1e-12 * len {
        return Err(Error::Singularity("evaluation point lies on a flux segment".into()));
    }
    let integrand = |s: f64| -> [f64; 3] {
        let src = [a[0] + s * tangent[0], a[1] + s * tangent[1], a[2] + s * tangent[2]];
        let d = sub3(p, src);
        let r = norm3(d);
        let c = cross3(tangent, d);
        let k = 1.0 / (r * r * r);
        [c[0] * k, c[1] * k, c[2] * k]
    };
    // Splitting at the foot of the perpendicular keeps the peak on a panel edge.
    let mut total = [0.0; 3];
    let cuts: Vec<f64> = if along > 0.0 && along < len { vec![0.0, along, len] } else { vec![0.0, len] };
    for w in cuts.windows(2) {
        let part = gauss_kronrod(integrand, w[0], w[1], SIDE_RTOL, 1e-300)?;
        for c in 0..3 {
            total[c] += part[c];
        }
    }
    let s = flux / (4.0 * PI);
    Ok([s * total[0], s * total[1], s * total[2]])
}

/// Potential of the whole circuit at `point`.
pub fn a_loop_full(point: Vec3, lp: &SquareFluxLoop) -> Result<Vec3> {
    let c = lp.corners();
    let mut total = [0.0; 3];
    for i in 0..4 {
        let part = a_segment(point, c[i], c[(i + 1) % 4], lp.flux)?;
        for k in 0..3 {
            total[k] += part[k];
        }
    }
    Ok(total)
}

/// Azimuthal component about the near side at `(ρ cos θ, ρ sin θ, z)`.
pub fn a_full_theta(rho: f64, theta: f64, z: f64, lp: &SquareFluxLoop) -> Result<f64> {
    require_off_axis(rho)?;
    let a = a_loop_full([rho * theta.cos(), rho * theta.sin(), z], lp)?;
    Ok(-a[0] * theta.sin() + a[1] * theta.cos())
}

/// Flux recovered from `∮ A · dl` of the full circuit around a circle of
/// radius `ρ` about the near side in the plane `z = 0`.
pub fn stokes_consistency(lp: &SquareFluxLoop, rho: f64) -> Result<f64> {
    require_off_axis(rho)?;
    if rho >= lp.half_side {
        return Err(Error::Parameter("circle must stay well inside the loop (ρ < R)".into()));
    }
    let rule = GaussLegendre::new(16);
    let panels = 32;
    let mut sum = 0.0;
    for k in 0..panels {
        let lo = 2.0 * PI * k as f64 / panels as f64;
        let hi = 2.0 * PI * (k + 1) as f64 / panels as f64;
        for (t, w) in rule.mapped(lo, hi) {
            let a = a_loop_full([rho * t.cos(), rho * t.sin(), 0.0], lp)?;
            let dl = [-rho * t.sin(), rho * t.cos(), 0.0];
            sum += w * dot3(a, dl);
        }
    }
    Ok(sum)
}

/// One row of the profile table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileRow {
    pub rho: f64,
    pub z: f64,
    pub half_side: f64,
    pub flux: f64,
    pub a_exact: f64,
    pub a_series: f64,
    pub a_stokes: f64,
    pub a_full_theta: f64,
}

/// Profile across `rhos` at height `z`; evaluation points lie on `+x` (θ = 0).
pub fn profile(rhos: &[f64], z: f64, lp: &SquareFluxLoop) -> Result<Vec<ProfileRow>> {
    rhos.iter()
        .map(|&rho| {
            Ok(ProfileRow {
                rho,
                z,
                half_side: lp.half_side,
                flux: lp.flux,
                a_exact: a_near_side(rho, z, lp)?,
                a_series: a_near_side_series(rho, z, lp),
                a_stokes: a_stokes(rho, lp.flux)?,
                a_full_theta: a_full_theta(rho, 0.0, z, lp)?,
            })
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Parameter("power-law fit needs at least two matched points".into()));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0)) {
        return Err(Error::Parameter("power-law fit needs positive data".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Parameter("power-law fit needs distinct abscissae".into()));
    }
    Ok(sxy / sxx)
}

/// Return-path contribution `|A_full,θ − A_near|` at `(ρ, 0, z)` for each half side,
/// with the fitted exponent and the constant `C` in `|ΔA| ≈ C Φ / R`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReturnPathFit {
    pub half_sides: Vec<f64>,
    pub deviations: Vec<f64>,
    pub exponent: f64,
    pub constant: f64,
}

pub fn return_path_fit(rho: f64, z: f64, flux: f64, half_sides: &[f64]) -> Result<ReturnPathFit> {
    let deviations = half_sides
        .iter()
        .map(|&r| {
            let lp = SquareFluxLoop::new(r, flux)?;
            Ok((a_full_theta(rho, 0.0, z, &lp)? - a_near_side(rho, z, &lp)?).abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    let exponent = log_log_slope(half_sides, &deviations)?;
    let constant =
        half_sides.iter().zip(&deviations).map(|(r, d)| d * r / flux.abs()).sum::<f64>() / half_sides.len() as f64;
    Ok(ReturnPathFit { half_sides: half_sides.to_vec(), deviations, exponent, constant })
}
