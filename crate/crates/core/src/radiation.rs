//! Dominant far-zone fields of an oscillating dipole and the surface
//! integrals that must vanish at infinity.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fieldcore::field::{norm3, sub3, Vec3};
use crate::fieldcore::integrate::{sphere_surface_integral, SphereQuadrature};
use crate::solenoid::log_log_slope;

/// Components `(r, θ, φ)` in the local spherical basis.
pub type Spherical = [f64; 3];

/// Field model giving `(E, B)` in spherical components at `(r, θ, φ)`.
pub trait SphericalFieldModel {
    fn fields(&self, r: f64, theta: f64, phi: f64) -> Result<(Spherical, Spherical)>;
}

/// Leading radiation terms of a dipole along z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DipoleFarField {
    k: f64,
    amplitude: f64,
}

impl DipoleFarField {
    pub fn new(k: f64) -> Result<Self> {
        Self::with_amplitude(k, 1.0)
    }

    pub fn with_amplitude(k: f64, amplitude: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Parameter("wavevector k must be positive".into()));
        }
        Ok(Self { k, amplitude })
    }

    pub fn k(&self) -> f64 {
        self.k
    }
}

/// `E^r = cosθ sin(kr)/r²`, `E^θ = sinθ cos(kr)/r`, `B^φ = sinθ cos(kr)/r`.
pub fn dipole_fields(r: f64, theta: f64, _phi: f64, field: &DipoleFarField) -> Result<(Spherical, Spherical)> {
    if !(r > 0.0) {
        return Err(Error::Parameter("radius must be positive".into()));
    }
    let a = field.amplitude;
    let kr = field.k * r;
    let e = [a * theta.cos() * kr.sin() / (r * r), a * theta.sin() * kr.cos() / r, 0.0];
    let b = [0.0, 0.0, a * theta.sin() * kr.cos() / r];
    Ok((e, b))
}

impl SphericalFieldModel for DipoleFarField {
    fn fields(&self, r: f64, theta: f64, phi: f64) -> Result<(Spherical, Spherical)> {
        dipole_fields(r, theta, phi, self)
    }
}

/// Spherical coordinates `(r, θ, φ)` of a Cartesian point.
pub fn to_spherical(p: Vec3) -> (f64, f64, f64) {
    let r = norm3(p);
    let theta = if r > 0.0 { (p[2] / r).clamp(-1.0, 1.0).acos() } else { 0.0 };
    (r, theta, p[1].atan2(p[0]))
}

/// Cartesian form of spherical components at `(θ, φ)`.
pub fn spherical_to_cartesian(v: Spherical, theta: f64, phi: f64) -> Vec3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let r_hat = [st * cp, st * sp, ct];
    let t_hat = [ct * cp, ct * sp, -st];
    let p_hat = [-sp, cp, 0.0];
    [0, 1, 2].map(|i| v[0] * r_hat[i] + v[1] * t_hat[i] + v[2] * p_hat[i])
}

/// Cartesian electric field of a spherical model at `p`.
pub fn electric_cartesian(model: &dyn SphericalFieldModel, p: Vec3) -> Result<Vec3> {
    let (r, theta, phi) = to_spherical(p);
    let (e, _) = model.fields(r, theta, phi)?;
    Ok(spherical_to_cartesian(e, theta, phi))
}

/// `∮ dS′ · E(r′) / |r − r′|` over the sphere of radius `radius`.
pub fn surface_term(
    model: &dyn SphericalFieldModel,
    radius: f64,
    eval_point: Vec3,
    quad: SphereQuadrature,
) -> Result<f64> {
    let failure = std::cell::RefCell::new(None);
    let value = sphere_surface_integral(
        |p| match electric_cartesian(model, p) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                [f64::NAN; 3]
            }
        },
        radius,
        |p| 1.0 / norm3(sub3(eval_point, p)),
        quad,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    value
}

/// Static radial field `q r̂ / r²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointChargeFarField {
    pub charge: f64,
}

impl SphericalFieldModel for PointChargeFarField {
    fn fields(&self, r: f64, _theta: f64, _phi: f64) -> Result<(Spherical, Spherical)> {
        if !(r > 0.0) {
            return Err(Error::Parameter("radius must be positive".into()));
        }
        Ok(([self.charge / (r * r), 0.0, 0.0], [0.0; 3]))
    }
}

/// Outcome of a decay scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum DecayFit {
    /// Fitted slope of `ln|I|` against `ln r′`.
    Exponent(f64),
    /// `|I| < 1e-14` at every radius.
    VanishesIdentically,
}

/// Surface-integral values and the fitted decay.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayScan {
    pub radii: Vec<f64>,
    pub integrals: Vec<f64>,
    pub fit: DecayFit,
}

/// Threshold below which a surface integral counts as zero.
pub const VANISHING: f64 = 1e-14;

/// Fits the power-law decay of the surface term over `radii`.
pub fn surface_decay_scan(
    model: &dyn SphericalFieldModel,
    radii: &[f64],
    eval_point: Vec3,
    quad: SphereQuadrature,
) -> Result<DecayScan> {
    if radii.len() < 4 {
        return Err(Error::Parameter("a decay scan needs at least four radii".into()));
    }
    let lo = radii.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = radii.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(lo > 0.0) || hi / lo < 10.0 - 1e-9 {
        return Err(Error::Parameter("radii must be positive and span at least one decade".into()));
    }
    if norm3(eval_point) >= lo {
        return Err(Error::Parameter("radii must exceed the distance of the evaluation point".into()));
    }
    let integrals = radii.iter().map(|&r| surface_term(model, r, eval_point, quad)).collect::<Result<Vec<f64>>>()?;
    let fit = if integrals.iter().all(|v| v.abs() < VANISHING) {
        DecayFit::VanishesIdentically
    } else {
        let mags: Vec<f64> = integrals.iter().map(|v| v.abs().max(f64::MIN_POSITIVE)).collect();
        DecayFit::Exponent(log_log_slope(radii, &mags)?)
    };
    Ok(DecayScan { radii: radii.to_vec(), integrals, fit })
}

/// Radii `(2πm + π/2)/k` with `m` chosen so each is the smallest such value ≥ the
/// requested radius; `sin(kr′) = 1` at every one of them.
pub fn phase_locked_radii(k: f64, targets: &[f64]) -> Vec<f64> {
    targets
        .iter()
        .map(|&r| {
            let m = ((k * r - FRAC_PI_2) / TAU).ceil().max(0.0);
            (TAU * m + FRAC_PI_2) / k
        })
        .collect()
}

/// Largest `|B^r|` over the sample points `(r, θ, φ)`.
pub fn radiation_b_radial_check(model: &dyn SphericalFieldModel, samples: &[(f64, f64, f64)]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Parameter("sample set is empty".into()));
    }
    samples.iter().try_fold(0.0f64, |m, &(r, t, p)| {
        let (_, b) = model.fields(r, t, p)?;
        Ok(m.max(b[0].abs()))
    })
}

/// Outward flux of `E × B` through the sphere of radius `radius`.
pub fn poynting_flux(model: &dyn SphericalFieldModel, radius: f64, quad: SphereQuadrature) -> Result<f64> {
    let failure = std::cell::RefCell::new(None);
    let value = sphere_surface_integral(
        |p| {
            let (r, theta, phi) = to_spherical(p);
            match model.fields(r, theta, phi) {
                Ok((e, b)) => {
                    let s = [e[1] * b[2] - e[2] * b[1], e[2] * b[0] - e[0] * b[2], e[0] * b[1] - e[1] * b[0]];
                    spherical_to_cartesian(s, theta, phi)
                }
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    [f64::NAN; 3]
                }
            }
        },
        radius,
        |_| 1.0,
        quad,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    value
}

/// `(8π/3) cos²(kr)`: the Poynting flux of the model in closed form.
pub fn poynting_flux_closed_form(field: &DipoleFarField, radius: f64) -> f64 {
    8.0 * PI / 3.0 * (field.k * radius).cos().powi(2) * field.amplitude * field.amplitude
}
