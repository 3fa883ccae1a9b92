//! Longitudinal/transverse split and gauge fixing into the Coulomb gauge.
//!
//! `L = −∇ N[∇·F]` and `T = ∇ × N[∇×F]`, where `N` is the Newtonian
//! convolution. The gauge function is `χ = N[∇·A]`, so `∇χ = −L` and
//! `A + ∇χ` is transverse.

use serde::Serialize;

use crate::error::Result;
use crate::fieldcore::{
    curl, divergence, gradient, newtonian_convolve_scalar, newtonian_convolve_vector, ScalarField, VectorField3,
};

/// Cells next to each face that count as the boundary window.
pub const BOUNDARY_WINDOW: usize = 2;

/// Fraction of the peak magnitude above which a field "touches" the boundary window.
pub const BOUNDARY_THRESHOLD: f64 = 1e-3;

/// True when `F` exceeds `1e-3 · max|F|` within two cells of a face.
pub fn support_touches_boundary(field: &VectorField3) -> bool {
    let peak = field.max_norm();
    peak > 0.0 && field.max_norm_boundary(BOUNDARY_WINDOW) > BOUNDARY_THRESHOLD * peak
}

/// Result of [`decompose`].
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub longitudinal: VectorField3,
    pub transverse: VectorField3,
    /// Input support reaches the boundary window; results there are truncated.
    pub boundary_warning: bool,
}

impl Decomposition {
    /// `max|L + T − F|` over interior cells relative to `max|F|`.
    pub fn reconstruction_residual(&self, input: &VectorField3, margin: usize) -> Result<f64> {
        self.longitudinal.add(&self.transverse)?.relative_error_interior(input, margin)
    }
}

pub fn longitudinal(field: &VectorField3) -> Result<VectorField3> {
    let psi = newtonian_convolve_scalar(&divergence(field)?)?;
    Ok(gradient(&psi)?.scaled(-1.0))
}

pub fn transverse(field: &VectorField3) -> Result<VectorField3> {
    curl(&newtonian_convolve_vector(&curl(field)?)?)
}

pub fn decompose(field: &VectorField3) -> Result<Decomposition> {
    Ok(Decomposition {
        longitudinal: longitudinal(field)?,
        transverse: transverse(field)?,
        boundary_warning: support_touches_boundary(field),
    })
}

/// `χ = N[∇·A]`, with no constant renormalisation.
pub fn coulomb_gauge_function(a: &VectorField3) -> Result<ScalarField> {
    newtonian_convolve_scalar(&divergence(a)?)
}

/// `A + ∇χ` with `χ` from [`coulomb_gauge_function`].
pub fn to_coulomb_gauge(a: &VectorField3) -> Result<VectorField3> {
    a.add(&gradient(&coulomb_gauge_function(a)?)?)
}

/// Interior residual summary for a decomposition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub input_max: f64,
    pub longitudinal_max: f64,
    pub transverse_max: f64,
    pub reconstruction_residual: f64,
    pub transverse_divergence_max: f64,
    pub longitudinal_curl_max: f64,
    pub boundary_warning: bool,
    pub interior_margin: usize,
}

pub fn report(input: &VectorField3, d: &Decomposition, margin: usize) -> Result<DecompositionReport> {
    Ok(DecompositionReport {
        input_max: input.max_norm(),
        longitudinal_max: d.longitudinal.max_norm_interior(margin),
        transverse_max: d.transverse.max_norm_interior(margin),
        reconstruction_residual: d.reconstruction_residual(input, margin)?,
        transverse_divergence_max: divergence(&d.transverse)?.max_abs_interior(margin),
        longitudinal_curl_max: curl(&d.longitudinal)?.max_norm_interior(margin),
        boundary_warning: d.boundary_warning,
        interior_margin: margin,
    })
}
