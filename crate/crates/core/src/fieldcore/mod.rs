//! Grids, field containers, finite-difference operators, quadrature and the
//! shared Newtonian-kernel convolution.

pub mod convolve;
pub mod field;
pub mod grid;
pub mod integrate;
pub mod io;
pub mod ops;
pub mod quadrature;

pub use convolve::{
    gradient_kernel_convolve, newtonian_convolve, newtonian_convolve_scalar, newtonian_convolve_scalar_onto,
    newtonian_convolve_vector, newtonian_convolve_vector_onto, self_cell_integral, FieldKind,
};
pub use field::{add3, cross3, dot3, norm3, scale3, sub3, PathPolyline, ScalarField, Vec3, VectorField3};
pub use grid::{Grid3, MAX_CELLS};
pub use integrate::{line_integral, sphere_surface_integral, Analytic, LineQuadrature, SphereQuadrature, VectorSource};
pub use ops::{curl, divergence, gradient};
