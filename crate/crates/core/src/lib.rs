//! Coulomb-gauge potentials computed from field snapshots.
//!
//! The crate turns sampled electric and magnetic fields into the
//! instantaneous, nonlocal Coulomb-gauge potentials
//! `φ = ∇·∫E/4π|r−r′|` and `A = ∇×∫B/4π|r−r′|`, checks them against the
//! defining relations, and measures the identities that go with them: the
//! Helmholtz split, the minimal `∫A²` property, the finite flux-loop
//! potential with its return path, the Aharonov–Bohm phase and fringe
//! period, and the decay of far-field surface terms.
//!
//! ```no_run
//! use coulomb_gauge::{presets::FluxTube, potentials, fieldcore::{Grid3, curl}};
//!
//! let grid = Grid3::cube(24, 1.0).unwrap();
//! let tube = FluxTube::for_grid(&grid);
//! let b = tube.sample_b(&grid).unwrap();
//! let a = potentials::vector_potential_from_b(&b).unwrap();
//! let err = curl(&a.field).unwrap().relative_error_interior(&b, 2).unwrap();
//! println!("curl A reproduces B to {:.2}%", 100.0 * err);
//! ```
//!
//! Runnable walkthroughs live in `examples/`.

// Quadrature tables keep their published digits; `!(x > 0)` rejects NaN by
// design; tensor and axis loops read clearer with explicit indices.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod abphase;
pub mod cli;
pub mod error;
pub mod fieldcore;
pub mod helmholtz;
pub mod potentials;
pub mod presets;
pub mod radiation;
pub mod solenoid;
pub mod units;

pub use error::{Error, Result};
pub use units::Constants;
