use serde::{Deserialize, Serialize};

/// Physical constants threaded through every unit-bearing formula.
///
/// All four default to 1, which makes every identity dimensionless.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Constants {
    pub eps0: f64,
    pub c: f64,
    pub hbar: f64,
    pub q: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self { eps0: 1.0, c: 1.0, hbar: 1.0, q: 1.0 }
    }
}

impl Constants {
    /// SI values with the electron charge magnitude.
    pub fn si() -> Self {
        Self { eps0: 8.8541878128e-12, c: 299_792_458.0, hbar: 1.054571817e-34, q: 1.602176634e-19 }
    }

    /// Flux period of the interference pattern, 2πħ/q.
    pub fn flux_quantum(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.hbar / self.q
    }
}
