//! Orbital stability of relative equilibria by the energy-momentum method.
//!
//! Three concrete systems are covered:
//!
//! - [`spherical`]: a particle in a radial potential, circular orbits and their
//!   Lyapunov Hessians.
//! - [`torus`]: cubic NLS plane waves on a periodic interval, plus bright
//!   solitons, boosts and the Manakov system.
//! - [`standing`]: standing waves of an inhomogeneous NLS on the line,
//!   computed by shooting and continuation.
//!
//! [`harness`] runs coercivity probes and perturbation experiments against any
//! of them, and [`cli`] wraps everything behind a config-driven command line.

pub mod cli;
pub mod harness;
pub mod numerics;
pub mod spherical;
pub mod standing;
pub mod torus;

mod error;

pub use error::{Error, Result};

use serde::{Deserialize, Serialize};

/// Outcome of a linear stability test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Unstable,
    Marginal,
}

impl Verdict {
    /// Classify the sign of `value`, calling it marginal when `|value| <= tol`.
    pub fn from_sign(value: f64, tol: f64) -> Self {
        if value.abs() <= tol {
            Verdict::Marginal
        } else if value > 0.0 {
            Verdict::Stable
        } else {
            Verdict::Unstable
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Stable => "stable",
            Verdict::Unstable => "unstable",
            Verdict::Marginal => "marginal",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
