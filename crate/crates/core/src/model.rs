//! Parameters of the anisotropic XY family shared by both engines.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How compressed boundary sites enter the exact engine.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryMode {
    /// Boundary sites stay in the quantum register, carrying compressed
    /// operators `Π σ Π`.
    Full,
    /// Boundary sites are projected onto the range of `Π(θ)` and leave the
    /// register; interior neighbors feel the resulting effective fields.
    #[default]
    Clamped,
}

/// `H = -1/(2(n+k)) Σ_<ij> (n σˣσˣ + k σʸσʸ + u σᶻσᶻ) + h Σ_{i interior} σᶻ_i`,
/// with boundary operators replaced by their compressed versions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSpec {
    pub n: f64,
    pub k: f64,
    #[serde(default)]
    pub u: f64,
    #[serde(default)]
    pub h: f64,
    #[serde(default)]
    pub boundary_mode: BoundaryMode,
}

impl HamiltonianSpec {
    pub fn xy(n: f64, k: f64) -> Self {
        Self {
            n,
            k,
            u: 0.0,
            h: 0.0,
            boundary_mode: BoundaryMode::Clamped,
        }
    }

    pub fn with_mode(mut self, mode: BoundaryMode) -> Self {
        self.boundary_mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.n, self.k, self.u, self.h]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::NonFinite("hamiltonian parameters"));
        }
        if self.n <= 0.0 || self.k <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "couplings must be positive (n = {}, k = {})",
                self.n, self.k
            )));
        }
        Ok(())
    }

    /// The common prefactor `1 / (2(n+k))`.
    pub fn prefactor(&self) -> f64 {
        1.0 / (2.0 * (self.n + self.k))
    }
}
