//! Run configuration: parsing, validation and the content hash.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use vorticity_core::block::DEFAULT_BLOCK_CAP;
use vorticity_core::exact::sector::DEFAULT_SECTOR_CAP_LOG2;
use vorticity_core::exact::DEFAULT_DIMENSION_CAP;
use vorticity_core::{
    BasisArray, BoundaryMode, EngineKind, EngineOptions, HamiltonianSpec, LatticeSpec,
    OrthogonalMap,
};

use crate::error::{CliError, CliResult};

/// The observable basis: `δ` or its conjugate `ᵗPδP`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BasisConfig {
    #[default]
    Delta,
    /// `P` the rotation by `s`.
    Rotated { s: f64 },
    /// `P` the reflection across the line at angle `s / 2`.
    Reflected { s: f64 },
}

impl BasisConfig {
    pub fn basis(&self) -> BasisArray {
        match *self {
            BasisConfig::Delta => BasisArray::delta(),
            BasisConfig::Rotated { s } => {
                BasisArray::delta().conjugate(&OrthogonalMap::rotation(s))
            }
            BasisConfig::Reflected { s } => {
                BasisArray::delta().conjugate(&OrthogonalMap::reflection(s))
            }
        }
    }
}

fn default_betas() -> Vec<f64> {
    vec![1.0]
}

fn default_depths() -> Vec<usize> {
    vec![1]
}

fn default_exact_cap() -> usize {
    DEFAULT_DIMENSION_CAP
}

fn default_block_cap() -> usize {
    DEFAULT_BLOCK_CAP
}

fn default_sector_cap() -> usize {
    DEFAULT_SECTOR_CAP_LOG2
}

fn default_engine() -> EngineKind {
    EngineKind::Exact
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub lattice: LatticeSpec,
    #[serde(default = "default_engine")]
    pub engine: EngineKind,
    #[serde(default)]
    pub boundary_mode: BoundaryMode,
    pub n: f64,
    pub k: f64,
    #[serde(default)]
    pub u: f64,
    #[serde(default)]
    pub h: f64,
    #[serde(default = "default_betas")]
    pub betas: Vec<f64>,
    #[serde(default)]
    pub d: f64,
    #[serde(default)]
    pub phi: f64,
    #[serde(default)]
    pub basis: BasisConfig,
    #[serde(default = "default_depths")]
    pub contour_depths: Vec<usize>,
    /// Vortex threshold; the relative default applies when absent.
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub output_dir: Option<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_exact_cap")]
    pub exact_cap: usize,
    #[serde(default = "default_sector_cap")]
    pub sector_cap_log2: usize,
    #[serde(default = "default_block_cap")]
    pub block_cap: usize,
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Schema(msg) => CliError::Schema(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> CliResult<()> {
        let schema = |msg: String| Err(CliError::Schema(msg));
        self.lattice
            .validate()
            .map_err(|e| CliError::Schema(e.to_string()))?;
        self.hamiltonian()
            .validate()
            .map_err(|e| CliError::Schema(e.to_string()))?;
        if self.betas.is_empty() {
            return schema("`betas` must list at least one inverse temperature".into());
        }
        if let Some(b) = self.betas.iter().find(|b| !b.is_finite()) {
            return schema(format!("`betas` contains a non-finite value {b}"));
        }
        if !self.d.is_finite() || !self.phi.is_finite() {
            return schema("`d` and `phi` must be finite".into());
        }
        if let BasisConfig::Rotated { s } | BasisConfig::Reflected { s } = self.basis {
            if !s.is_finite() {
                return schema("basis parameter `s` must be finite".into());
            }
        }
        if self.contour_depths.contains(&0) {
            return schema("`contour_depths` are 1-based; 0 is not a ring".into());
        }
        if let Some(e) = self.epsilon {
            if e.is_nan() || e <= 0.0 {
                return schema(format!("`epsilon` must be positive, got {e}"));
            }
        }
        Ok(())
    }

    pub fn hamiltonian(&self) -> HamiltonianSpec {
        HamiltonianSpec {
            n: self.n,
            k: self.k,
            u: self.u,
            h: self.h,
            boundary_mode: self.boundary_mode,
        }
    }

    pub fn engine_options(&self) -> EngineOptions {
        EngineOptions {
            exact_cap: self.exact_cap,
            sector_cap_log2: self.sector_cap_log2,
            block_cap: self.block_cap,
        }
    }

    /// SHA-256 over the canonical JSON of every field except `output_dir`.
    pub fn hash(&self) -> String {
        let mut value = serde_json::to_value(self).expect("config serializes");
        if let Some(map) = value.as_object_mut() {
            map.remove("output_dir");
        }
        // serde_json maps are ordered by key, so this text is canonical
        let text = serde_json::to_string(&value).expect("value serializes");
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// The published JSON schema for [`RunConfig`].
pub const RUN_CONFIG_SCHEMA: &str = include_str!("../schemas/run_config.schema.json");
