//! Engine selection: one prepared spectrum, Gibbs states at any β, and
//! vorticity fields over the evaluated sites.

use crate::basis::BasisArray;
use crate::block::{BlockGibbs, BlockHamiltonian, BlockSpectrum, DEFAULT_BLOCK_CAP};
use crate::error::Result;
use crate::exact::{
    build_hamiltonian, sector_gibbs, GibbsState, SectorGibbs, SectorOptions, DEFAULT_DIMENSION_CAP,
};
use crate::field::{EngineKind, FieldEntry, VorticityField, VorticityMatrix, VorticitySource};
use crate::lattice::{BoundaryAngles, Lattice};
use crate::model::{BoundaryMode, HamiltonianSpec};

#[derive(Clone, Debug)]
pub struct EngineOptions {
    /// Largest dense register dimension for the exact engine.
    pub exact_cap: usize,
    /// Largest boundary-site count enumerated by the sector decomposition.
    pub sector_cap_log2: usize,
    /// Largest `4N` for the block engine.
    pub block_cap: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self {
            exact_cap: DEFAULT_DIMENSION_CAP,
            sector_cap_log2: crate::exact::sector::DEFAULT_SECTOR_CAP_LOG2,
            block_cap: DEFAULT_BLOCK_CAP,
        }
    }
}

/// A Hamiltonian with its eigendecomposition done, ready for any β.
#[derive(Clone, Debug)]
pub enum Prepared {
    Exact(GibbsState),
    /// Full mode beyond the dense cap: sectors are rebuilt per β.
    Sector {
        lattice: Lattice,
        spec: HamiltonianSpec,
        angles: BoundaryAngles,
        options: SectorOptions,
    },
    Block(BlockSpectrum),
}

impl Prepared {
    pub fn new(
        lattice: &Lattice,
        spec: &HamiltonianSpec,
        angles: &BoundaryAngles,
        engine: EngineKind,
        options: &EngineOptions,
    ) -> Result<Self> {
        match engine {
            EngineKind::Block => {
                let h = BlockHamiltonian::build(lattice, spec, angles, options.block_cap)?;
                Ok(Prepared::Block(BlockSpectrum::new(&h)?))
            }
            EngineKind::Exact => {
                let full_fits = lattice.len() < usize::BITS as usize
                    && (1usize << lattice.len()) <= options.exact_cap;
                if spec.boundary_mode == BoundaryMode::Full && !full_fits {
                    return Ok(Prepared::Sector {
                        lattice: lattice.clone(),
                        spec: *spec,
                        angles: angles.clone(),
                        options: SectorOptions {
                            dimension_cap: options.exact_cap,
                            sector_cap_log2: options.sector_cap_log2,
                        },
                    });
                }
                let h = build_hamiltonian(lattice, spec, angles, options.exact_cap)?;
                Ok(Prepared::Exact(GibbsState::new(h, 0.0)?))
            }
        }
    }

    pub fn state(&self, beta: f64) -> Result<EngineState> {
        Ok(match self {
            Prepared::Exact(g) => EngineState::Exact(g.reweighted(beta)?),
            Prepared::Sector {
                lattice,
                spec,
                angles,
                options,
            } => EngineState::Sector(sector_gibbs(lattice, spec, angles, beta, options)?),
            Prepared::Block(s) => EngineState::Block(s.gibbs(beta)?),
        })
    }
}

#[derive(Clone, Debug)]
pub enum EngineState {
    Exact(GibbsState),
    Sector(SectorGibbs),
    Block(BlockGibbs),
}

impl EngineState {
    pub fn kind(&self) -> EngineKind {
        match self {
            EngineState::Block(_) => EngineKind::Block,
            _ => EngineKind::Exact,
        }
    }
}

impl VorticitySource for EngineState {
    fn site_indices(&self) -> Vec<usize> {
        match self {
            EngineState::Exact(g) => g.site_indices(),
            EngineState::Sector(g) => g.site_indices(),
            EngineState::Block(g) => g.site_indices(),
        }
    }

    fn vorticity(&self, site: usize, basis: &BasisArray) -> Result<VorticityMatrix> {
        match self {
            EngineState::Exact(g) => g.vorticity(site, basis),
            EngineState::Sector(g) => g.vorticity(site, basis),
            EngineState::Block(g) => g.vorticity(site, basis),
        }
    }
}

/// Vorticity matrices at every site the source evaluates, in lattice order.
pub fn compute_field(
    lattice: &Lattice,
    source: &impl VorticitySource,
    basis: &BasisArray,
) -> Result<VorticityField> {
    let mut entries = Vec::new();
    for i in source.site_indices() {
        entries.push(FieldEntry {
            site: lattice.site(i),
            role: lattice.role(i),
            matrix: source.vorticity(i, basis)?,
        });
    }
    let mut field = VorticityField { entries };
    field.sort();
    Ok(field)
}

/// One-shot convenience: prepare, take the state at `beta`, extract the field.
pub fn simulate(
    lattice: &Lattice,
    spec: &HamiltonianSpec,
    angles: &BoundaryAngles,
    beta: f64,
    engine: EngineKind,
    basis: &BasisArray,
    options: &EngineOptions,
) -> Result<VorticityField> {
    let prepared = Prepared::new(lattice, spec, angles, engine, options)?;
    compute_field(lattice, &prepared.state(beta)?, basis)
}
