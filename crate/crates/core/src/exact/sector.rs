//! Full-mode Gibbs states assembled from boundary-occupation sectors.
//!
//! Every boundary operator is a multiple of its projector `Π_j`, so each
//! `Π_j` commutes with `H`. Fixing the occupations `s_j ∈ {0, 1}` leaves an
//! interior problem whose boundary fields are scaled by `s_j`, plus a scalar
//! from boundary–boundary bonds.

use std::collections::BTreeMap;

use crate::basis::{BasisArray, Mat2};
use crate::error::{Error, Result};
use crate::exact::gibbs::{vorticity_from_density, GibbsState};
use crate::exact::hamiltonian::{build_interior, DEFAULT_DIMENSION_CAP};
use crate::field::{VorticityMatrix, VorticitySource};
use crate::lattice::{BoundaryAngles, Lattice};
use crate::model::{BoundaryMode, HamiltonianSpec};

pub const DEFAULT_SECTOR_CAP_LOG2: usize = 20;

#[derive(Clone, Debug)]
pub struct SectorOptions {
    pub dimension_cap: usize,
    pub sector_cap_log2: usize,
}

impl Default for SectorOptions {
    fn default() -> Self {
        Self {
            dimension_cap: DEFAULT_DIMENSION_CAP,
            sector_cap_log2: DEFAULT_SECTOR_CAP_LOG2,
        }
    }
}

/// One interior problem, shared by every sector with the same occupations
/// on interior-adjacent boundary sites.
#[derive(Clone, Debug)]
pub struct SectorPattern {
    /// Occupation bits of the interior-adjacent boundary sites.
    pub key: u64,
    pub weight: f64,
    pub state: GibbsState,
}

#[derive(Clone, Debug)]
pub struct SectorGibbs {
    beta: f64,
    adjacent: Vec<usize>,
    patterns: Vec<SectorPattern>,
    ln_z: f64,
}

pub fn sector_gibbs(
    lattice: &Lattice,
    spec: &HamiltonianSpec,
    angles: &BoundaryAngles,
    beta: f64,
    options: &SectorOptions,
) -> Result<SectorGibbs> {
    spec.validate()?;
    if spec.boundary_mode != BoundaryMode::Full {
        return Err(Error::SectorModeMismatch);
    }
    if !beta.is_finite() {
        return Err(Error::NonFinite("beta"));
    }
    let boundary: Vec<usize> = lattice.boundary_indices().collect();
    if boundary.len() > options.sector_cap_log2 || boundary.len() >= 64 {
        return Err(Error::SectorCount {
            boundary_sites: boundary.len(),
            cap_log2: options.sector_cap_log2,
        });
    }
    let adjacent: Vec<usize> = boundary
        .iter()
        .copied()
        .filter(|&j| lattice.neighbors(j).any(|i| !lattice.is_boundary(i)))
        .collect();

    let pref = spec.prefactor();
    let theta = |j: usize| 2.0 * angles.theta(j).unwrap_or(0.0);
    let bonds: Vec<(usize, usize, f64)> = lattice
        .nn_pairs()
        .iter()
        .filter(|&&(a, b)| lattice.is_boundary(a) && lattice.is_boundary(b))
        .map(|&(a, b)| {
            let (ta, tb) = (theta(a), theta(b));
            let slot = |j| boundary.iter().position(|&x| x == j).unwrap();
            let value = spec.n * ta.sin() * tb.sin() + spec.u * ta.cos() * tb.cos();
            (slot(a), slot(b), -pref * value)
        })
        .collect();
    let adjacent_slots: Vec<usize> = adjacent
        .iter()
        .map(|j| boundary.iter().position(|x| x == j).unwrap())
        .collect();

    // -β·(boundary constant) of every sector, grouped by interior pattern
    let mut exponents: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for s in 0..(1u64 << boundary.len()) {
        let on = |slot: usize| (s >> slot) & 1 == 1;
        let c: f64 = bonds
            .iter()
            .filter(|&&(a, b, _)| on(a) && on(b))
            .map(|&(_, _, v)| v)
            .sum();
        let key = adjacent_slots
            .iter()
            .enumerate()
            .fold(0u64, |k, (bit, &slot)| k | (u64::from(on(slot)) << bit));
        exponents.entry(key).or_default().push(-beta * c);
    }

    let mut logs = Vec::with_capacity(exponents.len());
    let mut states = Vec::with_capacity(exponents.len());
    for (&key, exps) in &exponents {
        let mut occupation = vec![0.0; lattice.len()];
        for (bit, &j) in adjacent.iter().enumerate() {
            occupation[j] = ((key >> bit) & 1) as f64;
        }
        let mut h = build_interior(lattice, spec, angles, &occupation, options.dimension_cap)?;
        h.constant = 0.0;
        let state = GibbsState::new(h, beta)?;
        logs.push(log_sum_exp(exps) + state.ln_partition());
        states.push((key, state));
    }
    let ln_z = log_sum_exp(&logs);
    let patterns = states
        .into_iter()
        .zip(&logs)
        .map(|((key, state), &l)| SectorPattern {
            key,
            weight: (l - ln_z).exp(),
            state,
        })
        .collect();
    Ok(SectorGibbs {
        beta,
        adjacent,
        patterns,
        ln_z,
    })
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

impl SectorGibbs {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Interior-adjacent boundary sites, in the bit order of pattern keys.
    pub fn adjacent_boundary(&self) -> &[usize] {
        &self.adjacent
    }

    pub fn patterns(&self) -> &[SectorPattern] {
        &self.patterns
    }

    /// `ln Tr e^{-βH}` over the full register.
    pub fn ln_partition(&self) -> f64 {
        self.ln_z
    }

    /// The sector with every interior-adjacent projector occupied; its state
    /// coincides with the clamped-mode Gibbs state.
    pub fn all_on(&self) -> Option<&SectorPattern> {
        let full = if self.adjacent.is_empty() {
            0
        } else {
            u64::MAX >> (64 - self.adjacent.len())
        };
        self.patterns.iter().find(|p| p.key == full)
    }

    pub fn reduced_density(&self, site: usize) -> Result<Mat2> {
        let mut rho = Mat2::zeros();
        for p in &self.patterns {
            rho += p.weight * p.state.reduced_density(site)?;
        }
        Ok(rho)
    }
}

impl VorticitySource for SectorGibbs {
    fn site_indices(&self) -> Vec<usize> {
        self.patterns
            .first()
            .map(|p| p.state.site_indices())
            .unwrap_or_default()
    }

    fn vorticity(&self, site: usize, basis: &BasisArray) -> Result<VorticityMatrix> {
        Ok(vorticity_from_density(&self.reduced_density(site)?, basis))
    }
}
