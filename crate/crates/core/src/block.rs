//! Block engine on `C^N ⊗ C² ⊗ C²` (dimension `4N`).
//!
//! Each nearest-neighbour pair carries a 4×4 internal coupling on the
//! symmetric hop `|i⟩⟨j| + |j⟩⟨i|`; observables at site `i` are lifted by
//! the coproduct to `|i⟩⟨i| ⊗ Δ(x)`. This is a reconstruction, and every
//! placement choice lives in [`pair_coupling`].

use faer::Mat;

use crate::basis::{coproduct, i_sigma_y, kron, sigma_x, sigma_z, BasisArray, Mat2, Mat4};
use crate::error::{Error, Result};
use crate::exact::CompressionProjector;
use crate::field::{VorticityMatrix, VorticitySource};
use crate::lattice::{BoundaryAngles, Lattice};
use crate::linalg::SymmetricEigen;
use crate::model::HamiltonianSpec;

pub const DEFAULT_BLOCK_CAP: usize = 8192;

#[derive(Clone, Debug)]
pub struct BlockHamiltonian {
    sites: usize,
    matrix: Mat<f64>,
}

impl BlockHamiltonian {
    pub fn build(
        lattice: &Lattice,
        spec: &HamiltonianSpec,
        angles: &BoundaryAngles,
        cap: usize,
    ) -> Result<Self> {
        spec.validate()?;
        let n = lattice.len();
        if 4 * n > cap {
            return Err(Error::Capacity {
                dimension: 4 * n,
                cap,
            });
        }
        let mut matrix = Mat::zeros(4 * n, 4 * n);
        for &(a, b) in lattice.nn_pairs() {
            let c = pair_coupling(lattice, spec, angles, a, b);
            for r in 0..4 {
                for s in 0..4 {
                    matrix[(4 * a + r, 4 * b + s)] += c[(r, s)];
                    matrix[(4 * b + r, 4 * a + s)] += c[(s, r)];
                }
            }
        }
        if spec.h != 0.0 {
            let field = spec.h * coproduct(&sigma_z());
            for i in lattice.interior_indices() {
                for r in 0..4 {
                    for s in 0..4 {
                        matrix[(4 * i + r, 4 * i + s)] += field[(r, s)];
                    }
                }
            }
        }
        Ok(Self { sites: n, matrix })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> usize {
        4 * self.sites
    }

    pub fn matrix(&self) -> &Mat<f64> {
        &self.matrix
    }

    pub fn max_asymmetry(&self) -> f64 {
        let m = &self.matrix;
        let mut worst = 0.0f64;
        for j in 0..m.ncols() {
            for i in 0..j {
                worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        worst
    }
}

/// Internal 4×4 block attached to the hop from `a` to `b` (`a < b`).
///
/// Interior pairs get `n XX + k YY + u ZZ`. A boundary factor is replaced by
/// its compressed operator; a mixed pair carries both factor orderings, and
/// a boundary pair keeps row-major order.
pub fn pair_coupling(
    lattice: &Lattice,
    spec: &HamiltonianSpec,
    angles: &BoundaryAngles,
    a: usize,
    b: usize,
) -> Mat4 {
    let compressed = |j: usize| {
        let p = CompressionProjector::new(angles.theta(j).unwrap_or(0.0));
        (p.sigma_x(), p.sigma_z())
    };
    let (x, z) = (sigma_x(), sigma_z());
    let c = match (lattice.is_boundary(a), lattice.is_boundary(b)) {
        (false, false) => {
            let iy = i_sigma_y();
            spec.n * kron(&x, &x) - spec.k * kron(&iy, &iy) + spec.u * kron(&z, &z)
        }
        (true, true) => {
            let ((xa, za), (xb, zb)) = (compressed(a), compressed(b));
            spec.n * kron(&xa, &xb) + spec.u * kron(&za, &zb)
        }
        (ba, _) => {
            let (xj, zj) = compressed(if ba { a } else { b });
            spec.n * (kron(&x, &xj) + kron(&xj, &x)) + spec.u * (kron(&z, &zj) + kron(&zj, &z))
        }
    };
    -spec.prefactor() * c
}

/// `|i⟩⟨i| ⊗ Δ(x)` on the `4N` space.
pub fn lifted_observable(sites: usize, i: usize, x: &Mat2) -> Result<Mat<f64>> {
    if i >= sites {
        return Err(Error::InvalidArgument(format!(
            "site {i} out of range for {sites} sites"
        )));
    }
    let d = coproduct(x);
    let mut m = Mat::zeros(4 * sites, 4 * sites);
    for r in 0..4 {
        for s in 0..4 {
            m[(4 * i + r, 4 * i + s)] = d[(r, s)];
        }
    }
    Ok(m)
}

/// `e^{-βH} / Tr e^{-βH}` restricted to the diagonal 4×4 site blocks.
#[derive(Clone, Debug)]
pub struct BlockGibbs {
    beta: f64,
    blocks: Vec<Mat4>,
}

/// Eigendecomposition of a block Hamiltonian, reusable across β.
#[derive(Clone, Debug)]
pub struct BlockSpectrum {
    sites: usize,
    eigen: SymmetricEigen,
}

impl BlockSpectrum {
    pub fn new(h: &BlockHamiltonian) -> Result<Self> {
        Ok(Self {
            sites: h.sites,
            eigen: SymmetricEigen::new(&h.matrix)?,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen.values
    }

    pub fn gibbs(&self, beta: f64) -> Result<BlockGibbs> {
        let (weights, _) = self.eigen.boltzmann(beta)?;
        let v = &self.eigen.vectors;
        let blocks = (0..self.sites)
            .map(|i| {
                Mat4::from_fn(|r, s| {
                    let (ra, sa) = (4 * i + r, 4 * i + s);
                    weights
                        .iter()
                        .enumerate()
                        .map(|(k, &p)| p * v[(ra, k)] * v[(sa, k)])
                        .sum()
                })
            })
            .collect();
        Ok(BlockGibbs { beta, blocks })
    }
}

impl BlockGibbs {
    pub fn new(h: &BlockHamiltonian, beta: f64) -> Result<Self> {
        BlockSpectrum::new(h)?.gibbs(beta)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sites(&self) -> usize {
        self.blocks.len()
    }

    /// Diagonal block of the normalized Gibbs operator at site `i`.
    pub fn block(&self, i: usize) -> &Mat4 {
        &self.blocks[i]
    }
}

impl VorticitySource for BlockGibbs {
    fn site_indices(&self) -> Vec<usize> {
        (0..self.blocks.len()).collect()
    }

    fn vorticity(&self, site: usize, basis: &BasisArray) -> Result<VorticityMatrix> {
        let g = self.blocks.get(site).ok_or_else(|| {
            Error::InvalidArgument(format!("site {site} out of range for the block state"))
        })?;
        // Tr(G Δ(x)) with G symmetric
        let omega = Mat2::from_fn(|r, c| {
            let d = coproduct(basis.at(r, c));
            g.component_mul(&d).sum()
        });
        Ok(VorticityMatrix::from_omega(omega))
    }
}
