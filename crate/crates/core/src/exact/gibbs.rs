//! Canonical Gibbs states on the tensor-product register.

use std::sync::Arc;

use faer::Mat;

use crate::basis::{inner, BasisArray, Mat2};
use crate::error::{Error, Result};
use crate::exact::hamiltonian::{ExactHamiltonian, Register};
use crate::exact::sparse::SparseOp;
use crate::field::{VorticityMatrix, VorticitySource};
use crate::linalg::SymmetricEigen;

#[derive(Clone, Debug)]
pub struct GibbsState {
    hamiltonian: Arc<ExactHamiltonian>,
    eigen: Arc<SymmetricEigen>,
    beta: f64,
    weights: Vec<f64>,
    ln_z: f64,
}

impl GibbsState {
    pub fn new(hamiltonian: ExactHamiltonian, beta: f64) -> Result<Self> {
        let eigen = SymmetricEigen::new(&hamiltonian.operator.to_dense())?;
        Self::from_parts(Arc::new(hamiltonian), Arc::new(eigen), beta)
    }

    fn from_parts(
        hamiltonian: Arc<ExactHamiltonian>,
        eigen: Arc<SymmetricEigen>,
        beta: f64,
    ) -> Result<Self> {
        let (weights, ln_z) = eigen.boltzmann(beta)?;
        Ok(Self {
            hamiltonian,
            eigen,
            beta,
            weights,
            ln_z,
        })
    }

    /// The same Hamiltonian at another inverse temperature, without a new
    /// eigendecomposition.
    pub fn reweighted(&self, beta: f64) -> Result<Self> {
        Self::from_parts(self.hamiltonian.clone(), self.eigen.clone(), beta)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn dim(&self) -> usize {
        self.eigen.dim()
    }

    pub fn register(&self) -> &Register {
        &self.hamiltonian.register
    }

    pub fn hamiltonian(&self) -> &ExactHamiltonian {
        &self.hamiltonian
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `ln Tr e^{-βH}` of the register operator (the additive constant of
    /// the Hamiltonian excluded).
    pub fn ln_partition(&self) -> f64 {
        self.ln_z
    }

    /// `ω_β(A) = Tr(e^{-βH} A) / Tr(e^{-βH})`.
    pub fn expectation(&self, a: &SparseOp) -> Result<f64> {
        if a.dim() != self.dim() {
            return Err(Error::InvalidArgument(format!(
                "observable of dimension {} on a state of dimension {}",
                a.dim(),
                self.dim()
            )));
        }
        let v = &self.eigen.vectors;
        Ok(self
            .weights
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != 0.0)
            .map(|(k, &p)| p * a.quadratic_form(v.col(k)))
            .sum())
    }

    /// Single-qubit reduced density matrix of a lattice site.
    pub fn reduced_density(&self, site: usize) -> Result<Mat2> {
        let reg = self.register();
        let q = reg.qubit(site).ok_or_else(|| {
            Error::InvalidArgument(format!("lattice site {site} is not in the register"))
        })?;
        Ok(reduced_density_qubit(
            &self.eigen.vectors,
            &self.weights,
            reg.n_qubits(),
            q,
        ))
    }

    /// `max |UᵀU - I|` over the eigenvector matrix.
    pub fn orthogonality_residual(&self) -> f64 {
        let u = &self.eigen.vectors;
        let g = u.transpose() * u;
        let mut worst = 0.0f64;
        for j in 0..g.ncols() {
            for i in 0..g.nrows() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - target).abs());
            }
        }
        worst
    }

    /// `max |U diag(λ) Uᵀ - H|`.
    pub fn reconstruction_residual(&self) -> f64 {
        let u = &self.eigen.vectors;
        let n = self.dim();
        let scaled = Mat::from_fn(n, n, |i, k| u[(i, k)] * self.eigen.values[k]);
        let rebuilt = scaled * u.transpose();
        let h = self.hamiltonian.operator.to_dense();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                worst = worst.max((rebuilt[(i, j)] - h[(i, j)]).abs());
            }
        }
        worst
    }
}

pub(crate) fn reduced_density_qubit(
    vectors: &Mat<f64>,
    weights: &[f64],
    n_qubits: usize,
    q: usize,
) -> Mat2 {
    let mask = 1usize << (n_qubits - 1 - q);
    let dim = 1usize << n_qubits;
    let (mut r00, mut r01, mut r11) = (0.0, 0.0, 0.0);
    for (k, &p) in weights.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let v = vectors.col(k);
        let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
        for i0 in (0..dim).filter(|i| i & mask == 0) {
            let (x, y) = (v[i0], v[i0 | mask]);
            a += x * x;
            b += x * y;
            c += y * y;
        }
        r00 += p * a;
        r01 += p * b;
        r11 += p * c;
    }
    Mat2::new(r00, r01, r01, r11)
}

/// `Ω_rc = Tr(ρ b_{2r+c})` for a symmetric single-site density `ρ`.
pub(crate) fn vorticity_from_density(rho: &Mat2, basis: &BasisArray) -> VorticityMatrix {
    let omega = Mat2::from_fn(|r, c| inner(basis.at(r, c), rho));
    VorticityMatrix::from_omega(omega)
}

impl VorticitySource for GibbsState {
    fn site_indices(&self) -> Vec<usize> {
        self.register().members().iter().map(|&(i, _)| i).collect()
    }

    fn vorticity(&self, site: usize, basis: &BasisArray) -> Result<VorticityMatrix> {
        let rho = self.reduced_density(site)?;
        Ok(vorticity_from_density(&rho, basis))
    }
}
