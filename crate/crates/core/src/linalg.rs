//! Dense symmetric eigendecomposition and Boltzmann weights.

use faer::{Mat, Side};

use crate::error::{Error, Result};

/// Eigenpairs of a real symmetric matrix; eigenvalues ascending, eigenvectors
/// stored as columns.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Mat<f64>,
}

impl SymmetricEigen {
    pub fn new(matrix: &Mat<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::InvalidArgument(format!(
                "eigendecomposition of a {}x{} matrix",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        for j in 0..matrix.ncols() {
            for i in 0..matrix.nrows() {
                if !matrix[(i, j)].is_finite() {
                    return Err(Error::NonFinite("hamiltonian"));
                }
            }
        }
        let evd = matrix
            .self_adjoint_eigen(Side::Lower)
            .map_err(|_| Error::Eigen)?;
        let s = evd.S().column_vector();
        let values = (0..s.nrows()).map(|i| s[i]).collect();
        Ok(Self {
            values,
            vectors: evd.U().to_owned(),
        })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Normalized Boltzmann weights `e^{-βλ_k} / Σ e^{-βλ}` and `ln Σ e^{-βλ}`.
    ///
    /// Exponents are shifted by `min_k βλ_k`, so both signs of β are safe.
    pub fn boltzmann(&self, beta: f64) -> Result<(Vec<f64>, f64)> {
        boltzmann_weights(&self.values, beta)
    }
}

pub fn boltzmann_weights(values: &[f64], beta: f64) -> Result<(Vec<f64>, f64)> {
    if !beta.is_finite() {
        return Err(Error::NonFinite("beta"));
    }
    let shift = values
        .iter()
        .map(|&l| beta * l)
        .fold(f64::INFINITY, f64::min);
    let mut weights: Vec<f64> = values
        .iter()
        .map(|&l| (-(beta * l - shift)).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    Ok((weights, total.ln() - shift))
}
