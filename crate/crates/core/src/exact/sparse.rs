//! Compressed-row real operators on `(C²)^{⊗n}`.

use faer::{ColRef, Mat};

use crate::basis::Mat2;

#[derive(Clone, Debug, PartialEq)]
pub struct SparseOp {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseOp {
    /// Duplicates are summed; exact zeros are dropped.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals = Vec::with_capacity(triplets.len());
        let mut rows = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            debug_assert!(r < dim && c < dim);
            if let (Some(&lr), Some(&lc)) = (rows.last(), cols.last()) {
                if lr == r && lc == c {
                    *vals.last_mut().unwrap() += v;
                    continue;
                }
            }
            rows.push(r);
            cols.push(c);
            vals.push(v);
        }
        let (mut k_rows, mut k_cols, mut k_vals) = (Vec::new(), Vec::new(), Vec::new());
        for ((r, c), v) in rows.into_iter().zip(cols).zip(vals) {
            if v != 0.0 {
                k_rows.push(r);
                k_cols.push(c);
                k_vals.push(v);
            }
        }
        for &r in &k_rows {
            row_ptr[r + 1] += 1;
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            dim,
            row_ptr,
            cols: k_cols,
            vals: k_vals,
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_triplets(dim, Vec::new())
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_triplets(dim, (0..dim).map(|i| (i, i, 1.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()]
            .iter()
            .copied()
            .zip(self.vals[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.row(r).find(|&(cc, _)| cc == c).map_or(0.0, |(_, v)| v)
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::from_triplets(
            self.dim,
            self.triplets().map(|(r, c, v)| (r, c, s * v)).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self::from_triplets(self.dim, self.triplets().chain(other.triplets()).collect())
    }

    /// Largest `|A_ij - A_ji|`.
    pub fn max_asymmetry(&self) -> f64 {
        self.triplets()
            .map(|(r, c, v)| (v - self.get(c, r)).abs())
            .fold(0.0, f64::max)
    }

    /// `½(A + Aᵀ)`, exactly symmetric in floating point.
    pub fn symmetrized(&self) -> Self {
        let triplets = self
            .triplets()
            .chain(self.triplets().map(|(r, c, _)| (c, r, 0.0)))
            .map(|(r, c, _)| (r, c))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .map(|(r, c)| (r, c, 0.5 * (self.get(r, c) + self.get(c, r))))
            .collect();
        Self::from_triplets(self.dim, triplets)
    }

    pub fn to_dense(&self) -> Mat<f64> {
        let mut m = Mat::zeros(self.dim, self.dim);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        m
    }

    /// `vᵀ A v`.
    pub fn quadratic_form(&self, v: ColRef<'_, f64>) -> f64 {
        (0..self.dim)
            .map(|r| v[r] * self.row(r).map(|(c, a)| a * v[c]).sum::<f64>())
            .sum()
    }
}

/// Triplets of `coeff · ⊗_q m_q` on an `n_qubits` register, with the listed
/// single-qubit factors and identity elsewhere. Qubit 0 is the most
/// significant bit.
pub fn product_triplets(
    n_qubits: usize,
    factors: &[(usize, Mat2)],
    coeff: f64,
) -> Vec<(usize, usize, f64)> {
    let dim = 1usize << n_qubits;
    let masks: Vec<usize> = factors
        .iter()
        .map(|&(q, _)| 1usize << (n_qubits - 1 - q))
        .collect();
    let m = factors.len();
    let mut out = Vec::with_capacity(dim * (1 << m));
    for col in 0..dim {
        for pattern in 0..(1usize << m) {
            let mut row = col;
            let mut value = coeff;
            for (f, ((_, op), &mask)) in factors.iter().zip(&masks).enumerate() {
                let in_bit = usize::from(col & mask != 0);
                let out_bit = (pattern >> f) & 1;
                value *= op[(out_bit, in_bit)];
                if out_bit == 1 {
                    row |= mask;
                } else {
                    row &= !mask;
                }
            }
            if value != 0.0 {
                out.push((row, col, value));
            }
        }
    }
    out
}
