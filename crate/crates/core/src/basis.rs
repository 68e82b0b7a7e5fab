//! Real 2x2 observable bases and the coproduct lift.
//!
//! Kronecker convention (used by every module in this crate): in `A ⊗ B` the
//! left factor indexes the coarse 2x2 blocks, i.e.
//! `(A ⊗ B)[2r + s, 2c + t] = A[r, c] * B[s, t]`. In the exact engine the
//! first register qubit is the most significant bit of a basis index.

use nalgebra::{Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat2 = Matrix2<f64>;
pub type Mat4 = Matrix4<f64>;

pub const ORTHONORMAL_TOL: f64 = 1e-12;
pub const DEGENERACY_TOL: f64 = 1e-10;

pub fn sigma_x() -> Mat2 {
    Mat2::new(0.0, 1.0, 1.0, 0.0)
}

pub fn sigma_z() -> Mat2 {
    Mat2::new(1.0, 0.0, 0.0, -1.0)
}

/// `i σʸ`, which is real. `σʸ ⊗ σʸ = -(iσʸ) ⊗ (iσʸ)`.
pub fn i_sigma_y() -> Mat2 {
    Mat2::new(0.0, 1.0, -1.0, 0.0)
}

pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)])
}

/// `(A|B) = Tr(Bᵀ A)`.
pub fn inner(a: &Mat2, b: &Mat2) -> f64 {
    a.component_mul(b).sum()
}

/// Normalized trace `½ Tr`.
pub fn ntrace(m: &Mat2) -> f64 {
    0.5 * m.trace()
}

/// `Δ(x) = ½(1 ⊗ x + x ⊗ 1)`.
pub fn coproduct(x: &Mat2) -> Mat4 {
    let id = Mat2::identity();
    0.5 * (kron(&id, x) + kron(x, &id))
}

/// An ordered quadruple `(b1, b2, b3, b4)`, read as the 2x2 array
/// `[[b1, b2], [b3, b4]]` of 2x2 blocks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasisArray {
    elements: [Mat2; 4],
}

impl BasisArray {
    /// Accepts only orthonormal quadruples.
    pub fn new(elements: [Mat2; 4]) -> Result<Self> {
        let basis = Self { elements };
        let finite = elements.iter().all(|e| e.iter().all(|v| v.is_finite()));
        let deviation = if finite {
            basis.gram_deviation()
        } else {
            f64::NAN
        };
        if !(deviation <= ORTHONORMAL_TOL) {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(basis)
    }

    /// The matrix units δ₁ = e11, δ₂ = e12, δ₃ = e21, δ₄ = e22.
    pub fn delta() -> Self {
        let unit = |r: usize, c: usize| {
            let mut m = Mat2::zeros();
            m[(r, c)] = 1.0;
            m
        };
        Self {
            elements: [unit(0, 0), unit(0, 1), unit(1, 0), unit(1, 1)],
        }
    }

    pub fn elements(&self) -> &[Mat2; 4] {
        &self.elements
    }

    /// Element at array position `(r, c)`.
    pub fn at(&self, r: usize, c: usize) -> &Mat2 {
        &self.elements[2 * r + c]
    }

    pub fn gram(&self) -> Mat4 {
        Mat4::from_fn(|i, j| inner(&self.elements[i], &self.elements[j]))
    }

    fn gram_deviation(&self) -> f64 {
        (self.gram() - Mat4::identity()).abs().max()
    }

    /// `T(b) = [[tr b1, tr b2], [tr b3, tr b4]]` with the normalized trace.
    pub fn matrix_of_traces(&self) -> Mat2 {
        Mat2::from_fn(|r, c| ntrace(self.at(r, c)))
    }

    pub fn is_symmetric(&self) -> bool {
        let [b1, b2, b3, b4] = &self.elements;
        let close = |a: &Mat2, b: &Mat2| (a - b).abs().max() <= ORTHONORMAL_TOL;
        close(b1, &b1.transpose()) && close(b4, &b4.transpose()) && close(b3, &b2.transpose())
    }

    pub fn is_delta_symmetric(&self) -> bool {
        let t = self.matrix_of_traces();
        self.is_symmetric()
            && (t[(0, 0)] - t[(1, 1)]).abs() <= DEGENERACY_TOL
            && t[(0, 1)].abs() <= DEGENERACY_TOL
            && t[(1, 0)].abs() <= DEGENERACY_TOL
    }

    /// `ᵗP b P`, treating the blocks as if they were scalars:
    /// `a_rc = Σ_st P_sr P_tc b_st`.
    pub fn conjugate(&self, p: &OrthogonalMap) -> Self {
        let p = p.matrix();
        let mut elements = [Mat2::zeros(); 4];
        for r in 0..2 {
            for c in 0..2 {
                let mut acc = Mat2::zeros();
                for s in 0..2 {
                    for t in 0..2 {
                        acc += p[(s, r)] * p[(t, c)] * self.at(s, t);
                    }
                }
                elements[2 * r + c] = acc;
            }
        }
        Self { elements }
    }

    pub fn to_rows(&self) -> [[[f64; 2]; 2]; 4] {
        self.elements
            .map(|m| [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]])
    }

    pub fn from_rows(rows: [[[f64; 2]; 2]; 4]) -> Result<Self> {
        Self::new(rows.map(|r| Mat2::new(r[0][0], r[0][1], r[1][0], r[1][1])))
    }
}

impl Serialize for BasisArray {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BasisArray {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = <[[[f64; 2]; 2]; 4]>::deserialize(deserializer)?;
        Self::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// A 2x2 real orthogonal matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrthogonalMap(Mat2);

impl OrthogonalMap {
    pub fn new(m: Mat2) -> Result<Self> {
        let deviation = if m.iter().all(|v| v.is_finite()) {
            (m.transpose() * m - Mat2::identity()).abs().max()
        } else {
            f64::NAN
        };
        if !(deviation <= ORTHONORMAL_TOL) {
            return Err(Error::NotOrthogonal { deviation });
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Mat2::identity())
    }

    pub fn rotation(s: f64) -> Self {
        let (sn, cs) = s.sin_cos();
        Self(Mat2::new(cs, -sn, sn, cs))
    }

    pub fn reflection(s: f64) -> Self {
        let (sn, cs) = (2.0 * s).sin_cos();
        Self(Mat2::new(cs, sn, sn, -cs))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    /// `ᵗP X P`.
    pub fn conjugate(&self, x: &Mat2) -> Mat2 {
        self.0.transpose() * x * self.0
    }
}
