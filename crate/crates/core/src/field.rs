//! Vorticity matrices and fields of them over the lattice.

use serde::{Deserialize, Serialize};

use crate::basis::{BasisArray, Mat2};
use crate::error::Result;
use crate::lattice::{Site, SiteRole};

/// `Ω` together with its traceless part `Ω̂ = Ω - ½Tr(Ω)·Id`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VorticityMatrix {
    pub omega: Mat2,
    pub reduced: Mat2,
}

impl VorticityMatrix {
    pub fn from_omega(omega: Mat2) -> Self {
        let reduced = omega - 0.5 * omega.trace() * Mat2::identity();
        Self { omega, reduced }
    }

    /// Frobenius norm of `Ω̂`.
    pub fn norm(&self) -> f64 {
        self.reduced.norm()
    }

    pub fn det_reduced(&self) -> f64 {
        self.reduced.determinant()
    }

    /// Max-norm of `Ω̂² + det(Ω̂)·Id`.
    pub fn cayley_hamilton_residual(&self) -> f64 {
        let r = self.reduced;
        (r * r + r.determinant() * Mat2::identity()).abs().max()
    }

    /// Difference between the two (opposite) eigenvalues of `Ω̂`.
    pub fn eigengap(&self) -> f64 {
        2.0 * (-self.det_reduced()).max(0.0).sqrt()
    }

    /// Principal axis of the symmetric part of `Ω̂`, in `[0, π)`.
    pub fn principal_angle(&self) -> f64 {
        principal_angle(&self.reduced)
    }
}

/// Axis angle in `[0, π)` of the larger-eigenvalue eigenvector of the
/// symmetric part of a traceless matrix.
pub fn principal_angle(m: &Mat2) -> f64 {
    let a = 0.5 * (m[(0, 0)] - m[(1, 1)]);
    let b = 0.5 * (m[(0, 1)] + m[(1, 0)]);
    let angle = 0.5 * b.atan2(a);
    if angle < 0.0 {
        angle + std::f64::consts::PI
    } else {
        angle
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Exact,
    Block,
}

impl EngineKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EngineKind::Exact => "exact",
            EngineKind::Block => "block",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldEntry {
    pub site: Site,
    pub role: SiteRole,
    pub matrix: VorticityMatrix,
}

/// Vorticity matrices for a set of sites, in lattice (row-major) order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VorticityField {
    pub entries: Vec<FieldEntry>,
}

impl VorticityField {
    pub fn get(&self, site: Site) -> Option<&FieldEntry> {
        // entries are sorted row-major
        self.entries
            .binary_search_by(|e| (e.site.y, e.site.x).cmp(&(site.y, site.x)))
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.matrix.norm())
            .fold(0.0, f64::max)
    }

    pub fn sort(&mut self) {
        self.entries.sort_by_key(|e| (e.site.y, e.site.x));
    }
}

/// Anything that yields vorticity matrices per lattice site.
pub trait VorticitySource {
    /// Lattice indices of the sites this source can evaluate, ascending.
    fn site_indices(&self) -> Vec<usize>;

    fn vorticity(&self, site: usize, basis: &BasisArray) -> Result<VorticityMatrix>;
}
