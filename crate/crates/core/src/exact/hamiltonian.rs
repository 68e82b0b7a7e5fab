//! Hamiltonian assembly on the tensor-product register.

use crate::basis::{i_sigma_y, sigma_x, sigma_z, Mat2};
use crate::error::{Error, Result};
use crate::exact::compression::CompressionProjector;
use crate::exact::sparse::{product_triplets, SparseOp};
use crate::lattice::{BoundaryAngles, Lattice, Site};
use crate::model::{BoundaryMode, HamiltonianSpec};

pub const DEFAULT_DIMENSION_CAP: usize = 1 << 14;

/// The lattice sites carried as qubits, in lattice order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Register {
    members: Vec<(usize, Site)>,
    position: Vec<Option<usize>>,
}

impl Register {
    pub fn new(lattice: &Lattice, mode: BoundaryMode) -> Self {
        let members: Vec<(usize, Site)> = (0..lattice.len())
            .filter(|&i| mode == BoundaryMode::Full || !lattice.is_boundary(i))
            .map(|i| (i, lattice.site(i)))
            .collect();
        let mut position = vec![None; lattice.len()];
        for (q, &(i, _)) in members.iter().enumerate() {
            position[i] = Some(q);
        }
        Self { members, position }
    }

    pub fn n_qubits(&self) -> usize {
        self.members.len()
    }

    pub fn dim(&self) -> usize {
        1usize << self.members.len()
    }

    pub fn members(&self) -> &[(usize, Site)] {
        &self.members
    }

    pub fn qubit(&self, lattice_index: usize) -> Option<usize> {
        self.position.get(lattice_index).copied().flatten()
    }

    pub(crate) fn require_qubit(&self, lattice_index: usize, site: Site) -> Result<usize> {
        self.qubit(lattice_index)
            .ok_or(Error::SiteOutsideRegister(site))
    }

    fn check_capacity(&self, cap: usize) -> Result<()> {
        let n = self.members.len();
        if n >= usize::BITS as usize - 1 || (1usize << n) > cap {
            let dimension = if n < usize::BITS as usize {
                1usize << n
            } else {
                usize::MAX
            };
            return Err(Error::Capacity { dimension, cap });
        }
        Ok(())
    }
}

/// `m` acting on the qubit of `site`, identity elsewhere.
pub fn embed_site_operator(
    lattice: &Lattice,
    register: &Register,
    site: usize,
    m: &Mat2,
) -> Result<SparseOp> {
    let q = register.require_qubit(site, lattice.site(site))?;
    let n = register.n_qubits();
    Ok(SparseOp::from_triplets(
        1 << n,
        product_triplets(n, &[(q, *m)], 1.0),
    ))
}

#[derive(Clone, Debug)]
pub struct ExactHamiltonian {
    pub register: Register,
    pub operator: SparseOp,
    /// Scalar dropped from `operator` (boundary–boundary terms of a sector).
    pub constant: f64,
}

pub fn build_hamiltonian(
    lattice: &Lattice,
    spec: &HamiltonianSpec,
    angles: &BoundaryAngles,
    cap: usize,
) -> Result<ExactHamiltonian> {
    spec.validate()?;
    match spec.boundary_mode {
        BoundaryMode::Full => build_full(lattice, spec, angles, cap),
        BoundaryMode::Clamped => {
            let ones = vec![1.0; lattice.len()];
            let mut h = build_interior(lattice, spec, angles, &ones, cap)?;
            h.constant = 0.0;
            Ok(h)
        }
    }
}

fn pair_terms(spec: &HamiltonianSpec) -> Vec<(f64, Mat2)> {
    // σʸ⊗σʸ = -(iσʸ)⊗(iσʸ)
    let mut terms = vec![(spec.n, sigma_x()), (-spec.k, i_sigma_y())];
    if spec.u != 0.0 {
        terms.push((spec.u, sigma_z()));
    }
    terms
}

fn build_full(
    lattice: &Lattice,
    spec: &HamiltonianSpec,
    angles: &BoundaryAngles,
    cap: usize,
) -> Result<ExactHamiltonian> {
    let register = Register::new(lattice, BoundaryMode::Full);
    register.check_capacity(cap)?;
    let n = register.n_qubits();
    let pref = spec.prefactor();
    // per-site operator replacing (σˣ, iσʸ, σᶻ)
    let local = |site: usize| -> [Mat2; 3] {
        match angles.theta(site) {
            Some(theta) if lattice.is_boundary(site) => {
                let p = CompressionProjector::new(theta);
                [p.sigma_x(), Mat2::zeros(), p.sigma_z()]
            }
            _ => [sigma_x(), i_sigma_y(), sigma_z()],
        }
    };
    let mut triplets = Vec::new();
    for &(a, b) in lattice.nn_pairs() {
        let (la, lb) = (local(a), local(b));
        let (qa, qb) = (register.qubit(a).unwrap(), register.qubit(b).unwrap());
        for (slot, (weight, _)) in pair_terms(spec).into_iter().enumerate() {
            let (ma, mb) = (la[slot], lb[slot]);
            if weight == 0.0 || ma == Mat2::zeros() || mb == Mat2::zeros() {
                continue;
            }
            triplets.extend(product_triplets(n, &[(qa, ma), (qb, mb)], -pref * weight));
        }
    }
    if spec.h != 0.0 {
        for i in lattice.interior_indices() {
            let q = register.qubit(i).unwrap();
            triplets.extend(product_triplets(n, &[(q, sigma_z())], spec.h));
        }
    }
    Ok(ExactHamiltonian {
        register,
        operator: SparseOp::from_triplets(1 << n, triplets).symmetrized(),
        constant: 0.0,
    })
}

/// Interior-register Hamiltonian with every boundary projector `Π_j`
/// replaced by the scalar `occupation[j]` (indexed by lattice site).
pub(crate) fn build_interior(
    lattice: &Lattice,
    spec: &HamiltonianSpec,
    angles: &BoundaryAngles,
    occupation: &[f64],
    cap: usize,
) -> Result<ExactHamiltonian> {
    let register = Register::new(lattice, BoundaryMode::Clamped);
    register.check_capacity(cap)?;
    let n = register.n_qubits();
    let pref = spec.prefactor();
    let theta = |j: usize| angles.theta(j).unwrap_or(0.0);
    let mut triplets = Vec::new();
    let mut constant = 0.0;
    for &(a, b) in lattice.nn_pairs() {
        match (lattice.is_boundary(a), lattice.is_boundary(b)) {
            (false, false) => {
                let (qa, qb) = (register.qubit(a).unwrap(), register.qubit(b).unwrap());
                for (weight, m) in pair_terms(spec) {
                    if weight != 0.0 {
                        triplets.extend(product_triplets(n, &[(qa, m), (qb, m)], -pref * weight));
                    }
                }
            }
            (true, true) => {
                let (ta, tb) = (2.0 * theta(a), 2.0 * theta(b));
                let value = spec.n * ta.sin() * tb.sin() + spec.u * ta.cos() * tb.cos();
                constant -= pref * value * occupation[a] * occupation[b];
            }
            (ba, _) => {
                let (i, j) = if ba { (b, a) } else { (a, b) };
                let q = register.qubit(i).unwrap();
                let t = 2.0 * theta(j);
                let s = occupation[j];
                if s == 0.0 {
                    continue;
                }
                triplets.extend(product_triplets(
                    n,
                    &[(q, sigma_x())],
                    -pref * spec.n * t.sin() * s,
                ));
                if spec.u != 0.0 {
                    triplets.extend(product_triplets(
                        n,
                        &[(q, sigma_z())],
                        -pref * spec.u * t.cos() * s,
                    ));
                }
            }
        }
    }
    if spec.h != 0.0 {
        for i in lattice.interior_indices() {
            let q = register.qubit(i).unwrap();
            triplets.extend(product_triplets(n, &[(q, sigma_z())], spec.h));
        }
    }
    Ok(ExactHamiltonian {
        register,
        operator: SparseOp::from_triplets(1 << n, triplets).symmetrized(),
        constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeSpec;
    use crate::linalg::SymmetricEigen;

    fn free(w: usize, h: usize) -> (Lattice, BoundaryAngles) {
        let lat = Lattice::build(LatticeSpec::new(w, h, 0)).unwrap();
        let angles = lat.boundary_angles(0.0, 0.0);
        (lat, angles)
    }

    fn spectrum(h: &ExactHamiltonian) -> Vec<f64> {
        SymmetricEigen::new(&h.operator.to_dense()).unwrap().values
    }

    #[test]
    fn two_site_free_hamiltonian() {
        let (lat, angles) = free(2, 1);
        let h = build_hamiltonian(&lat, &HamiltonianSpec::xy(1.0, 1.0), &angles, 16).unwrap();
        // -¼(XX + YY) = -½(|01><10| + |10><01|)
        let d = h.operator.to_dense();
        for r in 0..4 {
            for c in 0..4 {
                let expect = if (r, c) == (1, 2) || (r, c) == (2, 1) {
                    -0.5
                } else {
                    0.0
                };
                assert_eq!(d[(r, c)], expect);
            }
        }
        let s = spectrum(&h);
        let expect = [-0.5, 0.0, 0.0, 0.5];
        for (a, b) in s.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn free_anisotropy_swap_is_isospectral() {
        let (lat, angles) = free(3, 2);
        let a = build_hamiltonian(&lat, &HamiltonianSpec::xy(1.0, 3.0), &angles, 1 << 10).unwrap();
        let b = build_hamiltonian(&lat, &HamiltonianSpec::xy(3.0, 1.0), &angles, 1 << 10).unwrap();
        for (x, y) in spectrum(&a).iter().zip(spectrum(&b)) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn hamiltonians_are_symmetric() {
        let lat = Lattice::build(LatticeSpec::new(4, 3, 1)).unwrap();
        let angles = lat.boundary_angles(1.0, 0.2);
        let mut spec = HamiltonianSpec::xy(1.0, 2.0);
        spec.u = 0.4;
        spec.h = 0.3;
        for mode in [BoundaryMode::Full, BoundaryMode::Clamped] {
            let h = build_hamiltonian(&lat, &spec.with_mode(mode), &angles, 1 << 12).unwrap();
            assert_eq!(h.operator.max_asymmetry(), 0.0);
        }
    }

    #[test]
    fn capacity_error() {
        let lat = Lattice::build(LatticeSpec::new(5, 5, 1)).unwrap();
        let angles = lat.boundary_angles(1.0, 0.0);
        let spec = HamiltonianSpec::xy(1.0, 1.0).with_mode(BoundaryMode::Full);
        assert!(matches!(
            build_hamiltonian(&lat, &spec, &angles, DEFAULT_DIMENSION_CAP),
            Err(Error::Capacity { .. })
        ));
        let clamped = HamiltonianSpec::xy(1.0, 1.0);
        assert!(build_hamiltonian(&lat, &clamped, &angles, DEFAULT_DIMENSION_CAP).is_ok());
    }

    #[test]
    fn embedding() {
        let (lat, _) = free(2, 1);
        let reg = Register::new(&lat, BoundaryMode::Full);
        let id = embed_site_operator(&lat, &reg, 0, &Mat2::identity()).unwrap();
        assert_eq!(id, SparseOp::identity(4));
        let x = embed_site_operator(&lat, &reg, 0, &sigma_x()).unwrap();
        let k = crate::basis::kron(&sigma_x(), &Mat2::identity());
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(x.get(r, c), k[(r, c)]);
            }
        }
        let d1 = Mat2::new(1.0, 0.0, 0.0, 0.0);
        let lat3 = Lattice::build(LatticeSpec::new(3, 3, 1)).unwrap();
        let reg3 = Register::new(&lat3, BoundaryMode::Full);
        let e = embed_site_operator(&lat3, &reg3, 4, &d1).unwrap();
        assert_eq!(e.trace(), (1u64 << 8) as f64);
        let clamped = Register::new(&lat3, BoundaryMode::Clamped);
        assert!(matches!(
            embed_site_operator(&lat3, &clamped, 0, &d1),
            Err(Error::SiteOutsideRegister(_))
        ));
    }

    #[test]
    fn clamped_fields_on_single_interior_site() {
        // 3x3 with one layer: the centre sees four boundary neighbours
        let lat = Lattice::build(LatticeSpec::new(3, 3, 1)).unwrap();
        let angles = lat.boundary_angles(1.0, 0.3);
        let spec = HamiltonianSpec::xy(1.0, 2.0);
        let h = build_hamiltonian(&lat, &spec, &angles, 16).unwrap();
        let field: f64 = lat
            .neighbors(4)
            .map(|j| -(2.0 * angles.theta(j).unwrap()).sin() / 6.0)
            .sum();
        assert!((h.operator.get(0, 1) - field).abs() < 1e-15);
        assert_eq!(h.operator.get(0, 0), 0.0);
    }
}
