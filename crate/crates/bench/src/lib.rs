//! Fixed instances shared by the benchmarks.

use vorticity_core::{BoundaryAngles, HamiltonianSpec, Lattice, LatticeSpec};

/// A lattice with its boundary angles at `(d, φ) = (1, 0)`.
pub struct Instance {
    pub lattice: Lattice,
    pub angles: BoundaryAngles,
    pub spec: HamiltonianSpec,
}

pub fn instance(width: usize, height: usize, layers: usize, k: f64) -> Instance {
    let lattice = Lattice::build(LatticeSpec::new(width, height, layers)).expect("valid lattice");
    let angles = lattice.boundary_angles(1.0, 0.0);
    Instance {
        lattice,
        angles,
        spec: HamiltonianSpec::xy(1.0, k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_has_boundary_angles() {
        let i = instance(5, 5, 1, 2.0);
        assert_eq!(i.angles.iter().count(), 16);
        assert_eq!(i.lattice.interior_count(), 9);
    }
}
