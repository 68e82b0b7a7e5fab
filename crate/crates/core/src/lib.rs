//! Vorticity matrices of Gibbs states for the quantum XY model on a square
//! lattice, with the su(2) degree of the resulting fields.

// NaN must fall through threshold checks as a failure, so negated comparisons are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod block;
pub mod engine;
pub mod error;
pub mod exact;
pub mod field;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod model;
pub mod su2;
pub mod vortex;

pub use basis::{BasisArray, Mat2, Mat4, OrthogonalMap};
pub use engine::{compute_field, simulate, EngineOptions, EngineState, Prepared};
pub use error::{Error, Result};
pub use field::{EngineKind, FieldEntry, VorticityField, VorticityMatrix, VorticitySource};
pub use lattice::{BoundaryAngles, Contour, Lattice, LatticeSpec, Site, SiteRole};
pub use model::{BoundaryMode, HamiltonianSpec};
pub use su2::{contour_degree, ContourField, DegreeReport, Su2Element};
pub use vortex::{detect_vortices, lattice_degree, VortexSet};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
