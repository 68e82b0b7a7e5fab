//! Exact engine on the tensor-product space `(C²)^{⊗N_q}`.

pub mod compression;
pub mod gibbs;
pub mod hamiltonian;
pub mod sector;
pub mod sparse;

pub use compression::CompressionProjector;
pub use gibbs::GibbsState;
pub use hamiltonian::{
    build_hamiltonian, embed_site_operator, ExactHamiltonian, Register, DEFAULT_DIMENSION_CAP,
};
pub use sector::{sector_gibbs, SectorGibbs, SectorOptions, SectorPattern};
pub use sparse::SparseOp;
