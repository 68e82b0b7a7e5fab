use thiserror::Error;

use crate::lattice::Site;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice {width}x{height} with {layers} boundary layers has an empty interior")]
    EmptyInterior {
        width: usize,
        height: usize,
        layers: usize,
    },

    #[error("site ({}, {}) coincides with the lattice center; polar angle undefined", .0.x, .0.y)]
    SiteAtCenter(Site),

    #[error("site ({}, {}) is not part of the lattice", .0.x, .0.y)]
    UnknownSite(Site),

    #[error("ring depth {depth} is out of range (interior supports depths 1..={max})")]
    DepthOutOfRange { depth: usize, max: usize },

    #[error("matrix is not orthogonal (max deviation of P^T P from identity: {deviation:.3e})")]
    NotOrthogonal { deviation: f64 },

    #[error("basis is not orthonormal (max Gram deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },

    #[error("site ({}, {}) is not in the quantum register", .0.x, .0.y)]
    SiteOutsideRegister(Site),

    #[error("dimension {dimension} exceeds the configured cap {cap}")]
    Capacity { dimension: usize, cap: usize },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("sector enumeration needs 2^{boundary_sites} sectors, above the cap 2^{cap_log2}")]
    SectorCount {
        boundary_sites: usize,
        cap_log2: usize,
    },

    #[error("sector decomposition requires boundary mode `full`")]
    SectorModeMismatch,

    #[error("eigendecomposition failed to converge")]
    Eigen,

    #[error("singular contour: segment {segment} has midpoint lambda {lambda:.3e} (vortex on the contour)")]
    SingularSegment { segment: usize, lambda: f64 },

    #[error("vortex on contour at site ({}, {}) (segment {segment})", .site.x, .site.y)]
    VortexOnContour { site: Site, segment: usize },

    #[error("contour under-sampled: angle jump {jump:.6} at segment {segment} is within tolerance of pi")]
    UnderSampled { segment: usize, jump: f64 },

    #[error("winding oracle needs a real-symmetric field (sample {0} has complex off-diagonal)")]
    ComplexSample(usize),

    #[error("plaquette corner {0} is singular")]
    SingularCorner(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed field data: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
