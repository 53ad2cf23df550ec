use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("epsilon {epsilon} outside the admissible range (0, {bound})")]
    EpsilonOutOfRange { epsilon: f64, bound: f64 },

    #[error("outer radius {radius} outside the spectral window ({lower}, {upper})")]
    RadiusOutsideWindow { radius: f64, lower: f64, upper: f64 },

    #[error("spherical mesh pitch {pitch} cannot separate sheets of half-width {half_width}")]
    MeshTooCoarse { pitch: f64, half_width: f64 },

    #[error("observed {holes} holes on the sphere, above the bound {bound}")]
    HoleBound { holes: usize, bound: usize },

    #[error("pole clearance {eta} is below the mesh pitch {pitch}")]
    PoleClearance { eta: f64, pitch: f64 },

    #[error("pole index l = {l} is below the required minimum {required}")]
    PoleTooWide { l: u32, required: u32 },

    #[error("smoothing changed the complement component count from {before} to {after}")]
    TopologyChanged { before: usize, after: usize },

    #[error("grid has no interior nodes")]
    EmptyGrid,

    #[error("operator of order {order} cannot supply {k} eigenpairs")]
    OrderTooSmall { order: usize, k: usize },

    #[error("need {need} converged eigenpairs, have {have}")]
    InsufficientPairs { need: usize, have: usize },

    #[error("grid function is identically zero")]
    ZeroFunction,

    #[error("box half-width {half_width} does not strictly contain the bounding radius {radius}")]
    BoxTooSmall { half_width: f64, radius: f64 },

    #[error("{voxels} voxels exceed the rank-computation guard of {limit}")]
    SizeGuard { voxels: usize, limit: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed dump: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
