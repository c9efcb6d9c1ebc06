use thiserror::Error;

use crate::grid::SpaceTag;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be 1, 2 or 3, got {0}")]
    BadDimension(usize),

    #[error("points per axis must be a power of two >= 8, got {0}")]
    NotPowerOfTwo(usize),

    #[error("half extent must be positive and finite, got {0}")]
    BadExtent(f64),

    #[error("grid with {points} points exceeds the memory budget of {budget} points")]
    MemoryBudget { points: usize, budget: usize },

    #[error("expected a {expected} function, got a {found} function")]
    WrongSpace { expected: SpaceTag, found: SpaceTag },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(
        "grid too coarse for |y| = {y_mag}: need at least N = {required_n} points per axis \
         on half extent {required_half_extent} (have N = {have_n})"
    )]
    GridTooCoarse {
        y_mag: f64,
        required_n: usize,
        required_half_extent: f64,
        have_n: usize,
    },

    #[error("Schur tail mass is {fraction:.3e} of I(y) at |y| = {y_mag}, limit {limit:.3e}")]
    TailNotCertified {
        y_mag: f64,
        fraction: f64,
        limit: f64,
    },

    #[error("symbol mass {fraction:.3e} warps outside the frequency grid (limit {limit:.1e})")]
    WarpOutOfGrid { fraction: f64, limit: f64 },

    #[error("lattice: {0}")]
    Lattice(String),

    #[error("insufficient decay at grid edge: |f(edge)| / max |f| = {0:.3e}")]
    InsufficientDecay(f64),

    #[error("growth fit: {0}")]
    Fit(String),

    #[error("file format: {0}")]
    Format(String),

    #[error("at |y| = {y_mag}: {source}")]
    AtY {
        y_mag: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn at_y(self, y_mag: f64) -> Error {
        Error::AtY {
            y_mag,
            source: Box::new(self),
        }
    }
}
