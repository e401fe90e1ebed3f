use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("unknown target '{0}'")]
    UnknownTarget(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("norm estimate diverges: shell increment ratio {ratio:.3} at radius {radius}")]
    NormEstimateDiverges { ratio: f64, radius: f64 },

    #[error("cutoff geometry infeasible: need 1 + 2*eps < L (L={l}, eps={eps})")]
    CutoffGeometryInfeasible { l: f64, eps: f64 },

    #[error("aliasing: grid under-resolves radius (R={radius}, fft_grid={grid}, L={l})")]
    Aliasing { radius: f64, grid: usize, l: f64 },

    #[error("expansion too small for n (n={n}, available={available})")]
    ExpansionTooSmall { n: usize, available: usize },

    #[error("net/expansion mismatch: {0}")]
    NetExpansionMismatch(String),

    #[error("unsupported spline degree {0} (supported: 0..=3)")]
    UnsupportedDegree(usize),

    #[error("degenerate window [{lo}, {hi}]")]
    DegenerateWindow { lo: f64, hi: f64 },

    #[error("level count {0} out of range 1..=14")]
    LevelOutOfRange(usize),

    #[error("empty expansion")]
    EmptyExpansion,

    #[error("selection size {n} exceeds dictionary size {available}")]
    SelectionTooLarge { n: usize, available: usize },

    #[error("degenerate ridge direction")]
    DegenerateRidge,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("infeasible free-knot problem: {breakpoints} breakpoints on a {grid}-cell candidate grid")]
    FreeKnotInfeasible { breakpoints: usize, grid: usize },

    #[error("outside the rate hypotheses: {0}")]
    OutsideHypotheses(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("at n={n}: {source}")]
    AtN {
        n: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Errors caused by bad user input rather than numerical failure.
    pub fn is_config_error(&self) -> bool {
        match self {
            Error::UnsupportedDimension(_)
            | Error::UnknownTarget(_)
            | Error::InvalidParameter(_)
            | Error::OutsideHypotheses(_)
            | Error::Config(_)
            | Error::UnsupportedDegree(_)
            | Error::LevelOutOfRange(_)
            | Error::Unsupported(_) => true,
            Error::AtN { source, .. } => source.is_config_error(),
            _ => false,
        }
    }

    pub(crate) fn at_n(self, n: usize) -> Self {
        Error::AtN {
            n,
            source: Box::new(self),
        }
    }
}
