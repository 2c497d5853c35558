use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Fibonacci-divisor quantities are undefined at hierarchy level zero.
    #[error("hierarchy level k must be nonzero")]
    ZeroLevel,

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("point {point} lies within {distance:e} of a singularity at {singularity}")]
    NearSingularity {
        point: String,
        singularity: String,
        distance: f64,
    },

    #[error("series did not converge within {max_terms} terms (last term {last_term:e})")]
    Truncation { max_terms: usize, last_term: f64 },

    #[error("vortex {vortex} left the annulus at step {step} (|z| = {radius})")]
    Escape { step: usize, vortex: usize, radius: f64 },

    #[error("vortices {first} and {second} collided at step {step} (distance {distance:e})")]
    Collision {
        step: usize,
        first: usize,
        second: usize,
        distance: f64,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
