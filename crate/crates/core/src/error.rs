use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// λ ≥ k², the paraxial square root has no real forward branch.
    #[error("paraxiality violated: lambda = {lambda} >= k^2 = {k_squared}")]
    Paraxiality { lambda: f64, k_squared: f64 },

    #[error("numeric error: {0}")]
    Numeric(String),

    /// Operands that cannot be combined (different grids, azimuthal indices, carriers).
    #[error("usage error: {0}")]
    Usage(String),

    #[error("fit error: {0}")]
    Fit(String),

    /// The beam reached the Dirichlet wall at r_max.
    #[error("wall contact at z = {z}: boundary amplitude ratio {ratio:.3e} exceeds {limit:.1e}")]
    WallContact { z: f64, ratio: f64, limit: f64 },

    #[error("gouy extraction failed at z = {z}: overlap modulus {modulus:.3e}")]
    Extraction { z: f64, modulus: f64 },

    #[error("config error at line {line}, key `{key}`: {message}")]
    Config {
        line: usize,
        key: String,
        message: String,
    },

    #[error("unknown fixture `{0}`")]
    Lookup(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
