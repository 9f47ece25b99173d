//! Workbench for quantum LDPC codes built from quotients of regular
//! hyperbolic tessellations.
//!
//! The pipeline: exact arithmetic in the golden ring Z[phi] (`algebra`),
//! reflection representations of Coxeter groups (`coxeter`), finite quotient
//! enumeration by matrix closure or coset enumeration (`group`), the cell
//! complex of a quotient tessellation (`complex`), CSS codes from its GF(2)
//! chain complex (`gf2`, `css`), cellular-automaton and belief-propagation
//! decoders (`decode`), and a single-shot Monte Carlo protocol (`sim`).

pub mod algebra;
pub mod complex;
pub mod coxeter;
pub mod css;
pub mod decode;
pub mod descriptor;
pub mod gf2;
pub mod group;
pub mod pipeline;
pub mod sim;

/// Crate-wide error type. The CLI maps the variants onto distinct exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Verification(_) => 2,
            Error::Resource(_) => 3,
            Error::Parse(_) | Error::Invalid(_) => 4,
            Error::Io(_) => 1,
        }
    }
}
