//! Finite-truncation model of the real spectral triple on the standard
//! Podleś quantum sphere.
//!
//! The crate builds the two equivariant representations `π±` of the sphere
//! algebra on the half-integer spin towers, the chirality grading `γ`, the
//! antilinear reality operator `J` and the Dirac operator `D` as sparse
//! matrices, and checks every algebraic identity of the triple as a named
//! residual on interior vectors of the truncation.
//!
//! ```
//! use podles::{axioms::Verifier, hilbert::Truncation, operators::TripleConfig, qnum::QContext};
//!
//! let ctx = QContext::new(0.5).unwrap();
//! let trunc = Truncation::with_default_margin(6).unwrap();
//! let verifier = Verifier::new(TripleConfig::new(ctx, trunc), 1e-9).unwrap();
//! let reports = verifier.run_all().unwrap();
//! assert!(reports.iter().all(|r| r.passed));
//! ```

pub mod axioms;
pub mod cli;
pub mod hilbert;
pub mod mutation;
pub mod operators;
pub mod qnum;
pub mod repcoeffs;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Q(#[from] qnum::QError),
    #[error(transparent)]
    Hilbert(#[from] hilbert::HilbertError),
    #[error(transparent)]
    Op(#[from] operators::OpError),
    #[error("{0}")]
    InvalidParameter(String),
}

impl Error {
    pub fn is_overflow(&self) -> bool {
        matches!(self, Error::Q(qnum::QError::Overflow { .. }))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
