//! Exact certificates for the rank of tensors given by a rank-one
//! decomposition over ℚ.
//!
//! A tensor `T = Σ λᵢ v₁ᵢ ⊗ ⋯ ⊗ v_kᵢ` is handled geometrically: the summands
//! form a finite set `S` of points of a product of projective spaces, and
//! `T` is a point in the span of the Segre image of `S`. Every criterion in
//! this crate reduces to exact ranks of flattening matrices built from `S`,
//! so a certificate is a proof for the given rational input.
//!
//! Module map:
//!
//! * [`rational`], [`linalg`]: exact scalars and the rank kernel.
//! * [`shape`], [`multiproj`]: factor shapes, points, Segre vectors,
//!   cohomology numbers and tensor assembly.
//! * [`certify`]: lower bounds, exact rank, minimality, identifiability.
//! * [`kruskal`]: the Kruskal-rank baseline and criterion comparison.
//! * [`symmetric`]: Veronese vectors and symmetric-rank certificates.
//! * [`construct`]: random instances, decomposition augmentation, surveys.
//! * [`instance`], [`report`]: the JSON input schema and report rendering.

pub mod certificate;
pub mod certify;
pub mod construct;
pub mod instance;
pub mod kruskal;
pub mod linalg;
pub mod multiproj;
pub mod rational;
pub mod report;
pub mod shape;
pub mod symmetric;

pub use certificate::{Certificate, Claim, Conclusion, Hypothesis, Status, Witness};
pub use linalg::{in_row_span, rat_rank, span_intersection_dim, RatMatrix};
pub use multiproj::{AmbientTensor, MultiPoint, PointSet};
pub use rational::Rational;
pub use shape::{FactorPartition, FactorSubset, MultiShape};

use thiserror::Error;

/// Errors raised by constructors and operations. Failed hypotheses are not
/// errors; they are recorded inside certificates.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("points {first} and {second} coincide (sets must be reduced)")]
    DuplicatePoint { first: usize, second: usize },

    #[error("weights annihilate the decomposition")]
    ZeroTensor,

    #[error("invalid factor subset: {0}")]
    InvalidSubset(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("retry budget exhausted: {0}")]
    RetryExhausted(String),
}

impl Error {
    /// True for malformed textual input, as opposed to well-formed input that
    /// fails validation.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
