//! Exact combinatorics of the affine dependencies of the n-cube vertex set
//! `C^n = {-1,1}^n`.
//!
//! The crate enumerates the matroid hyperplanes, the rank-3 circuits
//! (rectangles) and the signed circuit/cocircuit data of the oriented
//! matroid of affine dependencies of `C^n`, entirely in exact integer
//! arithmetic. On top of the raw enumeration it provides:
//!
//! * the canonical affine orientation (cocircuits signed by hyperplane
//!   sides, circuits signed by Radon partitions),
//! * a normalization procedure that reorients any given orientation of the
//!   cube matroid so that all facet cocircuits become positive,
//! * an orthogonality-propagation engine that reconstructs cocircuit
//!   signatures from the signed rectangles alone and reports whether the
//!   reconstruction is determinate at a given dimension.
//!
//! Everything is specialized to the cube: vertices are n-bit words,
//! vertex sets are 256-bit bitsets, and all rank decisions use
//! fraction-free integer elimination. The hard dimension cap is `n <= 8`.

pub mod cli;
pub mod cube;
pub mod geometry;
mod linalg;
pub mod matroid;
pub mod normalize;
pub mod orientation;
pub mod reconstruct;
pub mod signed;

pub use cube::{CoordSet, Vertex, VertexSet, MAX_DIM};
pub use signed::{orthogonal, SignedSet};

/// Errors surfaced by the engine.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension {n} out of supported range {min}..={max}")]
    DimensionOutOfRange { n: usize, min: usize, max: usize },
    #[error("invalid subcube descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("vertex set is not a subcube")]
    NotASubcube,
    #[error("invalid triple: vertices must be pairwise distinct")]
    InvalidTriple,
    #[error("rectangles do not form a modular pair around the given pivot")]
    NotAModularPair,
    #[error("vertex set is not a circuit: {0}")]
    NotACircuit(String),
    #[error("catalog failed self-check: {0}")]
    CorruptCatalog(String),
    #[error("cache mismatch: {0}")]
    CacheMismatch(String),
    #[error("catalog is missing required facet hyperplanes")]
    InconsistentCatalog,
    #[error("cocircuit signatures violate orientation axioms: {0}")]
    NotAnOrientation(String),
    #[error("normalization failed verification: input does not reorient onto the affine orientation")]
    NotNormalizable,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("malformed file: {0}")]
    MalformedFile(String),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
