//! Synthesis and analysis of logical operators on stabilizer codes.
//!
//! The crate is organized around the binary symplectic picture of the
//! Clifford group. [`f2core`] supplies exact F2 linear algebra, [`pauli`]
//! the Hermitian Pauli group with phase tracking, and [`symplectic`] the
//! group Sp(2n, F2) with constrained solvers and circuit emission. On top
//! of these, [`stabilizer`] and [`lcs`] synthesize every physical Clifford
//! circuit realizing a chosen logical Clifford on a stabilizer code, while
//! [`qfd`] and [`transversal`] handle quadratic-form diagonal gates and
//! decide which codes support transversal T gates and finer Z-rotations.
//! [`rm`] builds the quantum Reed-Muller family, and [`oracle`] provides a
//! dense-unitary ground truth at small qubit counts against which every
//! symbolic result is checked.

pub mod f2core;
pub mod pauli;
pub mod oracle;
pub mod symplectic;
pub mod stabilizer;
pub mod lcs;
pub mod qfd;
pub mod transversal;
pub mod rm;
pub mod cli;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("incompatible system: {0}")]
    IncompatibleSystem(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub use f2core::{F2Matrix, F2Vector};
pub use pauli::{PauliOperator, PauliSum};
pub use stabilizer::{CssCode, StabilizerCode};
pub use symplectic::{Circuit, ElementaryFactor, SymplecticMatrix};
