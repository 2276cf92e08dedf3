//! Truncated matrix-valued moment problems on `K = {a} ∪ [b, c]` and the dual
//! degree-bounded sum-of-squares certificates for matrix polynomials that are
//! positive semidefinite on `K`.
//!
//! The pipeline: [`moments`] builds block-Hankel moment and localizing
//! matrices, [`flat`] recovers atoms from flat data, [`tmmp`] solves the
//! moment problem by moving the largest possible mass onto the isolated point,
//! and [`certificates`] verifies and searches Gram-matrix certificates.

pub mod certificates;
pub mod error;
pub mod flat;
pub mod linalg;
pub mod moments;
pub mod poly;
pub mod random;
pub mod tmmp;

pub use certificates::{
    extract_squares, reconstruct, refute, search_certificate, transform_certificate, verify_certificate, Certificate,
    CertificateTerm, Direction, Parity, Refutation, SearchOptions,
};
pub use error::{Error, Result};
pub use flat::{atom_zero_count, check_flat_conditions, extract_atoms, ExtractOptions, FlatReport, RankBasis};
pub use linalg::{SymMatrix, Tolerances};
pub use moments::{Atom, AtomicMatrixMeasure, MomentSequence, SetDescription};
pub use poly::{MatrixPolynomial, ScalarPoly};
pub use tmmp::{check_conditions, solve, verify_measure, SolverOptions, Status, TmmpInput, TmmpOutcome};
