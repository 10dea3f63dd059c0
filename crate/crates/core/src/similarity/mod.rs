//! Certificates `Q` with `Q†AQ = B` and `Q†eᵢ = eᵢ`.
//!
//! The exact path solves `Q†W̃_A = W̃_B` over the rationals (Gaussian
//! rationals for digraphs) when the extended walk matrix has full row rank.
//! The constructive path works numerically in an eigenbasis adapted to the
//! partition and exists whenever the pencils agree, rank or no rank.

mod constructive;
mod eigen;
mod exact;
mod quotient;
mod walk;

pub use constructive::{
    assemble_from_decompositions, compare_decompositions, eigenblock_decompose, reconstruct_q_constructive,
    reconstruct_q_numeric, verify_claim_diagnostics, ClaimEntry, ClaimReport, ConstructiveOutcome, EigenvaluePair,
    NumericCertificate, SignCase,
};
pub use eigen::{class_basis, eigenblock_decompose_numeric, EigenBlock, EigenBlockDecomposition};
pub use exact::{reconstruct_q_exact, ExactCertificate, ExactOutcome, PreparedWalk};
pub use quotient::{quotient_graph, QuotientGraph};
pub use walk::{extended_walk_matrix, walk_matrix, ExtendedWalkMatrix};

/// Default eigenvalue clustering tolerance, relative to `max(1, ρ)`.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
