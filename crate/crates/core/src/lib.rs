//! Multivariate graph spectra and their similarity certificates.
//!
//! The crate builds the matrix pencils `W(s) = Σ sᵢ Aᵢ` behind the ordinary,
//! generalized, and block (diagonal) Laplacian spectra of graphs and the
//! Hermitian spectra of digraphs, decides equality of their characteristic
//! polynomials `det(tI − W(s))` exactly, and reconstructs the orthogonal
//! (unitary) matrix `Q` with `QᵀAQ = B` and `Qᵀeᵢ = eᵢ` that certifies
//! cospectrality.
//!
//! Linear algebra is generic over the scalar type; the aliases below name
//! the concrete instantiations used throughout.

pub mod error;
pub mod exact;
pub mod graph;
pub mod matrix;
pub mod pencil;
pub mod scalar;
pub mod search;
pub mod similarity;

use num_complex::Complex;

pub use error::{AlgebraError, ParseError, PartitionError, PencilError, SearchError, SimilarityError, SolveError};
pub use graph::{Digraph, Graph, VertexPartition};
pub use matrix::Matrix;
pub use pencil::{Pencil, PitMode, PitOptions, SpectrumKind, SpectrumRelation};
pub use scalar::{ExactScalar, Field, Scalar};

/// Reduced arbitrary-precision rational.
pub type Rational = num_rational::BigRational;
/// `a + bi` with rational `a`, `b`.
pub type GaussianRational = Complex<Rational>;
/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;

pub type RationalMatrix = Matrix<Rational>;
pub type GaussianMatrix = Matrix<GaussianRational>;
pub type IntegerMatrix = Matrix<Integer>;
pub type RealMatrix = Matrix<f64>;

/// Certificates over the reals (graphs) and over the complex numbers (digraphs).
pub type RationalCertificate = similarity::ExactCertificate<Rational>;
pub type GaussianCertificate = similarity::ExactCertificate<GaussianRational>;
pub type RealNumericCertificate = similarity::NumericCertificate<f64>;
pub type ComplexNumericCertificate = similarity::NumericCertificate<Complex<f64>>;
