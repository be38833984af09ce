//! Syzygies of Segre embeddings through squarefree divisor complexes.
//!
//! The graded Betti number of the toric ring in multidegree `b` and
//! homological index `j + 1` is the rank of `H̃_j(Δ_b)`. This crate builds
//! the complexes `Δ_b`, computes their homology exactly, cross-checks against
//! an explicit Koszul complex, and replays the chain-level filling
//! constructions used to prove Property `N_p` for Segre products.

pub mod chains;
pub mod complex;
pub mod config;
pub mod error;
pub mod homology;
pub mod koszul;
pub mod scalar;
pub mod syzygy;
pub mod ufo;

pub use chains::Chain;
pub use complex::{ComplexKind, ComplexSpec, Simplex, SlicedComplex};
pub use config::{cap_dimensions, ConfigKind, MultiDegree, PointConfiguration, SegreParams};
pub use error::{Error, Result};
pub use homology::{betti_reduced, fill, HomologyReport, RankEngine, SparseMatrix};

/// Exact coefficients used throughout.
pub type Rational = num_rational::BigRational;
/// Chains with rational coefficients.
pub type QChain = Chain<Rational>;
/// Sparse rational matrix.
pub type QMatrix = SparseMatrix<Rational>;
/// Integer boundary matrices as assembled from a complex.
pub type ZMatrix = SparseMatrix<i64>;
