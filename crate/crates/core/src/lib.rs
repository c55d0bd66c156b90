//! Combinatorics of simplicial complexes: f-polynomials, reduced homology
//! over prime fields, k-fold acyclicity, boolean interval and boolean tree
//! decompositions with checkable certificates, stacked shellings and
//! exterior algebraic shifting.
//!
//! ```
//! use boolcomplex::{Face, SimplicialComplex};
//!
//! let c = SimplicialComplex::from_facets([Face::from([1, 2, 3]), Face::from([2, 3, 4])]);
//! assert_eq!(c.f_polynomial().coeffs(), &[1, 4, 5, 2]);
//! ```

pub mod cli;
pub mod complex;
pub mod constructions;
pub mod cplx;
pub mod decomp;
pub mod fpoly;
pub mod homology;
pub mod linalg;
pub mod shifting;
pub mod stacked;

pub use complex::{ComplexError, Face, RelativeComplex, SimplicialComplex, Vertex};
pub use fpoly::{FPolynomial, NotDivisible};
pub use linalg::FieldPrime;
