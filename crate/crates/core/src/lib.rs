//! Exact Kazhdan-Lusztig polynomials of sparse paving matroids.
//!
//! The coefficients are computed from counts of skew tableaux
//! ([`tableaux`]) and checked against a brute-force engine
//! ([`oracle`]) that evaluates the defining recurrence over the lattice
//! of flats of an explicitly given matroid.
//!
//! ```
//! use spkl_core::sparse_paving;
//!
//! // U_{3,3} has P(t) = 1 + 9t; with four circuit-hyperplanes it drops to 1 + t.
//! let p = sparse_paving::kl_polynomial(3, 3, 4).unwrap();
//! assert_eq!(p.to_string(), "t + 1");
//! ```

pub mod bounds;
pub mod error;
pub mod exactmath;
pub mod exec;
pub mod oracle;
pub mod sparse_paving;
pub mod subset;
pub mod sweep;
pub mod tableaux;

pub use error::{Error, Result};
pub use exactmath::IntPolynomial;
pub use subset::Subset;
