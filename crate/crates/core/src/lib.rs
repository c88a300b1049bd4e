//! Character-theoretic machinery for bounding rank growth of abelian
//! varieties under field extension.
//!
//! The pipeline: build a finite Galois group from a textual description,
//! compute its complex character table exactly (modular eigenvalue methods
//! lifted to cyclotomic integers), collapse it to the rational character
//! table via Galois orbits, and turn fixed-subspace dimension counts into
//! statements about how Mordell–Weil ranks can jump between intermediate
//! fields: minimum nonzero jumps, congruences, realizable jump sets, and
//! per-subfield rank parametrizations.


pub use error::{Error, Result};
pub mod cache;
pub mod chartab;
pub mod classes;
pub mod constraints;
pub mod cyclotomic;
pub mod error;
pub mod exact;
pub mod group;
pub mod lattice;
pub mod modular;
pub mod oracle;
pub mod perm;
pub mod qcurve;
pub mod rational;
pub mod report;
