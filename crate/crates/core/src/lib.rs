//! Hilbert functions of reduced 0-dimensional schemes on P1 x P1.
//!
//! Two independent routes produce the first difference `ΔM` of a Hilbert
//! matrix:
//!
//! * [`oracle`] computes ranks of monomial evaluation matrices exactly, for
//!   points with explicit coordinates;
//! * [`engine`] updates `ΔM` combinatorially when the points of a new line
//!   are added, refusing whenever the update rule's hypotheses fail.
//!
//! [`acm`] covers staircase configurations, where `ΔM` has a closed form and
//! line additions need no hypothesis check.

pub mod acm;
pub mod bigraded;
pub mod engine;
pub mod field;
pub mod format;
pub mod oracle;
pub mod replay;

pub use bigraded::{DeltaMatrix, Direction, HilbertMatrix};
pub use field::{Field, PrimeField};
pub use oracle::{GridConfig, Incidence};
