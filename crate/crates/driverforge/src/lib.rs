//! Exact toolkit for building quantum driver terms that commute with a set of
//! linear equality constraints over binary variables.
//!
//! A constraint row `c · x = b` over `x ∈ {0,1}^n` embeds as the diagonal spin
//! operator `Σ c_i σ_i^z`. The crate constructs off-diagonal ladder terms
//! (products of `σ^+`/`σ^-` with optional `σ^z` dressing) whose commutator with
//! every such row vanishes identically, verifies that property exactly, and
//! explores the reachability structure the terms induce on the feasible space.
//!
//! All arithmetic is exact: coefficients are arbitrary-precision integers and
//! term amplitudes are pairs of exact rationals, so "commutes" always means a
//! literally zero commutator, never "zero up to tolerance".
//!
//! Modules:
//! - [`model`]: constraint rows, instances, the JSON instance format.
//! - [`algebra`]: ladder terms, the commutation defect, term files.
//! - [`search`]: bounded-weight driver enumeration and the two-local
//!   column-matching shortcut.
//! - [`verify`]: transition-stream commutation checks plus a literal
//!   sparse-matrix oracle.
//! - [`feasibility`]: feasible-state enumeration and transition graphs.
//! - [`reductions`]: subset-sum style oracles, instance reductions, and the
//!   signed full-adder binary-matrix construction.

pub mod algebra;
pub mod feasibility;
pub mod model;
pub mod reductions;
pub mod search;
pub mod verify;

pub use algebra::{DriverHamiltonian, DriverTerm, ExactComplex};
pub use model::{Constraint, ConstraintSet, DomainTag, SpinValue};

/// Default cap on `n` for operations that enumerate all `2^n` basis states.
pub const DEFAULT_STATE_CAP: usize = 24;

/// Hard ceiling on `n` for state enumeration; caps above this are rejected.
pub const HARD_STATE_CAP: usize = 28;

/// Default cap on `|S|` for the subset-style brute-force oracles.
pub const DEFAULT_ORACLE_CAP: usize = 18;
