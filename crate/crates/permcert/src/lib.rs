//! Certified bounds on permanents of Hermitian positive semidefinite
//! matrices.
//!
//! The toolkit computes a convex relaxation of the permanent whose optimum
//! sandwiches `per(A)` between an approximation-factor lower bound and the
//! relaxation value itself, extracts machine-checkable diagonal certificates
//! for the upper bound, rounds relaxation solutions to explicit witness
//! vectors for the lower bound, reduces solution rank to O(sqrt(n)), and
//! cross-checks everything against exact permanent oracles at small sizes.

pub mod constants;
pub mod conjecture;
pub mod error;
pub mod hermitian;
pub mod instances;
pub mod io;
pub mod permanent;
pub mod rank_reduction;
pub mod relaxation;
pub mod rng;
pub mod rounding;
pub mod structure;

pub use error::{Error, Result};
