//! Solvers for linear complementarity problems arising from two-sided
//! beam contact.
//!
//! An LCP `(q, M)` asks for `z >= 0` with `w = q + M z >= 0` and `z'w = 0`.
//! The contact instances handled here have the block form
//!
//! ```text
//! [γ_l]   [ K  -K] [F_l]   [ q̃ + y*]
//! [γ_u] = [-K   K] [F_u] + [-q̃ + y*]
//! ```
//!
//! with `K` symmetric positive definite and `y* > 0`. `M` is only positive
//! semi-definite, yet the solution is unique. The crate provides:
//!
//! - [`lemke`]: a general complementary pivoting solver,
//! - [`contact`]: the structured instance and a coordinate relaxation solver
//!   working on the signed net force `d = F_l - F_u`,
//! - [`cascade`]: block lower-triangular chains of contact problems solved
//!   block by block,
//! - [`oracle`]: brute-force support enumeration used to certify existence
//!   and uniqueness on small instances,
//! - [`beam`]: a simply supported Euler-Bernoulli beam that produces
//!   flexibility matrices and load vectors.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod beam;
pub mod cascade;
pub mod contact;
pub mod dense;
mod error;
pub mod lcp;
pub mod lemke;
pub mod oracle;

pub use beam::{BeamConfig, Load, Stabilizer};
pub use cascade::{CascadeBlock, CascadeProblem, CascadeSolution, Coupling};
pub use contact::{ContactLcp, ContactSolution, PgsOptions};
pub use dense::{Cholesky, DenseMatrix, DenseVector};
pub use error::{Error, Result};
pub use lcp::{LcpProblem, LcpSolution, SolverTag, ValidationReport, Violation, ViolationKind};
pub use lemke::{lemke_solve, LemkeOptions};
pub use oracle::{certify_unique, enumerate_solutions, EnumerationResult, Verdict};
