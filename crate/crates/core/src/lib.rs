//! Exact analysis of one-parameter polynomial deformations `F(x, t)` of a
//! singular function germ `F_0`: singular loci, discriminant, Milnor set,
//! tameness, metric (integral-closure) conditions and the Jacobian criterion,
//! each reported as a three-valued verdict with re-checkable evidence.

pub mod closure;
pub mod corpus;
pub mod error;
pub mod exec;
pub mod germ;
pub mod ideal;
pub mod parse;
pub mod poly;
pub mod random;
pub mod report;
pub mod verdict;

pub use error::{Error, Result};
