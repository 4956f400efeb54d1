//! Chart-level engine for almost hypercomplex manifolds with Hermitian and
//! Norden metrics and their holomorphic submanifolds.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod expr;
pub mod hypercomplex;
pub mod manifold;
pub mod numeric;
pub mod policy;
pub mod sampling;
pub mod submanifold;

pub use error::{Error, Result};
