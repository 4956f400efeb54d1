//! Dense linear algebra and forward-mode automatic differentiation.

mod diff;
mod dual;
mod eigen;
mod matrix;
mod nullspace;
mod scalar;

pub use diff::{hessian, jacobian};
pub use dual::{Dual1, Dual2};
pub use eigen::{inertia, symmetric_eigenvalues, Inertia};
pub use matrix::{bilinear, dot, max_abs, norm, Matrix, PIVOT_TOL};
pub use nullspace::{null_space, RANK_TOL};
pub use scalar::Scalar;
