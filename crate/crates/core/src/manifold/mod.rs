//! Chart-level pseudo-Riemannian geometry: metric, Levi-Civita connection,
//! covariant derivatives of the structures, fundamental tensors, Lee forms
//! and Nijenhuis tensors.
//!
//! All traces and components are taken in the chart coordinate frame.

mod chart;
mod field;
mod geometry;
mod nijenhuis;

pub use chart::{ChartManifold, Structure};
pub use field::{
    field_value, BlockDiagField, ConformalField, ConstantField, ExprField, FieldRef, MatrixField,
};
pub use geometry::{
    christoffel, compose_covector, contract3, fundamental_f, fundamental_tensor, lee_forms,
    nabla_j, point_geometry, trace_lee, LeeData, PointGeometry, Tensor3,
};
pub use nijenhuis::{nijenhuis, nijenhuis_max};
