//! Holomorphic submanifolds: frames, Gauss-Weingarten data, mean curvature,
//! the induced structure, and the identities relating them to the ambient
//! Lee forms.

mod checks;
mod immersion;
mod induced;

pub use checks::{
    lee_restriction_check, theorem31_over, theorem31_residuals, umbilicity_classify, CrossCheck,
    LeeRestriction, Theorem31Residuals, Umbilicity, UmbilicityReport,
};
pub use immersion::{frame_at, holomorphy_residual, Frame, Immersion, LeeSplit};
pub use induced::{induced_manifold, InducedMetric, InducedStructure};
