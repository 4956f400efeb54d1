use std::sync::Arc;

use super::immersion::Immersion;
use crate::error::Result;
use crate::manifold::{ChartManifold, MatrixField, Structure};
use crate::numeric::{Dual1, Matrix};

/// Pullback metric `dφᵀ g(φ) dφ` on the source chart.
#[derive(Clone, Debug)]
pub struct InducedMetric {
    imm: Immersion,
}

impl MatrixField for InducedMetric {
    fn dim(&self) -> usize {
        self.imm.source_dim()
    }

    fn eval(&self, x: &[Dual1]) -> Result<Matrix<Dual1>> {
        let jet = self.imm.tangent_jet(x)?;
        let g = self.imm.ambient().metric_field().eval(&jet.phi)?;
        jet.t.transpose().matmul(&g)?.matmul(&jet.t)
    }

    fn describe(&self) -> String {
        format!("pullback metric along {}", self.imm.label())
    }
}

/// Tangential part of `J_α` expressed in the source coordinate frame:
/// `G⁻¹ dφᵀ g J_α dφ`. Equals the restriction when the immersion is
/// holomorphic.
#[derive(Clone, Debug)]
pub struct InducedStructure {
    imm: Immersion,
    structure: Structure,
}

impl MatrixField for InducedStructure {
    fn dim(&self) -> usize {
        self.imm.source_dim()
    }

    fn eval(&self, x: &[Dual1]) -> Result<Matrix<Dual1>> {
        let jet = self.imm.tangent_jet(x)?;
        let g = self.imm.ambient().metric_field().eval(&jet.phi)?;
        let j = self.imm.ambient().structure_field(self.structure).eval(&jet.phi)?;
        let tg = jet.t.transpose().matmul(&g)?;
        let gram = tg.matmul(&jet.t)?;
        let rhs = tg.matmul(&j)?.matmul(&jet.t)?;
        gram.solve_matrix(&rhs)
    }

    fn describe(&self) -> String {
        format!("{} restricted along {}", self.structure, self.imm.label())
    }
}

/// The submanifold as a chart manifold in its own right, with the pullback
/// metric and restricted structures.
pub fn induced_manifold(imm: &Immersion) -> Result<ChartManifold> {
    let metric = Arc::new(InducedMetric { imm: imm.clone() });
    let structures = Structure::ALL.map(|s| {
        Arc::new(InducedStructure {
            imm: imm.clone(),
            structure: s,
        }) as Arc<dyn MatrixField>
    });
    ChartManifold::new(format!("submanifold {}", imm.label()), metric, structures)
}
