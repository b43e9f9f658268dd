use crate::delta::DeltaFamily;
use crate::limits::Limits;
use crate::structure::BipartiteStructure;
use crate::vc;

/// A structure together with the Δ family and limits used to study it.
///
/// The Δ arity defaults to the structure's independence dimension.
#[derive(Debug, Clone)]
pub struct Lab<'s> {
    pub structure: &'s BipartiteStructure,
    pub delta: DeltaFamily,
    /// `ID(φ)` of the structure, searched without a cap.
    pub id: usize,
    pub limits: Limits,
}

impl<'s> Lab<'s> {
    pub fn new(structure: &'s BipartiteStructure) -> Self {
        let id = vc::id(structure);
        Lab {
            structure,
            delta: DeltaFamily::new(id),
            id,
            limits: Limits::default(),
        }
    }

    /// Overrides the Δ arity.
    pub fn with_arity(mut self, arity: usize) -> Self {
        self.delta = DeltaFamily::new(arity);
        self
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }
}
