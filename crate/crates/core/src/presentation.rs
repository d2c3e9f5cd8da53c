//! presentations kQ/(relations) of ordinary (degree-0) path algebras.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraElement, PathWord};
use crate::quiver::GradedQuiver;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("presentations require a degree-0 quiver (arrow `{0}` has nonzero degree)")]
    NotDegreeZero(String),
    #[error("relation {0} is zero")]
    ZeroRelation(usize),
    #[error("relation {0} mixes words with different endpoints")]
    MixedEndpoints(usize),
    #[error("relation {0} contains a lazy path")]
    LazyWord(usize),
    #[error("relation {0} lives over a different quiver")]
    ForeignRelation(usize),
}

/// A degree-0 path algebra with relations. Each relation is a nonzero
/// combination of genuine paths sharing one (source, target).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    quiver: Arc<GradedQuiver>,
    relations: Vec<AlgebraElement>,
}

impl Presentation {
    pub fn new(
        quiver: &Arc<GradedQuiver>,
        relations: Vec<AlgebraElement>,
    ) -> Result<Self, PresentationError> {
        if let Some((_, a)) = quiver.arrows().find(|(_, a)| a.degree != 0) {
            return Err(PresentationError::NotDegreeZero(a.name.clone()));
        }
        for (k, r) in relations.iter().enumerate() {
            if !r.quiver().same(quiver) {
                return Err(PresentationError::ForeignRelation(k + 1));
            }
            if r.is_zero() {
                return Err(PresentationError::ZeroRelation(k + 1));
            }
            if r.terms().any(|(w, _)| matches!(w, PathWord::Vertex(_))) {
                return Err(PresentationError::LazyWord(k + 1));
            }
            if r.uniform_endpoints().is_none() {
                return Err(PresentationError::MixedEndpoints(k + 1));
            }
        }
        Ok(Presentation {
            quiver: Arc::clone(quiver),
            relations,
        })
    }

    /// The free path algebra: no relations.
    pub fn free(quiver: &Arc<GradedQuiver>) -> Result<Self, PresentationError> {
        Self::new(quiver, Vec::new())
    }

    pub fn quiver(&self) -> &Arc<GradedQuiver> {
        &self.quiver
    }

    pub fn relations(&self) -> &[AlgebraElement] {
        &self.relations
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::element_from_named;
    use crate::scalar::qi;

    #[test]
    fn accepts_the_linear_example() {
        let q = GradedQuiver::builder()
            .vertex("1")
            .vertex("2")
            .vertex("3")
            .arrow("b", "1", "2", 0)
            .arrow("a", "2", "3", 0)
            .build()
            .unwrap();
        let ab = element_from_named(&q, &[(&["a", "b"], qi(1))]).unwrap();
        let p = Presentation::new(&q, vec![ab]).unwrap();
        assert_eq!(p.relations().len(), 1);
    }

    #[test]
    fn rejects_mixed_endpoints_and_graded_quivers() {
        let q = GradedQuiver::builder()
            .vertex("1")
            .vertex("2")
            .arrow("a", "1", "2", 0)
            .arrow("l", "1", "1", 0)
            .build()
            .unwrap();
        let bad = &element_from_named(&q, &[(&["a"], qi(1))]).unwrap()
            + &element_from_named(&q, &[(&["l"], qi(1))]).unwrap();
        assert_eq!(
            Presentation::new(&q, vec![bad]).unwrap_err(),
            PresentationError::MixedEndpoints(1)
        );

        let graded = GradedQuiver::builder()
            .vertex("1")
            .arrow("v", "1", "1", -1)
            .build()
            .unwrap();
        assert_eq!(
            Presentation::free(&graded).unwrap_err(),
            PresentationError::NotDegreeZero("v".into())
        );
    }
}
