//! potentials: linear combinations of closed degree-0 words up to cyclic
//! rotation, stored in a normal form so equality of potentials is equality
//! of elements.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraElement, PathWord};
use crate::quiver::GradedQuiver;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PotentialError {
    #[error("word `{0}` is not closed (source differs from target)")]
    NotClosed(String),
    #[error("word `{0}` has nonzero degree")]
    NotDegreeZero(String),
    #[error("a potential may not contain lazy paths")]
    LazyWord,
}

/// A potential in cyclic normal form: every word is closed, of degree 0, and
/// rotated to its lexicographically minimal representative; rotation-equal
/// words are merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Potential {
    elem: AlgebraElement,
}

/// The lexicographically minimal rotation of a closed word's arrow sequence.
fn minimal_rotation(seq: &[u32]) -> Vec<u32> {
    let mut best: Option<Vec<u32>> = None;
    for k in 0..seq.len() {
        let mut rot = Vec::with_capacity(seq.len());
        rot.extend_from_slice(&seq[k..]);
        rot.extend_from_slice(&seq[..k]);
        if best.as_ref().is_none_or(|b| rot < *b) {
            best = Some(rot);
        }
    }
    best.expect("nonempty sequence")
}

/// Normalize a combination of closed degree-0 words into a `Potential`.
pub fn cyclic_normalize(x: &AlgebraElement) -> Result<Potential, PotentialError> {
    let q = x.quiver();
    let mut out = AlgebraElement::zero(q);
    for (w, c) in x.terms() {
        let seq = match w {
            PathWord::Vertex(_) => return Err(PotentialError::LazyWord),
            PathWord::Arrows(seq) => seq,
        };
        if w.source(q) != w.target(q) {
            return Err(PotentialError::NotClosed(w.render(q)));
        }
        if w.degree(q) != 0 {
            return Err(PotentialError::NotDegreeZero(w.render(q)));
        }
        let norm = PathWord::Arrows(minimal_rotation(seq));
        out = &out + &AlgebraElement::monomial(q, norm, c.clone());
    }
    Ok(Potential { elem: out })
}

impl Potential {
    pub fn zero(quiver: &Arc<GradedQuiver>) -> Self {
        Potential {
            elem: AlgebraElement::zero(quiver),
        }
    }

    pub fn element(&self) -> &AlgebraElement {
        &self.elem
    }

    pub fn quiver(&self) -> &Arc<GradedQuiver> {
        self.elem.quiver()
    }

    pub fn is_zero(&self) -> bool {
        self.elem.is_zero()
    }

    /// The cyclic derivative with respect to an arrow: each occurrence
    /// p = u a v contributes v u, a path from target(a) to source(a).
    pub fn cyclic_derivative(&self, arrow: u32) -> AlgebraElement {
        let q = self.elem.quiver();
        let mut out = AlgebraElement::zero(q);
        for (w, c) in self.elem.terms() {
            let seq = w.arrows();
            for i in 0..seq.len() {
                if seq[i] != arrow {
                    continue;
                }
                let mut vu = Vec::with_capacity(seq.len() - 1);
                vu.extend_from_slice(&seq[i + 1..]);
                vu.extend_from_slice(&seq[..i]);
                let word = if vu.is_empty() {
                    PathWord::Vertex(q.arrow(arrow).source)
                } else {
                    PathWord::Arrows(vu)
                };
                out = &out + &AlgebraElement::monomial(q, word, c.clone());
            }
        }
        out
    }
}

impl std::fmt::Display for Potential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.elem.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::element_from_named;
    use crate::scalar::qi;

    fn three_loops() -> Arc<GradedQuiver> {
        GradedQuiver::builder()
            .vertex("1")
            .arrow("a", "1", "1", 0)
            .arrow("b", "1", "1", 0)
            .arrow("c", "1", "1", 0)
            .build()
            .unwrap()
    }

    #[test]
    fn rotations_collapse_in_normal_form() {
        let q = three_loops();
        let abc = element_from_named(&q, &[(&["a", "b", "c"], qi(1))]).unwrap();
        let cab = element_from_named(&q, &[(&["c", "a", "b"], qi(2))]).unwrap();
        let w = cyclic_normalize(&(&abc + &cab)).unwrap();
        // both rotate to a*b*c, coefficients add
        assert_eq!(w.element().to_string(), "3*a*b*c");
        // rotation-equal inputs normalize identically
        let bca = element_from_named(&q, &[(&["b", "c", "a"], qi(3))]).unwrap();
        assert_eq!(cyclic_normalize(&bca).unwrap().element().to_string(), "3*a*b*c");
    }

    #[test]
    fn non_closed_words_are_rejected() {
        let q = GradedQuiver::builder()
            .vertex("1")
            .vertex("2")
            .arrow("a", "1", "2", 0)
            .build()
            .unwrap();
        let a = AlgebraElement::arrow(&q, 0);
        assert_eq!(
            cyclic_normalize(&a).unwrap_err(),
            PotentialError::NotClosed("a".into())
        );
    }

    #[test]
    fn nonzero_degree_words_are_rejected() {
        let q = GradedQuiver::builder()
            .vertex("1")
            .arrow("v", "1", "1", -1)
            .build()
            .unwrap();
        let v = AlgebraElement::arrow(&q, 0);
        assert_eq!(
            cyclic_normalize(&v).unwrap_err(),
            PotentialError::NotDegreeZero("v".into())
        );
    }

    #[test]
    fn derivative_collects_every_occurrence() {
        // d/da (a*b*a*c) = b*a*c + c*a*b
        let q = three_loops();
        let w = cyclic_normalize(
            &element_from_named(&q, &[(&["a", "b", "a", "c"], qi(1))]).unwrap(),
        )
        .unwrap();
        let da = w.cyclic_derivative(0);
        let expect = &element_from_named(&q, &[(&["b", "a", "c"], qi(1))]).unwrap()
            + &element_from_named(&q, &[(&["c", "a", "b"], qi(1))]).unwrap();
        assert_eq!(da, expect);
    }

    #[test]
    fn derivative_is_rotation_invariant() {
        let q = three_loops();
        let p1 = cyclic_normalize(
            &element_from_named(&q, &[(&["a", "b", "a", "c"], qi(1))]).unwrap(),
        )
        .unwrap();
        let p2 = cyclic_normalize(
            &element_from_named(&q, &[(&["a", "c", "a", "b"], qi(1))]).unwrap(),
        )
        .unwrap();
        assert_eq!(p1, p2);
        for arrow in 0..3 {
            assert_eq!(p1.cyclic_derivative(arrow), p2.cyclic_derivative(arrow));
        }
    }

    #[test]
    fn derivative_of_a_single_loop_is_the_idempotent() {
        let q = three_loops();
        let w =
            cyclic_normalize(&element_from_named(&q, &[(&["a"], qi(5))]).unwrap()).unwrap();
        assert_eq!(w.cyclic_derivative(0).to_string(), "5*e_1");
    }
}
