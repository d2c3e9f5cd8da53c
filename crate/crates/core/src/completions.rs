//! Calabi-Yau style completions of quivers: Ginzburg algebras, derived
//! preprojective algebras, relation completions and partial resolutions.
//!
//! Every constructor returns a [`DgPresentation`] whose quiver extends the
//! input quiver: the original vertices and arrows come first, in their
//! original declaration order and with their original indices, so elements of
//! the input path algebra transport to the output verbatim. Added arrows use
//! the reserved names `bar_<arrow>`, `t_<vertex>`, `rho_<k>` and `c_<k>`; a
//! user arrow already carrying such a name is a validation error, never a
//! silent rename.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::sync::Arc;

use crate::algebra::AlgebraElement;
use crate::algebra::PathWord;
use crate::dg::DgPresentation;
use crate::potential::Potential;
use crate::presentation::Presentation;
use crate::quiver::GradedQuiver;
use crate::scalar::qi;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompletionError {
    #[error("arrow {arrow} has degree {degree}, this construction needs a degree-0 quiver")]
    DegreeNonZero { arrow: String, degree: i64 },
    #[error("the potential lives over a different quiver")]
    ForeignPotential,
    #[error("this construction takes a plain quiver, use the relative variant for frozen data")]
    FrozenData,
    #[error("frozen arrows are not supported here, freeze vertices only")]
    FrozenArrows,
    #[error("the completion parameter n must be at least 1")]
    BadN,
    #[error("added arrow name {name} collides with an existing arrow")]
    NameCollision { name: String },
}

/// A degree-0 quiver with frozen data and a potential over it.
#[derive(Debug, Clone)]
pub struct IceQuiverWithPotential {
    quiver: Arc<GradedQuiver>,
    potential: Potential,
}

impl IceQuiverWithPotential {
    pub fn new(
        quiver: &Arc<GradedQuiver>,
        potential: Potential,
    ) -> Result<Self, CompletionError> {
        require_degree_zero(quiver)?;
        if !potential.quiver().same(quiver) {
            return Err(CompletionError::ForeignPotential);
        }
        Ok(IceQuiverWithPotential {
            quiver: Arc::clone(quiver),
            potential,
        })
    }

    pub fn quiver(&self) -> &Arc<GradedQuiver> {
        &self.quiver
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }
}

fn require_degree_zero(q: &GradedQuiver) -> Result<(), CompletionError> {
    for (_, a) in q.arrows() {
        if a.degree != 0 {
            return Err(CompletionError::DegreeNonZero {
                arrow: a.name.clone(),
                degree: a.degree,
            });
        }
    }
    Ok(())
}

/// Indices of the added arrows inside the extended quiver.
struct Extension {
    quiver: Arc<GradedQuiver>,
    /// old arrow index -> index of its reversal, for reversed arrows only
    bar_of: BTreeMap<u32, u32>,
    /// vertex index -> index of its loop, for looped vertices only
    loop_of: BTreeMap<u32, u32>,
}

/// Rebuild `q` with a reversed arrow for each index in `bar_arrows` and a
/// loop at each vertex in `loop_vertices`. Original indices are preserved.
fn extend_quiver(
    q: &Arc<GradedQuiver>,
    bar_arrows: &[u32],
    loop_vertices: &[u32],
    bar_degree: i64,
    loop_degree: i64,
) -> Result<Extension, CompletionError> {
    let mut taken: BTreeSet<String> = q.arrows().map(|(_, a)| a.name.clone()).collect();
    let mut claim = |name: String| -> Result<String, CompletionError> {
        if !taken.insert(name.clone()) {
            return Err(CompletionError::NameCollision { name });
        }
        Ok(name)
    };

    let mut b = GradedQuiver::builder();
    for (_, v) in q.vertices() {
        b = if v.frozen {
            b.frozen_vertex(&v.name)
        } else {
            b.vertex(&v.name)
        };
    }
    for (_, a) in q.arrows() {
        let src = &q.vertex(a.source).name;
        let tgt = &q.vertex(a.target).name;
        b = if a.frozen {
            b.frozen_arrow(&a.name, src, tgt, a.degree)
        } else {
            b.arrow(&a.name, src, tgt, a.degree)
        };
    }

    let mut bar_of = BTreeMap::new();
    let mut next = q.n_arrows() as u32;
    for &ix in bar_arrows {
        let a = q.arrow(ix);
        let name = claim(format!("bar_{}", a.name))?;
        b = b.arrow(
            &name,
            &q.vertex(a.target).name,
            &q.vertex(a.source).name,
            bar_degree,
        );
        bar_of.insert(ix, next);
        next += 1;
    }
    let mut loop_of = BTreeMap::new();
    for &v in loop_vertices {
        let name = claim(format!("t_{}", q.vertex(v).name))?;
        b = b.arrow(&name, &q.vertex(v).name, &q.vertex(v).name, loop_degree);
        loop_of.insert(v, next);
        next += 1;
    }

    let quiver = b
        .build()
        .expect("the extended quiver reuses validated data and fresh names");
    Ok(Extension {
        quiver,
        bar_of,
        loop_of,
    })
}

/// Reinterpret an element of the input path algebra over the extended quiver.
/// Sound because original arrow and vertex indices are preserved.
fn transport(x: &AlgebraElement, target: &Arc<GradedQuiver>) -> AlgebraElement {
    AlgebraElement::from_terms(target, x.terms().map(|(w, c)| (w.clone(), c.clone())))
}

/// e_i (sum over reversed arrows of a*bar_a - bar_a*a) e_i at vertex `v`.
fn loop_differential(ext: &Extension, v: u32) -> AlgebraElement {
    let q = &ext.quiver;
    let mut terms = Vec::new();
    for (&a, &bar) in &ext.bar_of {
        let arrow = q.arrow(a);
        if arrow.target == v {
            let w = PathWord::from_arrows(q, vec![a, bar]).expect("a*bar_a is composable");
            terms.push((w, qi(1)));
        }
        if arrow.source == v {
            let w = PathWord::from_arrows(q, vec![bar, a]).expect("bar_a*a is composable");
            terms.push((w, qi(-1)));
        }
    }
    AlgebraElement::from_terms(q, terms)
}

fn build_completion(
    q: &Arc<GradedQuiver>,
    w: Option<&Potential>,
    bar_arrows: &[u32],
    loop_vertices: &[u32],
    bar_degree: i64,
    loop_degree: i64,
) -> Result<DgPresentation, CompletionError> {
    let ext = extend_quiver(q, bar_arrows, loop_vertices, bar_degree, loop_degree)?;
    let mut d = BTreeMap::new();
    if let Some(w) = w {
        for (&a, &bar) in &ext.bar_of {
            d.insert(bar, transport(&w.cyclic_derivative(a), &ext.quiver));
        }
    }
    for (&v, &t) in &ext.loop_of {
        d.insert(t, loop_differential(&ext, v));
    }
    Ok(DgPresentation::new(&ext.quiver, d)
        .expect("d^2 = 0 holds identically for this construction"))
}

/// The 3-dimensional Ginzburg dg algebra of a quiver with potential: a
/// reversed arrow of degree -1 for every arrow, a loop of degree -2 at every
/// vertex, d(bar_a) the cyclic derivative of the potential and d(t_i) the
/// idempotent truncation of the commutator sum.
pub fn ginzburg3(
    r: &Arc<GradedQuiver>,
    w: &Potential,
) -> Result<DgPresentation, CompletionError> {
    require_degree_zero(r)?;
    if r.has_frozen_data() {
        return Err(CompletionError::FrozenData);
    }
    if !w.quiver().same(r) {
        return Err(CompletionError::ForeignPotential);
    }
    let bars: Vec<u32> = r.arrows().map(|(ix, _)| ix).collect();
    let loops: Vec<u32> = r.vertices().map(|(ix, _)| ix).collect();
    build_completion(r, Some(w), &bars, &loops, -1, -2)
}

/// The relative 3-dimensional Ginzburg dg algebra of an ice quiver with
/// potential: as the absolute one, except that frozen arrows get no reversal
/// and frozen vertices get no loop.
pub fn relative_ginzburg3(
    ice: &IceQuiverWithPotential,
) -> Result<DgPresentation, CompletionError> {
    let q = ice.quiver();
    let bars: Vec<u32> = q
        .arrows()
        .filter(|(_, a)| !a.frozen)
        .map(|(ix, _)| ix)
        .collect();
    let loops: Vec<u32> = q
        .vertices()
        .filter(|(_, v)| !v.frozen)
        .map(|(ix, _)| ix)
        .collect();
    build_completion(q, Some(ice.potential()), &bars, &loops, -1, -2)
}

/// The n-Calabi-Yau completion of a path algebra kQ: a reversed arrow of
/// degree 2-n per arrow and a loop of degree 1-n per vertex, with d zero on
/// reversals and the commutator sum on loops.
pub fn cy_complete_hereditary(
    q: &Arc<GradedQuiver>,
    n: u32,
) -> Result<DgPresentation, CompletionError> {
    if n < 1 {
        return Err(CompletionError::BadN);
    }
    require_degree_zero(q)?;
    if q.has_frozen_data() {
        return Err(CompletionError::FrozenData);
    }
    let bars: Vec<u32> = q.arrows().map(|(ix, _)| ix).collect();
    let loops: Vec<u32> = q.vertices().map(|(ix, _)| ix).collect();
    let n = i64::from(n);
    build_completion(q, None, &bars, &loops, 2 - n, 1 - n)
}

/// The relative 2-dimensional Ginzburg algebra of a quiver with a frozen
/// vertex set: every arrow is doubled in degree 0, loops of degree -1 appear
/// only at unfrozen vertices. The frozen vertex set is read off the quiver.
pub fn relative_preprojective2(
    q: &Arc<GradedQuiver>,
) -> Result<DgPresentation, CompletionError> {
    require_degree_zero(q)?;
    if !q.frozen_arrows().is_empty() {
        return Err(CompletionError::FrozenArrows);
    }
    let bars: Vec<u32> = q.arrows().map(|(ix, _)| ix).collect();
    let loops: Vec<u32> = q
        .vertices()
        .filter(|(_, v)| !v.frozen)
        .map(|(ix, _)| ix)
        .collect();
    build_completion(q, None, &bars, &loops, 0, -1)
}

/// Adjoin one reverse arrow rho_k per relation and read the relations into a
/// potential: W is the cyclic normal form of sum_k rho_k * r_k.
pub fn relation_completion(
    p: &Presentation,
) -> Result<(Arc<GradedQuiver>, Potential), CompletionError> {
    let q = p.quiver();
    let mut taken: BTreeSet<String> = q.arrows().map(|(_, a)| a.name.clone()).collect();
    let mut b = GradedQuiver::builder();
    for (_, v) in q.vertices() {
        b = if v.frozen {
            b.frozen_vertex(&v.name)
        } else {
            b.vertex(&v.name)
        };
    }
    for (_, a) in q.arrows() {
        b = b.arrow(&a.name, &q.vertex(a.source).name, &q.vertex(a.target).name, 0);
    }
    let mut rho = Vec::new();
    for (k, r) in p.relations().iter().enumerate() {
        let name = format!("rho_{}", k + 1);
        if !taken.insert(name.clone()) {
            return Err(CompletionError::NameCollision { name });
        }
        let (src, tgt) = r
            .uniform_endpoints()
            .expect("presentation relations have uniform endpoints");
        // the reverse arrow runs against the relation
        b = b.arrow(&name, &q.vertex(tgt).name, &q.vertex(src).name, 0);
        rho.push((q.n_arrows() as u32 + k as u32, r));
    }
    let big = b
        .build()
        .expect("the completed quiver reuses validated data and fresh names");
    let mut w = AlgebraElement::zero(&big);
    for (rho_ix, r) in rho {
        let term = AlgebraElement::arrow(&big, rho_ix)
            .multiply(&transport(r, &big))
            .expect("rho_k * r_k is composable by construction");
        w = &w + &term;
    }
    let w = crate::potential::cyclic_normalize(&w)
        .expect("rho_k * r_k is closed of degree 0 by construction");
    Ok((big, w))
}

/// Adjoin one degree -1 arrow c_k per relation with d(c_k) = r_k. The result
/// has H^0 equal to the quotient by the relations; it is not claimed to be a
/// full resolution in lower degrees.
pub fn partial_resolution(p: &Presentation) -> Result<DgPresentation, CompletionError> {
    let q = p.quiver();
    let mut taken: BTreeSet<String> = q.arrows().map(|(_, a)| a.name.clone()).collect();
    let mut b = GradedQuiver::builder();
    for (_, v) in q.vertices() {
        b = if v.frozen {
            b.frozen_vertex(&v.name)
        } else {
            b.vertex(&v.name)
        };
    }
    for (_, a) in q.arrows() {
        b = b.arrow(&a.name, &q.vertex(a.source).name, &q.vertex(a.target).name, 0);
    }
    for (k, r) in p.relations().iter().enumerate() {
        let name = format!("c_{}", k + 1);
        if !taken.insert(name.clone()) {
            return Err(CompletionError::NameCollision { name });
        }
        let (src, tgt) = r
            .uniform_endpoints()
            .expect("presentation relations have uniform endpoints");
        b = b.arrow(&name, &q.vertex(src).name, &q.vertex(tgt).name, -1);
    }
    let big = b
        .build()
        .expect("the resolved quiver reuses validated data and fresh names");
    let mut d = BTreeMap::new();
    for (k, r) in p.relations().iter().enumerate() {
        d.insert(q.n_arrows() as u32 + k as u32, transport(r, &big));
    }
    Ok(DgPresentation::new(&big, d)
        .expect("d^2 vanishes because differentials land in degree-0 arrows"))
}
