//! finite graded quivers, optionally with frozen (ice) structure.
//!
//! A quiver here is a finite set of named vertices and named arrows, each
//! arrow carrying an integer cohomological degree. Vertices and arrows may be
//! marked frozen; a frozen arrow must have frozen endpoints. Arrow order is
//! declaration order and is load-bearing: it is the tie-breaking precedence
//! for every word order in the crate, so constructors must append new arrows,
//! never reorder old ones.
//!
//! Quivers are immutable after construction and shared behind `Arc`, so all
//! the algebra on top of them is `Send + Sync` for free.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuiverError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow id `{0}`")]
    DuplicateArrow(String),
    #[error("arrow `{arrow}` references unknown vertex `{vertex}`")]
    UnknownEndpoint { arrow: String, vertex: String },
    #[error("frozen arrow `{0}` must have frozen source and target")]
    FrozenEndpoints(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub frozen: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: u32,
    pub target: u32,
    pub degree: i64,
    pub frozen: bool,
}

/// Arrow data by name, used to feed [`GradedQuiver::new`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowSpec {
    pub name: String,
    pub source: String,
    pub target: String,
    pub degree: i64,
    pub frozen: bool,
}

#[derive(Debug, PartialEq, Eq)]
pub struct GradedQuiver {
    vertices: Vec<Vertex>,
    arrows: Vec<Arrow>,
    vertex_ix: BTreeMap<String, u32>,
    arrow_ix: BTreeMap<String, u32>,
}

impl GradedQuiver {
    pub fn new(
        vertices: Vec<(String, bool)>,
        arrows: Vec<ArrowSpec>,
    ) -> Result<Arc<Self>, QuiverError> {
        let mut vertex_ix = BTreeMap::new();
        let mut vs = Vec::with_capacity(vertices.len());
        for (name, frozen) in vertices {
            if vertex_ix.insert(name.clone(), vs.len() as u32).is_some() {
                return Err(QuiverError::DuplicateVertex(name));
            }
            vs.push(Vertex { name, frozen });
        }
        let mut arrow_ix = BTreeMap::new();
        let mut ars = Vec::with_capacity(arrows.len());
        for spec in arrows {
            let look = |v: &str| {
                vertex_ix
                    .get(v)
                    .copied()
                    .ok_or_else(|| QuiverError::UnknownEndpoint {
                        arrow: spec.name.clone(),
                        vertex: v.to_string(),
                    })
            };
            let source = look(&spec.source)?;
            let target = look(&spec.target)?;
            if spec.frozen && !(vs[source as usize].frozen && vs[target as usize].frozen) {
                return Err(QuiverError::FrozenEndpoints(spec.name));
            }
            if arrow_ix.insert(spec.name.clone(), ars.len() as u32).is_some() {
                return Err(QuiverError::DuplicateArrow(spec.name));
            }
            ars.push(Arrow {
                name: spec.name,
                source,
                target,
                degree: spec.degree,
                frozen: spec.frozen,
            });
        }
        Ok(Arc::new(GradedQuiver {
            vertices: vs,
            arrows: ars,
            vertex_ix,
            arrow_ix,
        }))
    }

    pub fn builder() -> QuiverBuilder {
        QuiverBuilder::default()
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex(&self, ix: u32) -> &Vertex {
        &self.vertices[ix as usize]
    }

    pub fn arrow(&self, ix: u32) -> &Arrow {
        &self.arrows[ix as usize]
    }

    pub fn vertices(&self) -> impl Iterator<Item = (u32, &Vertex)> {
        self.vertices.iter().enumerate().map(|(i, v)| (i as u32, v))
    }

    pub fn arrows(&self) -> impl Iterator<Item = (u32, &Arrow)> {
        self.arrows.iter().enumerate().map(|(i, a)| (i as u32, a))
    }

    pub fn vertex_named(&self, name: &str) -> Option<u32> {
        self.vertex_ix.get(name).copied()
    }

    pub fn arrow_named(&self, name: &str) -> Option<u32> {
        self.arrow_ix.get(name).copied()
    }

    pub fn frozen_vertices(&self) -> Vec<u32> {
        self.vertices()
            .filter(|(_, v)| v.frozen)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn frozen_arrows(&self) -> Vec<u32> {
        self.arrows()
            .filter(|(_, a)| a.frozen)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn has_frozen_data(&self) -> bool {
        self.vertices.iter().any(|v| v.frozen) || self.arrows.iter().any(|a| a.frozen)
    }

    /// All arrow degrees zero, i.e. the quiver of an ordinary path algebra.
    pub fn is_degree_zero(&self) -> bool {
        self.arrows.iter().all(|a| a.degree == 0)
    }

    /// Two handles denote the same quiver. Pointer identity first, contents
    /// as a fallback so independently built equal quivers interoperate.
    pub fn same(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

impl fmt::Display for GradedQuiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vertices {
            write!(f, "vertex {}", v.name)?;
            if v.frozen {
                write!(f, " frozen")?;
            }
            writeln!(f)?;
        }
        for a in &self.arrows {
            write!(
                f,
                "arrow {} : {} -> {}",
                a.name, self.vertices[a.source as usize].name, self.vertices[a.target as usize].name
            )?;
            if a.degree != 0 {
                write!(f, " deg {}", a.degree)?;
            }
            if a.frozen {
                write!(f, " frozen")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Default)]
pub struct QuiverBuilder {
    vertices: Vec<(String, bool)>,
    arrows: Vec<ArrowSpec>,
}

impl QuiverBuilder {
    pub fn vertex(mut self, name: &str) -> Self {
        self.vertices.push((name.to_string(), false));
        self
    }

    pub fn frozen_vertex(mut self, name: &str) -> Self {
        self.vertices.push((name.to_string(), true));
        self
    }

    pub fn arrow(mut self, name: &str, source: &str, target: &str, degree: i64) -> Self {
        self.arrows.push(ArrowSpec {
            name: name.to_string(),
            source: source.to_string(),
            target: target.to_string(),
            degree,
            frozen: false,
        });
        self
    }

    pub fn frozen_arrow(mut self, name: &str, source: &str, target: &str, degree: i64) -> Self {
        self.arrows.push(ArrowSpec {
            name: name.to_string(),
            source: source.to_string(),
            target: target.to_string(),
            degree,
            frozen: true,
        });
        self
    }

    pub fn build(self) -> Result<Arc<GradedQuiver>, QuiverError> {
        GradedQuiver::new(self.vertices, self.arrows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_ids_and_dangling_endpoints() {
        let err = GradedQuiver::builder().vertex("1").vertex("1").build();
        assert_eq!(err.unwrap_err(), QuiverError::DuplicateVertex("1".into()));

        let err = GradedQuiver::builder()
            .vertex("1")
            .arrow("a", "1", "2", 0)
            .build();
        assert!(matches!(err.unwrap_err(), QuiverError::UnknownEndpoint { .. }));
    }

    #[test]
    fn frozen_arrow_needs_frozen_endpoints() {
        let err = GradedQuiver::builder()
            .vertex("1")
            .frozen_vertex("2")
            .frozen_arrow("a", "1", "2", 0)
            .build();
        assert_eq!(err.unwrap_err(), QuiverError::FrozenEndpoints("a".into()));

        let ok = GradedQuiver::builder()
            .frozen_vertex("1")
            .frozen_vertex("2")
            .frozen_arrow("a", "1", "2", 0)
            .build();
        assert!(ok.is_ok());
    }

    #[test]
    fn declaration_order_is_preserved() {
        let q = GradedQuiver::builder()
            .vertex("v")
            .arrow("z", "v", "v", 0)
            .arrow("a", "v", "v", 0)
            .build()
            .unwrap();
        assert_eq!(q.arrow(0).name, "z");
        assert_eq!(q.arrow(1).name, "a");
        assert_eq!(q.arrow_named("a"), Some(1));
    }

    #[test]
    fn content_equal_quivers_are_the_same_quiver() {
        let mk = || {
            GradedQuiver::builder()
                .vertex("1")
                .vertex("2")
                .arrow("a", "1", "2", 0)
                .build()
                .unwrap()
        };
        let (p, q) = (mk(), mk());
        assert!(p.same(&q));
    }
}
