//! path words and exact path-algebra elements.
//!
//! Composition convention, fixed once for the whole crate: the word `x*y`
//! means "x after y", so it is nonzero exactly when `source(x) = target(y)`.
//! A stored word `[x1, .., xl]` therefore has source `source(xl)` and target
//! `target(x1)`, and new letters that act first are appended on the right.
//!
//! Words are ordered by degree-lexicographic order: first by length, then by
//! the arrow index sequence. Arrow indices are declaration order, which makes
//! declaration order the precedence everywhere (rewriting relies on this).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{Signed, Zero};
use thiserror::Error;

use crate::quiver::GradedQuiver;
use crate::scalar::{format_q_abs, Q};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("operands live over different quivers")]
    MixedQuivers,
    #[error("arrow sequence is not composable at position {0}")]
    NotComposable(usize),
    #[error("unknown arrow index {0}")]
    UnknownArrow(u32),
}

/// A basis word of the path algebra: a lazy vertex path `e_i` or a nonempty
/// composable arrow sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PathWord {
    Vertex(u32),
    Arrows(Vec<u32>),
}

impl PathWord {
    /// Number of arrows; lazy paths have length zero.
    pub fn len(&self) -> usize {
        match self {
            PathWord::Vertex(_) => 0,
            PathWord::Arrows(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn arrows(&self) -> &[u32] {
        match self {
            PathWord::Vertex(_) => &[],
            PathWord::Arrows(v) => v,
        }
    }

    /// Validated constructor; rejects non-composable sequences.
    pub fn from_arrows(q: &GradedQuiver, seq: Vec<u32>) -> Result<Self, AlgebraError> {
        for &a in &seq {
            if a as usize >= q.n_arrows() {
                return Err(AlgebraError::UnknownArrow(a));
            }
        }
        for i in 0..seq.len().saturating_sub(1) {
            if q.arrow(seq[i]).source != q.arrow(seq[i + 1]).target {
                return Err(AlgebraError::NotComposable(i));
            }
        }
        match seq.len() {
            0 => Err(AlgebraError::NotComposable(0)),
            _ => Ok(PathWord::Arrows(seq)),
        }
    }

    pub fn source(&self, q: &GradedQuiver) -> u32 {
        match self {
            PathWord::Vertex(v) => *v,
            PathWord::Arrows(seq) => q.arrow(*seq.last().unwrap()).source,
        }
    }

    pub fn target(&self, q: &GradedQuiver) -> u32 {
        match self {
            PathWord::Vertex(v) => *v,
            PathWord::Arrows(seq) => q.arrow(seq[0]).target,
        }
    }

    pub fn degree(&self, q: &GradedQuiver) -> i64 {
        self.arrows().iter().map(|&a| q.arrow(a).degree).sum()
    }

    /// `self` after `other`, when composable.
    pub fn compose(&self, other: &PathWord, q: &GradedQuiver) -> Option<PathWord> {
        if self.source(q) != other.target(q) {
            return None;
        }
        Some(match (self, other) {
            (PathWord::Vertex(v), PathWord::Vertex(_)) => PathWord::Vertex(*v),
            (PathWord::Vertex(_), w) | (w, PathWord::Vertex(_)) => w.clone(),
            (PathWord::Arrows(x), PathWord::Arrows(y)) => {
                let mut seq = Vec::with_capacity(x.len() + y.len());
                seq.extend_from_slice(x);
                seq.extend_from_slice(y);
                PathWord::Arrows(seq)
            }
        })
    }

    pub fn render(&self, q: &GradedQuiver) -> String {
        match self {
            PathWord::Vertex(v) => format!("e_{}", q.vertex(*v).name),
            PathWord::Arrows(seq) => seq
                .iter()
                .map(|&a| q.arrow(a).name.clone())
                .collect::<Vec<_>>()
                .join("*"),
        }
    }
}

/// Degree-lexicographic order; total on all words over one quiver.
impl Ord for PathWord {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.len().cmp(&other.len()) {
            Ordering::Equal => match (self, other) {
                (PathWord::Vertex(a), PathWord::Vertex(b)) => a.cmp(b),
                (PathWord::Arrows(a), PathWord::Arrows(b)) => a.cmp(b),
                // lengths equal rules out the mixed cases
                _ => unreachable!(),
            },
            c => c,
        }
    }
}

impl PartialOrd for PathWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite `Q`-linear combination of path words over a fixed quiver.
/// Invariant: no explicit zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    quiver: Arc<GradedQuiver>,
    terms: BTreeMap<PathWord, Q>,
}

impl AlgebraElement {
    pub fn zero(quiver: &Arc<GradedQuiver>) -> Self {
        AlgebraElement {
            quiver: Arc::clone(quiver),
            terms: BTreeMap::new(),
        }
    }

    pub fn idempotent(quiver: &Arc<GradedQuiver>, vertex: u32) -> Self {
        Self::monomial(quiver, PathWord::Vertex(vertex), Q::from_integer(1.into()))
    }

    pub fn arrow(quiver: &Arc<GradedQuiver>, arrow: u32) -> Self {
        Self::monomial(
            quiver,
            PathWord::Arrows(vec![arrow]),
            Q::from_integer(1.into()),
        )
    }

    /// Sum of all vertex idempotents; the unit of the path algebra.
    pub fn unit(quiver: &Arc<GradedQuiver>) -> Self {
        let mut terms = BTreeMap::new();
        for (i, _) in quiver.vertices() {
            terms.insert(PathWord::Vertex(i), Q::from_integer(1.into()));
        }
        AlgebraElement {
            quiver: Arc::clone(quiver),
            terms,
        }
    }

    pub fn monomial(quiver: &Arc<GradedQuiver>, word: PathWord, coef: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(word, coef);
        }
        AlgebraElement {
            quiver: Arc::clone(quiver),
            terms,
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (PathWord, Q)>>(
        quiver: &Arc<GradedQuiver>,
        it: I,
    ) -> Self {
        let mut out = Self::zero(quiver);
        for (w, c) in it {
            out.add_term(w, c);
        }
        out
    }

    pub fn quiver(&self) -> &Arc<GradedQuiver> {
        &self.quiver
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PathWord, &Q)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, w: &PathWord) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    /// Largest word in deglex order, if any. The leading word of the element.
    pub fn leading_word(&self) -> Option<(&PathWord, &Q)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, w: PathWord, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(&self.quiver);
        }
        AlgebraElement {
            quiver: Arc::clone(&self.quiver),
            terms: self.terms.iter().map(|(w, q)| (w.clone(), q * c)).collect(),
        }
    }

    /// The product, with the mixed-quiver check. This is the validated entry
    /// point; the operator impls below assume one quiver and panic otherwise.
    pub fn multiply(&self, other: &Self) -> Result<Self, AlgebraError> {
        if !self.quiver.same(&other.quiver) {
            return Err(AlgebraError::MixedQuivers);
        }
        let mut out = Self::zero(&self.quiver);
        for (wx, cx) in &self.terms {
            for (wy, cy) in &other.terms {
                if let Some(w) = wx.compose(wy, &self.quiver) {
                    out.add_term(w, cx * cy);
                }
            }
        }
        Ok(out)
    }

    /// Split into homogeneous pieces by total degree. Zero gives the empty map.
    pub fn degree_decomposition(&self) -> BTreeMap<i64, AlgebraElement> {
        let mut out: BTreeMap<i64, AlgebraElement> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.degree(&self.quiver))
                .or_insert_with(|| Self::zero(&self.quiver))
                .add_term(w.clone(), c.clone());
        }
        out
    }

    /// Zero counts as homogeneous of every degree.
    pub fn is_homogeneous_of(&self, degree: i64) -> bool {
        self.terms.keys().all(|w| w.degree(&self.quiver) == degree)
    }

    /// Common (source, target) of all words; `None` for zero or mixed ends.
    pub fn uniform_endpoints(&self) -> Option<(u32, u32)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let ends = (first.source(&self.quiver), first.target(&self.quiver));
        for w in it {
            if (w.source(&self.quiver), w.target(&self.quiver)) != ends {
                return None;
            }
        }
        Some(ends)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let mag = format_q_abs(c);
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag != "1" {
                write!(f, "{}*", mag)?;
            }
            write!(f, "{}", w.render(&self.quiver))?;
        }
        Ok(())
    }
}

macro_rules! same_quiver {
    ($a:expr, $b:expr) => {
        assert!(
            $a.quiver.same(&$b.quiver),
            "algebra elements over different quivers"
        )
    };
}

impl std::ops::Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        same_quiver!(self, rhs);
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        same_quiver!(self, rhs);
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl std::ops::Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement {
            quiver: Arc::clone(&self.quiver),
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl std::ops::Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        same_quiver!(self, rhs);
        self.multiply(rhs).unwrap()
    }
}

/// Strictly positive integer arrow weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightAssignment {
    quiver: Arc<GradedQuiver>,
    weights: Vec<u64>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightAssignmentError {
    #[error("expected one weight per arrow ({expected}), got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("weight of arrow `{0}` must be >= 1")]
    NotPositive(String),
}

impl WeightAssignment {
    pub fn new(
        quiver: &Arc<GradedQuiver>,
        weights: Vec<u64>,
    ) -> Result<Self, WeightAssignmentError> {
        if weights.len() != quiver.n_arrows() {
            return Err(WeightAssignmentError::WrongLength {
                expected: quiver.n_arrows(),
                got: weights.len(),
            });
        }
        if let Some(ix) = weights.iter().position(|&w| w == 0) {
            return Err(WeightAssignmentError::NotPositive(
                quiver.arrow(ix as u32).name.clone(),
            ));
        }
        Ok(WeightAssignment {
            quiver: Arc::clone(quiver),
            weights,
        })
    }

    pub fn quiver(&self) -> &Arc<GradedQuiver> {
        &self.quiver
    }

    pub fn arrow_weight(&self, arrow: u32) -> u64 {
        self.weights[arrow as usize]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn word_weight(&self, w: &PathWord) -> u64 {
        w.arrows().iter().map(|&a| self.weights[a as usize]).sum()
    }

    /// All words of `x` share weight `w`. Zero passes for every `w`.
    pub fn is_weight_homogeneous_of(&self, x: &AlgebraElement, w: u64) -> bool {
        x.terms().all(|(word, _)| self.word_weight(word) == w)
    }
}
