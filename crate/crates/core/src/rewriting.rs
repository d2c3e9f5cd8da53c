//! Bounded rewriting for presented degree-0 path algebras: normal forms,
//! per-length dimension counts and a stabilization certificate.
//!
//! Relations are oriented by their degree-lexicographic leading word and the
//! system is completed by resolving every overlap ambiguity of length at most
//! the bound. For length-homogeneous relations the irreducible words of
//! length l then form a basis of the length-l component, so the counts are
//! exact dimensions; for inhomogeneous relations ideal membership can be
//! witnessed through words longer than the bound, so the counts are only
//! upper bounds and the profile says so instead of guessing.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{AlgebraElement, PathWord};
use crate::presentation::Presentation;
use crate::quiver::GradedQuiver;
use crate::scalar::Q;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RewriteError {
    #[error("completion exceeded the cap of {cap} rules")]
    Explosion { cap: usize },
    #[error("completion did not settle within {passes} passes")]
    NoConvergence { passes: usize },
}

/// A monic rule: the leading word rewrites to the strictly smaller rest.
#[derive(Debug, Clone)]
pub struct Rule {
    lead: PathWord,
    rhs: AlgebraElement,
}

impl Rule {
    pub fn lead(&self) -> &PathWord {
        &self.lead
    }

    pub fn rhs(&self) -> &AlgebraElement {
        &self.rhs
    }

    /// The relation lead - rhs as an element.
    fn element(&self, q: &Arc<GradedQuiver>) -> AlgebraElement {
        &AlgebraElement::monomial(q, self.lead.clone(), Q::from_integer(1.into())) - &self.rhs
    }
}

/// Orient a nonzero element into a monic rule.
fn orient(x: &AlgebraElement) -> Option<Rule> {
    let (lead, coef) = x.leading_word()?;
    let lead = lead.clone();
    let inv = Q::from_integer(1.into()) / coef.clone();
    let monic = x.scale(&inv);
    let rhs = &AlgebraElement::monomial(x.quiver(), lead.clone(), Q::from_integer(1.into()))
        - &monic;
    Some(Rule { lead, rhs })
}

#[derive(Debug, Clone)]
pub struct RewriteSystem {
    quiver: Arc<GradedQuiver>,
    rules: Vec<Rule>,
    max_len: usize,
    stable: bool,
}

const DEFAULT_RULE_CAP: usize = 20_000;
const PASS_CAP: usize = 500;

impl RewriteSystem {
    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// True when every overlap of length <= max_len resolves and every
    /// leading word is strictly shorter than max_len.
    pub fn stable(&self) -> bool {
        self.stable
    }

    pub fn quiver(&self) -> &Arc<GradedQuiver> {
        &self.quiver
    }

    pub fn reduce(&self, x: &AlgebraElement) -> AlgebraElement {
        reduce(&self.quiver, &self.rules, x)
    }

    /// Irreducible words grouped by length, lengths 0..=max_len. Length 0
    /// lists the lazy idempotent words.
    pub fn normal_words(&self) -> Vec<Vec<PathWord>> {
        let q = &self.quiver;
        let mut by_len: Vec<Vec<PathWord>> = vec![Vec::new(); self.max_len + 1];
        let mut out_of: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for (ix, a) in q.arrows() {
            out_of.entry(a.source).or_default().push(ix);
        }
        for (v, _) in q.vertices() {
            by_len[0].push(PathWord::Vertex(v));
            // trail in action order; the word reads it backwards
            let mut stack: Vec<(u32, Vec<u32>)> = vec![(v, Vec::new())];
            while let Some((at, trail)) = stack.pop() {
                if trail.len() == self.max_len {
                    continue;
                }
                let Some(nexts) = out_of.get(&at) else {
                    continue;
                };
                for &a in nexts {
                    let mut t = trail.clone();
                    t.push(a);
                    // only suffixes of the new word (prefixes in word order)
                    // are new, so testing rule leads against them suffices
                    let blocked = self.rules.iter().any(|r| {
                        let lead = r.lead.arrows();
                        lead.len() <= t.len()
                            && lead
                                .iter()
                                .enumerate()
                                .all(|(i, &x)| x == t[t.len() - 1 - i])
                    });
                    if blocked {
                        continue;
                    }
                    let seq: Vec<u32> = t.iter().rev().copied().collect();
                    let word =
                        PathWord::from_arrows(q, seq).expect("forward walks stay composable");
                    by_len[t.len()].push(word);
                    stack.push((q.arrow(a).target, t));
                }
            }
        }
        by_len
    }
}

/// One reduction step: replace the first occurrence of a leading word inside
/// the largest reducible term. None when x is already in normal form.
fn reduce_step(
    q: &Arc<GradedQuiver>,
    rules: &[Rule],
    x: &AlgebraElement,
) -> Option<AlgebraElement> {
    for (word, coef) in x.terms().collect::<Vec<_>>().into_iter().rev() {
        let seq = match word {
            PathWord::Vertex(_) => continue,
            PathWord::Arrows(seq) => seq,
        };
        for rule in rules {
            let lead = rule.lead.arrows();
            if lead.len() > seq.len() {
                continue;
            }
            for at in 0..=seq.len() - lead.len() {
                if &seq[at..at + lead.len()] == lead {
                    // x - coef * prefix * (lead - rhs) * suffix
                    let mut repl = AlgebraElement::zero(q);
                    for (t, c) in rule.element(q).terms() {
                        let mut joined: Vec<u32> = seq[..at].to_vec();
                        joined.extend_from_slice(t.arrows());
                        joined.extend_from_slice(&seq[at + lead.len()..]);
                        let w = if joined.is_empty() {
                            word.clone()
                        } else {
                            PathWord::from_arrows(q, joined)
                                .expect("subword replacement preserves composability")
                        };
                        repl = &repl + &AlgebraElement::monomial(q, w, c * coef);
                    }
                    return Some(x - &repl);
                }
            }
        }
    }
    None
}

fn reduce(q: &Arc<GradedQuiver>, rules: &[Rule], x: &AlgebraElement) -> AlgebraElement {
    let mut cur = x.clone();
    while let Some(next) = reduce_step(q, rules, &cur) {
        cur = next;
    }
    cur
}

/// Rewrite every rule against the others until none changes.
fn interreduce(q: &Arc<GradedQuiver>, mut rules: Vec<Rule>) -> Vec<Rule> {
    'outer: loop {
        for k in 0..rules.len() {
            let mut others = rules.clone();
            let rule = others.remove(k);
            let f = rule.element(q);
            let g = reduce(q, &others, &f);
            if (&g - &f).is_zero() {
                continue;
            }
            rules.remove(k);
            if let Some(r) = orient(&g) {
                rules.push(r);
            }
            continue 'outer;
        }
        return rules;
    }
}

/// Proper overlaps of two leading words: a suffix of `a` equal to a prefix of
/// `b`, neither containing the other. Yields (overlap length k).
fn overlaps(a: &[u32], b: &[u32]) -> Vec<usize> {
    let mut out = Vec::new();
    for k in 1..a.len().min(b.len()) {
        if a[a.len() - k..] == b[..k] {
            out.push(k);
        }
    }
    out
}

pub fn complete(p: &Presentation, max_len: usize) -> Result<RewriteSystem, RewriteError> {
    complete_with_cap(p, max_len, DEFAULT_RULE_CAP)
}

pub fn complete_with_cap(
    p: &Presentation,
    max_len: usize,
    rule_cap: usize,
) -> Result<RewriteSystem, RewriteError> {
    let q = p.quiver();
    let mut rules: Vec<Rule> = p.relations().iter().filter_map(orient).collect();

    for _pass in 0..PASS_CAP {
        rules = interreduce(q, rules);
        let mut fresh: Vec<Rule> = Vec::new();
        for i in 0..rules.len() {
            for j in 0..rules.len() {
                let (li, lj) = (rules[i].lead.arrows(), rules[j].lead.arrows());
                for k in overlaps(li, lj) {
                    let total = li.len() + lj.len() - k;
                    if total > max_len {
                        continue;
                    }
                    // the overlap word reduces two ways; their difference
                    // must reduce to zero
                    let tail = PathWord::from_arrows(q, lj[k..].to_vec())
                        .expect("overlap tails are composable");
                    let head = PathWord::from_arrows(q, li[..li.len() - k].to_vec())
                        .expect("overlap heads are composable");
                    let via_i = rules[i]
                        .rhs
                        .multiply(&AlgebraElement::monomial(
                            q,
                            tail,
                            Q::from_integer(1.into()),
                        ))
                        .expect("same quiver");
                    let via_j = AlgebraElement::monomial(q, head, Q::from_integer(1.into()))
                        .multiply(&rules[j].rhs)
                        .expect("same quiver");
                    let s = reduce(q, &rules, &(&via_i - &via_j));
                    if let Some(r) = orient(&s) {
                        fresh.push(r);
                    }
                }
            }
        }
        if fresh.is_empty() {
            let stable = rules.iter().all(|r| r.lead.len() < max_len);
            return Ok(RewriteSystem {
                quiver: Arc::clone(q),
                rules,
                max_len,
                stable,
            });
        }
        rules.extend(fresh);
        if rules.len() > rule_cap {
            return Err(RewriteError::Explosion { cap: rule_cap });
        }
    }
    Err(RewriteError::NoConvergence { passes: PASS_CAP })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TotalDim {
    /// the algebra is finite-dimensional of exactly this dimension
    Finite(usize),
    /// counts are exact but words at the bound survive, so this only bounds
    /// the dimension from below
    AtLeast(usize),
    /// the counts are upper bounds only; no total claim is sound
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionProfile {
    /// irreducible-word counts for lengths 0..=max_len
    pub per_length: Vec<usize>,
    pub total: TotalDim,
    /// counts are dimensions (length-homogeneous relations, all overlaps in
    /// range resolved), not just upper bounds
    pub exact: bool,
    pub stable: bool,
}

fn length_homogeneous(p: &Presentation) -> bool {
    p.relations().iter().all(|r| {
        let mut lens = r.terms().map(|(w, _)| w.len());
        match lens.next() {
            None => true,
            Some(first) => lens.all(|l| l == first),
        }
    })
}

pub fn dimension_profile(
    p: &Presentation,
    max_len: usize,
) -> Result<DimensionProfile, RewriteError> {
    let sys = complete(p, max_len)?;
    let per_length: Vec<usize> = sys.normal_words().iter().map(Vec::len).collect();
    let exact = length_homogeneous(p);
    let sum: usize = per_length.iter().sum();
    let total = if !exact {
        TotalDim::Unknown
    } else if sys.stable() && per_length[max_len] == 0 {
        TotalDim::Finite(sum)
    } else {
        TotalDim::AtLeast(sum)
    };
    Ok(DimensionProfile {
        per_length,
        total,
        exact,
        stable: sys.stable(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimsComparison {
    pub max_len: usize,
    pub agree: bool,
    /// length, left count, right count at the first disagreement
    pub first_mismatch: Option<(usize, usize, usize)>,
    /// both profiles are exact, so agreement compares dimensions
    pub exact: bool,
}

/// Compare per-length profiles. Explicitly a dimension-level comparison up to
/// max_len, not an isomorphism test.
pub fn dims_equal(
    p: &Presentation,
    q: &Presentation,
    max_len: usize,
) -> Result<DimsComparison, RewriteError> {
    let a = dimension_profile(p, max_len)?;
    let b = dimension_profile(q, max_len)?;
    let first_mismatch = a
        .per_length
        .iter()
        .zip(&b.per_length)
        .enumerate()
        .find(|(_, (x, y))| x != y)
        .map(|(l, (&x, &y))| (l, x, y));
    Ok(DimsComparison {
        max_len,
        agree: first_mismatch.is_none(),
        first_mismatch,
        exact: a.exact && b.exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::h0_presentation;
    use crate::completions::{cy_complete_hereditary, ginzburg3, relative_preprojective2};
    use crate::dg::element_from_named;
    use crate::linalg::{FieldSpec, SparseMat, SparseVec};
    use num::Zero;
    use crate::potential::cyclic_normalize;
    use crate::scalar::qi;

    /// Independent per-length dimensions for length-homogeneous relations:
    /// paths of length l modulo the span of all u*r*v of length l.
    fn oracle_dims(p: &Presentation, max_len: usize) -> Vec<usize> {
        let q = p.quiver();
        let mut paths: Vec<Vec<Vec<u32>>> = vec![Vec::new(); max_len + 1];
        paths[0] = q.vertices().map(|_| Vec::new()).collect();
        // grow in action order: extend each path by arrows leaving its end
        let mut live: Vec<(u32, Vec<u32>)> = q.vertices().map(|(v, _)| (v, Vec::new())).collect();
        for len in 1..=max_len {
            let mut next = Vec::new();
            for (at, trail) in &live {
                for (ix, a) in q.arrows() {
                    if a.source == *at {
                        let mut t = trail.clone();
                        t.push(ix);
                        next.push((a.target, t));
                    }
                }
            }
            paths[len] = next
                .iter()
                .map(|(_, t)| t.iter().rev().copied().collect())
                .collect();
            live = next;
        }
        let mut dims = Vec::with_capacity(max_len + 1);
        for len in 0..=max_len {
            let index: BTreeMap<&[u32], usize> = paths[len]
                .iter()
                .map(|s| s.as_slice())
                .enumerate()
                .map(|(i, s)| (s, i))
                .collect();
            let mut cols: Vec<SparseVec> = Vec::new();
            for r in p.relations() {
                let rlen = r.terms().next().map(|(w, _)| w.len()).unwrap_or(0);
                if rlen > len {
                    continue;
                }
                for u in &paths_with(&paths, len, rlen) {
                    // u = (left part, right part) around the relation
                    let (left, right) = u;
                    let mut entries: Vec<(usize, Q)> = Vec::new();
                    let mut ok = true;
                    for (w, c) in r.terms() {
                        let mut joined: Vec<u32> = left.clone();
                        joined.extend_from_slice(w.arrows());
                        joined.extend_from_slice(right);
                        match index.get(joined.as_slice()) {
                            Some(&row) => entries.push((row, c.clone())),
                            None => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if !ok {
                        continue;
                    }
                    entries.sort_by_key(|(r, _)| *r);
                    let mut merged: Vec<(usize, Q)> = Vec::new();
                    for (row, c) in entries {
                        match merged.last_mut() {
                            Some((lr, lc)) if *lr == row => *lc = lc.clone() + c,
                            _ => merged.push((row, c)),
                        }
                    }
                    merged.retain(|(_, c)| !c.is_zero());
                    if !merged.is_empty() {
                        cols.push(merged);
                    }
                }
            }
            let rank = SparseMat::new(paths[len].len(), cols)
                .rank(FieldSpec::Rationals)
                .unwrap();
            dims.push(paths[len].len() - rank);
        }
        dims
    }

    /// All (left, right) path pairs with |left| + inner + |right| = len.
    fn paths_with(
        paths: &[Vec<Vec<u32>>],
        len: usize,
        inner: usize,
    ) -> Vec<(Vec<u32>, Vec<u32>)> {
        let mut out = Vec::new();
        for llen in 0..=(len - inner) {
            let rlen = len - inner - llen;
            for l in &paths[llen] {
                for r in &paths[rlen] {
                    out.push((l.clone(), r.clone()));
                }
            }
        }
        out
    }

    fn triangle_jacobian() -> Presentation {
        let q = GradedQuiver::builder()
            .vertex("1")
            .vertex("2")
            .vertex("3")
            .arrow("a", "3", "2", 0)
            .arrow("b", "1", "3", 0)
            .arrow("c", "2", "1", 0)
            .build()
            .unwrap();
        let w = cyclic_normalize(&element_from_named(&q, &[(&["a", "b", "c"], qi(1))]).unwrap())
            .unwrap();
        h0_presentation(&ginzburg3(&q, &w).unwrap()).unwrap()
    }

    #[test]
    fn jacobian_of_the_triangle_completes_to_three_monomial_rules() {
        let p = triangle_jacobian();
        let sys = complete(&p, 6).unwrap();
        assert!(sys.stable());
        assert_eq!(sys.rules().len(), 3);
        let profile = dimension_profile(&p, 6).unwrap();
        assert_eq!(profile.per_length[..3], [3, 3, 0]);
        assert_eq!(profile.total, TotalDim::Finite(6));
        assert!(profile.exact);
    }

    #[test]
    fn classical_preprojective_of_a2_has_dimension_four() {
        let q = GradedQuiver::builder()
            .vertex("1")
            .vertex("2")
            .arrow("b", "1", "2", 0)
            .build()
            .unwrap();
        let p = h0_presentation(&cy_complete_hereditary(&q, 2).unwrap()).unwrap();
        let profile = dimension_profile(&p, 6).unwrap();
        assert_eq!(profile.total, TotalDim::Finite(4));
        assert_eq!(profile.per_length[..3], [2, 2, 0]);
    }

    #[test]
    fn auslander_algebra_of_truncated_polynomials_has_dimension_fourteen() {
        let q = GradedQuiver::builder()
            .vertex("1")
            .vertex("2")
            .frozen_vertex("3")
            .arrow("b", "1", "2", 0)
            .arrow("a", "2", "3", 0)
            .build()
            .unwrap();
        let p = h0_presentation(&relative_preprojective2(&q).unwrap()).unwrap();
        let profile = dimension_profile(&p, 12).unwrap();
        assert_eq!(profile.total, TotalDim::Finite(14));
    }

    #[test]
    fn free_algebra_is_stable_with_no_rules() {
        let q = GradedQuiver::builder()
            .vertex("1")
            .vertex("2")
            .vertex("3")
            .arrow("b", "1", "2", 0)
            .arrow("a", "2", "3", 0)
            .build()
            .unwrap();
        let p = Presentation::free(&q).unwrap();
        let sys = complete(&p, 4).unwrap();
        assert!(sys.stable());
        assert!(sys.rules().is_empty());
        let profile = dimension_profile(&p, 4).unwrap();
        assert_eq!(profile.total, TotalDim::Finite(6));
    }

    #[test]
    fn truncated_polynomial_ring_counts_powers_below_the_exponent() {
        let q = GradedQuiver::builder()
            .vertex("1")
            .arrow("x", "1", "1", 0)
            .build()
            .unwrap();
        let r = element_from_named(&q, &[(&["x", "x", "x"], qi(1))]).unwrap();
        let p = Presentation::new(&q, vec![r]).unwrap();
        let profile = dimension_profile(&p, 6).unwrap();
        assert_eq!(profile.per_length, vec![1, 1, 1, 0, 0, 0, 0]);
        assert_eq!(profile.total, TotalDim::Finite(3));
    }

    #[test]
    fn commuting_loops_grow_like_a_polynomial_ring() {
        let q = GradedQuiver::builder()
            .vertex("1")
            .arrow("x", "1", "1", 0)
            .arrow("y", "1", "1", 0)
            .build()
            .unwrap();
        let r = element_from_named(&q, &[(&["y", "x"], qi(1)), (&["x", "y"], qi(-1))]).unwrap();
        let p = Presentation::new(&q, vec![r]).unwrap();
        let profile = dimension_profile(&p, 5).unwrap();
        assert_eq!(profile.per_length, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(profile.total, TotalDim::AtLeast(21));
        assert!(profile.exact);
        assert!(profile.stable);
    }

    #[test]
    fn kronecker_preprojective_completion_creates_new_rules_and_matches_the_oracle() {
        let q = GradedQuiver::builder()
            .vertex("1")
            .vertex("2")
            .arrow("a", "1", "2", 0)
            .arrow("b", "1", "2", 0)
            .build()
            .unwrap();
        let p = h0_presentation(&cy_complete_hereditary(&q, 2).unwrap()).unwrap();
        let sys = complete(&p, 6).unwrap();
        assert!(sys.rules().len() > 2, "completion must add rules");
        let profile = dimension_profile(&p, 6).unwrap();
        assert_eq!(profile.per_length, oracle_dims(&p, 6));
        assert_eq!(profile.total, TotalDim::AtLeast(profile.per_length.iter().sum()));
    }

    #[test]
    fn per_length_counts_match_the_linear_algebra_oracle() {
        let cases = vec![triangle_jacobian(), {
            let q = GradedQuiver::builder()
                .vertex("1")
                .vertex("2")
                .frozen_vertex("3")
                .arrow("b", "1", "2", 0)
                .arrow("a", "2", "3", 0)
                .build()
                .unwrap();
            h0_presentation(&relative_preprojective2(&q).unwrap()).unwrap()
        }];
        for p in cases {
            let profile = dimension_profile(&p, 7).unwrap();
            assert_eq!(profile.per_length, oracle_dims(&p, 7));
        }
    }

    #[test]
    fn inhomogeneous_relations_get_no_total_claim() {
        let q = GradedQuiver::builder()
            .vertex("1")
            .vertex("2")
            .vertex("3")
            .arrow("b", "1", "2", 0)
            .arrow("a", "2", "3", 0)
            .arrow("c", "1", "3", 0)
            .build()
            .unwrap();
        let r = element_from_named(&q, &[(&["a", "b"], qi(1)), (&["c"], qi(-1))]).unwrap();
        let p = Presentation::new(&q, vec![r]).unwrap();
        let profile = dimension_profile(&p, 5).unwrap();
        assert!(!profile.exact);
        assert_eq!(profile.total, TotalDim::Unknown);
    }

    #[test]
    fn rule_cap_interrupts_runaway_completions() {
        let q = GradedQuiver::builder()
            .vertex("1")
            .vertex("2")
            .arrow("a", "1", "2", 0)
            .arrow("b", "1", "2", 0)
            .build()
            .unwrap();
        let p = h0_presentation(&cy_complete_hereditary(&q, 2).unwrap()).unwrap();
        assert_eq!(
            complete_with_cap(&p, 10, 3).unwrap_err(),
            RewriteError::Explosion { cap: 3 }
        );
    }

    #[test]
    fn auslander_presentation_agrees_with_a_hand_entered_one() {
        let q = GradedQuiver::builder()
            .vertex("1")
            .vertex("2")
            .frozen_vertex("3")
            .arrow("b", "1", "2", 0)
            .arrow("a", "2", "3", 0)
            .build()
            .unwrap();
        let left = h0_presentation(&relative_preprojective2(&q).unwrap()).unwrap();

        // same algebra, different arrow names, declaration order and signs
        let h = GradedQuiver::builder()
            .vertex("1")
            .vertex("2")
            .vertex("3")
            .arrow("q1", "2", "1", 0)
            .arrow("q2", "3", "2", 0)
            .arrow("p1", "1", "2", 0)
            .arrow("p2", "2", "3", 0)
            .build()
            .unwrap();
        let r1 = element_from_named(&h, &[(&["q1", "p1"], qi(1))]).unwrap();
        let r2 = element_from_named(
            &h,
            &[(&["p1", "q1"], qi(1)), (&["q2", "p2"], qi(-1))],
        )
        .unwrap();
        let right = Presentation::new(&h, vec![r1, r2]).unwrap();

        let cmp = dims_equal(&left, &right, 12).unwrap();
        assert!(cmp.agree, "mismatch: {:?}", cmp.first_mismatch);
        assert!(cmp.exact);

        let refl = dims_equal(&left, &left, 8).unwrap();
        assert!(refl.agree);
    }
}
