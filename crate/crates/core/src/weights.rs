//! Weight inference for dg presentations.
//!
//! A weight assignment gives every arrow a positive integer weight so that
//! each d(a) is weight-homogeneous of weight(a). The differential then
//! preserves weight, which is what lets the homology engine work one finite
//! component at a time. Weights solve a homogeneous linear system (one
//! equation per word of each differential) subject to weight >= 1; among the
//! integer solutions we return the one of minimal total weight, breaking
//! ties lexicographically in arrow declaration order.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num::{BigInt, Integer, One, Signed, Zero};

use crate::algebra::{PathWord, WeightAssignment};
use crate::dg::DgPresentation;
use crate::linalg::rref_dense;
use crate::scalar::{qi, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightError {
    #[error("no admissible weight grading, these constraints cannot all hold: {}", constraints.join("; "))]
    Infeasible { constraints: Vec<String> },
    #[error("weight search budget exceeded near arrow {arrow}")]
    SearchBudget { arrow: String },
}

/// One equation: weight(arrow) equals the weight of a word in its differential.
#[derive(Debug, Clone)]
struct Constraint {
    arrow: u32,
    word: PathWord,
}

impl Constraint {
    /// Coefficient vector over all arrows: occurrences in the word minus one
    /// at the arrow itself. The equation is "vector . weights = 0".
    fn vector(&self, n_arrows: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); n_arrows];
        for &x in self.word.arrows() {
            v[x as usize] += qi(1);
        }
        v[self.arrow as usize] -= qi(1);
        v
    }

    fn render(&self, p: &DgPresentation) -> String {
        let q = p.quiver();
        let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
        for &x in self.word.arrows() {
            *counts.entry(x).or_insert(0) += 1;
        }
        let rhs = if counts.is_empty() {
            "0".to_string()
        } else {
            counts
                .iter()
                .map(|(&x, &c)| {
                    let name = &q.arrow(x).name;
                    if c == 1 {
                        format!("weight({name})")
                    } else {
                        format!("{c}*weight({name})")
                    }
                })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        format!("weight({}) = {}", q.arrow(self.arrow).name, rhs)
    }
}

fn constraints_of(p: &DgPresentation) -> Vec<Constraint> {
    let mut out = Vec::new();
    for (ix, _) in p.quiver().arrows() {
        for (w, _) in p.d_of_arrow(ix).terms() {
            out.push(Constraint {
                arrow: ix,
                word: w.clone(),
            });
        }
    }
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, i: usize) -> usize {
        if self.0[i] != i {
            let r = self.find(self.0[i]);
            self.0[i] = r;
        }
        self.0[i]
    }

    fn union(&mut self, i: usize, j: usize) {
        let (a, b) = (self.find(i), self.find(j));
        self.0[a] = b;
    }
}

/// An inequality "coeffs . f >= rhs" over the free variables.
#[derive(Debug, Clone)]
struct Ineq {
    coeffs: Vec<Q>,
    rhs: Q,
}

/// Fourier-Motzkin elimination. Returns the systems seen before each
/// elimination step (stage j still contains variables j..k), or None if a
/// contradictory constant inequality appears.
fn fourier_motzkin(initial: Vec<Ineq>, n_vars: usize) -> Option<Vec<Vec<Ineq>>> {
    let mut stages = vec![initial];
    for var in 0..n_vars {
        let current = stages.last().unwrap();
        let mut next: Vec<Ineq> = Vec::new();
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        for iq in current {
            let c = &iq.coeffs[var];
            if c.is_zero() {
                next.push(iq.clone());
            } else if c.is_positive() {
                lower.push(iq);
            } else {
                upper.push(iq);
            }
        }
        for lo in &lower {
            for hi in &upper {
                // scale so the variable cancels: hi has negative coefficient
                let a = lo.coeffs[var].clone();
                let b = -hi.coeffs[var].clone();
                let coeffs: Vec<Q> = (0..lo.coeffs.len())
                    .map(|j| &lo.coeffs[j] * &b + &hi.coeffs[j] * &a)
                    .collect();
                let rhs = &lo.rhs * &b + &hi.rhs * &a;
                next.push(Ineq { coeffs, rhs });
            }
        }
        next.retain(|iq| {
            if iq.coeffs.iter().all(Q::is_zero) {
                // constant inequality: keep only if violated, to detect below
                iq.rhs.is_positive()
            } else {
                true
            }
        });
        stages.push(next);
    }
    let contradiction = stages.iter().any(|sys| {
        sys.iter()
            .any(|iq| iq.coeffs.iter().all(Q::is_zero) && iq.rhs.is_positive())
    });
    if contradiction {
        return None;
    }
    Some(stages)
}

/// Pick a rational feasible point by walking the elimination stages backwards,
/// always taking the smallest admissible value.
fn feasible_point(stages: &[Vec<Ineq>], n_vars: usize) -> Vec<Q> {
    let mut f = vec![Q::zero(); n_vars];
    for var in (0..n_vars).rev() {
        let mut lower: Option<Q> = None;
        let mut upper: Option<Q> = None;
        for iq in &stages[var] {
            let c = &iq.coeffs[var];
            if c.is_zero() {
                continue;
            }
            let mut rest = iq.rhs.clone();
            for j in var + 1..n_vars {
                rest -= &iq.coeffs[j] * &f[j];
            }
            let bound = rest / c.clone();
            if c.is_positive() {
                lower = Some(match lower {
                    Some(l) if l >= bound => l,
                    _ => bound,
                });
            } else {
                upper = Some(match upper {
                    Some(u) if u <= bound => u,
                    _ => bound,
                });
            }
        }
        f[var] = match (lower, upper) {
            (Some(l), _) => l,
            (None, Some(u)) => u,
            (None, None) => Q::one(),
        };
    }
    f
}

/// Everything about one connected component of the constraint graph.
struct ComponentSolver {
    /// global arrow indices in this component, ascending
    arrows: Vec<u32>,
    /// rows of the reduced system over the component's local coordinates
    basis_rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
    free_cols: Vec<usize>,
}

impl ComponentSolver {
    fn new(arrows: Vec<u32>, constraints: &[Constraint], n_arrows: usize) -> Self {
        let local: BTreeMap<u32, usize> = arrows
            .iter()
            .enumerate()
            .map(|(i, &a)| (a, i))
            .collect();
        let rows: Vec<Vec<Q>> = constraints
            .iter()
            .map(|c| {
                let full = c.vector(n_arrows);
                arrows.iter().map(|&a| full[a as usize].clone()).collect()
            })
            .collect();
        let (basis_rows, pivots) = rref_dense(rows);
        let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
        let free_cols = (0..local.len()).filter(|j| !pivot_set.contains(j)).collect();
        ComponentSolver {
            arrows,
            basis_rows,
            pivots,
            free_cols,
        }
    }

    /// weights of all component arrows as linear functions of the free
    /// variables: one row per arrow, in component order.
    fn expansion(&self) -> Vec<Vec<Q>> {
        let k = self.free_cols.len();
        let mut b = vec![vec![Q::zero(); k]; self.arrows.len()];
        for (fj, &col) in self.free_cols.iter().enumerate() {
            b[col][fj] = Q::one();
        }
        for (r, &p) in self.pivots.iter().enumerate() {
            for (fj, &col) in self.free_cols.iter().enumerate() {
                b[p][fj] = -self.basis_rows[r][col].clone();
            }
        }
        b
    }

    fn positivity_system(&self) -> Vec<Ineq> {
        self.expansion()
            .into_iter()
            .map(|coeffs| Ineq {
                coeffs,
                rhs: Q::one(),
            })
            .collect()
    }

    fn is_feasible(&self) -> bool {
        fourier_motzkin(self.positivity_system(), self.free_cols.len()).is_some()
    }

    /// Minimal-total positive integer weights, component-local, or the global
    /// index of an arrow to blame for a blown search budget.
    fn solve(&self) -> Result<Option<Vec<u64>>, u32> {
        let stages = match fourier_motzkin(self.positivity_system(), self.free_cols.len()) {
            Some(s) => s,
            None => return Ok(None),
        };
        let expansion = self.expansion();
        let n = self.arrows.len();
        if self.free_cols.is_empty() {
            // the zero solution is the only one and violates positivity
            return Ok(None);
        }

        let f0 = feasible_point(&stages, self.free_cols.len());
        let w0 = integerize(&expansion, &f0);
        let mut best_total: u64 = w0.iter().sum();
        let mut best = w0;

        // any optimum has every coordinate in [1, best_total - n + 1], and
        // free variables are themselves arrow coordinates
        let hi = best_total - (n as u64) + 1;
        let k = self.free_cols.len();
        let mut span: u64 = 1;
        for _ in 0..k {
            span = span.saturating_mul(hi);
        }
        if span > 1_000_000 {
            return Err(self.arrows[0]);
        }
        let mut f = vec![1u64; k];
        loop {
            if let Some(w) = evaluate_integer(&expansion, &f) {
                let total: u64 = w.iter().sum();
                if total < best_total || (total == best_total && w < best) {
                    best_total = total;
                    best = w;
                }
            }
            // odometer over [1, hi]^k
            let mut pos = 0;
            loop {
                if pos == k {
                    return Ok(Some(best));
                }
                if f[pos] < hi {
                    f[pos] += 1;
                    break;
                }
                f[pos] = 1;
                pos += 1;
            }
        }
    }
}

/// Evaluate the expansion at integer free values; None unless every weight is
/// a positive integer.
fn evaluate_integer(expansion: &[Vec<Q>], f: &[u64]) -> Option<Vec<u64>> {
    let mut out = Vec::with_capacity(expansion.len());
    for row in expansion {
        let mut v = Q::zero();
        for (c, &fv) in row.iter().zip(f) {
            v += c * &qi(fv as i64);
        }
        if !v.is_integer() || v < Q::one() {
            return None;
        }
        out.push(u64::try_from(v.to_integer()).ok()?);
    }
    Some(out)
}

/// Scale a rational weight vector to integers. The system is homogeneous, so
/// scaling preserves admissibility; positivity >= 1 is preserved upward.
fn integerize(expansion: &[Vec<Q>], f: &[Q]) -> Vec<u64> {
    let weights: Vec<Q> = expansion
        .iter()
        .map(|row| {
            let mut v = Q::zero();
            for (c, fv) in row.iter().zip(f) {
                v += c * fv;
            }
            v
        })
        .collect();
    let mut scale = BigInt::one();
    for w in &weights {
        scale = scale.lcm(w.denom());
    }
    weights
        .iter()
        .map(|w| {
            let scaled = w * Q::from_integer(scale.clone());
            u64::try_from(scaled.to_integer()).expect("weights are positive and bounded")
        })
        .collect()
}

/// Infer the minimal-total positive integer weight grading under which every
/// differential is weight-homogeneous.
pub fn infer_weights(p: &DgPresentation) -> Result<WeightAssignment, WeightError> {
    let q = p.quiver();
    let n = q.n_arrows();
    let constraints = constraints_of(p);

    let mut uf = UnionFind::new(n);
    for c in &constraints {
        for &x in c.word.arrows() {
            uf.union(x as usize, c.arrow as usize);
        }
    }
    let mut components: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for i in 0..n {
        components.entry(uf.find(i)).or_default().push(i as u32);
    }

    let mut weights = vec![0u64; n];
    for arrows in components.values() {
        let member: BTreeSet<u32> = arrows.iter().copied().collect();
        let local: Vec<Constraint> = constraints
            .iter()
            .filter(|c| member.contains(&c.arrow))
            .cloned()
            .collect();
        let solver = ComponentSolver::new(arrows.clone(), &local, n);
        match solver.solve() {
            Ok(Some(w)) => {
                for (&a, wv) in arrows.iter().zip(w) {
                    weights[a as usize] = wv;
                }
            }
            Ok(None) => {
                return Err(WeightError::Infeasible {
                    constraints: infeasible_core(p, arrows, &local, n),
                });
            }
            Err(arrow) => {
                return Err(WeightError::SearchBudget {
                    arrow: q.arrow(arrow).name.clone(),
                });
            }
        }
    }

    Ok(WeightAssignment::new(q, weights).expect("solver only returns positive weights"))
}

/// Deletion filter: drop constraints one at a time, keeping the system
/// infeasible, to reach an inclusion-minimal unsatisfiable core.
fn infeasible_core(
    p: &DgPresentation,
    arrows: &[u32],
    constraints: &[Constraint],
    n_arrows: usize,
) -> Vec<String> {
    let mut core: Vec<Constraint> = constraints.to_vec();
    let mut i = 0;
    while i < core.len() {
        let mut trial = core.clone();
        trial.remove(i);
        let solver = ComponentSolver::new(arrows.to_vec(), &trial, n_arrows);
        if solver.is_feasible() {
            i += 1;
        } else {
            core = trial;
        }
    }
    core.iter().map(|c| c.render(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completions::{cy_complete_hereditary, ginzburg3};
    use crate::dg::element_from_named;
    use crate::potential::cyclic_normalize;
    use crate::quiver::GradedQuiver;
    use crate::scalar::qi;
    use std::collections::BTreeMap;

    fn triangle_ginzburg() -> DgPresentation {
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
        ginzburg3(&q, &w).unwrap()
    }

    #[test]
    fn triangle_ginzburg_weights_are_one_two_three() {
        let w = infer_weights(&triangle_ginzburg()).unwrap();
        assert_eq!(w.weights(), &[1, 1, 1, 2, 2, 2, 3, 3, 3]);
    }

    #[test]
    fn preprojective_weights_double_on_loops() {
        let q = GradedQuiver::builder()
            .vertex("1")
            .vertex("2")
            .vertex("3")
            .arrow("b", "1", "2", 0)
            .arrow("a", "2", "3", 0)
            .build()
            .unwrap();
        let p = cy_complete_hereditary(&q, 2).unwrap();
        let w = infer_weights(&p).unwrap();
        assert_eq!(w.weights(), &[1, 1, 1, 1, 2, 2, 2]);
    }

    #[test]
    fn zero_differential_gets_all_ones() {
        let q = GradedQuiver::builder()
            .vertex("1")
            .arrow("x", "1", "1", 0)
            .arrow("y", "1", "1", -5)
            .build()
            .unwrap();
        let p = DgPresentation::with_zero_differential(&q);
        let w = infer_weights(&p).unwrap();
        assert_eq!(w.weights(), &[1, 1]);
    }

    #[test]
    fn mixed_length_differential_is_infeasible_with_both_constraints_reported() {
        let q = GradedQuiver::builder()
            .vertex("1")
            .arrow("a", "1", "1", 0)
            .arrow("b", "1", "1", 0)
            .arrow("u", "1", "1", -1)
            .build()
            .unwrap();
        let d = element_from_named(&q, &[(&["a"], qi(1)), (&["a", "b"], qi(1))]).unwrap();
        let p = DgPresentation::new(&q, BTreeMap::from([(2, d)])).unwrap();
        match infer_weights(&p).unwrap_err() {
            WeightError::Infeasible { constraints } => {
                assert_eq!(
                    constraints,
                    vec![
                        "weight(u) = weight(a)".to_string(),
                        "weight(u) = weight(a) + weight(b)".to_string(),
                    ]
                );
            }
            other => panic!("expected infeasibility, got {other:?}"),
        }
    }

    #[test]
    fn idempotent_differential_forces_weight_zero_and_fails() {
        let q = GradedQuiver::builder()
            .vertex("1")
            .arrow("x", "1", "1", -1)
            .build()
            .unwrap();
        let d = AlgebraElement::idempotent(&q, 0);
        let p = DgPresentation::new(&q, BTreeMap::from([(0, d)])).unwrap();
        match infer_weights(&p).unwrap_err() {
            WeightError::Infeasible { constraints } => {
                assert_eq!(constraints, vec!["weight(x) = 0".to_string()]);
            }
            other => panic!("expected infeasibility, got {other:?}"),
        }
    }

    use crate::algebra::AlgebraElement;

    #[test]
    fn inferred_weights_make_every_differential_homogeneous() {
        let p = triangle_ginzburg();
        let w = infer_weights(&p).unwrap();
        for (ix, _) in p.quiver().arrows() {
            let d = p.d_of_arrow(ix);
            assert!(w.is_weight_homogeneous_of(d, w.arrow_weight(ix)));
        }
    }
}
