//! Cross-module invariants: rewriting confluence on random words, and
//! agreement between the cohomology engine's degree-0 row and the
//! rewriting module's per-length counts on the same quotient.

use std::sync::Arc;

use proptest::prelude::*;

use dgquiver::{
    cohomology, complete, cy_complete_hereditary, dimension_profile, ginzburg3, h0_presentation,
    qi, qr, relative_ginzburg3, relative_preprojective2, with_inferred_weights, AlgebraElement,
    EngineOptions, GradedQuiver, IceQuiverWithPotential, PathWord, Presentation, RewriteSystem,
};

fn triangle_with_potential() -> IceQuiverWithPotential {
    let q = GradedQuiver::builder()
        .vertex("1")
        .vertex("2")
        .vertex("3")
        .arrow("a", "3", "2", 0)
        .arrow("b", "1", "3", 0)
        .arrow("c", "2", "1", 0)
        .build()
        .unwrap();
    let w = dgquiver::cyclic_normalize(&AlgebraElement::monomial(
        &q,
        PathWord::from_arrows(&q, vec![0, 1, 2]).unwrap(),
        qi(1),
    ))
    .unwrap();
    IceQuiverWithPotential::new(&q, w).unwrap()
}

fn ice_triangle_with_potential() -> IceQuiverWithPotential {
    let q = GradedQuiver::builder()
        .frozen_vertex("1")
        .vertex("2")
        .frozen_vertex("3")
        .arrow("a", "3", "2", 0)
        .frozen_arrow("b", "1", "3", 0)
        .arrow("c", "2", "1", 0)
        .build()
        .unwrap();
    let w = dgquiver::cyclic_normalize(&AlgebraElement::monomial(
        &q,
        PathWord::from_arrows(&q, vec![0, 1, 2]).unwrap(),
        qi(1),
    ))
    .unwrap();
    IceQuiverWithPotential::new(&q, w).unwrap()
}

fn a3_line() -> Arc<GradedQuiver> {
    GradedQuiver::builder()
        .vertex("1")
        .vertex("2")
        .vertex("3")
        .arrow("b", "1", "2", 0)
        .arrow("a", "2", "3", 0)
        .build()
        .unwrap()
}

fn a3_frozen3() -> Arc<GradedQuiver> {
    GradedQuiver::builder()
        .vertex("1")
        .vertex("2")
        .frozen_vertex("3")
        .arrow("b", "1", "2", 0)
        .arrow("a", "2", "3", 0)
        .build()
        .unwrap()
}

/// Stable quotients the confluence properties run over.
fn completed_systems() -> Vec<(Presentation, RewriteSystem)> {
    let mut out = Vec::new();
    let iqp = triangle_with_potential();
    let jac = h0_presentation(&ginzburg3(iqp.quiver(), iqp.potential()).unwrap()).unwrap();
    out.push((jac.clone(), complete(&jac, 8).unwrap()));
    let pre = h0_presentation(&relative_preprojective2(&a3_line()).unwrap()).unwrap();
    out.push((pre.clone(), complete(&pre, 8).unwrap()));
    let aus = h0_presentation(&relative_preprojective2(&a3_frozen3()).unwrap()).unwrap();
    out.push((aus.clone(), complete(&aus, 8).unwrap()));
    out
}

/// Deterministic composable word from raw picks: each pick chooses among
/// the arrows composable on the left of the word built so far.
fn word_from_picks(q: &GradedQuiver, picks: &[u8]) -> Option<PathWord> {
    let n = q.n_arrows() as u64;
    if n == 0 || picks.is_empty() {
        return None;
    }
    let mut seq = vec![(picks[0] as u64 % n) as u32];
    for &p in &picks[1..] {
        let need = q.arrow(seq[0]).source;
        let candidates: Vec<u32> = (0..q.n_arrows() as u32)
            .filter(|&a| q.arrow(a).target == need)
            .collect();
        if candidates.is_empty() {
            break;
        }
        seq.insert(0, candidates[p as usize % candidates.len()]);
    }
    PathWord::from_arrows(q, seq).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// reduce is idempotent on random linear combinations of paths.
    #[test]
    fn reduction_is_idempotent(
        sysix in 0usize..3,
        picks in prop::collection::vec(any::<u8>(), 1..9),
        num in 1i64..6,
        den in 1i64..4,
    ) {
        let systems = completed_systems();
        let (p, sys) = &systems[sysix];
        let q = p.quiver();
        if let Some(w) = word_from_picks(q, &picks) {
            let x = AlgebraElement::monomial(q, w, qr(num, den));
            let once = sys.reduce(&x);
            prop_assert_eq!(sys.reduce(&once), once.clone());
        }
    }

    /// Confluence through splits: reducing the two halves of a word first
    /// never changes the normal form of the whole word.
    #[test]
    fn reduction_commutes_with_splitting(
        sysix in 0usize..3,
        picks in prop::collection::vec(any::<u8>(), 2..9),
    ) {
        let systems = completed_systems();
        let (p, sys) = &systems[sysix];
        let q = p.quiver();
        if let Some(w) = word_from_picks(q, &picks) {
            let arrows = w.arrows().to_vec();
            let x = AlgebraElement::monomial(q, w, qi(1));
            let whole = sys.reduce(&x);
            for k in 1..arrows.len() {
                let left = PathWord::from_arrows(q, arrows[..k].to_vec()).unwrap();
                let right = PathWord::from_arrows(q, arrows[k..].to_vec()).unwrap();
                let halves = sys
                    .reduce(&AlgebraElement::monomial(q, left, qi(1)))
                    .multiply(&sys.reduce(&AlgebraElement::monomial(q, right, qi(1))))
                    .unwrap();
                prop_assert_eq!(sys.reduce(&halves), whole.clone());
            }
        }
    }
}

/// The engine's degree-0 row at weight w equals the rewriting count of
/// length-w normal words of the degree-0 quotient, whenever the degree-0
/// arrows all have weight one.
#[test]
fn engine_h0_row_matches_rewriting_counts_per_weight() {
    let w_max = 6u64;
    let opts = EngineOptions::default();
    let models = vec![
        ginzburg3(
            triangle_with_potential().quiver(),
            triangle_with_potential().potential(),
        )
        .unwrap(),
        relative_ginzburg3(&ice_triangle_with_potential()).unwrap(),
        relative_preprojective2(&a3_frozen3()).unwrap(),
        cy_complete_hereditary(&a3_line(), 2).unwrap(),
    ];
    for dg in models {
        let dg = with_inferred_weights(dg).unwrap();
        let weights = dg.weights().unwrap();
        let q = dg.quiver();
        for ix in 0..q.n_arrows() as u32 {
            if q.arrow(ix).degree == 0 {
                assert_eq!(weights.arrow_weight(ix), 1, "degree-0 arrows weigh one here");
            }
        }
        let table = cohomology(&dg, w_max, 0, &opts).unwrap();
        let h0 = h0_presentation(&dg).unwrap();
        let profile = dimension_profile(&h0, w_max as usize).unwrap();
        assert!(profile.exact);
        for w in 0..=w_max {
            assert_eq!(
                table.dim(w, 0).unwrap(),
                profile.per_length[w as usize],
                "weight {w} disagrees between the engine and rewriting"
            );
        }
    }
}
