//! Finite-dimensional associative algebras by structure constants, with
//! validated construction from a rewriting-certified presentation, and
//! multiplicative (not necessarily unital) morphisms between them.

use num::{One, Zero};
use thiserror::Error;

use crate::algebra::{AlgebraElement, PathWord};
use crate::linalg::{invert_dense, SparseVec};
use crate::presentation::Presentation;
use crate::rewriting::{complete, dimension_profile, RewriteError, TotalDim};
use crate::rng::XorShift64;
use crate::scalar::{qi, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinDimError {
    #[error("structure constants are not associative at basis triple ({i}, {j}, {k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("idempotents {0} and {1} fail orthogonal idempotency")]
    BadIdempotentPair(usize, usize),
    #[error("the idempotent sum is not a two-sided unit on basis element {0}")]
    UnitFails(usize),
    #[error("malformed input: {0}")]
    Shape(String),
    #[error("presentation has no finite-dimension certificate at length bound {max_len}")]
    NotFinite { max_len: usize },
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error("morphism is not multiplicative at basis pair ({i}, {j})")]
    NotMultiplicative { i: usize, j: usize },
    #[error("morphism matrix shape does not match the algebras")]
    MorphismShape,
}

fn sparse_add_scaled(acc: &mut Vec<(usize, Q)>, v: &SparseVec, c: &Q) {
    if c.is_zero() {
        return;
    }
    let mut out: Vec<(usize, Q)> = Vec::with_capacity(acc.len() + v.len());
    let (mut i, mut j) = (0, 0);
    while i < acc.len() || j < v.len() {
        match (acc.get(i), v.get(j)) {
            (Some(&(ra, ref ca)), Some(&(rv, ref cv))) => {
                if ra < rv {
                    out.push((ra, ca.clone()));
                    i += 1;
                } else if rv < ra {
                    out.push((rv, c * cv));
                    j += 1;
                } else {
                    let s = ca + &(c * cv);
                    if !s.is_zero() {
                        out.push((ra, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
            (Some(&(ra, ref ca)), None) => {
                out.push((ra, ca.clone()));
                i += 1;
            }
            (None, Some(&(rv, ref cv))) => {
                out.push((rv, c * cv));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    *acc = out;
}

/// An associative algebra with a fixed basis, exact rational structure
/// constants and a distinguished orthogonal decomposition of the unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDimAlgebra {
    names: Vec<String>,
    /// mult[i][j] = x_i * x_j in basis coordinates
    mult: Vec<Vec<SparseVec>>,
    idempotents: Vec<SparseVec>,
    unit: SparseVec,
}

impl FiniteDimAlgebra {
    pub fn new(
        names: Vec<String>,
        mult: Vec<Vec<SparseVec>>,
        idempotents: Vec<SparseVec>,
    ) -> Result<Self, FinDimError> {
        let dim = names.len();
        if mult.len() != dim || mult.iter().any(|row| row.len() != dim) {
            return Err(FinDimError::Shape(
                "multiplication table must be dim x dim".into(),
            ));
        }
        for row in &mult {
            for cell in row {
                if cell.iter().any(|(r, _)| *r >= dim)
                    || cell.windows(2).any(|w| w[0].0 >= w[1].0)
                    || cell.iter().any(|(_, c)| c.is_zero())
                {
                    return Err(FinDimError::Shape(
                        "structure constants must be sorted, in range, nonzero".into(),
                    ));
                }
            }
        }
        for e in &idempotents {
            if e.iter().any(|(r, _)| *r >= dim) {
                return Err(FinDimError::Shape("idempotent out of range".into()));
            }
        }
        let mut unit: SparseVec = Vec::new();
        for e in &idempotents {
            sparse_add_scaled(&mut unit, e, &Q::one());
        }
        let a = FiniteDimAlgebra {
            names,
            mult,
            idempotents,
            unit,
        };
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<(), FinDimError> {
        let dim = self.dim();
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let left = self.product(&self.mult[i][j], &basis_vec(k));
                    let right = self.product(&basis_vec(i), &self.mult[j][k]);
                    if left != right {
                        return Err(FinDimError::NotAssociative { i, j, k });
                    }
                }
            }
        }
        for (a, ea) in self.idempotents.iter().enumerate() {
            for (b, eb) in self.idempotents.iter().enumerate() {
                let p = self.product(ea, eb);
                let want = if a == b { ea.clone() } else { Vec::new() };
                if p != want {
                    return Err(FinDimError::BadIdempotentPair(a, b));
                }
            }
        }
        for k in 0..dim {
            let x = basis_vec(k);
            if self.product(&self.unit, &x) != x || self.product(&x, &self.unit) != x {
                return Err(FinDimError::UnitFails(k));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn idempotents(&self) -> &[SparseVec] {
        &self.idempotents
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult[i][j]
    }

    /// Bilinear product of coordinate vectors.
    pub fn product(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (i, ci) in x {
            for (j, cj) in y {
                sparse_add_scaled(&mut acc, &self.mult[*i][*j], &(ci * cj));
            }
        }
        acc
    }

    /// The ground field as a one-dimensional algebra.
    pub fn ground_field() -> Self {
        FiniteDimAlgebra::new(
            vec!["1".into()],
            vec![vec![vec![(0, Q::one())]]],
            vec![vec![(0, Q::one())]],
        )
        .expect("the ground field is an algebra")
    }

    /// The zero algebra; the empty idempotent family sums to its unit.
    pub fn zero_algebra() -> Self {
        FiniteDimAlgebra::new(Vec::new(), Vec::new(), Vec::new())
            .expect("the zero algebra is an algebra")
    }

    /// k^n with the coordinatewise product.
    pub fn split_field(n: usize) -> Self {
        let names = (1..=n).map(|i| format!("u{i}")).collect();
        let mult = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            vec![(i, Q::one())]
                        } else {
                            Vec::new()
                        }
                    })
                    .collect()
            })
            .collect();
        let idem = (0..n).map(|i| vec![(i, Q::one())]).collect();
        FiniteDimAlgebra::new(names, mult, idem).expect("split field is an algebra")
    }

    /// 2x2 matrices over the ground field, basis E11, E12, E21, E22.
    pub fn matrix_algebra2() -> Self {
        let names = vec!["E11".into(), "E12".into(), "E21".into(), "E22".into()];
        // E_{ab} E_{cd} = delta_{bc} E_{ad}; index (a,b) -> 2a+b
        let ix = |a: usize, b: usize| 2 * a + b;
        let mut mult = vec![vec![Vec::new(); 4]; 4];
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        if b == c {
                            mult[ix(a, b)][ix(c, d)] = vec![(ix(a, d), Q::one())];
                        }
                    }
                }
            }
        }
        let idem = vec![vec![(ix(0, 0), Q::one())], vec![(ix(1, 1), Q::one())]];
        FiniteDimAlgebra::new(names, mult, idem).expect("matrix algebra is an algebra")
    }

    /// Group algebra of Z/n, basis g^0..g^{n-1}.
    pub fn cyclic_group_algebra(n: usize) -> Self {
        assert!(n >= 1);
        let names = (0..n).map(|i| format!("g{i}")).collect();
        let mult = (0..n)
            .map(|i| (0..n).map(|j| vec![((i + j) % n, Q::one())]).collect())
            .collect();
        let idem = vec![vec![(0, Q::one())]];
        FiniteDimAlgebra::new(names, mult, idem).expect("group algebra is an algebra")
    }

    /// Quotient path algebra through a certified-finite rewriting system.
    /// Basis: irreducible words in degree-lexicographic order; idempotents:
    /// the lazy paths.
    pub fn from_presentation(p: &Presentation, max_len: usize) -> Result<Self, FinDimError> {
        Ok(Self::from_presentation_detailed(p, max_len)?.0)
    }

    /// `from_presentation` together with the basis words (in index order)
    /// and the completed rewriting system, so callers can express further
    /// path-algebra elements in the same coordinates.
    pub fn from_presentation_detailed(
        p: &Presentation,
        max_len: usize,
    ) -> Result<(Self, Vec<PathWord>, crate::rewriting::RewriteSystem), FinDimError> {
        let profile = dimension_profile(p, max_len)?;
        if !matches!(profile.total, TotalDim::Finite(_)) {
            return Err(FinDimError::NotFinite { max_len });
        }
        let sys = complete(p, max_len)?;
        let q = p.quiver();
        let mut basis: Vec<PathWord> = Vec::new();
        for mut bucket in sys.normal_words() {
            bucket.sort();
            basis.extend(bucket);
        }
        let index: std::collections::BTreeMap<&PathWord, usize> =
            basis.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let names = basis.iter().map(|w| w.render(q)).collect();
        let one = Q::one();
        let express = |x: &AlgebraElement| -> SparseVec {
            let mut v: SparseVec = x
                .terms()
                .map(|(w, c)| {
                    (
                        *index.get(w).expect("normal forms stay within the basis"),
                        c.clone(),
                    )
                })
                .collect();
            v.sort_by_key(|(r, _)| *r);
            v
        };
        let mut mult = vec![vec![Vec::new(); basis.len()]; basis.len()];
        for (i, u) in basis.iter().enumerate() {
            for (j, v) in basis.iter().enumerate() {
                let prod = AlgebraElement::monomial(q, u.clone(), one.clone())
                    .multiply(&AlgebraElement::monomial(q, v.clone(), one.clone()))
                    .expect("same quiver");
                mult[i][j] = express(&sys.reduce(&prod));
            }
        }
        let idem = basis
            .iter()
            .enumerate()
            .filter(|(_, w)| w.is_empty())
            .map(|(i, _)| vec![(i, one.clone())])
            .collect();
        let alg = FiniteDimAlgebra::new(names, mult, idem)?;
        Ok((alg, basis, sys))
    }

    /// The same algebra in the basis given by the columns of an invertible
    /// matrix. None when the matrix is singular.
    pub fn change_of_basis(&self, p: &[Vec<Q>]) -> Option<Self> {
        let dim = self.dim();
        if p.len() != dim || p.iter().any(|r| r.len() != dim) {
            return None;
        }
        let pinv = invert_dense(p)?;
        let to_new = |v: &SparseVec| -> SparseVec {
            // coords in the new basis: pinv * v
            let mut out = Vec::new();
            for (r, row) in pinv.iter().enumerate() {
                let mut s = Q::zero();
                for (i, c) in v {
                    s += &row[*i] * c;
                }
                if !s.is_zero() {
                    out.push((r, s));
                }
            }
            out
        };
        let col = |i: usize| -> SparseVec {
            p.iter()
                .enumerate()
                .filter(|(_, row)| !row[i].is_zero())
                .map(|(r, row)| (r, row[i].clone()))
                .collect()
        };
        let names = (0..dim).map(|i| format!("f{i}")).collect();
        let mult = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| to_new(&self.product(&col(i), &col(j))))
                    .collect()
            })
            .collect();
        let idem = self.idempotents.iter().map(|e| to_new(e)).collect();
        FiniteDimAlgebra::new(names, mult, idem).ok()
    }
}

fn basis_vec(i: usize) -> SparseVec {
    vec![(i, Q::one())]
}

/// A deterministic sample from a pool of small classical algebras, conjugated
/// by a random change of basis so structure constants are not all 0/1.
/// Dimension is at most 4.
pub fn random_algebra(rng: &mut XorShift64) -> FiniteDimAlgebra {
    let base = match rng.below(7) {
        0 => FiniteDimAlgebra::ground_field(),
        1 => FiniteDimAlgebra::split_field(2),
        2 => FiniteDimAlgebra::split_field(3),
        3 => FiniteDimAlgebra::matrix_algebra2(),
        4 => FiniteDimAlgebra::cyclic_group_algebra(2),
        5 => FiniteDimAlgebra::cyclic_group_algebra(3),
        _ => {
            // k[x]/(x^2) by explicit constants
            let names = vec!["1".into(), "x".into()];
            let mult = vec![
                vec![vec![(0, qi(1))], vec![(1, qi(1))]],
                vec![vec![(1, qi(1))], Vec::new()],
            ];
            FiniteDimAlgebra::new(names, mult, vec![vec![(0, qi(1))]])
                .expect("dual numbers form an algebra")
        }
    };
    let dim = base.dim();
    for _ in 0..100 {
        let p: Vec<Vec<Q>> = (0..dim)
            .map(|_| (0..dim).map(|_| qi(rng.below(5) as i64 - 2)).collect())
            .collect();
        if let Some(a) = base.change_of_basis(&p) {
            return a;
        }
    }
    base
}

/// A multiplicative linear map between algebras; it need not send unit to
/// unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraMorphism {
    source: FiniteDimAlgebra,
    target: FiniteDimAlgebra,
    /// columns: image of each source basis vector in target coordinates
    matrix: Vec<SparseVec>,
}

impl AlgebraMorphism {
    pub fn new(
        source: FiniteDimAlgebra,
        target: FiniteDimAlgebra,
        matrix: Vec<SparseVec>,
    ) -> Result<Self, FinDimError> {
        if matrix.len() != source.dim()
            || matrix
                .iter()
                .any(|col| col.iter().any(|(r, _)| *r >= target.dim()))
        {
            return Err(FinDimError::MorphismShape);
        }
        let f = AlgebraMorphism {
            source,
            target,
            matrix,
        };
        for i in 0..f.source.dim() {
            for j in 0..f.source.dim() {
                let of_product = f.apply(f.source.basis_product(i, j));
                let product_of = f.target.product(&f.matrix[i], &f.matrix[j]);
                if of_product != product_of {
                    return Err(FinDimError::NotMultiplicative { i, j });
                }
            }
        }
        Ok(f)
    }

    pub fn identity(a: &FiniteDimAlgebra) -> Self {
        AlgebraMorphism {
            source: a.clone(),
            target: a.clone(),
            matrix: (0..a.dim()).map(basis_vec).collect(),
        }
    }

    /// The unique map out of the zero algebra.
    pub fn from_zero(target: &FiniteDimAlgebra) -> Self {
        AlgebraMorphism {
            source: FiniteDimAlgebra::zero_algebra(),
            target: target.clone(),
            matrix: Vec::new(),
        }
    }

    pub fn source(&self) -> &FiniteDimAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FiniteDimAlgebra {
        &self.target
    }

    pub fn matrix(&self) -> &[SparseVec] {
        &self.matrix
    }

    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        let mut acc = Vec::new();
        for (i, c) in x {
            sparse_add_scaled(&mut acc, &self.matrix[*i], c);
        }
        acc
    }
}
