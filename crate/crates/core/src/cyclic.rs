//! Hochschild, cyclic, and negative cyclic homology of finite-dimensional
//! algebras, plus relative groups for multiplicative (not necessarily
//! unital) morphisms via the cone of mixed complexes.
//!
//! Chains are C_p = A^{(x(p+1))} with the tuple basis enumerated most
//! significant slot first. The operators, all exact:
//!
//!   b  = sum_{r<p} (-1)^r (.. a_r a_{r+1} ..) + (-1)^p (a_p a_0 (x) ..)
//!   b' = the same sum without the wraparound face
//!   t(a_0 (x) .. (x) a_p) = (-1)^p a_p (x) a_0 (x) .. (x) a_{p-1}
//!   N  = 1 + t + .. + t^p
//!
//! These satisfy b(1-t) = (1-t)b' and b'N = Nb on the nose, which is what
//! the mixed complex (first two bicomplex columns) and its totalizations
//! rely on. Homological indexing throughout: HH_n, HC_n, HN_n with n >= 0.

use num::{One, Zero};
use thiserror::Error;

use crate::findim::{AlgebraMorphism, FiniteDimAlgebra};
use crate::linalg::{rank_q, FieldSpec, LinalgError, SparseMat, SparseVec};
use crate::scalar::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclicError {
    #[error("tensor power A^(x{power}) exceeds the resource cap {cap}")]
    Resource { power: usize, cap: usize },
    #[error("column truncation must be at least 2, got {0}")]
    BadTruncation(usize),
    #[error(transparent)]
    Field(#[from] LinalgError),
}

pub const DEFAULT_TENSOR_CAP: usize = 2_000_000;

fn tensor_dim(dim: usize, power: usize, cap: usize) -> Result<usize, CyclicError> {
    let mut acc: usize = 1;
    for _ in 0..power {
        acc = acc
            .checked_mul(dim)
            .filter(|s| *s <= cap)
            .ok_or(CyclicError::Resource { power, cap })?;
    }
    Ok(acc)
}

/// Tuple digits of a tensor-basis index, most significant slot first.
fn decode(mut c: usize, dim: usize, slots: usize) -> Vec<usize> {
    let mut digits = vec![0usize; slots];
    for k in (0..slots).rev() {
        digits[k] = c % dim;
        c /= dim;
    }
    digits
}

fn encode(digits: &[usize], dim: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * dim + d)
}

fn sign(r: usize) -> Q {
    if r % 2 == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Per-level bar-complex operators of one algebra, built once and shared.
struct BarData {
    /// cdims[p] = dim C_p = (dim A)^(p+1)
    cdims: Vec<usize>,
    /// b[p]: C_p -> C_{p-1}; b[0] is the zero map to the zero space
    b: Vec<SparseMat>,
    bp: Vec<SparseMat>,
    /// 1 - t at level p
    omt: Vec<SparseMat>,
    /// N = 1 + t + .. + t^p at level p
    n: Vec<SparseMat>,
}

fn bar_data(a: &FiniteDimAlgebra, p_max: usize, cap: usize) -> Result<BarData, CyclicError> {
    let dim = a.dim();
    let mut cdims = Vec::with_capacity(p_max + 1);
    for p in 0..=p_max {
        cdims.push(tensor_dim(dim, p + 1, cap)?);
    }
    let mut b = vec![SparseMat::zero(0, cdims[0])];
    let mut bp = vec![SparseMat::zero(0, cdims[0])];
    let mut omt = Vec::with_capacity(p_max + 1);
    let mut n = Vec::with_capacity(p_max + 1);
    for p in 0..=p_max {
        let t = rotation_matrix(a, p, cdims[p]);
        omt.push(SparseMat::identity(cdims[p]).sub(&t));
        let mut acc = SparseMat::identity(cdims[p]);
        let mut cur = SparseMat::identity(cdims[p]);
        for _ in 1..=p {
            cur = t.compose(&cur);
            acc = acc.add(&cur);
        }
        n.push(acc);
        if p >= 1 {
            let (bm, bpm) = face_matrices(a, p, cdims[p], cdims[p - 1]);
            b.push(bm);
            bp.push(bpm);
        }
    }
    Ok(BarData {
        cdims,
        b,
        bp,
        omt,
        n,
    })
}

fn rotation_matrix(a: &FiniteDimAlgebra, p: usize, cols: usize) -> SparseMat {
    let dim = a.dim();
    let s = sign(p);
    let mut out = Vec::with_capacity(cols);
    for c in 0..cols {
        let tup = decode(c, dim, p + 1);
        let mut rot = Vec::with_capacity(p + 1);
        rot.push(tup[p]);
        rot.extend_from_slice(&tup[..p]);
        out.push(vec![(encode(&rot, dim), s.clone())]);
    }
    SparseMat::new(cols, out)
}

fn face_matrices(
    a: &FiniteDimAlgebra,
    p: usize,
    cols: usize,
    rows: usize,
) -> (SparseMat, SparseMat) {
    let dim = a.dim();
    let mut b_cols = Vec::with_capacity(cols);
    let mut bp_cols = Vec::with_capacity(cols);
    for c in 0..cols {
        let tup = decode(c, dim, p + 1);
        let mut acc_b: std::collections::BTreeMap<usize, Q> = Default::default();
        let mut acc_bp: std::collections::BTreeMap<usize, Q> = Default::default();
        for r in 0..p {
            let s = sign(r);
            for (m, coef) in a.basis_product(tup[r], tup[r + 1]) {
                let mut digits = Vec::with_capacity(p);
                digits.extend_from_slice(&tup[..r]);
                digits.push(*m);
                digits.extend_from_slice(&tup[r + 2..]);
                let row = encode(&digits, dim);
                let v = &s * coef;
                *acc_b.entry(row).or_insert_with(Q::zero) += &v;
                *acc_bp.entry(row).or_insert_with(Q::zero) += &v;
            }
        }
        let s = sign(p);
        for (m, coef) in a.basis_product(tup[p], tup[0]) {
            let mut digits = Vec::with_capacity(p);
            digits.push(*m);
            digits.extend_from_slice(&tup[1..p]);
            let row = encode(&digits, dim);
            *acc_b.entry(row).or_insert_with(Q::zero) += &s * coef;
        }
        b_cols.push(acc_b.into_iter().filter(|(_, q)| !q.is_zero()).collect());
        bp_cols.push(acc_bp.into_iter().filter(|(_, q)| !q.is_zero()).collect());
    }
    (SparseMat::new(rows, b_cols), SparseMat::new(rows, bp_cols))
}

/// The pair (b, b') mapping A^(x(p+1))-chains one level down.
pub fn bar_differential(
    a: &FiniteDimAlgebra,
    p: usize,
    cap: usize,
) -> Result<(SparseMat, SparseMat), CyclicError> {
    assert!(p >= 1, "bar differentials start in degree one");
    let cols = tensor_dim(a.dim(), p + 1, cap)?;
    let rows = tensor_dim(a.dim(), p, cap)?;
    Ok(face_matrices(a, p, cols, rows))
}

/// The signed cyclic rotation t on A^(x(p+1)).
pub fn rotation(a: &FiniteDimAlgebra, p: usize, cap: usize) -> Result<SparseMat, CyclicError> {
    let cols = tensor_dim(a.dim(), p + 1, cap)?;
    Ok(rotation_matrix(a, p, cols))
}

/// The norm N = 1 + t + .. + t^p on A^(x(p+1)).
pub fn norm_operator(a: &FiniteDimAlgebra, p: usize, cap: usize) -> Result<SparseMat, CyclicError> {
    let t = rotation(a, p, cap)?;
    let mut acc = SparseMat::identity(t.n_cols());
    let mut cur = SparseMat::identity(t.n_cols());
    for _ in 1..=p {
        cur = t.compose(&cur);
        acc = acc.add(&cur);
    }
    Ok(acc)
}

fn homology_from(
    dims: &[usize],
    d: &[SparseMat],
    n_max: usize,
    field: FieldSpec,
) -> Result<Vec<usize>, CyclicError> {
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let cycles = dims[n] - d[n].rank(field)?;
        let boundaries = d[n + 1].rank(field)?;
        out.push(
            cycles
                .checked_sub(boundaries)
                .expect("square-zero differentials keep images inside kernels"),
        );
    }
    Ok(out)
}

/// Dimensions of HH_0..HH_{n_max} by rank-nullity on the Hochschild chain
/// complex (C, b).
pub fn hochschild(
    a: &FiniteDimAlgebra,
    n_max: usize,
    field: FieldSpec,
    cap: usize,
) -> Result<Vec<usize>, CyclicError> {
    let bar = bar_data(a, n_max + 1, cap)?;
    homology_from(&bar.cdims, &bar.b, n_max, field)
}

/// dim A/[A,A]; agrees with HH_0 by definition of b in degree one.
pub fn commutator_quotient(a: &FiniteDimAlgebra) -> usize {
    let dim = a.dim();
    let mut cols: Vec<SparseVec> = Vec::new();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let mut acc: std::collections::BTreeMap<usize, Q> = Default::default();
            for (r, c) in a.basis_product(i, j) {
                *acc.entry(*r).or_insert_with(Q::zero) += c;
            }
            for (r, c) in a.basis_product(j, i) {
                *acc.entry(*r).or_insert_with(Q::zero) -= c;
            }
            let col: SparseVec = acc.into_iter().filter(|(_, q)| !q.is_zero()).collect();
            if !col.is_empty() {
                cols.push(col);
            }
        }
    }
    dim - rank_q(cols.iter())
}

/// Total complex of the first two Connes-Quillen bicomplex columns:
/// M_0 = C_0 and M_n = C_n (+) C_{n-1}, with
/// d(x, y) = (b x + (1-t) y, -b' y) and d'(x, y) = (0, N x).
#[derive(Debug, Clone)]
pub struct MixedComplexData {
    dims: Vec<usize>,
    /// d[n]: M_n -> M_{n-1}; d[0] is the zero map to the zero space
    d: Vec<SparseMat>,
    /// dprime[n]: M_n -> M_{n+1}, for n = 0..trunc-1
    dprime: Vec<SparseMat>,
}

impl MixedComplexData {
    pub fn trunc(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn d(&self, n: usize) -> &SparseMat {
        &self.d[n]
    }

    pub fn dprime(&self, n: usize) -> &SparseMat {
        &self.dprime[n]
    }

    /// d^2 = 0, d'^2 = 0 and dd' + d'd = 0 wherever both composites fit in
    /// the truncated range.
    pub fn verify_identities(&self) -> bool {
        let trunc = self.trunc();
        for n in 2..=trunc {
            if !self.d[n - 1].compose(&self.d[n]).is_zero_matrix() {
                return false;
            }
        }
        for n in 0..trunc.saturating_sub(1) {
            if !self.dprime[n + 1].compose(&self.dprime[n]).is_zero_matrix() {
                return false;
            }
        }
        for n in 0..trunc {
            let down_up = self.d[n + 1].compose(&self.dprime[n]);
            let total = if n >= 1 {
                down_up.add(&self.dprime[n - 1].compose(&self.d[n]))
            } else {
                down_up
            };
            if !total.is_zero_matrix() {
                return false;
            }
        }
        true
    }

    /// Homology with respect to d alone; quasi-isomorphic to the Hochschild
    /// complex for unital algebras.
    pub fn homology_dims(
        &self,
        n_max: usize,
        field: FieldSpec,
    ) -> Result<Vec<usize>, CyclicError> {
        assert!(n_max + 1 <= self.trunc(), "mixed complex built too short");
        homology_from(&self.dims, &self.d, n_max, field)
    }
}

pub fn mixed_complex(
    a: &FiniteDimAlgebra,
    trunc: usize,
    cap: usize,
) -> Result<MixedComplexData, CyclicError> {
    assert!(trunc >= 1, "truncation bound must be at least one");
    let bar = bar_data(a, trunc, cap)?;
    Ok(mixed_from_bar(&bar, trunc))
}

fn mixed_from_bar(bar: &BarData, trunc: usize) -> MixedComplexData {
    let c = &bar.cdims;
    let mut dims = Vec::with_capacity(trunc + 1);
    dims.push(c[0]);
    for n in 1..=trunc {
        dims.push(c[n] + c[n - 1]);
    }
    let mut d = vec![SparseMat::zero(0, dims[0])];
    d.push(SparseMat::from_blocks(
        &[c[0]],
        &[c[1], c[0]],
        &[(0, 0, &bar.b[1]), (0, 1, &bar.omt[0])],
    ));
    for n in 2..=trunc {
        let minus_bp = bar.bp[n - 1].scale(&-Q::one());
        d.push(SparseMat::from_blocks(
            &[c[n - 1], c[n - 2]],
            &[c[n], c[n - 1]],
            &[
                (0, 0, &bar.b[n]),
                (0, 1, &bar.omt[n - 1]),
                (1, 1, &minus_bp),
            ],
        ));
    }
    let mut dprime = Vec::with_capacity(trunc);
    for n in 0..trunc {
        let col_dims: Vec<usize> = if n == 0 {
            vec![c[0]]
        } else {
            vec![c[n], c[n - 1]]
        };
        dprime.push(SparseMat::from_blocks(
            &[c[n + 1], c[n]],
            &col_dims,
            &[(1, 0, &bar.n[n])],
        ));
    }
    MixedComplexData { dims, d, dprime }
}

/// HC chain space in total degree tdeg for a mixed complex: the direct sum
/// of M_{tdeg - 2j}, j >= 0 (the column pairing of the full bicomplex).
fn hc_space(m: &MixedComplexData, tdeg: i64) -> Vec<usize> {
    let mut blocks = Vec::new();
    let mut deg = tdeg;
    while deg >= 0 {
        blocks.push(m.dims[deg as usize]);
        deg -= 2;
    }
    blocks
}

fn hc_differential(m: &MixedComplexData, tdeg: i64) -> SparseMat {
    let col_blocks = hc_space(m, tdeg);
    let row_blocks = hc_space(m, tdeg - 1);
    let mut blocks: Vec<(usize, usize, &SparseMat)> = Vec::new();
    for j in 0..col_blocks.len() {
        let deg = (tdeg - 2 * j as i64) as usize;
        if deg >= 1 {
            blocks.push((j, j, &m.d[deg]));
        }
        if j + 1 < col_blocks.len() {
            // d' m_{j+1} lands in row block j
            blocks.push((j, j + 1, &m.dprime[deg - 2]));
        }
    }
    SparseMat::from_blocks(&row_blocks, &col_blocks, &blocks)
}

/// Cyclic homology dimensions computed from the u-adic coinvariants total
/// complex of a mixed complex. Used for relative groups and as the
/// cross-check route for absolute ones.
pub fn hc_dims_from_mixed(
    m: &MixedComplexData,
    n_max: usize,
    field: FieldSpec,
) -> Result<Vec<usize>, CyclicError> {
    assert!(n_max + 1 <= m.trunc(), "mixed complex built too short");
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let total: usize = hc_space(m, n as i64).iter().sum();
        let cycles = total - hc_differential(m, n as i64).rank(field)?;
        let boundaries = hc_differential(m, n as i64 + 1).rank(field)?;
        out.push(
            cycles
                .checked_sub(boundaries)
                .expect("square-zero differentials keep images inside kernels"),
        );
    }
    Ok(out)
}

/// Cyclic homology via the first-quadrant Connes-Quillen bicomplex with
/// columns 0..n_max+1 (b on even columns, -b' on odd, 1-t and N across).
pub fn cyclic(
    a: &FiniteDimAlgebra,
    n_max: usize,
    field: FieldSpec,
    cap: usize,
) -> Result<Vec<usize>, CyclicError> {
    let bar = bar_data(a, n_max + 1, cap)?;
    let total_dim = |tdeg: usize| -> usize { (0..=tdeg).map(|p| bar.cdims[tdeg - p]).sum() };
    let differential = |tdeg: usize| -> SparseMat {
        let col_blocks: Vec<usize> = (0..=tdeg).map(|p| bar.cdims[tdeg - p]).collect();
        let row_blocks: Vec<usize> = (0..tdeg).map(|p| bar.cdims[tdeg - 1 - p]).collect();
        let mut owned: Vec<(usize, usize, SparseMat)> = Vec::new();
        for p in 0..=tdeg {
            let q = tdeg - p;
            if q >= 1 {
                let vertical = if p % 2 == 0 {
                    bar.b[q].clone()
                } else {
                    bar.bp[q].scale(&-Q::one())
                };
                owned.push((p, p, vertical));
            }
            if p >= 1 {
                let horizontal = if p % 2 == 1 {
                    bar.omt[q].clone()
                } else {
                    bar.n[q].clone()
                };
                owned.push((p - 1, p, horizontal));
            }
        }
        let refs: Vec<(usize, usize, &SparseMat)> =
            owned.iter().map(|(i, j, m)| (*i, *j, m)).collect();
        SparseMat::from_blocks(&row_blocks, &col_blocks, &refs)
    };
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let cycles = total_dim(n) - differential(n).rank(field)?;
        let boundaries = differential(n + 1).rank(field)?;
        out.push(
            cycles
                .checked_sub(boundaries)
                .expect("square-zero differentials keep images inside kernels"),
        );
    }
    Ok(out)
}

/// HN chain space in total degree tdeg with columns j = 0..cols-1:
/// the direct sum of M_{tdeg + 2j} over degrees within range.
fn hn_space(m: &MixedComplexData, tdeg: i64, cols: usize) -> Vec<(usize, usize)> {
    // (j, dim)
    (0..cols)
        .filter_map(|j| {
            let deg = tdeg + 2 * j as i64;
            if deg < 0 {
                None
            } else {
                Some((j, m.dims[deg as usize]))
            }
        })
        .collect()
}

fn hn_differential(m: &MixedComplexData, tdeg: i64, cols: usize) -> SparseMat {
    let col_blocks = hn_space(m, tdeg, cols);
    let row_blocks = hn_space(m, tdeg - 1, cols);
    let col_pos = |j: usize| col_blocks.iter().position(|(jj, _)| *jj == j);
    let row_pos = |j: usize| row_blocks.iter().position(|(jj, _)| *jj == j);
    let mut blocks: Vec<(usize, usize, &SparseMat)> = Vec::new();
    for &(j, _) in &col_blocks {
        let deg = (tdeg + 2 * j as i64) as usize;
        // d m_j lands in row block j
        if deg >= 1 {
            if let (Some(r), Some(c)) = (row_pos(j), col_pos(j)) {
                blocks.push((r, c, &m.d[deg]));
            }
        }
        // d' m_j lands in row block j+1 (u-adic shift); dropped beyond cols
        if let (Some(r), Some(c)) = (row_pos(j + 1), col_pos(j)) {
            blocks.push((r, c, &m.dprime[deg]));
        }
    }
    let row_dims: Vec<usize> = row_blocks.iter().map(|(_, d)| *d).collect();
    let col_dims: Vec<usize> = col_blocks.iter().map(|(_, d)| *d).collect();
    SparseMat::from_blocks(&row_dims, &col_dims, &blocks)
}

fn hn_dims(
    m: &MixedComplexData,
    n_max: usize,
    cols: usize,
    field: FieldSpec,
) -> Result<Vec<usize>, CyclicError> {
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let total: usize = hn_space(m, n as i64, cols).iter().map(|(_, d)| d).sum();
        let cycles = total - hn_differential(m, n as i64, cols).rank(field)?;
        let boundaries = hn_differential(m, n as i64 + 1, cols).rank(field)?;
        out.push(
            cycles
                .checked_sub(boundaries)
                .expect("square-zero differentials keep images inside kernels"),
        );
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnReport {
    pub dims: Vec<usize>,
    /// dims agree between col_trunc and col_trunc + 1 columns
    pub stabilized: bool,
    pub col_trunc: usize,
}

/// Negative cyclic homology from the truncated product total complex
/// (columns j = 0..col_trunc-1, column j carrying M_{n+2j}), with a
/// two-point stabilization check at col_trunc + 1.
///
/// The flag certifies only that the reported dimensions agree between the
/// two truncations. Quotienting the u-power series can leave classes of
/// constant dimension that are not in the inverse limit, so unstabilized
/// and stabilized values alike are labeled truncation-dependent reports.
pub fn negative_cyclic(
    a: &FiniteDimAlgebra,
    n_max: usize,
    col_trunc: usize,
    field: FieldSpec,
    cap: usize,
) -> Result<HnReport, CyclicError> {
    if col_trunc < 2 {
        return Err(CyclicError::BadTruncation(col_trunc));
    }
    let trunc = n_max + 1 + 2 * col_trunc;
    let m = mixed_complex(a, trunc, cap)?;
    let dims = hn_dims(&m, n_max, col_trunc, field)?;
    let wider = hn_dims(&m, n_max, col_trunc + 1, field)?;
    Ok(HnReport {
        stabilized: dims == wider,
        dims,
        col_trunc,
    })
}

/// The morphism of mixed complexes induced by f, degreewise
/// diag(f^(x(n+1)), f^(xn)).
fn mixed_morphism_level(f: &AlgebraMorphism, n: usize, cap: usize) -> Result<SparseMat, CyclicError> {
    let fk = |p: usize| -> Result<SparseMat, CyclicError> {
        let da = f.target().dim();
        let db = f.source().dim();
        let cols = tensor_dim(db, p + 1, cap)?;
        let rows = tensor_dim(da, p + 1, cap)?;
        let mut out = Vec::with_capacity(cols);
        for c in 0..cols {
            let tup = decode(c, db, p + 1);
            let mut acc: SparseVec = vec![(0, Q::one())];
            for &j in &tup {
                let mut next: SparseVec = Vec::new();
                for (r, co) in &acc {
                    for (rk, ck) in &f.matrix()[j] {
                        next.push((r * da + rk, co * ck));
                    }
                }
                acc = next;
            }
            out.push(acc);
        }
        Ok(SparseMat::new(rows, out))
    };
    if n == 0 {
        fk(0)
    } else {
        let top = fk(n)?;
        let bottom = fk(n - 1)?;
        Ok(SparseMat::from_blocks(
            &[top.n_rows(), bottom.n_rows()],
            &[top.n_cols(), bottom.n_cols()],
            &[(0, 0, &top), (1, 1, &bottom)],
        ))
    }
}

/// Cone of the induced map MB -> MA on mixed complexes:
/// Cone_n = MB_{n-1} (+) MA_n, d(x, y) = (-d_B x, d_A y + f x),
/// d'(x, y) = (-d'_B x, d'_A y).
pub fn cone_mixed(
    f: &AlgebraMorphism,
    trunc: usize,
    cap: usize,
) -> Result<MixedComplexData, CyclicError> {
    let ma = mixed_complex(f.target(), trunc, cap)?;
    let mb = mixed_complex(f.source(), trunc, cap)?;
    cone_from_parts(f, &ma, &mb, trunc, cap)
}

fn cone_from_parts(
    f: &AlgebraMorphism,
    ma: &MixedComplexData,
    mb: &MixedComplexData,
    trunc: usize,
    cap: usize,
) -> Result<MixedComplexData, CyclicError> {
    let bdim = |n: i64| -> usize {
        if n < 0 {
            0
        } else {
            mb.dims[n as usize]
        }
    };
    let mut dims = Vec::with_capacity(trunc + 1);
    for n in 0..=trunc {
        dims.push(bdim(n as i64 - 1) + ma.dims[n]);
    }
    let fm: Vec<SparseMat> = (0..trunc)
        .map(|k| mixed_morphism_level(f, k, cap))
        .collect::<Result<_, _>>()?;
    let mut d = vec![SparseMat::zero(0, dims[0])];
    for n in 1..=trunc {
        let row_dims = [bdim(n as i64 - 2), ma.dims[n - 1]];
        let col_dims = [bdim(n as i64 - 1), ma.dims[n]];
        let minus_db = mb.d[n - 1].scale(&-Q::one());
        d.push(SparseMat::from_blocks(
            &row_dims,
            &col_dims,
            &[(0, 0, &minus_db), (1, 0, &fm[n - 1]), (1, 1, &ma.d[n])],
        ));
    }
    let mut dprime = Vec::with_capacity(trunc);
    for n in 0..trunc {
        let row_dims = [bdim(n as i64), ma.dims[n + 1]];
        let col_dims = [bdim(n as i64 - 1), ma.dims[n]];
        let mut blocks: Vec<(usize, usize, &SparseMat)> = vec![(1, 1, &ma.dprime[n])];
        let minus_dpb;
        if n >= 1 {
            minus_dpb = mb.dprime[n - 1].scale(&-Q::one());
            blocks.push((0, 0, &minus_dpb));
        }
        dprime.push(SparseMat::from_blocks(&row_dims, &col_dims, &blocks));
    }
    Ok(MixedComplexData { dims, d, dprime })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeReport {
    pub hh: Vec<usize>,
    pub hc: Vec<usize>,
    /// the window ... HH_n(B) -> HH_n(A) -> HH_n(A,B) -> HH_{n-1}(B) ...
    /// admits nonnegative connecting ranks (dimensional exactness)
    pub hh_les_consistent: bool,
    pub hc_les_consistent: bool,
}

/// Nonnegative connecting ranks exist for the long exact sequence
/// ... -> B_n -> A_n -> R_n -> B_{n-1} -> ... given the three dimension
/// rows: t_0 = 0 and t_{n+1} = (b_n - a_n + r_n) - t_n must stay >= 0.
fn les_consistent(b: &[usize], a: &[usize], r: &[usize]) -> bool {
    let mut t: i64 = 0;
    for n in 0..r.len() {
        let s = b[n] as i64 - a[n] as i64 + r[n] as i64;
        t = s - t;
        if t < 0 {
            return false;
        }
    }
    true
}

pub fn relative_cyclic(
    f: &AlgebraMorphism,
    n_max: usize,
    field: FieldSpec,
    cap: usize,
) -> Result<RelativeReport, CyclicError> {
    let trunc = n_max + 2;
    let ma = mixed_complex(f.target(), trunc, cap)?;
    let mb = mixed_complex(f.source(), trunc, cap)?;
    let cone = cone_from_parts(f, &ma, &mb, trunc, cap)?;
    let hh = cone.homology_dims(n_max, field)?;
    let hc = hc_dims_from_mixed(&cone, n_max, field)?;
    let hh_a = ma.homology_dims(n_max, field)?;
    let hh_b = mb.homology_dims(n_max, field)?;
    let hc_a = hc_dims_from_mixed(&ma, n_max, field)?;
    let hc_b = hc_dims_from_mixed(&mb, n_max, field)?;
    Ok(RelativeReport {
        hh_les_consistent: les_consistent(&hh_b, &hh_a, &hh),
        hc_les_consistent: les_consistent(&hc_b, &hc_a, &hc),
        hh,
        hc,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalRanks {
    pub n: usize,
    pub hn_to_hh: usize,
    pub hh_to_hc: usize,
    pub composite: usize,
}

/// Ranks of the canonical maps HN_n -> HH_n -> HC_n induced by projecting a
/// u-series to its constant term and including constants into coinvariants.
/// Exact over the rationals.
pub fn canonical_map_ranks(
    a: &FiniteDimAlgebra,
    n_max: usize,
    col_trunc: usize,
    cap: usize,
) -> Result<Vec<CanonicalRanks>, CyclicError> {
    if col_trunc < 2 {
        return Err(CyclicError::BadTruncation(col_trunc));
    }
    let trunc = n_max + 1 + 2 * col_trunc;
    let m = mixed_complex(a, trunc, cap)?;
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let tdeg = n as i64;
        // cycles in the truncated HN total complex
        let zx = hn_differential(&m, tdeg, col_trunc).kernel_basis();
        // the constant-term block sits first in both totalizations
        let head = m.dims[n];
        let project = |v: &SparseVec| -> SparseVec {
            v.iter().filter(|(r, _)| *r < head).cloned().collect()
        };
        let zm = m.d[n].kernel_basis();
        let hh_boundaries = m.d[n + 1].columns().to_vec();
        let hc_boundaries = hc_differential(&m, tdeg + 1).columns().to_vec();
        let rank_rel = |boundaries: &[SparseVec], images: Vec<SparseVec>| -> usize {
            let base = rank_q(boundaries.iter());
            let mut all: Vec<&SparseVec> = boundaries.iter().collect();
            for v in &images {
                all.push(v);
            }
            rank_q(all.into_iter()) - base
        };
        let hn_to_hh = rank_rel(&hh_boundaries, zx.iter().map(&project).collect());
        let hh_to_hc = rank_rel(&hc_boundaries, zm.clone());
        let composite = rank_rel(&hc_boundaries, zx.iter().map(&project).collect());
        out.push(CanonicalRanks {
            n,
            hn_to_hh,
            hh_to_hc,
            composite,
        });
    }
    Ok(out)
}
