//! exact sparse linear algebra over Q, with an optional prime-field mode.
//!
//! Matrices are column-major lists of sorted sparse vectors; ranks come from
//! incremental Gaussian elimination keyed by leading row index, so the result
//! is deterministic for a fixed column order. Rank over a prime field is a
//! speed option and never certifies a rank over Q; callers record the field
//! they used.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::{One, Zero};
use thiserror::Error;

use crate::scalar::{inv_mod, mul_mod, residue_mod, Q};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("coefficient has denominator divisible by {0}; not reducible mod p")]
    NotPIntegral(u64),
    #[error("modulus {0} is not a prime")]
    NotPrime(u64),
}

/// Where ranks are computed. `Rationals` is the certifying default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub fn is_exact_rational(&self) -> bool {
        matches!(self, FieldSpec::Rationals)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{}", p),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = String;

    /// Accepts `q` / `Q` or `p<prime>`, e.g. `p65537`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Rationals);
        }
        let digits = s
            .strip_prefix('p')
            .or_else(|| s.strip_prefix('P'))
            .ok_or_else(|| format!("unrecognized field `{s}` (expected `q` or `p<prime>`)"))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| format!("bad prime in field spec `{s}`"))?;
        if !is_prime(p) {
            return Err(format!("{p} is not prime"));
        }
        Ok(FieldSpec::Prime(p))
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Sparse vector: (row, coefficient) pairs, sorted by row, no zeros.
pub type SparseVec = Vec<(usize, Q)>;

/// w - c * p, both sorted.
fn axpy_sub(w: &SparseVec, c: &Q, p: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(w.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < w.len() || j < p.len() {
        match (w.get(i), p.get(j)) {
            (Some(&(rw, ref cw)), Some(&(rp, ref cp))) => {
                if rw < rp {
                    out.push((rw, cw.clone()));
                    i += 1;
                } else if rp < rw {
                    out.push((rp, -(c * cp)));
                    j += 1;
                } else {
                    let v = cw - &(c * cp);
                    if !v.is_zero() {
                        out.push((rw, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            (Some(&(rw, ref cw)), None) => {
                out.push((rw, cw.clone()));
                i += 1;
            }
            (None, Some(&(rp, ref cp))) => {
                out.push((rp, -(c * cp)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn normalize(mut v: SparseVec) -> SparseVec {
    let lead = v[0].1.clone();
    if !lead.is_one() {
        for (_, c) in v.iter_mut() {
            *c = &*c / &lead;
        }
    }
    v
}

/// Column-major sparse matrix over Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMat {
    rows: usize,
    cols: Vec<SparseVec>,
}

impl SparseMat {
    pub fn new(rows: usize, cols: Vec<SparseVec>) -> Self {
        debug_assert!(cols
            .iter()
            .all(|c| c.windows(2).all(|w| w[0].0 < w[1].0) && c.iter().all(|e| e.0 < rows)));
        SparseMat { rows, cols }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMat {
            rows,
            cols: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMat {
            rows: n,
            cols: (0..n).map(|i| vec![(i, Q::one())]).collect(),
        }
    }

    /// Build from rectangular blocks; absent blocks are zero. Block row and
    /// column sizes are fixed up front, entries are (block row, block col,
    /// matrix) with at most one entry per position.
    pub fn from_blocks(
        row_dims: &[usize],
        col_dims: &[usize],
        blocks: &[(usize, usize, &SparseMat)],
    ) -> Self {
        let mut row_off = vec![0usize];
        for d in row_dims {
            row_off.push(row_off.last().unwrap() + d);
        }
        let mut col_off = vec![0usize];
        for d in col_dims {
            col_off.push(col_off.last().unwrap() + d);
        }
        let mut cols: Vec<SparseVec> = vec![Vec::new(); *col_off.last().unwrap()];
        let mut order: Vec<&(usize, usize, &SparseMat)> = blocks.iter().collect();
        order.sort_by_key(|(bi, bj, _)| (*bj, *bi));
        for w in order.windows(2) {
            assert!(
                (w[0].0, w[0].1) != (w[1].0, w[1].1),
                "duplicate block at ({}, {})",
                w[0].0,
                w[0].1
            );
        }
        for (bi, bj, m) in order {
            assert_eq!(m.n_rows(), row_dims[*bi], "block row size mismatch");
            assert_eq!(m.n_cols(), col_dims[*bj], "block col size mismatch");
            for (j, col) in m.cols.iter().enumerate() {
                let dst = &mut cols[col_off[*bj] + j];
                dst.extend(col.iter().map(|(r, c)| (r + row_off[*bi], c.clone())));
            }
        }
        SparseMat::new(*row_off.last().unwrap(), cols)
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn n_nonzero(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    /// Matrix-vector product (vector over columns).
    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (j, c) in x {
            for (r, a) in &self.cols[*j] {
                let e = acc.entry(*r).or_insert_with(Q::zero);
                *e += a * c;
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Compose: self o rhs (apply rhs first).
    pub fn compose(&self, rhs: &SparseMat) -> SparseMat {
        assert_eq!(self.n_cols(), rhs.n_rows(), "composition shape mismatch");
        SparseMat {
            rows: self.rows,
            cols: rhs.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn add(&self, rhs: &SparseMat) -> SparseMat {
        assert_eq!(self.rows, rhs.rows);
        assert_eq!(self.n_cols(), rhs.n_cols());
        let one = Q::one();
        SparseMat {
            rows: self.rows,
            cols: self
                .cols
                .iter()
                .zip(&rhs.cols)
                .map(|(a, b)| axpy_sub(a, &-one.clone(), b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &SparseMat) -> SparseMat {
        assert_eq!(self.rows, rhs.rows);
        assert_eq!(self.n_cols(), rhs.n_cols());
        let one = Q::one();
        SparseMat {
            rows: self.rows,
            cols: self
                .cols
                .iter()
                .zip(&rhs.cols)
                .map(|(a, b)| axpy_sub(a, &one, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> SparseMat {
        if c.is_zero() {
            return SparseMat::zero(self.rows, self.n_cols());
        }
        SparseMat {
            rows: self.rows,
            cols: self
                .cols
                .iter()
                .map(|col| col.iter().map(|(r, a)| (*r, a * c)).collect())
                .collect(),
        }
    }

    pub fn rank(&self, field: FieldSpec) -> Result<usize, LinalgError> {
        match field {
            FieldSpec::Rationals => Ok(rank_q(self.cols.iter())),
            FieldSpec::Prime(p) => rank_mod(self.cols.iter(), p),
        }
    }

    /// Basis of { x : self * x = 0 }, vectors over column indices. Exact.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        let mut pivots: BTreeMap<usize, (SparseVec, SparseVec)> = BTreeMap::new();
        let mut kernel = Vec::new();
        for (j, col) in self.cols.iter().enumerate() {
            let mut v = col.clone();
            let mut combo: SparseVec = vec![(j, Q::one())];
            while let Some((lead_row, lead_c)) = v.first().cloned() {
                match pivots.get(&lead_row) {
                    Some((pv, pc)) => {
                        v = axpy_sub(&v, &lead_c, pv);
                        combo = axpy_sub(&combo, &lead_c, pc);
                    }
                    None => break,
                }
            }
            if v.is_empty() {
                kernel.push(combo);
            } else {
                let lead = v[0].1.clone();
                let v = normalize(v);
                let combo = combo
                    .into_iter()
                    .map(|(i, c)| (i, c / &lead))
                    .collect::<Vec<_>>();
                pivots.insert(v[0].0, (v, combo));
            }
        }
        kernel
    }
}

/// Rank over Q of a set of sparse columns, in the given order.
pub fn rank_q<'a, I: Iterator<Item = &'a SparseVec>>(cols: I) -> usize {
    let mut pivots: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for col in cols {
        let mut v = col.clone();
        while let Some((lead_row, lead_c)) = v.first().cloned() {
            match pivots.get(&lead_row) {
                Some(p) => v = axpy_sub(&v, &lead_c, p),
                None => break,
            }
        }
        if !v.is_empty() {
            let v = normalize(v);
            pivots.insert(v[0].0, v);
        }
    }
    pivots.len()
}

fn rank_mod<'a, I: Iterator<Item = &'a SparseVec>>(cols: I, p: u64) -> Result<usize, LinalgError> {
    if !is_prime(p) {
        return Err(LinalgError::NotPrime(p));
    }
    let mut pivots: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
    for col in cols {
        let mut v: Vec<(usize, u64)> = Vec::with_capacity(col.len());
        for (r, c) in col {
            let res = residue_mod(c, p).ok_or(LinalgError::NotPIntegral(p))?;
            if res != 0 {
                v.push((*r, res));
            }
        }
        while let Some(&(lead_row, lead_c)) = v.first() {
            let Some(piv) = pivots.get(&lead_row) else { break };
            // v -= lead_c * piv  (piv has leading coefficient 1)
            let mut out = Vec::with_capacity(v.len() + piv.len());
            let (mut i, mut j) = (0, 0);
            while i < v.len() || j < piv.len() {
                match (v.get(i), piv.get(j)) {
                    (Some(&(rw, cw)), Some(&(rp, cp))) => {
                        if rw < rp {
                            out.push((rw, cw));
                            i += 1;
                        } else if rp < rw {
                            out.push((rp, p - mul_mod(lead_c, cp, p)));
                            j += 1;
                        } else {
                            let val = (cw + p - mul_mod(lead_c, cp, p)) % p;
                            if val != 0 {
                                out.push((rw, val));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                    (Some(&(rw, cw)), None) => {
                        out.push((rw, cw));
                        i += 1;
                    }
                    (None, Some(&(rp, cp))) => {
                        out.push((rp, p - mul_mod(lead_c, cp, p)));
                        j += 1;
                    }
                    (None, None) => unreachable!(),
                }
            }
            v = out;
        }
        if !v.is_empty() {
            let inv = inv_mod(v[0].1, p).expect("nonzero residue mod prime");
            for (_, c) in v.iter_mut() {
                *c = mul_mod(*c, inv, p);
            }
            pivots.insert(v[0].0, v);
        }
    }
    Ok(pivots.len())
}

/// Reduced row echelon form of a small dense matrix. Returns the reduced rows
/// and the pivot column indices, in order.
pub fn rref_dense(mut rows: Vec<Vec<Q>>) -> (Vec<Vec<Q>>, Vec<usize>) {
    let n_cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n_cols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..n_cols {
                    let sub = &f * &rows[r][j];
                    rows[i][j] = &rows[i][j] - &sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Inverse of a small dense matrix, if it exists. Used by tests that conjugate
/// structure constants; exact throughout.
pub fn invert_dense(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut aug: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let pr = (c..n).find(|&i| !aug[i][c].is_zero())?;
        aug.swap(c, pr);
        let inv = aug[c][c].clone();
        for x in aug[c].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..n {
            if i != c && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in 0..2 * n {
                    let sub = &f * &aug[c][j];
                    aug[i][j] = &aug[i][j] - &sub;
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}
