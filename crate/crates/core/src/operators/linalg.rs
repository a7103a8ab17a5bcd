//! Sparse complex operators and the small kernel the checks need.
//!
//! Storage is row-major with column-sorted entries. Every operator built in
//! this crate has at most a few nonzeros per column, so products stay cheap
//! even at a few thousand basis vectors. Norms and spectra are computed
//! densely, one connected block of the sparsity graph at a time.

use std::io::{self, Write};
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OpError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("operator is not selfadjoint (deviation {0:e})")]
    NotSelfAdjoint(f64),
}

/// Square complex matrix acting linearly.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOp {
    dim: usize,
    rows: Vec<Vec<(usize, C64)>>,
}

impl LinearOp {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, rows: vec![Vec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(std::iter::repeat_n(1.0, dim))
    }

    pub fn diagonal(values: impl IntoIterator<Item = f64>) -> Self {
        Self::diagonal_complex(values.into_iter().map(|v| C64::new(v, 0.0)))
    }

    pub fn diagonal_complex(values: impl IntoIterator<Item = C64>) -> Self {
        let rows: Vec<Vec<(usize, C64)>> = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| if v == ZERO { Vec::new() } else { vec![(i, v)] })
            .collect();
        Self { dim: rows.len(), rows }
    }

    /// Builds from `(row, col, value)` entries; repeated positions add up.
    pub fn from_triplets(dim: usize, entries: impl IntoIterator<Item = (usize, usize, C64)>) -> Self {
        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); dim];
        for (r, c, v) in entries {
            assert!(r < dim && c < dim, "entry ({r}, {c}) outside dimension {dim}");
            rows[r].push((c, v));
        }
        for row in &mut rows {
            row.sort_by_key(|&(c, _)| c);
            let mut merged: Vec<(usize, C64)> = Vec::with_capacity(row.len());
            for &(c, v) in row.iter() {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|&(_, v)| v != ZERO);
            *row = merged;
        }
        Self { dim, rows }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.rows[row]
            .binary_search_by_key(&col, |&(c, _)| c)
            .map(|k| self.rows[row][k].1)
            .unwrap_or(ZERO)
    }

    /// Nonzero entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, v)))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.dim, self.triplets().map(|(r, c, v)| (c, r, v.conj())))
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        if s == ZERO {
            return Self::zeros(self.dim);
        }
        self.map(|v| v * s)
    }

    fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            dim: self.dim,
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|&(c, v)| (c, f(v))).collect())
                .collect(),
        }
    }

    fn check_dim(&self, other: &Self) -> Result<(), OpError> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(OpError::DimensionMismatch { left: self.dim, right: other.dim })
        }
    }

    fn combine(&self, other: &Self, sign: f64) -> Result<Self, OpError> {
        self.check_dim(other)?;
        let entries = self
            .triplets()
            .chain(other.triplets().map(|(r, c, v)| (r, c, v * sign)));
        Ok(Self::from_triplets(self.dim, entries))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, OpError> {
        self.combine(other, 1.0)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, OpError> {
        self.combine(other, -1.0)
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self, OpError> {
        self.check_dim(other)?;
        let mut acc = vec![ZERO; self.dim];
        let mut seen = vec![false; self.dim];
        let mut touched = Vec::new();
        let mut rows = Vec::with_capacity(self.dim);
        for row in &self.rows {
            for &(k, a) in row {
                for &(c, b) in &other.rows[k] {
                    if !seen[c] {
                        seen[c] = true;
                        touched.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for &c in &touched {
                if acc[c] != ZERO {
                    out.push((c, acc[c]));
                }
                acc[c] = ZERO;
                seen[c] = false;
            }
            touched.clear();
            rows.push(out);
        }
        Ok(Self { dim: self.dim, rows })
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(c, a)| a * v[c]).sum())
            .collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.triplets().map(|(_, _, v)| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_selfadjoint(&self, tol: f64) -> bool {
        self.selfadjoint_deviation() <= tol * self.max_abs().max(1.0)
    }

    fn selfadjoint_deviation(&self) -> f64 {
        (self - &self.adjoint()).max_abs()
    }

    /// Operator 2-norm: the largest singular value.
    pub fn op_norm(&self) -> f64 {
        let n = self.dim;
        let mut uf = UnionFind::new(2 * n);
        for (r, c, _) in self.triplets() {
            uf.union(r, n + c);
        }
        let mut best: f64 = 0.0;
        for group in uf.groups() {
            let rows: Vec<usize> = group.iter().copied().filter(|&i| i < n).collect();
            let cols: Vec<usize> = group.iter().filter(|&&i| i >= n).map(|&i| i - n).collect();
            if rows.is_empty() || cols.is_empty() {
                continue;
            }
            let block = DMatrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]));
            let s = block.singular_values().max();
            best = best.max(s);
        }
        best
    }

    /// Real spectrum of a selfadjoint operator, ascending, with multiplicity.
    pub fn eigenvalues(&self) -> Result<Vec<f64>, OpError> {
        let dev = self.selfadjoint_deviation();
        if dev > 1e-10 * self.max_abs().max(1.0) {
            return Err(OpError::NotSelfAdjoint(dev));
        }
        let mut uf = UnionFind::new(self.dim);
        for (r, c, _) in self.triplets() {
            uf.union(r, c);
        }
        let mut out = Vec::with_capacity(self.dim);
        for group in uf.groups() {
            if group.len() == 1 {
                out.push(self.get(group[0], group[0]).re);
                continue;
            }
            let block = DMatrix::from_fn(group.len(), group.len(), |i, j| self.get(group[i], group[j]));
            out.extend(SymmetricEigen::new(block).eigenvalues.iter().copied());
        }
        out.sort_by(f64::total_cmp);
        Ok(out)
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        m
    }

    /// One `row col re im` line per nonzero entry.
    pub fn write_triplets<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (r, c, v) in self.triplets() {
            writeln!(out, "{r} {c} {} {}", v.re, v.im)?;
        }
        Ok(())
    }
}

/// `ab - ba`
pub fn commutator(a: &LinearOp, b: &LinearOp) -> Result<LinearOp, OpError> {
    a.compose(b)?.try_sub(&b.compose(a)?)
}

/// `ab + ba`
pub fn anticommutator(a: &LinearOp, b: &LinearOp) -> Result<LinearOp, OpError> {
    a.compose(b)?.try_add(&b.compose(a)?)
}

pub fn adjoint(op: &LinearOp) -> LinearOp {
    op.adjoint()
}

// Operator sugar. These panic on dimension mismatch; the `try_*` and
// `compose` methods report it instead.

impl Add for &LinearOp {
    type Output = LinearOp;
    fn add(self, rhs: &LinearOp) -> LinearOp {
        self.try_add(rhs).expect("operator dimensions")
    }
}

impl Sub for &LinearOp {
    type Output = LinearOp;
    fn sub(self, rhs: &LinearOp) -> LinearOp {
        self.try_sub(rhs).expect("operator dimensions")
    }
}

impl Mul for &LinearOp {
    type Output = LinearOp;
    fn mul(self, rhs: &LinearOp) -> LinearOp {
        self.compose(rhs).expect("operator dimensions")
    }
}

impl Mul<f64> for &LinearOp {
    type Output = LinearOp;
    fn mul(self, s: f64) -> LinearOp {
        self.scale(C64::new(s, 0.0))
    }
}

impl Mul<C64> for &LinearOp {
    type Output = LinearOp;
    fn mul(self, s: C64) -> LinearOp {
        self.scale(s)
    }
}

impl Neg for &LinearOp {
    type Output = LinearOp;
    fn neg(self) -> LinearOp {
        self.scale(C64::new(-1.0, 0.0))
    }
}

/// Antilinear map `ψ ↦ M · conj(ψ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AntilinearOp {
    matrix: LinearOp,
}

impl AntilinearOp {
    pub fn new(matrix: LinearOp) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &LinearOp {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let conj: Vec<C64> = v.iter().map(|z| z.conj()).collect();
        self.matrix.apply(&conj)
    }

    /// `self ∘ other`, which is linear with matrix `M₁ · conj(M₂)`.
    pub fn then_antilinear(&self, other: &AntilinearOp) -> Result<LinearOp, OpError> {
        self.matrix.compose(&other.matrix.conj())
    }

    /// `self ∘ op`, antilinear with matrix `M · conj(L)`.
    pub fn after_linear(&self, op: &LinearOp) -> Result<AntilinearOp, OpError> {
        Ok(Self::new(self.matrix.compose(&op.conj())?))
    }

    /// `op ∘ self`, antilinear with matrix `L · M`.
    pub fn before_linear(&self, op: &LinearOp) -> Result<AntilinearOp, OpError> {
        Ok(Self::new(op.compose(&self.matrix)?))
    }

    /// `self ∘ self`.
    pub fn square(&self) -> LinearOp {
        self.then_antilinear(self).expect("same dimension")
    }

    /// `J ∘ P ∘ J` as a linear operator: `M · conj(P) · conj(M)`.
    pub fn sandwich(&self, op: &LinearOp) -> Result<LinearOp, OpError> {
        self.matrix.compose(&op.conj())?.compose(&self.matrix.conj())
    }
}

/// `J P J` for an antilinear `J`.
pub fn sandwich_j(j: &AntilinearOp, op: &LinearOp) -> Result<LinearOp, OpError> {
    j.sandwich(op)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Members of each class, ordered by smallest member.
    fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut slot = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            let r = self.find(i);
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(i);
        }
        out
    }
}
