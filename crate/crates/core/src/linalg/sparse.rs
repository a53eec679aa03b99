//! Compressed-sparse-row complex matrices.
//!
//! Generators of the catalogued algebras have a handful of nonzeros per row,
//! and the Hamiltonians assembled from them stay sparse, so every operator in
//! the crate is stored in this format. Dense copies are made only where a
//! factorization needs them.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<Complex64>,
}

impl Operator {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Operator {
            nrows,
            ncols,
            indptr: vec![0; nrows + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_triplets(n, n, diag.iter().enumerate().map(|(i, &d)| (i, i, Complex64::new(d, 0.0))))
    }

    /// Builds from (row, col, value) triplets; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Self {
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); nrows];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) out of bounds");
            rows[r].push((c, v));
        }
        let mut op = Operator::zeros(nrows, ncols);
        for (r, mut row) in rows.into_iter().enumerate() {
            row.sort_by_key(|&(c, _)| c);
            let mut merged: Vec<(usize, Complex64)> = Vec::with_capacity(row.len());
            for (c, v) in row {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv += v,
                    _ => merged.push((c, v)),
                }
            }
            for (c, v) in merged {
                if v != ZERO {
                    op.indices.push(c);
                    op.values.push(v);
                }
            }
            op.indptr[r + 1] = op.indices.len();
        }
        op
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> Self {
        let trip = (0..m.nrows())
            .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let v = m[(i, j)];
                (v != ZERO).then_some((i, j, v))
            });
        Self::from_triplets(m.nrows(), m.ncols(), trip)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    /// Iterates the stored entries of row `r` as (col, value).
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let span = self.indptr[r]..self.indptr[r + 1];
        self.indices[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.nrows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.row(r)
            .find(|&(cc, _)| cc == c)
            .map(|(_, v)| v)
            .unwrap_or(ZERO)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        m
    }

    /// True if every stored entry has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(
            self.ncols,
            self.nrows,
            self.triplets().map(|(r, c, v)| (c, r, v.conj())),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out.prune();
        out
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    fn prune(&mut self) {
        if self.values.iter().all(|v| *v != ZERO) {
            return;
        }
        *self = Self::from_triplets(self.nrows, self.ncols, self.triplets().collect::<Vec<_>>());
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.nrows != other.nrows {
            return Err(Error::DimensionMismatch { expected: self.nrows, found: other.nrows });
        }
        if self.ncols != other.ncols {
            return Err(Error::DimensionMismatch { expected: self.ncols, found: other.ncols });
        }
        Ok(())
    }

    /// `self + s * other`
    pub fn add_scaled(&self, other: &Self, s: Complex64) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self::from_triplets(
            self.nrows,
            self.ncols,
            self.triplets()
                .chain(other.triplets().map(|(r, c, v)| (r, c, v * s))),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, Complex64::new(-1.0, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch { expected: self.ncols, found: other.nrows });
        }
        let mut out = Operator::zeros(self.nrows, other.ncols);
        let mut acc = vec![ZERO; other.ncols];
        let mut touched = vec![false; other.ncols];
        let mut cols: Vec<usize> = Vec::new();
        for r in 0..self.nrows {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if !touched[c] {
                        touched[c] = true;
                        cols.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            cols.sort_unstable();
            for &c in &cols {
                if acc[c] != ZERO {
                    out.indices.push(c);
                    out.values.push(acc[c]);
                }
                acc[c] = ZERO;
                touched[c] = false;
            }
            cols.clear();
            out.indptr[r + 1] = out.indices.len();
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::InvalidArgument("power of a non-square operator".into()));
        }
        let mut out = Operator::identity(self.nrows);
        for _ in 0..k {
            out = out.matmul(self)?;
        }
        Ok(out)
    }

    /// `[self, other]`
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let nrows = self.nrows * other.nrows;
        let ncols = self.ncols * other.ncols;
        let mut out = Operator::zeros(nrows, ncols);
        for ra in 0..self.nrows {
            for rb in 0..other.nrows {
                for (ca, va) in self.row(ra) {
                    for (cb, vb) in other.row(rb) {
                        out.indices.push(ca * other.ncols + cb);
                        out.values.push(va * vb);
                    }
                }
                out.indptr[ra * other.nrows + rb + 1] = out.indices.len();
            }
        }
        out
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![ZERO; self.nrows];
        self.apply_into(x, &mut y);
        y
    }

    pub fn apply_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        assert_eq!(x.len(), self.ncols, "operand length");
        assert_eq!(y.len(), self.nrows, "output length");
        for (r, yr) in y.iter_mut().enumerate() {
            *yr = self.row(r).map(|(c, v)| v * x[c]).sum();
        }
    }

    pub fn apply_vec(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        DVector::from_vec(self.apply(x.as_slice()))
    }

    /// ⟨x|A|x⟩ for a (not necessarily normalized) vector.
    pub fn expectation(&self, x: &[Complex64]) -> Complex64 {
        (0..self.nrows)
            .map(|r| x[r].conj() * self.row(r).map(|(c, v)| v * x[c]).sum::<Complex64>())
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest |entry| over entries whose row and column both pass `keep`.
    pub fn max_abs_where(&self, keep: &[bool]) -> f64 {
        self.triplets()
            .filter(|&(r, c, _)| keep[r] && keep[c])
            .map(|(_, _, v)| v.norm())
            .fold(0.0, f64::max)
    }

    /// max |A - A†| entrywise.
    pub fn hermiticity_defect(&self) -> f64 {
        match self.sub(&self.adjoint()) {
            Ok(d) => d.max_abs(),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).sum()
    }

    /// Hilbert-Schmidt inner product Tr(A† B).
    pub fn hs_inner(&self, other: &Self) -> Complex64 {
        self.triplets()
            .map(|(r, c, v)| v.conj() * other.get(r, c))
            .sum()
    }

    /// Drops every row/column not selected by `keep` (used to build operators
    /// restricted to a subspace of basis states).
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let mut position = vec![usize::MAX; self.nrows.max(self.ncols)];
        for (new, &old) in keep.iter().enumerate() {
            position[old] = new;
        }
        let trip: Vec<_> = self
            .triplets()
            .filter_map(|(r, c, v)| {
                let (nr, nc) = (position[r], position[c]);
                (nr != usize::MAX && nc != usize::MAX).then_some((nr, nc, v))
            })
            .collect();
        Self::from_triplets(keep.len(), keep.len(), trip)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_dense(n: usize, seed: u64) -> DMatrix<Complex64> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(n, n, |_, _| {
            if rng.gen_bool(0.4) {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            } else {
                ZERO
            }
        })
    }

    #[test]
    fn matmul_matches_dense() {
        let a = random_dense(7, 1);
        let b = random_dense(7, 2);
        let sa = Operator::from_dense(&a);
        let sb = Operator::from_dense(&b);
        let prod = sa.matmul(&sb).unwrap().to_dense();
        assert!((prod - &a * &b).camax() < 1e-14);
    }

    #[test]
    fn kron_matches_dense() {
        let a = random_dense(3, 3);
        let b = random_dense(4, 4);
        let k = Operator::from_dense(&a).kron(&Operator::from_dense(&b)).to_dense();
        assert!((k - a.kronecker(&b)).camax() < 1e-15);
    }

    #[test]
    fn triplets_sum_duplicates_and_drop_zeros() {
        let op = Operator::from_triplets(
            2,
            2,
            vec![(0, 1, c(1.0, 0.0)), (0, 1, c(-1.0, 0.0)), (1, 0, c(0.0, 2.0)), (1, 0, c(1.0, 0.0))],
        );
        assert_eq!(op.nnz(), 1);
        assert_eq!(op.get(1, 0), c(1.0, 2.0));
    }

    #[test]
    fn adjoint_and_expectation() {
        let a = Operator::from_dense(&random_dense(5, 9));
        let h = a.add(&a.adjoint()).unwrap();
        assert!(h.hermiticity_defect() < 1e-15);
        let x: Vec<Complex64> = (0..5).map(|i| c(i as f64, 1.0 - i as f64)).collect();
        assert!(h.expectation(&x).im.abs() < 1e-12);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = Operator::identity(3);
        let b = Operator::identity(4);
        assert!(matches!(a.add(&b), Err(Error::DimensionMismatch { .. })));
        assert!(a.matmul(&b).is_err());
    }
}
