//! Exact dense linear algebra over a prime field F_p.
//!
//! Scalars are `u32` representatives in `[0, p)`. Products are reduced with a
//! Barrett reduction, so every `p < 2^31` works without `u128` division on
//! the hot path.

use std::fmt;

use crate::error::{Error, Result};
use crate::par;

/// A prime field F_p with `3 <= p < 2^31`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
    barrett: u64,
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(3..1 << 31).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(PrimeField {
            p: p as u32,
            barrett: u64::MAX / p,
        })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    /// Reduces any `u64` modulo p.
    #[inline]
    pub fn reduce(self, x: u64) -> u32 {
        let q = ((x as u128 * self.barrett as u128) >> 64) as u64;
        let mut r = x - q * self.p as u64;
        while r >= self.p as u64 {
            r -= self.p as u64;
        }
        r as u32
    }

    pub fn from_i64(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        if s >= self.p as u64 {
            (s - self.p as u64) as u32
        } else {
            s as u32
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + (self.p - b)
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        self.reduce(a as u64 * b as u64)
    }

    /// `a + b*c`.
    #[inline]
    pub fn mul_add(self, a: u32, b: u32, c: u32) -> u32 {
        self.reduce(a as u64 + b as u64 * c as u64)
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p as u64 - 2))
        }
    }

    /// Checks that `v` is a canonical representative.
    pub fn check(self, v: u64) -> Result<u32> {
        if v < self.p as u64 {
            Ok(v as u32)
        } else {
            Err(Error::EntryOutOfRange { value: v, p: self.p })
        }
    }
}

/// Reduced row-echelon form of a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Mat,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// A dense row-major matrix over F_p.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Mat {
        Mat {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn scalar(field: PrimeField, n: usize, c: u32) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    /// Builds a matrix from signed rows, reducing every entry mod p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Mat> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {} but row 0 has {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().map(|&x| field.from_i64(x)));
        }
        Ok(Mat {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix from canonical representatives, rejecting entries `>= p`.
    pub fn from_vec(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Result<Mat> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        for &v in &data {
            field.check(v as u64)?;
        }
        Ok(Mat {
            field,
            rows,
            cols,
            data,
        })
    }

    pub(crate) fn from_raw(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Mat {
        debug_assert_eq!(data.len(), rows * cols);
        Mat {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u32>]) -> Mat {
        let mut m = Mat::zeros(field, rows, columns.len());
        for (c, v) in columns.iter().enumerate() {
            assert_eq!(v.len(), rows, "column length mismatch");
            for r in 0..rows {
                m.data[r * m.cols + c] = v[r];
            }
        }
        m
    }

    pub fn column_vector(field: PrimeField, v: &[u32]) -> Mat {
        Mat::from_raw(field, v.len(), 1, v.to_vec())
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    #[inline]
    pub fn data(&self) -> &[u32] {
        &self.data
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(v < self.field.p);
        self.data[r * self.cols + c] = v;
    }
    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }
    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|r| (0..self.cols).all(|c| self.get(r, c) == u32::from(r == c)))
    }

    pub fn trace(&self) -> u32 {
        let f = self.field;
        (0..self.rows.min(self.cols)).fold(0, |acc, i| f.add(acc, self.get(i, i)))
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    fn check_same_shape(&self, other: &Mat) {
        assert!(self.field == other.field, "field mismatch");
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.check_same_shape(other);
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Mat::from_raw(f, self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.check_same_shape(other);
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Mat::from_raw(f, self.rows, self.cols, data)
    }

    pub fn scale(&self, c: u32) -> Mat {
        let f = self.field;
        Mat::from_raw(
            f,
            self.rows,
            self.cols,
            self.data.iter().map(|&a| f.mul(a, c)).collect(),
        )
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: u32, other: &Mat) {
        self.check_same_shape(other);
        if c == 0 {
            return;
        }
        let f = self.field;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.mul_add(*a, c, b);
        }
    }

    /// `Σ coeffs[i] * mats[i]`; all matrices share the given shape.
    pub fn linear_combination(
        field: PrimeField,
        rows: usize,
        cols: usize,
        coeffs: &[u32],
        mats: &[Mat],
    ) -> Mat {
        assert_eq!(coeffs.len(), mats.len());
        let mut acc = vec![0u64; rows * cols];
        let p = field.p as u64;
        // Keep partial sums below 2^63 by reducing periodically.
        let batch = (((1u64 << 63) / ((p - 1) * (p - 1) + 1)).max(1)) as usize;
        let mut pending = 0usize;
        for (&c, m) in coeffs.iter().zip(mats) {
            if c == 0 {
                continue;
            }
            assert!(m.rows == rows && m.cols == cols, "shape mismatch");
            for (a, &b) in acc.iter_mut().zip(&m.data) {
                *a += c as u64 * b as u64;
            }
            pending += 1;
            if pending + 1 >= batch {
                for a in acc.iter_mut() {
                    *a = field.reduce(*a) as u64;
                }
                pending = 0;
            }
        }
        Mat::from_raw(
            field,
            rows,
            cols,
            acc.into_iter().map(|a| field.reduce(a)).collect(),
        )
    }

    /// Matrix product; panics on a shape mismatch.
    pub fn mul(&self, other: &Mat) -> Mat {
        assert!(self.field == other.field, "field mismatch");
        assert_eq!(
            self.cols, other.rows,
            "shape mismatch in product: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let f = self.field;
        let (n, m) = (self.rows, other.cols);
        let mut out = vec![0u32; n * m];
        if n == 0 || m == 0 {
            return Mat::from_raw(f, n, m, out);
        }
        let p = f.p as u64;
        let lazy = (p - 1) * (p - 1) <= u64::MAX / (self.cols as u64 + 1);
        let work = n * m * self.cols;
        par::chunks_mut(&mut out, m, work, |i, out_row| {
            let a_row = self.row(i);
            if lazy {
                let mut acc = vec![0u64; m];
                for (k, &a) in a_row.iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    let b_row = other.row(k);
                    for (x, &b) in acc.iter_mut().zip(b_row) {
                        *x += a as u64 * b as u64;
                    }
                }
                for (o, x) in out_row.iter_mut().zip(acc) {
                    *o = f.reduce(x);
                }
            } else {
                for (k, &a) in a_row.iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    let b_row = other.row(k);
                    for (o, &b) in out_row.iter_mut().zip(b_row) {
                        *o = f.mul_add(*o, a, b);
                    }
                }
            }
        });
        Mat::from_raw(f, n, m, out)
    }

    /// Checked product for callers that treat a shape mismatch as a usage error.
    pub fn checked_mul(&self, other: &Mat) -> Result<Mat> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul(other))
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        let f = self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u32, |acc, (&a, &b)| f.mul_add(acc, a, b))
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> Mat {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Mat::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Kronecker product, row index `i*other.rows + k`, column `j*other.cols + l`.
    pub fn kron(&self, other: &Mat) -> Mat {
        assert!(self.field == other.field, "field mismatch");
        let f = self.field;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Mat::zeros(f, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if b != 0 {
                            out.data[(i * other.rows + k) * c + j * other.cols + l] = f.mul(a, b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(field: PrimeField, rows: usize, blocks: &[&Mat]) -> Mat {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let mut c0 = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            out.set_block(0, c0, b);
            c0 += b.cols;
        }
        out
    }

    pub fn vstack(field: PrimeField, cols: usize, blocks: &[&Mat]) -> Mat {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend_from_slice(&b.data);
        }
        Mat::from_raw(field, rows, cols, data)
    }

    pub fn block_diag(field: PrimeField, blocks: &[&Mat]) -> Mat {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// `n` diagonal copies of `self`.
    pub fn repeat_diag(&self, n: usize) -> Mat {
        let blocks: Vec<&Mat> = std::iter::repeat_n(self, n).collect();
        Mat::block_diag(self.field, &blocks)
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols);
        for r in 0..b.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + b.cols].copy_from_slice(b.row(r));
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut out = Mat::zeros(self.field, rows, cols);
        for r in 0..rows {
            let src = (r0 + r) * self.cols + c0;
            out.data[r * cols..(r + 1) * cols].copy_from_slice(&self.data[src..src + cols]);
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Mat::from_raw(self.field, idx.len(), self.cols, data)
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.field, self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.data[r * idx.len() + j] = self.get(r, c);
            }
        }
        out
    }

    /// Row-major flattening as a vector.
    pub fn vectorize(&self) -> Vec<u32> {
        self.data.clone()
    }

    pub fn from_vectorized(field: PrimeField, rows: usize, cols: usize, v: &[u32]) -> Mat {
        Mat::from_raw(field, rows, cols, v.to_vec())
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(i) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if i != r {
                for k in c..cols {
                    self.data.swap(i * cols + k, r * cols + k);
                }
            }
            let inv = f.inv(self.data[r * cols + c]).expect("nonzero pivot");
            for k in c..cols {
                let v = &mut self.data[r * cols + k];
                *v = f.mul(*v, inv);
            }
            let pivot_nz: Vec<(usize, u32)> = (c..cols)
                .filter_map(|k| {
                    let v = self.data[r * cols + k];
                    (v != 0).then(|| (k, f.neg(v)))
                })
                .collect();
            let work = rows * pivot_nz.len();
            par::chunks_mut(&mut self.data, cols, work, |i, row| {
                if i == r {
                    return;
                }
                let factor = row[c];
                if factor == 0 {
                    return;
                }
                for &(k, negv) in &pivot_nz {
                    row[k] = f.mul_add(row[k], factor, negv);
                }
            });
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row-echelon form (leftmost pivot, smallest row index).
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let rank = pivots.len();
        Rref {
            matrix: m,
            pivots,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Some `X` with `self * X = b`; free variables are set to zero.
    pub fn solve_right(&self, b: &Mat) -> Result<Option<Mat>> {
        if self.field != b.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != b.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve_right: a has {} rows, b has {}",
                self.rows, b.rows
            )));
        }
        let n = self.cols;
        let aug = Mat::hstack(self.field, self.rows, &[self, b]);
        let Rref { matrix, pivots, .. } = aug.rref();
        if pivots.last().is_some_and(|&c| c >= n) {
            return Ok(None);
        }
        let mut x = Mat::zeros(self.field, n, b.cols);
        for (i, &c) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.data[c * b.cols + j] = matrix.get(i, n + j);
            }
        }
        Ok(Some(x))
    }

    /// Basis of `{v : self * v = 0}`, one vector per free column of the rref.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let Rref { matrix, pivots, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u32; self.cols];
                v[free] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(matrix.get(i, free));
                }
                v
            })
            .collect()
    }

    pub fn invert(&self) -> Result<Option<Mat>> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Some(self.clone()));
        }
        let aug = Mat::hstack(self.field, n, &[self, &Mat::identity(self.field, n)]);
        let Rref {
            matrix, rank, pivots, ..
        } = aug.rref();
        if rank < n || pivots[n - 1] >= n {
            return Ok(None);
        }
        Ok(Some(matrix.block(0, n, n, n)))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// The columns of `self` at the rref pivot positions: a basis of the column space.
    pub fn column_basis(&self) -> Mat {
        let pivots = self.rref().pivots;
        self.select_cols(&pivots)
    }

    /// For a matrix of full column rank, a left inverse `L` with `L * self = I`.
    pub fn left_inverse(&self) -> Option<Mat> {
        let k = self.cols;
        let rows = self.transpose().rref().pivots;
        if rows.len() < k {
            return None;
        }
        let sq = self.select_rows(&rows);
        let inv = sq.invert().ok()??;
        let mut l = Mat::zeros(self.field, k, self.rows);
        for (j, &r) in rows.iter().enumerate() {
            for i in 0..k {
                l.data[i * self.rows + r] = inv.get(i, j);
            }
        }
        Some(l)
    }
}

/// Incrementally maintained echelon basis of a subspace of F_p^n.
///
/// Each stored row has a unit entry at its pivot and zeros at the pivots of
/// the rows stored before it, so reducing in insertion order is exact.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: PrimeField,
    len: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: PrimeField, len: usize) -> Self {
        Echelon {
            field,
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.len
    }

    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w
    }

    fn reduce_in_place(&self, w: &mut [u32]) {
        let f = self.field;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = w[pc];
            if c == 0 {
                continue;
            }
            let negc = f.neg(c);
            for (x, &y) in w.iter_mut().zip(row) {
                if y != 0 {
                    *x = f.mul_add(*x, negc, y);
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.len);
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(w[pc]).expect("nonzero");
        for x in w.iter_mut() {
            *x = self.field.mul(*x, inv);
        }
        self.rows.push(w);
        self.pivots.push(pc);
        true
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    fn m(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(f5(), &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn field_rejects_bad_moduli() {
        for p in [0, 1, 2, 4, 9, 1 << 31] {
            assert!(PrimeField::new(p).is_err(), "{p}");
        }
        assert!(PrimeField::new(2147483647).is_ok());
    }

    #[test]
    fn barrett_matches_remainder() {
        for p in [3u64, 5, 65537, 2147483647] {
            let f = PrimeField::new(p).unwrap();
            for x in [0u64, 1, p - 1, p, p + 1, u64::MAX, u64::MAX - 1, 1 << 62, 123456789123] {
                assert_eq!(f.reduce(x) as u64, x % p);
            }
        }
    }

    #[test]
    fn rref_examples() {
        let id = Mat::identity(f5(), 2);
        let r = id.rref();
        assert_eq!((r.matrix, r.pivots, r.rank), (id, vec![0, 1], 2));

        let z = Mat::zeros(f5(), 3, 3);
        let r = z.rref();
        assert_eq!((r.matrix, r.pivots, r.rank), (z, vec![], 0));

        let r = m(&[&[2, 4], &[1, 2]]).rref();
        assert_eq!(r.matrix, m(&[&[1, 2], &[0, 0]]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn solve_examples() {
        let b = m(&[&[3, 1], &[4, 0]]);
        let x = Mat::identity(f5(), 2).solve_right(&b).unwrap().unwrap();
        assert_eq!(x, b);

        let zero = Mat::zeros(f5(), 2, 2);
        assert!(zero.solve_right(&m(&[&[1], &[0]])).unwrap().is_none());

        let a = m(&[&[1, 1], &[0, 0]]);
        let b = m(&[&[3], &[0]]);
        let x = a.solve_right(&b).unwrap().unwrap();
        assert_eq!(a.mul(&x), b);
        assert_eq!(x, m(&[&[3], &[0]]));

        assert!(a.solve_right(&m(&[&[1]])).is_err());
    }

    #[test]
    fn nullspace_examples() {
        assert!(Mat::identity(f5(), 3).nullspace().is_empty());
        let ns = Mat::zeros(f5(), 3, 3).nullspace();
        assert_eq!(ns, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let ns = m(&[&[1, 2]]).nullspace();
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        assert!(v.iter().any(|&x| x != 0));
        assert_eq!((v[0] + 2 * v[1]) % 5, 0);
    }

    #[test]
    fn nullspace_matches_enumeration() {
        let a = m(&[&[1, 2]]);
        let count = (0..5u32)
            .flat_map(|x| (0..5u32).map(move |y| (x, y)))
            .filter(|&(x, y)| (x + 2 * y) % 5 == 0)
            .count();
        assert_eq!(5usize.pow(a.nullspace().len() as u32), count);
    }

    #[test]
    fn invert_examples() {
        let id = Mat::identity(f5(), 3);
        assert_eq!(id.invert().unwrap().unwrap(), id);
        assert!(m(&[&[0, 1], &[0, 0]]).invert().unwrap().is_none());
        assert_eq!(
            m(&[&[2, 0], &[0, 3]]).invert().unwrap().unwrap(),
            m(&[&[3, 0], &[0, 2]])
        );
        assert!(m(&[&[1, 2]]).invert().is_err());
    }

    #[test]
    fn left_inverse_of_tall_matrix() {
        let b = m(&[&[1, 0], &[2, 1], &[0, 3]]);
        let l = b.left_inverse().unwrap();
        assert!(l.mul(&b).is_identity());
        assert!(m(&[&[1, 2], &[2, 4]]).left_inverse().is_none());
    }

    #[test]
    fn echelon_tracks_span() {
        let mut e = Echelon::new(f5(), 3);
        assert!(e.insert(&[1, 2, 0]));
        assert!(e.insert(&[0, 1, 1]));
        assert!(!e.insert(&[1, 3, 1]));
        assert!(e.contains(&[2, 4, 0]));
        assert!(!e.contains(&[0, 0, 1]));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn kron_mixed_product() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 1], &[1, 1]]);
        let c = m(&[&[2, 0], &[1, 1]]);
        let d = m(&[&[1, 4], &[0, 2]]);
        assert_eq!(a.kron(&b).mul(&c.kron(&d)), a.mul(&c).kron(&b.mul(&d)));
    }

    #[test]
    fn large_modulus_products() {
        let f = PrimeField::new(2147483647).unwrap();
        let a = Mat::from_vec(f, 2, 2, vec![2147483646, 5, 7, 2147483646]).unwrap();
        let inv = a.invert().unwrap().unwrap();
        assert!(a.mul(&inv).is_identity());
    }
}
