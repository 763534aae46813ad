//! Bit-packed linear algebra over GF(2).
//!
//! Vectors are packed into `u64` words. Matrices come in two flavours: a
//! sparse adjacency-list form ([`Gf2SparseMatrix`]) used on the decoding hot
//! path, and a dense bit-packed form ([`DenseGf2Matrix`]) used only as a
//! scratch copy for Gaussian elimination.

use std::fmt;
use std::ops::BitXorAssign;

use thiserror::Error;

const WORD_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of bounds for length {len}")]
    IndexOutOfBounds { index: usize, len: usize },
    #[error("support of row {row} is not strictly increasing")]
    UnsortedSupport { row: usize },
}

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A binary vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector with ones exactly at `support`. Repeated indices cancel.
    pub fn from_support(len: usize, support: &[usize]) -> Result<Self, Gf2Error> {
        let mut v = Self::zeros(len);
        for &i in support {
            if i >= len {
                return Err(Gf2Error::IndexOutOfBounds { index: i, len });
            }
            v.flip(i);
        }
        Ok(v)
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of the set bits, in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let tz = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD_BITS + tz)
                }
            })
        })
    }

    pub fn support(&self) -> Vec<usize> {
        self.ones().collect()
    }

    pub fn try_xor_assign(&mut self, other: &Gf2Vector) -> Result<(), Gf2Error> {
        if self.len != other.len {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.len,
                found: other.len,
            });
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    /// Parity of the bits at `indices`.
    pub fn parity_on(&self, indices: &[usize]) -> bool {
        indices.iter().fold(false, |acc, &i| acc ^ self.get(i))
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Gf2Vector) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Index of the lowest set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(wi, w)| wi * WORD_BITS + w.trailing_zeros() as usize)
    }
}

impl BitXorAssign<&Gf2Vector> for Gf2Vector {
    fn bitxor_assign(&mut self, rhs: &Gf2Vector) {
        self.try_xor_assign(rhs)
            .expect("xor of vectors with different lengths");
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vector(len={}, ones={:?})", self.len, self.support())
    }
}

/// Sparse binary matrix with both row and column adjacency lists.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2SparseMatrix {
    rows: usize,
    cols: usize,
    row_supports: Vec<Vec<usize>>,
    col_supports: Vec<Vec<usize>>,
}

impl Gf2SparseMatrix {
    /// Builds a matrix from per-row column supports, which must be strictly
    /// increasing and in bounds.
    pub fn from_row_supports(cols: usize, row_supports: Vec<Vec<usize>>) -> Result<Self, Gf2Error> {
        let mut col_supports = vec![Vec::new(); cols];
        for (r, row) in row_supports.iter().enumerate() {
            for (k, &c) in row.iter().enumerate() {
                if c >= cols {
                    return Err(Gf2Error::IndexOutOfBounds { index: c, len: cols });
                }
                if k > 0 && row[k - 1] >= c {
                    return Err(Gf2Error::UnsortedSupport { row: r });
                }
                col_supports[c].push(r);
            }
        }
        Ok(Self {
            rows: row_supports.len(),
            cols,
            row_supports,
            col_supports,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            row_supports: vec![Vec::new(); rows],
            col_supports: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_row_supports(n, (0..n).map(|i| vec![i]).collect()).expect("identity is valid")
    }

    /// Builds a matrix from 0/1 rows. Any nonzero entry counts as one.
    pub fn from_dense_rows(cols: usize, rows: &[Vec<u8>]) -> Result<Self, Gf2Error> {
        let supports = rows
            .iter()
            .map(|row| {
                if row.len() != cols {
                    return Err(Gf2Error::DimensionMismatch {
                        expected: cols,
                        found: row.len(),
                    });
                }
                Ok(row
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(j, _)| j)
                    .collect())
            })
            .collect::<Result<Vec<Vec<usize>>, _>>()?;
        Self::from_row_supports(cols, supports)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.row_supports[r]
    }

    pub fn col(&self, c: usize) -> &[usize] {
        &self.col_supports[c]
    }

    pub fn row_supports(&self) -> &[Vec<usize>] {
        &self.row_supports
    }

    pub fn col_supports(&self) -> &[Vec<usize>] {
        &self.col_supports
    }

    pub fn nnz(&self) -> usize {
        self.row_supports.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.row_supports[r].binary_search(&c).is_ok()
    }

    pub fn row_vector(&self, r: usize) -> Gf2Vector {
        Gf2Vector::from_support(self.cols, &self.row_supports[r]).expect("row support in bounds")
    }

    pub fn transpose(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            row_supports: self.col_supports.clone(),
            col_supports: self.row_supports.clone(),
        }
    }

    /// `M v^T`.
    pub fn mat_vec(&self, v: &Gf2Vector) -> Result<Gf2Vector, Gf2Error> {
        if v.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut out = Gf2Vector::zeros(self.rows);
        for (r, row) in self.row_supports.iter().enumerate() {
            if v.parity_on(row) {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Matrix product `self * other`.
    pub fn mat_mul(&self, other: &Gf2SparseMatrix) -> Result<Gf2SparseMatrix, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut acc = Gf2Vector::zeros(other.cols);
        let mut out = Vec::with_capacity(self.rows);
        for row in &self.row_supports {
            for &k in row {
                for &c in other.row(k) {
                    acc.flip(c);
                }
            }
            out.push(acc.support());
            for &k in row {
                for &c in other.row(k) {
                    acc.set(c, false);
                }
            }
        }
        Gf2SparseMatrix::from_row_supports(other.cols, out)
    }

    pub fn is_zero(&self) -> bool {
        self.row_supports.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> DenseGf2Matrix {
        let mut d = DenseGf2Matrix::zeros(self.rows, self.cols);
        for (r, row) in self.row_supports.iter().enumerate() {
            for &c in row {
                d.rows[r].set(c, true);
            }
        }
        d
    }

    pub fn rank(&self) -> usize {
        self.to_dense().rank()
    }

    /// Basis of `{v : M v^T = 0}`.
    pub fn nullspace_basis(&self) -> Vec<Gf2Vector> {
        self.to_dense().nullspace_basis()
    }

    /// Whether `v` is a GF(2) combination of the rows of `self`.
    pub fn in_rowspace(&self, v: &Gf2Vector) -> Result<bool, Gf2Error> {
        RowSpace::new(self).contains(v)
    }
}

impl fmt::Debug for Gf2SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Gf2SparseMatrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("row_supports", &self.row_supports)
            .finish()
    }
}

/// Dense row-major bit matrix. Elimination scratch space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseGf2Matrix {
    cols: usize,
    rows: Vec<Gf2Vector>,
}

impl DenseGf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![Gf2Vector::zeros(cols); rows],
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<Gf2Vector>) -> Result<Self, Gf2Error> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Gf2Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self { cols, rows })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &Gf2Vector {
        &self.rows[r]
    }

    /// Reduces `self` in place to reduced row echelon form and returns the
    /// pivot column of each nonzero row. Zero rows end up at the bottom.
    pub fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows.len() {
                break;
            }
            let Some(p) = (next..self.rows.len()).find(|&r| self.rows[r].get(c)) else {
                continue;
            };
            self.rows.swap(next, p);
            let pivot_row = self.rows[next].clone();
            for (r, row) in self.rows.iter_mut().enumerate() {
                if r != next && row.get(c) {
                    *row ^= &pivot_row;
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce().len()
    }

    pub fn nullspace_basis(&self) -> Vec<Gf2Vector> {
        let mut m = self.clone();
        let pivots = m.reduce();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|free| {
                let mut v = Gf2Vector::zeros(self.cols);
                v.set(free, true);
                for (r, &p) in pivots.iter().enumerate() {
                    if m.rows[r].get(free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }
}

/// The row space of a matrix, kept in reduced echelon form for repeated
/// membership queries.
#[derive(Clone, Debug)]
pub struct RowSpace {
    cols: usize,
    pivots: Vec<usize>,
    basis: Vec<Gf2Vector>,
}

impl RowSpace {
    pub fn new(m: &Gf2SparseMatrix) -> Self {
        Self::from_dense(m.to_dense())
    }

    pub fn from_dense(mut d: DenseGf2Matrix) -> Self {
        let pivots = d.reduce();
        let mut basis = d.rows;
        basis.truncate(pivots.len());
        Self {
            cols: d.cols,
            pivots,
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Gf2Vector] {
        &self.basis
    }

    /// Remainder of `v` after eliminating every pivot position.
    pub fn residue(&self, v: &Gf2Vector) -> Result<Gf2Vector, Gf2Error> {
        if v.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut r = v.clone();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if r.get(p) {
                r ^= row;
            }
        }
        Ok(r)
    }

    pub fn contains(&self, v: &Gf2Vector) -> Result<bool, Gf2Error> {
        Ok(self.residue(v)?.is_zero())
    }
}
