//! Linear algebra over F_2 with bit-packed storage.
//!
//! Matrices act on column vectors: an `r x c` matrix maps `F_2^c` to `F_2^r`.
//! Rows are packed into `u64` words, so row operations are word-wise xors.

use std::fmt;

use crate::error::{Error, Result};

const W: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(W)
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct F2Vector {
    len: usize,
    words: Vec<u64>,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        F2Vector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
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

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.words[i / W] >> (i % W) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        let m = 1u64 << (i % W);
        if b {
            self.words[i / W] |= m;
        } else {
            self.words[i / W] &= !m;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.words[i / W] ^= 1u64 << (i % W);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn add_assign(&mut self, other: &F2Vector) {
        assert_eq!(self.len, other.len, "vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn sum(&self, other: &F2Vector) -> F2Vector {
        let mut v = self.clone();
        v.add_assign(other);
        v
    }

    pub fn dot(&self, other: &F2Vector) -> bool {
        assert_eq!(self.len, other.len, "vector length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * W + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Indices of the nonzero coordinates, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * W + t)
                }
            })
        })
    }

    pub fn concat(&self, other: &F2Vector) -> F2Vector {
        let mut v = F2Vector::zeros(self.len + other.len);
        for i in self.ones() {
            v.set(i, true);
        }
        for i in other.ones() {
            v.set(self.len + i, true);
        }
        v
    }

    pub fn slice(&self, start: usize, end: usize) -> F2Vector {
        F2Vector::from_indices(
            end - start,
            self.ones()
                .filter(|&i| i >= start && i < end)
                .map(|i| i - start),
        )
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

/// Output of [`F2Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: F2Matrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        F2Matrix {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[F2Vector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row length mismatch");
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        m
    }

    pub fn from_columns(rows: usize, cols: &[F2Vector]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn from_bools(rows: &[Vec<bool>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let vs: Vec<F2Vector> = rows.iter().map(|r| F2Vector::from_bits(r)).collect();
        Self::from_rows(cols, &vs)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(
            i < self.rows && j < self.cols,
            "entry ({i},{j}) out of range"
        );
        self.bits[i * self.stride + j / W] >> (j % W) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        assert!(
            i < self.rows && j < self.cols,
            "entry ({i},{j}) out of range"
        );
        let m = 1u64 << (j % W);
        let w = &mut self.bits[i * self.stride + j / W];
        if b {
            *w |= m;
        } else {
            *w &= !m;
        }
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.stride..(i + 1) * self.stride]
    }

    fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.bits[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> F2Vector {
        F2Vector {
            len: self.cols,
            words: self.row_words(i).to_vec(),
        }
    }

    pub fn column(&self, j: usize) -> F2Vector {
        F2Vector::from_indices(self.rows, (0..self.rows).filter(|&i| self.get(i, j)))
    }

    pub fn columns(&self) -> Vec<F2Vector> {
        let t = self.transpose();
        (0..t.rows).map(|i| t.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    fn xor_row_into(&mut self, src: usize, dst: usize, from_word: usize) {
        let s = self.stride;
        for k in from_word..s {
            let w = self.bits[src * s + k];
            self.bits[dst * s + k] ^= w;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for k in 0..self.stride {
                self.bits.swap(a * self.stride + k, b * self.stride + k);
            }
        }
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.row(i).ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = F2Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let row = self.row(i);
            for k in row.ones() {
                let s = other.stride;
                for w in 0..s {
                    out.bits[i * s + w] ^= other.bits[k * s + w];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &F2Vector) -> F2Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let mut out = F2Vector::zeros(self.rows);
        for i in 0..self.rows {
            let p = self
                .row_words(i)
                .iter()
                .zip(v.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            if p & 1 == 1 {
                out.set(i, true);
            }
        }
        out
    }

    pub fn add(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix sum shape mismatch"
        );
        let mut out = self.clone();
        for (a, b) in out.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
        out
    }

    pub fn add_assign(&mut self, other: &F2Matrix) {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix sum shape mismatch"
        );
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
    }

    /// Block matrix `[self | other]`.
    pub fn hstack(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let rows: Vec<F2Vector> = (0..self.rows)
            .map(|i| self.row(i).concat(&other.row(i)))
            .collect();
        F2Matrix::from_rows(self.cols + other.cols, &rows)
    }

    /// Block matrix with `self` above `other`.
    pub fn vstack(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut rows: Vec<F2Vector> = (0..self.rows).map(|i| self.row(i)).collect();
        rows.extend((0..other.rows).map(|i| other.row(i)));
        F2Matrix::from_rows(self.cols, &rows)
    }

    /// Kronecker product, with the row index of `other` varying fastest.
    pub fn kron(&self, other: &F2Matrix) -> F2Matrix {
        let mut out = F2Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in self.row(i).ones() {
                for k in 0..other.rows {
                    for l in other.row(k).ones() {
                        out.set(i * other.rows + k, j * other.cols + l, true);
                    }
                }
            }
        }
        out
    }

    /// Reduced row-echelon form; pivots are chosen leftmost-first.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            m.swap_rows(r, p);
            let fw = c / W;
            for i in 0..m.rows {
                if i != r && m.get(i, c) {
                    m.xor_row_into(r, i, fw);
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        Rref {
            reduced: m,
            rank: r,
            pivot_cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// A basis of the null space, one vector per non-pivot column.
    pub fn kernel_basis(&self) -> Vec<F2Vector> {
        let Rref {
            reduced,
            rank,
            pivot_cols,
        } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        let mut out = Vec::with_capacity(self.cols - rank);
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = F2Vector::unit(self.cols, f);
            for (r, &pc) in pivot_cols.iter().enumerate() {
                if reduced.get(r, f) {
                    v.set(pc, true);
                }
            }
            out.push(v);
        }
        out
    }

    /// Some `x` with `self * x = b`, if one exists.
    pub fn solve(&self, b: &F2Vector) -> Result<Option<F2Vector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {} but matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let aug = self.hstack(&F2Matrix::from_columns(self.rows, std::slice::from_ref(b)));
        let Rref {
            reduced,
            pivot_cols,
            ..
        } = aug.rref();
        if pivot_cols.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = F2Vector::zeros(self.cols);
        for (r, &pc) in pivot_cols.iter().enumerate() {
            if reduced.get(r, self.cols) {
                x.set(pc, true);
            }
        }
        Ok(Some(x))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// An incrementally built echelon basis of a subspace of `F_2^n`.
///
/// Each stored row records which inserted vectors it combines, so membership
/// tests can also return coordinates with respect to the inserted vectors.
#[derive(Clone, Debug)]
pub struct Echelon {
    n: usize,
    rows: Vec<F2Vector>,
    pivots: Vec<usize>,
    combos: Vec<F2Vector>,
    inserted: usize,
    cap: usize,
    track: bool,
}

impl Echelon {
    /// `cap` bounds how many vectors may be inserted (the coordinate length).
    pub fn new(n: usize, cap: usize) -> Self {
        Echelon {
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: Vec::new(),
            inserted: 0,
            cap,
            track: true,
        }
    }

    /// A span without combination bookkeeping: any number of insertions,
    /// but `coords` returns empty combinations.
    pub fn span(n: usize) -> Self {
        Echelon {
            track: false,
            ..Echelon::new(n, 0)
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// Reduce `v` against the basis; returns the remainder and the combination
    /// of inserted vectors that was subtracted.
    pub fn reduce(&self, v: &F2Vector) -> (F2Vector, F2Vector) {
        let mut r = v.clone();
        let mut c = F2Vector::zeros(self.cap);
        for ((row, &p), combo) in self.rows.iter().zip(&self.pivots).zip(&self.combos) {
            if r.get(p) {
                r.add_assign(row);
                c.add_assign(combo);
            }
        }
        (r, c)
    }

    pub fn contains(&self, v: &F2Vector) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Coordinates of `v` in terms of the inserted vectors, if `v` lies in the span.
    pub fn coords(&self, v: &F2Vector) -> Option<F2Vector> {
        let (r, c) = self.reduce(v);
        r.is_zero().then_some(c)
    }

    /// Insert `v`; returns true when it was independent of the earlier vectors.
    /// Dependent vectors still consume an insertion index.
    pub fn insert(&mut self, v: &F2Vector) -> bool {
        assert_eq!(v.len(), self.n, "echelon vector length mismatch");
        assert!(
            !self.track || self.inserted < self.cap,
            "echelon capacity exceeded"
        );
        let idx = self.inserted;
        self.inserted += 1;
        let (r, mut c) = self.reduce(v);
        match r.first_one() {
            None => false,
            Some(p) => {
                if self.track {
                    c.flip(idx);
                }
                self.rows.push(r);
                self.pivots.push(p);
                self.combos.push(c);
                true
            }
        }
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Standard basis positions that are not pivots, ascending; their unit
    /// vectors span a complement.
    pub fn complement_positions(&self) -> Vec<usize> {
        let mut is_p = vec![false; self.n];
        for &p in &self.pivots {
            is_p[p] = true;
        }
        (0..self.n).filter(|&i| !is_p[i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> F2Matrix {
        let rows: Vec<Vec<bool>> = (0..r)
            .map(|_| (0..c).map(|_| rng.gen_bool(0.5)).collect())
            .collect();
        let mut m = F2Matrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        m
    }

    // Plain Gaussian elimination on Vec<Vec<u8>>, no packing.
    fn naive_rank(m: &F2Matrix) -> usize {
        let mut a: Vec<Vec<u8>> = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j) as u8).collect())
            .collect();
        let mut rank = 0;
        for c in 0..m.cols() {
            if let Some(p) = (rank..a.len()).find(|&i| a[i][c] == 1) {
                a.swap(rank, p);
                for i in 0..a.len() {
                    if i != rank && a[i][c] == 1 {
                        for k in 0..m.cols() {
                            a[i][k] ^= a[rank][k];
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    fn all_vectors(n: usize) -> impl Iterator<Item = F2Vector> {
        (0u64..1 << n).map(move |x| F2Vector::from_indices(n, (0..n).filter(|&i| x >> i & 1 == 1)))
    }

    #[test]
    fn identity_and_zero() {
        let r = F2Matrix::identity(3).rref();
        assert_eq!((r.rank, r.pivot_cols.clone()), (3, vec![0, 1, 2]));
        let z = F2Matrix::zeros(2, 5).rref();
        assert_eq!((z.rank, z.pivot_cols.len()), (0, 0));
        assert!(F2Matrix::identity(4).kernel_basis().is_empty());
        assert_eq!(F2Matrix::zeros(3, 4).kernel_basis().len(), 4);
        let e = F2Matrix::zeros(0, 0);
        assert_eq!(e.rref().rank, 0);
        assert!(e.kernel_basis().is_empty());
        assert_eq!(F2Matrix::zeros(0, 3).kernel_basis().len(), 3);
    }

    #[test]
    fn rank_matches_naive_on_random_20x20() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let m = random_matrix(&mut rng, 20, 20);
            assert_eq!(m.rank(), naive_rank(&m));
        }
    }

    #[test]
    fn kernel_matches_enumeration_12x16() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..4 {
            let m = random_matrix(&mut rng, 12, 16);
            let kb = m.kernel_basis();
            let mut span = Echelon::new(16, kb.len());
            for v in &kb {
                assert!(m.mul_vec(v).is_zero());
                assert!(span.insert(v));
            }
            let brute: Vec<F2Vector> = all_vectors(16).filter(|v| m.mul_vec(v).is_zero()).collect();
            assert_eq!(brute.len(), 1 << kb.len());
            assert!(brute.iter().all(|v| span.contains(v)));
        }
    }

    #[test]
    fn solve_matches_enumeration_10x10() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 10, 10);
            let b = F2Vector::from_bits(&(0..10).map(|_| rng.gen_bool(0.5)).collect::<Vec<_>>());
            let exists = all_vectors(10).any(|x| m.mul_vec(&x) == b);
            match m.solve(&b).unwrap() {
                Some(x) => assert_eq!(m.mul_vec(&x), b),
                None => assert!(!exists),
            }
        }
        let b = F2Vector::unit(4, 2);
        assert_eq!(F2Matrix::identity(4).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(F2Matrix::zeros(4, 4).solve(&b).unwrap(), None);
        assert!(F2Matrix::zeros(3, 4).solve(&b).is_err());
    }

    #[test]
    fn wide_matrices_cross_word_boundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_matrix(&mut rng, 70, 150);
        assert_eq!(m.rank(), naive_rank(&m));
        for v in m.kernel_basis() {
            assert!(m.mul_vec(&v).is_zero());
        }
        let t = m.transpose();
        assert_eq!(t.transpose(), m);
        let p = m.mul(&t);
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(p.get(i, j), m.row(i).dot(&m.row(j)));
            }
        }
    }

    #[test]
    fn echelon_coordinates() {
        let vs = [
            F2Vector::from_bits(&[true, true, false]),
            F2Vector::from_bits(&[false, true, true]),
        ];
        let mut e = Echelon::new(3, 3);
        assert!(e.insert(&vs[0]));
        assert!(e.insert(&vs[1]));
        assert!(!e.insert(&F2Vector::from_bits(&[true, false, true])));
        let c = e
            .coords(&F2Vector::from_bits(&[true, false, true]))
            .unwrap();
        assert_eq!(c, F2Vector::from_bits(&[true, true, false]));
        assert!(e.coords(&F2Vector::unit(3, 0)).is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 64, rng_seed: proptest::test_runner::RngSeed::Fixed(2024), ..ProptestConfig::default() })]

        #[test]
        fn rref_idempotent_and_rank_transpose(r in 0usize..33, c in 0usize..33, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, r, c);
            let once = m.rref();
            let twice = once.reduced.rref();
            prop_assert_eq!(&twice.reduced, &once.reduced);
            prop_assert_eq!(m.rank(), m.transpose().rank());
            prop_assert_eq!(m.kernel_basis().len() + once.rank, c);
        }
    }
}
