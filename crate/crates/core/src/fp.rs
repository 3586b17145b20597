//! Dense exact linear algebra over prime fields `F_p`.
//!
//! Matrices are row-major with entries reduced to `[0, p)`. Pivoting is
//! deterministic (first nonzero entry, scanning top to bottom), so every
//! downstream computation is reproducible bit-for-bit.

use crate::error::{Error, Result};

pub const SUPPORTED_PRIMES: [u64; 4] = [2, 3, 5, 7];

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A residue in `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FpScalar {
    pub value: u64,
    pub modulus: u64,
}

impl FpScalar {
    pub fn new(value: i64, p: u64) -> Self {
        debug_assert!(is_prime(p));
        FpScalar {
            value: value.rem_euclid(p as i64) as u64,
            modulus: p,
        }
    }

    pub fn inv(self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::NotAUnit("0".into()));
        }
        Ok(FpScalar {
            value: pow_mod(self.value, self.modulus - 2, self.modulus),
            modulus: self.modulus,
        })
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Dense matrix over `F_p`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
    modulus: u64,
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize, p: u64) -> Self {
        assert!(is_prime(p), "modulus {p} is not prime");
        FpMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
            modulus: p,
        }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let mut m = Self::zeros(n, n, p);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(data: &[Vec<i64>], p: u64) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows, cols, p);
        for (i, row) in data.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.entries[i * cols + j] = v.rem_euclid(p as i64) as u64;
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<u64>], nrows: usize, p: u64) -> Self {
        let mut m = Self::zeros(nrows, cols.len(), p);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), nrows);
            for (i, &v) in col.iter().enumerate() {
                m.entries[i * m.cols + j] = v % p;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.entries[i * self.cols + j] = v % self.modulus;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: u64) {
        let e = &mut self.entries[i * self.cols + j];
        *e = (*e + v % self.modulus) % self.modulus;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.cols, self.rows, self.modulus);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn hstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.modulus, other.modulus);
        let mut m = FpMatrix::zeros(self.rows, self.cols + other.cols, self.modulus);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.entries[i * m.cols + j] = self.get(i, j);
            }
            for j in 0..other.cols {
                m.entries[i * m.cols + self.cols + j] = other.get(i, j);
            }
        }
        m
    }

    pub fn scale(&self, c: u64) -> FpMatrix {
        let c = c % self.modulus;
        let mut m = self.clone();
        for e in &mut m.entries {
            *e = *e * c % self.modulus;
        }
        m
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        assert_eq!(self.modulus, other.modulus);
        let mut m = self.clone();
        for (e, o) in m.entries.iter_mut().zip(&other.entries) {
            *e = (*e + *o) % self.modulus;
        }
        m
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        self.add(&other.scale(self.modulus - 1))
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        assert_eq!(self.modulus, other.modulus);
        let p = self.modulus;
        let mut m = FpMatrix::zeros(self.rows, other.cols, p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let out = &mut m.entries[i * other.cols..(i + 1) * other.cols];
                let rhs = &other.entries[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out.iter_mut().zip(rhs) {
                    *o = (*o + a * b) % p;
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        let p = self.modulus;
        (0..self.rows)
            .map(|i| {
                let row = &self.entries[i * self.cols..(i + 1) * self.cols];
                row.iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a % p * (b % p)) % p)
            })
            .collect()
    }

    /// Reduced row-echelon form with the pivot columns, first-nonzero pivoting.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let p = self.modulus;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.entries.swap(r * m.cols + j, pr * m.cols + j);
                }
            }
            let inv = inv_mod(m.get(r, c), p);
            for j in c..m.cols {
                let e = &mut m.entries[r * m.cols + j];
                *e = *e * inv % p;
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f == 0 {
                    continue;
                }
                let neg = p - f;
                for j in c..m.cols {
                    let v = m.entries[r * m.cols + j];
                    if v != 0 {
                        let e = &mut m.entries[i * m.cols + j];
                        *e = (*e + neg * v) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns form a basis of the right null space: `self · v = 0` for each.
    pub fn kernel_basis(&self) -> FpMatrix {
        let p = self.modulus;
        let (r, pivots) = self.rref();
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; self.cols];
            for &c in &pivots {
                s[c] = true;
            }
            s
        };
        let free: Vec<usize> = (0..self.cols).filter(|&c| !pivot_set[c]).collect();
        let mut basis = FpMatrix::zeros(self.cols, free.len(), p);
        for (k, &fc) in free.iter().enumerate() {
            basis.set(fc, k, 1);
            for (pi, &pc) in pivots.iter().enumerate() {
                let v = r.get(pi, fc);
                if v != 0 {
                    basis.set(pc, k, p - v);
                }
            }
        }
        basis
    }

    /// Solves `self · x = b`; deterministic (free variables set to 0).
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let p = self.modulus;
        let mut bm = FpMatrix::zeros(self.rows, 1, p);
        for (i, &v) in b.iter().enumerate() {
            bm.set(i, 0, v);
        }
        let aug = self.hstack(&bm);
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (pi, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(pi, self.cols);
        }
        Some(x)
    }

    /// dim((A+B)/B) computed as rank[A|B] − rank[B], for column spans
    /// in the same ambient space.
    pub fn subquotient_dim(span_a: &FpMatrix, span_b: &FpMatrix) -> usize {
        if span_a.cols == 0 {
            return 0;
        }
        if span_b.cols == 0 {
            return span_a.rank();
        }
        assert_eq!(span_a.rows, span_b.rows, "ambient space mismatch");
        span_a.hstack(span_b).rank() - span_b.rank()
    }

    /// Does the column span of `v` lie inside the column span of `span`?
    pub fn contains_cols(span: &FpMatrix, v: &FpMatrix) -> bool {
        FpMatrix::subquotient_dim(v, span) == 0
    }
}

/// Incrementally maintained row-echelon span of a set of vectors, for
/// one-pass greedy subquotient computations on large blocks.
#[derive(Debug, Clone)]
pub struct EchelonSpan {
    modulus: u64,
    ambient: usize,
    /// echelon rows, each normalized so its pivot entry is 1
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl EchelonSpan {
    pub fn new(ambient: usize, modulus: u64) -> Self {
        EchelonSpan {
            modulus,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the span; if a nonzero residue remains, absorb it
    /// and return `true` (the vector enlarged the span).
    pub fn insert(&mut self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let p = self.modulus;
        let mut w: Vec<u64> = v.iter().map(|&x| x % p).collect();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = w[piv];
            if c != 0 {
                for (wx, &rx) in w.iter_mut().zip(row) {
                    if rx != 0 {
                        *wx = (*wx + (p - c) * rx) % p;
                    }
                }
            }
        }
        match w.iter().position(|&x| x != 0) {
            None => false,
            Some(piv) => {
                let inv = pow_mod(w[piv], p - 2, p);
                for wx in w.iter_mut() {
                    *wx = *wx * inv % p;
                }
                self.rows.push(w);
                self.pivots.push(piv);
                true
            }
        }
    }

    pub fn insert_columns(&mut self, m: &FpMatrix) {
        for j in 0..m.cols() {
            self.insert(&m.column(j));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rref_identity() {
        let id = FpMatrix::identity(3, 3);
        let (r, pivots) = id.rref();
        assert_eq!(r, id);
        assert_eq!(pivots, vec![0, 1, 2]);
    }

    #[test]
    fn rref_zero() {
        let z = FpMatrix::zeros(2, 2, 5);
        let (r, pivots) = z.rref();
        assert_eq!(r, z);
        assert!(pivots.is_empty());
    }

    #[test]
    fn rref_rank_one() {
        // [[1,2],[2,4]] over F_5 -> [[1,2],[0,0]], pivots [0]
        let m = FpMatrix::from_rows(&[vec![1, 2], vec![2, 4]], 5);
        let (r, pivots) = m.rref();
        assert_eq!(r, FpMatrix::from_rows(&[vec![1, 2], vec![0, 0]], 5));
        assert_eq!(pivots, vec![0]);
    }

    #[test]
    fn kernel_of_row() {
        // [[1,1]] over F_2: kernel spanned by (1,1), checked by enumerating F_2^2
        let m = FpMatrix::from_rows(&[vec![1, 1]], 2);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0), vec![1, 1]);
        let mut brute = Vec::new();
        for a in 0..2u64 {
            for b in 0..2u64 {
                if (a + b) % 2 == 0 && (a, b) != (0, 0) {
                    brute.push(vec![a, b]);
                }
            }
        }
        assert_eq!(brute, vec![vec![1, 1]]);
    }

    #[test]
    fn kernel_extremes() {
        let inv = FpMatrix::from_rows(&[vec![1, 1], vec![0, 1]], 3);
        assert_eq!(inv.kernel_basis().cols(), 0);
        let z = FpMatrix::zeros(3, 3, 7);
        assert_eq!(z.kernel_basis().cols(), 3);
    }

    #[test]
    fn subquotient_examples() {
        let id2 = FpMatrix::identity(2, 3);
        let zero = FpMatrix::zeros(2, 0, 3);
        assert_eq!(FpMatrix::subquotient_dim(&id2, &zero), 2);
        assert_eq!(FpMatrix::subquotient_dim(&id2, &id2), 0);
        let a = FpMatrix::from_rows(&[vec![1], vec![0]], 2);
        let b = FpMatrix::from_rows(&[vec![0], vec![1]], 2);
        assert_eq!(FpMatrix::subquotient_dim(&a, &b), 1);
    }

    #[test]
    fn solve_roundtrip() {
        let m = FpMatrix::from_rows(&[vec![1, 2], vec![3, 4]], 5);
        let x = m.solve(&[1, 2]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![1, 2]);
        let sing = FpMatrix::from_rows(&[vec![1, 1], vec![1, 1]], 5);
        assert!(sing.solve(&[0, 1]).is_none());
    }

    fn arb_matrix() -> impl Strategy<Value = FpMatrix> {
        (prop::sample::select(vec![2u64, 3, 5, 7]), 0usize..6, 0usize..6).prop_flat_map(
            |(p, r, c)| {
                prop::collection::vec(0i64..7, r * c)
                    .prop_map(move |vals| {
                        let rows: Vec<Vec<i64>> =
                            vals.chunks(c.max(1)).map(|ch| ch.to_vec()).collect();
                        let rows = if c == 0 { vec![Vec::new(); r] } else { rows };
                        FpMatrix::from_rows(&rows, p)
                    })
            },
        )
    }

    proptest! {
        #[test]
        fn rref_idempotent(m in arb_matrix()) {
            let (r, _) = m.rref();
            let (rr, _) = r.rref();
            prop_assert_eq!(r, rr);
        }

        #[test]
        fn rank_nullity(m in arb_matrix()) {
            prop_assert_eq!(m.rank() + m.kernel_basis().cols(), m.cols());
        }

        #[test]
        fn kernel_annihilated(m in arb_matrix()) {
            let k = m.kernel_basis();
            if m.cols() > 0 && k.cols() > 0 {
                prop_assert!(m.mul(&k).is_zero());
            }
        }
    }
}
