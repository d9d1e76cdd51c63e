//! Dense matrices over a prime field: rank, right kernel, inverse, random
//! invertible draws. Gaussian elimination picks the first nonzero pivot;
//! over an exact field there is no conditioning to worry about.

use crate::field::Fp;
use crate::rng::SeedStream;

/// Row-major matrix of residues mod the ambient field's prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from row vectors; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(cols: Vec<Vec<u64>>) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// `[self | other]`, matched row counts.
    pub fn hconcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hconcat row mismatch");
        let mut m = Matrix::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    pub fn mul(&self, rhs: &Matrix, fp: &Fp) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Matrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = fp.add(out.get(i, j), fp.mul(a, rhs.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64], fp: &Fp) -> Vec<u64> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &x)| fp.add(acc, fp.mul(a, x)))
            })
            .collect()
    }

    /// `diag(d) * self`: scale row `i` by `d[i]`.
    pub fn scale_rows(&self, d: &[u64], fp: &Fp) -> Matrix {
        assert_eq!(self.rows, d.len(), "diagonal length mismatch");
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, fp.mul(d[i], self.get(i, j)));
            }
        }
        out
    }

    /// Row echelon reduction in place; returns the pivot columns.
    fn echelonize(&mut self, fp: &Fp) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for j in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(src) = (r..self.rows).find(|&i| self.get(i, j) != 0) else {
                continue;
            };
            if src != r {
                for k in 0..self.cols {
                    self.data.swap(src * self.cols + k, r * self.cols + k);
                }
            }
            let inv = fp.inv(self.get(r, j)).expect("pivot is nonzero");
            for k in j..self.cols {
                self.set(r, k, fp.mul(inv, self.get(r, k)));
            }
            for i in 0..self.rows {
                if i != r && self.get(i, j) != 0 {
                    let f = self.get(i, j);
                    for k in j..self.cols {
                        let v = fp.sub(self.get(i, k), fp.mul(f, self.get(r, k)));
                        self.set(i, k, v);
                    }
                }
            }
            pivots.push(j);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, fp: &Fp) -> usize {
        self.clone().echelonize(fp).len()
    }

    /// Columns spanning the right kernel `{ x : M x = 0 }`.
    ///
    /// The result has `cols() - rank()` independent columns; free variables
    /// are set to 1 one at a time and the pivot variables back-substituted.
    pub fn kernel_basis(&self, fp: &Fp) -> Matrix {
        let mut red = self.clone();
        let pivots = red.echelonize(fp);
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        let mut basis = Matrix::zero(self.cols, free.len());
        for (k, &fj) in free.iter().enumerate() {
            basis.set(fj, k, 1);
            for (r, &pj) in pivots.iter().enumerate() {
                // row r reads x_pj + sum(coef * x_free) = 0
                basis.set(pj, k, fp.neg(red.get(r, fj)));
            }
        }
        basis
    }

    /// Exact inverse, or `None` when singular (requires a square matrix).
    pub fn inverse(&self, fp: &Fp) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let mut aug = self.hconcat(&Matrix::identity(self.rows));
        let pivots = aug.echelonize(fp);
        if pivots.len() < self.rows {
            return None;
        }
        let mut inv = Matrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                inv.set(i, j, aug.get(i, self.cols + j));
            }
        }
        Some(inv)
    }

    pub fn random(rows: usize, cols: usize, fp: &Fp, stream: &mut SeedStream) -> Matrix {
        let data = (0..rows * cols).map(|_| fp.random_elem(stream)).collect();
        Matrix { rows, cols, data }
    }

    /// Random element of `GL(size)`: resampled until the rank is full, which
    /// over a 62-bit prime almost never takes a second draw.
    pub fn random_invertible(size: usize, fp: &Fp, stream: &mut SeedStream) -> Matrix {
        assert!(size >= 1);
        loop {
            let m = Self::random(size, size, fp, stream);
            if m.rank(fp) == size {
                return m;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::random_prime;
    use proptest::prelude::*;

    fn f7() -> Fp {
        Fp::new(7)
    }

    #[test]
    fn rank_basics() {
        let fp = f7();
        assert_eq!(Matrix::identity(3).rank(&fp), 3);
        assert_eq!(Matrix::zero(2, 2).rank(&fp), 0);
        let m = Matrix::from_rows(vec![vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(&fp), 1);
    }

    #[test]
    fn kernel_of_sum_constraint() {
        let fp = f7();
        let m = Matrix::from_rows(vec![vec![1, 1]]);
        let k = m.kernel_basis(&fp);
        assert_eq!(k.cols(), 1);
        // spanned by (1, p-1): check proportionality and membership
        assert_eq!(m.mul(&k, &fp), Matrix::zero(1, 1));
        let (a, b) = (k.get(0, 0), k.get(1, 0));
        assert_eq!(fp.mul(a, fp.modulus() - 1), b);
    }

    #[test]
    fn kernel_is_empty_for_identity() {
        let fp = f7();
        assert_eq!(Matrix::identity(2).kernel_basis(&fp).cols(), 0);
    }

    #[test]
    fn kernel_of_proportional_rows() {
        let fp = f7();
        let m = Matrix::from_rows(vec![vec![1, 2], vec![2, 4]]);
        let k = m.kernel_basis(&fp);
        assert_eq!(k.cols(), 1);
        assert_eq!(m.mul(&k, &fp), Matrix::zero(2, 1));
    }

    #[test]
    fn random_invertible_roundtrip() {
        let mut s = SeedStream::root(5);
        let p = random_prime(62, &mut s);
        let fp = Fp::new(p);
        for size in [1usize, 2, 4, 7] {
            let g = Matrix::random_invertible(size, &fp, &mut s);
            assert_eq!(g.rank(&fp), size);
            let gi = g.inverse(&fp).unwrap();
            assert_eq!(g.mul(&gi, &fp), Matrix::identity(size));
        }
    }

    #[test]
    fn random_invertible_deterministic_and_scalar_case() {
        let fp = Fp::new(101);
        let a = Matrix::random_invertible(3, &fp, &mut SeedStream::root(9));
        let b = Matrix::random_invertible(3, &fp, &mut SeedStream::root(9));
        assert_eq!(a, b);
        let one = Matrix::random_invertible(1, &fp, &mut SeedStream::root(0));
        assert_ne!(one.get(0, 0), 0);
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank(seed in 0u64..200, r in 1usize..8, c in 1usize..8) {
            let fp = Fp::new(10007);
            let m = Matrix::random(r, c, &fp, &mut SeedStream::root(seed));
            prop_assert_eq!(m.rank(&fp), m.transpose().rank(&fp));
        }

        #[test]
        fn rank_nullity(seed in 0u64..200, r in 1usize..8, c in 1usize..8) {
            let fp = Fp::new(10007);
            let m = Matrix::random(r, c, &fp, &mut SeedStream::root(seed));
            let k = m.kernel_basis(&fp);
            prop_assert_eq!(m.rank(&fp) + k.cols(), m.cols());
            prop_assert_eq!(m.mul(&k, &fp), Matrix::zero(r, k.cols()));
        }
    }
}
