use std::fmt;
use std::ops::{Index, IndexMut};

use super::{Fp, Subspace};
use crate::error::{Error, Result};

/// Dense row-major matrix over F_p.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(field: Fp, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Fp, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(field: Fp, cols: usize, rows: &[Vec<u64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend(r.iter().map(|&x| field.reduce(x)));
        }
        Ok(Matrix { field, rows: rows.len(), cols, data })
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(field: Fp, rows: usize, columns: &[Vec<u64>]) -> Result<Self> {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: c.len() });
            }
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = field.reduce(x);
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows).map(|i| self.field.dot(self.row(i), v)).collect()
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                let src = other.row(k);
                let dst = out.row_mut(i);
                f.axpy(dst, a, src);
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape());
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.field.add(a, b)).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape());
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.field.sub(a, b)).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u64) -> Matrix {
        let data = self.data.iter().map(|&a| self.field.mul(c, a)).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    /// Reduced row-echelon form. Pivots are the first nonzero entry scanning
    /// columns left to right, and every pivot row is normalized to a leading 1.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = self.field;
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(sel) = (r..a.rows).find(|&i| a[(i, c)] != 0) else {
                continue;
            };
            if sel != r {
                for j in 0..a.cols {
                    a.data.swap(sel * a.cols + j, r * a.cols + j);
                }
            }
            let inv = f.inv(a[(r, c)]).expect("pivot is nonzero");
            for x in a.row_mut(r) {
                *x = f.mul(*x, inv);
            }
            let pivot_row = a.row(r).to_vec();
            for i in 0..a.rows {
                if i != r {
                    let factor = a[(i, c)];
                    if factor != 0 {
                        f.axpy(a.row_mut(i), f.neg(factor), &pivot_row);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : Mx = 0}`, one vector per free column.
    pub fn kernel(&self) -> Subspace {
        let (red, pivots) = self.rref();
        kernel_from_rref(&red, &pivots)
    }

    /// Column space as a subspace of F_p^rows.
    pub fn image(&self) -> Subspace {
        Subspace::span(self.field, self.rows, &self.columns())
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(self.field, 0, 0));
        }
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            aug.row_mut(i)[..n].copy_from_slice(self.row(i));
            aug[(i, n + i)] = 1;
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            inv.row_mut(i).copy_from_slice(&red.row(i)[n..]);
        }
        Some(inv)
    }
}

fn kernel_from_rref(red: &Matrix, pivots: &[usize]) -> Subspace {
    let f = red.field;
    let n = red.cols;
    let mut is_pivot = vec![false; n];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0; n];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(red[(r, free)]);
        }
        basis.push(v);
    }
    Subspace::span(f, n, &basis)
}

/// Output of [`rref_kernel_solve`].
#[derive(Debug, Clone)]
pub struct LinearSolve {
    pub rref: Matrix,
    pub pivots: Vec<usize>,
    pub kernel: Subspace,
    /// One solution of `Mx = b` when `b` was given and the system is consistent.
    pub solution: Option<Vec<u64>>,
    /// Set when `b` was given and lies outside the column space.
    pub inconsistent: bool,
}

/// Row-reduce `m`, compute its kernel and, if `b` is given, one solution of `m x = b`.
pub fn rref_kernel_solve(m: &Matrix, b: Option<&[u64]>) -> Result<LinearSolve> {
    let (rref, pivots) = m.rref();
    let kernel = kernel_from_rref(&rref, &pivots);
    let mut solution = None;
    let mut inconsistent = false;
    if let Some(b) = b {
        if b.len() != m.rows {
            return Err(Error::DimensionMismatch { expected: m.rows, found: b.len() });
        }
        let f = m.field;
        // Augment and reduce; a pivot in the last column means no solution.
        let mut aug = Matrix::zeros(f, m.rows, m.cols + 1);
        for i in 0..m.rows {
            aug.row_mut(i)[..m.cols].copy_from_slice(m.row(i));
            aug[(i, m.cols)] = f.reduce(b[i]);
        }
        let (ared, apiv) = aug.rref();
        if apiv.last() == Some(&m.cols) {
            inconsistent = true;
        } else {
            let mut x = vec![0; m.cols];
            for (r, &pc) in apiv.iter().enumerate() {
                x[pc] = ared[(r, m.cols)];
            }
            solution = Some(x);
        }
    }
    Ok(LinearSolve { rref, pivots, kernel, solution, inconsistent })
}

impl Index<(usize, usize)> for Matrix {
    type Output = u64;
    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over F_{} [", self.rows, self.cols, self.field.p())?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f3() -> Fp {
        Fp::new(3).unwrap()
    }

    #[test]
    fn identity_system() {
        let m = Matrix::identity(f3(), 3);
        let s = rref_kernel_solve(&m, Some(&[1, 2, 0])).unwrap();
        assert_eq!(s.solution, Some(vec![1, 2, 0]));
        assert_eq!(s.kernel.dim(), 0);
        assert!(!s.inconsistent);
    }

    #[test]
    fn zero_system() {
        let m = Matrix::zeros(f3(), 2, 2);
        let s = rref_kernel_solve(&m, Some(&[0, 0])).unwrap();
        assert_eq!(s.kernel.dim(), 2);
        assert_eq!(s.solution, Some(vec![0, 0]));
    }

    #[test]
    fn kernel_of_small_matrix_matches_brute_force() {
        let m = Matrix::from_rows(f3(), 2, &[vec![1, 2], vec![2, 1]]).unwrap();
        let s = rref_kernel_solve(&m, None).unwrap();
        // brute force over all 9 vectors
        let brute: Vec<Vec<u64>> = (0..9u64)
            .map(|i| vec![i % 3, i / 3])
            .filter(|v| m.mul_vec(v).iter().all(|&x| x == 0))
            .collect();
        assert_eq!(brute.len(), 3);
        assert_eq!(s.kernel.dim(), 1);
        assert_eq!(s.kernel.basis(), &[vec![1, 1]]);
        for v in brute {
            assert!(s.kernel.contains(&v));
        }
    }

    #[test]
    fn inconsistent_system_is_flagged() {
        let m = Matrix::from_rows(f3(), 2, &[vec![1, 1], vec![2, 2]]).unwrap();
        let s = rref_kernel_solve(&m, Some(&[1, 0])).unwrap();
        assert!(s.inconsistent);
        assert!(s.solution.is_none());
        assert!(rref_kernel_solve(&m, Some(&[1])).is_err());
    }

    fn arb_matrix() -> impl Strategy<Value = (u64, usize, usize, Vec<u64>)> {
        (prop_oneof![Just(2u64), Just(3), Just(5), Just(7)], 1usize..6, 1usize..6).prop_flat_map(|(p, r, c)| {
            (Just(p), Just(r), Just(c), proptest::collection::vec(0..p, r * c))
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent_and_kernel_is_annihilated((p, _r, c, data) in arb_matrix()) {
            let f = Fp::new(p).unwrap();
            let rows: Vec<Vec<u64>> = data.chunks(c).map(|x| x.to_vec()).collect();
            let m = Matrix::from_rows(f, c, &rows).unwrap();
            let (red, piv) = m.rref();
            let (red2, piv2) = red.rref();
            prop_assert_eq!(&red, &red2);
            prop_assert_eq!(&piv, &piv2);
            let k = m.kernel();
            prop_assert_eq!(k.dim() + piv.len(), c);
            for v in k.basis() {
                prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn solutions_satisfy_the_system((p, _r, c, data) in arb_matrix(), seed in 0u64..1000) {
            let f = Fp::new(p).unwrap();
            let rows: Vec<Vec<u64>> = data.chunks(c).map(|x| x.to_vec()).collect();
            let m = Matrix::from_rows(f, c, &rows).unwrap();
            let x: Vec<u64> = (0..c as u64).map(|i| (seed * 31 + i * 7) % p).collect();
            let b = m.mul_vec(&x);
            let s = rref_kernel_solve(&m, Some(&b)).unwrap();
            let sol = s.solution.expect("b is in the column space");
            prop_assert_eq!(m.mul_vec(&sol), b);
        }
    }
}
