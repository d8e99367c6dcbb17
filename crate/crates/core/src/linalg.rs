//! Small dense linear algebra: matrices, Gram–Schmidt, and Jacobi
//! eigendecomposition.
//!
//! Everything here targets the matrix sizes this crate actually sees
//! (latent dimension in the hundreds, codebook sizes in the tens), so the
//! classic O(n³) algorithms are the right tool.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Build a matrix whose columns are the given equal-length vectors.
    pub fn from_columns(columns: &[Vec<S>]) -> Result<Self> {
        let cols = columns.len();
        if cols == 0 {
            return Err(Error::Validation("matrix needs at least one column".into()));
        }
        let rows = columns[0].len();
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Validation("columns have unequal lengths".into()));
        }
        Ok(Self::from_fn(rows, cols, |i, j| columns[j][i]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// y = A·x
    pub fn matvec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let mut acc = S::zero();
                for (a, b) in row.iter().zip(x) {
                    acc += *a * *b;
                }
                acc
            })
            .collect()
    }

    /// y = Aᵀ·x
    pub fn matvec_transpose(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.rows, "matvec_transpose dimension mismatch");
        let mut out = vec![S::zero(); self.cols];
        for i in 0..self.rows {
            let xi = x[i];
            let row = self.row(i);
            for (o, a) in out.iter_mut().zip(row) {
                *o += *a * xi;
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == S::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// A += u·vᵀ
    pub fn add_outer_product(&mut self, u: &[S], v: &[S]) {
        assert_eq!(u.len(), self.rows);
        assert_eq!(v.len(), self.cols);
        for i in 0..self.rows {
            let ui = u[i];
            let base = i * self.cols;
            for j in 0..self.cols {
                self.data[base + j] += ui * v[j];
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += *b;
        }
    }

    /// AᵀA (the Gram matrix of the columns).
    pub fn gram(&self) -> Self {
        let mut g = Self::zeros(self.cols, self.cols);
        for j in 0..self.cols {
            for k in j..self.cols {
                let mut acc = S::zero();
                for i in 0..self.rows {
                    acc += self.get(i, j) * self.get(i, k);
                }
                g.set(j, k, acc);
                g.set(k, j, acc);
            }
        }
        g
    }

    pub fn max_abs(&self) -> S {
        self.data.iter().fold(S::zero(), |m, &v| m.max(v.abs()))
    }

    /// max |A_ij − A_ji|; zero for exactly symmetric matrices.
    pub fn symmetry_defect(&self) -> S {
        let mut worst = S::zero();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols.min(self.rows) {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }
}

/// In-place modified Gram–Schmidt on the columns, with one
/// re-orthogonalization pass. Columns must be linearly independent.
pub fn orthonormalize_columns<S: Scalar>(m: &mut Matrix<S>) -> Result<()> {
    let (rows, cols) = (m.rows, m.cols);
    if cols > rows {
        return Err(Error::Validation(format!(
            "cannot orthonormalize {cols} columns in {rows} dimensions"
        )));
    }
    for j in 0..cols {
        let mut v = m.column(j);
        for _pass in 0..2 {
            for k in 0..j {
                let q = m.column(k);
                let mut proj = S::zero();
                for (a, b) in q.iter().zip(&v) {
                    proj += *a * *b;
                }
                for (vi, qi) in v.iter_mut().zip(&q) {
                    *vi -= proj * *qi;
                }
            }
        }
        let norm = norm2(&v).sqrt();
        if norm <= S::epsilon() * S::from_usize_lossy(rows) {
            return Err(Error::Validation(format!(
                "column {j} is linearly dependent on earlier columns"
            )));
        }
        for (i, vi) in v.iter().enumerate() {
            m.set(i, j, *vi / norm);
        }
    }
    Ok(())
}

/// Σ xᵢ² in index order.
pub fn norm2<S: Scalar>(x: &[S]) -> S {
    let mut acc = S::zero();
    for &v in x {
        acc += v * v;
    }
    acc
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        acc += *x * *y;
    }
    acc
}

/// Σ xᵢ² summed in ascending order of magnitude.
///
/// The canonical order makes the result invariant under coordinate
/// permutation and sign flips, so isometry diagnostics can report an exact
/// zero for signed-permutation projections.
pub fn canonical_norm2<S: Scalar>(x: &[S]) -> S {
    let mut squares: Vec<S> = x.iter().map(|&v| v * v).collect();
    squares.sort_by(|a, b| a.partial_cmp(b).expect("finite squares"));
    let mut acc = S::zero();
    for v in squares {
        acc += v;
    }
    acc
}

/// Eigendecomposition of a symmetric matrix, eigenvalues descending.
#[derive(Clone, Debug)]
pub struct SymEigen<S> {
    pub values: Vec<S>,
    /// Column j is the eigenvector for `values[j]`.
    pub vectors: Matrix<S>,
}

/// Cyclic Jacobi eigendecomposition for symmetric matrices.
///
/// Runs sweeps of plane rotations until the off-diagonal mass is below
/// machine-level tolerance. Deterministic and accurate to ~ε‖A‖ for the
/// small matrices used here.
pub fn jacobi_eigen<S: Scalar>(a: &Matrix<S>) -> Result<SymEigen<S>> {
    let n = a.rows;
    if n != a.cols {
        return Err(Error::Validation(
            "eigendecomposition needs a square matrix".into(),
        ));
    }
    let scale = a.max_abs();
    let sym_tol = S::epsilon().sqrt() * scale.max(S::one());
    if a.symmetry_defect() > sym_tol {
        return Err(Error::Validation("matrix is not symmetric".into()));
    }

    let mut m = a.clone();
    // Symmetrize exactly so rotations preserve symmetry bit-for-bit.
    for i in 0..n {
        for j in (i + 1)..n {
            let v = (m.get(i, j) + m.get(j, i)) / S::from_usize_lossy(2);
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    let mut vecs = Matrix::identity(n);
    let tol = S::epsilon() * scale.max(S::one()) * S::from_usize_lossy(n);
    let max_sweeps = 64;

    for _sweep in 0..max_sweeps {
        let mut off = S::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off = off.max(m.get(i, j).abs());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                if apq.abs() <= tol {
                    continue;
                }
                let app = m.get(p, p);
                let aqq = m.get(q, q);
                let theta = (aqq - app) / (S::from_usize_lossy(2) * apq);
                let t = {
                    let sign = if theta >= S::zero() {
                        S::one()
                    } else {
                        -S::one()
                    };
                    sign / (theta.abs() + (theta * theta + S::one()).sqrt())
                };
                let c = S::one() / (t * t + S::one()).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = m.get(k, p);
                    let akq = m.get(k, q);
                    m.set(k, p, c * akp - s * akq);
                    m.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = m.get(p, k);
                    let aqk = m.get(q, k);
                    m.set(p, k, c * apk - s * aqk);
                    m.set(q, k, s * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = vecs.get(k, p);
                    let vkq = vecs.get(k, q);
                    vecs.set(k, p, c * vkp - s * vkq);
                    vecs.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<S> = (0..n).map(|i| m.get(i, i)).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).expect("finite eigenvalues"));

    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| vecs.get(i, order[j]));
    Ok(SymEigen { values, vectors })
}

/// Singular values of a (rows ≥ cols) matrix, descending.
///
/// Computed from the Gram-matrix eigenvalues; plenty of accuracy for the
/// condition numbers reported here (κ ≲ 1e6).
pub fn singular_values<S: Scalar>(a: &Matrix<S>) -> Result<Vec<S>> {
    let eig = jacobi_eigen(&a.gram())?;
    Ok(eig
        .values
        .iter()
        .map(|&l| l.max(S::zero()).sqrt())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_matvec_is_exact() {
        let m = Matrix::<f64>::identity(4);
        let x = vec![1.5, -2.25, 0.0, 7.0];
        assert_eq!(m.matvec(&x), x);
    }

    #[test]
    fn gram_of_orthonormal_columns_is_identity() {
        let m = Matrix::<f64>::from_columns(&[vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        let g = m.gram();
        assert_eq!(g.get(0, 0), 1.0);
        assert_eq!(g.get(1, 1), 1.0);
        assert_eq!(g.get(0, 1), 0.0);
    }

    #[test]
    fn jacobi_recovers_known_spectrum() {
        // [[2,1],[1,2]] has eigenvalues 3 and 1 with eigenvectors (1,1)/√2, (1,-1)/√2.
        let mut m = Matrix::<f64>::zeros(2, 2);
        m.set(0, 0, 2.0);
        m.set(0, 1, 1.0);
        m.set(1, 0, 1.0);
        m.set(1, 1, 2.0);
        let e = jacobi_eigen(&m).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-12);
        assert!((e.values[1] - 1.0).abs() < 1e-12);
        let v0 = e.vectors.column(0);
        assert!((v0[0].abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((v0[0] - v0[1]).abs() < 1e-12);
    }

    #[test]
    fn jacobi_complete_graph_spectrum() {
        // K4 adjacency: eigenvalues {3, -1, -1, -1}.
        let m = Matrix::<f64>::from_fn(4, 4, |i, j| if i == j { 0.0 } else { 1.0 });
        let e = jacobi_eigen(&m).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-12);
        for k in 1..4 {
            assert!((e.values[k] + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn jacobi_rejects_nonsymmetric() {
        let mut m = Matrix::<f64>::zeros(2, 2);
        m.set(0, 1, 1.0);
        assert!(jacobi_eigen(&m).is_err());
    }

    #[test]
    fn singular_values_of_scaled_identity() {
        let mut m = Matrix::<f64>::identity(3);
        m.set(1, 1, 2.0);
        let sv = singular_values(&m).unwrap();
        assert!((sv[0] - 2.0).abs() < 1e-12);
        assert!((sv[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthonormalize_produces_orthonormal_columns() {
        let mut m = Matrix::<f64>::from_columns(&[
            vec![1.0, 1.0, 0.0],
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
        ])
        .unwrap();
        orthonormalize_columns(&mut m).unwrap();
        let g = m.gram();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g.get(i, j) - want).abs() < 1e-12, "gram({i},{j})");
            }
        }
    }

    #[test]
    fn orthonormalize_rejects_dependent_columns() {
        let mut m = Matrix::<f64>::from_columns(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(orthonormalize_columns(&mut m).is_err());
    }

    #[test]
    fn canonical_norm_is_permutation_and_sign_invariant() {
        let x = vec![0.3, -1.7, 2.9, 0.11, -0.003];
        let y = vec![2.9, 0.003, -0.3, 1.7, 0.11];
        assert_eq!(canonical_norm2(&x), canonical_norm2(&y));
    }
}
