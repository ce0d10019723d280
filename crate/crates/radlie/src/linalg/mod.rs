//! Dense complex linear algebra at desk scale.
//!
//! Everything here is deterministic: no pivoting heuristic, iteration order
//! or summation order depends on the platform, so identical inputs give
//! bit-identical outputs everywhere.

mod eig;
mod lu;
mod svd;

pub use eig::eigenvalues;
pub use lu::{invert, LuDecomposition};
pub use svd::{nullspace, nullspace_scaled, orthonormal_columns, rank, span_basis, span_basis_floored, Svd};

use num_complex::Complex64;

use crate::{Error, Result, TolerancePolicy};

/// Ambient sizes are capped at desk scale; contour and resolvent work stays
/// cheap and the QR iteration stays comfortably inside f64.
pub const MAX_AMBIENT: usize = 64;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Matrix unit E_ij (1 in row i, column j, zero elsewhere).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = Complex64::new(1.0, 0.0);
        m
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::Dimension("matrix needs at least one row".into()));
        }
        let c = rows[0].len();
        if c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged or empty matrix rows".into()));
        }
        let data: Vec<Complex64> = rows.iter().flatten().copied().collect();
        let m = Self { rows: r, cols: c, data };
        m.check_finite()?;
        Ok(m)
    }

    /// Real entries shorthand, mostly for tests and fixtures.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let converted: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&converted).expect("from_real: valid shape")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::Precondition("matrix has non-finite entries".into()))
        }
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::Dimension(format!(
                "expected square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius inner product `tr(self^H other)`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        debug_assert!(self.same_shape(other));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        debug_assert!(self.same_shape(other));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.same_shape(other) && self.distance(other) <= tol
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.norm() <= tol
    }

    /// Commutator `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self * other - other * self
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Row-major flattening (the `vec` map used for Sylvester operators).
    pub fn to_vec(&self) -> Vec<Complex64> {
        self.data.clone()
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(rows * cols, data.len(), "from_vec shape mismatch");
        Self { rows, cols, data }
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Matrix power by repeated multiplication; exponents stay <= 64 here.
    pub fn pow(&self, k: usize) -> Self {
        let n = self.rows;
        assert!(self.is_square());
        let mut acc = Self::identity(n);
        for _ in 0..k {
            acc = acc.matmul(self);
        }
        acc
    }

    /// One column as a plain vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Complex64>]) -> Self {
        assert!(!cols.is_empty());
        let rows = cols[0].len();
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i])
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

macro_rules! elementwise {
    ($trait:ident, $method:ident, $op:tt) => {
        impl std::ops::$trait for &Matrix {
            type Output = Matrix;
            fn $method(self, rhs: &Matrix) -> Matrix {
                assert!(self.same_shape(rhs), "shape mismatch in elementwise op");
                Matrix {
                    rows: self.rows,
                    cols: self.cols,
                    data: self
                        .data
                        .iter()
                        .zip(&rhs.data)
                        .map(|(a, b)| a $op b)
                        .collect(),
                }
            }
        }
        impl std::ops::$trait for Matrix {
            type Output = Matrix;
            fn $method(self, rhs: Matrix) -> Matrix {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&Matrix> for Matrix {
            type Output = Matrix;
            fn $method(self, rhs: &Matrix) -> Matrix {
                (&self).$method(rhs)
            }
        }
        impl std::ops::$trait<Matrix> for &Matrix {
            type Output = Matrix;
            fn $method(self, rhs: Matrix) -> Matrix {
                self.$method(&rhs)
            }
        }
    };
}

elementwise!(Add, add, +);
elementwise!(Sub, sub, -);

impl std::ops::Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}
impl std::ops::Mul for Matrix {
    type Output = Matrix;
    fn mul(self, rhs: Matrix) -> Matrix {
        self.matmul(&rhs)
    }
}
impl std::ops::Mul<&Matrix> for Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}
impl std::ops::Mul<Matrix> for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: Matrix) -> Matrix {
        self.matmul(&rhs)
    }
}

impl std::ops::Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale_re(-1.0)
    }
}
impl std::ops::Neg for Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale_re(-1.0)
    }
}

/// Generalized eigenspace of `m` for the eigenvalue cluster at `lambda`:
/// an orthonormal basis of `Ker((m - lambda I)^n)` with `n = m.rows()`,
/// zero judged relative to the magnitudes of `m` and `lambda`.
pub fn generalized_eigenspace(
    m: &Matrix,
    lambda: Complex64,
    tol: &TolerancePolicy,
) -> Result<Vec<Vec<Complex64>>> {
    let scale = m.norm().max(lambda.norm());
    generalized_eigenspace_scaled(m, lambda, tol, scale)
}

/// Generalized eigenspace with an explicit scale reference: a shifted matrix
/// whose norm is below `rank_tol * scale` counts as zero (full kernel).
/// Powers are renormalized to unit norm after every multiplication, which
/// leaves the kernel unchanged and keeps the rank decision scale-free.
pub fn generalized_eigenspace_scaled(
    m: &Matrix,
    lambda: Complex64,
    tol: &TolerancePolicy,
    scale: f64,
) -> Result<Vec<Vec<Complex64>>> {
    let n = m.require_square()?;
    let full = || (0..n).map(|i| Matrix::identity(n).column(i)).collect();
    let shifted = m - &Matrix::identity(n).scale(lambda);
    let s_norm = shifted.norm();
    if s_norm <= tol.rank_tol * scale {
        return Ok(full());
    }
    let s1 = shifted.scale_re(1.0 / s_norm);
    let mut power = Matrix::identity(n);
    for _ in 0..n {
        power = power.matmul(&s1);
        let norm = power.norm();
        // A unit-norm factor chain collapsing this far is structurally
        // nilpotent: every direction dies at this depth already.
        if norm <= tol.rank_tol {
            return Ok(full());
        }
        power = power.scale_re(1.0 / norm);
    }
    Ok(nullspace_scaled(&power, tol, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matmul_and_commutator() {
        let e12 = Matrix::unit(2, 0, 1);
        let e21 = Matrix::unit(2, 1, 0);
        // E12 * E21 = E11, E21 * E12 = E22
        assert!(e12.matmul(&e21).approx_eq(&Matrix::unit(2, 0, 0), 1e-15));
        let h = e12.commutator(&e21);
        let expected = Matrix::diag(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert!(h.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn kron_against_hand_expansion() {
        let a = Matrix::from_real(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let id = Matrix::identity(2);
        let k = a.kron(&id);
        assert_eq!(k.rows(), 4);
        assert_eq!(k[(0, 0)], c(1.0, 0.0));
        assert_eq!(k[(0, 2)], c(2.0, 0.0));
        assert_eq!(k[(3, 1)], c(3.0, 0.0));
        assert_eq!(k[(3, 3)], c(4.0, 0.0));
    }

    #[test]
    fn inner_product_is_frobenius() {
        let a = Matrix::from_rows(&[vec![c(0.0, 1.0), c(2.0, 0.0)]]).unwrap();
        let b = Matrix::from_rows(&[vec![c(0.0, 1.0), c(0.0, 0.0)]]).unwrap();
        // <a,b> = conj(i)*i = 1
        assert!((a.inner(&b) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((a.norm() - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn generalized_eigenspace_examples() {
        let tol = TolerancePolicy::default();
        // diag(1,2), lambda=1 -> span{e1}
        let m = Matrix::diag(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let basis = generalized_eigenspace(&m, c(1.0, 0.0), &tol).unwrap();
        assert_eq!(basis.len(), 1);
        assert!(basis[0][1].norm() < 1e-12);
        // E12, lambda=0 -> full 2-dim space
        let e12 = Matrix::unit(2, 0, 1);
        assert_eq!(generalized_eigenspace(&e12, c(0.0, 0.0), &tol).unwrap().len(), 2);
        // diag(1,2), lambda=5 -> {0}
        assert_eq!(generalized_eigenspace(&m, c(5.0, 0.0), &tol).unwrap().len(), 0);
    }

    #[test]
    fn finite_check_rejects_nan() {
        let bad = vec![vec![c(f64::NAN, 0.0)]];
        assert!(Matrix::from_rows(&bad).is_err());
    }
}
