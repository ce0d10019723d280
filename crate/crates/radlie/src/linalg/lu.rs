//! Partial-pivot LU for resolvent solves, determinants and inverses.

use num_complex::Complex64;

use super::Matrix;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct LuDecomposition {
    lu: Matrix,
    perm: Vec<usize>,
    even_swaps: bool,
}

impl LuDecomposition {
    /// Decompose a square matrix. Fails only on an exactly zero pivot
    /// (structurally singular input); near-singular systems are the
    /// caller's responsibility via contour/spectrum margins.
    pub fn new(a: &Matrix) -> Result<Self> {
        let n = a.require_square()?;
        a.check_finite()?;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut even_swaps = true;

        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_mag = lu[(k, k)].norm();
            for i in k + 1..n {
                let mag = lu[(i, k)].norm();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = i;
                }
            }
            if pivot_mag == 0.0 {
                return Err(Error::NumericalFailure(
                    "singular matrix in LU decomposition".into(),
                ));
            }
            if pivot_row != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
                perm.swap(k, pivot_row);
                even_swaps = !even_swaps;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for j in k + 1..n {
                    let val = lu[(i, j)] - factor * lu[(k, j)];
                    lu[(i, j)] = val;
                }
            }
        }

        Ok(Self {
            lu,
            perm,
            even_swaps,
        })
    }

    pub fn det(&self) -> Complex64 {
        let n = self.lu.rows();
        let sign = if self.even_swaps { 1.0 } else { -1.0 };
        (0..n).fold(Complex64::new(sign, 0.0), |acc, i| acc * self.lu[(i, i)])
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.rows();
        assert_eq!(b.len(), n, "rhs length mismatch");
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for j in 0..i {
                let delta = self.lu[(i, j)] * x[j];
                x[i] -= delta;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let delta = self.lu[(i, j)] * x[j];
                x[i] -= delta;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    pub fn solve_mat(&self, b: &Matrix) -> Matrix {
        let n = self.lu.rows();
        assert_eq!(b.rows(), n, "rhs row mismatch");
        let cols: Vec<Vec<Complex64>> = (0..b.cols()).map(|j| self.solve(&b.column(j))).collect();
        Matrix::from_columns(&cols)
    }

    pub fn inverse(&self) -> Matrix {
        self.solve_mat(&Matrix::identity(self.lu.rows()))
    }
}

/// Direct inverse of a square matrix.
pub fn invert(a: &Matrix) -> Result<Matrix> {
    Ok(LuDecomposition::new(a)?.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solve_small_system() {
        let a = Matrix::from_real(&[&[2.0, 1.0], &[5.0, 3.0]]);
        let lu = LuDecomposition::new(&a).unwrap();
        let x = lu.solve(&[c(4.0, 0.0), c(11.0, 0.0)]);
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((x[1] - c(2.0, 0.0)).norm() < 1e-12);
        assert!((lu.det() - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn inverse_roundtrip_complex() {
        let a = Matrix::from_rows(&[
            vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 0.0), c(3.0, -2.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(2.0, 2.0)],
        ])
        .unwrap();
        let inv = invert(&a).unwrap();
        assert!((a * inv).approx_eq(&Matrix::identity(3), 1e-12));
    }

    #[test]
    fn singular_matrix_is_detected() {
        let a = Matrix::from_real(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(
            LuDecomposition::new(&a),
            Err(Error::NumericalFailure(_))
        ));
    }
}
