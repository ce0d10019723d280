//! Singular values by one-sided Jacobi: accurate at small scale, and every
//! rank/nullspace decision in the crate goes through a relative
//! singular-value cutoff, never pivot magnitudes.

use num_complex::Complex64;

use super::Matrix;
use crate::{Error, Result, TolerancePolicy};

const MAX_SWEEPS: usize = 64;
const ORTHO_EPS: f64 = 1e-15;

/// Singular value decomposition `A = U diag(s) V^H`.
///
/// `u` has the shape of `A` with orthonormal columns where the corresponding
/// singular value is nonzero (zero columns otherwise); `v` is square unitary.
/// Values are sorted in descending order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub values: Vec<f64>,
    pub u: Matrix,
    pub v: Matrix,
}

impl Svd {
    pub fn new(a: &Matrix) -> Result<Self> {
        a.check_finite()?;
        let m = a.rows();
        let k = a.cols();
        let mut w = a.clone();
        let mut v = Matrix::identity(k);

        // Columns below roundoff relative to the largest are dead: rotating
        // against them only shuffles noise and prevents convergence.
        let scale = (0..k)
            .map(|j| (0..m).map(|i| w[(i, j)].norm_sqr()).sum::<f64>())
            .fold(0.0, f64::max);
        let dead = scale * (f64::EPSILON * f64::EPSILON);

        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..k.saturating_sub(1) {
                for q in p + 1..k {
                    let mut app = 0.0;
                    let mut aqq = 0.0;
                    let mut apq = Complex64::new(0.0, 0.0);
                    for i in 0..m {
                        let wp = w[(i, p)];
                        let wq = w[(i, q)];
                        app += wp.norm_sqr();
                        aqq += wq.norm_sqr();
                        apq += wp.conj() * wq;
                    }
                    if app <= dead || aqq <= dead {
                        continue;
                    }
                    let off = apq.norm();
                    if off <= ORTHO_EPS * (app * aqq).sqrt() || off == 0.0 {
                        continue;
                    }
                    rotated = true;

                    // Diagonalize the Hermitian 2x2 Gram block
                    // [[app, apq], [conj(apq), aqq]].
                    let phase = apq / off;
                    let tau = (aqq - app) / (2.0 * off);
                    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = phase * (c * t);

                    for i in 0..m {
                        let wp = w[(i, p)];
                        let wq = w[(i, q)];
                        w[(i, p)] = wp * c - s.conj() * wq;
                        w[(i, q)] = s * wp + wq * c;
                    }
                    for i in 0..k {
                        let vp = v[(i, p)];
                        let vq = v[(i, q)];
                        v[(i, p)] = vp * c - s.conj() * vq;
                        v[(i, q)] = s * vp + vq * c;
                    }
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged && k > 1 {
            return Err(Error::NumericalFailure(
                "Jacobi SVD sweeps did not converge".into(),
            ));
        }

        // Column norms are the singular values; sort descending.
        let mut order: Vec<usize> = (0..k).collect();
        let norms: Vec<f64> = (0..k)
            .map(|j| (0..m).map(|i| w[(i, j)].norm_sqr()).sum::<f64>().sqrt())
            .collect();
        order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]).then(x.cmp(&y)));

        let mut values = Vec::with_capacity(k);
        let mut u = Matrix::zeros(m, k);
        let mut v_sorted = Matrix::zeros(k, k);
        for (new_j, &old_j) in order.iter().enumerate() {
            let s = norms[old_j];
            values.push(s);
            if s > 0.0 {
                for i in 0..m {
                    u[(i, new_j)] = w[(i, old_j)] / s;
                }
            }
            for i in 0..k {
                v_sorted[(i, new_j)] = v[(i, old_j)];
            }
        }

        Ok(Self {
            values,
            u,
            v: v_sorted,
        })
    }

    /// Number of singular values above the relative cutoff.
    pub fn rank(&self, rank_tol: f64) -> usize {
        self.rank_at(self.cutoff(rank_tol, 0.0))
    }

    /// Number of singular values strictly above an absolute cutoff.
    pub fn rank_at(&self, cutoff: f64) -> usize {
        self.values.iter().filter(|&&s| s > cutoff).count()
    }

    /// Rank cutoff that is relative to the largest singular value but never
    /// below `rank_tol * scale`. Matrices assembled from unit-norm objects
    /// pass their natural magnitude as `scale` so that an all-noise matrix
    /// is recognized as zero instead of full rank.
    pub fn cutoff(&self, rank_tol: f64, scale: f64) -> f64 {
        let max = self.values.first().copied().unwrap_or(0.0);
        rank_tol * max.max(scale)
    }
}

/// Rank of a matrix under the policy's relative singular-value cutoff.
pub fn rank(a: &Matrix, tol: &TolerancePolicy) -> Result<usize> {
    Ok(Svd::new(a)?.rank(tol.rank_tol))
}

/// Orthonormal basis of the right nullspace of `a`, with rank decided
/// relative to the largest singular value only.
pub fn nullspace(a: &Matrix, tol: &TolerancePolicy) -> Vec<Vec<Complex64>> {
    nullspace_scaled(a, tol, 0.0)
}

/// Nullspace with an absolute scale reference: singular values below
/// `rank_tol * scale` count as zero even when they are the largest ones,
/// so a matrix of pure rounding noise has a full nullspace.
pub fn nullspace_scaled(a: &Matrix, tol: &TolerancePolicy, scale: f64) -> Vec<Vec<Complex64>> {
    let svd = Svd::new(a).expect("nullspace: finite input");
    let r = svd.rank_at(svd.cutoff(tol.rank_tol, scale));
    (r..a.cols()).map(|j| svd.v.column(j)).collect()
}

/// Orthonormal basis of the column space of `a`.
pub fn orthonormal_columns(a: &Matrix, tol: &TolerancePolicy) -> Vec<Vec<Complex64>> {
    let svd = Svd::new(a).expect("orthonormal_columns: finite input");
    let r = svd.rank(tol.rank_tol);
    (0..r).map(|j| svd.u.column(j)).collect()
}

/// Span of a family of unit-scale objects: members whose norm is below the
/// residual tolerance are rounding noise and count as zero, the rest are
/// normalized before spanning so the rank decision stays scale-free.
pub fn span_basis_floored(mats: &[Matrix], tol: &TolerancePolicy) -> Result<Vec<Matrix>> {
    let kept: Vec<Matrix> = mats
        .iter()
        .filter_map(|m| {
            let norm = m.norm();
            if norm <= tol.residual_tol {
                None
            } else {
                Some(m.scale_re(1.0 / norm))
            }
        })
        .collect();
    span_basis(&kept, tol)
}

/// Orthonormal basis (Frobenius inner product) of the span of the given
/// same-shaped matrices. Empty input and zero spans give an empty basis.
pub fn span_basis(mats: &[Matrix], tol: &TolerancePolicy) -> Result<Vec<Matrix>> {
    let Some(first) = mats.first() else {
        return Ok(Vec::new());
    };
    if mats.iter().any(|m| !m.same_shape(first)) {
        return Err(Error::Dimension("span_basis: mixed shapes".into()));
    }
    let stacked = Matrix::from_columns(&mats.iter().map(Matrix::to_vec).collect::<Vec<_>>());
    let cols = orthonormal_columns(&stacked, tol);
    Ok(cols
        .into_iter()
        .map(|col| Matrix::from_vec(first.rows(), first.cols(), col))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn singular_values_of_diagonal() {
        let a = Matrix::diag(&[c(3.0, 0.0), c(0.0, -4.0), c(0.0, 0.0)]);
        let svd = Svd::new(&a).unwrap();
        assert!((svd.values[0] - 4.0).abs() < 1e-12);
        assert!((svd.values[1] - 3.0).abs() < 1e-12);
        assert!(svd.values[2].abs() < 1e-12);
    }

    #[test]
    fn reconstruction_and_unitarity() {
        let mut state = 42u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let a = Matrix::from_fn(7, 4, |_, _| c(next(), next()));
        let svd = Svd::new(&a).unwrap();
        // A V = U diag(s)
        let av = &a * &svd.v;
        let us = Matrix::from_fn(7, 4, |i, j| svd.u[(i, j)] * svd.values[j]);
        assert!(av.approx_eq(&us, 1e-12));
        // V unitary
        let vhv = svd.v.adjoint() * &svd.v;
        assert!(vhv.approx_eq(&Matrix::identity(4), 1e-12));
    }

    #[test]
    fn span_basis_examples() {
        let tol = TolerancePolicy::default();
        let e12 = Matrix::unit(2, 0, 1);
        // Colinear inputs collapse to one direction.
        let b = span_basis(&[e12.clone(), e12.scale_re(2.0)], &tol).unwrap();
        assert_eq!(b.len(), 1);
        // Independent inputs stay independent.
        let b2 = span_basis(&[Matrix::identity(2), e12.clone()], &tol).unwrap();
        assert_eq!(b2.len(), 2);
        assert!((b2[0].inner(&b2[1])).norm() < 1e-12);
        assert!((b2[0].norm() - 1.0).abs() < 1e-12);
        // Zero vector spans nothing.
        assert!(span_basis(&[Matrix::zeros(2, 2)], &tol).unwrap().is_empty());
        // Empty input gives empty basis.
        assert!(span_basis(&[], &tol).unwrap().is_empty());
    }

    #[test]
    fn nullspace_of_rank_one() {
        let tol = TolerancePolicy::default();
        let a = Matrix::from_real(&[&[1.0, 2.0], &[2.0, 4.0]]);
        let ns = nullspace(&a, &tol);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        let img: Vec<Complex64> = a.mul_vec(v);
        assert!(img.iter().map(|z| z.norm()).sum::<f64>() < 1e-12);
    }
}
