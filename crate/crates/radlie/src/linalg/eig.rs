//! Complex dense eigenvalues: Householder reduction to Hessenberg form
//! followed by an explicitly shifted QR iteration with Wilkinson shifts.
//!
//! Eigenvalues only — invariant subspaces are recovered elsewhere through
//! SVD-based kernels, so no transformation accumulation is needed.

use num_complex::Complex64;

use super::Matrix;
use crate::{Error, Result};

/// Iteration budget per matrix, in units of matrix size.
const MAX_ITER_PER_EIG: usize = 40;

/// Hard cap on the eigenproblem size. Algebra elements are capped at 64,
/// but left-regular representations and Sylvester forms of those objects
/// go up to 64^2.
const MAX_EIG_SIZE: usize = 64 * 64;

/// All eigenvalues of a square complex matrix, with algebraic multiplicity,
/// sorted by real part then imaginary part.
pub fn eigenvalues(m: &Matrix) -> Result<Vec<Complex64>> {
    let n = m.require_square()?;
    m.check_finite()?;
    if n > MAX_EIG_SIZE {
        return Err(Error::Dimension(format!(
            "eigenproblem size {n} exceeds cap {MAX_EIG_SIZE}"
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }

    let mut h = m.clone();
    hessenberg_in_place(&mut h);
    let mut eigs = qr_iterate(&mut h)?;
    eigs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(eigs)
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg_in_place(h: &mut Matrix) {
    let n = h.rows();
    for k in 0..n.saturating_sub(2) {
        // Householder vector for column k, rows k+1..n.
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let norm_x = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let alpha = if v[0].norm() == 0.0 {
            Complex64::new(norm_x, 0.0)
        } else {
            (v[0] / v[0].norm()) * norm_x
        };
        v[0] += alpha;
        let norm_v = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_v == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= norm_v;
        }

        // Left: rows k+1..n get (I - 2 v v^H) applied.
        for j in k..n {
            let s: Complex64 = (0..v.len()).map(|i| v[i].conj() * h[(k + 1 + i, j)]).sum();
            let s2 = s * 2.0;
            for i in 0..v.len() {
                let val = h[(k + 1 + i, j)] - v[i] * s2;
                h[(k + 1 + i, j)] = val;
            }
        }
        // Right: columns k+1..n.
        for i in 0..n {
            let s: Complex64 = (0..v.len()).map(|j| h[(i, k + 1 + j)] * v[j]).sum();
            let s2 = s * 2.0;
            for j in 0..v.len() {
                let val = h[(i, k + 1 + j)] - s2 * v[j].conj();
                h[(i, k + 1 + j)] = val;
            }
        }
        // Entries below the subdiagonal are zero by construction.
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Complex Givens rotation G = [[c, s], [-conj(s), c]] with real c, such
/// that G * (a, b)^T = (r, 0)^T.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let t = an.hypot(bn);
    let c = an / t;
    let s = (a / an) * (b.conj() / t);
    (c, s)
}

/// Both roots of the trailing 2x2 block [[a, b], [c, d]].
fn two_by_two_eigs(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let mid = (a + d) * 0.5;
    let delta = (a - d) * 0.5;
    let disc = (delta * delta + b * c).sqrt();
    (mid + disc, mid - disc)
}

fn qr_iterate(h: &mut Matrix) -> Result<Vec<Complex64>> {
    let n = h.rows();
    let fro = h.norm();
    let eps = f64::EPSILON;
    let mut eigs: Vec<Complex64> = Vec::with_capacity(n);

    let mut hi = n - 1;
    let mut iter_since_deflation = 0usize;
    let mut total_iter = 0usize;
    let budget = MAX_ITER_PER_EIG * n + 10;

    loop {
        // Zero out negligible subdiagonals in the active range.
        for i in 0..hi {
            let scale = h[(i, i)].norm() + h[(i + 1, i + 1)].norm();
            let thresh = if scale > 0.0 { eps * scale } else { eps * fro };
            if h[(i + 1, i)].norm() <= thresh {
                h[(i + 1, i)] = Complex64::new(0.0, 0.0);
            }
        }
        // Deflation point: largest l <= hi with h[l][l-1] == 0.
        let mut lo = hi;
        while lo > 0 && h[(lo, lo - 1)].norm() != 0.0 {
            lo -= 1;
        }

        if lo == hi {
            eigs.push(h[(hi, hi)]);
            if hi == 0 {
                break;
            }
            hi -= 1;
            iter_since_deflation = 0;
            continue;
        }
        if lo + 1 == hi {
            let (e1, e2) = two_by_two_eigs(h[(lo, lo)], h[(lo, hi)], h[(hi, lo)], h[(hi, hi)]);
            eigs.push(e1);
            eigs.push(e2);
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            iter_since_deflation = 0;
            continue;
        }

        total_iter += 1;
        iter_since_deflation += 1;
        if total_iter > budget {
            return Err(Error::NumericalFailure(format!(
                "QR iteration did not converge after {total_iter} steps (n = {n})"
            )));
        }

        // Shift: Wilkinson from the trailing 2x2, exceptional every 10 steps.
        let shift = if iter_since_deflation % 10 == 0 {
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            let (e1, e2) = two_by_two_eigs(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            );
            let d = h[(hi, hi)];
            if (e1 - d).norm() <= (e2 - d).norm() {
                e1
            } else {
                e2
            }
        };

        qr_step(h, lo, hi, shift);
    }

    Ok(eigs)
}

/// One explicit shifted QR step on the active block [lo..=hi]:
/// H - mu = QR, then H <- RQ + mu, via Givens rotations.
fn qr_step(h: &mut Matrix, lo: usize, hi: usize, shift: Complex64) {
    for i in lo..=hi {
        let v = h[(i, i)] - shift;
        h[(i, i)] = v;
    }

    let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..=hi {
            let t1 = h[(k, j)];
            let t2 = h[(k + 1, j)];
            h[(k, j)] = t1 * c + s * t2;
            h[(k + 1, j)] = -s.conj() * t1 + t2 * c;
        }
        h[(k + 1, k)] = Complex64::new(0.0, 0.0);
        rots.push((c, s));
    }

    for (idx, (c, s)) in rots.iter().enumerate() {
        let k = lo + idx;
        let last = (k + 1).min(hi);
        for i in lo..=last {
            let t1 = h[(i, k)];
            let t2 = h[(i, k + 1)];
            h[(i, k)] = t1 * *c + s.conj() * t2;
            h[(i, k + 1)] = -*s * t1 + t2 * *c;
        }
    }

    for i in lo..=hi {
        let v = h[(i, i)] + shift;
        h[(i, i)] = v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::LuDecomposition;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    fn assert_multiset_close(got: &[Complex64], want: &[Complex64], tol: f64) {
        assert_eq!(got.len(), want.len(), "cardinality mismatch");
        let g = sorted(got.to_vec());
        let w = sorted(want.to_vec());
        for (a, b) in g.iter().zip(&w) {
            assert!(
                (a - b).norm() < tol,
                "eigenvalue mismatch: {a} vs {b} (all: {g:?} vs {w:?})"
            );
        }
    }

    #[test]
    fn diagonal_and_nilpotent() {
        let m = Matrix::diag(&[c(1.0, 0.0), c(2.0, 0.0)]);
        assert_multiset_close(&eigenvalues(&m).unwrap(), &[c(1.0, 0.0), c(2.0, 0.0)], 1e-12);

        let e12 = Matrix::unit(2, 0, 1);
        assert_multiset_close(&eigenvalues(&e12).unwrap(), &[c(0.0, 0.0); 2], 1e-12);
    }

    #[test]
    fn involution_has_pm_one() {
        let m = Matrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_multiset_close(&eigenvalues(&m).unwrap(), &[c(-1.0, 0.0), c(1.0, 0.0)], 1e-12);
    }

    #[test]
    fn companion_of_unit_cubic() {
        // z^3 = 1: companion matrix eigenvalues are the cube roots of unity.
        let m = Matrix::from_real(&[&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        let w = (2.0 * std::f64::consts::PI) / 3.0;
        assert_multiset_close(
            &eigenvalues(&m).unwrap(),
            &[c(1.0, 0.0), c(w.cos(), w.sin()), c(w.cos(), -w.sin())],
            1e-10,
        );
    }

    #[test]
    fn triangular_eigenvalues_are_diagonal() {
        let m = Matrix::from_rows(&[
            vec![c(1.0, 2.0), c(5.0, -1.0), c(0.5, 0.0)],
            vec![c(0.0, 0.0), c(-3.0, 0.0), c(2.0, 2.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 4.0)],
        ])
        .unwrap();
        assert_multiset_close(
            &eigenvalues(&m).unwrap(),
            &[c(1.0, 2.0), c(-3.0, 0.0), c(0.0, 4.0)],
            1e-12,
        );
    }

    #[test]
    fn trace_and_det_consistency_on_dense_matrix() {
        // Deterministic pseudo-random 8x8 complex matrix.
        let n = 8;
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let m = Matrix::from_fn(n, n, |_, _| c(next(), next()));
        let eigs = eigenvalues(&m).unwrap();
        let sum: Complex64 = eigs.iter().sum();
        assert!((sum - m.trace()).norm() < 1e-10 * m.norm().max(1.0));
        let prod: Complex64 = eigs.iter().product();
        let det = LuDecomposition::new(&m).unwrap().det();
        assert!(
            (prod - det).norm() < 1e-8 * det.norm().max(1.0),
            "prod {prod} vs det {det}"
        );
    }

    #[test]
    fn jordan_block_converges() {
        // 6x6 Jordan block at 2 plus a full last column to avoid trivial
        // deflation; spectrum stays near the perturbed characteristic roots.
        let n = 6;
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(2.0, 0.0);
            if i + 1 < n {
                m[(i, i + 1)] = c(1.0, 0.0);
            }
        }
        m[(n - 1, 0)] = c(1e-12, 0.0);
        let eigs = eigenvalues(&m).unwrap();
        // Roots of (z-2)^6 = 1e-12: ring of radius 0.01 around 2.
        for e in &eigs {
            assert!(((e - c(2.0, 0.0)).norm() - 0.01).abs() < 1e-3, "got {e}");
        }
    }

    #[test]
    fn rejects_non_square() {
        let m = Matrix::zeros(2, 3);
        assert!(matches!(eigenvalues(&m), Err(Error::Dimension(_))));
    }
}
