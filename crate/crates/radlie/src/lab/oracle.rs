//! Independent cross-validation oracles. These deliberately avoid the
//! primary computational routes they are checking.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use super::gen::random_span_element;
use crate::algebra::FiniteAlgebra;
use crate::linalg::eigenvalues;
use crate::{Result, TolerancePolicy};

/// Definitional membership test for the radical: `x` belongs to the radical
/// exactly when `1 - bx` is invertible for every `b` in the algebra.
/// Sampling `b` over the basis plus random elements and testing all scalar
/// multiples at once (i.e. quasi-nilpotency of `bx`, which is equivalent to
/// `1 - t b x` being invertible for every `t`) gives a check with one-sided
/// error of probability zero: a non-member is caught by a generic `b`.
pub fn definitional_radical_member(
    algebra: &FiniteAlgebra,
    x: &crate::linalg::Matrix,
    rng: &mut ChaCha8Rng,
    random_probes: usize,
    tol: &TolerancePolicy,
) -> Result<bool> {
    let x_norm = x.norm();
    if x_norm == 0.0 {
        return Ok(true);
    }
    let mut probes: Vec<crate::linalg::Matrix> = algebra.basis().to_vec();
    for _ in 0..random_probes {
        probes.push(random_span_element(rng, algebra.basis()));
    }
    for b in &probes {
        let bx = b * x;
        let radius = tol.spec_radius(bx.norm());
        // 1 - bx must be invertible, along with every scaling 1 - t bx:
        // all eigenvalues of bx within the matching radius of zero.
        for lambda in eigenvalues(&bx)? {
            if lambda.norm() > radius {
                return Ok(false);
            }
            if (lambda - Complex64::new(1.0, 0.0)).norm() <= tol.spec_tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
