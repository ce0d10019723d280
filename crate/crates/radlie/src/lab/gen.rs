//! Seeded random-instance generators. Every draw flows through a
//! `ChaCha8Rng` derived from `(seed, trial)`, so a fixed seed reproduces
//! every instance bit for bit.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::lie::{make_lie_subalgebra, LieSubalgebra};
use crate::linalg::{span_basis, Matrix};
use crate::{Error, Result, TolerancePolicy};

/// Per-trial RNG stream: splitmix of the suite seed and trial index.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    let mut z = seed ^ (trial as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(seed, trial))
}

pub fn cnormal(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Random scale with modulus in [0.5, 2] and random phase.
pub fn cscale(rng: &mut ChaCha8Rng) -> Complex64 {
    let modulus = 0.5 + 1.5 * rng.gen::<f64>();
    let phase = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
    Complex64::from_polar(modulus, phase)
}

/// Haar-ish random unitary via Gram-Schmidt on Gaussian columns.
fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        'col: for _ in 0..n {
            let mut v: Vec<Complex64> = (0..n).map(|_| cnormal(rng)).collect();
            for prev in &cols {
                let overlap: Complex64 = prev.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, p) in v.iter_mut().zip(prev) {
                    *x -= overlap * p;
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                continue 'col;
            }
            for x in v.iter_mut() {
                *x /= norm;
            }
            cols.push(v);
        }
        if cols.len() == n {
            return Matrix::from_columns(&cols);
        }
    }
}

/// Well-conditioned conjugator `P = Q1 D Q2` with singular values in
/// [0.5, 2] (condition number at most 4), plus its exactly-constructed
/// inverse `Q2^H D^{-1} Q1^H`.
pub fn conjugator(rng: &mut ChaCha8Rng, n: usize) -> (Matrix, Matrix) {
    let q1 = random_unitary(rng, n);
    let q2 = random_unitary(rng, n);
    let sv: Vec<f64> = (0..n).map(|_| 0.5 + 1.5 * rng.gen::<f64>()).collect();
    let d = Matrix::diag(&sv.iter().map(|&s| Complex64::new(s, 0.0)).collect::<Vec<_>>());
    let d_inv = Matrix::diag(
        &sv.iter()
            .map(|&s| Complex64::new(1.0 / s, 0.0))
            .collect::<Vec<_>>(),
    );
    let p = &q1 * &d * &q2;
    let p_inv = q2.adjoint() * d_inv * q1.adjoint();
    (p, p_inv)
}

/// Conjugate a family elementwise.
pub fn conjugate_all(p: &Matrix, p_inv: &Matrix, mats: &[Matrix]) -> Vec<Matrix> {
    mats.iter().map(|m| p * m * p_inv).collect()
}

/// How the solvable ideal of a Theorem-4.3-style instance was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdealKind {
    Whole,
    Derived,
    CornerPlusDerived,
    SolvableRadical,
}

impl IdealKind {
    pub fn label(&self) -> &'static str {
        match self {
            IdealKind::Whole => "j = g",
            IdealKind::Derived => "j = [g,g]",
            IdealKind::CornerPlusDerived => "j = C corner + [g,g]",
            IdealKind::SolvableRadical => "j = solvable radical",
        }
    }
}

/// A solvable Lie subalgebra with a designated solvable ideal.
#[derive(Debug, Clone)]
pub struct SolvableInstance {
    pub g: LieSubalgebra,
    pub ideal: Vec<Matrix>,
    pub ideal_kind: IdealKind,
    pub conjugator: Matrix,
}

fn is_lie_ideal(g: &LieSubalgebra, ideal: &[Matrix], tol: &TolerancePolicy) -> bool {
    ideal.iter().all(|r| g.contains(r, tol))
        && g.basis().iter().all(|b| {
            ideal.iter().all(|r| {
                let br = b.commutator(r);
                crate::algebra::span_residual(ideal, &br) <= tol.residual_at(br.norm())
            })
        })
}

/// Random bracket-closed algebra of upper-triangular matrices, conjugated by
/// a well-conditioned similarity. Respects the Lie dimension cap by
/// retrying with sparser seeds and falling back to a canonical affine pair.
fn triangular_closure(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_dim: usize,
    strict: bool,
    tol: &TolerancePolicy,
) -> Result<Vec<Matrix>> {
    for attempt in 0..8 {
        let density = 0.55 / (1.0 + attempt as f64 * 0.35);
        let gens: Vec<Matrix> = (0..2)
            .map(|_| {
                Matrix::from_fn(n, n, |i, j| {
                    let upper = if strict { j > i } else { j >= i };
                    if upper && rng.gen::<f64>() < density {
                        cnormal(rng)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        if gens.iter().all(|g| g.norm() < 1e-12) {
            continue;
        }
        match make_lie_subalgebra(&gens, tol) {
            Ok(t) if t.dim() > 0 && t.dim() <= max_dim => return Ok(t.basis().to_vec()),
            _ => continue,
        }
    }
    // Canonical fallback inside the cap.
    let fallback: Vec<Matrix> = if strict || max_dim == 1 {
        vec![Matrix::unit(n, 0, n - 1)]
    } else {
        vec![Matrix::unit(n, 0, 0), Matrix::unit(n, 0, n - 1)]
    };
    Ok(span_basis(&fallback, tol)?)
}

pub fn gen_solvable_instance(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_dim: usize,
    tol: &TolerancePolicy,
) -> Result<SolvableInstance> {
    let t_basis = triangular_closure(rng, n, max_dim, false, tol)?;
    let (p, p_inv) = conjugator(rng, n);
    let g = make_lie_subalgebra(&conjugate_all(&p, &p_inv, &t_basis), tol)?;

    let choice = rng.gen_range(0..3u8);
    let derived = g
        .derived_series(tol)
        .get(1)
        .cloned()
        .unwrap_or_default();
    let corner = &p * Matrix::unit(n, 0, n - 1) * &p_inv;
    let menu: Vec<(IdealKind, Vec<Matrix>)> = vec![
        (IdealKind::Whole, g.basis().to_vec()),
        (IdealKind::Derived, derived.clone()),
        (IdealKind::CornerPlusDerived, {
            let mut v = derived;
            v.push(corner);
            span_basis(&v, tol)?
        }),
    ];
    // Deterministic rotation through the menu from the drawn start; first
    // candidate passing the ideal check wins (the corner need not lie in g).
    for offset in 0..menu.len() {
        let (kind, candidate) = &menu[(choice as usize + offset) % menu.len()];
        if is_lie_ideal(&g, candidate, tol) {
            return Ok(SolvableInstance {
                g,
                ideal: candidate.clone(),
                ideal_kind: *kind,
                conjugator: p,
            });
        }
    }
    // j = g always passes; unreachable unless tolerances collapse.
    Err(Error::NumericalFailure(
        "no ideal candidate passed verification".into(),
    ))
}

/// Instance with a nonzero solvable radical and (for n >= 4) a semisimple
/// part: an sl2 block joined with a solvable triangular block, conjugated.
pub fn gen_mixed_instance(
    rng: &mut ChaCha8Rng,
    n: usize,
    tol: &TolerancePolicy,
) -> Result<SolvableInstance> {
    if n < 4 {
        return gen_solvable_instance(rng, n, 5, tol);
    }
    let mut spanning = vec![
        Matrix::unit(n, 0, 1),
        Matrix::unit(n, 1, 0),
        Matrix::unit(n, 0, 0) - Matrix::unit(n, 1, 1),
    ];
    // Solvable tail in the complementary block.
    spanning.push(Matrix::unit(n, 2, 3));
    if n > 4 && rng.gen::<bool>() {
        spanning.push(Matrix::unit(n, 2, 2) - Matrix::unit(n, 3, 3));
    }
    let (p, p_inv) = conjugator(rng, n);
    let g = make_lie_subalgebra(&conjugate_all(&p, &p_inv, &spanning), tol)?;
    let r = g.solvable_radical(tol)?;
    if r.dim() == 0 {
        return Err(Error::NumericalFailure(
            "mixed instance came out with zero radical".into(),
        ));
    }
    Ok(SolvableInstance {
        g,
        ideal: r.basis().to_vec(),
        ideal_kind: IdealKind::SolvableRadical,
        conjugator: p,
    })
}

/// Conjugated strictly-triangular closure: a Lie algebra of nilpotent
/// matrices.
pub fn gen_nilpotent_instance(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_dim: usize,
    tol: &TolerancePolicy,
) -> Result<LieSubalgebra> {
    let t_basis = triangular_closure(rng, n, max_dim, true, tol)?;
    let (p, p_inv) = conjugator(rng, n);
    make_lie_subalgebra(&conjugate_all(&p, &p_inv, &t_basis), tol)
}

/// Kleinecke-Shirokov triple: `[a,b] = c`, `[a,c] = [b,c] = 0`, from a
/// conjugated Heisenberg embedding. Roughly one trial in thirteen keeps the
/// degenerate commuting pair with `c = 0`.
pub struct KsTriple {
    pub a: Matrix,
    pub b: Matrix,
    pub c: Matrix,
}

pub fn gen_ks_triple(rng: &mut ChaCha8Rng, n: usize, degenerate: bool) -> Result<KsTriple> {
    if n < 3 {
        return Err(Error::Dimension("Heisenberg embedding needs n >= 3".into()));
    }
    let (p, p_inv) = conjugator(rng, n);
    let e12 = &p * Matrix::unit(n, 0, 1) * &p_inv;
    let e23 = &p * Matrix::unit(n, 1, 2) * &p_inv;
    let e13 = &p * Matrix::unit(n, 0, 2) * &p_inv;
    let (sa, sb, sc) = (cscale(rng), cscale(rng), cscale(rng));
    let (a, b) = if degenerate {
        // Commuting pair: c = [a, b] = 0.
        (e12.scale(sa), e13.scale(sb))
    } else {
        (e12.scale(sa), e23.scale(sb) + e13.scale(sc))
    };
    let c = a.commutator(&b);
    Ok(KsTriple { a, b, c })
}

/// Abelian algebra of simultaneously diagonalized elements, conjugated, with
/// a designated sub-span ideal: the Lemma 4.1 family (semisimple generated
/// algebra, every restricted ad nilpotent). Every third caller draws the
/// full 2x2 matrix-unit variant with j = C 1 instead.
pub struct CommutingInstance {
    pub g: LieSubalgebra,
    pub ideal: Vec<Matrix>,
}

pub fn gen_commuting_semisimple(
    rng: &mut ChaCha8Rng,
    n: usize,
    full_block_variant: bool,
    tol: &TolerancePolicy,
) -> Result<CommutingInstance> {
    let (p, p_inv) = conjugator(rng, n);
    if full_block_variant && n >= 2 {
        let spanning = [
            Matrix::unit(n, 0, 1),
            Matrix::unit(n, 1, 0),
            Matrix::unit(n, 0, 0) - Matrix::unit(n, 1, 1),
            Matrix::identity(n),
        ];
        let g = make_lie_subalgebra(&conjugate_all(&p, &p_inv, &spanning), tol)?;
        let ideal = vec![Matrix::identity(n)];
        return Ok(CommutingInstance { g, ideal });
    }
    // Distinct-diagonal commuting family.
    let k = 2.min(n);
    let diags: Vec<Matrix> = (0..k)
        .map(|_| {
            let entries: Vec<Complex64> = (0..n).map(|_| cnormal(rng)).collect();
            Matrix::diag(&entries)
        })
        .collect();
    let conjugated = conjugate_all(&p, &p_inv, &diags);
    let g = make_lie_subalgebra(&conjugated, tol)?;
    let take = 1.max(g.dim() / 2);
    let ideal: Vec<Matrix> = g.basis().iter().take(take).cloned().collect();
    Ok(CommutingInstance { g, ideal })
}

/// Random dense pair for the Sylvester suite.
pub fn gen_dense_pair(rng: &mut ChaCha8Rng, n: usize) -> (Matrix, Matrix) {
    let a1 = Matrix::from_fn(n, n, |_, _| cnormal(rng));
    let a2 = Matrix::from_fn(n, n, |_, _| cnormal(rng));
    (a1, a2)
}

/// Single-generator algebra whose generator is a conjugated triangular
/// matrix with controlled Jordan structure: distinct-modulus eigenvalue
/// clusters, at most one nilpotent coupling inside a repeated pair, and the
/// defective cluster never of maximal modulus. This keeps every spectral
/// computation on the algebra well conditioned (nilpotency index at most 2).
pub fn gen_generator_matrix(rng: &mut ChaCha8Rng, n: usize, semisimple: bool) -> Matrix {
    let (p, p_inv) = conjugator(rng, n);
    let mut diag: Vec<Complex64> = Vec::with_capacity(n);
    // Distinct moduli: radii 1, 2, 3, ... scaled, random phases.
    for i in 0..n {
        let r = 0.5 + i as f64 * 0.7;
        let phase = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
        diag.push(Complex64::from_polar(r, phase));
    }
    let mut t = Matrix::diag(&diag);
    if !semisimple && n >= 2 {
        // Repeat the *smallest*-modulus eigenvalue and couple the pair.
        t[(1, 1)] = t[(0, 0)];
        t[(0, 1)] = cscale(rng);
    }
    &p * t * &p_inv
}

/// Random element of the span of an orthonormal family.
pub fn random_span_element(rng: &mut ChaCha8Rng, basis: &[Matrix]) -> Matrix {
    let n = basis.first().map_or(1, Matrix::rows);
    let mut out = Matrix::zeros(n, basis.first().map_or(1, Matrix::cols));
    for b in basis {
        out = out + b.scale(cnormal(rng));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::is_nilpotent;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn determinism_of_streams() {
        let mut r1 = trial_rng(42, 7);
        let mut r2 = trial_rng(42, 7);
        for _ in 0..16 {
            assert_eq!(cnormal(&mut r1), cnormal(&mut r2));
        }
        let mut r3 = trial_rng(42, 8);
        assert_ne!(cnormal(&mut r1), cnormal(&mut r3));
    }

    #[test]
    fn conjugator_is_invertible_and_conditioned() {
        let mut rng = trial_rng(1, 0);
        let (p, p_inv) = conjugator(&mut rng, 5);
        assert!((p * &p_inv).approx_eq(&Matrix::identity(5), 1e-12));
        let svd = crate::linalg::Svd::new(&p_inv).unwrap();
        let cond = svd.values[0] / svd.values[4];
        assert!(cond <= 100.0, "condition number {cond}");
    }

    #[test]
    fn solvable_instances_are_solvable_with_ideals() {
        let t = tol();
        for trial in 0..12 {
            let mut rng = trial_rng(9, trial);
            let inst = gen_solvable_instance(&mut rng, 4, 5, &t).unwrap();
            assert!(inst.g.dim() <= 5, "dim {}", inst.g.dim());
            assert!(inst.g.is_solvable(&t));
            assert!(is_lie_ideal(&inst.g, &inst.ideal, &t));
        }
    }

    #[test]
    fn cap_one_gives_abelian_self_ideal() {
        let t = tol();
        let mut rng = trial_rng(3, 0);
        let inst = gen_solvable_instance(&mut rng, 3, 1, &t).unwrap();
        assert_eq!(inst.g.dim(), 1);
    }

    #[test]
    fn mixed_instance_has_nonzero_radical() {
        let t = tol();
        let mut rng = trial_rng(5, 2);
        let inst = gen_mixed_instance(&mut rng, 4, &t).unwrap();
        assert_eq!(inst.ideal_kind, IdealKind::SolvableRadical);
        assert!(!inst.ideal.is_empty());
        assert!(!inst.g.is_solvable(&t));
    }

    #[test]
    fn ks_triples_satisfy_hypotheses() {
        let t = tol();
        for trial in 0..8 {
            let mut rng = trial_rng(11, trial);
            let triple = gen_ks_triple(&mut rng, 5, trial == 3).unwrap();
            let scale = triple.a.norm() * triple.c.norm();
            assert!(triple.a.commutator(&triple.b).distance(&triple.c) < 1e-12);
            assert!(triple.a.commutator(&triple.c).norm() <= t.residual_at(scale));
            assert!(triple.b.commutator(&triple.c).norm() <= t.residual_at(scale));
            if trial == 3 {
                assert!(triple.c.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn nilpotent_family_is_nilpotent() {
        let t = tol();
        let mut rng = trial_rng(13, 1);
        let g = gen_nilpotent_instance(&mut rng, 4, 5, &t).unwrap();
        for b in g.basis() {
            assert!(is_nilpotent(b, &t));
        }
    }

    #[test]
    fn generator_matrix_families() {
        let t = tol();
        let mut rng = trial_rng(17, 0);
        let x = gen_generator_matrix(&mut rng, 4, false);
        let a = crate::algebra::generate_algebra(&[x], &t).unwrap();
        assert!(a.dim() <= 4);
        // The coupled pair contributes a one-dimensional radical.
        assert_eq!(a.radical(&t).unwrap().len(), 1);

        let y = gen_generator_matrix(&mut rng, 4, true);
        let b = crate::algebra::generate_algebra(&[y], &t).unwrap();
        assert!(b.radical(&t).unwrap().is_empty());
    }
}
