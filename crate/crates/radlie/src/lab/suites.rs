//! One verifier per structural result. Each trial generates its instance,
//! verifies the hypotheses first (misconstructed instances report as
//! hypothesis-not-met rather than passing vacuously), then asserts the
//! conclusions at the stated residuals.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::gen::{self};
use super::{InstanceSpec, SuiteKind, TrialOutcome};
use crate::algebra::{
    generate_algebra, is_nilpotent, is_quasinilpotent, span_residual, FiniteAlgebra,
};
use crate::lie::{joint_quasinilpotent_subspace, CartanDecomposition, LieSubalgebra};
use crate::linalg::{eigenvalues, nullspace, span_basis, Matrix};
use crate::spectral::{
    exp_matrix, log_unipotent, multiset_matches, spectral_radius, submultiplicativity_check,
};
use crate::sylvester::{check_ad_eigvector_nilpotent, AdNilpotency, SylvesterOperator};
use crate::{Result, TolerancePolicy};

pub(crate) fn run_trial(kind: SuiteKind, spec: &InstanceSpec, trial: usize) -> Result<TrialOutcome> {
    let mut rng = gen::trial_rng(spec.seed, trial);
    match kind {
        SuiteKind::T43 => t43(spec, trial, &mut rng),
        SuiteKind::Prop42 => prop42(spec, trial, &mut rng),
        SuiteKind::Prop26 => prop26(spec, trial, &mut rng),
        SuiteKind::Lemma27 => lemma27(spec, &mut rng),
        SuiteKind::Lemma32 => lemma32(spec, trial, &mut rng),
        SuiteKind::Lemma41 => lemma41(spec, trial, &mut rng),
        SuiteKind::Ks => ks(spec, trial, &mut rng),
        SuiteKind::Rosenblum => rosenblum(spec, &mut rng),
        SuiteKind::Cor34 => cor34(spec, &mut rng),
        SuiteKind::QuotientSpectrum => quotient_spectrum(spec, trial, &mut rng),
        SuiteKind::Radii => radii(spec, trial, &mut rng),
        SuiteKind::UnboundedExp => unbounded_exp(spec, &mut rng),
        SuiteKind::RadicalOracle => radical_oracle(spec, trial, &mut rng),
    }
}

/// Hausdorff distance between two finite point sets (set comparison of
/// spectra, multiplicities ignored).
fn hausdorff(xs: &[Complex64], ys: &[Complex64]) -> f64 {
    let one_sided = |from: &[Complex64], to: &[Complex64]| {
        from.iter()
            .map(|x| {
                to.iter()
                    .map(|y| (x - y).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    if xs.is_empty() && ys.is_empty() {
        return 0.0;
    }
    one_sided(xs, ys).max(one_sided(ys, xs))
}

/// Unit-norm random element of a span; zero when the span is empty.
fn unit_span_element(rng: &mut ChaCha8Rng, basis: &[Matrix], n: usize) -> Matrix {
    if basis.is_empty() {
        return Matrix::zeros(n, n);
    }
    loop {
        let x = gen::random_span_element(rng, basis);
        let norm = x.norm();
        if norm > 1e-6 {
            return x.scale_re(1.0 / norm);
        }
    }
}

/// Nilpotent-matrix subspace of a solvable Lie subalgebra, through its
/// root structure: `N ^ j = (N ^ h) (+) j_+`, with the Cartan part cut out
/// by the ambient weight functionals. Returns the subspace together with
/// the decomposition so callers can verify the root-space hypothesis.
fn nilpotent_subspace(
    j: &LieSubalgebra,
    seed: u64,
    tol: &TolerancePolicy,
) -> Result<(Vec<Matrix>, CartanDecomposition)> {
    let h = j.cartan_subalgebra(seed, tol)?;
    let dec = j.root_decomposition(&h, seed, tol)?;
    let mut parts = joint_quasinilpotent_subspace(h.basis(), tol)?;
    parts.extend(dec.fitting_plus.iter().cloned());
    Ok((span_basis(&parts, tol)?, dec))
}

/// Orthonormal basis of the intersection of two orthonormal spans.
fn subspace_intersection(a: &[Matrix], b: &[Matrix], tol: &TolerancePolicy) -> Vec<Matrix> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let cols: Vec<Vec<Complex64>> = a
        .iter()
        .map(Matrix::to_vec)
        .chain(b.iter().map(|m| m.scale_re(-1.0).to_vec()))
        .collect();
    let stacked = Matrix::from_columns(&cols);
    let mut members = Vec::new();
    for null in nullspace(&stacked, tol) {
        let mut x = Matrix::zeros(a[0].rows(), a[0].cols());
        for (m, &c) in a.iter().zip(null.iter()) {
            x = x + m.scale(c);
        }
        members.push(x);
    }
    span_basis(&members, tol).unwrap_or_default()
}

fn t43(spec: &InstanceSpec, trial: usize, rng: &mut ChaCha8Rng) -> Result<TrialOutcome> {
    let tol = &spec.tol;
    let mixed = spec.ambient_n >= 4 && trial % 3 == 2;
    let inst = if mixed {
        gen::gen_mixed_instance(rng, spec.ambient_n, tol)?
    } else {
        gen::gen_solvable_instance(rng, spec.ambient_n, spec.max_lie_dim, tol)?
    };
    let mut out = TrialOutcome::new(if mixed { "mixed-levi" } else { "solvable" }, spec.ambient_n);

    let algebra = generate_algebra(inst.g.basis(), tol)?;
    let rad = algebra.radical(tol)?;
    out.dims = vec![inst.g.dim(), inst.ideal.len(), algebra.dim(), rad.len()];

    // [j, g] lands in rad(A(g)).
    for (xi, x) in inst.ideal.iter().enumerate() {
        for (yi, y) in inst.g.basis().iter().enumerate() {
            let br = x.commutator(y);
            let res = span_residual(&rad, &br);
            out.check(res, tol.residual_at(br.norm()), || {
                format!(
                    "[j_{xi}, g_{yi}] escapes the radical ({})",
                    inst.ideal_kind.label()
                )
            });
        }
    }
    // rad(A(g)) consists of nilpotents.
    for (ri, r) in rad.iter().enumerate() {
        out.require(is_nilpotent(r, tol), || {
            format!("radical direction {ri} is not nilpotent")
        });
    }
    Ok(out)
}

fn prop42(spec: &InstanceSpec, trial: usize, rng: &mut ChaCha8Rng) -> Result<TrialOutcome> {
    let tol = &spec.tol;
    let inst = gen::gen_solvable_instance(rng, spec.ambient_n, spec.max_lie_dim, tol)?;
    let mut out = TrialOutcome::new("solvable", spec.ambient_n);

    let algebra = generate_algebra(inst.g.basis(), tol)?;
    let rad = algebra.radical(tol)?;
    let j = LieSubalgebra::from_orthonormal_basis(spec.ambient_n, inst.ideal.clone(), tol)?;
    let seed = gen::trial_seed(spec.seed, trial) ^ 0x517c_c1b7_2722_0a95;
    let (nil_j, dec) = nilpotent_subspace(&j, seed, tol)?;
    out.dims = vec![inst.g.dim(), j.dim(), nil_j.len(), rad.len()];

    // Hypothesis bookkeeping: root spaces must be nilpotent matrices (they
    // are, by the quantitative nilpotency bound, but verify before use).
    if !dec
        .roots
        .iter()
        .all(|r| r.space.iter().all(|x| is_nilpotent(x, tol)))
    {
        out.hypothesis_not_met = true;
        return Ok(out);
    }

    // N ^ j is an ideal of g.
    for (yi, y) in inst.g.basis().iter().enumerate() {
        for (zi, z) in nil_j.iter().enumerate() {
            let br = y.commutator(z);
            let res = span_residual(&nil_j, &br);
            out.check(res, tol.residual_at(br.norm()), || {
                format!("[g_{yi}, (N^j)_{zi}] escapes N^j")
            });
        }
    }
    // N ^ j is contained in rad(A).
    for (zi, z) in nil_j.iter().enumerate() {
        out.check(span_residual(&rad, z), tol.residual_at(z.norm()), || {
            format!("(N^j)_{zi} escapes the radical")
        });
    }
    // Cross-check the subspace on random j-elements: membership must agree
    // with matrix nilpotency in both directions.
    for k in 0..50 {
        let z = if k % 2 == 0 {
            unit_span_element(rng, j.basis(), spec.ambient_n)
        } else {
            unit_span_element(rng, &nil_j, spec.ambient_n)
        };
        if z.norm() == 0.0 {
            continue;
        }
        let member = span_residual(&nil_j, &z) <= 1e-6;
        let nil = is_nilpotent(&z, tol);
        out.require(member == nil, || {
            format!("sample {k}: membership ({member}) disagrees with nilpotency ({nil})")
        });
    }
    Ok(out)
}

fn prop26(spec: &InstanceSpec, trial: usize, rng: &mut ChaCha8Rng) -> Result<TrialOutcome> {
    let tol = &spec.tol;
    let inst = gen::gen_solvable_instance(rng, spec.ambient_n, spec.max_lie_dim, tol)?;
    let g = inst.g;
    let mut out = TrialOutcome::new("solvable", spec.ambient_n);

    let seed = gen::trial_seed(spec.seed, trial) ^ 0x2545_f491_4f6c_dd1d;
    let (nil_g, dec) = nilpotent_subspace(&g, seed, tol)?;
    out.dims = vec![g.dim(), dec.cartan.dim(), nil_g.len()];

    if !dec
        .roots
        .iter()
        .all(|r| r.space.iter().all(|x| is_nilpotent(x, tol)))
    {
        out.hypothesis_not_met = true;
        return Ok(out);
    }

    // The nilpotent subspace is an ideal of g.
    for (yi, y) in g.basis().iter().enumerate() {
        for (zi, z) in nil_g.iter().enumerate() {
            let br = y.commutator(z);
            let res = span_residual(&nil_g, &br);
            out.check(res, tol.residual_at(br.norm()), || {
                format!("[g_{yi}, (N^g)_{zi}] escapes N^g")
            });
        }
    }

    // Nest quotients along a central nilpotent element, when one exists:
    // nilpotency in g is equivalent to nilpotency of every quotient action.
    let center = g.center(tol);
    let central_nil = subspace_intersection(&center, &nil_g, tol);
    let central_nil: Vec<Matrix> = central_nil
        .into_iter()
        .filter(|y| y.norm() > 1e-6 && is_nilpotent(y, tol))
        .collect();
    if let Some(y) = central_nil.first() {
        let y = y.scale_re(1.0 / y.norm());
        let nest = g.nest_quotients(&y, tol)?;
        out.dims.push(nest.stages());
        let mut samples: Vec<Matrix> = g.basis().to_vec();
        for k in 0..50 {
            let x = if k % 2 == 0 {
                unit_span_element(rng, g.basis(), spec.ambient_n)
            } else {
                unit_span_element(rng, &nil_g, spec.ambient_n)
            };
            samples.push(x);
        }
        for (si, x) in samples.iter().enumerate() {
            if x.norm() == 0.0 {
                continue;
            }
            let lhs = is_nilpotent(x, tol);
            let rhs = (1..=nest.stages()).all(|k| {
                let image = nest.rho_of(k, x);
                image.rows() == 0 || is_nilpotent(&image, tol)
            });
            out.require(lhs == rhs, || {
                format!("nest sample {si}: nilpotency ({lhs}) vs quotient nilpotency ({rhs})")
            });
        }
    }
    Ok(out)
}

fn lemma27(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Result<TrialOutcome> {
    let tol = &spec.tol;
    let g = gen::gen_nilpotent_instance(rng, spec.ambient_n, spec.max_lie_dim, tol)?;
    let mut out = TrialOutcome::new("nilpotent", spec.ambient_n);
    let m = g.minimal_vanishing_degree(tol)?;
    out.dims = vec![g.dim(), m];
    out.require(m <= spec.ambient_n, || {
        format!("vanishing degree {m} exceeds ambient size")
    });
    // Multilinearity spot check on random m-tuples.
    for k in 0..100 {
        let mut product = Matrix::identity(spec.ambient_n);
        for _ in 0..m {
            product = product * unit_span_element(rng, g.basis(), spec.ambient_n);
        }
        out.check(product.norm(), tol.residual_at(1.0), || {
            format!("m-fold product {k} does not vanish")
        });
    }
    Ok(out)
}

fn lemma32(spec: &InstanceSpec, trial: usize, rng: &mut ChaCha8Rng) -> Result<TrialOutcome> {
    let tol = &spec.tol;
    let (algebra, family) = random_algebra(rng, spec.ambient_n, trial, tol)?;
    let mut out = TrialOutcome::new(family, spec.ambient_n);
    let rad = algebra.radical(tol)?;
    let center = algebra.center(tol);
    let zq = joint_quasinilpotent_subspace(&center, tol)?;
    out.dims = vec![algebra.dim(), center.len(), zq.len(), rad.len()];

    // Z ^ Q is contained in the radical.
    for (zi, z) in zq.iter().enumerate() {
        out.check(span_residual(&rad, z), tol.residual_at(z.norm()), || {
            format!("central quasi-nilpotent direction {zi} escapes the radical")
        });
    }
    // Random central elements: quasi-nilpotent ones must land in rad.
    for k in 0..50 {
        let z = unit_span_element(rng, &center, spec.ambient_n);
        if z.norm() == 0.0 {
            break;
        }
        if is_quasinilpotent(&z, tol)? {
            out.check(span_residual(&rad, &z), tol.residual_at(1.0), || {
                format!("central quasi-nilpotent sample {k} escapes the radical")
            });
        }
    }
    Ok(out)
}

fn lemma41(spec: &InstanceSpec, trial: usize, rng: &mut ChaCha8Rng) -> Result<TrialOutcome> {
    let tol = &spec.tol;
    let inst = gen::gen_commuting_semisimple(rng, spec.ambient_n, trial % 3 == 0, tol)?;
    let mut out = TrialOutcome::new("commuting-semisimple", spec.ambient_n);
    let algebra = generate_algebra(inst.g.basis(), tol)?;
    let rad = algebra.radical(tol)?;
    out.dims = vec![inst.g.dim(), inst.ideal.len(), algebra.dim()];

    // Hypotheses: rad A = {0} and every restricted ad nilpotent.
    if !rad.is_empty() {
        out.hypothesis_not_met = true;
        return Ok(out);
    }
    let j = LieSubalgebra::from_orthonormal_basis(spec.ambient_n, inst.ideal.clone(), tol)?;
    for a in inst.g.basis() {
        if !LieSubalgebra::is_ad_nilpotent_on(a, &j, tol)? {
            out.hypothesis_not_met = true;
            return Ok(out);
        }
    }
    // Conclusion: [g, j] = {0}.
    for (xi, x) in inst.g.basis().iter().enumerate() {
        for (ji, jb) in inst.ideal.iter().enumerate() {
            let br = x.commutator(jb);
            out.check(br.norm(), tol.residual_at(x.norm() * jb.norm()), || {
                format!("[g_{xi}, j_{ji}] is nonzero in the semisimple case")
            });
        }
    }
    Ok(out)
}

fn ks(spec: &InstanceSpec, trial: usize, rng: &mut ChaCha8Rng) -> Result<TrialOutcome> {
    let tol = &spec.tol;
    let triple = gen::gen_ks_triple(rng, spec.ambient_n.max(3), trial % 13 == 7)?;
    let mut out = TrialOutcome::new("ks-triple", spec.ambient_n.max(3));
    let (a, b, c) = (&triple.a, &triple.b, &triple.c);

    // Hypotheses: [a,b] = c (by construction) and c commutes with both.
    let scale = a.norm() * c.norm();
    if a.commutator(c).norm() > tol.residual_at(scale)
        || b.commutator(c).norm() > tol.residual_at(b.norm() * c.norm())
    {
        out.hypothesis_not_met = true;
        return Ok(out);
    }

    // c is quasi-nilpotent.
    out.check(spectral_radius(c)?, tol.spec_tol, || {
        "commutator has nonzero spectral radius".into()
    });

    // Proof identity and spectrum invariance of b + tc.
    let eig_b = eigenvalues(b)?;
    for &t in &[1.0, 2.5] {
        let e_plus = exp_matrix(&a.scale_re(t));
        let e_minus = exp_matrix(&a.scale_re(-t));
        let lhs = &e_plus * b * &e_minus;
        let rhs = b + &c.scale_re(t);
        out.check(lhs.distance(&rhs), 1e-6 * rhs.norm().max(1.0), || {
            format!("conjugation identity fails at t = {t}")
        });
        out.require(
            multiset_matches(&eig_b, &eigenvalues(&rhs)?, tol.spec_tol),
            || format!("spectrum of b + {t} c differs from spectrum of b"),
        );
    }
    Ok(out)
}

fn rosenblum(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Result<TrialOutcome> {
    let tol = &spec.tol;
    let n = spec.ambient_n.min(8);
    let (a1, a2) = gen::gen_dense_pair(rng, n);
    let mut out = TrialOutcome::new("dense-pair", n);
    let op = SylvesterOperator::new(a1, a2)?;

    // Spectrum inclusion in the difference set.
    let diffs = op.difference_set()?;
    for lambda in op.spectrum()? {
        let dist = diffs
            .iter()
            .map(|d| (lambda - d).norm())
            .fold(f64::INFINITY, f64::min);
        out.check(dist, tol.spec_tol, || {
            format!("operator eigenvalue {lambda} is outside the difference set")
        });
    }

    // Contour resolvent against the dense oracle, plus both identities.
    let r1 = spectral_radius(op.a1())?;
    let r2 = spectral_radius(op.a2())?;
    for k in 0..3 {
        let radius = (r1 + r2 + 1.0) * (1.2 + rng.gen::<f64>());
        let phase = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
        let lambda = Complex64::from_polar(radius, phase);
        let y = Matrix::from_fn(n, n, |_, _| gen::cnormal(rng));
        let y = y.scale_re(1.0 / y.norm());

        let x = op.rosenblum_resolve(lambda, &y, tol)?;
        let dense = op.dense_resolve(lambda, &y)?;
        out.check(x.distance(&dense), 1e-7 * dense.norm().max(1.0), || {
            format!("resolvent {k} disagrees with the dense oracle")
        });
        let defect = x.scale(lambda) - op.apply(&x) - &y;
        out.check(defect.norm(), 1e-7 * y.norm().max(1.0), || {
            format!("(lambda - Delta) T != id at probe {k}")
        });
        let w = y.scale(lambda) - op.apply(&y);
        let tx = op.rosenblum_resolve(lambda, &w, tol)?;
        out.check(tx.distance(&y), 1e-7 * y.norm().max(1.0), || {
            format!("T (lambda - Delta) != id at probe {k}")
        });
    }
    Ok(out)
}

fn cor34(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Result<TrialOutcome> {
    let tol = &spec.tol;
    let n = spec.ambient_n;
    let mut out = TrialOutcome::new("ad-eigvector", n);
    let (p, p_inv) = gen::conjugator(rng, n);

    // Distinct eigenvalue draws keep lambda bounded away from zero.
    let diag = loop {
        let entries: Vec<Complex64> = (0..n).map(|_| gen::cnormal(rng).scale(2.0)).collect();
        let mut separated = true;
        'sep: for i in 0..n {
            for j in 0..i {
                if (entries[i] - entries[j]).norm() < 0.3 {
                    separated = false;
                    break 'sep;
                }
            }
        }
        if separated {
            break entries;
        }
    };
    let a = &p * Matrix::diag(&diag) * &p_inv;
    let i = rng.gen_range(0..n);
    let j = loop {
        let j = rng.gen_range(0..n);
        if j != i {
            break j;
        }
    };
    let lambda = diag[i] - diag[j];
    let b_raw = &p * Matrix::unit(n, i, j) * &p_inv;
    let b = b_raw.scale_re(1.0 / b_raw.norm());
    let m = 1 + rng.gen_range(0..2usize);

    match check_ad_eigvector_nilpotent(&a, &b, lambda, m, tol, 1e-10)? {
        AdNilpotency::HypothesisNotMet { .. } => {
            out.hypothesis_not_met = true;
        }
        AdNilpotency::Checked {
            bound, power_norm, ..
        } => {
            out.dims = vec![bound, m];
            out.check(power_norm, 1e-10, || {
                format!("b^{bound} does not vanish (|lambda| = {:.3})", lambda.norm())
            });
        }
    }
    Ok(out)
}

fn quotient_spectrum(
    spec: &InstanceSpec,
    trial: usize,
    rng: &mut ChaCha8Rng,
) -> Result<TrialOutcome> {
    let tol = &spec.tol;
    let (algebra, family) = random_algebra(rng, spec.ambient_n, trial, tol)?;
    let mut out = TrialOutcome::new(family, spec.ambient_n);
    let rad = algebra.radical(tol)?;
    let (quotient, map) = algebra.quotient_by_ideal(&rad, tol)?;
    out.dims = vec![algebra.dim(), rad.len(), quotient.dim()];

    let mut elements: Vec<Matrix> = algebra.basis().to_vec();
    for _ in 0..20 {
        elements.push(unit_span_element(rng, algebra.basis(), spec.ambient_n));
    }
    for (ei, x) in elements.iter().enumerate() {
        let sigma_matrix = eigenvalues(x)?;
        let sigma_algebra = algebra.algebra_spectrum(x)?;
        let sigma_quotient = quotient.spectrum(&map.apply(x))?;
        out.check(hausdorff(&sigma_algebra, &sigma_matrix), tol.spec_tol, || {
            format!("element {ei}: algebra spectrum differs from eigenvalues")
        });
        out.check(hausdorff(&sigma_quotient, &sigma_matrix), tol.spec_tol, || {
            format!("element {ei}: quotient spectrum differs from eigenvalues")
        });
    }
    // rad(A / rad A) = {0}.
    out.require(quotient.radical_coords(tol)?.is_empty(), || {
        "quotient by the radical still has a radical".into()
    });
    Ok(out)
}

fn radii(spec: &InstanceSpec, trial: usize, rng: &mut ChaCha8Rng) -> Result<TrialOutcome> {
    let tol = &spec.tol;
    let x = gen::gen_generator_matrix(rng, spec.ambient_n, trial % 4 == 0);
    let algebra = generate_algebra(&[x], tol)?;
    let mut out = TrialOutcome::new("commutative", spec.ambient_n);
    out.dims = vec![algebra.dim()];

    for k in 0..50 {
        let u = unit_span_element(rng, algebra.basis(), spec.ambient_n);
        let v = unit_span_element(rng, algebra.basis(), spec.ambient_n);
        let report = submultiplicativity_check(&u, &v, tol)?;
        out.check(
            (-report.product_slack).max(0.0),
            0.0,
            || format!("pair {k}: r(uv) > r(u) r(v) + spec_tol"),
        );
        out.check((-report.sum_slack).max(0.0), 0.0, || {
            format!("pair {k}: r(u+v) > r(u) + r(v) + spec_tol")
        });
    }

    // rad A = Q_A as subspaces (mutual projection).
    let rad = algebra.radical(tol)?;
    let quasinil = joint_quasinilpotent_subspace(algebra.basis(), tol)?;
    out.dims.push(rad.len());
    out.dims.push(quasinil.len());
    for (zi, z) in quasinil.iter().enumerate() {
        out.check(span_residual(&rad, z), tol.residual_at(z.norm()), || {
            format!("quasi-nilpotent direction {zi} escapes the radical")
        });
    }
    for (ri, r) in rad.iter().enumerate() {
        out.check(span_residual(&quasinil, r), tol.residual_at(r.norm()), || {
            format!("radical direction {ri} escapes the quasi-nilpotent subspace")
        });
    }
    Ok(out)
}

fn unbounded_exp(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Result<TrialOutcome> {
    let tol = &spec.tol;
    let n = spec.ambient_n;
    let mut out = TrialOutcome::new("nilpotent-direction", n);

    // Strictly upper triangular seed with guaranteed weight on the (0,1)
    // entry: that entry of exp(t x) is exactly linear in t, which keeps the
    // growth bound safely above the threshold for every draw.
    let (p, p_inv) = gen::conjugator(rng, n);
    let mut t_mat = Matrix::from_fn(n, n, |i, j| {
        if j > i {
            gen::cnormal(rng).scale(0.15)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let rest = t_mat.norm();
    t_mat[(0, 1)] = Complex64::from_polar(
        (3.0 * rest).max(0.75),
        2.0 * std::f64::consts::PI * rng.gen::<f64>(),
    );
    let x_raw = &p * &t_mat * &p_inv;
    let x = x_raw.scale_re(1.0 / x_raw.norm());
    out.require(is_nilpotent(&x, tol), || "draw is not nilpotent".into());

    // Growth of the one-parameter unipotent group at t = 1000.
    let grown = exp_matrix(&x.scale_re(1000.0));
    let threshold = 10.0 * (n as f64).sqrt();
    out.require(grown.norm() >= threshold, || {
        format!(
            "|exp(1000 x)| = {:.3e} below required {threshold:.3e}",
            grown.norm()
        )
    });

    // Exp/Log round trips on the unipotent line 1 + C x.
    for k in 0..3 {
        let s = gen::cscale(rng);
        let u = Matrix::identity(n) + x.scale(s);
        let back = exp_matrix(&log_unipotent(&u, tol)?);
        out.check(back.distance(&u), 1e-9 * u.norm().max(1.0), || {
            format!("exp(log u) round trip fails at sample {k}")
        });
        let sx = x.scale(s);
        let logged = log_unipotent(&exp_matrix(&sx), tol)?;
        out.check(logged.distance(&sx), 1e-9 * sx.norm().max(1.0), || {
            format!("log(exp x) round trip fails at sample {k}")
        });
    }
    Ok(out)
}

fn radical_oracle(spec: &InstanceSpec, trial: usize, rng: &mut ChaCha8Rng) -> Result<TrialOutcome> {
    let tol = &spec.tol;
    // Single-generator algebras in M_4 have dimension at most 4.
    let n = 4;
    let x = gen::gen_generator_matrix(rng, n, trial % 3 == 0);
    let algebra = generate_algebra(&[x], tol)?;
    let mut out = TrialOutcome::new("single-generator", n);
    let rad = algebra.radical(tol)?;
    out.dims = vec![algebra.dim(), rad.len()];

    // Samples: radical basis, its orthocomplement in A, and random elements.
    let mut samples: Vec<(Matrix, bool)> = rad.iter().map(|r| (r.clone(), true)).collect();
    let deflated: Vec<Matrix> = algebra
        .basis()
        .iter()
        .map(|b| {
            let (_, proj) = crate::algebra::project_span(&rad, b);
            b - &proj
        })
        .collect();
    for c in span_basis(&deflated, tol)? {
        samples.push((c, false));
    }
    for _ in 0..20 {
        let z = unit_span_element(rng, algebra.basis(), n);
        let in_rad = span_residual(&rad, &z) <= tol.residual_at(1.0);
        samples.push((z, in_rad));
    }

    for (si, (sample, in_trace_rad)) in samples.iter().enumerate() {
        let member =
            super::oracle::definitional_radical_member(&algebra, sample, rng, 200, tol)?;
        // Mutual containment: the trace-form radical and the definitional
        // radical agree on every sample.
        out.require(member == *in_trace_rad, || {
            format!(
                "sample {si}: definitional membership ({member}) disagrees with \
                 trace-form membership ({in_trace_rad})"
            )
        });
        if member {
            out.check(span_residual(&rad, sample), tol.residual_at(1.0), || {
                format!("sample {si}: definitional member escapes the trace-form radical")
            });
        }
    }
    Ok(out)
}

/// Mixed algebra families for the spectrum/center suites, all built with
/// bounded Jordan depth so spectral comparisons stay well conditioned.
fn random_algebra(
    rng: &mut ChaCha8Rng,
    n: usize,
    trial: usize,
    tol: &TolerancePolicy,
) -> Result<(FiniteAlgebra, &'static str)> {
    match trial % 4 {
        0 => {
            let x = gen::gen_generator_matrix(rng, n, false);
            Ok((generate_algebra(&[x], tol)?, "single-generator"))
        }
        1 => {
            let (p, p_inv) = gen::conjugator(rng, n);
            let gens =
                gen::conjugate_all(&p, &p_inv, &[Matrix::unit(n, 0, 0), Matrix::unit(n, 0, 1)]);
            Ok((generate_algebra(&gens, tol)?, "triangular-block"))
        }
        2 => {
            let x = gen::gen_generator_matrix(rng, n, true);
            Ok((generate_algebra(&[x], tol)?, "single-generator-semisimple"))
        }
        _ => {
            let (p, p_inv) = gen::conjugator(rng, n);
            let gens =
                gen::conjugate_all(&p, &p_inv, &[Matrix::unit(n, 0, 1), Matrix::unit(n, 1, 0)]);
            Ok((generate_algebra(&gens, tol)?, "matrix-block"))
        }
    }
}
