//! Finite-dimensional unital associative subalgebras of `M_n(C)`:
//! generation, center, Jacobson radical, quotients and abstract spectra.
//!
//! The radical is computed as the nullspace of the trace Gram form, which
//! characterizes it for faithfully represented finite-dimensional algebras
//! in characteristic zero. The definitional invertibility test is kept as a
//! randomized cross-validation oracle in the verification module.

use num_complex::Complex64;

use crate::linalg::{eigenvalues, nullspace_scaled, span_basis, Matrix, MAX_AMBIENT};
use crate::{Error, Result, TolerancePolicy};

/// Orthogonal projection of `x` onto the span of an orthonormal family.
/// Returns the coordinates and the projection.
pub fn project_span(basis: &[Matrix], x: &Matrix) -> (Vec<Complex64>, Matrix) {
    let coords: Vec<Complex64> = basis.iter().map(|b| b.inner(x)).collect();
    let mut proj = Matrix::zeros(x.rows(), x.cols());
    for (b, &c) in basis.iter().zip(&coords) {
        proj = proj + b.scale(c);
    }
    (coords, proj)
}

/// Distance from `x` to the span of an orthonormal family.
pub fn span_residual(basis: &[Matrix], x: &Matrix) -> f64 {
    let (_, proj) = project_span(basis, x);
    x.distance(&proj)
}

/// `x^N = 0` up to residual tolerance, with `N` the ambient size. A matrix
/// that vanishes at the residual tolerance counts as nilpotent; anything
/// larger is normalized first so the power decision is scale-free.
pub fn is_nilpotent(a: &Matrix, tol: &TolerancePolicy) -> bool {
    let n = a.rows();
    assert!(a.is_square(), "nilpotency needs a square matrix");
    let norm = a.norm();
    if norm <= tol.residual_tol {
        return true;
    }
    let scaled = a.scale_re(1.0 / norm);
    scaled.pow(n).norm() <= tol.residual_tol
}

/// All eigenvalues within the spectral matching radius of zero.
pub fn is_quasinilpotent(a: &Matrix, tol: &TolerancePolicy) -> Result<bool> {
    let radius = tol.spec_radius(a.norm());
    Ok(eigenvalues(a)?.iter().all(|l| l.norm() <= radius))
}

/// 3-index structure constants `b_i b_j = sum_k c[i][j][k] b_k`.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    dim: usize,
    data: Vec<Complex64>,
}

impl StructureConstants {
    pub fn new_zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim * dim],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> Complex64 {
        self.data[(i * self.dim + j) * self.dim + k]
    }

    #[inline]
    pub fn set_entry(&mut self, i: usize, j: usize, k: usize, v: Complex64) {
        self.data[(i * self.dim + j) * self.dim + k] = v;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn scale_bound(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(1.0, f64::max)
    }

    /// Product of two coordinate vectors.
    pub fn mul(&self, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d];
        for i in 0..d {
            if a[i].norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..d {
                let ab = a[i] * b[j];
                if ab.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..d {
                    out[k] += ab * self.get(i, j, k);
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by the coordinate vector `a`.
    pub fn left_regular(&self, a: &[Complex64]) -> Matrix {
        let d = self.dim;
        Matrix::from_fn(d, d, |k, i| (0..d).map(|j| a[j] * self.get(j, i, k)).sum())
    }
}

/// A unital associative subalgebra of `M_n(C)`, carried by an orthonormal
/// basis together with its structure constants.
#[derive(Debug, Clone)]
pub struct FiniteAlgebra {
    ambient_n: usize,
    basis: Vec<Matrix>,
    unit_coords: Vec<Complex64>,
    structure: StructureConstants,
}

/// Structure constants without a matrix realization: quotient algebras and
/// anything else reached only through coordinates.
#[derive(Debug, Clone)]
pub struct AbstractAlgebra {
    structure: StructureConstants,
    unit_coords: Vec<Complex64>,
}

/// Coordinates of the quotient map `q : A -> A/ideal`.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    ideal: Vec<Matrix>,
    complement: Vec<Matrix>,
}

impl QuotientMap {
    /// Quotient coordinates of an algebra element.
    pub fn apply(&self, x: &Matrix) -> Vec<Complex64> {
        self.complement.iter().map(|c| c.inner(x)).collect()
    }

    pub fn ideal(&self) -> &[Matrix] {
        &self.ideal
    }

    pub fn complement(&self) -> &[Matrix] {
        &self.complement
    }
}

/// Smallest unital subalgebra of `M_n(C)` containing all generators.
///
/// Seeds the span with `{I} U generators` and closes under pairwise
/// products until the dimension stabilizes; terminates because the
/// dimension is bounded by `n^2`.
pub fn generate_algebra(generators: &[Matrix], tol: &TolerancePolicy) -> Result<FiniteAlgebra> {
    let n = match generators.first() {
        Some(g) => g.require_square()?,
        None => 1,
    };
    if n > MAX_AMBIENT {
        return Err(Error::Dimension(format!(
            "ambient size {n} exceeds cap {MAX_AMBIENT}"
        )));
    }
    for g in generators {
        g.check_finite()?;
        if g.rows() != n || g.cols() != n {
            return Err(Error::Dimension("generators of mixed ambient size".into()));
        }
    }

    let mut seed: Vec<Matrix> = vec![Matrix::identity(n)];
    seed.extend_from_slice(generators);
    let mut basis = span_basis(&seed, tol)?;
    loop {
        let mut extended = basis.clone();
        for a in &basis {
            for b in &basis {
                extended.push(a * b);
            }
        }
        let new_basis = span_basis(&extended, tol)?;
        if new_basis.len() == basis.len() {
            basis = new_basis;
            break;
        }
        basis = new_basis;
    }

    FiniteAlgebra::from_orthonormal_basis(n, basis, tol)
}

impl FiniteAlgebra {
    /// Assemble the algebra data from an orthonormal product-closed basis.
    pub fn from_orthonormal_basis(
        ambient_n: usize,
        basis: Vec<Matrix>,
        tol: &TolerancePolicy,
    ) -> Result<Self> {
        let dim = basis.len();
        let identity = Matrix::identity(ambient_n);
        let (unit_coords, unit_proj) = project_span(&basis, &identity);
        if identity.distance(&unit_proj) > tol.residual_at(identity.norm()) {
            return Err(Error::Precondition(
                "basis span does not contain the identity".into(),
            ));
        }

        let mut structure = StructureConstants::new_zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                let p = &basis[i] * &basis[j];
                let (coords, proj) = project_span(&basis, &p);
                if p.distance(&proj) > tol.residual_at(p.norm()) {
                    return Err(Error::Precondition(format!(
                        "basis is not closed under products (pair {i},{j}, residual {:.3e})",
                        p.distance(&proj)
                    )));
                }
                for (k, &c) in coords.iter().enumerate() {
                    structure.set_entry(i, j, k, c);
                }
            }
        }

        Ok(Self {
            ambient_n,
            basis,
            unit_coords,
            structure,
        })
    }

    /// The full matrix algebra `M_n(C)`.
    pub fn full(n: usize, tol: &TolerancePolicy) -> Result<Self> {
        let units: Vec<Matrix> = (0..n)
            .flat_map(|i| (0..n).map(move |j| Matrix::unit(n, i, j)))
            .collect();
        generate_algebra(&units, tol)
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn unit_coords(&self) -> &[Complex64] {
        &self.unit_coords
    }

    pub fn structure(&self) -> &StructureConstants {
        &self.structure
    }

    pub fn coords_of(&self, x: &Matrix) -> Vec<Complex64> {
        self.basis.iter().map(|b| b.inner(x)).collect()
    }

    pub fn from_coords(&self, coords: &[Complex64]) -> Matrix {
        let mut out = Matrix::zeros(self.ambient_n, self.ambient_n);
        for (b, &c) in self.basis.iter().zip(coords) {
            out = out + b.scale(c);
        }
        out
    }

    /// Distance from `x` to the algebra.
    pub fn membership_residual(&self, x: &Matrix) -> f64 {
        span_residual(&self.basis, x)
    }

    pub fn contains(&self, x: &Matrix, tol: &TolerancePolicy) -> bool {
        self.membership_residual(x) <= tol.residual_at(x.norm())
    }

    /// Basis of the center `{a in A : ab = ba for all b in A}`, solved as
    /// the nullspace of the stacked commutator operators in coordinates.
    pub fn center(&self, tol: &TolerancePolicy) -> Vec<Matrix> {
        let d = self.dim();
        if d == 0 {
            return Vec::new();
        }
        // Row block j: coordinates of [b_i, b_j] = b_i b_j - b_j b_i.
        let stacked = Matrix::from_fn(d * d, d, |row, i| {
            let j = row / d;
            let k = row % d;
            self.structure.get(i, j, k) - self.structure.get(j, i, k)
        });
        nullspace_scaled(&stacked, tol, 1.0)
            .into_iter()
            .map(|coords| self.from_coords(&coords))
            .collect()
    }

    /// Basis of the Jacobson radical, as the nullspace of the trace Gram
    /// form `G[i][j] = tr(b_i b_j)` (valid over `C` for a faithfully
    /// represented finite-dimensional algebra).
    pub fn radical(&self, tol: &TolerancePolicy) -> Result<Vec<Matrix>> {
        let d = self.dim();
        let gram = Matrix::from_fn(d, d, |i, j| (&self.basis[i] * &self.basis[j]).trace());
        let svd = crate::linalg::Svd::new(&gram)?;
        let cutoff = svd.cutoff(tol.rank_tol, 1.0);
        check_rank_unambiguous(&svd.values, cutoff, "radical trace form")?;
        let r = svd.rank_at(cutoff);
        Ok((r..d)
            .map(|j| self.from_coords(&svd.v.column(j)))
            .collect())
    }

    /// Quotient by a two-sided ideal: abstract structure constants on an
    /// orthogonal complement basis, plus the projection map.
    pub fn quotient_by_ideal(
        &self,
        ideal: &[Matrix],
        tol: &TolerancePolicy,
    ) -> Result<(AbstractAlgebra, QuotientMap)> {
        let ideal_basis = span_basis(ideal, tol)?;
        // Ideal must sit inside A and absorb products on both sides.
        for r in &ideal_basis {
            if !self.contains(r, tol) {
                return Err(Error::Precondition("ideal is not a subspace of A".into()));
            }
            for b in &self.basis {
                for p in [b * r, r * b] {
                    if span_residual(&ideal_basis, &p) > tol.residual_at(p.norm()) {
                        return Err(Error::Precondition(
                            "subspace is not a two-sided ideal".into(),
                        ));
                    }
                }
            }
        }

        // Complement basis: A-basis projected away from the ideal.
        let deflated: Vec<Matrix> = self
            .basis
            .iter()
            .map(|b| {
                let (_, proj) = project_span(&ideal_basis, b);
                b - &proj
            })
            .collect();
        let complement = crate::linalg::span_basis_floored(&deflated, tol)?;
        let qdim = complement.len();
        if qdim + ideal_basis.len() != self.dim() {
            return Err(Error::NumericalFailure(format!(
                "quotient dimension mismatch: {} + {} != {}",
                qdim,
                ideal_basis.len(),
                self.dim()
            )));
        }

        let mut structure = StructureConstants::new_zeros(qdim);
        for i in 0..qdim {
            for j in 0..qdim {
                let p = &complement[i] * &complement[j];
                for k in 0..qdim {
                    structure.set_entry(i, j, k, complement[k].inner(&p));
                }
            }
        }
        let map = QuotientMap {
            ideal: ideal_basis,
            complement,
        };
        let unit_coords = map.apply(&Matrix::identity(self.ambient_n));
        Ok((
            AbstractAlgebra {
                structure,
                unit_coords,
            },
            map,
        ))
    }

    /// The same algebra viewed abstractly through its structure constants.
    pub fn to_abstract(&self) -> AbstractAlgebra {
        AbstractAlgebra {
            structure: self.structure.clone(),
            unit_coords: self.unit_coords.clone(),
        }
    }

    /// Spectrum of an element computed inside the algebra (eigenvalues of
    /// left multiplication), as opposed to its matrix eigenvalues.
    pub fn algebra_spectrum(&self, x: &Matrix) -> Result<Vec<Complex64>> {
        self.to_abstract().spectrum(&self.coords_of(x))
    }

    /// A maximal commutative subalgebra containing `x`, grown greedily from
    /// the unital algebra generated by `x`: adjoin centralizer directions in
    /// index order until the centralizer of the result equals the result.
    pub fn extend_to_maximal_commutative(
        &self,
        x: &Matrix,
        tol: &TolerancePolicy,
    ) -> Result<FiniteAlgebra> {
        if !self.contains(x, tol) {
            return Err(Error::Precondition(
                "element is not a member of the algebra".into(),
            ));
        }
        let mut sub = generate_algebra(&[x.clone()], tol)?;
        loop {
            let centralizer = self.centralizer_of(sub.basis(), tol);
            if centralizer.len() == sub.dim() {
                return Ok(sub);
            }
            if centralizer.len() < sub.dim() {
                return Err(Error::NumericalFailure(
                    "centralizer smaller than the subalgebra it contains".into(),
                ));
            }
            let mut adjoined = false;
            let mut best: Option<(f64, Matrix)> = None;
            for c in &centralizer {
                let res = span_residual(sub.basis(), c);
                if res > 10.0 * tol.residual_tol {
                    let mut gens: Vec<Matrix> = sub.basis().to_vec();
                    gens.push(c.clone());
                    sub = generate_algebra(&gens, tol)?;
                    adjoined = true;
                    break;
                }
                if best.as_ref().map_or(true, |(r, _)| res > *r) {
                    best = Some((res, c.clone()));
                }
            }
            if !adjoined {
                let (_, c) = best
                    .ok_or_else(|| Error::NumericalFailure("empty centralizer basis".into()))?;
                let mut gens: Vec<Matrix> = sub.basis().to_vec();
                gens.push(c);
                let extended = generate_algebra(&gens, tol)?;
                if extended.dim() == sub.dim() {
                    return Err(Error::NumericalFailure(
                        "maximal commutative extension stalled".into(),
                    ));
                }
                sub = extended;
            }
        }
    }

    /// Basis of `{a in A : [a, s] = 0 for all s in the family}`.
    pub fn centralizer_of(&self, family: &[Matrix], tol: &TolerancePolicy) -> Vec<Matrix> {
        let d = self.dim();
        let n2 = self.ambient_n * self.ambient_n;
        if family.is_empty() {
            return self.basis.clone();
        }
        // Stack over the family: columns are vec([b_i, s]).
        let mut stacked = Matrix::zeros(family.len() * n2, d);
        for (si, s) in family.iter().enumerate() {
            for (i, b) in self.basis.iter().enumerate() {
                let col = b.commutator(s).to_vec();
                for (r, &v) in col.iter().enumerate() {
                    stacked[(si * n2 + r, i)] = v;
                }
            }
        }
        nullspace_scaled(&stacked, tol, 1.0)
            .into_iter()
            .map(|coords| self.from_coords(&coords))
            .collect()
    }
}

impl AbstractAlgebra {
    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn structure(&self) -> &StructureConstants {
        &self.structure
    }

    pub fn unit_coords(&self) -> &[Complex64] {
        &self.unit_coords
    }

    /// Associativity and two-sided-unit residuals of the structure
    /// constants; both must stay below the residual tolerance.
    pub fn validate(&self, tol: &TolerancePolicy) -> Result<()> {
        let d = self.dim();
        let scale = self.structure.scale_bound();
        for i in 0..d {
            let e_i = basis_vec(d, i);
            for v in [
                self.structure.mul(&self.unit_coords, &e_i),
                self.structure.mul(&e_i, &self.unit_coords),
            ] {
                let res = coord_distance(&v, &e_i);
                if res > tol.residual_at(scale) {
                    return Err(Error::Precondition(format!(
                        "unit fails to act as identity (residual {res:.3e})"
                    )));
                }
            }
            for j in 0..d {
                let e_j = basis_vec(d, j);
                for k in 0..d {
                    let e_k = basis_vec(d, k);
                    let left = self.structure.mul(&self.structure.mul(&e_i, &e_j), &e_k);
                    let right = self.structure.mul(&e_i, &self.structure.mul(&e_j, &e_k));
                    let res = coord_distance(&left, &right);
                    if res > tol.residual_at(scale * scale) {
                        return Err(Error::Precondition(format!(
                            "associativity residual {res:.3e} at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Spectrum of a coordinate vector via the left-regular representation:
    /// one-sided inverses are two-sided in finite-dimensional unital
    /// algebras, so singularity of `L_(a - lambda 1)` decides membership.
    pub fn spectrum(&self, coords: &[Complex64]) -> Result<Vec<Complex64>> {
        eigenvalues(&self.structure.left_regular(coords))
    }

    /// Radical of the abstract algebra through the trace form of its
    /// left-regular representation.
    pub fn radical_coords(&self, tol: &TolerancePolicy) -> Result<Vec<Vec<Complex64>>> {
        let d = self.dim();
        let regulars: Vec<Matrix> = (0..d)
            .map(|i| self.structure.left_regular(&basis_vec(d, i)))
            .collect();
        let gram = Matrix::from_fn(d, d, |i, j| (&regulars[i] * &regulars[j]).trace());
        let svd = crate::linalg::Svd::new(&gram)?;
        let cutoff = svd.cutoff(tol.rank_tol, 1.0);
        check_rank_unambiguous(&svd.values, cutoff, "abstract radical trace form")?;
        let r = svd.rank_at(cutoff);
        Ok((r..d).map(|j| svd.v.column(j)).collect())
    }
}

pub fn basis_vec(d: usize, i: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); d];
    v[i] = Complex64::new(1.0, 0.0);
    v
}

pub fn coord_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Rank decisions straddled by singular values within a factor 10 of the
/// cutoff are refused rather than silently resolved.
fn check_rank_unambiguous(values: &[f64], cutoff: f64, what: &str) -> Result<()> {
    if cutoff <= 0.0 {
        return Ok(());
    }
    for &s in values {
        if s > cutoff / 10.0 && s < cutoff * 10.0 {
            return Err(Error::NumericalFailure(format!(
                "{what}: singular value {s:.3e} is ambiguous at cutoff {cutoff:.3e}"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn upper_triangular_2x2() -> FiniteAlgebra {
        generate_algebra(&[Matrix::unit(2, 0, 0), Matrix::unit(2, 0, 1)], &tol()).unwrap()
    }

    #[test]
    fn generation_examples() {
        // No generators: the unital closure of nothing.
        let a = generate_algebra(&[], &tol());
        assert_eq!(a.unwrap().dim(), 1);
        // E12 squares to zero: closure is span{I, E12}.
        let a = generate_algebra(&[Matrix::unit(2, 0, 1)], &tol()).unwrap();
        assert_eq!(a.dim(), 2);
        assert!(a.contains(&Matrix::unit(2, 0, 1), &tol()));
        // E21 E12 = E22 completes the full matrix algebra.
        let gens = [
            Matrix::unit(2, 0, 0),
            Matrix::unit(2, 0, 1),
            Matrix::unit(2, 1, 0),
        ];
        assert_eq!(generate_algebra(&gens, &tol()).unwrap().dim(), 4);
    }

    #[test]
    fn center_examples() {
        let m2 = FiniteAlgebra::full(2, &tol()).unwrap();
        let z = m2.center(&tol());
        assert_eq!(z.len(), 1);
        // The central direction is scalar.
        let zn = z[0].scale(c(1.0, 0.0) / z[0][(0, 0)]);
        assert!(zn.approx_eq(&Matrix::identity(2), 1e-9));

        let comm = generate_algebra(&[Matrix::unit(2, 0, 1)], &tol()).unwrap();
        assert_eq!(comm.center(&tol()).len(), 2);

        let ut = upper_triangular_2x2();
        assert_eq!(ut.dim(), 3);
        assert_eq!(ut.center(&tol()).len(), 1);
    }

    #[test]
    fn radical_examples() {
        let m2 = FiniteAlgebra::full(2, &tol()).unwrap();
        assert!(m2.radical(&tol()).unwrap().is_empty());

        let ut = upper_triangular_2x2();
        let rad = ut.radical(&tol()).unwrap();
        assert_eq!(rad.len(), 1);
        // rad = C E12.
        assert!(span_residual(&rad, &Matrix::unit(2, 0, 1)) < 1e-9);

        let comm = generate_algebra(&[Matrix::unit(2, 0, 1)], &tol()).unwrap();
        let rad = comm.radical(&tol()).unwrap();
        assert_eq!(rad.len(), 1);
        assert!(span_residual(&rad, &Matrix::unit(2, 0, 1)) < 1e-9);
    }

    #[test]
    fn radical_elements_are_nilpotent_two_sided() {
        let ut = upper_triangular_2x2();
        let rad = ut.radical(&tol()).unwrap();
        for r in &rad {
            assert!(is_nilpotent(r, &tol()));
            for b in ut.basis() {
                for p in [b * r, r * b] {
                    assert!(span_residual(&rad, &p) <= tol().residual_at(p.norm()));
                }
            }
        }
    }

    #[test]
    fn quotient_examples() {
        let ut = upper_triangular_2x2();
        let rad = ut.radical(&tol()).unwrap();
        let (q, map) = ut.quotient_by_ideal(&rad, &tol()).unwrap();
        assert_eq!(q.dim(), 2);
        q.validate(&tol()).unwrap();
        // Quotient is commutative: C x C.
        for i in 0..2 {
            for j in 0..2 {
                let e_i = basis_vec(2, i);
                let e_j = basis_vec(2, j);
                let ab = q.structure().mul(&e_i, &e_j);
                let ba = q.structure().mul(&e_j, &e_i);
                assert!(coord_distance(&ab, &ba) < 1e-10);
            }
        }
        // q is a unital homomorphism on a sample pair.
        let a = Matrix::unit(2, 0, 0);
        let b = &Matrix::identity(2) + &Matrix::unit(2, 0, 1);
        let qa_qb = q.structure().mul(&map.apply(&a), &map.apply(&b));
        let qab = map.apply(&(&a * &b));
        assert!(coord_distance(&qa_qb, &qab) < 1e-10);

        // Quotient by the zero ideal preserves the dimension.
        let (q0, _) = ut.quotient_by_ideal(&[], &tol()).unwrap();
        assert_eq!(q0.dim(), 3);

        // A non-ideal subspace is rejected.
        let err = ut.quotient_by_ideal(&[Matrix::unit(2, 0, 0)], &tol());
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn abstract_spectrum_examples() {
        let ut = upper_triangular_2x2();
        let q = ut.to_abstract();
        // Unit has spectrum {1} with full multiplicity.
        let spec = q.spectrum(ut.unit_coords()).unwrap();
        assert_eq!(spec.len(), 3);
        assert!(spec.iter().all(|l| (l - c(1.0, 0.0)).norm() < 1e-9));

        // a = diag(1,2) + E12: spectrum {1, 2} as a set.
        let a = Matrix::from_real(&[&[1.0, 1.0], &[0.0, 2.0]]);
        let spec = ut.algebra_spectrum(&a).unwrap();
        for l in &spec {
            assert!((l - c(1.0, 0.0)).norm() < 1e-8 || (l - c(2.0, 0.0)).norm() < 1e-8);
        }
        for target in [c(1.0, 0.0), c(2.0, 0.0)] {
            assert!(spec.iter().any(|l| (l - target).norm() < 1e-8));
        }

        // Nilpotent element: spectrum {0}.
        let spec = ut.algebra_spectrum(&Matrix::unit(2, 0, 1)).unwrap();
        assert!(spec.iter().all(|l| l.norm() < 1e-9));
    }

    #[test]
    fn nilpotency_predicates() {
        let t = tol();
        assert!(is_nilpotent(&Matrix::unit(2, 0, 1), &t));
        assert!(is_quasinilpotent(&Matrix::unit(2, 0, 1), &t).unwrap());
        let d = Matrix::diag(&[c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(!is_nilpotent(&d, &t));
        assert!(!is_quasinilpotent(&d, &t).unwrap());
        // [[1,-1],[1,-1]] squares to zero.
        let m = Matrix::from_real(&[&[1.0, -1.0], &[1.0, -1.0]]);
        assert!(is_nilpotent(&m, &t));
        assert!(is_quasinilpotent(&m, &t).unwrap());
    }

    #[test]
    fn maximal_commutative_examples() {
        let t = tol();
        let m2 = FiniteAlgebra::full(2, &t).unwrap();
        // Around a regular diagonal element: the diagonal algebra.
        let diag = Matrix::diag(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let s = m2.extend_to_maximal_commutative(&diag, &t).unwrap();
        assert_eq!(s.dim(), 2);
        for b in s.basis() {
            assert!(b.commutator(&diag).norm() < 1e-9);
        }
        // Around E12: span{I, E12}.
        let s = m2
            .extend_to_maximal_commutative(&Matrix::unit(2, 0, 1), &t)
            .unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&Matrix::unit(2, 0, 1), &t));
        // A commutative algebra is already maximal in itself.
        let comm = generate_algebra(&[Matrix::unit(2, 0, 1)], &t).unwrap();
        let s = comm
            .extend_to_maximal_commutative(&Matrix::unit(2, 0, 1), &t)
            .unwrap();
        assert_eq!(s.dim(), comm.dim());
    }

    #[test]
    fn equispectrality_of_maximal_commutative() {
        let t = tol();
        let m2 = FiniteAlgebra::full(2, &t).unwrap();
        let x = Matrix::from_real(&[&[1.0, 1.0], &[0.0, 2.0]]);
        let s = m2.extend_to_maximal_commutative(&x, &t).unwrap();
        let sigma_s = s.algebra_spectrum(&x).unwrap();
        let sigma_mat = eigenvalues(&x).unwrap();
        for l in &sigma_s {
            assert!(sigma_mat.iter().any(|m| (l - m).norm() < 1e-7));
        }
        for m in &sigma_mat {
            assert!(sigma_s.iter().any(|l| (l - m).norm() < 1e-7));
        }
    }

    #[test]
    fn quotient_of_radical_is_semisimple() {
        let ut = upper_triangular_2x2();
        let rad = ut.radical(&tol()).unwrap();
        let (q, _) = ut.quotient_by_ideal(&rad, &tol()).unwrap();
        assert!(q.radical_coords(&tol()).unwrap().is_empty());
    }
}
