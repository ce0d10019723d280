//! Lie subalgebras of `M_n(C)`: bracket closure, solvability and nilpotency,
//! the solvable radical through the Killing form, Cartan subalgebras,
//! root-space/Fitting decompositions, nest-quotient representations along a
//! central nilpotent element, and the minimal vanishing degree of nilpotent
//! families.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{is_nilpotent, span_residual, StructureConstants};
use crate::linalg::{generalized_eigenspace_scaled, nullspace_scaled, span_basis, Matrix, MAX_AMBIENT};
use crate::{Error, Result, TolerancePolicy};

/// A bracket-closed subspace of `M_n(C)` with an orthonormal basis and the
/// Lie structure constants `[b_i, b_j] = sum_k c[i][j][k] b_k`.
#[derive(Debug, Clone)]
pub struct LieSubalgebra {
    ambient_n: usize,
    basis: Vec<Matrix>,
    brackets: StructureConstants,
}

/// One root: the functional's values on the Cartan basis, and an orthonormal
/// basis of the corresponding root space.
#[derive(Debug, Clone)]
pub struct Root {
    pub values: Vec<Complex64>,
    pub space: Vec<Matrix>,
}

/// Cartan subalgebra plus the root-space and Fitting data derived from it.
#[derive(Debug, Clone)]
pub struct CartanDecomposition {
    pub cartan: LieSubalgebra,
    pub roots: Vec<Root>,
    /// Direct sum of the nonzero root spaces.
    pub fitting_plus: Vec<Matrix>,
    /// Span of the decomposition directions whose ad is nilpotent. For
    /// general algebras this set need not be a subspace; the flag below
    /// records whether random combinations stayed ad-nilpotent.
    pub ad_nilpotent_part: Vec<Matrix>,
    pub ad_nilpotent_consistent: bool,
}

impl CartanDecomposition {
    /// Value of a root functional on an arbitrary Cartan element.
    pub fn root_value(&self, root: &Root, h_elem: &Matrix) -> Complex64 {
        self.cartan
            .coords_of(h_elem)
            .iter()
            .zip(&root.values)
            .map(|(c, v)| c * v)
            .sum()
    }
}

/// The invariant flag `{0} = X_0 <= ... <= X_m = C^n` with `X_k = Ker(Y^k)`,
/// and the quotient actions of the algebra on each `X_k / X_{k-1}`.
#[derive(Debug, Clone)]
pub struct NestQuotients {
    /// Kernel dimensions `[0, dim X_1, ..., dim X_m = n]`.
    pub dims: Vec<usize>,
    /// Orthonormal bases of the quotient complements `X_k (-) X_{k-1}`,
    /// as columns.
    complements: Vec<Matrix>,
    /// Images of the algebra basis on each quotient.
    pub rho: Vec<Vec<Matrix>>,
}

impl NestQuotients {
    pub fn stages(&self) -> usize {
        self.complements.len()
    }

    /// Action of an arbitrary ambient matrix on the k-th quotient
    /// (1-indexed like the nest).
    pub fn rho_of(&self, k: usize, x: &Matrix) -> Matrix {
        let c = &self.complements[k - 1];
        c.adjoint() * x * c
    }
}

/// Orthonormal basis of the span of coordinate vectors in `C^d`.
fn coord_span(vecs: &[Vec<Complex64>], tol: &TolerancePolicy) -> Vec<Vec<Complex64>> {
    if vecs.is_empty() {
        return Vec::new();
    }
    let stacked = Matrix::from_columns(vecs);
    crate::linalg::orthonormal_columns(&stacked, tol)
}

/// Span of products of unit-norm elements: products below the residual
/// tolerance are rounding noise and count as zero, the rest are normalized
/// so the rank decision stays scale-free.
fn coord_span_floored(vecs: &[Vec<Complex64>], tol: &TolerancePolicy) -> Vec<Vec<Complex64>> {
    let kept: Vec<Vec<Complex64>> = vecs
        .iter()
        .filter_map(|v| {
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm <= tol.residual_tol {
                None
            } else {
                Some(v.iter().map(|z| z / norm).collect())
            }
        })
        .collect();
    coord_span(&kept, tol)
}

/// Same floor for spans of product matrices.
fn span_floored(mats: &[Matrix], tol: &TolerancePolicy) -> crate::Result<Vec<Matrix>> {
    crate::linalg::span_basis_floored(mats, tol)
}

/// Close a spanning family under commutator brackets.
pub fn make_lie_subalgebra(spanning: &[Matrix], tol: &TolerancePolicy) -> Result<LieSubalgebra> {
    let n = match spanning.first() {
        Some(m) => m.require_square()?,
        None => 1,
    };
    if n > MAX_AMBIENT {
        return Err(Error::Dimension(format!(
            "ambient size {n} exceeds cap {MAX_AMBIENT}"
        )));
    }
    for m in spanning {
        m.check_finite()?;
        if m.rows() != n || m.cols() != n {
            return Err(Error::Dimension("spanning set of mixed ambient size".into()));
        }
    }
    let mut basis = span_basis(spanning, tol)?;
    loop {
        let mut extended = basis.clone();
        for a in &basis {
            for b in &basis {
                extended.push(a.commutator(b));
            }
        }
        let new_basis = span_basis(&extended, tol)?;
        if new_basis.len() > MAX_AMBIENT {
            return Err(Error::SizeLimit(format!(
                "bracket closure reached dimension {}",
                new_basis.len()
            )));
        }
        if new_basis.len() == basis.len() {
            basis = new_basis;
            break;
        }
        basis = new_basis;
    }
    LieSubalgebra::from_orthonormal_basis(n, basis, tol)
}

impl LieSubalgebra {
    /// Assemble from an orthonormal bracket-closed basis.
    pub fn from_orthonormal_basis(
        ambient_n: usize,
        basis: Vec<Matrix>,
        tol: &TolerancePolicy,
    ) -> Result<Self> {
        let dim = basis.len();
        if dim > MAX_AMBIENT {
            return Err(Error::SizeLimit(format!("Lie dimension {dim} exceeds cap")));
        }
        let mut brackets = StructureConstants::new_zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                let br = basis[i].commutator(&basis[j]);
                let coords: Vec<Complex64> = basis.iter().map(|b| b.inner(&br)).collect();
                let mut proj = Matrix::zeros(ambient_n, ambient_n);
                for (b, &c) in basis.iter().zip(&coords) {
                    proj = proj + b.scale(c);
                }
                if br.distance(&proj) > tol.residual_at(br.norm()) {
                    return Err(Error::Precondition(format!(
                        "basis is not bracket-closed (pair {i},{j}, residual {:.3e})",
                        br.distance(&proj)
                    )));
                }
                for (k, &c) in coords.iter().enumerate() {
                    brackets.set_entry(i, j, k, c);
                }
            }
        }
        Ok(Self {
            ambient_n,
            basis,
            brackets,
        })
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

    pub fn brackets(&self) -> &StructureConstants {
        &self.brackets
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

    pub fn membership_residual(&self, x: &Matrix) -> f64 {
        span_residual(&self.basis, x)
    }

    pub fn contains(&self, x: &Matrix, tol: &TolerancePolicy) -> bool {
        self.membership_residual(x) <= tol.residual_at(x.norm())
    }

    /// Matrix of `ad x` on the algebra in basis coordinates, for `x` inside
    /// the algebra (given by coordinates).
    pub fn ad_matrix_coords(&self, coords: &[Complex64]) -> Matrix {
        let d = self.dim();
        Matrix::from_fn(d, d, |k, i| {
            (0..d).map(|j| coords[j] * self.brackets.get(j, i, k)).sum()
        })
    }

    /// Matrix of `ad x` restricted to the algebra, for an ambient matrix `x`
    /// that normalizes it. Errors when `[x, g]` leaves the algebra.
    pub fn ad_matrix_of(&self, x: &Matrix, tol: &TolerancePolicy) -> Result<Matrix> {
        let d = self.dim();
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
        for b in &self.basis {
            let br = x.commutator(b);
            if self.membership_residual(&br) > tol.residual_at(br.norm()) {
                return Err(Error::Precondition(
                    "subspace is not invariant under ad x".into(),
                ));
            }
            cols.push(self.coords_of(&br));
        }
        if d == 0 {
            return Ok(Matrix::zeros(0, 0));
        }
        Ok(Matrix::from_columns(&cols))
    }

    /// Derived series `g >= [g,g] >= ... ` until the dimension stabilizes,
    /// as matrix bases.
    pub fn derived_series(&self, tol: &TolerancePolicy) -> Vec<Vec<Matrix>> {
        let d = self.dim();
        let mut current: Vec<Vec<Complex64>> =
            (0..d).map(|i| crate::algebra::basis_vec(d, i)).collect();
        let mut out = vec![current.iter().map(|c| self.from_coords(c)).collect::<Vec<_>>()];
        loop {
            let mut products = Vec::new();
            for a in &current {
                for b in &current {
                    products.push(self.brackets.mul(a, b));
                }
            }
            let next = coord_span_floored(&products, tol);
            if next.len() == current.len() {
                break;
            }
            out.push(next.iter().map(|c| self.from_coords(c)).collect());
            let stop = next.is_empty();
            current = next;
            if stop {
                break;
            }
        }
        out
    }

    pub fn is_solvable(&self, tol: &TolerancePolicy) -> bool {
        self.derived_series(tol).last().map_or(true, Vec::is_empty)
    }

    /// Lower central series termination.
    pub fn is_nilpotent_lie(&self, tol: &TolerancePolicy) -> bool {
        let d = self.dim();
        let g_basis: Vec<Vec<Complex64>> =
            (0..d).map(|i| crate::algebra::basis_vec(d, i)).collect();
        let mut current = g_basis.clone();
        loop {
            let mut products = Vec::new();
            for a in &g_basis {
                for b in &current {
                    products.push(self.brackets.mul(a, b));
                }
            }
            let next = coord_span_floored(&products, tol);
            if next.is_empty() {
                return true;
            }
            if next.len() == current.len() {
                return false;
            }
            current = next;
        }
    }

    /// Basis of the center `{x in g : [x, g] = 0}`.
    pub fn center(&self, tol: &TolerancePolicy) -> Vec<Matrix> {
        let d = self.dim();
        if d == 0 {
            return Vec::new();
        }
        let stacked = Matrix::from_fn(d * d, d, |row, i| {
            let j = row / d;
            let k = row % d;
            self.brackets.get(i, j, k)
        });
        nullspace_scaled(&stacked, tol, 1.0)
            .into_iter()
            .map(|coords| self.from_coords(&coords))
            .collect()
    }

    /// Killing form matrix `K[i][j] = tr(ad b_i ad b_j)`.
    pub fn killing_form(&self) -> Matrix {
        let d = self.dim();
        let ads: Vec<Matrix> = (0..d)
            .map(|i| self.ad_matrix_coords(&crate::algebra::basis_vec(d, i)))
            .collect();
        Matrix::from_fn(d, d, |i, j| (&ads[i] * &ads[j]).trace())
    }

    /// Largest solvable ideal: the Killing-orthogonal complement of the
    /// derived algebra (characteristic-zero criterion), verified to be a
    /// solvable ideal before returning.
    pub fn solvable_radical(&self, tol: &TolerancePolicy) -> Result<LieSubalgebra> {
        let d = self.dim();
        if d == 0 {
            return Ok(self.clone());
        }
        let killing = self.killing_form();
        // Coordinates of a derived-algebra basis.
        let mut derived_vecs = Vec::new();
        for i in 0..d {
            for j in 0..d {
                derived_vecs.push(
                    (0..d)
                        .map(|k| self.brackets.get(i, j, k))
                        .collect::<Vec<_>>(),
                );
            }
        }
        let derived = coord_span_floored(&derived_vecs, tol);
        let coords = if derived.is_empty() {
            // Abelian algebra: it is its own radical.
            (0..d).map(|i| crate::algebra::basis_vec(d, i)).collect()
        } else {
            let constraint = Matrix::from_fn(derived.len(), d, |j, i| {
                (0..d).map(|k| killing[(i, k)] * derived[j][k]).sum()
            });
            nullspace_scaled(&constraint, tol, 1.0)
        };
        let mats: Vec<Matrix> = coords.iter().map(|c| self.from_coords(c)).collect();
        let radical = LieSubalgebra::from_orthonormal_basis(self.ambient_n, mats, tol)
            .map_err(|e| Error::NumericalFailure(format!("radical is not a subalgebra: {e}")))?;
        if !radical.is_solvable(tol) {
            return Err(Error::NumericalFailure(
                "Killing-orthogonal complement failed the solvability check".into(),
            ));
        }
        for b in &self.basis {
            for r in radical.basis() {
                let br = b.commutator(r);
                if radical.membership_residual(&br) > tol.residual_at(br.norm()) {
                    return Err(Error::NumericalFailure(
                        "solvable radical failed the ideal check".into(),
                    ));
                }
            }
        }
        Ok(radical)
    }

    /// Sub-Lie-algebra spanned by coordinate vectors (must be bracket
    /// closed).
    fn subalgebra_from_coords(
        &self,
        coords: &[Vec<Complex64>],
        tol: &TolerancePolicy,
    ) -> Result<LieSubalgebra> {
        let mats: Vec<Matrix> = coords.iter().map(|c| self.from_coords(c)).collect();
        LieSubalgebra::from_orthonormal_basis(self.ambient_n, mats, tol)
    }

    /// Cartan subalgebra: the Fitting-null component of `ad h0` for a
    /// randomly sampled element `h0`, retried until the candidate is
    /// nilpotent and self-normalizing. Generic elements are regular with
    /// probability one, so a handful of draws suffices.
    pub fn cartan_subalgebra(&self, seed: u64, tol: &TolerancePolicy) -> Result<LieSubalgebra> {
        let d = self.dim();
        if d == 0 {
            return Ok(self.clone());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _attempt in 0..10 {
            let coords: Vec<Complex64> = (0..d)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(re, im)
                })
                .collect();
            let ad = self.ad_matrix_coords(&coords);
            let scale = ad.norm().max(1.0);
            let Ok(null_coords) =
                generalized_eigenspace_scaled(&ad, Complex64::new(0.0, 0.0), tol, scale)
            else {
                continue;
            };
            let Ok(candidate) = self.subalgebra_from_coords(&null_coords, tol) else {
                continue;
            };
            if !candidate.is_nilpotent_lie(tol) {
                continue;
            }
            if self.normalizer_dim(&candidate, tol) != candidate.dim() {
                continue;
            }
            return Ok(candidate);
        }
        Err(Error::NumericalFailure(
            "no Cartan subalgebra found in 10 regular-element draws".into(),
        ))
    }

    /// Dimension of the normalizer `{x in g : [x, h] <= h}`.
    fn normalizer_dim(&self, h: &LieSubalgebra, tol: &TolerancePolicy) -> usize {
        let d = self.dim();
        // Complement directions of h inside g, in g-coordinates.
        let h_coords: Vec<Vec<Complex64>> = h.basis().iter().map(|b| self.coords_of(b)).collect();
        let mut deflated = Vec::new();
        for i in 0..d {
            let mut v = crate::algebra::basis_vec(d, i);
            for hc in &h_coords {
                let overlap: Complex64 = hc.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(hc) {
                    *x -= overlap * y;
                }
            }
            deflated.push(v);
        }
        let complement = coord_span_floored(&deflated, tol);
        if complement.is_empty() {
            return d;
        }
        // Rows: projection of [b_i, h_s] onto each complement direction.
        let hd = h.dim();
        let stacked = Matrix::from_fn(hd * complement.len(), d, |row, i| {
            let s = row / complement.len();
            let t = row % complement.len();
            let br_coords = self.coords_of(&self.basis[i].commutator(&h.basis()[s]));
            complement[t]
                .iter()
                .zip(&br_coords)
                .map(|(a, b)| a.conj() * b)
                .sum()
        });
        nullspace_scaled(&stacked, tol, 1.0).len()
    }

    /// Root-space decomposition with respect to a Cartan subalgebra:
    /// simultaneous generalized eigenspaces of `ad h_s`, the nonzero-weight
    /// spaces summed into the Fitting part, and the ad-nilpotent span.
    pub fn root_decomposition(
        &self,
        h: &LieSubalgebra,
        seed: u64,
        tol: &TolerancePolicy,
    ) -> Result<CartanDecomposition> {
        let d = self.dim();
        let ads: Vec<Matrix> = h
            .basis()
            .iter()
            .map(|hb| self.ad_matrix_of(hb, tol))
            .collect::<Result<_>>()?;
        let spaces = simultaneous_weight_spaces(&ads, d, tol)?;

        let mut roots: Vec<Root> = Vec::new();
        let mut zero_dims = 0usize;
        let mut fitting_plus_mats: Vec<Matrix> = Vec::new();
        for (values, cols) in &spaces {
            let is_zero = values
                .iter()
                .zip(&ads)
                .all(|(v, ad)| v.norm() <= tol.spec_radius(ad.norm()));
            if is_zero {
                zero_dims += cols.len();
                continue;
            }
            let space: Vec<Matrix> = cols.iter().map(|c| self.from_coords(c)).collect();
            fitting_plus_mats.extend(space.iter().cloned());
            // Merge with an existing root whose values agree componentwise.
            let mut merged = false;
            for root in roots.iter_mut() {
                if root
                    .values
                    .iter()
                    .zip(values)
                    .all(|(a, b)| (a - b).norm() < tol.spec_tol)
                {
                    root.space.extend(space.iter().cloned());
                    merged = true;
                    break;
                }
            }
            if !merged {
                roots.push(Root {
                    values: values.clone(),
                    space,
                });
            }
        }

        if zero_dims + fitting_plus_mats.len() != d || zero_dims != h.dim() {
            return Err(Error::NumericalFailure(format!(
                "Fitting decomposition dimension mismatch: zero weight {zero_dims}, \
                 nonzero {}, cartan {}, total {d}",
                fitting_plus_mats.len(),
                h.dim()
            )));
        }

        // ad-nilpotent directions among the decomposition basis.
        let mut nilpotent_dirs: Vec<Matrix> = Vec::new();
        let mut candidates: Vec<Matrix> = h.basis().to_vec();
        candidates.extend(fitting_plus_mats.iter().cloned());
        for cand in &candidates {
            let ad = self.ad_matrix_of(cand, tol)?;
            if is_nilpotent(&ad, tol) {
                nilpotent_dirs.push(cand.clone());
            }
        }
        let ad_nilpotent_part = span_basis(&nilpotent_dirs, tol)?;
        let mut consistent = true;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        for _ in 0..20 {
            if ad_nilpotent_part.is_empty() {
                break;
            }
            let mut combo = Matrix::zeros(self.ambient_n, self.ambient_n);
            for b in &ad_nilpotent_part {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                combo = combo + b.scale(Complex64::new(re, im));
            }
            let ad = self.ad_matrix_of(&combo, tol)?;
            if !is_nilpotent(&ad, tol) {
                consistent = false;
                break;
            }
        }

        Ok(CartanDecomposition {
            cartan: h.clone(),
            roots,
            fitting_plus: span_basis(&fitting_plus_mats, tol)?,
            ad_nilpotent_part,
            ad_nilpotent_consistent: consistent,
        })
    }

    /// Nest-quotient representations along a central nilpotent `y`: the flag
    /// `X_k = Ker(y^k)` is invariant, and the algebra acts on each quotient
    /// `X_k / X_{k-1}`.
    pub fn nest_quotients(&self, y: &Matrix, tol: &TolerancePolicy) -> Result<NestQuotients> {
        let n = self.ambient_n;
        if y.rows() != n || y.cols() != n {
            return Err(Error::Dimension("central element shape mismatch".into()));
        }
        if y.norm() == 0.0 {
            return Err(Error::Precondition("central element must be nonzero".into()));
        }
        if !self.contains(y, tol) {
            return Err(Error::Precondition("central element must lie in g".into()));
        }
        if !is_nilpotent(y, tol) {
            return Err(Error::Precondition("central element must be nilpotent".into()));
        }
        for b in &self.basis {
            let br = y.commutator(b);
            if br.norm() > tol.residual_at(y.norm() * b.norm()) {
                return Err(Error::Precondition(
                    "element is not central in g".into(),
                ));
            }
        }

        // Kernel flag of the normalized powers.
        let y1 = y.scale_re(1.0 / y.norm());
        let mut kernels: Vec<Vec<Vec<Complex64>>> = Vec::new();
        let mut dims = vec![0usize];
        let mut power = Matrix::identity(n);
        for _ in 1..=n {
            power = power.matmul(&y1);
            let norm = power.norm();
            // A chain of unit-norm factors collapsing to the rank floor is
            // structurally zero: the kernel is everything.
            let ker = if norm <= tol.rank_tol {
                (0..n).map(|i| Matrix::identity(n).column(i)).collect()
            } else {
                power = power.scale_re(1.0 / norm);
                nullspace_scaled(&power, tol, 1.0)
            };
            let dim = ker.len();
            let done = dim == n;
            dims.push(dim);
            kernels.push(ker);
            if done {
                break;
            }
        }
        if dims.last() != Some(&n) {
            return Err(Error::NumericalFailure(
                "kernel flag failed to reach the full space".into(),
            ));
        }
        for w in dims.windows(2) {
            if w[1] < w[0] {
                return Err(Error::NumericalFailure("kernel flag is not nested".into()));
            }
        }

        let mut complements: Vec<Matrix> = Vec::new();
        let mut rho: Vec<Vec<Matrix>> = Vec::new();
        let mut previous: Vec<Vec<Complex64>> = Vec::new();
        for ker in &kernels {
            // Complement of X_{k-1} inside X_k.
            let mut deflated = Vec::new();
            for v in ker {
                let mut w = v.clone();
                for p in &previous {
                    let overlap: Complex64 = p.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                    for (x, y) in w.iter_mut().zip(p) {
                        *x -= overlap * y;
                    }
                }
                deflated.push(w);
            }
            let comp_cols = coord_span_floored(&deflated, tol);
            let comp = if comp_cols.is_empty() {
                Matrix::zeros(n, 0)
            } else {
                Matrix::from_columns(&comp_cols)
            };

            // Invariance of X_k under the algebra.
            let full: Vec<Vec<Complex64>> = previous
                .iter()
                .cloned()
                .chain(comp_cols.iter().cloned())
                .collect();
            for b in &self.basis {
                for v in &full {
                    let img = b.mul_vec(v);
                    let mut res = img.clone();
                    for basis_vec in &full {
                        let overlap: Complex64 =
                            basis_vec.iter().zip(&img).map(|(a, b)| a.conj() * b).sum();
                        for (x, y) in res.iter_mut().zip(basis_vec) {
                            *x -= overlap * y;
                        }
                    }
                    let rnorm = res.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                    if rnorm > tol.residual_at(b.norm()) {
                        return Err(Error::NumericalFailure(format!(
                            "kernel flag is not invariant (residual {rnorm:.3e})"
                        )));
                    }
                }
            }

            let images = self
                .basis
                .iter()
                .map(|b| comp.adjoint() * b * &comp)
                .collect();
            rho.push(images);
            complements.push(comp);
            previous = full;
        }

        Ok(NestQuotients {
            dims,
            complements,
            rho,
        })
    }

    /// Smallest `m >= 1` such that every product of `m` algebra elements
    /// vanishes, for algebras of nilpotent matrices. Computed on the chain
    /// of product spans `V_1 = span g`, `V_{k+1} = span(V_k g)`, which by
    /// multilinearity vanishes exactly when all `k`-fold products do.
    pub fn minimal_vanishing_degree(&self, tol: &TolerancePolicy) -> Result<usize> {
        for b in &self.basis {
            if !is_nilpotent(b, tol) {
                return Err(Error::Precondition(
                    "basis element is not nilpotent".into(),
                ));
            }
        }
        if self.dim() == 0 {
            return Ok(1);
        }
        let mut level: Vec<Matrix> = self.basis.clone();
        for m in 1..=self.ambient_n + 1 {
            if level.is_empty() {
                return Ok(m);
            }
            let mut products = Vec::new();
            for v in &level {
                for b in &self.basis {
                    products.push(v * b);
                }
            }
            level = span_floored(&products, tol)?;
        }
        Err(Error::NumericalFailure(
            "products did not vanish within the ambient bound".into(),
        ))
    }

    /// Whether `ad a`, restricted to the invariant subalgebra `j`, is a
    /// nilpotent operator.
    pub fn is_ad_nilpotent_on(a: &Matrix, j: &LieSubalgebra, tol: &TolerancePolicy) -> Result<bool> {
        let ad = j.ad_matrix_of(a, tol)?;
        Ok(is_nilpotent(&ad, tol))
    }
}

/// Simultaneous generalized eigenspace decomposition for a family of
/// commuting (modulo nilpotency) operators on `C^d`: the joint weight
/// spaces, each tagged with its vector of eigenvalue clusters.
///
/// A generic linear combination of the family separates all joint weights
/// with probability one, so the space is split along the generalized
/// eigenspaces of one combination (deterministic coefficients, fresh ones
/// on retry), and each operator's weight on a subspace is read off the
/// trace of its restriction. Every restriction must be scalar plus
/// nilpotent at cluster resolution, or the draw is retried.
pub fn simultaneous_weight_spaces(
    ops: &[Matrix],
    d: usize,
    tol: &TolerancePolicy,
) -> Result<Vec<(Vec<Complex64>, Vec<Vec<Complex64>>)>> {
    if d == 0 {
        return Ok(vec![]);
    }
    let identity: Vec<Vec<Complex64>> = (0..d).map(|i| crate::algebra::basis_vec(d, i)).collect();
    if ops.is_empty() {
        return Ok(vec![(Vec::new(), identity)]);
    }

    let mut last_error = String::new();
    'attempt: for attempt in 0..8u64 {
        // Deterministic generic coefficients.
        let mut state = 0x243f_6a88_85a3_08d3u64 ^ attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
        let mut next_unit = || {
            state = (state ^ (state >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            state ^= state >> 27;
            let phase =
                2.0 * std::f64::consts::PI * ((state >> 11) as f64 / (1u64 << 53) as f64);
            Complex64::from_polar(1.0, phase)
        };
        let mut combo = Matrix::zeros(d, d);
        for op in ops {
            combo = combo + op.scale(next_unit());
        }

        let scale_ref = ops.iter().map(Matrix::norm).fold(1.0, f64::max);
        let subspaces: Vec<Vec<Vec<Complex64>>> = if combo.norm() <= tol.rank_tol * scale_ref {
            vec![identity.clone()]
        } else {
            let m_norm = combo.norm();
            let eigs = crate::linalg::eigenvalues(&combo)?;
            let smear = m_norm * tol.rank_tol.powf(1.0 / d as f64);
            let link = tol.spec_radius(scale_ref).max(2.0 * smear);
            let mut parts = Vec::new();
            let mut claimed = 0usize;
            for cluster in single_linkage(&eigs, link) {
                let center: Complex64 =
                    cluster.iter().sum::<Complex64>() / cluster.len() as f64;
                let spread = cluster
                    .iter()
                    .map(|p| (p - center).norm())
                    .fold(0.0, f64::max);
                let cutoff_dist = (3.0 * spread).max(0.5 * link);
                let local = cluster_kernel(&combo, center, cutoff_dist)?;
                if local.len() != cluster.len() {
                    last_error = format!(
                        "cluster of multiplicity {} yields a kernel of dimension {}",
                        cluster.len(),
                        local.len()
                    );
                    continue 'attempt;
                }
                claimed += local.len();
                parts.push(local);
            }
            if claimed != d {
                last_error = format!("generalized eigenspaces cover {claimed} of {d} directions");
                continue 'attempt;
            }
            parts
        };

        // Tag each subspace with the weight vector, verifying that every
        // operator restricts to scalar-plus-nilpotent on it.
        let mut out = Vec::with_capacity(subspaces.len());
        for cols in &subspaces {
            let b = Matrix::from_columns(cols);
            let w = cols.len();
            let mut values = Vec::with_capacity(ops.len());
            for op in ops {
                let restricted = b.adjoint() * op * &b;
                let image = op * &b;
                let reconstructed = &b * &restricted;
                if image.distance(&reconstructed) > tol.residual_at(op.norm()) * (d as f64) {
                    last_error = format!(
                        "weight space lost invariance (residual {:.3e})",
                        image.distance(&reconstructed)
                    );
                    continue 'attempt;
                }
                let value = restricted.trace() / w as f64;
                let radius = {
                    let m_norm = restricted.norm().max(tol.rank_tol);
                    let smear = m_norm * tol.rank_tol.powf(1.0 / w as f64);
                    tol.spec_radius(op.norm().max(1.0)).max(2.0 * smear)
                };
                for eig in crate::linalg::eigenvalues(&restricted)? {
                    if (eig - value).norm() > radius {
                        last_error = format!(
                            "restriction is not scalar plus nilpotent (eigenvalue {eig} vs \
                             weight {value})"
                        );
                        continue 'attempt;
                    }
                }
                values.push(value);
            }
            out.push((values, cols.clone()));
        }
        return Ok(out);
    }
    Err(Error::NumericalFailure(format!(
        "joint weight decomposition failed after 8 generic draws: {last_error}"
    )))
}

/// Kernel of `(m - center)^dim` with the rank cutoff matched to a distance
/// resolution: directions whose eigenvalues sit within `cutoff_dist` of the
/// center land in the kernel, anything further survives.
fn cluster_kernel(
    m: &Matrix,
    center: Complex64,
    cutoff_dist: f64,
) -> Result<Vec<Vec<Complex64>>> {
    let w = m.rows();
    let norm = m.norm();
    let shifted = (m - &Matrix::identity(w).scale(center)).scale_re(1.0 / norm);
    let mut power = Matrix::identity(w);
    for _ in 0..w {
        power = power.matmul(&shifted);
    }
    let svd = crate::linalg::Svd::new(&power)?;
    let cutoff = (cutoff_dist / norm).min(0.45).powi(w as i32);
    let r = svd.rank_at(cutoff);
    Ok((r..w).map(|j| svd.v.column(j)).collect())
}

/// Single-linkage clustering: transitive closure of the relation
/// "within the link radius". Deterministic via lexicographic presorting.
fn single_linkage(points: &[Complex64], link: f64) -> Vec<Vec<Complex64>> {
    let mut sorted: Vec<Complex64> = points.to_vec();
    sorted.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let k = sorted.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..k {
        for j in i + 1..k {
            if (sorted[i] - sorted[j]).norm() <= link {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut clusters: Vec<Vec<Complex64>> = vec![Vec::new(); k];
    for i in 0..k {
        let root = find(&mut parent, i);
        clusters[root].push(sorted[i]);
    }
    clusters.retain(|c| !c.is_empty());
    clusters
}

/// Joint quasi-nilpotent subspace of the span of a commuting (or jointly
/// triangularizable) orthonormal family: the ambient weight functionals are
/// linear on the span, and an element is quasi-nilpotent exactly when every
/// weight vanishes on it.
pub fn joint_quasinilpotent_subspace(
    family: &[Matrix],
    tol: &TolerancePolicy,
) -> Result<Vec<Matrix>> {
    let Some(first) = family.first() else {
        return Ok(Vec::new());
    };
    let n = first.rows();
    let spaces = simultaneous_weight_spaces(family, n, tol)?;
    let constraint = Matrix::from_fn(spaces.len(), family.len(), |w, s| spaces[w].0[s]);
    let coords = nullspace_scaled(&constraint, tol, 1.0);
    Ok(coords
        .iter()
        .map(|c| {
            let mut out = Matrix::zeros(first.rows(), first.cols());
            for (m, &x) in family.iter().zip(c.iter()) {
                out = out + m.scale(x);
            }
            out
        })
        .collect())
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

    fn upper_triangular_2x2() -> LieSubalgebra {
        make_lie_subalgebra(
            &[
                Matrix::unit(2, 0, 0),
                Matrix::unit(2, 1, 1),
                Matrix::unit(2, 0, 1),
            ],
            &tol(),
        )
        .unwrap()
    }

    fn heisenberg() -> LieSubalgebra {
        make_lie_subalgebra(
            &[
                Matrix::unit(3, 0, 1),
                Matrix::unit(3, 0, 2),
                Matrix::unit(3, 1, 2),
            ],
            &tol(),
        )
        .unwrap()
    }

    fn sl2() -> LieSubalgebra {
        make_lie_subalgebra(&[Matrix::unit(2, 0, 1), Matrix::unit(2, 1, 0)], &tol()).unwrap()
    }

    #[test]
    fn closure_examples() {
        // A single element spans an abelian line.
        let g = make_lie_subalgebra(&[Matrix::unit(2, 0, 1)], &tol()).unwrap();
        assert_eq!(g.dim(), 1);
        // {E12, E21} closes into sl2.
        assert_eq!(sl2().dim(), 3);
        assert!(sl2().contains(
            &Matrix::diag(&[c(1.0, 0.0), c(-1.0, 0.0)]),
            &tol()
        ));
        // {E11, E12} is already closed: the affine algebra.
        let g = make_lie_subalgebra(&[Matrix::unit(2, 0, 0), Matrix::unit(2, 0, 1)], &tol())
            .unwrap();
        assert_eq!(g.dim(), 2);
        assert!(g.is_solvable(&tol()));
    }

    #[test]
    fn derived_series_examples() {
        let ut = upper_triangular_2x2();
        let series = ut.derived_series(&tol());
        let dims: Vec<usize> = series.iter().map(Vec::len).collect();
        assert_eq!(dims, vec![3, 1, 0]);
        assert!(ut.is_solvable(&tol()));

        assert!(!sl2().is_solvable(&tol()));

        let abelian = make_lie_subalgebra(&[Matrix::unit(2, 0, 1)], &tol()).unwrap();
        let dims: Vec<usize> = abelian
            .derived_series(&tol())
            .iter()
            .map(Vec::len)
            .collect();
        assert_eq!(dims, vec![1, 0]);
    }

    #[test]
    fn nilpotency_examples() {
        assert!(heisenberg().is_nilpotent_lie(&tol()));
        // Upper triangular 2x2 is solvable but not nilpotent: the lower
        // central series stalls at C E12.
        let ut = upper_triangular_2x2();
        assert!(!ut.is_nilpotent_lie(&tol()));
        let abelian = make_lie_subalgebra(&[Matrix::unit(4, 0, 3)], &tol()).unwrap();
        assert!(abelian.is_nilpotent_lie(&tol()));
    }

    #[test]
    fn solvable_radical_examples() {
        assert_eq!(sl2().solvable_radical(&tol()).unwrap().dim(), 0);

        let ut = upper_triangular_2x2();
        assert_eq!(ut.solvable_radical(&tol()).unwrap().dim(), 3);

        // gl2 = sl2 + C I: the radical is the scalar line.
        let gl2 = make_lie_subalgebra(
            &[
                Matrix::unit(2, 0, 1),
                Matrix::unit(2, 1, 0),
                Matrix::identity(2),
            ],
            &tol(),
        )
        .unwrap();
        assert_eq!(gl2.dim(), 4);
        let r = gl2.solvable_radical(&tol()).unwrap();
        assert_eq!(r.dim(), 1);
        assert!(r.contains(&Matrix::identity(2), &tol()));
    }

    #[test]
    fn cartan_examples() {
        let t = tol();
        let ut = upper_triangular_2x2();
        let h = ut.cartan_subalgebra(7, &t).unwrap();
        // Any Cartan here is a conjugate of the diagonal part: dimension 2,
        // abelian, and complementary to the root line C E12.
        assert_eq!(h.dim(), 2);
        assert!(h.is_nilpotent_lie(&t));
        for a in h.basis() {
            for b in h.basis() {
                assert!(a.commutator(b).norm() < 1e-9);
            }
        }
        assert!(span_residual(&h.basis().to_vec(), &Matrix::unit(2, 0, 1)) > 1e-6);

        let abelian = make_lie_subalgebra(&[Matrix::unit(2, 0, 1)], &t).unwrap();
        let h = abelian.cartan_subalgebra(7, &t).unwrap();
        assert_eq!(h.dim(), 1);

        // Nilpotent algebras are their own Cartan subalgebra.
        let heis = heisenberg();
        let h = heis.cartan_subalgebra(7, &t).unwrap();
        assert_eq!(h.dim(), 3);
    }

    #[test]
    fn root_decomposition_examples() {
        let t = tol();
        let ut = upper_triangular_2x2();
        let h = ut.cartan_subalgebra(7, &t).unwrap();
        let dec = ut.root_decomposition(&h, 7, &t).unwrap();
        assert_eq!(dec.roots.len(), 1);
        assert_eq!(dec.fitting_plus.len(), 1);
        assert!(span_residual(&dec.roots[0].space, &Matrix::unit(2, 0, 1)) < 1e-8);
        // Defining eigen-relation: [h, E12] = alpha(h) E12 on the Cartan
        // basis, whichever conjugate of the diagonal the search returned.
        let e12 = Matrix::unit(2, 0, 1);
        for (s, hb) in h.basis().iter().enumerate() {
            let lhs = hb.commutator(&e12);
            let rhs = e12.scale(dec.roots[0].values[s]);
            assert!(lhs.approx_eq(&rhs, 1e-8));
        }
        // Fitting dimensions add up.
        assert_eq!(dec.cartan.dim() + dec.fitting_plus.len(), ut.dim());

        // Abelian algebra: no roots at all.
        let ab = make_lie_subalgebra(&[Matrix::unit(2, 0, 1)], &t).unwrap();
        let h = ab.cartan_subalgebra(3, &t).unwrap();
        let dec = ab.root_decomposition(&h, 3, &t).unwrap();
        assert!(dec.roots.is_empty());
        assert!(dec.fitting_plus.is_empty());

        // span{diag(1,-1), E12}: one root with alpha(diag(1,-1)) = 2.
        let g = make_lie_subalgebra(
            &[
                Matrix::diag(&[c(1.0, 0.0), c(-1.0, 0.0)]),
                Matrix::unit(2, 0, 1),
            ],
            &t,
        )
        .unwrap();
        let h = g.cartan_subalgebra(11, &t).unwrap();
        assert_eq!(h.dim(), 1);
        let dec = g.root_decomposition(&h, 11, &t).unwrap();
        assert_eq!(dec.roots.len(), 1);
        assert!(span_residual(&dec.roots[0].space, &Matrix::unit(2, 0, 1)) < 1e-8);
        // alpha acts as "2 per unit of diag(1,-1)": whatever mixture the
        // Cartan generator is, its value is twice the diag coefficient.
        let hb = &h.basis()[0];
        let dhat = Matrix::diag(&[c(1.0, 0.0), c(-1.0, 0.0)]).scale_re(1.0 / 2f64.sqrt());
        let diag_coeff = dhat.inner(hb);
        let alpha = dec.roots[0].values[0];
        assert!(
            (alpha - diag_coeff * 2f64.sqrt()).norm() < 1e-7,
            "alpha = {alpha}, diag coefficient = {diag_coeff}"
        );
    }

    #[test]
    fn generalized_eigenstructure_kills_root_spaces() {
        let t = tol();
        let ut = upper_triangular_2x2();
        let h = ut.cartan_subalgebra(7, &t).unwrap();
        let dec = ut.root_decomposition(&h, 7, &t).unwrap();
        for root in &dec.roots {
            for (s, hb) in h.basis().iter().enumerate() {
                for x in &root.space {
                    // (ad h - alpha(h))^dim kills the root space.
                    let mut cur = x.clone();
                    for _ in 0..ut.dim() {
                        cur = hb.commutator(&cur) - cur.scale(root.values[s]);
                    }
                    assert!(cur.norm() < 1e-8, "residual {:.3e}", cur.norm());
                }
            }
        }
    }

    #[test]
    fn nest_quotient_examples() {
        let t = tol();
        let heis = heisenberg();
        let y = Matrix::unit(3, 0, 2);
        let nest = heis.nest_quotients(&y, &t).unwrap();
        assert_eq!(nest.dims, vec![0, 2, 3]);
        // Only E12 acts nontrivially on X_1, nothing on X_2/X_1.
        let nonzero_first = nest.rho[0].iter().filter(|m| m.norm() > 1e-9).count();
        assert_eq!(nonzero_first, 1);
        let nonzero_second = nest.rho[1].iter().filter(|m| m.norm() > 1e-9).count();
        assert_eq!(nonzero_second, 0);

        // Abelian span{E12} in M_2 along Y = E12: dims [0,1,2], actions 0.
        let ab = make_lie_subalgebra(&[Matrix::unit(2, 0, 1)], &t).unwrap();
        let nest = ab.nest_quotients(&Matrix::unit(2, 0, 1), &t).unwrap();
        assert_eq!(nest.dims, vec![0, 1, 2]);
        assert!(nest.rho.iter().flatten().all(|m| m.norm() < 1e-9));

        // Non-central element is rejected.
        let err = heis.nest_quotients(&Matrix::unit(3, 0, 1), &t);
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn minimal_vanishing_degree_examples() {
        let t = tol();
        let line = make_lie_subalgebra(&[Matrix::unit(2, 0, 1)], &t).unwrap();
        assert_eq!(line.minimal_vanishing_degree(&t).unwrap(), 2);

        let strict3 = make_lie_subalgebra(
            &[
                Matrix::unit(3, 0, 1),
                Matrix::unit(3, 1, 2),
                Matrix::unit(3, 0, 2),
            ],
            &t,
        )
        .unwrap();
        assert_eq!(strict3.minimal_vanishing_degree(&t).unwrap(), 3);
        assert_eq!(heisenberg().minimal_vanishing_degree(&t).unwrap(), 3);

        // Non-nilpotent basis elements are rejected.
        let bad = make_lie_subalgebra(&[Matrix::unit(2, 0, 0)], &t).unwrap();
        assert!(matches!(
            bad.minimal_vanishing_degree(&t),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn ad_nilpotent_on_examples() {
        let t = tol();
        let j = make_lie_subalgebra(&[Matrix::unit(2, 0, 1)], &t).unwrap();
        assert!(LieSubalgebra::is_ad_nilpotent_on(&Matrix::unit(2, 0, 1), &j, &t).unwrap());
        // [diag(1,0), E12] = E12: eigenvalue 1, not nilpotent.
        assert!(
            !LieSubalgebra::is_ad_nilpotent_on(
                &Matrix::diag(&[c(1.0, 0.0), c(0.0, 0.0)]),
                &j,
                &t
            )
            .unwrap()
        );
        // Inside a nilpotent algebra every ad is nilpotent on the algebra.
        let heis = heisenberg();
        for b in heis.basis() {
            assert!(LieSubalgebra::is_ad_nilpotent_on(b, &heis, &t).unwrap());
        }
    }
}
