//! Spectra, spectral radii and holomorphic functional calculus by contour
//! quadrature on circles, plus Exp/Log on unipotents.
//!
//! The Cauchy integral is oriented so that `f(z) = z` reproduces the input:
//! `f(a) = (1/2 pi i) \oint f(z) (z 1 - a)^{-1} dz` over a counterclockwise
//! circle. Trapezoidal quadrature on a circle converges geometrically for
//! integrands analytic in an annulus around it, and node counts are doubled
//! until two successive approximations agree.

use num_complex::Complex64;

use crate::algebra::is_nilpotent;
use crate::linalg::{eigenvalues, LuDecomposition, Matrix};
use crate::{Error, Result, TolerancePolicy};

/// Default margin factor: the contour radius exceeds the spectral extent by
/// this fraction, balancing resolvent conditioning against the reach of f's
/// domain of analyticity.
pub const DEFAULT_MARGIN: f64 = 0.5;

/// Smallest contour radius, used when the spectrum degenerates to a point.
pub const MIN_CONTOUR_EXTENT: f64 = 1e-3;

const MAX_NODES: usize = 4096;

/// Eigenvalue multiset together with the spectral radius.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<Complex64>,
    pub spectral_radius: f64,
}

pub fn spectrum(a: &Matrix) -> Result<SpectrumReport> {
    let eigenvalues = eigenvalues(a)?;
    let spectral_radius = eigenvalues.iter().map(|l| l.norm()).fold(0.0, f64::max);
    Ok(SpectrumReport {
        eigenvalues,
        spectral_radius,
    })
}

/// Spectral radius shorthand.
pub fn spectral_radius(a: &Matrix) -> Result<f64> {
    Ok(spectrum(a)?.spectral_radius)
}

/// A circle used as integration contour.
#[derive(Debug, Clone, Copy)]
pub struct Contour {
    pub center: Complex64,
    pub radius: f64,
    pub nodes: usize,
}

impl Contour {
    pub fn new(center: Complex64, radius: f64, nodes: usize) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Contour("contour radius must be positive".into()));
        }
        if nodes < 16 || !nodes.is_power_of_two() {
            return Err(Error::Contour(
                "node count must be a power of two, at least 16".into(),
            ));
        }
        Ok(Self {
            center,
            radius,
            nodes,
        })
    }

    pub fn point(&self, k: usize, total: usize) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI * (k as f64) / (total as f64);
        self.center + Complex64::from_polar(self.radius, theta)
    }
}

/// Circle centered at the eigenvalue centroid whose radius is the spectral
/// extent (floored at `MIN_CONTOUR_EXTENT`) times `1 + margin`.
pub fn auto_contour_with_margin(a: &Matrix, margin: f64) -> Result<Contour> {
    let eigs = eigenvalues(a)?;
    let n = eigs.len().max(1) as f64;
    let center = eigs.iter().sum::<Complex64>() / n;
    let extent = eigs
        .iter()
        .map(|l| (l - center).norm())
        .fold(0.0, f64::max)
        .max(MIN_CONTOUR_EXTENT);
    Contour::new(center, extent * (1.0 + margin), 64)
}

pub fn auto_contour(a: &Matrix) -> Result<Contour> {
    auto_contour_with_margin(a, DEFAULT_MARGIN)
}

/// Holomorphic functional calculus `f(a)` by trapezoidal quadrature over the
/// contour. `f` must be analytic on and inside the contour, which must
/// enclose all eigenvalues of `a` with clearance.
pub fn holo_calc(
    f: impl Fn(Complex64) -> Complex64,
    a: &Matrix,
    contour: &Contour,
    tol: &TolerancePolicy,
) -> Result<Matrix> {
    let n = a.require_square()?;
    a.check_finite()?;
    let guard = tol.spec_radius(a.norm());
    for l in eigenvalues(a)? {
        let d = (l - contour.center).norm();
        if d >= contour.radius - guard {
            return Err(Error::Contour(format!(
                "eigenvalue {l} is on or outside the contour (|l - c| = {d:.6e}, radius {:.6e})",
                contour.radius
            )));
        }
    }

    let identity = Matrix::identity(n);
    let quadrature = |nodes: usize| -> Result<Matrix> {
        let mut acc = Matrix::zeros(n, n);
        for k in 0..nodes {
            let z = contour.point(k, nodes);
            let phase = (z - contour.center) / contour.radius;
            let resolvent = LuDecomposition::new(&(identity.scale(z) - a))?.inverse();
            acc = acc + resolvent.scale(f(z) * phase);
        }
        Ok(acc.scale_re(contour.radius / nodes as f64))
    };

    let mut nodes = contour.nodes.clamp(16, MAX_NODES);
    let mut prev = quadrature(nodes)?;
    while nodes < MAX_NODES {
        nodes *= 2;
        let next = quadrature(nodes)?;
        if next.distance(&prev) < tol.residual_at(next.norm()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NumericalFailure(format!(
        "contour quadrature did not settle at {MAX_NODES} nodes"
    )))
}

/// Builtin function handles exposed through the CLI.
#[derive(Debug, Clone)]
pub enum HoloFn {
    Exp,
    Log,
    Inv,
    Poly(Vec<Complex64>),
}

impl HoloFn {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            HoloFn::Exp => z.exp(),
            HoloFn::Log => z.ln(),
            HoloFn::Inv => z.inv(),
            HoloFn::Poly(coeffs) => horner(coeffs, z),
        }
    }
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Polynomial of a matrix by Horner evaluation; coefficients in ascending
/// degree order. Used as the quadrature-free reference route.
pub fn horner_poly(coeffs: &[Complex64], a: &Matrix) -> Matrix {
    let n = a.rows();
    assert!(a.is_square());
    let mut acc = Matrix::zeros(n, n);
    for &c in coeffs.iter().rev() {
        acc = acc * a + Matrix::identity(n).scale(c);
    }
    acc
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
///
/// This is the robust route: it works for any argument, including
/// large-norm nilpotents whose degenerate spectra make contour quadrature
/// hopelessly ill-conditioned. The contour route stays available as
/// `exp_via_contour` and the two are cross-checked on well-spread spectra.
pub fn exp_matrix(a: &Matrix) -> Matrix {
    let n = a.rows();
    assert!(a.is_square());
    let norm = a.norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.scale_re(0.5f64.powi(squarings as i32));

    let mut sum = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=64 {
        term = term.matmul(&scaled).scale_re(1.0 / k as f64);
        sum = sum + term.clone();
        if term.norm() <= 1e-18 * sum.norm().max(1.0) {
            break;
        }
    }
    let mut result = sum;
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    result
}

/// Matrix exponential through the Cauchy integral with an automatic contour.
pub fn exp_via_contour(a: &Matrix, tol: &TolerancePolicy) -> Result<Matrix> {
    holo_calc(|z| z.exp(), a, &auto_contour(a)?, tol)
}

/// Logarithm of a unipotent matrix by the terminating series
/// `sum_{k>=1} (-1)^(k+1) (u - 1)^k / k`.
pub fn log_unipotent(u: &Matrix, tol: &TolerancePolicy) -> Result<Matrix> {
    let n = u.require_square()?;
    let nil = u - &Matrix::identity(n);
    if !is_nilpotent(&nil, tol) {
        return Err(Error::Precondition(
            "matrix is not unipotent (u - 1 is not nilpotent)".into(),
        ));
    }
    let mut sum = Matrix::zeros(n, n);
    let mut power = Matrix::identity(n);
    for k in 1..n.max(2) {
        power = power.matmul(&nil);
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sum = sum + power.scale_re(sign / k as f64);
    }
    Ok(sum)
}

/// Outcome of the spectral-radius seminorm checks on a commuting pair.
#[derive(Debug, Clone, Copy)]
pub struct SubmultReport {
    pub product_ok: bool,
    pub sum_ok: bool,
    /// `r(a) r(b) + spec_tol - r(ab)`; nonnegative when the bound holds.
    pub product_slack: f64,
    /// `r(a) + r(b) + spec_tol - r(a + b)`.
    pub sum_slack: f64,
}

/// Submultiplicativity and subadditivity of the spectral radius on a
/// commuting pair. Non-commuting inputs are rejected: the statement is
/// about commutative algebras, where the spectral radius is a seminorm.
pub fn submultiplicativity_check(
    a: &Matrix,
    b: &Matrix,
    tol: &TolerancePolicy,
) -> Result<SubmultReport> {
    let comm = a.commutator(b).norm();
    if comm > tol.residual_at(a.norm() * b.norm()) {
        return Err(Error::Precondition(format!(
            "pair does not commute (||[a,b]|| = {comm:.3e})"
        )));
    }
    let ra = spectral_radius(a)?;
    let rb = spectral_radius(b)?;
    let r_prod = spectral_radius(&(a * b))?;
    let r_sum = spectral_radius(&(a + b))?;
    let product_slack = ra * rb + tol.spec_tol - r_prod;
    let sum_slack = ra + rb + tol.spec_tol - r_sum;
    Ok(SubmultReport {
        product_ok: product_slack >= 0.0,
        sum_ok: sum_slack >= 0.0,
        product_slack,
        sum_slack,
    })
}

/// Multiset equality of two spectra within a matching radius, by greedy
/// globally-closest pairing.
pub fn multiset_matches(xs: &[Complex64], ys: &[Complex64], radius: f64) -> bool {
    if xs.len() != ys.len() {
        return false;
    }
    let mut used_x = vec![false; xs.len()];
    let mut used_y = vec![false; ys.len()];
    for _ in 0..xs.len() {
        let mut best: Option<(f64, usize, usize)> = None;
        for (i, x) in xs.iter().enumerate() {
            if used_x[i] {
                continue;
            }
            for (j, y) in ys.iter().enumerate() {
                if used_y[j] {
                    continue;
                }
                let d = (x - y).norm();
                if best.as_ref().map_or(true, |(bd, _, _)| d < *bd) {
                    best = Some((d, i, j));
                }
            }
        }
        match best {
            Some((d, i, j)) if d <= radius => {
                used_x[i] = true;
                used_y[j] = true;
            }
            _ => return false,
        }
    }
    true
}

/// Set equality of two spectra within a matching radius (multiplicities
/// ignored, as in spectrum comparisons between different algebras).
pub fn set_matches(xs: &[Complex64], ys: &[Complex64], radius: f64) -> bool {
    xs.iter()
        .all(|x| ys.iter().any(|y| (x - y).norm() <= radius))
        && ys
            .iter()
            .all(|y| xs.iter().any(|x| (x - y).norm() <= radius))
}
