//! Dense numerical kernel for `SU(n)` and `su(n)` in the defining
//! representation.
//!
//! The invariant inner product is `⟨X, Y⟩ = −tr(XY)`. On `su(2)` the
//! coroot `diag(i, −i)` has length² 2, the normalization in which the
//! longest root has length² 2; the same trace form gives that normalization
//! for every `su(n)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Unitarity and determinant tolerance for group elements.
pub const GROUP_TOL: f64 = 1e-10;
/// Skew-Hermitian and trace tolerance for algebra elements.
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Largest invariant violation tolerated on the output of [`exponential`].
pub const EXP_TOL: f64 = 1e-9;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

fn unitarity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    frobenius(&(m.adjoint() * m - CMatrix::identity(n, n)))
}

/// An element of `SU(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement(CMatrix);

impl GroupElement {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::Mismatch(format!("{}×{} is not a square matrix", m.nrows(), m.ncols())));
        }
        let defect = unitarity_defect(&m);
        if defect > GROUP_TOL {
            return Err(Error::Argument(format!("not unitary: ‖g*g − I‖ = {defect:e}")));
        }
        let det = m.determinant();
        if (det - Complex64::new(1.0, 0.0)).norm() > GROUP_TOL {
            return Err(Error::Argument(format!("determinant {det} is not 1")));
        }
        Ok(GroupElement(m))
    }

    pub fn identity(n: usize) -> Self {
        GroupElement(CMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        GroupElement(self.0.adjoint())
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        GroupElement(&self.0 * &other.0)
    }

    /// `Ad(g) X = g X g⁻¹`.
    pub fn adjoint(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(&self.0 * &x.0 * self.0.adjoint())
    }

    /// `max(‖g*g − I‖, |det g − 1|)`.
    pub fn defect(&self) -> f64 {
        let det = self.0.determinant();
        unitarity_defect(&self.0).max((det - Complex64::new(1.0, 0.0)).norm())
    }
}

/// An element of `su(n)`: traceless and skew-Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement(CMatrix);

impl AlgebraElement {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::Mismatch(format!("{}×{} is not a square matrix", m.nrows(), m.ncols())));
        }
        let skew = frobenius(&(&m + m.adjoint()));
        if skew > ALGEBRA_TOL {
            return Err(Error::Argument(format!("not skew-Hermitian: ‖X + X*‖ = {skew:e}")));
        }
        let tr = trace(&m).norm();
        if tr > ALGEBRA_TOL {
            return Err(Error::Argument(format!("not traceless: |tr X| = {tr:e}")));
        }
        Ok(AlgebraElement(m))
    }

    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        AlgebraElement(m)
    }

    pub fn zero(n: usize) -> Self {
        AlgebraElement(CMatrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        frobenius(&self.0)
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(&self.0 - &other.0)
    }

    pub fn scale(&self, s: f64) -> AlgebraElement {
        AlgebraElement(&self.0 * Complex64::new(s, 0.0))
    }

    pub fn bracket(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(&self.0 * &other.0 - &other.0 * &self.0)
    }

    /// `−Re tr(XY)`, without the dimension check of [`killing_form`].
    #[inline]
    pub fn killing(&self, other: &AlgebraElement) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        trace_product(&self.0, &other.0)
    }
}

/// `−Re tr(AB)` for square matrices of equal size.
#[inline]
pub(crate) fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    -acc
}

/// The normalized invariant form `⟨X, Y⟩ = −tr(XY)`.
pub fn killing_form(x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::Mismatch(format!("su({}) against su({})", x.dim(), y.dim())));
    }
    Ok(x.killing(y))
}

/// `|⟨gXg⁻¹, gYg⁻¹⟩ − ⟨X, Y⟩|`.
pub fn ad_invariance_check(g: &GroupElement, x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
    if g.dim() != x.dim() {
        return Err(Error::Mismatch(format!("SU({}) acting on su({})", g.dim(), x.dim())));
    }
    let before = killing_form(x, y)?;
    let after = killing_form(&g.adjoint(x), &g.adjoint(y))?;
    Ok((after - before).abs())
}

/// Orthogonal projection of an arbitrary matrix onto `su(n)`:
/// the skew-Hermitian part with its trace removed.
pub fn project_algebra(m: &CMatrix) -> AlgebraElement {
    let n = m.nrows();
    let mut skew = (m - m.adjoint()) * Complex64::new(0.5, 0.0);
    let shift = trace(&skew) / n as f64;
    for i in 0..n {
        skew[(i, i)] -= shift;
    }
    AlgebraElement(skew)
}

/// Matrix exponential `su(n) → SU(n)`.
///
/// For `n = 2` this is the closed form `cos r · I + (sin r / r) X` with
/// `r² = det X`; otherwise the Hermitian matrix `iX` is diagonalized.
pub fn exponential(x: &AlgebraElement) -> Result<GroupElement> {
    let g = exponential_unchecked(x);
    let defect = g.defect();
    if !(defect <= EXP_TOL) {
        return Err(Error::Numerical(format!("exp output violates SU(n) by {defect:e}")));
    }
    Ok(g)
}

pub(crate) fn exponential_unchecked(x: &AlgebraElement) -> GroupElement {
    let m = &x.0;
    let n = m.nrows();
    match n {
        1 => GroupElement::identity(1),
        2 => {
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            let r = det.re.max(0.0).sqrt();
            let sinc = if r < 1e-8 { 1.0 - r * r / 6.0 } else { r.sin() / r };
            let mut out = m * Complex64::new(sinc, 0.0);
            out[(0, 0)] += r.cos();
            out[(1, 1)] += r.cos();
            GroupElement(out)
        }
        _ => {
            let h = m * I;
            let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
            let eig = h.symmetric_eigen();
            let u = eig.eigenvectors;
            let phases = CMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::new(0.0, -l).exp()));
            GroupElement(&u * phases * u.adjoint())
        }
    }
}

/// Standard real basis of `su(n)`: `i(E_jj − E_{j+1,j+1})`,
/// `E_jk − E_kj` and `i(E_jk + E_kj)` for `j < k`.
pub fn algebra_basis(n: usize) -> Vec<AlgebraElement> {
    let mut out = Vec::with_capacity(n * n - 1);
    for j in 0..n.saturating_sub(1) {
        let mut m = CMatrix::zeros(n, n);
        m[(j, j)] = I;
        m[(j + 1, j + 1)] = -I;
        out.push(AlgebraElement(m));
    }
    for j in 0..n {
        for k in j + 1..n {
            let mut a = CMatrix::zeros(n, n);
            a[(j, k)] = Complex64::new(1.0, 0.0);
            a[(k, j)] = Complex64::new(-1.0, 0.0);
            out.push(AlgebraElement(a));
            let mut s = CMatrix::zeros(n, n);
            s[(j, k)] = I;
            s[(k, j)] = I;
            out.push(AlgebraElement(s));
        }
    }
    out
}

/// `i·σ_k` for the Pauli matrices, `k = 1, 2, 3`.
pub fn pauli_generators() -> [AlgebraElement; 3] {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let z = c(0.0, 0.0);
    [
        AlgebraElement(CMatrix::from_row_slice(2, 2, &[z, c(0.0, 1.0), c(0.0, 1.0), z])),
        AlgebraElement(CMatrix::from_row_slice(2, 2, &[z, c(1.0, 0.0), c(-1.0, 0.0), z])),
        AlgebraElement(CMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), z, z, c(0.0, -1.0)])),
    ]
}

/// Projection of a matrix with independent standard normal entries (real
/// and imaginary parts).
pub fn random_algebra<R: Rng + ?Sized>(rng: &mut R, n: usize) -> AlgebraElement {
    let m = CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    project_algebra(&m)
}

pub fn random_group<R: Rng + ?Sized>(rng: &mut R, n: usize) -> GroupElement {
    exponential_unchecked(&random_algebra(rng, n))
}
