//! Dense Hermitian matrices with Hilbert–Schmidt geometry.
//!
//! [`HermitianMatrix`] is a thin wrapper around a complex `DMatrix` that is
//! guaranteed Hermitian: inputs are symmetrized as `(X + X†)/2` on
//! construction and rejected when the antihermitian part is larger than the
//! configured relative tolerance.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Tolerances used by the constructors and matrix functions in this module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Largest accepted `‖X − X†‖/2` relative to `‖X‖` on construction.
    pub hermiticity: f64,
    /// Eigenvalues above `-psd_clamp · ‖X‖` are clamped to zero by `sqrt_psd`.
    pub psd_clamp: f64,
    /// Eigenvalues at or below this are rejected by `inv_pd`.
    pub pd_epsilon: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-8,
            psd_clamp: 1e-10,
            pd_epsilon: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[derive(Serialize, Deserialize)]
#[serde(try_from = "HermitianJson", into = "HermitianJson")]
pub struct HermitianMatrix {
    inner: CMatrix,
}

/// Ascending eigenvalues with the matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    pub fn vector(&self, index: usize) -> CVector {
        self.eigenvectors.column(index).into_owned()
    }

    /// `Σ f(λᵢ) vᵢvᵢ†`
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let k = self.eigenvalues.len();
        let mut out = CMatrix::zeros(k, k);
        for (idx, &lambda) in self.eigenvalues.iter().enumerate() {
            let v = self.eigenvectors.column(idx);
            let w = Complex64::new(f(lambda), 0.0);
            out += (v * v.adjoint()) * w;
        }
        HermitianMatrix::symmetrized(out)
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.reconstruct_with(|l| l)
    }
}

impl HermitianMatrix {
    /// Builds a Hermitian matrix from `m`, rejecting inputs that are not
    /// Hermitian to within the default relative tolerance.
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerance(m, Tolerances::default().hermiticity)
    }

    pub fn with_tolerance(m: CMatrix, tolerance: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidInput("matrix dimension must be at least 1".into()));
        }
        let norm = m.norm();
        let residual = (&m - m.adjoint()).norm() / 2.0;
        let relative = if norm > 0.0 { residual / norm } else { 0.0 };
        if !relative.is_finite() || relative > tolerance {
            return Err(Error::NotHermitian {
                residual: relative,
                tolerance,
            });
        }
        Ok(Self::symmetrized(m))
    }

    /// Hermitian part `(m + m†)/2` without any check. Used for results of
    /// operations that are Hermitian in exact arithmetic.
    pub(crate) fn symmetrized(m: CMatrix) -> Self {
        let adj = m.adjoint();
        let inner = (m + adj) * Complex64::new(0.5, 0.0);
        Self { inner }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let k = rows.len();
        let m = CMatrix::from_fn(k, k, |i, j| Complex64::new(rows[i][j], 0.0));
        Self::new(m)
    }

    pub fn identity(k: usize) -> Self {
        Self {
            inner: CMatrix::identity(k, k),
        }
    }

    pub fn zeros(k: usize) -> Self {
        Self {
            inner: CMatrix::zeros(k, k),
        }
    }

    pub fn diag(values: &[f64]) -> Self {
        let k = values.len();
        let mut inner = CMatrix::zeros(k, k);
        for (i, &v) in values.iter().enumerate() {
            inner[(i, i)] = Complex64::new(v, 0.0);
        }
        Self { inner }
    }

    /// Rank-one projector `vv†` (not normalized).
    pub fn outer(v: &CVector) -> Self {
        Self::symmetrized(v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> CMatrix {
        self.inner
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.inner.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn hs_norm(&self) -> f64 {
        self.inner.norm()
    }

    /// `Tr(XY)`, real for Hermitian arguments.
    pub fn hs_inner(&self, other: &HermitianMatrix) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self.hs_inner_unchecked(other))
    }

    pub(crate) fn hs_inner_unchecked(&self, other: &HermitianMatrix) -> f64 {
        // Tr(XY) = Σ_ij X_ij Y_ji = Σ_ij X_ij conj(Y_ij)
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(x, y)| (x * y.conj()).re)
            .sum()
    }

    pub fn distance(&self, other: &HermitianMatrix) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok((&self.inner - &other.inner).norm())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            inner: &self.inner * Complex64::new(s, 0.0),
        }
    }

    /// `T X T†` for an arbitrary square `T`.
    pub fn congruence(&self, t: &CMatrix) -> Self {
        Self::symmetrized(t * &self.inner * t.adjoint())
    }

    /// Transpose, equal to the entrywise complex conjugate for Hermitian input.
    pub fn transpose(&self) -> Self {
        Self {
            inner: self.inner.transpose(),
        }
    }

    pub fn eig(&self) -> Result<Spectrum> {
        let k = self.dim();
        let max_iter = 1000 * k.max(1);
        let eig = nalgebra::SymmetricEigen::try_new(self.inner.clone(), f64::EPSILON, max_iter)
            .ok_or(Error::EigenNoConvergence { iterations: max_iter })?;
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let eigenvectors = CMatrix::from_fn(k, k, |r, c| eig.eigenvectors[(r, order[c])]);
        Ok(Spectrum {
            eigenvalues,
            eigenvectors,
        })
    }

    /// Ascending eigenvalues only.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.eig()?.eigenvalues)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eig()?.min())
    }

    /// Numerical rank: eigenvalues with `|λ| > rel_tol · max|λ|`.
    pub fn rank(&self, rel_tol: f64) -> Result<usize> {
        let ev = self.eigenvalues()?;
        let scale = ev.iter().fold(0.0f64, |acc, l| acc.max(l.abs()));
        if scale == 0.0 {
            return Ok(0);
        }
        Ok(ev.iter().filter(|l| l.abs() > rel_tol * scale).count())
    }

    pub fn sqrt_psd(&self) -> Result<Self> {
        self.sqrt_psd_with(Tolerances::default().psd_clamp)
    }

    /// Positive square root. Eigenvalues in `[-clamp·‖X‖, 0)` are treated
    /// as zero; anything more negative is an error.
    pub fn sqrt_psd_with(&self, clamp: f64) -> Result<Self> {
        let spec = self.eig()?;
        let threshold = clamp * self.hs_norm();
        if spec.min() < -threshold {
            return Err(Error::NotPsd {
                eigenvalue: spec.min(),
                threshold: -threshold,
            });
        }
        Ok(spec.reconstruct_with(|l| l.max(0.0).sqrt()))
    }

    pub fn inv_pd(&self) -> Result<Self> {
        self.inv_pd_with(Tolerances::default().pd_epsilon)
    }

    pub fn inv_pd_with(&self, epsilon: f64) -> Result<Self> {
        let spec = self.eig()?;
        if spec.min() <= epsilon {
            return Err(Error::Singular {
                eigenvalue: spec.min(),
                epsilon,
            });
        }
        Ok(spec.reconstruct_with(|l| 1.0 / l))
    }

    fn check_same_dim(&self, other: &HermitianMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

pub fn hs_inner(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<f64> {
    x.hs_inner(y)
}

pub fn eig_hermitian(x: &HermitianMatrix) -> Result<Spectrum> {
    x.eig()
}

pub fn sqrt_psd(x: &HermitianMatrix) -> Result<HermitianMatrix> {
    x.sqrt_psd()
}

pub fn inv_pd(x: &HermitianMatrix) -> Result<HermitianMatrix> {
    x.inv_pd()
}

/// Standard basis vector `e_i` of `C^k`.
pub fn basis_vector(k: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(k);
    v[i] = Complex64::new(1.0, 0.0);
    v
}

/// Orthonormal basis of `H_k` under `Tr(XY)`.
///
/// Element 0 is `I/√k`. It is followed by the `k−1` traceless diagonal
/// (generalized Gell-Mann) matrices and then, for each pair `i < j`, the
/// symmetric and antisymmetric off-diagonal elements.
pub fn hermitian_basis(k: usize) -> Vec<HermitianMatrix> {
    assert!(k >= 1, "basis dimension must be positive");
    let mut basis = Vec::with_capacity(k * k);
    basis.push(HermitianMatrix::identity(k).scale(1.0 / (k as f64).sqrt()));
    for l in 1..k {
        let norm = ((l * (l + 1)) as f64).sqrt();
        let mut d = vec![0.0; k];
        for entry in d.iter_mut().take(l) {
            *entry = 1.0 / norm;
        }
        d[l] = -(l as f64) / norm;
        basis.push(HermitianMatrix::diag(&d));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..k {
        for j in (i + 1)..k {
            let mut sym = CMatrix::zeros(k, k);
            sym[(i, j)] = Complex64::new(s, 0.0);
            sym[(j, i)] = Complex64::new(s, 0.0);
            basis.push(HermitianMatrix { inner: sym });

            let mut anti = CMatrix::zeros(k, k);
            anti[(i, j)] = Complex64::new(0.0, -s);
            anti[(j, i)] = Complex64::new(0.0, s);
            basis.push(HermitianMatrix { inner: anti });
        }
    }
    basis
}

/// Coordinates of `x` in [`hermitian_basis`].
pub fn basis_coordinates(x: &HermitianMatrix) -> Vec<f64> {
    hermitian_basis(x.dim())
        .iter()
        .map(|e| e.hs_inner_unchecked(x))
        .collect()
}

/// Inverse of [`basis_coordinates`].
pub fn from_basis_coordinates(k: usize, coords: &[f64]) -> Result<HermitianMatrix> {
    if coords.len() != k * k {
        return Err(Error::DimensionMismatch {
            expected: k * k,
            found: coords.len(),
        });
    }
    let mut out = CMatrix::zeros(k, k);
    for (e, &c) in hermitian_basis(k).iter().zip(coords) {
        out += e.as_matrix() * Complex64::new(c, 0.0);
    }
    Ok(HermitianMatrix { inner: out })
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in addition");
        HermitianMatrix {
            inner: &self.inner + &rhs.inner,
        }
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in subtraction");
        HermitianMatrix {
            inner: &self.inner - &rhs.inner,
        }
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scale(rhs)
    }
}

impl Neg for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn neg(self) -> HermitianMatrix {
        self.scale(-1.0)
    }
}

/// Wire form: `{"dim": k, "entries": [[re, im], ...]}`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HermitianJson {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl TryFrom<HermitianJson> for HermitianMatrix {
    type Error = Error;

    fn try_from(value: HermitianJson) -> Result<Self> {
        let k = value.dim;
        if k == 0 {
            return Err(Error::InvalidInput("dim must be at least 1".into()));
        }
        if value.entries.len() != k * k {
            return Err(Error::DimensionMismatch {
                expected: k * k,
                found: value.entries.len(),
            });
        }
        let m = CMatrix::from_fn(k, k, |i, j| {
            let [re, im] = value.entries[i * k + j];
            Complex64::new(re, im)
        });
        HermitianMatrix::new(m)
    }
}

impl From<HermitianMatrix> for HermitianJson {
    fn from(value: HermitianMatrix) -> Self {
        let k = value.dim();
        let mut entries = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let z = value.inner[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        HermitianJson { dim: k, entries }
    }
}
