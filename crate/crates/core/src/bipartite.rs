//! Bipartite structure on `H_{mn}` and the witness ↔ map correspondence.
//!
//! Composite indices are row-major: `I = i·n + j` (zero based) for
//! `i ∈ 0..m`, `j ∈ 0..n`. A witness `A` defines the map
//! `M_A X = Tr₁(A (X ⊗ I_n))`, i.e. `Y_jl = Σ_ik A_{ij;kl} X_ki`, and its
//! adjoint `M_Aᵀ Y = Tr₂(A (I_m ⊗ Y))`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{hermitian_basis, CMatrix, CVector, HermitianMatrix};

/// Hermitian matrix on `C^m ⊗ C^n` together with its factor dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WitnessJson", into = "WitnessJson")]
pub struct Witness {
    m: usize,
    n: usize,
    matrix: HermitianMatrix,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessJson {
    pub m: usize,
    pub n: usize,
    pub matrix: HermitianMatrix,
}

impl TryFrom<WitnessJson> for Witness {
    type Error = Error;
    fn try_from(value: WitnessJson) -> Result<Self> {
        Witness::new(value.m, value.n, value.matrix)
    }
}

impl From<Witness> for WitnessJson {
    fn from(value: Witness) -> Self {
        WitnessJson {
            m: value.m,
            n: value.n,
            matrix: value.matrix,
        }
    }
}

impl Witness {
    pub fn new(m: usize, n: usize, matrix: HermitianMatrix) -> Result<Self> {
        if m < 2 || n < 2 {
            return Err(Error::InvalidInput(format!(
                "factor dimensions must be at least 2, got {m}x{n}"
            )));
        }
        if matrix.dim() != m * n {
            return Err(Error::DimensionMismatch {
                expected: m * n,
                found: matrix.dim(),
            });
        }
        Ok(Self { m, n, matrix })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            m: self.m,
            n: self.n,
            matrix: self.matrix.scale(s),
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        self.matrix.get(i * self.n + j, k * self.n + l)
    }

    pub fn partial_transpose(&self) -> Witness {
        partial_transpose(self)
    }

    pub fn apply_map(&self, x: &HermitianMatrix) -> Result<HermitianMatrix> {
        apply_map(self, x)
    }

    pub fn apply_transposed_map(&self, y: &HermitianMatrix) -> Result<HermitianMatrix> {
        apply_transposed_map(self, y)
    }

    pub fn biquadratic_form(&self, phi: &CVector, chi: &CVector) -> Result<f64> {
        biquadratic_form(self, phi, chi)
    }

    /// `Y_jl = Σ_ik A_{ij;kl} X_ki` for an arbitrary complex `m×m` matrix.
    pub(crate) fn map_raw(&self, x: &CMatrix) -> CMatrix {
        let (m, n) = (self.m, self.n);
        let mut y = CMatrix::zeros(n, n);
        for i in 0..m {
            for k in 0..m {
                let xki = x[(k, i)];
                if xki == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    for l in 0..n {
                        y[(j, l)] += self.at(i, j, k, l) * xki;
                    }
                }
            }
        }
        y
    }

    /// `X_ik = Σ_jl A_{ij;kl} Y_lj` for an arbitrary complex `n×n` matrix.
    pub(crate) fn transposed_map_raw(&self, y: &CMatrix) -> CMatrix {
        let (m, n) = (self.m, self.n);
        let mut x = CMatrix::zeros(m, m);
        for j in 0..n {
            for l in 0..n {
                let ylj = y[(l, j)];
                if ylj == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for i in 0..m {
                    for k in 0..m {
                        x[(i, k)] += self.at(i, j, k, l) * ylj;
                    }
                }
            }
        }
        x
    }
}

/// `B ⊗ C` with `(B⊗C)_{ij;kl} = B_ik C_jl`.
pub fn tensor(b: &HermitianMatrix, c: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix::symmetrized(b.as_matrix().kronecker(c.as_matrix()))
}

/// Product vector `ψ_ij = φ_i χ_j`.
pub fn product_vector(phi: &CVector, chi: &CVector) -> CVector {
    phi.kronecker(chi)
}

/// `(A^P)_{ij;kl} = A_{il;kj}`: transpose on the second factor.
pub fn partial_transpose(w: &Witness) -> Witness {
    let (m, n) = (w.m, w.n);
    let out = DMatrix::from_fn(m * n, m * n, |r, c| {
        let (i, j) = (r / n, r % n);
        let (k, l) = (c / n, c % n);
        w.at(i, l, k, j)
    });
    Witness {
        m,
        n,
        matrix: HermitianMatrix::symmetrized(out),
    }
}

/// `(Tr₁A)_jl = Σ_i A_{ij;il}`, an `n×n` matrix.
pub fn partial_trace_1(w: &Witness) -> HermitianMatrix {
    let (m, n) = (w.m, w.n);
    let out = DMatrix::from_fn(n, n, |j, l| (0..m).map(|i| w.at(i, j, i, l)).sum());
    HermitianMatrix::symmetrized(out)
}

/// `(Tr₂A)_ik = Σ_j A_{ij;kj}`, an `m×m` matrix.
pub fn partial_trace_2(w: &Witness) -> HermitianMatrix {
    let (m, n) = (w.m, w.n);
    let out = DMatrix::from_fn(m, m, |i, k| (0..n).map(|j| w.at(i, j, k, j)).sum());
    HermitianMatrix::symmetrized(out)
}

/// `M_A X = Tr₁(A(X ⊗ I_n))`.
pub fn apply_map(w: &Witness, x: &HermitianMatrix) -> Result<HermitianMatrix> {
    if x.dim() != w.m {
        return Err(Error::DimensionMismatch {
            expected: w.m,
            found: x.dim(),
        });
    }
    Ok(HermitianMatrix::symmetrized(w.map_raw(x.as_matrix())))
}

/// `M_Aᵀ Y = Tr₂(A(I_m ⊗ Y))`.
pub fn apply_transposed_map(w: &Witness, y: &HermitianMatrix) -> Result<HermitianMatrix> {
    if y.dim() != w.n {
        return Err(Error::DimensionMismatch {
            expected: w.n,
            found: y.dim(),
        });
    }
    Ok(HermitianMatrix::symmetrized(w.transposed_map_raw(y.as_matrix())))
}

/// `f_A(φ, χ) = (φ⊗χ)† A (φ⊗χ)`. The vectors are used as given.
pub fn biquadratic_form(w: &Witness, phi: &CVector, chi: &CVector) -> Result<f64> {
    if phi.len() != w.m {
        return Err(Error::DimensionMismatch {
            expected: w.m,
            found: phi.len(),
        });
    }
    if chi.len() != w.n {
        return Err(Error::DimensionMismatch {
            expected: w.n,
            found: chi.len(),
        });
    }
    let psi = product_vector(phi, chi);
    Ok(psi.dotc(&(w.matrix.as_matrix() * &psi)).re)
}

/// Builds the witness of a linear map given by its action on arbitrary
/// complex `m×m` matrices: `A_{ij;kl} = (f(E_ki))_jl` with `E_ki` the
/// matrix unit.
pub fn witness_from_linear_map<F>(m: usize, n: usize, f: F) -> Result<Witness>
where
    F: Fn(&CMatrix) -> CMatrix,
{
    let mut a = CMatrix::zeros(m * n, m * n);
    for k in 0..m {
        for i in 0..m {
            let mut unit = CMatrix::zeros(m, m);
            unit[(k, i)] = Complex64::new(1.0, 0.0);
            let y = f(&unit);
            if y.nrows() != n || y.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: y.nrows(),
                });
            }
            for j in 0..n {
                for l in 0..n {
                    a[(i * n + j, k * n + l)] = y[(j, l)];
                }
            }
        }
    }
    Witness::new(m, n, HermitianMatrix::with_tolerance(a, 1e-10)?)
}

/// Result of [`product_transform`].
#[derive(Debug, Clone)]
pub struct ProductTransform {
    pub witness: Witness,
    pub cond_u: f64,
    pub cond_v: f64,
}

impl ProductTransform {
    pub const COND_WARN: f64 = 1e8;

    pub fn ill_conditioned(&self) -> bool {
        self.cond_u > Self::COND_WARN || self.cond_v > Self::COND_WARN
    }
}

fn condition_number(t: &CMatrix, which: &'static str) -> Result<f64> {
    let sv = t.singular_values();
    let max = sv.max();
    let min = sv.min();
    if !(min > 1e-14 * max) || max == 0.0 {
        return Err(Error::SingularTransform {
            which,
            sigma_min: min,
        });
    }
    Ok(max / min)
}

/// `Ã = (U⊗V) A (U⊗V)†`.
///
/// A zero `(φ, χ)` of `A` becomes the zero `((U†)⁻¹φ, (V†)⁻¹χ)` of `Ã`.
pub fn product_transform(w: &Witness, u: &CMatrix, v: &CMatrix) -> Result<ProductTransform> {
    if u.nrows() != w.m || u.ncols() != w.m {
        return Err(Error::DimensionMismatch {
            expected: w.m,
            found: u.nrows(),
        });
    }
    if v.nrows() != w.n || v.ncols() != w.n {
        return Err(Error::DimensionMismatch {
            expected: w.n,
            found: v.nrows(),
        });
    }
    let cond_u = condition_number(u, "U")?;
    let cond_v = condition_number(v, "V")?;
    let uv = u.kronecker(v);
    Ok(ProductTransform {
        witness: Witness {
            m: w.m,
            n: w.n,
            matrix: w.matrix.congruence(&uv),
        },
        cond_u,
        cond_v,
    })
}

/// The map in orthonormal Hermitian bases: `coeffs[(b, a)] = ⟨F_b, M E_a⟩`,
/// an `n² × m²` real matrix. Row 0 / column 0 belong to `F₀ = I_n/√n` /
/// `E₀ = I_m/√m`.
#[derive(Debug, Clone, PartialEq)]
pub struct MapMatrix {
    pub m: usize,
    pub n: usize,
    pub coeffs: DMatrix<f64>,
}

impl MapMatrix {
    pub fn from_witness(w: &Witness) -> Self {
        let e = hermitian_basis(w.m);
        let f = hermitian_basis(w.n);
        let images: Vec<HermitianMatrix> = e
            .iter()
            .map(|ea| HermitianMatrix::symmetrized(w.map_raw(ea.as_matrix())))
            .collect();
        let coeffs = DMatrix::from_fn(f.len(), e.len(), |b, a| f[b].hs_inner_unchecked(&images[a]));
        Self {
            m: w.m,
            n: w.n,
            coeffs,
        }
    }

    /// `A = Σ M_ba E_a ⊗ F_b`.
    pub fn to_witness(&self) -> Result<Witness> {
        let e = hermitian_basis(self.m);
        let f = hermitian_basis(self.n);
        let dim = self.m * self.n;
        let mut a = CMatrix::zeros(dim, dim);
        for (ai, ea) in e.iter().enumerate() {
            for (bi, fb) in f.iter().enumerate() {
                let c = self.coeffs[(bi, ai)];
                if c != 0.0 {
                    a += ea.as_matrix().kronecker(fb.as_matrix()) * Complex64::new(c, 0.0);
                }
            }
        }
        Witness::new(self.m, self.n, HermitianMatrix::symmetrized(a))
    }
}

/// Summary of a witness: trace, positivity of `A` and `A^P`, and how far
/// the map is from the (scaled) unital and trace preserving conditions
/// `M E₀ = F₀`, `Mᵀ F₀ = E₀`.
#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    pub m: usize,
    pub n: usize,
    pub trace: f64,
    pub min_eigenvalue: f64,
    pub min_eigenvalue_pt: f64,
    /// `A^P ≥ 0`, i.e. the map is completely positive.
    pub ppt: bool,
    pub unital_residual: f64,
    pub trace_preserving_residual: f64,
    /// `M_{0a}` for all `a`.
    pub map_first_row: Vec<f64>,
    /// `M_{b0}` for all `b`.
    pub map_first_column: Vec<f64>,
}

pub const PPT_TOLERANCE: f64 = 1e-12;

pub fn diagnostics(w: &Witness) -> Result<Diagnostics> {
    let (m, n) = (w.m, w.n);
    let e0 = HermitianMatrix::identity(m).scale(1.0 / (m as f64).sqrt());
    let f0 = HermitianMatrix::identity(n).scale(1.0 / (n as f64).sqrt());
    let unital_residual = apply_map(w, &e0)?.distance(&f0)?;
    let trace_preserving_residual = apply_transposed_map(w, &f0)?.distance(&e0)?;
    let min_eigenvalue = w.matrix.min_eigenvalue()?;
    let min_eigenvalue_pt = partial_transpose(w).matrix.min_eigenvalue()?;
    let scale = w.matrix.hs_norm().max(1.0);
    let mm = MapMatrix::from_witness(w);
    Ok(Diagnostics {
        m,
        n,
        trace: w.matrix.trace(),
        min_eigenvalue,
        min_eigenvalue_pt,
        ppt: min_eigenvalue_pt >= -PPT_TOLERANCE * scale,
        unital_residual,
        trace_preserving_residual,
        map_first_row: mm.coeffs.row(0).iter().copied().collect(),
        map_first_column: mm.coeffs.column(0).iter().copied().collect(),
    })
}
