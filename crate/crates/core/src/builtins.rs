//! Reference witnesses and maps.
//!
//! * the Choi–Lam map on `H₃` and its witness, continuum of zeros and the
//!   tangent section through it,
//! * an extremal positive map `H₂ → H₄` with two rings of zeros, given by
//!   19 numerical constants,
//! * the rank-one preservers: identity, transposition, unitary conjugation.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bipartite::{witness_from_linear_map, Witness};
use crate::error::{Error, Result};
use crate::hermitian::{CMatrix, CVector, HermitianMatrix};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Scale convention for the Choi–Lam witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChoiLamScale {
    /// The witness of the map exactly as written, including the factor ½.
    #[default]
    Map,
    /// Twice the map scale: its partial transpose has integer entries.
    Integer,
}

impl ChoiLamScale {
    pub fn factor(self) -> f64 {
        match self {
            ChoiLamScale::Map => 1.0,
            ChoiLamScale::Integer => 2.0,
        }
    }
}

fn choi_lam_raw(x: &CMatrix) -> CMatrix {
    let half = re(0.5);
    let mut y = CMatrix::zeros(3, 3);
    y[(0, 0)] = (x[(0, 0)] + x[(2, 2)]) * half;
    y[(1, 1)] = (x[(0, 0)] + x[(1, 1)]) * half;
    y[(2, 2)] = (x[(1, 1)] + x[(2, 2)]) * half;
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                y[(i, j)] = -x[(i, j)] * half;
            }
        }
    }
    y
}

/// The Choi–Lam map: diagonal entries are averaged cyclically,
/// off-diagonal entries are negated, everything is halved.
pub fn choi_lam_map_apply(x: &HermitianMatrix) -> Result<HermitianMatrix> {
    if x.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: x.dim(),
        });
    }
    Ok(HermitianMatrix::symmetrized(choi_lam_raw(x.as_matrix())))
}

pub fn choi_lam_witness() -> Witness {
    choi_lam_witness_scaled(ChoiLamScale::Map)
}

pub fn choi_lam_witness_scaled(scale: ChoiLamScale) -> Witness {
    witness_from_linear_map(3, 3, choi_lam_raw)
        .expect("Choi-Lam map is Hermiticity preserving")
        .scale(scale.factor())
}

/// `φ(α, β) = e₁ + e^{iα} e₂ + e^{iβ} e₃` (not normalized).
pub fn choi_lam_continuum_vector(alpha: f64, beta: f64) -> CVector {
    CVector::from_vec(vec![re(1.0), Complex64::from_polar(1.0, alpha), Complex64::from_polar(1.0, beta)])
}

/// The pure state `ρ(α, β) = φφ†/3` on the continuum of zeros and its image
/// under the map, which equals `(3ρ₀ − ρ)/2` with `ρ₀ = I/3`.
pub fn choi_lam_continuum(alpha: f64, beta: f64) -> (HermitianMatrix, HermitianMatrix) {
    let phi = choi_lam_continuum_vector(alpha, beta);
    let rho = HermitianMatrix::outer(&phi).scale(1.0 / 3.0);
    let image = choi_lam_map_apply(&rho).expect("3x3 input");
    (rho, image)
}

/// Section through `I/3` tangent to the continuum surface at `α = β = 0`.
#[derive(Debug, Clone)]
pub struct TangentSection {
    pub rho0: HermitianMatrix,
    pub rho1: HermitianMatrix,
    pub rho2: HermitianMatrix,
    /// Constants making the image axes orthonormal.
    pub a: f64,
    pub b: f64,
}

/// `ρ₀ = I/3`, `ρ₁ = ρ(0,0)`, `ρ₂ = ρ₁ + D(0,0)` with
/// `D = (ξφ† + φξ†)/3`, `ξ = i e₂`.
///
/// `a` and `b` are computed so that the images of `B = a(ρ₁ − ρ₀)` and
/// `C = b D` are unit vectors.
pub fn choi_lam_tangent_section() -> TangentSection {
    let rho0 = HermitianMatrix::identity(3).scale(1.0 / 3.0);
    let phi = choi_lam_continuum_vector(0.0, 0.0);
    let mut xi = CVector::zeros(3);
    xi[1] = I;
    let d = HermitianMatrix::symmetrized((&xi * phi.adjoint() + &phi * xi.adjoint()) * re(1.0 / 3.0));
    let rho1 = HermitianMatrix::outer(&phi).scale(1.0 / 3.0);
    let rho2 = &rho1 + &d;
    let image_b = choi_lam_map_apply(&(&rho1 - &rho0)).expect("3x3");
    let image_c = choi_lam_map_apply(&d).expect("3x3");
    TangentSection {
        a: 1.0 / image_b.hs_norm(),
        b: 1.0 / image_c.hs_norm(),
        rho0,
        rho1,
        rho2,
    }
}

/// Appendix constants `a₁ … a₁₉` of the 2×4 map, as printed.
pub const HORODECKI_2X4_CONSTANTS: &str = "\
a1 = 0.0244482760740412
a2 = 0.2152770862261020
a3 = 0.0114377547217477
a4 = 0.0500075452822933
a5 = 0.0644909685779951
a6 = 0.1957836691218616
a7 = 0.0774551312933996
a8 = 0.0177155824920755
a9 = 0.0363521121932822
a10 = 0.0276760626964089
a11 = 0.0094553411157518
a12 = 0.0293657267910500
a13 = 0.0130745578191192
a14 = 0.1714859526438769
a15 = 0.0675990471881839
a16 = 0.0121590711417975
a17 = 0.0384768416753617
a18 = 0.0082070224528484
a19 = 0.0424325553291989
";

/// Parsed constants, index 0 unused so that `a[k]` is `a_k`.
pub fn horodecki_2x4_constants() -> &'static [f64; 20] {
    static CONSTANTS: OnceLock<[f64; 20]> = OnceLock::new();
    CONSTANTS.get_or_init(|| {
        let mut a = [f64::NAN; 20];
        for line in HORODECKI_2X4_CONSTANTS.lines() {
            let (name, value) = line.split_once('=').expect("name = value");
            let idx: usize = name.trim().trim_start_matches('a').parse().expect("index");
            a[idx] = value.trim().parse().expect("decimal constant");
        }
        assert!(a[1..].iter().all(|v| v.is_finite()), "missing constant");
        a
    })
}

/// The four Hermitian matrices `B₀, B₁, B₂, B₃` of the 2×4 map.
#[derive(Debug, Clone)]
pub struct Horodecki2x4Basis {
    pub b0: CMatrix,
    pub b1: CMatrix,
    pub b2: CMatrix,
    pub b3: CMatrix,
}

pub fn horodecki_2x4_basis() -> &'static Horodecki2x4Basis {
    static BASIS: OnceLock<Horodecki2x4Basis> = OnceLock::new();
    BASIS.get_or_init(|| {
        let a = horodecki_2x4_constants();
        let z = re(0.0);
        let ri = |v: f64| I * v;
        let plus = CMatrix::from_row_slice(4, 4, &[
            re(a[1]), -ri(a[3]), ri(a[4]), re(a[1]),
            ri(a[3]), re(a[2]), z, ri(a[3]),
            -ri(a[4]), z, re(a[2]), -ri(a[4]),
            re(a[1]), -ri(a[3]), ri(a[4]), re(a[1]),
        ]);
        let minus = CMatrix::from_row_slice(4, 4, &[
            re(a[5]), ri(a[7]), ri(a[8]), -re(a[5]),
            -ri(a[7]), re(a[6]), z, ri(a[7]),
            -ri(a[8]), z, re(a[6]), ri(a[8]),
            -re(a[5]), -ri(a[7]), -ri(a[8]), re(a[5]),
        ]);
        let b1 = CMatrix::from_row_slice(4, 4, &[
            z, -re(a[9]) - ri(a[10]), re(a[11]) - ri(a[12]), -ri(a[13]),
            -re(a[9]) + ri(a[10]), z, -re(a[14]) - ri(a[15]), re(a[11]) + ri(a[16]),
            re(a[11]) + ri(a[12]), -re(a[14]) + ri(a[15]), z, -re(a[9]) - ri(a[17]),
            ri(a[13]), re(a[11]) - ri(a[16]), -re(a[9]) + ri(a[17]), z,
        ]);
        // Entry (4,2) is the conjugate of (2,4); see the README note on B₂.
        let b2 = CMatrix::from_row_slice(4, 4, &[
            z, -re(a[11]) - ri(a[12]), -re(a[9]) + ri(a[10]), ri(a[18]),
            -re(a[11]) + ri(a[12]), -re(a[14]), ri(a[19]), re(a[9]) - ri(a[17]),
            -re(a[9]) - ri(a[10]), -ri(a[19]), re(a[14]), re(a[11]) - ri(a[16]),
            -ri(a[18]), re(a[9]) + ri(a[17]), re(a[11]) + ri(a[16]), z,
        ]);
        for m in [&plus, &minus, &b1, &b2] {
            assert!((m - m.adjoint()).norm() == 0.0, "appendix matrix not Hermitian");
        }
        let half = re(0.5);
        Horodecki2x4Basis {
            b0: (&plus + &minus) * half,
            b3: (&plus - &minus) * half,
            b1,
            b2,
        }
    })
}

/// `B = u B₀ + x B₁ + y B₂ + z B₃`, the image of
/// `½[[u+z, x−iy], [x+iy, u−z]]`.
pub fn horodecki_2x4_map_apply(u: f64, x: f64, y: f64, z: f64) -> HermitianMatrix {
    let b = horodecki_2x4_basis();
    HermitianMatrix::symmetrized(&b.b0 * re(u) + &b.b1 * re(x) + &b.b2 * re(y) + &b.b3 * re(z))
}

fn horodecki_raw(x: &CMatrix) -> CMatrix {
    // u = X11+X22, z = X11−X22, x = X12+X21, y = i(X12−X21)
    let b = horodecki_2x4_basis();
    let u = x[(0, 0)] + x[(1, 1)];
    let z = x[(0, 0)] - x[(1, 1)];
    let xx = x[(0, 1)] + x[(1, 0)];
    let yy = I * (x[(0, 1)] - x[(1, 0)]);
    &b.b0 * u + &b.b1 * xx + &b.b2 * yy + &b.b3 * z
}

pub fn horodecki_2x4_witness() -> Witness {
    witness_from_linear_map(2, 4, horodecki_raw).expect("2x4 map is Hermiticity preserving")
}

/// Bloch coordinates `(x, y, z)` of `φφ†/‖φ‖²` for `φ ∈ C²`, using
/// `φφ† = ½[[1+z, x−iy], [x+iy, 1−z]]`.
pub fn bloch_coordinates(phi: &CVector) -> [f64; 3] {
    let n2 = phi.norm_squared();
    let c = phi[0] * phi[1].conj() / n2;
    [2.0 * c.re, -2.0 * c.im, (phi[0].norm_sqr() - phi[1].norm_sqr()) / n2]
}

/// Unit vector with the given Bloch coordinates.
pub fn bloch_vector(x: f64, y: f64, z: f64) -> CVector {
    let r = (x * x + y * y + z * z).sqrt();
    let (x, y, z) = (x / r, y / r, z / r);
    let theta = z.clamp(-1.0, 1.0).acos();
    let phase = y.atan2(x);
    CVector::from_vec(vec![re((theta / 2.0).cos()), Complex64::from_polar((theta / 2.0).sin(), phase)])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Branch::Plus => '+',
            Branch::Minus => '-',
        }
    }
}

/// Parameters of the rings of zeros of the 2×4 witness family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingParams {
    pub a: f64,
    pub b: f64,
    pub theta0: f64,
}

impl Default for RingParams {
    fn default() -> Self {
        Self {
            a: 0.1807362587783353,
            b: 0.047422228589395,
            theta0: 1.121090508802759,
        }
    }
}

/// Distance in θ below which the pole limit is returned.
pub const RING_POLE_WINDOW: f64 = 1e-9;

/// Point of a ring of zeros:
/// `s = a cos(2θ+θ₀)/cos(θ−θ₀)`, `t = (−bs ± √(1+s²−b²))/(1+s²)`,
/// `(x, y, z) = (t cos θ, t sin θ, −b − ts)`.
///
/// Near `θ ≡ θ₀ + π/2 (mod π)` the denominator vanishes; there the limit
/// `(0, 0, ∓1)` for the `±` branch is returned.
pub fn ring_zero(theta: f64, branch: Branch, p: &RingParams) -> [f64; 3] {
    let offset = (theta - p.theta0 - FRAC_PI_2).rem_euclid(PI);
    if offset.min(PI - offset) < RING_POLE_WINDOW {
        return [0.0, 0.0, -branch.sign()];
    }
    let s = p.a * (2.0 * theta + p.theta0).cos() / (theta - p.theta0).cos();
    let t = (-p.b * s + branch.sign() * (1.0 + s * s - p.b * p.b).sqrt()) / (1.0 + s * s);
    [t * theta.cos(), t * theta.sin(), -p.b - t * s]
}

/// The eight zeros shared by every witness of the family: both branches at
/// `θ ∈ {0, π/3, −π/3}` and the two poles.
///
/// Fails if the θ-family points move when `θ₀` is perturbed, which would
/// mean the parameters do not describe the family.
pub fn ring_common_zeros(p: &RingParams) -> Result<Vec<[f64; 3]>> {
    let mut points = Vec::with_capacity(8);
    let shifted = RingParams {
        theta0: p.theta0 + 0.3,
        ..*p
    };
    for theta in [0.0, PI / 3.0, -PI / 3.0] {
        for branch in [Branch::Plus, Branch::Minus] {
            let q = ring_zero(theta, branch, p);
            let r = ring_zero(theta, branch, &shifted);
            let drift = (0..3).map(|i| (q[i] - r[i]).abs()).fold(0.0, f64::max);
            if drift > 1e-10 {
                return Err(Error::InvalidInput(format!(
                    "common zero at theta={theta} depends on theta0 (drift {drift:.3e})"
                )));
            }
            points.push(q);
        }
    }
    points.push([0.0, 0.0, 1.0]);
    points.push([0.0, 0.0, -1.0]);
    Ok(points)
}

/// Witness of the identity map, `f(φ, χ) = |χ†φ|²`.
pub fn identity_witness(k: usize) -> Result<Witness> {
    witness_from_linear_map(k, k, |x| x.clone())
}

/// Witness of the transposition map, `f(φ, χ) = |χ†φ*|²`.
pub fn transposition_witness(k: usize) -> Result<Witness> {
    witness_from_linear_map(k, k, |x| x.transpose())
}

/// Witness of `X ↦ U X U†`.
pub fn unitary_conjugation_witness(u: &CMatrix) -> Result<Witness> {
    let k = u.nrows();
    if !u.is_square() {
        return Err(Error::InvalidInput("U must be square".into()));
    }
    let residual = (u.adjoint() * u - CMatrix::identity(k, k)).norm();
    if residual > 1e-10 {
        return Err(Error::InvalidInput(format!("U is not unitary (residual {residual:.3e})")));
    }
    witness_from_linear_map(k, k, |x| u * x * u.adjoint())
}
