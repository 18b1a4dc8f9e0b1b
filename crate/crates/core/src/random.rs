//! Seeded random vectors, unitaries and states.
//!
//! Every consumer derives its generator from `(seed, stream)` so that
//! parallel and sequential runs see the same numbers.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bipartite::{tensor, Witness};
use crate::hermitian::{CMatrix, CVector, HermitianMatrix};

pub type Rng64 = ChaCha8Rng;

pub fn rng_for(seed: u64, stream: u64) -> Rng64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Standard complex Gaussian (Ginibre) matrix.
pub fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random unit vector in `C^k`.
pub fn haar_vector(k: usize, rng: &mut impl Rng) -> CVector {
    let v = CVector::from_fn(k, |_, _| gaussian(rng));
    let norm = v.norm();
    v / Complex64::new(norm, 0.0)
}

/// Haar-random unitary via QR of a Ginibre matrix with the phases of R's
/// diagonal divided out.
pub fn haar_unitary(k: usize, rng: &mut impl Rng) -> CMatrix {
    let qr = ginibre(k, k, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..k {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..k {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random density matrix `VV†/Tr(VV†)` of the given rank, `V` a `k×rank`
/// standard Gaussian matrix.
pub fn random_state(k: usize, rank: usize, rng: &mut impl Rng) -> HermitianMatrix {
    let v = ginibre(k, rank, rng);
    let rho = HermitianMatrix::symmetrized(&v * v.adjoint());
    let tr = rho.trace();
    rho.scale(1.0 / tr)
}

/// Random Hermitian matrix with entries of order one.
pub fn random_hermitian(k: usize, rng: &mut impl Rng) -> HermitianMatrix {
    HermitianMatrix::symmetrized(ginibre(k, k, rng))
}

/// Random positive definite matrix `GG†/k + I/k`.
pub fn random_pd(k: usize, rng: &mut impl Rng) -> HermitianMatrix {
    let g = ginibre(k, k, rng);
    let p = HermitianMatrix::symmetrized(&g * g.adjoint());
    let s = 1.0 / k as f64;
    &p.scale(s) + &HermitianMatrix::identity(k).scale(s)
}

/// `Σ_r ρ_r ⊗ σ_r` over random full-rank states: a witness with both `A`
/// and `A^P` positive semidefinite.
pub fn random_separable(m: usize, n: usize, terms: usize, rng: &mut impl Rng) -> Witness {
    let mut a = HermitianMatrix::zeros(m * n);
    for _ in 0..terms {
        let rho = random_state(m, m, rng);
        let sigma = random_state(n, n, rng);
        a = &a + &tensor(&rho, &sigma);
    }
    Witness::new(m, n, a).expect("dimensions agree")
}

/// `λ I/(mn) + (1−λ) A_sep` with `A_sep` from [`random_separable`]
/// normalized to unit trace.
pub fn random_interior_witness(m: usize, n: usize, lambda: f64, rng: &mut impl Rng) -> Witness {
    let sep = random_separable(m, n, m * n, rng);
    let tr = sep.matrix().trace();
    let mixed = HermitianMatrix::identity(m * n).scale(lambda / (m * n) as f64);
    let a = &mixed + &sep.matrix().scale((1.0 - lambda) / tr);
    Witness::new(m, n, a).expect("dimensions agree")
}
