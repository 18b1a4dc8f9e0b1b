//! Scaling a witness to unital and trace preserving form.
//!
//! The fixed point `M X = c Y⁻¹`, `Mᵀ Y = d X⁻¹` is found by iterating
//! `X ↦ (Mᵀ((M X)⁻¹))⁻¹` with the trace of `X` pinned to `m`. With
//! `U = √X`, `V = √Y` the transformed witness `(U⊗V) A (U⊗V)†` then maps
//! `I_m/√m` to `I_n/√n` and back.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bipartite::{diagnostics, product_transform, Witness};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::hermitian::{basis_coordinates, hermitian_basis, CMatrix, HermitianMatrix};

/// Eigenvalue floor for the two inversions of each step.
pub const PD_EPSILON: f64 = 1e-12;

/// Relative residual accepted by [`contraction_spectrum`].
pub const FIXED_POINT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct NormalizeOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Starting point; the identity when `None`.
    pub x0: Option<HermitianMatrix>,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 200,
            x0: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalizationResult {
    pub witness_out: Witness,
    pub u: HermitianMatrix,
    pub v: HermitianMatrix,
    pub x: HermitianMatrix,
    pub y: HermitianMatrix,
    /// `‖X_{k+1} − X_k‖_HS` for every step taken.
    pub history: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

fn strict_inverse(s: &HermitianMatrix, iteration: usize, stage: &'static str) -> Result<HermitianMatrix> {
    let spec = s.eig()?;
    if spec.min() <= PD_EPSILON {
        return Err(Error::NotStrictlyPositive {
            iteration,
            stage,
            eigenvalue: spec.min(),
        });
    }
    Ok(spec.reconstruct_with(|l| 1.0 / l))
}

fn check_dim(w: &Witness, x: &HermitianMatrix) -> Result<()> {
    if x.dim() != w.m() {
        return Err(Error::DimensionMismatch {
            expected: w.m(),
            found: x.dim(),
        });
    }
    Ok(())
}

fn gauge_fix(x: HermitianMatrix, m: usize) -> HermitianMatrix {
    let tr = x.trace();
    x.scale(m as f64 / tr)
}

fn step(w: &Witness, x: &HermitianMatrix, iteration: usize) -> Result<HermitianMatrix> {
    let s = w.apply_map(x)?;
    let y = strict_inverse(&s, iteration, "M X")?;
    let t = w.apply_transposed_map(&y)?;
    let next = strict_inverse(&t, iteration, "M^T Y")?;
    Ok(gauge_fix(next, w.m()))
}

/// One step `X_k ↦ X_{k+1}`, rescaled to `Tr X_{k+1} = m`.
pub fn iterate_step(w: &Witness, x_k: &HermitianMatrix) -> Result<HermitianMatrix> {
    check_dim(w, x_k)?;
    step(w, x_k, 0)
}

/// `Y = √(m/n) (M X)⁻¹` for `X` in the trace gauge.
fn partner(w: &Witness, x: &HermitianMatrix, iteration: usize) -> Result<HermitianMatrix> {
    let c = (w.m() as f64 / w.n() as f64).sqrt();
    Ok(strict_inverse(&w.apply_map(x)?, iteration, "M X")?.scale(c))
}

pub fn normalize(w: &Witness, opts: &NormalizeOptions) -> Result<NormalizationResult> {
    let m = w.m();
    let x0 = match &opts.x0 {
        Some(x0) => {
            check_dim(w, x0)?;
            let min = x0.min_eigenvalue()?;
            if min <= PD_EPSILON {
                return Err(Error::NotStrictlyPositive {
                    iteration: 0,
                    stage: "X0",
                    eigenvalue: min,
                });
            }
            x0.clone()
        }
        None => HermitianMatrix::identity(m),
    };
    let mut x = gauge_fix(x0, m);
    let mut history = Vec::new();
    let mut converged = false;
    for k in 1..=opts.max_iter {
        let next = step(w, &x, k)?;
        let r = next.distance(&x)?;
        history.push(r);
        x = next;
        if r <= opts.tol {
            converged = true;
            break;
        }
    }
    let iterations = history.len();
    let y = partner(w, &x, iterations)?;
    let u = x.sqrt_psd()?;
    let v = y.sqrt_psd()?;
    let witness_out = product_transform(w, u.as_matrix(), v.as_matrix())?.witness;
    Ok(NormalizationResult {
        witness_out,
        u,
        v,
        x,
        y,
        history,
        converged,
        iterations,
    })
}

/// Largest of the scaled unital and trace preserving residuals of `w`.
pub fn unitality_residual(w: &Witness) -> Result<f64> {
    let d = diagnostics(w)?;
    Ok(d.unital_residual.max(d.trace_preserving_residual))
}

/// Relative distance of `P` from a multiple of the identity.
fn proportionality_residual(p: &CMatrix) -> f64 {
    let k = p.nrows();
    let mean = p.trace() / Complex64::new(k as f64, 0.0);
    let scale = mean.norm().max(f64::MIN_POSITIVE);
    (p - CMatrix::identity(k, k) * mean).norm() / scale
}

/// Magnitudes, largest first, of the eigenvalues of the linearized
/// gauge-fixed step at the fixed point `(X*, Y*)`, on traceless
/// perturbations.
pub fn contraction_spectrum(w: &Witness, x_star: &HermitianMatrix, y_star: &HermitianMatrix) -> Result<Vec<f64>> {
    contraction_spectrum_with(w, x_star, y_star, Execution::default())
}

pub fn contraction_spectrum_with(
    w: &Witness,
    x_star: &HermitianMatrix,
    y_star: &HermitianMatrix,
    exec: Execution,
) -> Result<Vec<f64>> {
    let (m, n) = (w.m(), w.n());
    check_dim(w, x_star)?;
    if y_star.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: y_star.dim(),
        });
    }
    let mx = w.apply_map(x_star)?;
    let mty = w.apply_transposed_map(y_star)?;
    let residual = proportionality_residual(&(mx.as_matrix() * y_star.as_matrix()))
        .max(proportionality_residual(&(mty.as_matrix() * x_star.as_matrix())));
    if !(residual <= FIXED_POINT_TOLERANCE) {
        return Err(Error::NotAFixedPoint {
            residual,
            tolerance: FIXED_POINT_TOLERANCE,
        });
    }

    let x = gauge_fix(x_star.clone(), m);
    let s_inv = strict_inverse(&w.apply_map(&x)?, 0, "M X")?;
    let t_inv = strict_inverse(&w.apply_transposed_map(&s_inv)?, 0, "M^T Y")?;
    let mu = n as f64 / m as f64;
    let basis = hermitian_basis(m);
    let dim = m * m - 1;

    let columns = exec.try_map_range(dim, |col| -> Result<Vec<f64>> {
        let delta = &basis[col + 1];
        let inner = w.apply_map(delta)?.congruence(s_inv.as_matrix());
        let df = w.apply_transposed_map(&inner)?.congruence(t_inv.as_matrix()).scale(mu);
        let dg = &df - &x.scale(df.trace() / m as f64);
        Ok(basis_coordinates(&dg)[1..].to_vec())
    })?;
    let jac = DMatrix::from_fn(dim, dim, |r, c| columns[c][r]);
    let mut mags: Vec<f64> = jac.complex_eigenvalues().iter().map(|z| z.norm()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    Ok(mags)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::{partial_trace_1, partial_trace_2, witness_from_linear_map};
    use crate::builtins::{choi_lam_witness, horodecki_2x4_witness, identity_witness};
    use crate::random::{random_interior_witness, random_pd, rng_for};

    fn dxd_witness() -> Witness {
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(
            [1.0, 2.0, 3.0].iter().map(|v| Complex64::new(v / 14f64.sqrt(), 0.0)).collect(),
        ));
        witness_from_linear_map(3, 3, |x| &d * x * &d).unwrap()
    }

    #[test]
    fn identity_is_a_fixed_point() {
        let w = identity_witness(3).unwrap();
        let x1 = iterate_step(&w, &HermitianMatrix::identity(3)).unwrap();
        assert!(x1.distance(&HermitianMatrix::identity(3)).unwrap() < 1e-15);
    }

    #[test]
    fn choi_lam_converges_immediately() {
        let r = normalize(&choi_lam_witness(), &NormalizeOptions::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 1);
        assert!(r.u.distance(&HermitianMatrix::identity(3)).unwrap() < 1e-12);
        assert!(r.v.distance(&HermitianMatrix::identity(3)).unwrap() < 1e-12);
    }

    #[test]
    fn cp_congruence_reaches_fixed_point() {
        let w = dxd_witness();
        let r = normalize(&w, &NormalizeOptions::default()).unwrap();
        assert!(r.converged);
        let mx = w.apply_map(&r.x).unwrap();
        let prod = mx.as_matrix() * r.y.as_matrix();
        assert!(proportionality_residual(&prod) < 1e-10);
        assert!(unitality_residual(&r.witness_out).unwrap() < 1e-10);
        let uu = r.u.as_matrix() * r.u.as_matrix();
        assert!((uu - r.x.as_matrix()).norm() < 1e-9);
    }

    #[test]
    fn rectangular_witness_is_scaled() {
        let r = normalize(&horodecki_2x4_witness(), &NormalizeOptions::default()).unwrap();
        assert!(r.converged, "history {:?}", r.history);
        let out = &r.witness_out;
        let tr = out.matrix().trace();
        let t1 = partial_trace_1(out);
        let t2 = partial_trace_2(out);
        assert!(t1.distance(&HermitianMatrix::identity(4).scale(tr / 4.0)).unwrap() < 1e-10);
        assert!(t2.distance(&HermitianMatrix::identity(2).scale(tr / 2.0)).unwrap() < 1e-10);
        assert!(unitality_residual(out).unwrap() < 1e-10);
    }

    #[test]
    fn bad_start_is_rejected() {
        let opts = NormalizeOptions {
            x0: Some(HermitianMatrix::diag(&[1.0, 0.0, 1.0])),
            ..Default::default()
        };
        assert!(matches!(
            normalize(&dxd_witness(), &opts),
            Err(Error::NotStrictlyPositive { stage: "X0", .. })
        ));
    }

    #[test]
    fn start_independence() {
        let w = random_interior_witness(3, 3, 0.3, &mut rng_for(9, 0));
        let base = normalize(&w, &NormalizeOptions::default()).unwrap();
        let mut rng = rng_for(5, 0);
        for _ in 0..3 {
            let opts = NormalizeOptions {
                x0: Some(random_pd(3, &mut rng)),
                ..Default::default()
            };
            let r = normalize(&w, &opts).unwrap();
            assert!(r.x.distance(&base.x).unwrap() < 1e-9);
        }
    }

    #[test]
    fn identity_spectrum_is_flat() {
        let w = identity_witness(3).unwrap();
        let i3 = HermitianMatrix::identity(3);
        let spec = contraction_spectrum(&w, &i3, &i3).unwrap();
        assert_eq!(spec.len(), 8);
        for s in spec {
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn choi_lam_spectrum_bounded() {
        let i3 = HermitianMatrix::identity(3);
        let spec = contraction_spectrum(&choi_lam_witness(), &i3, &i3).unwrap();
        assert!(spec[0] <= 1.0 + 1e-12);
    }

    #[test]
    fn spectrum_rejects_non_fixed_point() {
        let w = dxd_witness();
        let i3 = HermitianMatrix::identity(3);
        assert!(matches!(
            contraction_spectrum(&w, &i3, &i3),
            Err(Error::NotAFixedPoint { .. })
        ));
    }
}
