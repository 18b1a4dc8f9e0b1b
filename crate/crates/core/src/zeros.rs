//! Zeros of the biquadratic form over product vectors.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bipartite::{product_vector, Witness};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::hermitian::{hermitian_basis, CMatrix, CVector, HermitianMatrix};
use crate::random::{haar_vector, rng_for};

pub const ZERO_TOL: f64 = 1e-9;
pub const HESS_TOL_REL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroKind {
    Quadratic,
    Quartic,
}

mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &CVector, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<CVector, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(CVector::from_iterator(pairs.len(), pairs.iter().map(|p| Complex64::new(p[0], p[1]))))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductZero {
    #[serde(with = "complex_vec")]
    pub phi: CVector,
    #[serde(with = "complex_vec")]
    pub chi: CVector,
    pub value: f64,
    pub kind: ZeroKind,
    pub hessian_spectrum: Vec<f64>,
    /// Index into [`ZeroReport::clusters`].
    pub cluster: usize,
    /// Member of a cluster flagged as a continuum.
    pub continuum: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlternatingOptions {
    pub max_iter: usize,
    /// Stop once `f` falls to this, relative to `‖A‖`.
    pub tol: f64,
    /// Stop once a sweep moves `φ` by less than this.
    pub step_tol: f64,
    /// Stop after this many consecutive sweeps without progress in either
    /// `f` or the sweep length.
    pub stall_sweeps: usize,
}

impl Default for AlternatingOptions {
    fn default() -> Self {
        Self {
            max_iter: 3000,
            tol: 1e-30,
            step_tol: 1e-15,
            stall_sweeps: 5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AlternatingResult {
    pub phi: CVector,
    pub chi: CVector,
    pub value: f64,
    pub iterations: usize,
}

fn min_eigvec(h: &CMatrix) -> Result<(f64, CVector)> {
    let spec = HermitianMatrix::symmetrized(h.clone()).eig()?;
    Ok((spec.min(), spec.vector(0)))
}

/// Smallest eigenpair of `M(φφ†)`: the best `χ` for this `φ`.
fn best_chi(w: &Witness, phi: &CVector) -> Result<(f64, CVector)> {
    min_eigvec(&w.map_raw(&(phi * phi.adjoint())))
}

fn best_phi(w: &Witness, chi: &CVector) -> Result<(f64, CVector)> {
    min_eigvec(&w.transposed_map_raw(&(chi * chi.adjoint())))
}

/// Multiplies `q` by the phase that makes `⟨p, q⟩` real and positive.
fn align_phase(p: &CVector, q: &CVector) -> CVector {
    let ov = q.dotc(p);
    if ov.norm() > 0.0 {
        q * (ov / ov.norm())
    } else {
        q.clone()
    }
}

/// Fixes the global phase so the largest component is real positive.
fn canonical_phase(v: &CVector) -> CVector {
    let (idx, _) = v
        .iter()
        .enumerate()
        .fold((0, -1.0), |best, (i, z)| if z.norm() > best.1 + 1e-12 { (i, z.norm()) } else { best });
    let z = v[idx];
    if z.norm() > 0.0 {
        v * (z.conj() / z.norm())
    } else {
        v.clone()
    }
}

fn normalized(v: &CVector) -> CVector {
    v / Complex64::new(v.norm(), 0.0)
}

/// One sweep from `φ`: the best `χ` for `φ`, then the best `φ` for that
/// `χ`, phase aligned to the input.
struct Sweep {
    value: f64,
    chi: CVector,
    next: CVector,
    residual: f64,
}

fn sweep(w: &Witness, phi: &CVector) -> Result<Sweep> {
    let (value, chi) = best_chi(w, phi)?;
    let next = align_phase(phi, &best_phi(w, &chi)?.1);
    let residual = (&next - phi).norm();
    Ok(Sweep {
        value,
        chi,
        next,
        residual,
    })
}

/// Alternately minimizes over `χ` and `φ`, each half step an exact
/// minimal-eigenvector solve. After every sweep a doubling search along
/// the last change of `φ` accelerates the slow approach to degenerate
/// zeros; a trial is taken only if it shortens the next sweep without
/// raising `f` beyond rounding, so the value never increases.
pub fn alternating_minimize(w: &Witness, phi0: &CVector, opts: &AlternatingOptions) -> Result<AlternatingResult> {
    if phi0.len() != w.m() {
        return Err(Error::DimensionMismatch {
            expected: w.m(),
            found: phi0.len(),
        });
    }
    let scale = w.matrix().hs_norm().max(f64::MIN_POSITIVE);
    let noise = 8.0 * f64::EPSILON * scale;
    let mut phi = normalized(phi0);
    let mut cur = sweep(w, &phi)?;
    let mut iterations = 0;
    let mut stalled = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        let (before_value, before_residual) = (cur.value, cur.residual);
        let d = &cur.next - &phi;
        phi = cur.next.clone();
        cur = sweep(w, &phi)?;

        let mut omega = 1.0;
        while omega < 1e8 {
            let trial = normalized(&(&phi + &d * Complex64::new(omega, 0.0)));
            let t = sweep(w, &trial)?;
            if t.value <= cur.value + noise && t.residual < cur.residual {
                phi = trial;
                cur = t;
                omega *= 2.0;
            } else {
                break;
            }
        }
        if cur.value <= opts.tol * scale || cur.residual <= opts.step_tol {
            break;
        }
        let progress = before_value - cur.value > noise || cur.residual < 0.999 * before_residual;
        stalled = if progress { 0 } else { stalled + 1 };
        if stalled >= opts.stall_sweeps {
            break;
        }
    }
    let phi = canonical_phase(&phi);
    let chi = canonical_phase(&cur.chi);
    let value = w.biquadratic_form(&phi, &chi)?;
    Ok(AlternatingResult {
        phi,
        chi,
        value,
        iterations,
    })
}

#[derive(Debug, Clone)]
pub struct ZeroSearchOptions {
    pub starts: usize,
    pub tol: f64,
    pub seed: u64,
    /// Candidates merge when `|⟨φᵢ,φⱼ⟩|·|⟨χᵢ,χⱼ⟩| > 1 − dedup_tol`.
    pub dedup_tol: f64,
    /// Single-linkage threshold on `1 − overlap` for clustering.
    pub chain_threshold: f64,
    /// A cluster with more members than this and diameter above
    /// `continuum_diameter` is flagged as a continuum.
    pub cluster_k: usize,
    pub continuum_diameter: f64,
    pub alternating: AlternatingOptions,
}

impl Default for ZeroSearchOptions {
    fn default() -> Self {
        Self {
            starts: 500,
            tol: ZERO_TOL,
            seed: 42,
            dedup_tol: 1e-6,
            chain_threshold: 0.1,
            cluster_k: 3,
            continuum_diameter: 1e-2,
            alternating: AlternatingOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Cluster {
    pub members: Vec<usize>,
    pub diameter: f64,
    pub continuum: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZeroReport {
    pub zeros: Vec<ProductZero>,
    pub clusters: Vec<Cluster>,
    pub starts: usize,
    /// Starts that ended at a zero, before deduplication.
    pub candidates: usize,
}

impl ZeroReport {
    pub fn has_continuum(&self) -> bool {
        self.clusters.iter().any(|c| c.continuum)
    }
}

fn overlap(a: (&CVector, &CVector), b: (&CVector, &CVector)) -> f64 {
    a.0.dotc(b.0).norm() * a.1.dotc(b.1).norm()
}

/// Multistart search from Haar-random `φ₀`, start `s` drawing from stream
/// `s` of `seed`.
pub fn find_zeros(w: &Witness, opts: &ZeroSearchOptions, exec: Execution) -> Result<ZeroReport> {
    let m = w.m();
    let runs = exec.try_map_range(opts.starts, |s| {
        let mut rng = rng_for(opts.seed, s as u64);
        let phi0 = haar_vector(m, &mut rng);
        alternating_minimize(w, &phi0, &opts.alternating)
    })?;
    let mut found: Vec<AlternatingResult> = runs.into_iter().filter(|r| r.value.abs() <= opts.tol).collect();
    let candidates = found.len();
    found.sort_by(|a, b| a.value.abs().total_cmp(&b.value.abs()));

    let mut reps: Vec<AlternatingResult> = Vec::new();
    for cand in found {
        let dup = reps
            .iter()
            .any(|r| overlap((&r.phi, &r.chi), (&cand.phi, &cand.chi)) > 1.0 - opts.dedup_tol);
        if !dup {
            reps.push(cand);
        }
    }

    let classified = exec.try_map_range(reps.len(), |i| classify_zero_with(w, &reps[i].phi, &reps[i].chi, opts.tol))?;

    let clusters = cluster(&reps, opts);
    let mut owner = vec![0; reps.len()];
    for (ci, c) in clusters.iter().enumerate() {
        for &i in &c.members {
            owner[i] = ci;
        }
    }
    let zeros = reps
        .into_iter()
        .zip(classified)
        .enumerate()
        .map(|(i, (r, (kind, hessian_spectrum)))| ProductZero {
            phi: r.phi,
            chi: r.chi,
            value: r.value,
            kind,
            hessian_spectrum,
            cluster: owner[i],
            continuum: clusters[owner[i]].continuum,
        })
        .collect();
    Ok(ZeroReport {
        zeros,
        clusters,
        starts: opts.starts,
        candidates,
    })
}

fn cluster(reps: &[AlternatingResult], opts: &ZeroSearchOptions) -> Vec<Cluster> {
    let k = reps.len();
    let dist = |i: usize, j: usize| 1.0 - overlap((&reps[i].phi, &reps[i].chi), (&reps[j].phi, &reps[j].chi));
    let mut parent: Vec<usize> = (0..k).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..k {
        for j in (i + 1)..k {
            if dist(i, j) < opts.chain_threshold {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..k {
        let r = root(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => g.1.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    groups
        .into_iter()
        .map(|(_, members)| {
            let mut diameter: f64 = 0.0;
            for (a, &i) in members.iter().enumerate() {
                for &j in &members[a + 1..] {
                    diameter = diameter.max(dist(i, j));
                }
            }
            let continuum = members.len() > opts.cluster_k && diameter > opts.continuum_diameter;
            Cluster {
                members,
                diameter,
                continuum,
            }
        })
        .collect()
}

/// Orthonormal basis of the complement of `v` (unit) in `C^k`.
fn complement_basis(v: &CVector) -> Vec<CVector> {
    let k = v.len();
    let mut out: Vec<CVector> = Vec::with_capacity(k - 1);
    let mut all = vec![v.clone()];
    for e in 0..k {
        let mut u = CVector::zeros(k);
        u[e] = Complex64::new(1.0, 0.0);
        for b in &all {
            let c = b.dotc(&u);
            u -= b * c;
        }
        let norm = u.norm();
        if norm > 1e-8 {
            let u = u / Complex64::new(norm, 0.0);
            all.push(u.clone());
            out.push(u);
        }
        if out.len() == k - 1 {
            break;
        }
    }
    out
}

/// Real tangent directions at `(φ, χ)`: each complement vector times 1 and
/// `i`, first for `φ` then for `χ`. Returns `(δφ, δχ)` pairs.
pub fn tangent_directions(phi: &CVector, chi: &CVector) -> Vec<(CVector, CVector)> {
    let i = Complex64::new(0.0, 1.0);
    let (m, n) = (phi.len(), chi.len());
    let mut dirs = Vec::with_capacity(2 * (m + n - 2));
    for t in complement_basis(phi) {
        dirs.push((t.clone(), CVector::zeros(n)));
        dirs.push((t * i, CVector::zeros(n)));
    }
    for s in complement_basis(chi) {
        dirs.push((CVector::zeros(m), s.clone()));
        dirs.push((CVector::zeros(m), s * i));
    }
    dirs
}

fn check_zero(w: &Witness, phi: &CVector, chi: &CVector, zero_tol: f64) -> Result<(CVector, CVector, f64)> {
    let phi = normalized(phi);
    let chi = normalized(chi);
    let value = w.biquadratic_form(&phi, &chi)?;
    if !(value.abs() <= zero_tol) {
        return Err(Error::NotAZero {
            value,
            tolerance: zero_tol,
        });
    }
    Ok((phi, chi, value))
}

/// Hessian of `f` on the tangent space at a zero.
///
/// At a zero the second-order part of `f(φ+δφ, χ+δχ)` is
/// `u†Au + 2 Re ψ†A(δφ⊗δχ)` with `u = δφ⊗χ + φ⊗δχ`; normalization only
/// contributes at higher order. The matrix is assembled by polarization.
pub fn tangent_hessian(w: &Witness, phi: &CVector, chi: &CVector) -> DMatrix<f64> {
    let a = w.matrix().as_matrix();
    let psi = product_vector(phi, chi);
    let a_psi = a * &psi;
    let dirs = tangent_directions(phi, chi);
    let q = |dp: &CVector, dc: &CVector| -> f64 {
        let u = product_vector(dp, chi) + product_vector(phi, dc);
        let second = product_vector(dp, dc);
        u.dotc(&(a * &u)).re + 2.0 * a_psi.dotc(&second).re
    };
    let d = dirs.len();
    let mut h = DMatrix::zeros(d, d);
    for p in 0..d {
        for r in p..d {
            let (sp, sc) = (&dirs[p].0 + &dirs[r].0, &dirs[p].1 + &dirs[r].1);
            let (dp, dc) = (&dirs[p].0 - &dirs[r].0, &dirs[p].1 - &dirs[r].1);
            let val = (q(&sp, &sc) - q(&dp, &dc)) / 2.0;
            h[(p, r)] = val;
            h[(r, p)] = val;
        }
    }
    h
}

pub fn classify_zero(w: &Witness, phi: &CVector, chi: &CVector) -> Result<(ZeroKind, Vec<f64>)> {
    classify_zero_with(w, phi, chi, ZERO_TOL)
}

pub fn classify_zero_with(w: &Witness, phi: &CVector, chi: &CVector, zero_tol: f64) -> Result<(ZeroKind, Vec<f64>)> {
    let (phi, chi, _) = check_zero(w, phi, chi, zero_tol)?;
    let h = tangent_hessian(w, &phi, &chi);
    let mut spectrum: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    spectrum.sort_by(f64::total_cmp);
    let hess_tol = HESS_TOL_REL * w.matrix().hs_norm();
    let kind = if spectrum[0] > hess_tol {
        ZeroKind::Quadratic
    } else {
        ZeroKind::Quartic
    };
    Ok((kind, spectrum))
}

/// Largest first-derivative residual `|ψ†A v|` over the tangent vectors
/// `v = t⊗χ` and `v = φ⊗s`.
pub fn first_derivative_residual(w: &Witness, phi: &CVector, chi: &CVector) -> f64 {
    let a_psi = w.matrix().as_matrix() * product_vector(phi, chi);
    tangent_directions(phi, chi)
        .iter()
        .map(|(dp, dc)| {
            let v = product_vector(dp, chi) + product_vector(phi, dc);
            a_psi.dotc(&v).norm()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstraintSystem {
    /// One row per real constraint, one column per element of the
    /// orthonormal basis of `H_{mn}`.
    #[serde(skip)]
    pub rows: DMatrix<f64>,
    pub rank: usize,
    pub zero_count: usize,
    pub rows_per_zero: usize,
    pub singular_values: Vec<f64>,
}

pub const RANK_TOL: f64 = 1e-9;

/// Linear constraints on `A` imposed by its zeros: `f = 0` and the
/// vanishing first derivatives along every tangent direction of `φ` and
/// `χ`, giving `2(m+n) − 3` rows per zero.
pub fn constraint_rank(w: &Witness, zeros: &[ProductZero]) -> Result<ConstraintSystem> {
    let pairs: Vec<(CVector, CVector)> = zeros.iter().map(|z| (z.phi.clone(), z.chi.clone())).collect();
    constraint_system(w.m(), w.n(), &pairs, RANK_TOL)
}

/// [`constraint_rank`] for bare `(φ, χ)` pairs; the witness itself is not
/// needed to assemble the rows.
pub fn constraint_system(m: usize, n: usize, zeros: &[(CVector, CVector)], rank_tol: f64) -> Result<ConstraintSystem> {
    let dim = m * n;
    let basis = hermitian_basis(dim);
    let rows_per_zero = 2 * (m + n) - 3;
    let mut rows = DMatrix::zeros(rows_per_zero * zeros.len(), basis.len());
    let mut r = 0;
    for (phi, chi) in zeros {
        if phi.len() != m || chi.len() != n {
            return Err(Error::DimensionMismatch {
                expected: m * n,
                found: phi.len() * chi.len(),
            });
        }
        let phi = normalized(phi);
        let chi = normalized(chi);
        let psi = product_vector(&phi, &chi);
        // Re/Im of ψ†Av = Tr(A v ψ†) as functionals on the basis coordinates.
        let mut emit = |k: &CMatrix, imag: bool| {
            for (c, h) in basis.iter().enumerate() {
                let t: Complex64 = h.as_matrix().component_mul(&k.transpose()).sum();
                rows[(r, c)] = if imag { t.im } else { t.re };
            }
            r += 1;
        };
        emit(&(&psi * psi.adjoint()), false);
        for t in complement_basis(&phi) {
            let k = product_vector(&t, &chi) * psi.adjoint();
            emit(&k, false);
            emit(&k, true);
        }
        for s in complement_basis(&chi) {
            let k = product_vector(&phi, &s) * psi.adjoint();
            emit(&k, false);
            emit(&k, true);
        }
    }
    let singular_values: Vec<f64> = if rows.nrows() == 0 {
        Vec::new()
    } else {
        let mut sv: Vec<f64> = rows.singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    };
    let max = singular_values.first().copied().unwrap_or(0.0);
    let rank = singular_values.iter().filter(|&&s| s > rank_tol * max).count();
    Ok(ConstraintSystem {
        rows,
        rank,
        zero_count: zeros.len(),
        rows_per_zero,
        singular_values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ImageRanks {
    pub forward: usize,
    pub transposed: usize,
}

pub const KERNEL_TOL: f64 = 1e-9;

/// Ranks of `Y = M(φφ†)` and `X = Mᵀ(χχ†)` at a zero, after checking
/// `Yχ = 0` and `Xφ = 0`.
pub fn image_rank_at_zero(w: &Witness, z: &ProductZero) -> Result<ImageRanks> {
    image_rank_at_zero_with(w, &z.phi, &z.chi, KERNEL_TOL, 1e-8)
}

pub fn image_rank_at_zero_with(
    w: &Witness,
    phi: &CVector,
    chi: &CVector,
    kernel_tol: f64,
    rank_tol: f64,
) -> Result<ImageRanks> {
    let (phi, chi, _) = check_zero(w, phi, chi, ZERO_TOL)?;
    let y = HermitianMatrix::symmetrized(w.map_raw(&(&phi * phi.adjoint())));
    let x = HermitianMatrix::symmetrized(w.transposed_map_raw(&(&chi * chi.adjoint())));
    let ry = (y.as_matrix() * &chi).norm();
    let rx = (x.as_matrix() * &phi).norm();
    let residual = ry.max(rx);
    if !(residual <= kernel_tol) {
        return Err(Error::NotAZero {
            value: residual,
            tolerance: kernel_tol,
        });
    }
    Ok(ImageRanks {
        forward: y.rank(rank_tol)?,
        transposed: x.rank(rank_tol)?,
    })
}
