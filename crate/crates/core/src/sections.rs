//! Two-dimensional sections through the set of density matrices and their
//! images under a map.
//!
//! A plane is `ρ₀ + xB + yC` with traceless axes `B = a(ρ₁−ρ₀)` and
//! `C = b(ρ₂−ρ₀) + c(ρ₁−ρ₀)`. In the source frame `B, C` are orthonormal;
//! in the image frame their images `B̃ = MB`, `C̃ = MC` are. Boundaries are
//! found ray by ray: along each direction θ the largest `r` for which the
//! matrix at `(r cos θ, r sin θ)` stays positive semidefinite.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bipartite::Witness;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::hermitian::{CVector, HermitianMatrix};
use crate::random::{haar_vector, random_state};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormFrame {
    Source,
    Image,
}

/// Origin and axes of a plane after applying the map.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ImageAxes {
    pub rho0: HermitianMatrix,
    pub b: HermitianMatrix,
    pub c: HermitianMatrix,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SectionPlane {
    pub k: usize,
    pub rho0: HermitianMatrix,
    pub b: HermitianMatrix,
    pub c: HermitianMatrix,
    pub abc: [f64; 3],
    pub norm_frame: NormFrame,
    /// Present whenever the plane was built with a map.
    pub image: Option<ImageAxes>,
}

pub const GRAM_TOL: f64 = 1e-14;

fn mapped(w: &Witness, x: &HermitianMatrix) -> Result<HermitianMatrix> {
    w.apply_map(x)
}

impl SectionPlane {
    /// `ρ₀ + xB + yC`.
    pub fn point(&self, x: f64, y: f64) -> HermitianMatrix {
        &(&self.rho0 + &self.b.scale(x)) + &self.c.scale(y)
    }

    /// `ρ̃₀ + xB̃ + yC̃`, if the plane carries image axes.
    pub fn image_point(&self, x: f64, y: f64) -> Option<HermitianMatrix> {
        self.image
            .as_ref()
            .map(|im| &(&im.rho0 + &im.b.scale(x)) + &im.c.scale(y))
    }

    fn frame(&self) -> (&HermitianMatrix, &HermitianMatrix, &HermitianMatrix) {
        match (self.norm_frame, &self.image) {
            (NormFrame::Image, Some(im)) => (&im.rho0, &im.b, &im.c),
            _ => (&self.rho0, &self.b, &self.c),
        }
    }

    /// Attaches the image of the plane under `w` without changing the frame.
    pub fn with_map(mut self, w: &Witness) -> Result<Self> {
        self.image = Some(ImageAxes {
            rho0: mapped(w, &self.rho0)?,
            b: mapped(w, &self.b)?,
            c: mapped(w, &self.c)?,
        });
        Ok(self)
    }
}

/// Builds the plane through three states, normalized in `frame`.
///
/// `a`, `b` are positive and `c` comes from Gram–Schmidt, so that `ρ₁` sits
/// on the positive x axis of the declared frame.
pub fn plane_from_states(
    rho0: &HermitianMatrix,
    rho1: &HermitianMatrix,
    rho2: &HermitianMatrix,
    frame: NormFrame,
    w: Option<&Witness>,
) -> Result<SectionPlane> {
    let k = rho0.dim();
    if rho1.dim() != k || rho2.dim() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: if rho1.dim() != k { rho1.dim() } else { rho2.dim() },
        });
    }
    let d1 = rho1 - rho0;
    let d2 = rho2 - rho0;
    let (g1, g2) = match frame {
        NormFrame::Source => (d1.clone(), d2.clone()),
        NormFrame::Image => {
            let w = w.ok_or_else(|| Error::DegeneratePlane("image frame requires a map".into()))?;
            (mapped(w, &d1)?, mapped(w, &d2)?)
        }
    };
    let g11 = g1.hs_inner(&g1)?;
    let g12 = g1.hs_inner(&g2)?;
    let g22 = g2.hs_inner(&g2)?;
    let det = g11 * g22 - g12 * g12;
    if !(det > GRAM_TOL * g11 * g22) || g11 <= 0.0 {
        let what = match frame {
            NormFrame::Source => "states",
            NormFrame::Image => "image of the states",
        };
        return Err(Error::DegeneratePlane(format!(
            "{what} do not span a plane (Gram determinant {det:.3e})"
        )));
    }
    let a = 1.0 / g11.sqrt();
    let b = 1.0 / (g22 - g12 * g12 / g11).sqrt();
    let c = -b * g12 / g11;
    let plane = SectionPlane {
        k,
        rho0: rho0.clone(),
        b: d1.scale(a),
        c: &d2.scale(b) + &d1.scale(c),
        abc: [a, b, c],
        norm_frame: frame,
        image: None,
    };
    match w {
        Some(w) => plane.with_map(w),
        None => Ok(plane),
    }
}

/// Coordinates of `x` in the declared frame of the plane.
pub fn project_point(plane: &SectionPlane, x: &HermitianMatrix) -> Result<(f64, f64)> {
    let (origin, b, c) = plane.frame();
    let d = x - origin;
    Ok((d.hs_inner(b)?, d.hs_inner(c)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveLabel {
    Source,
    ImageOfSource,
    ImagePlane,
}

impl CurveLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveLabel::Source => "source",
            CurveLabel::ImageOfSource => "image_of_source",
            CurveLabel::ImagePlane => "image_plane",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryCurve {
    /// `(θ, r)` pairs.
    pub samples: Vec<(f64, f64)>,
    pub label: CurveLabel,
}

impl BoundaryCurve {
    pub fn cartesian(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|&(t, r)| (r * t.cos(), r * t.sin())).collect()
    }
}

/// `theta,r,label` rows for every curve, with a header.
pub fn curves_to_csv(curves: &[BoundaryCurve]) -> String {
    let mut out = String::from("theta,r,label\n");
    for curve in curves {
        for &(t, r) in &curve.samples {
            let _ = writeln!(out, "{t},{r},{}", curve.label.as_str());
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub enum Transform<'a> {
    /// Boundary of the source plane.
    None,
    /// Image of the source boundary, in the plane's declared frame.
    Map(&'a Witness),
    /// Boundary of `ρ̃₀ + xB̃ + yC̃`.
    ImagePlane(&'a Witness),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub n_theta: usize,
    pub tol_b: f64,
    pub r_max: f64,
    /// Bisection stops at `hi − lo ≤ rel_width · hi`.
    pub rel_width: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            n_theta: 720,
            tol_b: 1e-10,
            r_max: 1e3,
            rel_width: 1e-10,
        }
    }
}

/// Largest `r` with `λ_min(r) ≥ −tol_b`, by doubling then bisection.
/// Returns 0 when the origin itself is infeasible.
pub fn ray_radius<F>(min_eig: F, theta: f64, opts: &ScanOptions) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let feasible = |r: f64| -> Result<bool> { Ok(min_eig(r)? >= -opts.tol_b) };
    if !feasible(0.0)? {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut hi = 1.0 / 64.0;
    while feasible(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > opts.r_max {
            return Err(Error::UnboundedSection { theta });
        }
    }
    while hi - lo > opts.rel_width * hi {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

pub fn theta_grid(n_theta: usize) -> Vec<f64> {
    (0..n_theta).map(|i| 2.0 * PI * i as f64 / n_theta as f64).collect()
}

pub fn scan_boundary(plane: &SectionPlane, transform: Transform<'_>, opts: &ScanOptions, exec: Execution) -> Result<BoundaryCurve> {
    let thetas = theta_grid(opts.n_theta);
    match transform {
        Transform::None => {
            let samples = exec.try_map_range(thetas.len(), |i| {
                let t = thetas[i];
                let r = ray_radius(|r| plane.point(r * t.cos(), r * t.sin()).min_eigenvalue(), t, opts)?;
                Ok((t, r))
            })?;
            Ok(BoundaryCurve {
                samples,
                label: CurveLabel::Source,
            })
        }
        Transform::ImagePlane(w) => {
            let image = ImageAxes {
                rho0: mapped(w, &plane.rho0)?,
                b: mapped(w, &plane.b)?,
                c: mapped(w, &plane.c)?,
            };
            let samples = exec.try_map_range(thetas.len(), |i| {
                let t = thetas[i];
                let r = ray_radius(
                    |r| (&(&image.rho0 + &image.b.scale(r * t.cos())) + &image.c.scale(r * t.sin())).min_eigenvalue(),
                    t,
                    opts,
                )?;
                Ok((t, r))
            })?;
            Ok(BoundaryCurve {
                samples,
                label: CurveLabel::ImagePlane,
            })
        }
        Transform::Map(w) => {
            let source = scan_boundary(plane, Transform::None, opts, exec)?;
            let samples = exec.try_map_range(source.samples.len(), |i| {
                let (t, r) = source.samples[i];
                let image = mapped(w, &plane.point(r * t.cos(), r * t.sin()))?;
                let (x, y) = project_point(plane, &image)?;
                Ok((y.atan2(x).rem_euclid(2.0 * PI), x.hypot(y)))
            })?;
            Ok(BoundaryCurve {
                samples,
                label: CurveLabel::ImageOfSource,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SectionKind {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl std::str::FromStr for SectionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(SectionKind::A),
            "B" => Ok(SectionKind::B),
            "C" => Ok(SectionKind::C),
            "D" => Ok(SectionKind::D),
            "E" => Ok(SectionKind::E),
            "F" => Ok(SectionKind::F),
            other => Err(Error::InvalidInput(format!("unknown section type {other:?}"))),
        }
    }
}

/// Inputs for the six section types.
#[derive(Debug, Clone)]
pub enum SectionSpec {
    /// Two rank-two states through `I/k`.
    A { rho1: HermitianMatrix, rho2: HermitianMatrix },
    /// A pure state and a full-rank state through `I/k`.
    B { phi1: CVector, rho2: HermitianMatrix },
    /// Two pure states through `I/k`.
    C { phi1: CVector, phi2: CVector },
    /// Three pure states from independent vectors, origin at their mean.
    D { vectors: [CVector; 3] },
    /// Three pure states from vectors spanning two dimensions.
    E { vectors: [CVector; 3] },
    /// `ρ₁ = φ₁φ₁†`, `ρ₂ = ρ₁ + φ₁ξ† + ξφ₁†` through `I/k`.
    F { phi1: CVector, xi: CVector },
}

const RANK_TOL: f64 = 1e-10;

fn pure(v: &CVector) -> HermitianMatrix {
    HermitianMatrix::outer(v).scale(1.0 / v.norm_squared())
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidInput(msg.into()))
    }
}

fn span_rank(vectors: &[CVector; 3]) -> usize {
    let k = vectors[0].len();
    let mat = DMatrix::from_fn(k, 3, |i, j| vectors[j][i] / Complex64::new(vectors[j].norm(), 0.0));
    let sv = mat.singular_values();
    let max = sv.max();
    sv.iter().filter(|&&s| s > 1e-8 * max).count()
}

fn distinct_states(vectors: &[CVector; 3]) -> bool {
    (0..3).all(|i| {
        (i + 1..3).all(|j| {
            let ov = vectors[i].dotc(&vectors[j]).norm() / (vectors[i].norm() * vectors[j].norm());
            ov < 1.0 - 1e-8
        })
    })
}

/// Origin and two further states of the section.
pub fn section_states(spec: &SectionSpec) -> Result<[HermitianMatrix; 3]> {
    let mixed = |k: usize| HermitianMatrix::identity(k).scale(1.0 / k as f64);
    match spec {
        SectionSpec::A { rho1, rho2 } => {
            require(rho1.rank(RANK_TOL)? == 2 && rho2.rank(RANK_TOL)? == 2, "type A needs two rank-two states")?;
            Ok([mixed(rho1.dim()), rho1.clone(), rho2.clone()])
        }
        SectionSpec::B { phi1, rho2 } => {
            let k = phi1.len();
            require(rho2.rank(RANK_TOL)? == k, "type B needs a full-rank second state")?;
            Ok([mixed(k), pure(phi1), rho2.clone()])
        }
        SectionSpec::C { phi1, phi2 } => {
            let k = phi1.len();
            Ok([mixed(k), pure(phi1), pure(phi2)])
        }
        SectionSpec::D { vectors } => {
            require(span_rank(vectors) == 3, "type D needs linearly independent vectors")?;
            let p: Vec<HermitianMatrix> = vectors.iter().map(pure).collect();
            let origin = (&(&p[0] + &p[1]) + &p[2]).scale(1.0 / 3.0);
            Ok([origin, p[0].clone(), p[1].clone()])
        }
        SectionSpec::E { vectors } => {
            require(span_rank(vectors) == 2, "type E needs vectors spanning two dimensions")?;
            require(distinct_states(vectors), "type E needs three distinct states")?;
            let p: Vec<HermitianMatrix> = vectors.iter().map(pure).collect();
            let origin = (&(&p[0] + &p[1]) + &p[2]).scale(1.0 / 3.0);
            Ok([origin, p[0].clone(), p[1].clone()])
        }
        SectionSpec::F { phi1, xi } => {
            let k = phi1.len();
            require(xi.len() == k, "type F vectors differ in length")?;
            let unit = phi1 / Complex64::new(phi1.norm(), 0.0);
            require(unit.dotc(xi).re.abs() <= 1e-12 * xi.norm(), "type F needs Re<phi1, xi> = 0")?;
            require(xi.norm() > 1e-12, "type F needs a nonzero xi")?;
            let rho1 = pure(phi1);
            let d = HermitianMatrix::symmetrized(&unit * xi.adjoint() + xi * unit.adjoint());
            let rho2 = &rho1 + &d;
            Ok([mixed(k), rho1, rho2])
        }
    }
}

pub fn section_of_type(spec: &SectionSpec, frame: NormFrame, w: Option<&Witness>) -> Result<SectionPlane> {
    let [rho0, rho1, rho2] = section_states(spec)?;
    plane_from_states(&rho0, &rho1, &rho2, frame, w)
}

/// Random inputs of the given type in dimension `k ≥ 3`.
pub fn random_section_spec(kind: SectionKind, k: usize, rng: &mut impl Rng) -> SectionSpec {
    match kind {
        SectionKind::A => SectionSpec::A {
            rho1: random_state(k, 2, rng),
            rho2: random_state(k, 2, rng),
        },
        SectionKind::B => SectionSpec::B {
            phi1: haar_vector(k, rng),
            rho2: random_state(k, k, rng),
        },
        SectionKind::C => SectionSpec::C {
            phi1: haar_vector(k, rng),
            phi2: haar_vector(k, rng),
        },
        SectionKind::D => SectionSpec::D {
            vectors: [haar_vector(k, rng), haar_vector(k, rng), haar_vector(k, rng)],
        },
        SectionKind::E => {
            let u = haar_vector(k, rng);
            let v = haar_vector(k, rng);
            let s = haar_vector(2, rng);
            let third = &u * s[0] + &v * s[1];
            SectionSpec::E { vectors: [u, v, third] }
        }
        SectionKind::F => {
            let phi1 = haar_vector(k, rng);
            let g = haar_vector(k, rng);
            let xi = &g - &phi1 * phi1.dotc(&g);
            SectionSpec::F { phi1, xi }
        }
    }
}
