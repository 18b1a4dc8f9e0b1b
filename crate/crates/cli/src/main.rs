mod io;
mod svg;

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use posmap_core::bipartite::diagnostics;
use posmap_core::builtins::{
    choi_lam_tangent_section, choi_lam_witness_scaled, horodecki_2x4_witness, identity_witness, ring_zero,
    transposition_witness, Branch, ChoiLamScale, RingParams,
};
use posmap_core::hermitian::basis_vector;
use posmap_core::normalizer::{normalize, NormalizeOptions};
use posmap_core::random::rng_for;
use posmap_core::sections::{
    curves_to_csv, plane_from_states, project_point, random_section_spec, scan_boundary, section_of_type, NormFrame,
    ScanOptions, SectionKind, SectionPlane, Transform,
};
use posmap_core::zeros::{find_zeros, ZeroSearchOptions};
use posmap_core::{Execution, HermitianMatrix, Witness};
use serde::Serialize;

use crate::io::{emit, parse_json, read_witness, to_json, CliError, CliResult};

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(name = "posmap", version, about = "Positive maps, entanglement witnesses and their sections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print dimensions, spectra and unitality residuals of a witness.
    Inspect(InspectArgs),
    /// Transform a witness to unital and trace preserving form.
    Normalize(NormalizeArgs),
    /// Search for product-vector zeros.
    Zeros(ZerosArgs),
    /// Scan boundary curves of a two-dimensional section.
    Section(SectionArgs),
    /// Emit a reference witness as JSON.
    Builtin(BuiltinArgs),
    /// Sample the two rings of zeros of the 2x4 witness.
    Rings(RingsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BuiltinName {
    ChoiLam,
    #[value(name = "horodecki-2x4")]
    Horodecki2x4,
    Identity,
    Transposition,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scale {
    Map,
    /// Twice the map scale; the partial transpose has integer entries.
    Paper,
}

impl From<Scale> for ChoiLamScale {
    fn from(s: Scale) -> Self {
        match s {
            Scale::Map => ChoiLamScale::Map,
            Scale::Paper => ChoiLamScale::Integer,
        }
    }
}

#[derive(Args)]
struct WitnessInput {
    /// Witness JSON file.
    #[arg(conflicts_with = "builtin")]
    input: Option<PathBuf>,
    /// Use a reference witness instead of a file.
    #[arg(long, value_enum)]
    builtin: Option<BuiltinName>,
    /// Scale of the Choi-Lam witness.
    #[arg(long, value_enum, default_value = "map")]
    scale: Scale,
    /// Dimension of the identity and transposition witnesses.
    #[arg(long, default_value_t = 3)]
    dim: usize,
}

impl WitnessInput {
    fn load(&self) -> CliResult<Witness> {
        match (&self.input, self.builtin) {
            (Some(p), None) => read_witness(p),
            (None, Some(b)) => builtin_witness(b, self.scale, self.dim),
            _ => Err(CliError::Parse("give a witness file or --builtin".into())),
        }
    }
}

fn builtin_witness(name: BuiltinName, scale: Scale, dim: usize) -> CliResult<Witness> {
    Ok(match name {
        BuiltinName::ChoiLam => choi_lam_witness_scaled(scale.into()),
        BuiltinName::Horodecki2x4 => horodecki_2x4_witness(),
        BuiltinName::Identity => identity_witness(dim)?,
        BuiltinName::Transposition => transposition_witness(dim)?,
    })
}

#[derive(Args)]
struct InspectArgs {
    #[command(flatten)]
    witness: WitnessInput,
}

#[derive(Args)]
struct NormalizeArgs {
    #[command(flatten)]
    witness: WitnessInput,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    /// Positive definite start matrix (Hermitian JSON); identity by default.
    #[arg(long)]
    x0: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ZerosArgs {
    #[command(flatten)]
    witness: WitnessInput,
    #[arg(long, default_value_t = 500)]
    starts: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Run the starts on one thread.
    #[arg(long)]
    sequential: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SectionType {
    /// Diagonal matrices: ρ₀ = I/3, ρ₁ = e₁e₁†, ρ₂ = e₂e₂† (Choi-Lam).
    Diag,
    /// Tangent to the continuum of zeros at α = β = 0 (Choi-Lam).
    Tangent,
    A,
    B,
    C,
    D,
    E,
    F,
}

#[derive(Clone, Copy, ValueEnum)]
enum Frame {
    Source,
    Image,
}

#[derive(Args)]
struct SectionArgs {
    #[command(flatten)]
    witness: WitnessInput,
    #[arg(long = "type", value_enum)]
    kind: SectionType,
    #[arg(long, value_enum, default_value = "source")]
    frame: Frame,
    #[arg(long, default_value_t = 720)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Curve CSV; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Marker points (JSON).
    #[arg(long)]
    markers: Option<PathBuf>,
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct BuiltinArgs {
    #[arg(value_enum)]
    name: BuiltinName,
    #[arg(long, value_enum, default_value = "map")]
    scale: Scale,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RingsArgs {
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// `POSMAP_SEED` wins over `--seed`.
fn effective_seed(flag: u64) -> CliResult<u64> {
    match std::env::var("POSMAP_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("POSMAP_SEED={v:?} is not an unsigned integer"))),
        Err(_) => Ok(flag),
    }
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn check_positive(name: &str, value: f64) -> CliResult<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(CliError::Parse(format!("--{name} must be a positive number, got {value}")))
    }
}

fn cmd_inspect(args: &InspectArgs) -> CliResult<()> {
    let w = args.witness.load()?;
    emit(None, &to_json(&diagnostics(&w)?)?)
}

fn cmd_normalize(args: &NormalizeArgs) -> CliResult<()> {
    check_positive("tol", args.tol)?;
    let w = args.witness.load()?;
    let x0 = match &args.x0 {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Parse(format!("{}: {e}", p.display())))?;
            Some(parse_json::<HermitianMatrix>(&text, p)?)
        }
        None => None,
    };
    let opts = NormalizeOptions {
        tol: args.tol,
        max_iter: args.max_iter,
        x0,
    };
    let result = normalize(&w, &opts)?;
    emit(args.output.as_deref(), &to_json(&result)?)?;
    if result.converged {
        Ok(())
    } else {
        Err(CliError::NotConverged(format!(
            "{} iterations, last residual {:.3e}",
            result.iterations,
            result.history.last().copied().unwrap_or(f64::NAN)
        )))
    }
}

fn cmd_zeros(args: &ZerosArgs) -> CliResult<()> {
    check_positive("tol", args.tol)?;
    let w = args.witness.load()?;
    let opts = ZeroSearchOptions {
        starts: args.starts,
        tol: args.tol,
        seed: effective_seed(args.seed)?,
        ..Default::default()
    };
    let report = find_zeros(&w, &opts, execution(args.sequential))?;
    eprintln!(
        "{} zeros from {} of {} starts; {} clusters{}",
        report.zeros.len(),
        report.candidates,
        report.starts,
        report.clusters.len(),
        if report.has_continuum() { ", continuum flagged" } else { "" }
    );
    emit(args.output.as_deref(), &to_json(&report.zeros)?)
}

fn pure(k: usize, i: usize) -> HermitianMatrix {
    HermitianMatrix::outer(&basis_vector(k, i))
}

#[derive(Serialize)]
struct MarkerOut {
    name: String,
    x: f64,
    y: f64,
}

#[derive(Serialize)]
struct SectionMarkers {
    frame: &'static str,
    abc: [f64; 3],
    markers: Vec<MarkerOut>,
}

fn build_plane(args: &SectionArgs, w: &Witness, frame: NormFrame) -> CliResult<(SectionPlane, [HermitianMatrix; 3])> {
    let k = w.m();
    let states = match args.kind {
        SectionType::Diag => {
            if k < 3 {
                return Err(CliError::Precondition("the diagonal section needs m >= 3".into()));
            }
            [HermitianMatrix::identity(k).scale(1.0 / k as f64), pure(k, 0), pure(k, 1)]
        }
        SectionType::Tangent => {
            if k != 3 {
                return Err(CliError::Precondition("the tangent section is defined for m = 3".into()));
            }
            let t = choi_lam_tangent_section();
            [t.rho0, t.rho1, t.rho2]
        }
        other => {
            let kind = match other {
                SectionType::A => SectionKind::A,
                SectionType::B => SectionKind::B,
                SectionType::C => SectionKind::C,
                SectionType::D => SectionKind::D,
                SectionType::E => SectionKind::E,
                _ => SectionKind::F,
            };
            if k < 3 {
                return Err(CliError::Precondition("section types A-F need m >= 3".into()));
            }
            let mut rng = rng_for(effective_seed(args.seed)?, 0);
            let spec = random_section_spec(kind, k, &mut rng);
            let plane = section_of_type(&spec, frame, Some(w))?;
            let states = posmap_core::sections::section_states(&spec)?;
            return Ok((plane, states));
        }
    };
    let plane = plane_from_states(&states[0], &states[1], &states[2], frame, Some(w))?;
    Ok((plane, states))
}

fn cmd_section(args: &SectionArgs) -> CliResult<()> {
    check_positive("tol", args.tol)?;
    if args.samples == 0 {
        return Err(CliError::Parse("--samples must be positive".into()));
    }
    let w = args.witness.load()?;
    if w.m() != w.n() {
        return Err(CliError::Precondition(format!(
            "sections compare source and image in one space; got a {}x{} witness",
            w.m(),
            w.n()
        )));
    }
    let frame = match args.frame {
        Frame::Source => NormFrame::Source,
        Frame::Image => NormFrame::Image,
    };
    let (plane, states) = build_plane(args, &w, frame)?;
    let opts = ScanOptions {
        n_theta: args.samples,
        tol_b: args.tol,
        ..Default::default()
    };
    let exec = execution(args.sequential);
    let curves = vec![
        scan_boundary(&plane, Transform::None, &opts, exec)?,
        scan_boundary(&plane, Transform::Map(&w), &opts, exec)?,
        scan_boundary(&plane, Transform::ImagePlane(&w), &opts, exec)?,
    ];

    let k = plane.k;
    let mut markers = Vec::new();
    for (name, x) in [
        ("rho1~", w.apply_map(&states[1])?),
        ("rho2~", w.apply_map(&states[2])?),
        ("I/k", HermitianMatrix::identity(k).scale(1.0 / k as f64)),
    ] {
        let (px, py) = project_point(&plane, &x)?;
        markers.push(MarkerOut { name: name.into(), x: px, y: py });
    }

    emit(args.output.as_deref(), &curves_to_csv(&curves))?;
    if let Some(p) = &args.svg {
        let ms: Vec<svg::Marker> = markers
            .iter()
            .map(|m| svg::Marker {
                name: m.name.clone(),
                x: m.x,
                y: m.y,
            })
            .collect();
        io::write_atomic(p, svg::render(&curves, &ms).as_bytes())?;
    }
    if let Some(p) = &args.markers {
        let out = SectionMarkers {
            frame: match frame {
                NormFrame::Source => "source",
                NormFrame::Image => "image",
            },
            abc: plane.abc,
            markers,
        };
        io::write_atomic(p, to_json(&out)?.as_bytes())?;
    }
    Ok(())
}

fn cmd_builtin(args: &BuiltinArgs) -> CliResult<()> {
    let w = builtin_witness(args.name, args.scale, args.dim)?;
    emit(args.output.as_deref(), &to_json(&w)?)
}

fn cmd_rings(args: &RingsArgs) -> CliResult<()> {
    if args.samples == 0 {
        return Err(CliError::Parse("--samples must be positive".into()));
    }
    let p = RingParams::default();
    let mut out = String::from("theta,branch,x,y,z\n");
    for branch in [Branch::Plus, Branch::Minus] {
        for i in 0..args.samples {
            let theta = 2.0 * PI * i as f64 / args.samples as f64;
            let [x, y, z] = ring_zero(theta, branch, &p);
            let _ = writeln!(out, "{theta},{},{x},{y},{z}", branch.symbol());
        }
    }
    emit(args.output.as_deref(), &out)
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Inspect(a) => cmd_inspect(a),
        Command::Normalize(a) => cmd_normalize(a),
        Command::Zeros(a) => cmd_zeros(a),
        Command::Section(a) => cmd_section(a),
        Command::Builtin(a) => cmd_builtin(a),
        Command::Rings(a) => cmd_rings(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("posmap: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
