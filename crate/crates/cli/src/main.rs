//! `tripods`: censuses and checks for tripods on flat tori.

mod output;
mod plot;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use tripods::analytics::{self, SliceCheck, VolumeEstimate};
use tripods::census::{self, ConvergenceRow, RandomLatticeSample};
use tripods::geometry::{classify, tripod_volume_and_index, TripodFlags};
use tripods::topology::{self, ImmersionReport};
use tripods::{
    CensusConfig, CensusMode, LatticeSpec, LatticeVector, Point2, QuadraticNumber, Scalar, Tripod,
    TripodCoords, TripodError,
};

use output::{CsvRow, Envelope};

#[derive(Parser)]
#[command(name = "tripods", version, about = "Count and classify tripods on flat tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count tripods of length below R.
    Census(CensusArgs),
    /// Geometry, topology and flags of one tripod.
    Inspect(InspectArgs),
    /// Census at several radii and compare with 15√3/(4π³).
    Convergence(ConvergenceArgs),
    /// Monte Carlo volume of Ω and slice checks.
    Volume(VolumeArgs),
    /// Nonreduced primitive tripods with exact leg tests.
    Nonreduced(NonreducedArgs),
    /// All tripods spanning a given sublattice.
    Fiber(FiberArgs),
    /// Nonreduced counts on random lattices (heuristic).
    RandomLattice(RandomLatticeArgs),
    /// Closed-form reference constants.
    Constants(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Write the report to FILE instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (results do not depend on this).
    #[arg(long, env = "TRIPOD_THREADS")]
    threads: Option<usize>,
}

impl CommonArgs {
    fn threads(&self) -> usize {
        self.threads
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Lemma,
    Appendix,
}

impl From<Mode> for CensusMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Lemma => CensusMode::LemmaCanonical,
            Mode::Appendix => CensusMode::AppendixCompatible,
        }
    }
}

fn parse_lattice(s: &str) -> Result<LatticeSpec, String> {
    LatticeSpec::from_str(s).map_err(|e| e.to_string())
}

fn parse_ints<const N: usize>(s: &str) -> Result<[i64; N], String> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<i64>| format!("expected {N} comma-separated integers, got {}", v.len()))
}

fn parse_tau(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected s,t")?;
    Ok((
        a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?,
        b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?,
    ))
}

#[derive(Args)]
struct CensusArgs {
    /// gaussian, eisenstein or tau=s,t
    #[arg(long, default_value = "gaussian", value_parser = parse_lattice)]
    lattice: LatticeSpec,
    #[arg(long)]
    radius: f64,
    #[arg(long, value_enum, default_value = "lemma")]
    mode: Mode,
    /// Classify reducedness.
    #[arg(long)]
    reduced: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Keep up to N per-tripod records.
    #[arg(long)]
    samples: Option<usize>,
    /// Include wall-clock time in the report.
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct InspectArgs {
    #[arg(long, default_value = "gaussian", value_parser = parse_lattice)]
    lattice: LatticeSpec,
    /// a,b,c,d with z = a + bτ and w = c + dτ
    #[arg(long, value_parser = parse_ints::<4>, allow_hyphen_values = true)]
    coords: [i64; 4],
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ConvergenceArgs {
    #[arg(long, default_value = "gaussian", value_parser = parse_lattice)]
    lattice: LatticeSpec,
    /// Increasing radii, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "10,20,35")]
    radii: Vec<f64>,
    #[arg(long, value_enum, default_value = "appendix")]
    mode: Mode,
    #[arg(long)]
    reduced: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Also write an SVG plot.
    #[arg(long)]
    plot: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct VolumeArgs {
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Trials per slice check (0 skips the slice checks).
    #[arg(long, default_value_t = 10_000)]
    slice_trials: u64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct NonreducedArgs {
    #[arg(long, default_value = "eisenstein", value_parser = parse_lattice)]
    lattice: LatticeSpec,
    #[arg(long)]
    radius: f64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct FiberArgs {
    #[arg(long, default_value = "gaussian", value_parser = parse_lattice)]
    lattice: LatticeSpec,
    /// a1,b1,a2,b2: basis vectors of the sublattice in lattice coordinates
    #[arg(long, value_parser = parse_ints::<4>, allow_hyphen_values = true)]
    basis: [i64; 4],
    #[arg(long, value_enum, default_value = "lemma")]
    mode: Mode,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct RandomLatticeArgs {
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 10.0)]
    radius: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Additional lattice τ = s + it to census alongside the random ones.
    #[arg(long = "tau", value_parser = parse_tau, allow_hyphen_values = true)]
    taus: Vec<(f64, f64)>,
    #[command(flatten)]
    common: CommonArgs,
}

enum Failure {
    Tripod(TripodError),
    Io(std::io::Error),
}

impl From<TripodError> for Failure {
    fn from(e: TripodError) -> Self {
        Failure::Tripod(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Tripod(e) if e.is_invalid_tripod() => 4,
            Failure::Tripod(TripodError::Overflow(_)) => 3,
            Failure::Tripod(
                TripodError::InvalidConfig(_)
                | TripodError::InvalidLattice(_)
                | TripodError::InexactLattice(_)
                | TripodError::DependentBasis,
            ) => 2,
            _ => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Tripod(e) => eprintln!("error: {e}"),
                Failure::Io(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(failure.exit_code())
        }
    }
}

fn emit(text: &str, common: &CommonArgs) -> Result<(), Failure> {
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json<T: Serialize>(
    command: &str,
    lattice: String,
    payload: T,
    seed: Option<u64>,
    common: &CommonArgs,
) -> Result<(), Failure> {
    emit(&Envelope::new(command, lattice, payload, seed).to_json()?, common)
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Census(args) => cmd_census(args),
        Command::Inspect(args) => cmd_inspect(args),
        Command::Convergence(args) => cmd_convergence(args),
        Command::Volume(args) => cmd_volume(args),
        Command::Nonreduced(args) => cmd_nonreduced(args),
        Command::Fiber(args) => cmd_fiber(args),
        Command::RandomLattice(args) => cmd_random_lattice(args),
        Command::Constants(common) => emit_json(
            "constants",
            "none".into(),
            analytics::reference_constants(),
            None,
            &common,
        ),
    }
}

fn cmd_census(args: CensusArgs) -> Result<(), Failure> {
    let mut config = CensusConfig::new(args.lattice, args.radius)
        .mode(args.mode.into())
        .reduced(args.reduced)
        .threads(args.common.threads());
    config.emit_samples = args.samples;
    let mut report = census::census(&config)?;
    if !args.timing {
        report = report.without_timing();
    }
    match args.format {
        Format::Json => emit_json("census", args.lattice.to_string(), &report, None, &args.common),
        Format::Csv => {
            let row = CsvRow {
                radius: args.radius,
                total: report.counts.all_tripods,
                primitive: report.counts.primitive,
                reduced: report.counts.reduced,
                nonreduced: report.counts.nonreduced_primitive,
                primitive_over_r4: report.primitive_over_r4,
                error: report.error,
            };
            emit(&output::to_csv(&[row])?, &args.common)
        }
    }
}

#[derive(Serialize)]
struct PointOut<S> {
    x: S,
    y: S,
}

impl<S: Scalar> From<&Point2<S>> for PointOut<S> {
    fn from(p: &Point2<S>) -> Self {
        Self {
            x: p.x.clone(),
            y: p.y.clone(),
        }
    }
}

#[derive(Serialize)]
struct InspectPayload<S> {
    coords: TripodCoords,
    z: PointOut<S>,
    w: PointOut<S>,
    length_sq: S,
    length: f64,
    leg_lengths_sq: [S; 3],
    leg_lengths: [f64; 3],
    fermat_point: PointOut<S>,
    toricelli_point: PointOut<S>,
    index: i64,
    volume: f64,
    intersections: u64,
    regions: Option<u64>,
    immersion: ImmersionReport,
    flags: TripodFlags,
    exact: bool,
}

fn inspect<S: Scalar + Serialize>(coords: TripodCoords, lattice: &LatticeSpec) -> Result<InspectPayload<S>, Failure> {
    let tripod = Tripod::<S>::new(coords, lattice)?;
    let (volume, index) = tripod_volume_and_index(&tripod, lattice)?;
    let immersion = topology::self_intersections(&tripod, lattice)?;
    let regions = topology::region_count(&immersion).ok();
    Ok(InspectPayload {
        coords,
        z: (&tripod.z).into(),
        w: (&tripod.w).into(),
        length: tripod.length(),
        length_sq: tripod.length_sq.clone(),
        leg_lengths_sq: tripod.leg_lengths_sq.clone(),
        leg_lengths: tripod.leg_lengths,
        fermat_point: (&tripod.fermat_point).into(),
        toricelli_point: (&tripod.u).into(),
        index,
        volume,
        intersections: immersion.intersections,
        regions,
        flags: classify(&tripod, lattice)?,
        immersion,
        exact: S::EXACT,
    })
}

fn cmd_inspect(args: InspectArgs) -> Result<(), Failure> {
    let [a, b, c, d] = args.coords;
    let coords = TripodCoords::new(a, b, c, d);
    let lattice = args.lattice.to_string();
    if args.lattice.is_exact() {
        let payload = inspect::<QuadraticNumber>(coords, &args.lattice)?;
        emit_json("inspect", lattice, payload, None, &args.common)
    } else {
        let payload = inspect::<f64>(coords, &args.lattice)?;
        emit_json("inspect", lattice, payload, None, &args.common)
    }
}

#[derive(Serialize)]
struct ConvergencePayload {
    mode: CensusMode,
    reference_constant: f64,
    rows: Vec<ConvergenceRow>,
}

fn cmd_convergence(args: ConvergenceArgs) -> Result<(), Failure> {
    let rows = census::convergence_scan(
        args.lattice,
        &args.radii,
        args.mode.into(),
        args.reduced,
        args.common.threads(),
    )?;
    let reference = analytics::main_constant();
    if let Some(path) = &args.plot {
        let points: Vec<_> = rows.iter().map(|r| (r.radius, r.normalized_constant)).collect();
        std::fs::write(path, plot::convergence_svg(&points, reference))?;
    }
    match args.format {
        Format::Json => emit_json(
            "convergence",
            args.lattice.to_string(),
            ConvergencePayload {
                mode: args.mode.into(),
                reference_constant: reference,
                rows,
            },
            None,
            &args.common,
        ),
        Format::Csv => {
            let csv_rows: Vec<CsvRow> = rows
                .iter()
                .map(|r| CsvRow {
                    radius: r.radius,
                    total: r.total,
                    primitive: r.primitive,
                    reduced: r.reduced,
                    nonreduced: r.nonreduced,
                    primitive_over_r4: r.primitive_over_r4,
                    error: r.error,
                })
                .collect();
            emit(&output::to_csv(&csv_rows)?, &args.common)
        }
    }
}

#[derive(Serialize)]
struct VolumePayload {
    volume: VolumeEstimate,
    slices: Vec<SliceCheck>,
}

fn cmd_volume(args: VolumeArgs) -> Result<(), Failure> {
    let volume = analytics::mc_omega_volume(args.samples, args.seed, args.common.threads())?;
    let slices = if args.slice_trials == 0 {
        Vec::new()
    } else {
        [
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(0.5, PI / 4.0),
            Complex64::from_polar(0.9, PI / 2.0),
        ]
        .into_iter()
        .map(|u| analytics::slice_property_check(u, args.slice_trials, args.seed))
        .collect::<Result<_, _>>()?
    };
    emit_json(
        "volume",
        "none".into(),
        VolumePayload { volume, slices },
        Some(args.seed),
        &args.common,
    )
}

fn cmd_nonreduced(args: NonreducedArgs) -> Result<(), Failure> {
    let report = census::nonreduced_census(args.lattice, args.radius, args.common.threads())?;
    emit_json("nonreduced", args.lattice.to_string(), report, None, &args.common)
}

#[derive(Serialize)]
struct FiberEntry {
    coords: TripodCoords,
    length_sq: f64,
}

#[derive(Serialize)]
struct FiberPayload {
    basis: [i64; 4],
    mode: CensusMode,
    index: i64,
    count: usize,
    tripods: Vec<FiberEntry>,
}

fn cmd_fiber(args: FiberArgs) -> Result<(), Failure> {
    let [a1, b1, a2, b2] = args.basis;
    let basis = (LatticeVector::new(a1, b1), LatticeVector::new(a2, b2));
    let tripods = topology::fiber_tripods(basis, &args.lattice, args.mode.into())?
        .into_iter()
        .map(|coords| {
            let t = Tripod::<QuadraticNumber>::new(coords, &args.lattice)?;
            Ok(FiberEntry {
                coords,
                length_sq: t.length_sq.to_f64(),
            })
        })
        .collect::<Result<Vec<_>, TripodError>>()?;
    emit_json(
        "fiber",
        args.lattice.to_string(),
        FiberPayload {
            basis: args.basis,
            mode: args.mode.into(),
            index: (a1 * b2 - a2 * b1).abs(),
            count: tripods.len(),
            tripods,
        },
        None,
        &args.common,
    )
}

#[derive(Serialize)]
struct RandomLatticePayload {
    experiment: census::RandomLatticeReport,
    manual: Vec<RandomLatticeSample>,
}

fn cmd_random_lattice(args: RandomLatticeArgs) -> Result<(), Failure> {
    let threads = args.common.threads();
    let experiment = census::random_lattice_experiment(args.samples, args.radius, args.seed, threads)?;
    let manual = args
        .taus
        .iter()
        .map(|&(s, t)| {
            let lattice = LatticeSpec::general(s, t)?;
            let report = census::census(&CensusConfig::new(lattice, args.radius).reduced(true).threads(threads))?;
            Ok(RandomLatticeSample {
                tau_s: s,
                tau_t: t,
                primitive: report.counts.primitive,
                nonreduced: report.counts.nonreduced_primitive.unwrap_or(0),
            })
        })
        .collect::<Result<_, TripodError>>()?;
    emit_json(
        "random-lattice",
        "random".into(),
        RandomLatticePayload { experiment, manual },
        Some(args.seed),
        &args.common,
    )
}
