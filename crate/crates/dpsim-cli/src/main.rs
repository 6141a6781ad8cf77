//! dpsim — scans of two-state excitation profiles driven by detuning-pulse
//! sequences.
//!
//! Subcommands map one-to-one onto the scan library: `profile` (1-D α scan),
//! `width` (α × τ study), `scan2d` (α × static detuning map), `order`
//! (error-order slope fit), `shapes` (pulse-shape comparison), and `verify`
//! (the full verification suite).
//!
//! Exit codes: 0 success, 1 failed verification, 2 invalid arguments or
//! unreadable input, 3 numerical failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dpsim_core::error::Error as CoreError;
use dpsim_core::phases::PhaseList;
use dpsim_core::scan::{
    order_estimate, profile_scan, scan2d, shape_comparison, width_study, Engine, Family, Quantity,
    ScanOpts,
};
use dpsim_core::table::{Grid, ScanTable};
use dpsim_core::tdse::IntegratorConfig;
use dpsim_core::verify;
use dpsim_core::waveform::PulseShapeKind;

#[derive(Parser)]
#[command(
    name = "dpsim",
    version,
    about = "Two-state excitation profiles under detuning-pulse sequences",
    long_about = "Scans transition-probability profiles of a two-state system driven by a \
constant Rabi frequency and a sequence of detuning pulses.\n\n\
Units: time in T/pi and angular frequency in pi/T, where T is one unit segment; a pulse of \
temporal area pi*delta realizes a composite phase jump of pi*delta.\n\n\
Output is CSV: '#'-prefixed key=value metadata, a header row, then data rows with floats at \
17 significant digits (lossless re-parse). Sequence specs exchange via a key=value text \
format (see the README).\n\n\
DPSIM_THREADS caps the worker thread count."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// 1-D transition-probability profile vs the Rabi-area scale alpha.
    Profile(ProfileArgs),
    /// P(alpha, tau) against the tau = 0 composite-pulse profile.
    Width(WidthArgs),
    /// 2-D map P(alpha, static detuning) for a phase sequence.
    Scan2d(Scan2dArgs),
    /// Log-log error-order fit around an expansion point (tau = 0 limit).
    Order(OrderArgs),
    /// Profile comparison across the four pulse shapes at equal areas.
    Shapes(ShapesArgs),
    /// Run the full verification suite; nonzero exit iff any check fails.
    Verify,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    /// Single-pulse superposition model (duration T).
    A,
    /// Superposition model with a trailing half segment (3T/2).
    B,
    /// Broadband composite family (odd N).
    Bb,
    /// Narrowband composite family (odd N).
    Nb,
    /// Five-pulse universal composite sequence.
    Universal,
    /// Plain resonant pulse over N segments, no detuning pulses.
    None,
    /// Phases read from --phase-file, one per line.
    File,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ShapeArg {
    Sech,
    Gaussian,
    Lorentzian,
    Rect,
}

impl ShapeArg {
    fn kind(self) -> PulseShapeKind {
        match self {
            ShapeArg::Sech => PulseShapeKind::Sech,
            ShapeArg::Gaussian => PulseShapeKind::Gaussian,
            ShapeArg::Lorentzian => PulseShapeKind::Lorentzian,
            ShapeArg::Rect => PulseShapeKind::Rectangular,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Analytic,
    Tdse,
    CpLimit,
}

impl EngineArg {
    fn engine(self) -> Engine {
        match self {
            EngineArg::Analytic => Engine::Analytic,
            EngineArg::Tdse => Engine::Tdse,
            EngineArg::CpLimit => Engine::CpLimit,
        }
    }
}

#[derive(Args)]
struct FamilySelect {
    /// Sequence family.
    #[arg(long, value_enum)]
    family: FamilyArg,

    /// Pulse count N for bb/nb (odd) or segment count for none.
    #[arg(long)]
    n: Option<usize>,

    /// Phase file for --family file (radians, one per line, '#' comments).
    #[arg(long)]
    phase_file: Option<PathBuf>,

    /// Dimensionless pulse strength delta for the a/b/bb/nb segment models
    /// (defaults: 1/2 for case a, 2/3 otherwise).
    #[arg(long)]
    delta: Option<f64>,
}

impl FamilySelect {
    fn family(&self) -> Result<Family, CliError> {
        let n = |default: usize| self.n.unwrap_or(default);
        match self.family {
            FamilyArg::A => Ok(Family::CaseA),
            FamilyArg::B => Ok(Family::CaseB),
            FamilyArg::Bb => Ok(Family::Bb { n: n(3) }),
            FamilyArg::Nb => Ok(Family::Nb { n: n(3) }),
            FamilyArg::Universal => {
                if self.n.is_some_and(|n| n != 5) {
                    return Err(CliError::Usage(
                        "--family universal is the fixed five-pulse sequence; drop --n".into(),
                    ));
                }
                Ok(Family::Universal)
            }
            FamilyArg::None => Ok(Family::Single { n: n(1) }),
            FamilyArg::File => {
                let path = self
                    .phase_file
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("--family file requires --phase-file".into()))?;
                let phases = load_phase_file(path)?;
                Ok(Family::Custom {
                    name: path.display().to_string(),
                    phases,
                })
            }
        }
    }

    fn delta(&self) -> f64 {
        self.delta.unwrap_or(match self.family {
            FamilyArg::A => 0.5,
            _ => 2.0 / 3.0,
        })
    }
}

#[derive(Args)]
struct OutputArg {
    /// Output CSV path; '-' writes to stdout.
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    family: FamilySelect,

    /// Alpha grid, min:max:count or a single value.
    #[arg(long, default_value = "0:2:501")]
    alpha: String,

    /// Detuning pulse width, units T/pi.
    #[arg(long, default_value_t = 0.05)]
    tau: f64,

    #[arg(long, value_enum, default_value_t = ShapeArg::Sech)]
    shape: ShapeArg,

    #[arg(long, value_enum)]
    engine: EngineArg,

    /// Constant detuning offset, units pi/T.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    detuning: f64,

    /// Wrap pulse areas to (-pi, pi] when building the waveform.
    #[arg(long)]
    normalize_areas: bool,

    /// Integrator relative tolerance.
    #[arg(long, default_value_t = 1e-10)]
    rel_tol: f64,

    #[command(flatten)]
    output: OutputArg,
}

#[derive(Args)]
struct WidthArgs {
    #[command(flatten)]
    family: FamilySelect,

    #[arg(long, default_value = "0:2:201")]
    alpha: String,

    /// Width grid, min:max:count or a single value.
    #[arg(long, default_value = "0.05:0.3:6")]
    tau: String,

    #[arg(long, value_enum, default_value_t = ShapeArg::Sech)]
    shape: ShapeArg,

    #[arg(long)]
    normalize_areas: bool,

    #[arg(long, default_value_t = 1e-10)]
    rel_tol: f64,

    #[command(flatten)]
    output: OutputArg,
}

#[derive(Args)]
struct Scan2dArgs {
    #[command(flatten)]
    family: FamilySelect,

    #[arg(long, default_value = "0:2:201")]
    alpha: String,

    /// Static-detuning grid, units of the nominal Rabi frequency.
    #[arg(long, default_value = "-1:1:201", allow_hyphen_values = true)]
    detuning: String,

    /// Detuning pulse width; 0 selects the exact composite-pulse limit.
    #[arg(long, default_value_t = 0.05)]
    tau: f64,

    #[arg(long, value_enum, default_value_t = ShapeArg::Sech)]
    shape: ShapeArg,

    #[arg(long)]
    normalize_areas: bool,

    #[arg(long, default_value_t = 1e-10)]
    rel_tol: f64,

    #[command(flatten)]
    output: OutputArg,
}

#[derive(Args)]
struct OrderArgs {
    #[command(flatten)]
    family: FamilySelect,

    /// Expansion point alpha_0.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    at: f64,

    /// Quantity to fit: P, 1-P, or P-1/2.
    #[arg(long, default_value = "1-P")]
    quantity: String,
}

#[derive(Args)]
struct ShapesArgs {
    #[command(flatten)]
    family: FamilySelect,

    #[arg(long, default_value = "0:2:501")]
    alpha: String,

    #[arg(long, default_value_t = 0.05)]
    tau: f64,

    #[arg(long)]
    normalize_areas: bool,

    #[arg(long, default_value_t = 1e-10)]
    rel_tol: f64,

    #[command(flatten)]
    output: OutputArg,
}

enum CliError {
    Usage(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidArgument(_) | CoreError::Parse { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

/// Parses a phase file: one phase per line, radians, '#' starts a comment.
fn load_phase_file(path: &Path) -> Result<PhaseList, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut phases = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let v: f64 = body.parse().map_err(|e| {
            CliError::Usage(format!(
                "{}:{}: bad phase '{body}': {e}",
                path.display(),
                idx + 1
            ))
        })?;
        phases.push(v);
    }
    if phases.is_empty() {
        return Err(CliError::Usage(format!(
            "{}: no phases found",
            path.display()
        )));
    }
    Ok(PhaseList::new(phases)?)
}

fn write_table(table: &ScanTable, out: &Path) -> Result<(), CliError> {
    if out.as_os_str() == "-" {
        let stdout = std::io::stdout();
        table
            .write_csv(stdout.lock())
            .map_err(|e| CliError::Numerical(format!("writing to stdout: {e}")))
    } else {
        let file = fs::File::create(out)
            .map_err(|e| CliError::Numerical(format!("cannot create {}: {e}", out.display())))?;
        table
            .write_csv(std::io::BufWriter::new(file))
            .map_err(|e| CliError::Numerical(format!("writing {}: {e}", out.display())))
    }
}

fn scan_opts(
    fam: &FamilySelect,
    tau: f64,
    shape: ShapeArg,
    detuning: f64,
    normalize: bool,
    rel_tol: f64,
) -> ScanOpts {
    ScanOpts {
        tau,
        shape: shape.kind(),
        delta: fam.delta(),
        static_detuning: detuning,
        normalize_areas: normalize,
        cfg: IntegratorConfig {
            rel_tol,
            ..Default::default()
        },
    }
}

fn run(cmd: Cmd) -> Result<u8, CliError> {
    match cmd {
        Cmd::Profile(a) => {
            let family = a.family.family()?;
            let grid = Grid::parse(&a.alpha)?;
            let opts = scan_opts(
                &a.family,
                a.tau,
                a.shape,
                a.detuning,
                a.normalize_areas,
                a.rel_tol,
            );
            let table = profile_scan(&family, &grid, a.engine.engine(), &opts)?;
            write_table(&table, &a.output.out)?;
            Ok(0)
        }
        Cmd::Width(a) => {
            let family = a.family.family()?;
            let alpha = Grid::parse(&a.alpha)?;
            let tau = Grid::parse(&a.tau)?;
            let opts = scan_opts(&a.family, 0.05, a.shape, 0.0, a.normalize_areas, a.rel_tol);
            let study = width_study(&family, &alpha, &tau, &opts)?;
            write_table(&study.table, &a.output.out)?;
            for s in &study.summaries {
                eprintln!(
                    "tau = {:<8}: sup |P - P_cp| = {:.4e} (alpha in [0.9, 1.1]: {:.4e})",
                    s.tau, s.sup_dev, s.sup_dev_near_nominal
                );
            }
            Ok(0)
        }
        Cmd::Scan2d(a) => {
            let family = a.family.family()?;
            let alpha = Grid::parse(&a.alpha)?;
            let detuning = Grid::parse(&a.detuning)?;
            let opts = scan_opts(&a.family, a.tau, a.shape, 0.0, a.normalize_areas, a.rel_tol);
            let table = scan2d(&family, &alpha, &detuning, a.tau, &opts)?;
            write_table(&table, &a.output.out)?;
            Ok(0)
        }
        Cmd::Order(a) => {
            let family = a.family.family()?;
            let quantity = Quantity::parse(&a.quantity)?;
            let opts = ScanOpts {
                delta: a.family.delta(),
                ..Default::default()
            };
            let fit = order_estimate(&family, a.at, quantity, &opts)?;
            println!(
                "family={} at={} quantity={} slope={:.4} residual={:.2e} points={}",
                family.label(),
                a.at,
                quantity.label(),
                fit.slope,
                fit.residual,
                fit.points
            );
            Ok(0)
        }
        Cmd::Shapes(a) => {
            let family = a.family.family()?;
            let alpha = Grid::parse(&a.alpha)?;
            let opts = scan_opts(
                &a.family,
                a.tau,
                ShapeArg::Sech,
                0.0,
                a.normalize_areas,
                a.rel_tol,
            );
            let cmp = shape_comparison(&family, a.tau, &alpha, &opts)?;
            write_table(&cmp.table, &a.output.out)?;
            eprintln!("max pairwise deviation: {:.4e}", cmp.max_pairwise_deviation);
            Ok(0)
        }
        Cmd::Verify => {
            let results = verify::run_all();
            let mut failed = 0;
            for r in &results {
                println!("{}", r.line());
                if !r.passed {
                    failed += 1;
                }
            }
            if failed > 0 {
                eprintln!("{failed} of {} checks failed", results.len());
                Ok(1)
            } else {
                println!("all {} checks passed", results.len());
                Ok(0)
            }
        }
    }
}

fn init_threads() {
    if let Ok(v) = std::env::var("DPSIM_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        } else {
            eprintln!("dpsim: ignoring unparsable DPSIM_THREADS='{v}'");
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("dpsim: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
