mod commands;
mod parse;
mod schema;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use drcm::Error;

pub const SCHEMA_VERSION: &str = "drcm/1";

#[derive(Parser, Debug)]
#[command(name = "drcm", version, about = "Deligne-Ribet monoids, theta functions and modular vectors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub run: RunConfig,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Working precision in bits.
    #[arg(long, global = true, env = "DRCM_PREC", default_value_t = 256)]
    pub prec: u32,
    /// Maximal degree tried by the recognizer.
    #[arg(long, global = true, default_value_t = 24)]
    pub maxdeg: usize,
    /// Height bound (bits) for recognized minimal polynomials.
    #[arg(long, global = true, default_value_t = 128)]
    pub height_bits: u32,
    /// Worker threads for component evaluation.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Print the JSON schema of the command's output and exit.
    #[arg(long, global = true)]
    pub schema: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Field and modulus selection.
#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// K = Q(sqrt(-d)).
    #[arg(short = 'd', default_value_t = 1)]
    pub d: i64,
}

#[derive(Args, Debug, Clone)]
pub struct ModulusArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Conductor as "(g)", "(g1, g2)" or "[a,b,c]".
    #[arg(short = 'f', long = "conductor", conflicts_with = "n")]
    pub conductor: Option<String>,
    /// Conductor N O_K.
    #[arg(short = 'N')]
    pub n: Option<i128>,
}

#[derive(Args, Debug, Clone)]
pub struct LevelArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Level N.
    #[arg(short = 'N', default_value_t = 2)]
    pub n: i128,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionKind {
    Weber,
    Fricke,
    ThetaRatio,
}

#[derive(Args, Debug, Clone)]
pub struct SpecArgs {
    #[command(flatten)]
    pub level: LevelArgs,
    /// Torsion index "a1,a2" in (N^-1 Z / Z)^2.
    #[arg(long, default_value = "0,1/2")]
    pub a: String,
    #[arg(long, value_enum, default_value_t = FunctionKind::Weber)]
    pub function: FunctionKind,
    /// Numerator characteristic for theta-ratio.
    #[arg(long, default_value = "1/2")]
    pub k: String,
    /// Denominator characteristic for theta-ratio.
    #[arg(long, default_value = "0")]
    pub l: String,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicalArg {
    Wp,
    G2,
    G3,
    J,
    Fricke,
    Weber,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeberArg {
    Gaussian,
    Eisenstein,
    Generic,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmPreset {
    Gaussian,
    Zeta5,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Discriminant, generator, units and class number.
    FieldInfo(FieldArgs),
    /// Class group from reduced forms.
    Classgroup(FieldArgs),
    /// Ray class group C_f.
    Rayclassgroup(ModulusArgs),
    /// The finite monoid DR_f.
    Drmonoid(ModulusArgs),
    /// Theta function with characteristic.
    Theta {
        #[arg(short = 'g', default_value_t = 1)]
        g: usize,
        /// Period matrix; rows separated by ';', entries by ','.
        #[arg(long, default_value = "i")]
        tau: String,
        #[arg(long, default_value = "0")]
        k: String,
        #[arg(long, default_value = "0")]
        u: String,
    },
    /// Classical genus-one functions on the lattice Z tau + Z.
    Classical {
        #[arg(long, value_enum, default_value_t = ClassicalArg::J)]
        kind: ClassicalArg,
        #[arg(long, default_value = "i")]
        tau: String,
        /// Torsion index "a1,a2" for wp, fricke and weber.
        #[arg(long)]
        a: Option<String>,
        /// Explicit argument z for wp.
        #[arg(long)]
        z: Option<String>,
        #[arg(long, value_enum, default_value_t = WeberArg::Generic)]
        weber_kind: WeberArg,
    },
    /// Evaluate and recognize a modular vector on DR_(N).
    MvectorBuild(SpecArgs),
    /// Equivariance, degree, Frobenius and cross-path checks of a modular vector.
    MvectorVerify {
        #[command(flatten)]
        spec: SpecArgs,
        /// Primes for the Frobenius congruence; defaults to the two smallest coprime to N.
        #[arg(long = "prime")]
        primes: Vec<String>,
        /// Classes sampled for the theta-path cross-check.
        #[arg(long, default_value_t = 4)]
        samples: usize,
    },
    /// Congruence cut out by the level-N family against the adelic ~_N.
    SimnCompare(LevelArgs),
    /// Round trips between congruences and function families on DR_f.
    DualityCheck {
        #[command(flatten)]
        modulus: ModulusArgs,
        /// Maximal number of generating pairs tested.
        #[arg(long, default_value_t = 2000)]
        limit: usize,
    },
    /// Riemann form, type and period point of CM data.
    Cmpoint {
        #[arg(long, value_enum, default_value_t = CmPreset::Zeta5)]
        preset: CmPreset,
        /// Also evaluate the theta-null vector.
        #[arg(long)]
        nulls: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::FieldInfo(_) => "field-info",
            Command::Classgroup(_) => "classgroup",
            Command::Rayclassgroup(_) => "rayclassgroup",
            Command::Drmonoid(_) => "drmonoid",
            Command::Theta { .. } => "theta",
            Command::Classical { .. } => "classical",
            Command::MvectorBuild(_) => "mvector-build",
            Command::MvectorVerify { .. } => "mvector-verify",
            Command::SimnCompare(_) => "simn-compare",
            Command::DualityCheck { .. } => "duality-check",
            Command::Cmpoint { .. } => "cmpoint",
        }
    }
}

/// Failure with its process exit code.
#[derive(Debug)]
pub enum Failure {
    Lib(Error),
    Usage(String),
    /// The computation finished but a mathematical check failed; the report is still written.
    Verification(serde_json::Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Verification(_) => 2,
        Error::FactorLimit { .. } => 3,
        Error::EnumerationBudget(_) | Error::PrincipalBound(_) => 4,
        Error::RecognitionFailed(_) => 5,
        Error::PrecisionTooLow(_) | Error::LambdaFloor { .. } => 6,
        _ => 1,
    }
}

/// Command output: a JSON result, or CSV text.
pub enum Output {
    Json(serde_json::Value),
    Csv(String),
}

fn envelope(command: &str, result: serde_json::Value) -> serde_json::Value {
    serde_json::json!({ "schema": SCHEMA_VERSION, "command": command, "result": result })
}

fn write_out(cfg: &RunConfig, text: &str) -> std::io::Result<()> {
    match &cfg.out {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn emit(cfg: &RunConfig, command: &str, out: Output) -> std::io::Result<()> {
    match out {
        Output::Json(v) => write_out(cfg, &format!("{}\n", serde_json::to_string_pretty(&envelope(command, v)).unwrap())),
        Output::Csv(s) => write_out(cfg, &s),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let name = cli.command.name();
    if cli.run.schema {
        return match write_out(&cli.run, &format!("{}\n", serde_json::to_string_pretty(&schema::schema(name)).unwrap())) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        };
    }
    if let Some(j) = cli.run.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let (code, out) = match commands::run(&cli.command, &cli.run) {
        Ok(out) => (0, Some(out)),
        Err(Failure::Verification(report)) => (2, Some(Output::Json(report))),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            (1, None)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            (exit_code(&e), None)
        }
    };
    if let Some(out) = out {
        if let Err(e) = emit(&cli.run, name, out) {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(code)
}
