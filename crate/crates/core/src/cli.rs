//! Command-line front end for the `dwcat` binary.
//!
//! Exit codes: `0` success, `1` a `verify` check failed, `2` bad flags or
//! parameters, `3` solver or I/O failure.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::interferometer::{Interferometer, Mixture, ThetaGrid};
use crate::model::{gap_scan, ground_and_gap, ModelParams};
use crate::output;
use crate::spinalg::cat_state;
use crate::verify::{self, VerifyOptions};

/// Relative `--output` paths are resolved against this directory when set.
pub const OUTPUT_DIR_ENV: &str = "DWCAT_OUTPUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

pub const DEFAULT_NS: [usize; 5] = [3, 6, 9, 12, 15];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Which input state feeds the interferometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Ground,
    Cat {
        phi: f64,
    },
    /// Equal-weight mixture of the symmetric and antisymmetric cat states.
    Thermal,
}

impl FromStr for InitialState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "ground" => Ok(Self::Ground),
            "thermal" => Ok(Self::Thermal),
            "cat" => Ok(Self::Cat { phi: 0.0 }),
            _ => match s.strip_prefix("cat:") {
                Some(phi) => phi
                    .trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|p| p.is_finite())
                    .map(|phi| Self::Cat { phi })
                    .ok_or_else(|| Error::invalid(format!("bad cat phase in '{s}'"))),
                None => Err(Error::invalid(format!(
                    "unknown state '{s}' (expected ground, cat[:phi] or thermal)"
                ))),
            },
        }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ground => f.write_str("ground"),
            Self::Cat { phi } => write!(f, "cat:{phi}"),
            Self::Thermal => f.write_str("thermal"),
        }
    }
}

/// `log10(chi)` grid written `lo:hi:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiGrid(ThetaGrid);

impl ChiGrid {
    pub fn values(&self) -> Vec<f64> {
        self.0.points().into_iter().map(|x| 10f64.powf(x)).collect()
    }
}

impl Default for ChiGrid {
    fn default() -> Self {
        Self(ThetaGrid::new(-2.0, 2.0, 41).expect("static grid"))
    }
}

impl FromStr for ChiGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        s.parse().map(Self)
    }
}

fn parse_chi_value(s: &str) -> Result<f64, Error> {
    let v = match s.trim() {
        "inf" | "infinity" => f64::INFINITY,
        t => output::parse_f64(t)?,
    };
    if v > 0.0 && !v.is_nan() {
        Ok(v)
    } else {
        Err(Error::domain(format!("chi must be positive, got '{s}'")))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "dwcat",
    version,
    about = "Parity interferometry with a double-well condensate ground state"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
}

#[derive(Debug, Subcommand)]
enum CommandArgs {
    /// Ground state, first excited state and gap.
    GroundState {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Parity signal and phase uncertainty over a grid of phases.
    ScanParity {
        #[command(flatten)]
        model: ModelArgs,
        /// Phase grid `start:stop:count` in radians.
        #[arg(
            long,
            default_value = "0:6.283185307179586:721",
            allow_hyphen_values = true
        )]
        theta: ThetaGrid,
        /// Input state: ground, cat[:phi] or thermal.
        #[arg(long, default_value = "ground")]
        state: InitialState,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Ground-state gap as a function of N and chi = J^2 / (N U^2).
    GapScan {
        /// Atom numbers, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_NS)]
        ns: Vec<usize>,
        #[arg(
            short = 'J',
            long = "tunneling",
            default_value_t = 1.0,
            allow_negative_numbers = true
        )]
        j: f64,
        /// Grid in log10(chi), `lo:hi:count`.
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<ChiGrid>,
        /// Explicit chi values, comma separated; `inf` means U = 0.
        #[arg(long, value_delimiter = ',', value_parser = parse_chi_value, conflicts_with = "chi")]
        chi_list: Option<Vec<f64>>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the invariant suite.
    Verify {
        /// Run only the fast subset.
        #[arg(long)]
        quick: bool,
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<Fault>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Fault {
    SySign,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Number of atoms.
    #[arg(short = 'N', long = "atoms", default_value_t = 9)]
    n: usize,
    /// Tunneling J.
    #[arg(
        short = 'J',
        long = "tunneling",
        default_value_t = 1.0,
        allow_negative_numbers = true
    )]
    j: f64,
    /// On-site interaction U (negative is attractive).
    #[arg(short = 'U', long = "interaction", default_value_t = -1.0, allow_negative_numbers = true)]
    u: f64,
    /// Well tilt.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    eps: f64,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    GroundState,
    ScanParity,
    GapScan,
    Verify,
}

/// Fully resolved invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: ModelParams,
    pub theta: ThetaGrid,
    pub chis: Vec<f64>,
    pub ns: Vec<usize>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub state: InitialState,
    pub verify: VerifyOptions,
}

#[derive(Debug)]
pub enum CliError {
    /// Flag parsing failed, or help/version was requested.
    Clap(clap::Error),
    Run(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::Run(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Clap(e) => e.exit_code(),
            Self::Run(e) => exit_code_for(e),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Clap(e) => write!(f, "{e}"),
            Self::Run(e) => write!(f, "error: {e}"),
        }
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::InvalidInput(_) | Error::DimensionMismatch { .. } => EXIT_USAGE,
        Error::NoConvergence { .. } | Error::Numerical(_) | Error::Io(_) => EXIT_SOLVER,
    }
}

impl RunConfig {
    pub fn parse_from<I, T>(args: I) -> Result<Self, CliError>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args).map_err(CliError::Clap)?;
        let defaults = ModelParams {
            n: 9,
            j: 1.0,
            u: -1.0,
            eps: 0.0,
        };
        let mut cfg = RunConfig {
            command: Command::Verify,
            params: defaults,
            theta: ThetaGrid::full_turn(),
            chis: ChiGrid::default().values(),
            ns: DEFAULT_NS.to_vec(),
            output: None,
            format: Format::Csv,
            state: InitialState::Ground,
            verify: VerifyOptions::default(),
        };
        let model = |m: ModelArgs| ModelParams::new(m.n, m.j, m.u, m.eps);
        match cli.command {
            CommandArgs::GroundState { model: m, out } => {
                cfg.command = Command::GroundState;
                cfg.params = model(m)?;
                cfg.output = out.output;
                cfg.format = out.format.unwrap_or(Format::Json);
            }
            CommandArgs::ScanParity {
                model: m,
                theta,
                state,
                out,
            } => {
                cfg.command = Command::ScanParity;
                cfg.params = model(m)?;
                cfg.theta = theta;
                cfg.state = state;
                cfg.output = out.output;
                cfg.format = out.format.unwrap_or(Format::Csv);
            }
            CommandArgs::GapScan {
                ns,
                j,
                chi,
                chi_list,
                out,
            } => {
                cfg.command = Command::GapScan;
                if ns.is_empty() {
                    return Err(Error::invalid("--ns needs at least one value").into());
                }
                for &n in &ns {
                    ModelParams::new(n, j, 0.0, 0.0)?;
                }
                cfg.params = ModelParams { j, ..defaults };
                cfg.ns = ns;
                cfg.chis = match (chi, chi_list) {
                    (_, Some(list)) => list,
                    (Some(grid), None) => grid.values(),
                    (None, None) => ChiGrid::default().values(),
                };
                cfg.output = out.output;
                cfg.format = out.format.unwrap_or(Format::Csv);
            }
            CommandArgs::Verify {
                quick,
                inject_fault,
            } => {
                cfg.command = Command::Verify;
                cfg.verify = VerifyOptions {
                    quick,
                    inject_sy_sign_error: inject_fault == Some(Fault::SySign),
                };
            }
        }
        Ok(cfg)
    }

    /// Where `--output` lands after applying the output directory override.
    pub fn output_path(&self, env_dir: Option<&Path>) -> Option<PathBuf> {
        let path = self.output.as_ref()?;
        Some(match env_dir {
            Some(dir) if path.is_relative() => dir.join(path),
            _ => path.clone(),
        })
    }
}

/// Runs a resolved configuration, writing the table or report into `sink`.
/// Returns the process exit code for completed runs.
pub fn execute(cfg: &RunConfig, sink: &mut dyn Write) -> Result<i32, Error> {
    match cfg.command {
        Command::GroundState => {
            let sol = ground_and_gap(&cfg.params)?;
            match cfg.format {
                Format::Json => output::write_ground_json(sink, &sol)?,
                Format::Csv => output::write_ground_csv(sink, &sol)?,
            }
        }
        Command::ScanParity => {
            let thetas = cfg.theta.points();
            let ifo = Interferometer::new(cfg.params.n)?;
            let rows = match cfg.state {
                InitialState::Ground => ifo.scan(&ground_and_gap(&cfg.params)?.psi0, &thetas)?,
                InitialState::Cat { phi } => ifo.scan(&cat_state(cfg.params.n, phi)?, &thetas)?,
                InitialState::Thermal => {
                    ifo.scan_mixture(&Mixture::thermal_cat_pair(cfg.params.n)?, &thetas)?
                }
            };
            match cfg.format {
                Format::Csv => output::write_scan_csv(sink, &rows)?,
                Format::Json => output::write_json(sink, &rows)?,
            }
        }
        Command::GapScan => {
            let rows = gap_scan(&cfg.ns, &cfg.chis, cfg.params.j)?;
            match cfg.format {
                Format::Csv => output::write_gap_csv(sink, &rows)?,
                Format::Json => output::write_json(sink, &rows)?,
            }
        }
        Command::Verify => {
            let report = verify::run(&cfg.verify);
            for c in &report.checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                writeln!(
                    sink,
                    "{status} {} ({:.1} ms): {}",
                    c.name,
                    c.elapsed.as_secs_f64() * 1e3,
                    c.detail
                )
                .map_err(|e| Error::Io(e.to_string()))?;
            }
            let failed: Vec<&str> = report.failures().map(|c| c.name).collect();
            let summary = if failed.is_empty() {
                format!("all {} checks passed", report.checks.len())
            } else {
                format!(
                    "{} of {} checks failed: {}",
                    failed.len(),
                    report.checks.len(),
                    failed.join(", ")
                )
            };
            writeln!(sink, "{summary} in {:.2} s", report.elapsed().as_secs_f64())
                .map_err(|e| Error::Io(e.to_string()))?;
            return Ok(if failed.is_empty() {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            });
        }
    }
    Ok(EXIT_OK)
}

fn write_output(cfg: &RunConfig, bytes: &[u8]) -> Result<(), Error> {
    let env_dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
    let io = |e: std::io::Error| Error::Io(e.to_string());
    match cfg.output_path(env_dir.as_deref()) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(io)?;
            }
            std::fs::write(&path, bytes).map_err(io)
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(io)
        }
    }
}

/// Entry point used by the binary. Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::parse_from(args) {
        Ok(cfg) => cfg,
        Err(CliError::Clap(e)) => {
            let _ = e.print();
            return e.exit_code();
        }
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    if cfg.params.is_repulsive() && cfg.command != Command::GapScan {
        eprintln!("warning: U > 0 is repulsive; the ground state is not a cat-like state");
    }
    let mut buf = Vec::new();
    let code = match execute(&cfg, &mut buf) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    if let Err(e) = write_output(&cfg, &buf) {
        eprintln!("error: {e}");
        return exit_code_for(&e);
    }
    code
}
