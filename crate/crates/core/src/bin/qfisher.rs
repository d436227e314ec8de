//! qfisher: reproducible Grover-geometry and period-finding experiments.
//!
//! Exit codes: 0 success, 1 failed check or exhausted budget, 2 usage
//! error, 3 resource limit.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qfisher::error::Error;
use qfisher::experiments::{geodesic_check, grover_trace, FORMAT_VERSION};
use qfisher::output::{check_csv, to_json, trace_csv, write_atomic};
use qfisher::period::{
    compare_methods, factor, Counters, FactorBudget, FactorRoute, PeriodInstance, PeriodSettings,
    DEFAULT_MEMORY_CAP,
};
use qfisher::{GroverInstance, Method};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "qfisher",
    version,
    about = "Grover geodesics and period finding, simulated"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-step Grover trajectory with Fisher information, geodesic residual and action.
    GroverTrace {
        /// Number of items.
        n: usize,
        /// Comma-separated marked indices.
        #[arg(long, value_delimiter = ',', required = true)]
        marked: Vec<usize>,
        /// Grover iterations to run.
        #[arg(long)]
        steps: usize,
        #[command(flatten)]
        io: OutputArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Integrates the geodesic equation and checks it against simulation and the analytic path.
    GeodesicCheck {
        /// Number of items (one marked).
        n: usize,
        #[command(flatten)]
        io: OutputArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Factors N through period finding.
    Factor {
        n: u64,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[command(flatten)]
        run: RunArgs,
        /// Random bases to try.
        #[arg(long, default_value_t = 16)]
        budget: usize,
        /// Largest number of complex amplitudes to hold.
        #[arg(long, default_value_t = DEFAULT_MEMORY_CAP)]
        memory_cap: u64,
        #[command(flatten)]
        io: OutputArgs,
    },
    /// Runs both period finders on (N, y) and writes the comparison report.
    Compare {
        n: u64,
        y: u64,
        #[command(flatten)]
        run: RunArgs,
        /// Attempts per method.
        #[arg(long, default_value_t = 32)]
        budget: usize,
        #[command(flatten)]
        io: OutputArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct SamplingArgs {
    /// Spacing of the refined analytic grid, in (0, 0.1].
    #[arg(long, default_value_t = 0.01)]
    dphi: f64,
    /// Largest number of complex amplitudes to hold.
    #[arg(long, default_value_t = DEFAULT_MEMORY_CAP)]
    memory_cap: u64,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    seed: u64,
    /// Measurements of the amplified state per batch.
    #[arg(long, default_value_t = 3)]
    samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Shor,
    GroverAdiabatic,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Shor => Method::Shor,
            MethodArg::GroverAdiabatic => Method::GroverAdiabatic,
        }
    }
}

#[derive(Serialize)]
struct FactorOutput {
    format_version: u32,
    modulus: u64,
    method: Method,
    seed: u64,
    success: bool,
    factors: Option<[u64; 2]>,
    route: Option<FactorRoute>,
    bases_tried: Option<u64>,
    counters: Counters,
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidDimension(_) | Error::Domain(_) | Error::Input(_) => EXIT_USAGE,
            Error::Resource { .. } => EXIT_RESOURCE,
            Error::DegenerateFisher { .. } | Error::BudgetExhausted { .. } | Error::Internal(_) => {
                EXIT_FAILED
            }
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn emit(io: &OutputArgs, contents: &str) -> Result<(), Failure> {
    match &io.out {
        Some(path) => write_atomic(path, contents).map_err(|e| Failure {
            code: EXIT_FAILED,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn json_only(io: &OutputArgs, command: &str) -> Result<(), Failure> {
    if io.format == Some(Format::Csv) {
        return Err(Failure::usage(format!("{command} writes JSON only")));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::GroverTrace {
            n,
            marked,
            steps,
            io,
            sampling,
        } => {
            let inst = GroverInstance::new(n, marked)?;
            let trace = grover_trace(&inst, steps, sampling.dphi, sampling.memory_cap)?;
            let text = match io.format.unwrap_or(Format::Csv) {
                Format::Csv => trace_csv(&trace),
                Format::Json => to_json(&trace),
            };
            emit(&io, &text)?;
            Ok(0)
        }
        Command::GeodesicCheck { n, io, sampling } => {
            let check = geodesic_check(n, sampling.dphi, sampling.memory_cap)?;
            let text = match io.format.unwrap_or(Format::Json) {
                Format::Csv => check_csv(&check),
                Format::Json => to_json(&check),
            };
            emit(&io, &text)?;
            if check.passed {
                Ok(0)
            } else {
                eprintln!("geodesic check failed: deviations exceed tolerances");
                Ok(EXIT_FAILED)
            }
        }
        Command::Factor {
            n,
            method,
            run,
            budget,
            memory_cap,
            io,
        } => {
            json_only(&io, "factor")?;
            let method = Method::from(method);
            let budget = FactorBudget {
                max_bases: budget,
                period: PeriodSettings {
                    samples: run.samples,
                    memory_cap,
                    ..PeriodSettings::default()
                },
            };
            let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
            let (output, code) = match factor(n, method, &mut rng, &budget) {
                Ok(f) if f.route.is_classical_precheck() => {
                    let why = match f.route {
                        FactorRoute::Even => "is even".to_string(),
                        FactorRoute::PrimePower { prime, exponent } => {
                            format!("is a prime power ({prime}^{exponent})")
                        }
                        _ => unreachable!(),
                    };
                    return Err(Failure::usage(format!(
                        "{n} {why}; factor {} found classically, period finding not needed",
                        f.factors[0]
                    )));
                }
                Ok(f) => (
                    FactorOutput {
                        format_version: FORMAT_VERSION,
                        modulus: n,
                        method,
                        seed: run.seed,
                        success: true,
                        factors: Some(f.factors),
                        route: Some(f.route),
                        bases_tried: Some(f.bases_tried),
                        counters: f.counters,
                    },
                    0,
                ),
                Err(Error::BudgetExhausted { counters, .. }) => (
                    FactorOutput {
                        format_version: FORMAT_VERSION,
                        modulus: n,
                        method,
                        seed: run.seed,
                        success: false,
                        factors: None,
                        route: None,
                        bases_tried: Some(budget.max_bases as u64),
                        counters,
                    },
                    EXIT_FAILED,
                ),
                Err(e) => return Err(e.into()),
            };
            let text = to_json(&output);
            print!("{text}");
            if io.out.is_some() {
                emit(&io, &text)?;
            }
            Ok(code)
        }
        Command::Compare {
            n,
            y,
            run,
            budget,
            io,
            sampling,
        } => {
            json_only(&io, "compare")?;
            let inst = PeriodInstance::new(n, y)?;
            let settings = PeriodSettings {
                max_attempts: budget,
                samples: run.samples,
                memory_cap: sampling.memory_cap,
            };
            let report = compare_methods(&inst, run.seed, &settings, sampling.dphi)?;
            emit(&io, &to_json(&report))?;
            if report.all_succeeded() {
                Ok(0)
            } else {
                eprintln!("at least one method exhausted its budget");
                Ok(EXIT_FAILED)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
