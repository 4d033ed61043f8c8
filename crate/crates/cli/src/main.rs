//! Verification harness for the discrete fractional calculus library.
//! Subcommands run identity suites, parameter sweeps and counterexample
//! reproductions; results are emitted as JSON reports or CSV tables with
//! every pass verdict carrying its tolerance or tail bound.
//!
//! Exit codes: 0 all checks passed, 1 at least one check failed, 2 on
//! configuration errors (including exact-mode requests for float-only
//! computations).

mod commands;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use cesaro_core::matrix::NormKind;
use cesaro_core::scalar::{Rational, RealScalar};
use clap::{Parser, Subcommand};

use report::{CheckRow, ConfigEcho, Report};

#[derive(Debug)]
pub enum CliError {
    Config(String),
}

impl From<cesaro_core::Error> for CliError {
    fn from(e: cesaro_core::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "cesaro", version, about = "Cesaro kernels, Weyl fractional calculus and operator Cesaro sums: verification suites, sweeps and reports")]
struct Cli {
    /// Arithmetic mode: exact | float
    #[arg(long, global = true, default_value = "exact")]
    mode: String,

    /// Fractional order; rationals like 1/2 in exact mode
    #[arg(long, global = true)]
    alpha: Option<String>,

    /// Second order where a check needs one
    #[arg(long, global = true)]
    beta: Option<String>,

    /// Weight order for norms and Abel bounds
    #[arg(long, global = true)]
    gamma: Option<String>,

    /// Horizon (table length, truncation index or certification range)
    #[arg(long, global = true, default_value_t = 256)]
    n: usize,

    /// Seed recorded in every report
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Output path; stdout when omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Matrix norm: spectral | maxrow | maxcol
    #[arg(long, global = true, default_value = "spectral")]
    norm: String,

    /// Comma-separated grid; orders, r values or lambda values per command
    #[arg(long, global = true)]
    grid: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full identity suite (kernels, Weyl calculus, duality,
    /// functional equation, homomorphism laws)
    Verify {
        /// Inject a fault to prove the suite detects it (supported: orbit)
        #[arg(long)]
        inject_fault: Option<String>,
        /// Include the Gamma-based Gautschi bound check (float mode only)
        #[arg(long)]
        gautschi: bool,
    },
    /// Emit CSV rows (example,alpha,n,ratio,norm,bound,pass) for ratio,
    /// abel, resolvent or weights sweeps
    Sweep {
        /// Sweep kind: ratio | abel | resolvent | weights
        #[arg(long, default_value = "ratio")]
        kind: String,
        /// Example operator: assani | shiftblock:D
        #[arg(long)]
        example: Option<String>,
        /// Pass bound for ratio rows
        #[arg(long)]
        bound: Option<f64>,
    },
    /// Kernel checks: semigroup, doubling, optional Gautschi bounds
    Kernel {
        /// Include the Gamma-based Gautschi bound check (float mode only)
        #[arg(long)]
        gautschi: bool,
    },
    /// Weighted algebra norm of a sequence
    Norm {
        /// Comma-separated coefficients, rationals allowed in exact mode
        #[arg(long)]
        seq: String,
        /// Weight: kernel:G | kernelexp:G:R | csv:PATH (default k^(a+1))
        #[arg(long)]
        phi: Option<String>,
    },
    /// Certify a weight for the two-sided kernel convolution inequality
    Weights {
        /// Weight: kernel:G | kernelexp:G:R | csv:PATH
        #[arg(long)]
        phi: Option<String>,
    },
    /// Build a Cesaro orbit and export n,ratio,norm rows
    Orbit {
        /// Example operator: assani | shiftblock:D
        #[arg(long)]
        example: Option<String>,
        /// Matrix CSV path (header dim=k)
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Abel means: subordination defects and the resolvent-ratio bound
    Abel {
        #[arg(long)]
        example: Option<String>,
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Truncated pseudo-resolvents over a lambda grid
    Resolvent {
        #[arg(long)]
        example: Option<String>,
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
}

fn parse_norm_kind(text: &str) -> Result<NormKind, CliError> {
    match text {
        "spectral" => Ok(NormKind::Spectral),
        "maxrow" => Ok(NormKind::MaxRow),
        "maxcol" => Ok(NormKind::MaxCol),
        other => Err(CliError::Config(format!("unknown norm kind `{other}`"))),
    }
}

fn parse_order<S: RealScalar>(text: &Option<String>, default: (i64, i64)) -> Result<S, CliError> {
    match text {
        None => Ok(S::from_ratio(default.0, default.1)),
        Some(t) => {
            let v = S::parse(t).ok_or_else(|| CliError::Config(format!("bad order `{t}`")))?;
            if v < S::zero() {
                return Err(CliError::Config(format!("order must be nonnegative, got {t}")));
            }
            Ok(v)
        }
    }
}

fn echo(cli: &Cli) -> ConfigEcho {
    ConfigEcho {
        mode: cli.mode.clone(),
        alpha: cli.alpha.clone(),
        beta: cli.beta.clone(),
        gamma: cli.gamma.clone(),
        n: cli.n,
        seed: cli.seed,
        norm: cli.norm.clone(),
        grid: cli.grid.clone(),
        example: None,
        phi: None,
        seq: None,
        kind: None,
        inject_fault: None,
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let started = Instant::now();
    let exact = match cli.mode.as_str() {
        "exact" => true,
        "float" => false,
        other => return Err(CliError::Config(format!("unknown mode `{other}`"))),
    };
    let kind = parse_norm_kind(&cli.norm)?;
    let mut config = echo(cli);

    match &cli.command {
        Command::Verify { inject_fault, gautschi } => {
            if let Some(fault) = inject_fault {
                if fault != "orbit" {
                    return Err(CliError::Config(format!(
                        "unknown fault target `{fault}` (supported: orbit)"
                    )));
                }
            }
            if *gautschi && exact {
                return Err(CliError::Config(
                    "the Gautschi check needs Gamma(a); run with --mode float".into(),
                ));
            }
            let inject = inject_fault.is_some();
            config.inject_fault = inject_fault.clone();
            let mut checks = if exact {
                verify::identity_suite::<Rational>(cli.seed, cli.n, inject)?
            } else {
                verify::identity_suite::<f64>(cli.seed, cli.n, inject)?
            };
            if *gautschi {
                let alpha: f64 = parse_order(&cli.alpha, (1, 2))?;
                checks.push(verify::gautschi_row(alpha, cli.n)?);
            }
            emit(cli, "verify", config, checks, started)
        }
        Command::Sweep { kind: sweep_kind, example, bound } => {
            config.kind = Some(sweep_kind.clone());
            let rows = match sweep_kind.as_str() {
                "ratio" => {
                    let (name, t) = commands::load_operator(example, &None)?;
                    config.example = Some(name.clone());
                    let orders = commands::parse_grid(&cli.grid, &[0.0, 1.0])?;
                    commands::ratio_sweep_rows(
                        &name,
                        &t,
                        &orders,
                        cli.n,
                        kind,
                        bound.unwrap_or(f64::INFINITY),
                    )?
                }
                "abel" => {
                    let (name, t) = commands::load_operator(example, &None)?;
                    config.example = Some(name.clone());
                    let alpha: f64 = parse_order(&cli.alpha, (1, 1))?;
                    let gamma: f64 = parse_order(&cli.gamma, (1, 1))?;
                    let grid = commands::parse_grid(&cli.grid, &[0.5, 0.9, 0.99])?;
                    commands::abel_sweep_rows(&name, &t, alpha, gamma, &grid, cli.n, kind)?
                }
                "resolvent" => {
                    let (name, t) = commands::load_operator(example, &None)?;
                    config.example = Some(name.clone());
                    let alpha: f64 = parse_order(&cli.alpha, (1, 1))?;
                    let grid = commands::parse_grid(&cli.grid, &[4.0, 8.0])?;
                    commands::resolvent_sweep_rows(&name, &t, alpha, &grid, cli.n)?
                }
                "weights" => {
                    let alpha: f64 = parse_order(&cli.alpha, (1, 1))?;
                    let grid = commands::parse_grid(&cli.grid, &[1.2, 1.5, 2.0])?;
                    commands::weight_sweep_rows(alpha, &grid, cli.n)?
                }
                other => {
                    return Err(CliError::Config(format!(
                        "unknown sweep kind `{other}` (ratio, abel, resolvent, weights)"
                    )))
                }
            };
            commands::write_sweep_csv(&rows, cli.out.as_deref())?;
            Ok(true)
        }
        Command::Kernel { gautschi } => {
            if *gautschi && exact {
                return Err(CliError::Config(
                    "the Gautschi check needs Gamma(a); run with --mode float".into(),
                ));
            }
            let mut checks = if exact {
                let alpha: Rational = parse_order(&cli.alpha, (1, 2))?;
                let beta: Rational = parse_order(&cli.beta, (1, 2))?;
                commands::kernel_checks(&alpha, &beta, cli.n)?
            } else {
                let alpha: f64 = parse_order(&cli.alpha, (1, 2))?;
                let beta: f64 = parse_order(&cli.beta, (1, 2))?;
                commands::kernel_checks(&alpha, &beta, cli.n)?
            };
            if *gautschi {
                let alpha: f64 = parse_order(&cli.alpha, (1, 2))?;
                checks.push(verify::gautschi_row(alpha, cli.n)?);
            }
            emit(cli, "kernel", config, checks, started)
        }
        Command::Norm { seq, phi } => {
            config.seq = Some(seq.clone());
            config.phi = phi.clone();
            let checks = if exact {
                let alpha: Rational = parse_order(&cli.alpha, (1, 2))?;
                commands::norm_checks(seq, &alpha, phi, &cli.grid)?
            } else {
                let alpha: f64 = parse_order(&cli.alpha, (1, 2))?;
                commands::norm_checks(seq, &alpha, phi, &cli.grid)?
            };
            emit(cli, "norm", config, checks, started)
        }
        Command::Weights { phi } => {
            config.phi = phi.clone();
            let checks = if exact {
                let alpha: Rational = parse_order(&cli.alpha, (1, 1))?;
                commands::weights_checks(phi, &alpha, cli.n)?
            } else {
                let alpha: f64 = parse_order(&cli.alpha, (1, 1))?;
                commands::weights_checks(phi, &alpha, cli.n)?
            };
            emit(cli, "weights", config, checks, started)
        }
        Command::Orbit { example, matrix } => {
            if exact {
                return Err(CliError::Config(
                    "orbit export produces float diagnostics; run with --mode float".into(),
                ));
            }
            let (name, t) = commands::load_operator(example, matrix)?;
            config.example = Some(name);
            let alpha: f64 = parse_order(&cli.alpha, (1, 1))?;
            commands::orbit_csv(&t, alpha, cli.n, kind, cli.out.as_deref())?;
            Ok(true)
        }
        Command::Abel { example, matrix } => {
            if exact {
                return Err(CliError::Config(
                    "Abel means are float diagnostics; run with --mode float".into(),
                ));
            }
            let (name, t) = commands::load_operator(example, matrix)?;
            config.example = Some(name.clone());
            let alpha: f64 = parse_order(&cli.alpha, (1, 1))?;
            let gamma: f64 = parse_order(&cli.gamma, (1, 1))?;
            let grid = commands::parse_grid(&cli.grid, &[0.5, 0.9])?;
            let checks = commands::abel_checks(&name, &t, alpha, gamma, &grid, cli.n, kind)?;
            emit(cli, "abel", config, checks, started)
        }
        Command::Resolvent { example, matrix } => {
            if exact {
                return Err(CliError::Config(
                    "resolvent truncations are float diagnostics; run with --mode float".into(),
                ));
            }
            let (name, t) = commands::load_operator(example, matrix)?;
            config.example = Some(name.clone());
            let alpha: f64 = parse_order(&cli.alpha, (1, 1))?;
            let grid = commands::parse_grid(&cli.grid, &[4.0, 8.0])?;
            let checks = commands::resolvent_checks(&name, &t, alpha, &grid, cli.n)?;
            emit(cli, "resolvent", config, checks, started)
        }
    }
}

fn emit(
    cli: &Cli,
    command: &str,
    config: ConfigEcho,
    checks: Vec<CheckRow>,
    started: Instant,
) -> Result<bool, CliError> {
    let report = Report {
        command: command.to_string(),
        config_echo: config,
        checks,
        wall_time_ms: started.elapsed().as_millis(),
    };
    report.write(cli.out.as_deref())?;
    Ok(report.all_pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Config(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
