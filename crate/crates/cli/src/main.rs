//! `jtype`: construct Jacobi-type families and check their properties.

mod commands;
mod config;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use jtype_core::exact::parse_rational;
use jtype_core::{Error, Mode, UniPoly};

use commands::{Fault, Report};
use config::RunConfig;

#[derive(Parser)]
#[command(name = "jtype", version, about = "Exact Jacobi-type polynomial families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print a plain-text summary instead of JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    text: bool,
    /// Print JSON (default).
    #[arg(long, global = true)]
    json: bool,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConfigArg {
    /// Family configuration (JSON).
    #[arg(long)]
    config: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// q_n, its Jacobi coefficients and Lambda(n).
    Qpoly {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long)]
        n: usize,
    },
    /// Checks <q_n, q_i> = 0 for i < n and <q_n, q_n> != 0, m <= n <= max-n.
    OrthCheck {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long)]
        max_n: usize,
        /// Overrides the mode of the bilinear section.
        #[arg(long, value_parser = parse_mode)]
        mode: Option<Mode>,
        /// Adds DELTA to beta_{N,J} before checking (N:J:DELTA).
        #[arg(long, hide = true, value_parser = parse_fault)]
        inject_fault: Option<(usize, usize, String)>,
    },
    /// Coefficients gamma_{n,j} of Q(x) q_n in the q basis.
    Recurrence {
        #[command(flatten)]
        cfg: ConfigArg,
        /// Coefficients of Q, constant term first, comma separated.
        #[arg(long)]
        q: String,
        #[arg(long, value_parser = parse_window, default_value = "5:25")]
        window: (usize, usize),
    },
    /// Polynomials Q of degree <= max-deg with a banded recurrence.
    AlgebraScan {
        #[command(flatten)]
        cfg: ConfigArg,
        #[arg(long)]
        max_deg: usize,
        #[arg(long, value_parser = parse_window, default_value = "5:30")]
        window: (usize, usize),
    },
    /// Builds a Krall family and checks its recurrence and measure.
    Krall {
        /// Krall specification (JSON).
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = parse_window, default_value = "0:12")]
        window: (usize, usize),
        #[arg(long, default_value_t = 6)]
        fit_max: usize,
        #[arg(long, default_value_t = 14)]
        max_n: usize,
    },
}

fn parse_window(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or("expected A:B")?;
    let a = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b = b.trim().parse().map_err(|e| format!("{e}"))?;
    if a > b {
        return Err("empty window".into());
    }
    Ok((a, b))
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    match s {
        "generic" => Ok(Mode::Generic),
        "sobolev" => Ok(Mode::Sobolev),
        _ => Err("expected generic or sobolev".into()),
    }
}

fn parse_fault(s: &str) -> Result<(usize, usize, String), String> {
    let parts: Vec<&str> = s.splitn(3, ':').collect();
    let [n, j, d] = parts[..] else { return Err("expected N:J:DELTA".into()) };
    Ok((n.parse().map_err(|e| format!("{e}"))?, j.parse().map_err(|e| format!("{e}"))?, d.to_string()))
}

fn parse_poly(s: &str) -> jtype_core::Result<UniPoly> {
    let c = s.split(',').map(|t| parse_rational(t.trim())).collect::<jtype_core::Result<Vec<_>>>()?;
    Ok(UniPoly::from_coeffs(c))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Degenerate { .. } | Error::EpsPole { .. } | Error::Pole(_) | Error::NotSquare { .. } => 2,
        Error::Inconsistent => 3,
        _ => 1,
    }
}

fn run(cli: &Cli) -> jtype_core::Result<Report> {
    match &cli.command {
        Command::Qpoly { cfg, n } => commands::qpoly(&RunConfig::load(&cfg.config)?, *n),
        Command::OrthCheck { cfg, max_n, mode, inject_fault } => {
            let run = RunConfig::load(&cfg.config)?;
            let bcfg = run.bilinear(*mode)?;
            let fault = match inject_fault {
                Some((n, j, d)) => Some(Fault { n: *n, j: *j, delta: parse_rational(d)? }),
                None => None,
            };
            commands::orth_check(&run, &bcfg, *max_n, fault.as_ref())
        }
        Command::Recurrence { cfg, q, window } => {
            commands::recurrence(&RunConfig::load(&cfg.config)?, &parse_poly(q)?, *window)
        }
        Command::AlgebraScan { cfg, max_deg, window } => {
            commands::scan(&RunConfig::load(&cfg.config)?, *max_deg, *window)
        }
        Command::Krall { config, window, fit_max, max_n } => {
            commands::krall(&config::load_krall(config)?, *window, *fit_max, *max_n)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let body = if cli.text {
        report.text
    } else {
        let mut s = serde_json::to_string_pretty(&report.json).expect("serializable");
        s.push('\n');
        s
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, body) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{body}"),
    }
    ExitCode::from(if report.violation { 3 } else { 0 })
}
