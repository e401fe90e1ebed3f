use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ridgerate::harness::{predict_exponents, run_experiment};
use ridgerate::oracles::free_knot_fit;
use ridgerate::targets::{by_name, TARGET_NAMES};
use ridgerate::{Error, ExperimentConfig, Method};

#[derive(Parser)]
#[command(name = "ridgerate", version, about = "Approximation-rate experiments for shallow networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the n-sweep described by a key=value config file.
    Run { config: PathBuf },
    /// Print the theoretical exponents t and q.
    Predict {
        s: f64,
        m: usize,
        k: usize,
        d: usize,
        method: String,
    },
    Targets {
        #[command(subcommand)]
        action: TargetsAction,
    },
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
}

#[derive(Subcommand)]
enum TargetsAction {
    /// List the built-in targets.
    List {
        #[arg(long, default_value_t = 1)]
        dim: usize,
    },
}

#[derive(Subcommand)]
enum OracleAction {
    /// Best piecewise polynomial with free breakpoints on [0,1].
    FreeKnot {
        #[arg(long, default_value = "cos")]
        target: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        breakpoints: usize,
        #[arg(long, default_value_t = 512)]
        dp_grid: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(out) => {
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config_error() || matches!(e, Error::Io { .. }) {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}

fn execute(command: Command) -> ridgerate::Result<String> {
    let mut out = String::new();
    match command {
        Command::Run { config } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let report = run_experiment(&cfg)?;
            if cfg.output.is_none() {
                out = report.to_csv();
            }
        }
        Command::Predict { s, m, k, d, method } => {
            let method: Method = method.parse()?;
            let (t, q) = predict_exponents(s, m, k, d, method)?;
            let _ = writeln!(out, "t={t} q={q}");
        }
        Command::Targets {
            action: TargetsAction::List { dim },
        } => {
            for name in TARGET_NAMES {
                let f = by_name(name, dim)?;
                let b = f.barron();
                let smooth = match b.exponential {
                    Some((beta, c)) => format!("exponential beta={beta} c={c}"),
                    None if b.s_sup.is_infinite() => "s<inf".to_string(),
                    None => format!("s<{}", b.s_sup),
                };
                let _ = writeln!(out, "{name}\t{smooth}");
            }
        }
        Command::Oracle {
            action: OracleAction::FreeKnot { target, k, breakpoints, dp_grid },
        } => {
            let f = by_name(&target, 1)?;
            let fit = free_knot_fit(&|x| f.eval(&[x]), breakpoints, k, dp_grid)?;
            let knots: Vec<String> = fit.breakpoints.iter().map(|b| format!("{b}")).collect();
            let _ = writeln!(out, "l2_error={:.11e}", fit.l2_error);
            let _ = writeln!(out, "breakpoints={}", knots.join(","));
        }
    }
    Ok(out)
}
