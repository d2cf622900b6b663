use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bohmex_cli::config::ScenarioConfig;
use bohmex_cli::validate::validate;
use bohmex_cli::{output_root, run_scenario, CliError, Scenario, OUTPUT_ROOT_ENV};

/// Bohmian exchange-interaction simulations.
#[derive(Parser)]
#[command(name = "bohmex", version)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario a config file names and write its outputs.
    Run {
        config: PathBuf,
        /// Output root; overrides $BOHMEX_OUTPUT_ROOT.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse a config and check it without running.
    Validate { config: PathBuf },
    /// Print the known scenario names.
    ListScenarios,
}

const FAILED_GATE: u8 = 2;

fn is_validation_failure(e: &CliError) -> bool {
    matches!(
        e,
        CliError::Core(bohmex::Error::GridTooNarrow { .. } | bohmex::Error::InvalidInput(_))
    )
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args = Args::parse();
    match args.command {
        Command::ListScenarios => {
            for s in Scenario::ALL {
                println!("{:<34}{}", s.name(), s.description());
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => {
            let cfg = match ScenarioConfig::load(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            let r = validate(&cfg);
            for w in &r.warnings {
                println!("warning: {w}");
            }
            match r.error {
                None => {
                    println!("{}: OK", config.display());
                    ExitCode::SUCCESS
                }
                Some(e) => {
                    println!("{}: rejected: {e}", config.display());
                    ExitCode::from(FAILED_GATE)
                }
            }
        }
        Command::Run { config, out } => {
            let cfg = match ScenarioConfig::load(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            let root = out.unwrap_or_else(output_root);
            log::info!(
                "{} -> {} (root from --out or ${OUTPUT_ROOT_ENV})",
                cfg.scenario,
                root.display()
            );
            match run_scenario(&cfg, &root) {
                Ok(report) => {
                    for (k, v) in &report.summary {
                        println!("{k} = {v}");
                    }
                    for g in &report.gates {
                        println!("gate {} = {}", g.name, g.describe());
                    }
                    if cfg.scenario.has_gates() && !report.passed() {
                        ExitCode::from(FAILED_GATE)
                    } else {
                        ExitCode::SUCCESS
                    }
                }
                Err(e) if is_validation_failure(&e) => {
                    eprintln!("rejected: {e}");
                    ExitCode::from(FAILED_GATE)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
