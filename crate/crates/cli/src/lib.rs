//! Scenario runner: configuration files, named experiments and their
//! CSV outputs.

pub mod config;
pub mod output;
pub mod scenarios;
pub mod validate;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use config::{ConfigError, Scenario, ScenarioConfig};
pub use scenarios::{Gate, Report};

/// Environment variable overriding the output root directory.
pub const OUTPUT_ROOT_ENV: &str = "BOHMEX_OUTPUT_ROOT";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] bohmex::Error),
    #[error(transparent)]
    Transport(#[from] bohmex_transport::TransportError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

/// `$BOHMEX_OUTPUT_ROOT`, or `out` in the working directory.
pub fn output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ROOT_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("out"))
}

/// Runs a resolved configuration, writing everything under `root`.
pub fn run_scenario(cfg: &ScenarioConfig, root: &Path) -> Result<Report> {
    let report = validate::validate(cfg);
    for w in &report.warnings {
        log::warn!("{w}");
    }
    if let Some(e) = report.error {
        return Err(e);
    }
    let mut out = output::Output::create(root, cfg)?;
    out.manifest(cfg)?;
    let report = scenarios::dispatch(cfg, &mut out)?;
    let mut lines = vec![
        ("scenario".to_string(), cfg.scenario.name().to_string()),
        ("seed".to_string(), cfg.seed.to_string()),
    ];
    lines.extend(report.summary.iter().cloned());
    for g in &report.gates {
        lines.push((format!("gate.{}", g.name), g.describe()));
    }
    lines.push(("passed".into(), report.passed().to_string()));
    out.summary(&lines)?;
    Ok(report)
}
