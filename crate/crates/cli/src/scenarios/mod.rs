//! The named experiments. Each module exposes its computation for reuse and
//! a `run` that writes the scenario's files.

pub mod free;
pub mod harmonic;
pub mod properties;
pub mod static_checks;
pub mod transport;

use crate::config::{Scenario, ScenarioConfig};
use crate::output::Output;
use crate::Result;

/// A pass/fail check on one measured value.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

impl Gate {
    /// Passes when `value <= limit`.
    pub fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            limit,
            pass: value <= limit,
        }
    }

    /// Passes when `value >= limit`.
    pub fn at_least(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            limit,
            pass: value >= limit,
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "{} (value {}, limit {})",
            if self.pass { "pass" } else { "FAIL" },
            self.value,
            self.limit
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub summary: Vec<(String, String)>,
    pub gates: Vec<Gate>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.gates.iter().all(|g| g.pass)
    }

    pub fn line(&mut self, key: impl Into<String>, value: impl ToString) {
        self.summary.push((key.into(), value.to_string()));
    }
}

pub fn dispatch(cfg: &ScenarioConfig, out: &mut Output) -> Result<Report> {
    match cfg.scenario {
        Scenario::KineticVsDistance => static_checks::run_kinetic_vs_distance(cfg, out),
        Scenario::SpinCheck => static_checks::run_spin_check(cfg, out),
        Scenario::FreeDistinguishable => free::run_free_distinguishable(cfg, out),
        Scenario::FermionBosonTrajectories => free::run_trajectories(cfg, out),
        Scenario::IdenticalPairEnergies => free::run_identical_energies(cfg, out),
        Scenario::HarmonicNoExchange => harmonic::run(cfg, out, bohmex::Species::Distinguishable),
        Scenario::HarmonicExchange => harmonic::run(cfg, out, bohmex::Species::Fermion),
        Scenario::TransportIv => transport::run_iv(cfg, out),
        Scenario::TransportNoise => transport::run_noise(cfg, out),
        Scenario::PropertySuite => properties::run(cfg, out),
    }
}
