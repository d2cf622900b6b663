//! Physical sanity checks of a resolved configuration, without running it.

use bohmex::bohm::MIN_ENSEMBLE;
use bohmex::Error;
use bohmex_transport::TransportError;

use crate::config::{Scenario, ScenarioConfig};
use crate::CliError;

/// Largest phase advance per step, ω·dt, accepted without a warning.
pub const MAX_PHASE_ADVANCE: f64 = std::f64::consts::FRAC_PI_4;

/// Widths of momentum spread included in the highest wave vector.
const K_SPREAD_SIGMAS: f64 = 4.0;

#[derive(Debug, Default)]
pub struct ValidationReport {
    pub warnings: Vec<String>,
    pub error: Option<CliError>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    fn fail(&mut self, e: impl Into<CliError>) {
        if self.error.is_none() {
            self.error = Some(e.into());
        }
    }
}

fn invalid(msg: String) -> CliError {
    CliError::Core(Error::InvalidInput(msg))
}

fn transport_error(e: TransportError) -> CliError {
    match e {
        TransportError::Core(c) => CliError::Core(c),
        other => CliError::Transport(other),
    }
}

pub fn validate(cfg: &ScenarioConfig) -> ValidationReport {
    let mut r = ValidationReport::default();
    match cfg.scenario {
        Scenario::FreeDistinguishable
        | Scenario::FermionBosonTrajectories
        | Scenario::IdenticalPairEnergies
        | Scenario::HarmonicNoExchange
        | Scenario::HarmonicExchange => check_pair_ensemble(cfg, &mut r),
        Scenario::KineticVsDistance | Scenario::SpinCheck => {
            let d = &cfg.distance;
            if d.values.is_empty() || d.values.iter().any(|v| !(*v >= 0.0)) {
                r.fail(invalid(
                    "distance.values must be a non-empty list of non-negative numbers".into(),
                ));
            }
            if cfg.scenario == Scenario::SpinCheck && d.samples == 0 {
                r.fail(invalid("distance.samples must be at least 1".into()));
            }
        }
        Scenario::TransportIv | Scenario::TransportNoise => check_transport(cfg, &mut r),
        Scenario::PropertySuite => {
            check_pair_ensemble(cfg, &mut r);
            check_transport(cfg, &mut r);
        }
    }
    r
}

fn check_pair_ensemble(cfg: &ScenarioConfig, r: &mut ValidationReport) {
    let e = &cfg.ensemble;
    let grid = match cfg.grid.grid() {
        Ok(g) => g,
        Err(err) => return r.fail(err),
    };
    let packets = cfg.packet_specs();
    if packets.len() != 2 {
        r.fail(invalid(format!(
            "this scenario needs exactly 2 packets, got {}",
            packets.len()
        )));
    }
    if e.trajectories < MIN_ENSEMBLE {
        r.fail(invalid(format!(
            "ensemble.trajectories = {} is below the minimum of {MIN_ENSEMBLE}",
            e.trajectories
        )));
    }
    for p in &packets {
        if let Err(err) = p.check_fits(&grid) {
            r.fail(err);
        }
    }
    if matches!(cfg.scenario, Scenario::HarmonicNoExchange | Scenario::HarmonicExchange) {
        match cfg.grid.grid_2d() {
            Ok(g2) => {
                for p in &packets {
                    if let Err(err) = p.check_fits(&g2) {
                        r.fail(err);
                    }
                }
            }
            Err(err) => r.fail(err),
        }
    }
    let units = e.units();
    let k_top = packets
        .iter()
        .map(|p| p.k0.abs() + K_SPREAD_SIGMAS * p.sigma_k())
        .fold(0.0, f64::max);
    let phase = units.energy_of_k(k_top) * e.dt / units.hbar;
    if phase > MAX_PHASE_ADVANCE {
        r.warnings.push(format!(
            "ensemble.dt = {} fs advances the phase of k = {k_top:.3} nm^-1 by {phase:.3} rad per step (> pi/4)",
            e.dt
        ));
    }
    let k_grid = std::f64::consts::PI / grid.dx();
    if k_top > 0.5 * k_grid {
        r.warnings.push(format!(
            "grid spacing {:.3} nm resolves wave vectors up to {:.3} nm^-1 with fewer than 4 points per wavelength at k = {k_top:.3}",
            grid.dx(),
            k_grid
        ));
    }
}

fn check_transport(cfg: &ScenarioConfig, r: &mut ValidationReport) {
    let t = &cfg.transport;
    if t.biases.is_empty() || t.interactions.is_empty() {
        r.fail(invalid(
            "transport.biases and transport.interactions must not be empty".into(),
        ));
    }
    for &bias in &t.biases {
        let device = cfg.device.device(bias);
        if let Err(e) = device.validate() {
            return r.fail(transport_error(e));
        }
        let phase = device.max_phase_advance();
        if phase > MAX_PHASE_ADVANCE {
            r.warnings.push(format!(
                "device.dt = {} fs advances the fastest injected state by {phase:.3} rad per step at {bias} V (> pi/4)",
                device.dt
            ));
        }
    }
    if cfg.scenario == Scenario::TransportNoise {
        let span = t.duration - t.trim;
        if span < 10.0 * t.max_lag {
            r.fail(invalid(format!(
                "noise record of {span} fs after trimming is shorter than 10 x max_lag = {} fs",
                10.0 * t.max_lag
            )));
        }
    }
    if t.trim >= t.duration {
        r.fail(invalid(format!("transport.trim = {} fs leaves no record", t.trim)));
    }
}
