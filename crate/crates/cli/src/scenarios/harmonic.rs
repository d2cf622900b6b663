//! Harmonically coupled pair: conditional-wave-function ensemble against
//! the exact two-dimensional solution.

use bohmex::bohm::EnergyBreakdown;
use bohmex::exchange::{kinetic_rms_deviation, run_conditional_ensemble, run_exact_2d_ensemble, EnsembleRun, Layout};
use bohmex::tdse::{Potential1D, Potential2D, Propagator1D, Propagator2D, PropagatorConfig};
use bohmex::{build_manybody_2d, Species};

use super::free::{ensemble_config, pair_starts};
use super::{Gate, Report};
use crate::config::ScenarioConfig;
use crate::output::{energies_header, energy_rows, ensemble_scale_lines, Output};
use crate::Result;

/// RMS relative kinetic deviation allowed without exchange.
pub const RMS_TOLERANCE_DISTINGUISHABLE: f64 = 0.05;
/// The same with exchange, where assembled fields pass close to nodes.
pub const RMS_TOLERANCE_EXCHANGE: f64 = 0.15;
/// |⟨K₁⟩ − ⟨K₂⟩| allowed, in combined standard errors.
pub const INDISTINGUISHABILITY_SIGMAS: f64 = 3.0;

pub struct HarmonicComparison {
    pub conditional: EnsembleRun<f64>,
    pub exact: EnsembleRun<f64>,
    /// Per particle.
    pub rms_deviation: Vec<f64>,
}

pub fn layout_for(species: Species) -> Layout {
    if species.is_identical() {
        Layout::Full
    } else {
        Layout::Diagonal
    }
}

pub fn harmonic_comparison(cfg: &ScenarioConfig, species: Species) -> Result<HarmonicComparison> {
    let e = &cfg.ensemble;
    let units = e.units();
    let packets = cfg.packet_specs();
    let starts = pair_starts(cfg, species)?;
    let ens = ensemble_config(cfg);
    let pair = Potential1D::HarmonicPair { c: e.coupling };

    let grid = cfg.grid.grid()?;
    let prop = Propagator1D::new(grid, PropagatorConfig::new(e.dt), units)?;
    log::info!("conditional {species} ensemble of {} members", starts.len());
    let conditional = run_conditional_ensemble(&packets, species, layout_for(species), &pair, &prop, &starts, &ens)?;

    let g2 = cfg.grid.grid_2d()?;
    let psi = build_manybody_2d(&packets[0], &packets[1], species, &g2, &g2)?;
    let p2 = Propagator2D::new(g2, g2, PropagatorConfig::new(e.dt), units, Potential2D::Pair(pair))?;
    log::info!("exact {species} ensemble on {}^2 points", g2.n_points());
    let exact = run_exact_2d_ensemble(&psi, species, &p2, &units, &starts, &ens)?;
    let rms_deviation = kinetic_rms_deviation(&conditional.energies, &exact.energies);
    Ok(HarmonicComparison {
        conditional,
        exact,
        rms_deviation,
    })
}

/// Largest |⟨K₁⟩ − ⟨K₂⟩| over time in units of the combined standard error.
pub fn max_kinetic_separation(energies: &[EnergyBreakdown<f64>]) -> f64 {
    energies
        .iter()
        .map(|e| {
            let se = e.k_stderr[0].hypot(e.k_stderr[1]);
            let d = (e.k_per_particle[0] - e.k_per_particle[1]).abs();
            if se > 0.0 {
                d / se
            } else if d == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .fold(0.0, f64::max)
}

pub fn run(cfg: &ScenarioConfig, out: &mut Output, species: Species) -> Result<Report> {
    let c = harmonic_comparison(cfg, species)?;
    out.csv(
        "energies_conditional.csv",
        &energies_header(2),
        energy_rows(&c.conditional.energies),
    )?;
    out.csv(
        "energies_exact.csv",
        &energies_header(2),
        energy_rows(&c.exact.energies),
    )?;
    out.csv(
        "kinetic_comparison.csv",
        "t_fs,K1_conditional_eV,K2_conditional_eV,K1_exact_eV,K2_exact_eV",
        c.conditional.energies.iter().zip(&c.exact.energies).map(|(a, b)| {
            format!(
                "{},{},{},{},{}",
                a.time, a.k_per_particle[0], a.k_per_particle[1], b.k_per_particle[0], b.k_per_particle[1]
            )
        }),
    )?;
    let mut r = Report {
        summary: ensemble_scale_lines(cfg.ensemble.trajectories),
        ..Report::default()
    };
    let tol = if species.is_identical() {
        RMS_TOLERANCE_EXCHANGE
    } else {
        RMS_TOLERANCE_DISTINGUISHABLE
    };
    for (j, d) in c.rms_deviation.iter().enumerate() {
        r.gates
            .push(Gate::at_most(&format!("K{}_rms_relative_deviation", j + 1), *d, tol));
    }
    if species.is_identical() {
        r.gates.push(Gate::at_most(
            "kinetic_separation_sigmas",
            max_kinetic_separation(&c.conditional.energies),
            INDISTINGUISHABILITY_SIGMAS,
        ));
    }
    let first = c.exact.energies.first().map_or(0.0, |e| e.total);
    let last = c.exact.energies.last().map_or(0.0, |e| e.total);
    r.line("exact_total_initial_eV", first);
    r.line("exact_total_final_eV", last);
    Ok(r)
}
