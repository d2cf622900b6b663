//! Two packets in free space: energies, trajectories and the separable-limit
//! comparison with the exact two-dimensional solution.

use bohmex::bohm::EnergyBreakdown;
use bohmex::exchange::{
    run_exact_2d_ensemble, run_shared_ensemble, sample_ensemble_positions, EnsembleConfig, EnsembleRun,
};
use bohmex::tdse::{Potential1D, Potential2D, Propagator1D, Propagator2D, PropagatorConfig};
use bohmex::{build_manybody_2d, GaussianPacketSpec, Grid1D, Species, UnitSystem};

use super::{Gate, Report};
use crate::config::ScenarioConfig;
use crate::output::{energies_header, energy_rows, ensemble_scale_lines, trajectory_rows, Output, TRAJECTORIES_HEADER};
use crate::Result;

/// Relative tolerance on the free-pair energies.
pub const ENERGY_TOLERANCE: f64 = 0.02;

pub fn ensemble_config(cfg: &ScenarioConfig) -> EnsembleConfig {
    EnsembleConfig {
        n_steps: cfg.ensemble.n_steps(),
        stride: cfg.ensemble.stride,
        seed: cfg.seed,
    }
}

/// Quantum-equilibrium starts; identical species get mirrored pairs.
pub fn pair_starts(cfg: &ScenarioConfig, species: Species) -> Result<Vec<Vec<f64>>> {
    let grid = cfg.grid.grid()?;
    Ok(sample_ensemble_positions(
        &cfg.packet_specs(),
        species,
        &grid,
        cfg.ensemble.trajectories,
        cfg.seed,
        species.is_identical(),
    )?)
}

pub fn free_pair_run(cfg: &ScenarioConfig, species: Species, starts: &[Vec<f64>]) -> Result<EnsembleRun<f64>> {
    let grid = cfg.grid.grid()?;
    let prop = Propagator1D::new(grid, PropagatorConfig::new(cfg.ensemble.dt), cfg.ensemble.units())?;
    Ok(run_shared_ensemble(
        &cfg.packet_specs(),
        species,
        &Potential1D::Free,
        &prop,
        starts,
        &ensemble_config(cfg),
    )?)
}

/// Smallest per-particle mean kinetic energy over time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KineticDip {
    pub time: f64,
    pub kinetic: f64,
    pub stderr: f64,
}

pub fn kinetic_dip(energies: &[EnergyBreakdown<f64>]) -> KineticDip {
    energies
        .iter()
        .map(|e| {
            let n = e.k_per_particle.len() as f64;
            KineticDip {
                time: e.time,
                kinetic: e.k_per_particle.iter().sum::<f64>() / n,
                stderr: e.k_stderr.iter().sum::<f64>() / n,
            }
        })
        .min_by(|a, b| a.kinetic.total_cmp(&b.kinetic))
        .expect("non-empty energy series")
}

/// Largest |total(t)/reference − 1| over the run.
pub fn total_energy_drift(energies: &[EnergyBreakdown<f64>], reference: f64) -> f64 {
    energies
        .iter()
        .map(|e| (e.total / reference - 1.0).abs())
        .fold(0.0, f64::max)
}

pub fn run_free_distinguishable(cfg: &ScenarioConfig, out: &mut Output) -> Result<Report> {
    let species = Species::Distinguishable;
    let starts = pair_starts(cfg, species)?;
    let run = free_pair_run(cfg, species, &starts)?;
    out.csv("energies.csv", &energies_header(2), energy_rows(&run.energies))?;
    out.csv(
        "trajectories.csv",
        TRAJECTORIES_HEADER,
        trajectory_rows(&run.ensemble, cfg.ensemble.saved_members),
    )?;
    let mut r = Report {
        summary: ensemble_scale_lines(starts.len()),
        ..Report::default()
    };
    let last = run.energies.last().expect("recorded energies");
    let reference: f64 = cfg.packets.iter().map(|p| p.energy).sum();
    for (j, p) in cfg.packets.iter().enumerate() {
        let k = last.k_per_particle[j];
        r.line(format!("final_K{}_eV", j + 1), k);
        r.gates.push(Gate::at_most(
            &format!("final_K{}_relative_error", j + 1),
            (k / p.energy - 1.0).abs(),
            ENERGY_TOLERANCE,
        ));
    }
    r.line("final_total_eV", last.total);
    r.gates.push(Gate::at_most(
        "total_relative_drift",
        total_energy_drift(&run.energies, reference),
        ENERGY_TOLERANCE,
    ));
    Ok(r)
}

pub fn run_trajectories(cfg: &ScenarioConfig, out: &mut Output) -> Result<Report> {
    let mut r = Report {
        summary: ensemble_scale_lines(cfg.ensemble.trajectories),
        ..Report::default()
    };
    let mut rows = Vec::new();
    for species in [Species::Fermion, Species::Boson] {
        let starts = pair_starts(cfg, species)?;
        let run = free_pair_run(cfg, species, &starts)?;
        let name = species.to_string().to_lowercase();
        out.csv(
            &format!("trajectories_{name}.csv"),
            TRAJECTORIES_HEADER,
            trajectory_rows(&run.ensemble, cfg.ensemble.saved_members),
        )?;
        let crossings = run.ensemble.diagonal_crossings();
        rows.push(format!("{name},{},{crossings}", run.ensemble.members()));
        r.gates.push(Gate::at_most(
            &format!("{name}_diagonal_crossings"),
            crossings as f64,
            0.0,
        ));
    }
    out.csv("crossings.csv", "species,members,crossings", rows)?;
    Ok(r)
}

pub fn run_identical_energies(cfg: &ScenarioConfig, out: &mut Output) -> Result<Report> {
    let mut r = Report {
        summary: ensemble_scale_lines(cfg.ensemble.trajectories),
        ..Report::default()
    };
    let mut rows = Vec::new();
    let mut dips = Vec::new();
    for species in [Species::Fermion, Species::Boson] {
        let starts = pair_starts(cfg, species)?;
        let run = free_pair_run(cfg, species, &starts)?;
        let name = species.to_string().to_lowercase();
        out.csv(
            &format!("energies_{name}.csv"),
            &energies_header(2),
            energy_rows(&run.energies),
        )?;
        let dip = kinetic_dip(&run.energies);
        rows.push(format!("{name},{},{},{}", dip.time, dip.kinetic, dip.stderr));
        r.line(format!("{name}_kinetic_dip_eV"), dip.kinetic);
        r.line(format!("{name}_kinetic_dip_time_fs"), dip.time);
        dips.push(dip);
    }
    out.csv("dips.csv", "species,t_fs,K_min_eV,K_min_stderr_eV", rows)?;
    let (f, b) = (dips[0], dips[1]);
    r.line(
        "fermion_minus_boson_dip_sigmas",
        (f.kinetic - b.kinetic) / f.stderr.hypot(b.stderr),
    );
    Ok(r)
}

/// Largest |x_conditional − x_exact| over all members, particles and
/// recorded times, for a free pair evolved by the shared conditional bank
/// and by the exact two-dimensional solution from identical starts.
#[allow(clippy::too_many_arguments)]
pub fn separable_limit_deviation(
    packets: &[GaussianPacketSpec; 2],
    species: Species,
    grid: Grid1D,
    units: UnitSystem,
    dt: f64,
    ens: &EnsembleConfig,
    members: usize,
) -> Result<f64> {
    let starts = sample_ensemble_positions(packets, species, &grid, members, ens.seed, species.is_identical())?;
    let prop = Propagator1D::new(grid, PropagatorConfig::new(dt), units)?;
    let cond = run_shared_ensemble(packets, species, &Potential1D::Free, &prop, &starts, ens)?;
    let psi = build_manybody_2d(&packets[0], &packets[1], species, &grid, &grid)?;
    let p2 = Propagator2D::new(
        grid,
        grid,
        PropagatorConfig::new(dt),
        units,
        Potential2D::Separable(Potential1D::Free, Potential1D::Free),
    )?;
    let exact = run_exact_2d_ensemble(&psi, species, &p2, &units, &starts, ens)?;
    Ok(cond
        .ensemble
        .trajectories
        .iter()
        .zip(&exact.ensemble.trajectories)
        .flat_map(|(a, b)| a.positions.iter().zip(&b.positions).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max))
}
