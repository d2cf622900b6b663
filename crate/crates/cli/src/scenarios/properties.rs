//! Quick invariant checks touching every module.

use bohmex::exchange::{swap_symmetry_check, ConditionalSet, EnsembleConfig, Layout, SwapStatus};
use bohmex::manybody::symmetrized_value;
use bohmex::sampling::rng_from_seed;
use bohmex::tdse::{Potential1D, Propagator1D, PropagatorConfig};
use bohmex::{build_packet, ensemble_kinetic_energy, spin_mixed_norm_check, GaussianPacketSpec, Species};
use bohmex_transport::{
    autocorrelation, power_spectrum, run_transport, Contact, ContactInjector, CurrentRecord, Interactions, Window,
};
use rand::Rng;

use super::free::{free_pair_run, pair_starts, separable_limit_deviation};
use super::static_checks::triple;
use super::{Gate, Report};
use crate::config::ScenarioConfig;
use crate::output::Output;
use crate::Result;

const SWAP_TOLERANCE: f64 = 1e-6;
const NODE_POSITION_TOLERANCE: f64 = 0.1;

fn flag(ok: bool) -> f64 {
    f64::from(u8::from(ok))
}

pub fn run(cfg: &ScenarioConfig, out: &mut Output) -> Result<Report> {
    let mut r = Report::default();
    let units = cfg.ensemble.units();
    let grid = cfg.grid.grid()?;
    let dt = cfg.ensemble.dt;
    let prop = Propagator1D::new(grid, PropagatorConfig::new(dt), units)?;
    let specs = cfg.packet_specs();
    let pair: [GaussianPacketSpec; 2] = [specs[0], specs[1]];

    let norm = build_packet(&pair[0], &grid)?.norm();
    r.gates
        .push(Gate::at_most("packet_norm_error", (norm - 1.0).abs(), 1e-6));

    let xs = [-3.0, 11.0];
    let swapped = [xs[1], xs[0]];
    for species in [Species::Fermion, Species::Boson] {
        let a = symmetrized_value(2, species, &xs, |l, x| pair[l].value(x));
        let b = symmetrized_value(2, species, &swapped, |l, x| pair[l].value(x));
        let sign = if species == Species::Fermion { -1.0 } else { 1.0 };
        r.gates.push(Gate::at_most(
            &format!("{species}_exchange_sign_error"),
            (a - b * sign).norm() / a.norm(),
            1e-12,
        ));
    }

    let coupled = Potential1D::HarmonicPair { c: 1e-4 };
    for species in [Species::Fermion, Species::Boson] {
        let packets = pair.to_vec();
        let rep = swap_symmetry_check(
            |x| ConditionalSet::new(&packets, species, grid, x, Layout::Full),
            &[-25.0, 33.0],
            0,
            1,
            &coupled,
            &prop,
            cfg.ensemble.n_steps(),
            SWAP_TOLERANCE,
        )?;
        r.gates.push(Gate::at_most(
            &format!("{species}_swap_deviation"),
            rep.max_relative_deviation,
            SWAP_TOLERANCE,
        ));
        r.gates.push(Gate::at_least(
            &format!("{species}_swap_status"),
            flag(rep.status == SwapStatus::Pass),
            1.0,
        ));
    }

    for species in [Species::Fermion, Species::Boson] {
        let starts = pair_starts(cfg, species)?;
        let run = free_pair_run(cfg, species, &starts)?;
        r.gates.push(Gate::at_most(
            &format!("{species}_diagonal_crossings"),
            run.ensemble.diagonal_crossings() as f64,
            0.0,
        ));
    }

    let ens = EnsembleConfig {
        n_steps: cfg.ensemble.n_steps(),
        stride: cfg.ensemble.stride,
        seed: cfg.seed,
    };
    let dev = separable_limit_deviation(&pair, Species::Fermion, grid, units, dt, &ens, 100)?;
    r.gates.push(Gate::at_most(
        "separable_limit_position_error_nm",
        dev,
        NODE_POSITION_TOLERANCE,
    ));

    let far = triple(6.0, 10.0, &units);
    let f = ensemble_kinetic_energy(&far, Species::Fermion, &units)?;
    let d = ensemble_kinetic_energy(&far, Species::Distinguishable, &units)?;
    r.gates.push(Gate::at_most(
        "far_triple_kinetic_relative_difference",
        (f / d - 1.0).abs(),
        0.01,
    ));
    let (e, a) = spin_mixed_norm_check(&far, [0.0, 5.0, 5.0]);
    r.gates.push(Gate::at_most("spin_node_density", e.max(a), 1e-30));

    let device = cfg.device.device(0.1);
    let mut rng = rng_from_seed(cfg.seed);
    let mut inj = ContactInjector::new(&device, Contact::Source, &mut rng);
    let mut worst_spacing = f64::INFINITY;
    let mut last = vec![f64::NEG_INFINITY; inj.cells.len()];
    for a in inj.due(&device, 20_000.0, &mut rng) {
        let gap = (a.time - last[a.cell]) / inj.cells[a.cell].t0;
        worst_spacing = worst_spacing.min(gap);
        last[a.cell] = a.time;
    }
    r.gates
        .push(Gate::at_least("injection_spacing_over_t0", worst_spacing, 1.0 - 1e-12));

    let mut noise_rng = rng_from_seed(cfg.seed ^ 0x5eed);
    let white: Vec<f64> = (0..50_000).map(|_| noise_rng.gen_range(-1.0..1.0)).collect();
    let acf = autocorrelation(&CurrentRecord::from_series(1.0, white), 50.0)?;
    let s = power_spectrum(&acf, Window::Bartlett);
    r.gates.push(Gate::at_most(
        "parseval_relative_error",
        (s.integrated_power() / acf.r[0] - 1.0).abs(),
        0.02,
    ));
    r.gates.push(Gate::at_least(
        "spectrum_nonnegative",
        flag(s.psd.iter().all(|&v| v >= -1e-12 * acf.r[0])),
        1.0,
    ));

    let run = run_transport(&device, Interactions::WI, cfg.transport.duration, cfg.seed)?;
    let st = &run.stats;
    r.gates.push(Gate::at_most(
        "charge_bookkeeping_mismatch",
        (st.injected as f64 - st.exited as f64 - st.in_flight as f64).abs(),
        0.0,
    ));
    let net = st.forward_crossings as f64 - st.backward_crossings as f64;
    r.gates.push(Gate::at_most(
        "current_integral_mismatch",
        (run.current.integrated_charge() - net).abs(),
        1e-9,
    ));

    out.csv(
        "properties.csv",
        "check,value,limit,pass",
        r.gates
            .iter()
            .map(|g| format!("{},{},{},{}", g.name, g.value, g.limit, g.pass)),
    )?;
    r.line("checks", r.gates.len());
    Ok(r)
}
