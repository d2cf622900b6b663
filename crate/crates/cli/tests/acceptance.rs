//! Acceptance criteria at desk scale. Prints one PASS/FAIL line per
//! criterion.
//!
//! `BOHMEX_ACCEPTANCE_ONLY=1,7,11` runs a subset. By default the binary
//! exits 0 whatever the outcome so that `cargo test` reports the table;
//! `BOHMEX_ACCEPTANCE_STRICT=1` turns any FAIL into a non-zero exit.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete};

use bohmex::exchange::{
    run_conditional_ensemble, run_exact_2d_ensemble, sample_ensemble_positions, swap_symmetry_check, ConditionalSet,
    EnsembleConfig, EnsembleRun, Layout, SwapStatus,
};
use bohmex::linalg::determinant;
use bohmex::sampling::rng_from_seed;
use bohmex::tdse::{Potential1D, Potential2D, Propagator1D, Propagator2D, PropagatorConfig};
use bohmex::{build_manybody_2d, ensemble_kinetic_energy, GaussianPacketSpec, Grid1D, Species, UnitSystem};
use bohmex_cli::scenarios::free::{free_pair_run, kinetic_dip, pair_starts, total_energy_drift};
use bohmex_cli::scenarios::harmonic::{harmonic_comparison, max_kinetic_separation};
use bohmex_cli::scenarios::static_checks::{far_deviation, kinetic_vs_distance, rises_monotonically, triple};
use bohmex_cli::scenarios::transport::{high_frequency_excess, mean_and_stderr, paired_difference};
use bohmex_cli::{Scenario, ScenarioConfig};
use bohmex_transport::{
    analyze, injection_attempts, run_transport, Contact, ContactInjector, CurrentRecord, DeviceConfig, InjectionCell,
    Interactions, Spin, TransportRun,
};

const ENERGY_TOLERANCE: f64 = 0.02;
const C1_BUDGET: Duration = Duration::from_secs(5 * 60);
const C2_BUDGET: Duration = Duration::from_secs(10 * 60);
const SWAP_TOLERANCE: f64 = 1e-6;
const SWAP_CONFIGURATIONS: usize = 100;
const SEPARABLE_TOLERANCE_NM: f64 = 0.1;
const SEPARABLE_SPAN_FS: f64 = 500.0;
const SEPARABLE_MEMBERS: usize = 100;
const RMS_TOLERANCE_DISTINGUISHABLE: f64 = 0.05;
const RMS_TOLERANCE_EXCHANGE: f64 = 0.15;
const INDISTINGUISHABILITY_SIGMAS: f64 = 3.0;
const FERMION_DIP_EV: f64 = 0.022;
const BOSON_DIP_EV: f64 = 0.019;
const DIP_TOLERANCE: f64 = 0.20;
const SEPARATION_SIGMAS: f64 = 3.0;
const PAULI_FAR_TOLERANCE: f64 = 0.01;
const QUADRATURE_TOLERANCE: f64 = 0.01;
const CHI_SQUARE_ALPHA: f64 = 0.01;
const INJECTION_WINDOWS: usize = 10_000;
/// Relative rounding allowed when an attempt time phase + n·t0 is
/// compared with the quantum itself.
const CLOCK_ROUNDING: f64 = 1e-12;
const POISSON_FANO_TOLERANCE: f64 = 0.05;
const THINNED_FANO_TOLERANCE: f64 = 0.10;
const PARSEVAL_TOLERANCE: f64 = 0.02;
const TRANSPORT_BIASES: [f64; 4] = [0.0, 0.05, 0.1, 0.2];
const PEAK_BIAS: f64 = 0.1;
const TRANSPORT_DURATION_FS: f64 = 30_000.0;
const SWEEP_BUDGET: Duration = Duration::from_secs(2 * 3600);
const POPULATION_DURATION_FS: f64 = 100_000.0;
const POPULATION_RANGE: (f64, f64) = (15.0, 30.0);
const POPULATION_BUDGET: Duration = Duration::from_secs(4 * 3600);

type Verdict = (bool, String);
type Check = Result<Verdict, Box<dyn std::error::Error>>;

struct Shared {
    identical: Option<(EnsembleRun<f64>, EnsembleRun<f64>, Duration)>,
}

impl Shared {
    /// Fermion and boson free-pair ensembles at the figure defaults.
    fn identical_runs(&mut self) -> Result<&(EnsembleRun<f64>, EnsembleRun<f64>, Duration), bohmex_cli::CliError> {
        if self.identical.is_none() {
            let cfg = ScenarioConfig::defaults(Scenario::FermionBosonTrajectories);
            let start = Instant::now();
            let run = |s| free_pair_run(&cfg, s, &pair_starts(&cfg, s)?);
            let f = run(Species::Fermion)?;
            let b = run(Species::Boson)?;
            self.identical = Some((f, b, start.elapsed()));
        }
        Ok(self.identical.as_ref().unwrap())
    }
}

fn free_pair_energies() -> Check {
    let cfg = ScenarioConfig::defaults(Scenario::FreeDistinguishable);
    let start = Instant::now();
    let s = Species::Distinguishable;
    let run = free_pair_run(&cfg, s, &pair_starts(&cfg, s)?)?;
    let elapsed = start.elapsed();
    let last = run.energies.last().unwrap();
    let k_err: Vec<f64> = cfg
        .packets
        .iter()
        .zip(&last.k_per_particle)
        .map(|(p, k)| (k / p.energy - 1.0).abs())
        .collect();
    let drift = total_energy_drift(&run.energies, 0.2);
    let pass = k_err.iter().all(|e| *e <= ENERGY_TOLERANCE) && drift <= ENERGY_TOLERANCE && elapsed <= C1_BUDGET;
    Ok((
        pass,
        format!(
            "K1 {:.4} eV, K2 {:.4} eV (rel. err {:.3}, {:.3}; tol {ENERGY_TOLERANCE}), total drift {drift:.4} (tol {ENERGY_TOLERANCE}), M = {}, {:.0} s (budget {} s)",
            last.k_per_particle[0],
            last.k_per_particle[1],
            k_err[0],
            k_err[1],
            run.ensemble.members(),
            elapsed.as_secs_f64(),
            C1_BUDGET.as_secs()
        ),
    ))
}

fn non_crossing(shared: &mut Shared) -> Check {
    let (f, b, elapsed) = shared.identical_runs()?;
    let (cf, cb) = (f.ensemble.diagonal_crossings(), b.ensemble.diagonal_crossings());
    Ok((
        cf == 0 && cb == 0 && *elapsed <= C2_BUDGET,
        format!(
            "crossings: fermion {cf} of {}, boson {cb} of {}; {:.0} s (budget {} s)",
            f.ensemble.members(),
            b.ensemble.members(),
            elapsed.as_secs_f64(),
            C2_BUDGET.as_secs()
        ),
    ))
}

fn packet(x0: f64, e0: f64, dir: f64, sigma: f64, u: &UnitSystem) -> GaussianPacketSpec {
    GaussianPacketSpec::from_energy(x0, e0, dir, sigma, u)
}

fn swap_symmetry() -> Check {
    let u = UnitSystem::free_electron();
    let grid = Grid1D::new(-200.0, 200.0, 801)?;
    let prop = Propagator1D::new(grid, PropagatorConfig::new(0.5), u)?;
    let coupling = Potential1D::HarmonicPair { c: 1e-4 };
    let pair = vec![packet(-30.0, 0.04, 1.0, 15.0, &u), packet(30.0, 0.04, -1.0, 15.0, &u)];
    let three = vec![
        packet(-30.0, 0.05, 1.0, 12.0, &u),
        packet(0.0, 0.02, -1.0, 12.0, &u),
        packet(35.0, 0.04, -1.0, 12.0, &u),
    ];
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    let mut checked = 0;
    for (packets, steps) in [(&pair, 200), (&three, 120)] {
        let n = packets.len();
        for species in [Species::Fermion, Species::Boson] {
            let starts = sample_ensemble_positions(packets, species, &grid, SWAP_CONFIGURATIONS, 31, false)?;
            for (i, x) in starts.iter().enumerate() {
                let (j, h) = (i % n, (i + 1) % n);
                let rep = swap_symmetry_check(
                    |x| ConditionalSet::new(packets, species, grid, x, Layout::Full),
                    x,
                    j.min(h),
                    j.max(h),
                    &coupling,
                    &prop,
                    steps,
                    SWAP_TOLERANCE,
                )?;
                worst = worst.max(rep.max_relative_deviation);
                failures += usize::from(rep.status != SwapStatus::Pass);
                checked += 1;
            }
        }
    }
    Ok((
        failures == 0 && worst <= SWAP_TOLERANCE,
        format!("{checked} configurations (N = 2 and 3, fermions and bosons), max relative deviation {worst:.2e} (tol {SWAP_TOLERANCE:e}), {failures} failed"),
    ))
}

fn separable_limit() -> Check {
    let u = UnitSystem::free_electron();
    let grid = Grid1D::new(-300.0, 300.0, 1201)?;
    let dt = 0.5;
    let packets = [packet(50.0, 0.12, -1.0, 25.0, &u), packet(-50.0, 0.08, 1.0, 25.0, &u)];
    let ens = EnsembleConfig {
        n_steps: (SEPARABLE_SPAN_FS / dt) as usize,
        stride: 10,
        seed: 5,
    };
    let prop = Propagator1D::new(grid, PropagatorConfig::new(dt), u)?;
    let p2 = Propagator2D::new(
        grid,
        grid,
        PropagatorConfig::new(dt),
        u,
        Potential2D::Separable(Potential1D::Free, Potential1D::Free),
    )?;
    let mut parts = Vec::new();
    let mut worst: f64 = 0.0;
    for species in [Species::Fermion, Species::Boson] {
        let starts = sample_ensemble_positions(&packets, species, &grid, SEPARABLE_MEMBERS, ens.seed, true)?;
        let cond = run_conditional_ensemble(
            &packets,
            species,
            Layout::Full,
            &Potential1D::Free,
            &prop,
            &starts,
            &ens,
        )?;
        let psi = build_manybody_2d(&packets[0], &packets[1], species, &grid, &grid)?;
        let exact = run_exact_2d_ensemble(&psi, species, &p2, &u, &starts, &ens)?;
        let err = cond
            .ensemble
            .trajectories
            .iter()
            .zip(&exact.ensemble.trajectories)
            .flat_map(|(a, b)| a.positions.iter().zip(&b.positions).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max);
        worst = worst.max(err);
        parts.push(format!("{species} {err:.2e} nm"));
    }
    Ok((
        worst <= SEPARABLE_TOLERANCE_NM,
        format!(
            "L-inf position error over {SEPARABLE_SPAN_FS} fs, {SEPARABLE_MEMBERS} pairs: {} (tol {SEPARABLE_TOLERANCE_NM} nm)",
            parts.join(", ")
        ),
    ))
}

fn harmonic_without_exchange() -> Check {
    let cfg = ScenarioConfig::defaults(Scenario::HarmonicNoExchange);
    let c = harmonic_comparison(&cfg, Species::Distinguishable)?;
    let worst = c.rms_deviation.iter().cloned().fold(0.0, f64::max);
    Ok((
        worst <= RMS_TOLERANCE_DISTINGUISHABLE,
        format!(
            "RMS relative deviation K1 {:.4}, K2 {:.4} over {} fs (tol {RMS_TOLERANCE_DISTINGUISHABLE}), M = {}",
            c.rms_deviation[0], c.rms_deviation[1], cfg.ensemble.duration, cfg.ensemble.trajectories
        ),
    ))
}

fn harmonic_with_exchange() -> Check {
    let cfg = ScenarioConfig::defaults(Scenario::HarmonicExchange);
    let c = harmonic_comparison(&cfg, Species::Fermion)?;
    let worst = c.rms_deviation.iter().cloned().fold(0.0, f64::max);
    let sep = max_kinetic_separation(&c.conditional.energies);
    Ok((
        worst <= RMS_TOLERANCE_EXCHANGE && sep <= INDISTINGUISHABILITY_SIGMAS,
        format!(
            "max |K1 - K2| = {sep:.2} standard errors (tol {INDISTINGUISHABILITY_SIGMAS}), RMS relative deviation K1 {:.4}, K2 {:.4} (tol {RMS_TOLERANCE_EXCHANGE})",
            c.rms_deviation[0], c.rms_deviation[1]
        ),
    ))
}

fn near_diagonal_dips(shared: &mut Shared) -> Check {
    let (f, b, _) = shared.identical_runs()?;
    let (df, db) = (kinetic_dip(&f.energies), kinetic_dip(&b.energies));
    let ef = (df.kinetic / FERMION_DIP_EV - 1.0).abs();
    let eb = (db.kinetic / BOSON_DIP_EV - 1.0).abs();
    let sigmas = (df.kinetic - db.kinetic) / df.stderr.hypot(db.stderr);
    Ok((
        ef <= DIP_TOLERANCE && eb <= DIP_TOLERANCE && sigmas >= SEPARATION_SIGMAS,
        format!(
            "fermion dip {:.4} eV at {:.0} fs (rel. err {ef:.2}), boson dip {:.4} eV at {:.0} fs (rel. err {eb:.2}; tol {DIP_TOLERANCE}), fermion - boson = {sigmas:.1} sigma (need {SEPARATION_SIGMAS})",
            df.kinetic, df.time, db.kinetic, db.time
        ),
    ))
}

// Direct 3D trapezoid quadrature of the antisymmetrized kinetic energy with
// analytic orbital derivatives.
fn quadrature_kinetic(p: &[GaussianPacketSpec; 3], u: &UnitSystem, n: usize) -> f64 {
    let lo = p.iter().map(|q| q.x0 - 7.0 * q.sigma_x).fold(f64::INFINITY, f64::min);
    let hi = p
        .iter()
        .map(|q| q.x0 + 7.0 * q.sigma_x)
        .fold(f64::NEG_INFINITY, f64::max);
    let h = (hi - lo) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| lo + h * i as f64).collect();
    let phi: Vec<[Complex64; 3]> = xs
        .iter()
        .map(|&x| [p[0].value(x), p[1].value(x), p[2].value(x)])
        .collect();
    let dphi: Vec<[Complex64; 3]> = xs
        .iter()
        .zip(&phi)
        .map(|(&x, f)| {
            std::array::from_fn(|l| f[l] * Complex64::new(-(x - p[l].x0) / (p[l].sigma_x * p[l].sigma_x), p[l].k0))
        })
        .collect();
    let (mut norm, mut kin) = (0.0, 0.0);
    let mut m = [Complex64::new(0.0, 0.0); 9];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let idx = [i, j, k];
                for l in 0..3 {
                    for c in 0..3 {
                        m[l * 3 + c] = phi[idx[c]][l];
                    }
                }
                norm += determinant(&m, 3).norm_sqr();
                for c in 0..3 {
                    let mut md = m;
                    for l in 0..3 {
                        md[l * 3 + c] = dphi[idx[c]][l];
                    }
                    kin += determinant(&md, 3).norm_sqr();
                }
            }
        }
    }
    0.5 * u.hbar2_over_m() * kin / norm
}

fn pauli_rise() -> Check {
    let cfg = ScenarioConfig::defaults(Scenario::KineticVsDistance);
    let u = cfg.ensemble.units();
    let sigma = cfg.distance.sigma;
    let points = kinetic_vs_distance(&cfg.distance.values, sigma, &u)?;
    let far = far_deviation(&points);
    let rises = rises_monotonically(&points);
    let mut worst_oracle: f64 = 0.0;
    for d in [0.5, 1.0, 1.5] {
        let p = triple(d, sigma, &u);
        let analytic = ensemble_kinetic_energy(&p, Species::Fermion, &u)?;
        worst_oracle = worst_oracle.max((quadrature_kinetic(&p, &u, 70) / analytic - 1.0).abs());
    }
    Ok((
        far <= PAULI_FAR_TOLERANCE && rises && worst_oracle <= QUADRATURE_TOLERANCE,
        format!(
            "d >= 4 deviation {far:.2e} (tol {PAULI_FAR_TOLERANCE}), monotonic rise below d = 2: {rises}, quadrature oracle at d = 0.5, 1, 1.5 within {worst_oracle:.2e} (tol {QUADRATURE_TOLERANCE})"
        ),
    ))
}

fn injection_statistics() -> Check {
    let device = DeviceConfig::default();
    let (m, f) = (20u64, 0.3);
    let mut cell = InjectionCell::new(Contact::Source, 0.2, 0.225, 0.36, f);
    let mut spin = Spin::Up;
    let mut rng = rng_from_seed(5);
    let mut hist = vec![0usize; m as usize + 1];
    for _ in 0..INJECTION_WINDOWS {
        let tau = m as f64 * cell.t0;
        hist[injection_attempts(&device, &mut cell, tau, &mut spin, &mut rng).len()] += 1;
    }
    let law = Binomial::new(f, m)?;
    // Tails pooled so that every expected count is at least 5.
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for (k, &h) in hist.iter().enumerate() {
        obs += h as f64;
        exp += law.pmf(k as u64) * INJECTION_WINDOWS as f64;
        if exp >= 5.0 {
            bins.push((obs, exp));
            (obs, exp) = (0.0, 0.0);
        }
    }
    if let Some(last) = bins.last_mut() {
        last.0 += obs;
        last.1 += exp;
    }
    let chi2: f64 = bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = (bins.len() - 1) as f64;
    let critical = ChiSquared::new(dof)?.inverse_cdf(1.0 - CHI_SQUARE_ALPHA);

    let device = DeviceConfig {
        bias: 0.1,
        ..DeviceConfig::default()
    };
    let mut worst_spacing = f64::INFINITY;
    let mut injections = 0;
    for contact in [Contact::Source, Contact::Drain] {
        let mut rng = rng_from_seed(9);
        let mut inj = ContactInjector::new(&device, contact, &mut rng);
        let mut last = vec![f64::NEG_INFINITY; inj.cells.len()];
        for a in inj.due(&device, 100_000.0, &mut rng) {
            worst_spacing = worst_spacing.min((a.time - last[a.cell]) / inj.cells[a.cell].t0);
            last[a.cell] = a.time;
            injections += 1;
        }
    }
    Ok((
        chi2 < critical && worst_spacing >= 1.0 - CLOCK_ROUNDING,
        format!(
            "chi2 {chi2:.2} < {critical:.2} ({dof} dof, alpha {CHI_SQUARE_ALPHA}, {INJECTION_WINDOWS} windows); min spacing / t0 = {worst_spacing:.15} over {injections} injections"
        ),
    ))
}

fn noise_pipeline() -> Check {
    let n = 1_000_000;
    let rate = 0.05;
    let mut rng = rng_from_seed(3);
    let law = Poisson::new(rate)?;
    let poisson = CurrentRecord::from_series(1.0, (0..n).map(|_| law.sample(&mut rng)).collect());
    let (r, s) = analyze(&poisson, 0.0, 100.0)?;
    let poisson_fano = s.fano_factor()?;
    let mut parseval = (s.integrated_power() / r.r[0] - 1.0).abs();
    let mut pass = (poisson_fano - 1.0).abs() <= POISSON_FANO_TOLERANCE;
    let mut parts = vec![format!("Poisson Fano {poisson_fano:.4} (tol {POISSON_FANO_TOLERANCE})")];
    for (f, seed) in [(0.3, 4), (0.8, 5)] {
        let t0 = 7.3;
        let mut rng = rng_from_seed(seed);
        let mut counts = vec![0.0; n];
        let mut k = 0u64;
        loop {
            let t = 0.37 + k as f64 * t0;
            if t >= n as f64 {
                break;
            }
            if rng.gen::<f64>() < f {
                counts[t as usize] += 1.0;
            }
            k += 1;
        }
        let (r, s) = analyze(&CurrentRecord::from_series(1.0, counts), 0.0, 100.0)?;
        let fano = s.fano_factor()?;
        parseval = parseval.max((s.integrated_power() / r.r[0] - 1.0).abs());
        pass &= (fano / (1.0 - f) - 1.0).abs() <= THINNED_FANO_TOLERANCE;
        parts.push(format!(
            "thinned f = {f}: Fano {fano:.4} vs {:.2} (tol {THINNED_FANO_TOLERANCE})",
            1.0 - f
        ));
    }
    pass &= parseval <= PARSEVAL_TOLERANCE;
    parts.push(format!("Parseval error {parseval:.2e} (tol {PARSEVAL_TOLERANCE})"));
    Ok((pass, parts.join(", ")))
}

fn transport_ordering() -> Check {
    let cfg = ScenarioConfig::defaults(Scenario::TransportNoise);
    let t = &cfg.transport;
    let start = Instant::now();
    let run = |bias: f64, i: Interactions| -> Result<TransportRun, bohmex_transport::TransportError> {
        run_transport(&cfg.device.device(bias), i, TRANSPORT_DURATION_FS, cfg.seed)
    };
    let mut pass = true;
    let mut parts = Vec::new();
    let mut at_peak = None;
    for bias in TRANSPORT_BIASES {
        let wi = run(bias, Interactions::WI)?;
        let ci = run(bias, Interactions::CI)?;
        let (d, se) = paired_difference(&wi, &ci, t.trim, t.batches);
        let sigmas = if se > 0.0 { d / se } else { 0.0 };
        pass &= sigmas >= SEPARATION_SIGMAS;
        parts.push(format!("I_WI - I_CI at {bias} V: {d:.2e} = {sigmas:.1} sigma"));
        if bias == 0.0 {
            let ei = run(bias, Interactions::EI)?;
            let reflected = |r: &TransportRun| r.flights.iter().filter(|f| f.entry == f.exit).count();
            let (n_ei, n_wi) = (reflected(&ei), reflected(&wi));
            let dwell = bohmex_transport::dwell_statistics(&ei.flights);
            // A Poisson count of at least 9 is 3 sigma from zero.
            pass &= (n_ei as f64) >= SEPARATION_SIGMAS * SEPARATION_SIGMAS && n_wi == 0;
            parts.push(format!(
                "zero bias reflected flights EI {n_ei} (d_SS + d_DD = {:.3}), WI {n_wi}",
                dwell.s_to_s + dwell.d_to_d
            ));
        }
        if bias == PEAK_BIAS {
            at_peak = Some((wi, ci));
        }
    }
    let (wi, ci) = at_peak.expect("peak bias is swept");
    let ei = run(PEAK_BIAS, Interactions::EI)?;
    let cei = run(PEAK_BIAS, Interactions::CEI)?;
    let excess = |r: &TransportRun| high_frequency_excess(r, t.trim);
    for (a, b, name) in [(&wi, &ci, "WI - CI"), (&ei, &cei, "EI - CEI")] {
        let (xa, xb) = (excess(a)?, excess(b)?);
        let d: Vec<f64> = xa.iter().zip(&xb).map(|(p, q)| p - q).collect();
        let (m, se) = mean_and_stderr(&d);
        let sigmas = m / se;
        pass &= sigmas >= SEPARATION_SIGMAS;
        parts.push(format!(
            "2-8 THz peak excess {name} at {PEAK_BIAS} V: {m:.2e} = {sigmas:.1} sigma"
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed <= SWEEP_BUDGET;
    parts.push(format!(
        "need {SEPARATION_SIGMAS} sigma each; sweep {:.0} s (budget {} s)",
        elapsed.as_secs_f64(),
        SWEEP_BUDGET.as_secs()
    ));
    Ok((pass, parts.join("; ")))
}

fn population_scaling() -> Check {
    let device = DeviceConfig {
        bias: 0.1,
        injection_offset: 250.0,
        contact_extension: 400.0,
        population_cap: 64,
        ..DeviceConfig::default()
    };
    let start = Instant::now();
    let run = run_transport(&device, Interactions::CEI, POPULATION_DURATION_FS, 1)?;
    let elapsed = start.elapsed();
    let mean = run.stats.mean_in_flight;
    // Two spin channels of about n/2 electrons hold 2(n/2)² fields.
    let fields = mean * mean / 2.0;
    Ok((
        (POPULATION_RANGE.0..=POPULATION_RANGE.1).contains(&mean) && elapsed <= POPULATION_BUDGET,
        format!(
            "CEI for {POPULATION_DURATION_FS} fs: mean in flight {mean:.1} (range {:?}), max {}, about {fields:.0} conditional fields; {:.0} s (budget {} s)",
            POPULATION_RANGE,
            run.stats.max_in_flight,
            elapsed.as_secs_f64(),
            POPULATION_BUDGET.as_secs()
        ),
    ))
}

fn main() -> ExitCode {
    let only: Option<Vec<usize>> = std::env::var("BOHMEX_ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|v| v.trim().parse().ok()).collect());
    let strict = std::env::var("BOHMEX_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let mut shared = Shared { identical: None };
    let criteria: [(usize, &str); 12] = [
        (1, "free distinguishable pair energies"),
        (2, "fermion and boson trajectories never cross the diagonal"),
        (3, "swap symmetry of identical-particle trajectories"),
        (4, "separable limit matches the exact 2D solution"),
        (5, "harmonic pair without exchange matches the exact 2D solution"),
        (6, "harmonic fermion pair: indistinguishable and close to exact"),
        (7, "near-diagonal kinetic dips, bosons below fermions"),
        (8, "Pauli kinetic-energy rise with phase-space distance"),
        (9, "injection statistics and clock spacing"),
        (10, "noise pipeline on synthetic trains"),
        (11, "transport ordinal properties"),
        (12, "population scaling of a CEI run"),
    ];
    let mut failed = 0;
    for (id, name) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let start = Instant::now();
        let outcome = match id {
            1 => free_pair_energies(),
            2 => non_crossing(&mut shared),
            3 => swap_symmetry(),
            4 => separable_limit(),
            5 => harmonic_without_exchange(),
            6 => harmonic_with_exchange(),
            7 => near_diagonal_dips(&mut shared),
            8 => pauli_rise(),
            9 => injection_statistics(),
            10 => noise_pipeline(),
            11 => transport_ordering(),
            _ => population_scaling(),
        };
        let (pass, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        failed += usize::from(!pass);
        println!(
            "C{id:02} {} {name}: {detail} [{:.1} s]",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {failed} criteria failed");
    if strict && failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
