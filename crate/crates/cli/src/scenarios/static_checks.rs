//! Closed-form three-packet scenarios: kinetic energy against phase-space
//! distance, and the mixed-spin density check.

use rand::Rng;

use bohmex::sampling::rng_from_seed;
use bohmex::{ensemble_kinetic_energy, spin_mixed_norm_check, GaussianPacketSpec, Species, UnitSystem};

use super::{Gate, Report};
use crate::config::ScenarioConfig;
use crate::output::Output;
use crate::Result;

/// Distance above which fermions must match distinguishable particles.
pub const FAR_DISTANCE: f64 = 4.0;
/// Distance below which the fermion excess must grow monotonically.
pub const NEAR_DISTANCE: f64 = 2.0;
pub const FAR_TOLERANCE: f64 = 0.01;
/// Spin-check tolerance for well-separated packets.
pub const SEPARATED_DISTANCE: f64 = 3.0;
pub const SPIN_TOLERANCE: f64 = 1e-3;

/// Three packets of width `sigma` with pairwise phase-space distance `d`
/// from the first: the others sit at ∓σd with wave vector d/σ.
pub fn triple(d: f64, sigma: f64, units: &UnitSystem) -> [GaussianPacketSpec; 3] {
    let (dx, dk) = (sigma * d, d / sigma);
    [
        GaussianPacketSpec::from_k(0.0, 0.0, sigma, units),
        GaussianPacketSpec::from_k(-dx, dk, sigma, units),
        GaussianPacketSpec::from_k(dx, dk, sigma, units),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KineticPoint {
    pub d: f64,
    pub fermion: f64,
    pub boson: f64,
    pub distinguishable: f64,
}

impl KineticPoint {
    pub fn fermion_excess(&self) -> f64 {
        self.fermion / self.distinguishable - 1.0
    }
}

pub fn kinetic_vs_distance(values: &[f64], sigma: f64, units: &UnitSystem) -> Result<Vec<KineticPoint>> {
    values
        .iter()
        .map(|&d| {
            let p = triple(d, sigma, units);
            Ok(KineticPoint {
                d,
                fermion: ensemble_kinetic_energy(&p, Species::Fermion, units)?,
                boson: ensemble_kinetic_energy(&p, Species::Boson, units)?,
                distinguishable: ensemble_kinetic_energy(&p, Species::Distinguishable, units)?,
            })
        })
        .collect()
}

/// Largest relative fermion/distinguishable difference at d ≥ FAR_DISTANCE.
pub fn far_deviation(points: &[KineticPoint]) -> f64 {
    points
        .iter()
        .filter(|p| p.d >= FAR_DISTANCE)
        .map(|p| p.fermion_excess().abs())
        .fold(0.0, f64::max)
}

/// Whether the fermion excess is positive and strictly grows as d falls
/// below NEAR_DISTANCE.
pub fn rises_monotonically(points: &[KineticPoint]) -> bool {
    let mut near: Vec<&KineticPoint> = points.iter().filter(|p| p.d < NEAR_DISTANCE).collect();
    near.sort_by(|a, b| a.d.total_cmp(&b.d));
    near.len() >= 2
        && near.iter().all(|p| p.fermion_excess() > 0.0)
        && near.windows(2).all(|w| w[0].fermion_excess() > w[1].fermion_excess())
}

pub fn run_kinetic_vs_distance(cfg: &ScenarioConfig, out: &mut Output) -> Result<Report> {
    let units = cfg.ensemble.units();
    let points = kinetic_vs_distance(&cfg.distance.values, cfg.distance.sigma, &units)?;
    out.csv(
        "kinetic_vs_d.csv",
        "d,T_fermion_eV,T_boson_eV,T_distinguishable_eV",
        points
            .iter()
            .map(|p| format!("{},{},{},{}", p.d, p.fermion, p.boson, p.distinguishable)),
    )?;
    let mut r = Report::default();
    r.line("points", points.len());
    r.gates.push(Gate::at_most(
        "far_relative_deviation",
        far_deviation(&points),
        FAR_TOLERANCE,
    ));
    r.gates.push(Gate::at_least(
        "near_monotonic_rise",
        f64::from(u8::from(rises_monotonically(&points))),
        1.0,
    ));
    Ok(r)
}

/// Relative deviation of the factorized density at random points within
/// one width of each packet centre.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinDeviation {
    pub d: f64,
    pub samples: usize,
    pub max_relative: f64,
    pub mean_relative: f64,
}

pub fn spin_deviation(d: f64, sigma: f64, samples: usize, seed: u64, units: &UnitSystem) -> SpinDeviation {
    let p = triple(d, sigma, units);
    let mut rng = rng_from_seed(seed);
    let (mut max, mut sum, mut n) = (0.0f64, 0.0, 0usize);
    while n < samples {
        let x = [
            p[0].x0 + sigma * rng.gen_range(-1.0..1.0),
            p[1].x0 + sigma * rng.gen_range(-1.0..1.0),
            p[2].x0 + sigma * rng.gen_range(-1.0..1.0),
        ];
        let (exact, approx) = spin_mixed_norm_check(&p, x);
        if !(exact > 0.0) {
            continue;
        }
        let rel = ((exact - approx) / exact).abs();
        max = max.max(rel);
        sum += rel;
        n += 1;
    }
    SpinDeviation {
        d,
        samples,
        max_relative: max,
        mean_relative: sum / samples as f64,
    }
}

pub fn run_spin_check(cfg: &ScenarioConfig, out: &mut Output) -> Result<Report> {
    let units = cfg.ensemble.units();
    let dist = &cfg.distance;
    let rows: Vec<SpinDeviation> = dist
        .values
        .iter()
        .enumerate()
        .map(|(i, &d)| spin_deviation(d, dist.sigma, dist.samples, cfg.seed.wrapping_add(i as u64), &units))
        .collect();
    out.csv(
        "spin_check.csv",
        "d,samples,max_relative_deviation,mean_relative_deviation",
        rows.iter()
            .map(|s| format!("{},{},{},{}", s.d, s.samples, s.max_relative, s.mean_relative)),
    )?;
    let mut r = Report::default();
    let separated = rows
        .iter()
        .filter(|s| s.d > SEPARATED_DISTANCE)
        .map(|s| s.max_relative)
        .fold(0.0, f64::max);
    r.gates
        .push(Gate::at_most("separated_relative_deviation", separated, SPIN_TOLERANCE));
    // Two ↓ electrons at one point: both densities vanish.
    let p = triple(1.0, dist.sigma, &units);
    let (e, a) = spin_mixed_norm_check(&p, [p[0].x0, p[1].x0, p[1].x0]);
    r.gates.push(Gate::at_most("down_pair_node", e.max(a), 1e-30));
    if let Some(s) = rows.iter().min_by(|a, b| a.d.total_cmp(&b.d)) {
        r.line("closest_d", s.d);
        r.line("closest_max_relative_deviation", s.max_relative);
    }
    Ok(r)
}
