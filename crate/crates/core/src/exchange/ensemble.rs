use rayon::prelude::*;

use super::evolve::{cap_velocity, local_energies, velocities};
use super::set::{ConditionalSet, Layout};
use crate::bohm::{
    local_kinetic, local_velocity, quantum_potential_2d, EnergyAccumulator, EnergyBreakdown, LocalEnergies, Trajectory,
    TrajectoryEnsemble,
};
use crate::error::{Error, Result};
use crate::field::WaveField2D;
use crate::grid::Grid1D;
use crate::manybody::{build_manybody_2d, symmetrized_value};
use crate::packet::{build_packet, GaussianPacketSpec};
use crate::sampling::{metropolis, sample_initial_positions, METROPOLIS_BURN_IN};
use crate::scalar::{Cplx, Real};
use crate::species::Species;
use crate::tdse::{Potential1D, Potential2D, Propagator1D, Propagator2D};
use crate::units::UnitSystem;

/// Largest axis of the grid used to sample two-particle initial states.
pub const SAMPLING_GRID_MAX: usize = 1025;

fn sampling_grid<T: Real>(packets: &[GaussianPacketSpec<T>], grid: &Grid1D<T>) -> Result<Grid1D<T>> {
    let eight = T::lit(8.0);
    let lo = packets
        .iter()
        .map(|p| p.x0 - eight * p.sigma_x)
        .fold(T::infinity(), T::min)
        .max(grid.x_min());
    let hi = packets
        .iter()
        .map(|p| p.x0 + eight * p.sigma_x)
        .fold(T::neg_infinity(), T::max)
        .min(grid.x_max());
    let cells = ((hi - lo) / grid.dx()).ceil().to_usize().unwrap_or(0);
    let n = (cells + 1).clamp(16, SAMPLING_GRID_MAX);
    Grid1D::new(lo, hi, n)
}

/// `m` configurations drawn from the (anti)symmetrized product of
/// `packets`: inverse CDF for one and two particles, Metropolis beyond.
pub fn sample_symmetrized_positions<T: Real>(
    packets: &[GaussianPacketSpec<T>],
    species: Species,
    grid: &Grid1D<T>,
    m: usize,
    seed: u64,
) -> Result<Vec<Vec<T>>> {
    match packets.len() {
        0 => Ok(vec![Vec::new(); m]),
        1 => {
            let psi = build_packet(&packets[0], grid)?;
            Ok(sample_initial_positions(&psi, m, seed)?
                .into_iter()
                .map(|x| vec![x])
                .collect())
        }
        2 => {
            let g = sampling_grid(packets, grid)?;
            let psi = build_manybody_2d(&packets[0], &packets[1], species, &g, &g)?;
            Ok(sample_initial_positions(&psi, m, seed)?
                .into_iter()
                .map(|p| p.to_vec())
                .collect())
        }
        n => {
            super::set::check_packets(packets, species)?;
            let density = |xs: &[T]| {
                if xs.iter().any(|&x| !grid.contains(x)) {
                    return T::zero();
                }
                symmetrized_value(n, species, xs, |l, x| packets[l].value(x)).norm_sqr()
            };
            // Start from the packet centres, nudged apart so fermion nodes
            // do not trap the walker.
            let start: Vec<T> = packets
                .iter()
                .enumerate()
                .map(|(l, p)| p.x0 + p.sigma_x * T::lit(0.1) * T::from_usize_lossy(l))
                .collect();
            let step = packets.iter().map(|p| p.sigma_x).fold(T::zero(), T::max) * T::lit(0.5);
            Ok(metropolis(&start, step, METROPOLIS_BURN_IN, m, seed, density))
        }
    }
}

/// Samples `m` configurations; with `mirrored` set, draws `m / 2` and adds
/// each with the first two coordinates interchanged.
pub fn sample_ensemble_positions<T: Real>(
    packets: &[GaussianPacketSpec<T>],
    species: Species,
    grid: &Grid1D<T>,
    m: usize,
    seed: u64,
    mirrored: bool,
) -> Result<Vec<Vec<T>>> {
    if !mirrored || packets.len() < 2 {
        return sample_symmetrized_positions(packets, species, grid, m, seed);
    }
    let half = sample_symmetrized_positions(packets, species, grid, m.div_ceil(2), seed)?;
    let mut out = Vec::with_capacity(m);
    for x in half {
        let mut y = x.clone();
        y.swap(0, 1);
        out.push(x);
        if out.len() < m {
            out.push(y);
        }
    }
    Ok(out)
}

/// Ensemble run settings.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleConfig {
    pub n_steps: usize,
    /// Positions and energies are recorded every `stride` steps.
    pub stride: usize,
    pub seed: u64,
}

impl EnsembleConfig {
    pub fn recorded_steps(&self) -> Vec<usize> {
        (0..=self.n_steps).step_by(self.stride.max(1)).collect()
    }
}

/// Trajectories and energy averages of one ensemble run.
#[derive(Clone, Debug)]
pub struct EnsembleRun<T> {
    pub ensemble: TrajectoryEnsemble<T>,
    pub energies: Vec<EnergyBreakdown<T>>,
}

fn new_trajectories<T: Real>(m: usize, seed: u64, xs: &[T], vs: &[T]) -> Vec<Trajectory<T>> {
    let n = xs.len();
    (0..n)
        .map(|j| Trajectory::new(m * n + j, j, seed, xs[j], vs[j]))
        .collect()
}

fn push_all<T: Real>(trajs: &mut [Trajectory<T>], xs: &[T], vs: &[T]) {
    for (t, (&x, &v)) in trajs.iter_mut().zip(xs.iter().zip(vs)) {
        t.push(x, v);
    }
}

fn finish_run<T: Real>(
    acc: EnergyAccumulator<T>,
    trajectories: Vec<Trajectory<T>>,
    species: Species,
    n: usize,
    times: Vec<T>,
) -> Result<EnsembleRun<T>> {
    Ok(EnsembleRun {
        energies: acc.finish()?,
        ensemble: TrajectoryEnsemble {
            times,
            species,
            n_particles: n,
            trajectories,
        },
    })
}

fn recorded_times<T: Real>(cfg: &EnsembleConfig, dt: T) -> Vec<T> {
    cfg.recorded_steps()
        .into_iter()
        .map(|s| dt * T::from_usize_lossy(s))
        .collect()
}

/// One conditional set per member, each evolved independently (members in
/// parallel). Required when the potential couples the particles.
pub fn run_conditional_ensemble<T: Real>(
    packets: &[GaussianPacketSpec<T>],
    species: Species,
    layout: Layout,
    potential: &Potential1D<T>,
    prop: &Propagator1D<T>,
    starts: &[Vec<T>],
    cfg: &EnsembleConfig,
) -> Result<EnsembleRun<T>> {
    let n = packets.len();
    let units = *prop.units();
    let grid = *prop.grid();
    let times = recorded_times(cfg, prop.dt());
    let stride = cfg.stride.max(1);
    // Members run in parallel; their samples are summed in member order so
    // the averages do not depend on the thread schedule.
    let runs: Vec<(Vec<Trajectory<T>>, Vec<LocalEnergies<T>>, Option<T>)> = starts
        .par_iter()
        .enumerate()
        .map(|(m, x0)| -> Result<_> {
            let mut set = ConditionalSet::new(packets, species, grid, x0.clone(), layout)?;
            let mut v = velocities(&set, set.positions(), &units)?;
            let mut trajs = new_trajectories(m, cfg.seed, x0, &v);
            let local = local_energies(&set, set.positions(), potential, &[], &units)?;
            let reference = local.total();
            let mut locals = Vec::with_capacity(times.len());
            locals.push(local);
            for s in 1..=cfg.n_steps {
                v = set.step(prop, potential, &[], &v)?;
                if s % stride == 0 {
                    locals.push(local_energies(&set, set.positions(), potential, &[], &units)?);
                    push_all(&mut trajs, set.positions(), &v);
                }
            }
            Ok((trajs, locals, reference))
        })
        .collect::<Result<_>>()?;
    let mut acc = EnergyAccumulator::new(n, times.clone());
    let mut trajectories = Vec::with_capacity(runs.len() * n);
    for (trajs, locals, reference) in runs {
        for (i, l) in locals.iter().enumerate() {
            acc.add(i, l, reference);
        }
        trajectories.extend(trajs);
    }
    finish_run(acc, trajectories, species, n, times)
}

struct TimeMajor<'a, T> {
    grids: Vec<Grid1D<T>>,
    dt: T,
    stride: usize,
    n_steps: usize,
    seed: u64,
    times: &'a [T],
}

impl<T: Real> TimeMajor<'_, T> {
    /// Lockstep Heun loop over all members with one shared state `S`.
    fn run<S: Sync>(
        &self,
        state: &mut S,
        starts: &[Vec<T>],
        mut advance: impl FnMut(&mut S) -> Result<()>,
        vel: impl Fn(&S, &[T]) -> Result<Vec<T>> + Sync,
        local: impl Fn(&S, &[T]) -> Result<LocalEnergies<T>> + Sync,
    ) -> Result<(EnergyAccumulator<T>, Vec<Trajectory<T>>)> {
        let n = self.grids.len();
        let dt = self.dt;
        let caps: Vec<T> = self.grids.iter().map(|g| g.dx() / dt.abs()).collect();
        let mut acc = EnergyAccumulator::new(n, self.times.to_vec());
        let mut xs: Vec<Vec<T>> = starts.to_vec();
        let mut vs: Vec<Vec<T>> = xs.par_iter().map(|x| vel(state, x)).collect::<Result<_>>()?;
        let mut trajs: Vec<Vec<Trajectory<T>>> = xs
            .iter()
            .zip(&vs)
            .enumerate()
            .map(|(m, (x, v))| new_trajectories(m, self.seed, x, v))
            .collect();
        let locals: Vec<LocalEnergies<T>> = xs.par_iter().map(|x| local(state, x)).collect::<Result<_>>()?;
        let refs: Vec<Option<T>> = locals.iter().map(|l| l.total()).collect();
        for (l, r) in locals.iter().zip(&refs) {
            acc.add(0, l, *r);
        }
        for s in 1..=self.n_steps {
            let predicted: Vec<Vec<T>> = xs
                .iter()
                .zip(&vs)
                .map(|(x, v)| {
                    (0..n)
                        .map(|j| self.grids[j].clamp(x[j] + cap_velocity(v[j], caps[j]) * dt))
                        .collect()
                })
                .collect();
            advance(state)?;
            let st: &S = state;
            let updated: Vec<(Vec<T>, Vec<T>)> = xs
                .par_iter()
                .zip(vs.par_iter())
                .zip(predicted.par_iter())
                .map(|((x, v0), xp)| -> Result<(Vec<T>, Vec<T>)> {
                    let v1 = vel(st, xp)?;
                    let mut xn = Vec::with_capacity(n);
                    for j in 0..n {
                        let va = cap_velocity(v0[j], caps[j]);
                        let vb = cap_velocity(v1[j], caps[j]);
                        let x1 = x[j] + (va + vb) * T::lit(0.5) * dt;
                        if !self.grids[j].contains(x1) {
                            return Err(Error::LeftDomain {
                                particle: j,
                                x: x1.to_f64_lossy(),
                            });
                        }
                        xn.push(x1);
                    }
                    let vn = vel(st, &xn)?;
                    Ok((xn, vn))
                })
                .collect::<Result<_>>()?;
            for (i, (x, v)) in updated.into_iter().enumerate() {
                xs[i] = x;
                vs[i] = v;
            }
            if s % self.stride == 0 {
                let locals: Vec<LocalEnergies<T>> = xs.par_iter().map(|x| local(st, x)).collect::<Result<_>>()?;
                for (m, l) in locals.iter().enumerate() {
                    push_all(&mut trajs[m], &xs[m], &vs[m]);
                    acc.add(s / self.stride, l, refs[m]);
                }
            }
        }
        Ok((acc, trajs.into_iter().flatten().collect()))
    }
}

/// All members share one bank of N fields evolved once per step; valid only
/// for potentials that ignore the other particles.
pub fn run_shared_ensemble<T: Real>(
    packets: &[GaussianPacketSpec<T>],
    species: Species,
    potential: &Potential1D<T>,
    prop: &Propagator1D<T>,
    starts: &[Vec<T>],
    cfg: &EnsembleConfig,
) -> Result<EnsembleRun<T>> {
    if !potential.is_context_free() {
        return Err(Error::InvalidInput(
            "shared ensemble needs a potential independent of the other particles".into(),
        ));
    }
    let n = packets.len();
    let units = *prop.units();
    let grid = *prop.grid();
    let times = recorded_times(cfg, prop.dt());
    let driver = TimeMajor {
        grids: vec![grid; n],
        dt: prop.dt(),
        stride: cfg.stride.max(1),
        n_steps: cfg.n_steps,
        seed: cfg.seed,
        times: &times,
    };
    let first = starts.first().cloned().unwrap_or_else(|| vec![T::zero(); n]);
    let mut bank = ConditionalSet::new(packets, species, grid, first, Layout::Shared)?;
    let (acc, trajectories) = driver.run(
        &mut bank,
        starts,
        |b| b.step_fields(prop, potential, &[]),
        |b, x| velocities(b, x, &units),
        |b, x| local_energies(b, x, potential, &[], &units),
    )?;
    finish_run(acc, trajectories, species, n, times)
}

fn exact_velocity<T: Real>(psi: &WaveField2D<T>, x: &[T], units: &UnitSystem<T>) -> Vec<T> {
    let jet = psi.jet_at(x[0], x[1]);
    vec![
        local_velocity(&jet.along(0), units),
        local_velocity(&jet.along(1), units),
    ]
}

fn exact_local<T: Real>(
    psi: &WaveField2D<T>,
    max_abs: T,
    x: &[T],
    potential: &Potential2D<T>,
    units: &UnitSystem<T>,
) -> LocalEnergies<T> {
    let jet = psi.jet_at(x[0], x[1]);
    let k = vec![local_kinetic(&jet.along(0), units), local_kinetic(&jet.along(1), units)];
    let q = (0..2)
        .map(|j| quantum_potential_2d(psi, [x[0], x[1]], j, max_abs, units).ok())
        .collect();
    LocalEnergies {
        k,
        q,
        v: potential.evaluate(x[0], x[1], psi.time()),
    }
}

/// Two-particle trajectories guided by the full configuration-space wave
/// function, stepped once per time step for all members.
pub fn run_exact_2d_ensemble<T: Real>(
    psi0: &WaveField2D<T>,
    species: Species,
    prop: &Propagator2D<T>,
    units: &UnitSystem<T>,
    starts: &[Vec<T>],
    cfg: &EnsembleConfig,
) -> Result<EnsembleRun<T>> {
    let times = recorded_times(cfg, prop.dt());
    let driver = TimeMajor {
        grids: vec![*psi0.grid_x1(), *psi0.grid_x2()],
        dt: prop.dt(),
        stride: cfg.stride.max(1),
        n_steps: cfg.n_steps,
        seed: cfg.seed,
        times: &times,
    };
    let potential = prop.potential();
    let mut state = (psi0.clone(), psi0.max_abs());
    let (acc, trajectories) = driver.run(
        &mut state,
        starts,
        |(psi, m)| {
            prop.step(psi)?;
            *m = psi.max_abs();
            Ok(())
        },
        |(psi, _), x| Ok(exact_velocity(psi, x, units)),
        |(psi, m), x| Ok(exact_local(psi, *m, x, potential, units)),
    )?;
    finish_run(acc, trajectories, species, 2, times)
}

/// Per-particle kinetic means of a conditional-set run compared with a
/// second run on the same time grid: RMS over time of the relative
/// deviation, per particle.
pub fn kinetic_rms_deviation<T: Real>(a: &[EnergyBreakdown<T>], b: &[EnergyBreakdown<T>]) -> Vec<T> {
    let n = a.first().map_or(0, |e| e.k_per_particle.len());
    (0..n)
        .map(|j| {
            let (mut num, mut den) = (T::zero(), T::zero());
            for (x, y) in a.iter().zip(b) {
                let d = x.k_per_particle[j] - y.k_per_particle[j];
                num += d * d;
                den += y.k_per_particle[j] * y.k_per_particle[j];
            }
            if den > T::zero() {
                (num / den).sqrt()
            } else {
                T::zero()
            }
        })
        .collect()
}

/// Fields required per member by `layout` for `n` particles.
pub fn fields_per_member(layout: Layout, n: usize) -> usize {
    match layout {
        Layout::Full => n * n,
        Layout::Diagonal | Layout::Shared => n,
    }
}

impl<T: Real> ConditionalSet<T> {
    /// Bytes held by the stored amplitudes.
    pub fn amplitude_bytes(&self) -> usize {
        self.stored_fields() * self.grid().n_points() * std::mem::size_of::<Cplx<T>>()
    }
}
