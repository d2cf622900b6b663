use super::trajectory::TrajectoryEnsemble;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Smallest ensemble accepted for energy averages.
pub const MIN_ENSEMBLE: usize = 100;

/// Local energies of one member at one time. A `None` quantum potential
/// marks a particle sitting in a node region.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalEnergies<T> {
    pub k: Vec<T>,
    pub q: Vec<Option<T>>,
    pub v: T,
}

impl<T: Real> LocalEnergies<T> {
    /// K + Q + V when no particle is at a node.
    pub fn total(&self) -> Option<T> {
        let q: Option<T> = self.q.iter().copied().sum();
        q.map(|q| self.k.iter().copied().sum::<T>() + q + self.v)
    }
}

/// Ensemble averages at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyBreakdown<T> {
    pub time: T,
    pub k_per_particle: Vec<T>,
    pub q_per_particle: Vec<T>,
    /// Standard error of each kinetic mean.
    pub k_stderr: Vec<T>,
    pub potential: T,
    pub total: T,
    /// Samples whose quantum potential came from energy conservation.
    pub node_samples: usize,
}

#[derive(Clone, Debug)]
struct Slot<T> {
    k: Vec<T>,
    k2: Vec<T>,
    q: Vec<T>,
    v: T,
    count: usize,
    nodes: usize,
}

/// Running sums for ensemble energies; mergeable across threads.
#[derive(Clone, Debug)]
pub struct EnergyAccumulator<T> {
    n: usize,
    times: Vec<T>,
    slots: Vec<Slot<T>>,
}

impl<T: Real> EnergyAccumulator<T> {
    pub fn new(n_particles: usize, times: Vec<T>) -> Self {
        let slot = Slot {
            k: vec![T::zero(); n_particles],
            k2: vec![T::zero(); n_particles],
            q: vec![T::zero(); n_particles],
            v: T::zero(),
            count: 0,
            nodes: 0,
        };
        Self {
            n: n_particles,
            slots: vec![slot; times.len()],
            times,
        }
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    /// Adds one member's sample. `reference_total` is that member's energy
    /// used to fill node samples as Q = E − K − V.
    pub fn add(&mut self, index: usize, local: &LocalEnergies<T>, reference_total: Option<T>) {
        let s = &mut self.slots[index];
        let k_sum: T = local.k.iter().copied().sum();
        let known_q: T = local.q.iter().flatten().copied().sum();
        let missing = local.q.iter().filter(|q| q.is_none()).count();
        let fill = match (missing, reference_total) {
            (0, _) => T::zero(),
            (m, Some(e)) => (e - k_sum - local.v - known_q) / T::from_usize_lossy(m),
            (_, None) => T::zero(),
        };
        for j in 0..self.n {
            s.k[j] += local.k[j];
            s.k2[j] += local.k[j] * local.k[j];
            s.q[j] += local.q[j].unwrap_or(fill);
        }
        s.v += local.v;
        s.count += 1;
        if missing > 0 {
            s.nodes += 1;
        }
    }

    pub fn merge(&mut self, other: &Self) {
        for (a, b) in self.slots.iter_mut().zip(&other.slots) {
            for j in 0..self.n {
                a.k[j] += b.k[j];
                a.k2[j] += b.k2[j];
                a.q[j] += b.q[j];
            }
            a.v += b.v;
            a.count += b.count;
            a.nodes += b.nodes;
        }
    }

    pub fn finish(&self) -> Result<Vec<EnergyBreakdown<T>>> {
        let m = self.slots.first().map_or(0, |s| s.count);
        if m < MIN_ENSEMBLE {
            return Err(Error::TooFewSamples { m, min: MIN_ENSEMBLE });
        }
        Ok(self
            .slots
            .iter()
            .zip(&self.times)
            .map(|(s, &time)| {
                let c = T::from_usize_lossy(s.count.max(1));
                let k: Vec<T> = s.k.iter().map(|&v| v / c).collect();
                let q: Vec<T> = s.q.iter().map(|&v| v / c).collect();
                let k_stderr = (0..self.n)
                    .map(|j| {
                        let var = (s.k2[j] / c - k[j] * k[j]).max(T::zero());
                        (var / (c - T::one()).max(T::one())).sqrt()
                    })
                    .collect();
                let potential = s.v / c;
                let total = k.iter().copied().sum::<T>() + q.iter().copied().sum::<T>() + potential;
                EnergyBreakdown {
                    time,
                    k_per_particle: k,
                    q_per_particle: q,
                    k_stderr,
                    potential,
                    total,
                    node_samples: s.nodes,
                }
            })
            .collect())
    }
}

/// Ensemble means of the local energies along every trajectory.
/// `local(m, i)` returns member `m`'s local energies at recorded time `i`;
/// node samples are filled from the member's energy at the first time.
pub fn ensemble_energies<T: Real>(
    ens: &TrajectoryEnsemble<T>,
    local: impl Fn(usize, usize) -> LocalEnergies<T>,
) -> Result<Vec<EnergyBreakdown<T>>> {
    let m = ens.members();
    if m < MIN_ENSEMBLE {
        return Err(Error::TooFewSamples { m, min: MIN_ENSEMBLE });
    }
    let mut acc = EnergyAccumulator::new(ens.n_particles, ens.times.clone());
    for member in 0..m {
        let first = local(member, 0);
        let reference = first.total();
        acc.add(0, &first, reference);
        for i in 1..ens.times.len() {
            acc.add(i, &local(member, i), reference);
        }
    }
    acc.finish()
}
