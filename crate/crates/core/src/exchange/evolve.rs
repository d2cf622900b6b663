use rayon::prelude::*;

use super::set::{channel_coefficients, conditional_jet, is_node, ConditionalSet, FieldSource, Layout};
use crate::bohm::velocity::q_three_point;
use crate::bohm::{local_kinetic, local_velocity, LocalEnergies};
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::interp::Weights;
use crate::scalar::{Cplx, Real};
use crate::tdse::{Potential1D, Propagator1D};
use crate::units::UnitSystem;

/// Positions and velocities of all particles after one step.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord<T> {
    pub step: usize,
    pub time: T,
    pub positions: Vec<T>,
    pub velocities: Vec<T>,
}

#[inline]
pub(crate) fn cap_velocity<T: Real>(v: T, v_cap: T) -> T {
    if v.is_finite() {
        v.max(-v_cap).min(v_cap)
    } else {
        T::zero()
    }
}

/// Bohmian velocity of every particle of `src` with all particles at `xs`.
pub fn velocities<T: Real, S: FieldSource<T> + ?Sized>(src: &S, xs: &[T], units: &UnitSystem<T>) -> Result<Vec<T>> {
    (0..src.n_particles())
        .map(|a| {
            let c = channel_coefficients(src, a, xs)?;
            Ok(local_velocity(&conditional_jet(src, a, &c, xs[a]), units))
        })
        .collect()
}

fn conditional_value<T: Real, S: FieldSource<T> + ?Sized>(
    src: &S,
    a: usize,
    coeffs: &[Cplx<T>],
    grid: &Grid1D<T>,
    x: T,
) -> Cplx<T> {
    let w = Weights::at(grid, grid.clamp(x));
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > T::zero())
        .map(|(l, c)| src.field(l, a).value_with(&w) * *c)
        .sum()
}

/// Local kinetic and quantum energies of each particle, and the potential
/// energy of the configuration (including `extra` particles that interact
/// but do not exchange).
pub fn local_energies<T: Real, S: FieldSource<T> + ?Sized>(
    src: &S,
    xs: &[T],
    potential: &Potential1D<T>,
    extra: &[T],
    units: &UnitSystem<T>,
) -> Result<LocalEnergies<T>> {
    let n = src.n_particles();
    if n == 0 {
        return Ok(LocalEnergies {
            k: Vec::new(),
            q: Vec::new(),
            v: T::zero(),
        });
    }
    let grid = *src.field(0, 0).grid();
    let h = grid.dx();
    let mut k = Vec::with_capacity(n);
    let mut q = Vec::with_capacity(n);
    for a in 0..n {
        let c = channel_coefficients(src, a, xs)?;
        let jet = conditional_jet(src, a, &c, xs[a]);
        k.push(local_kinetic(&jet, units));
        if is_node(src, a, &c, jet.value) {
            q.push(None);
        } else {
            let lo = conditional_value(src, a, &c, &grid, xs[a] - h).norm();
            let hi = conditional_value(src, a, &c, &grid, xs[a] + h).norm();
            q.push(Some(q_three_point(lo, jet.value.norm(), hi, h, units)));
        }
    }
    let mut all = xs.to_vec();
    all.extend_from_slice(extra);
    let mut v = potential.configuration_energy(&all);
    if !extra.is_empty() {
        // Interactions among the extra particles belong to their own set.
        v -= potential.configuration_energy(extra);
    }
    Ok(LocalEnergies { k, q, v })
}

impl<T: Real> ConditionalSet<T> {
    /// Steps every stored field one time step under its channel potential,
    /// with the other particles frozen at the current positions.
    pub fn step_fields(&mut self, prop: &Propagator1D<T>, potential: &Potential1D<T>, extra: &[T]) -> Result<()> {
        if self.layout() == Layout::Shared && !potential.is_context_free() {
            return Err(Error::InvalidInput(
                "shared-column layout needs a potential independent of the other particles".into(),
            ));
        }
        let n = self.n_particles();
        let t = self.time();
        let xs = self.positions().to_vec();
        let jobs: Vec<(Vec<usize>, Vec<Cplx<T>>)> = (0..n)
            .map(|a| {
                let idx = self.channel_indices(a);
                let f = if idx.is_empty() {
                    Vec::new()
                } else {
                    let mut ctx: Vec<T> = xs
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != a)
                        .map(|(_, &x)| x)
                        .collect();
                    ctx.extend_from_slice(extra);
                    prop.factors(potential, t, &ctx)
                };
                (idx, f)
            })
            .collect();
        let mut owner = vec![usize::MAX; self.stored_fields()];
        for (a, (idx, _)) in jobs.iter().enumerate() {
            for &i in idx {
                owner[i] = a;
            }
        }
        let (fields, maxes) = self.fields_mut();
        let run = |(i, (f, m)): (usize, (&mut crate::field::WaveField1D<T>, &mut T))| -> Result<()> {
            prop.step_with_factors(f, &jobs[owner[i]].1)?;
            *m = f.max_abs();
            Ok(())
        };
        if fields.len() >= 16 {
            fields
                .par_iter_mut()
                .zip(maxes.par_iter_mut())
                .enumerate()
                .try_for_each(run)?;
        } else {
            fields.iter_mut().zip(maxes.iter_mut()).enumerate().try_for_each(run)?;
        }
        self.set_time(t + prop.dt());
        Ok(())
    }

    /// One lockstep update: fields under the step-start positions, then a
    /// Heun update of every trajectory. `v0` are the velocities at the
    /// current positions; the returned velocities belong to the new ones.
    pub fn step(
        &mut self,
        prop: &Propagator1D<T>,
        potential: &Potential1D<T>,
        extra: &[T],
        v0: &[T],
    ) -> Result<Vec<T>> {
        let grid = *self.grid();
        let dt = prop.dt();
        let v_cap = grid.dx() / dt.abs();
        let x0 = self.positions().to_vec();
        let v0: Vec<T> = v0.iter().map(|&v| cap_velocity(v, v_cap)).collect();
        self.step_fields(prop, potential, extra)?;
        let xp: Vec<T> = x0.iter().zip(&v0).map(|(&x, &v)| grid.clamp(x + v * dt)).collect();
        let v1 = velocities(self, &xp, prop.units())?;
        let mut xn = Vec::with_capacity(x0.len());
        for (a, ((&x, &va), &vb)) in x0.iter().zip(&v0).zip(&v1).enumerate() {
            let x1 = x + (va + cap_velocity(vb, v_cap)) * T::lit(0.5) * dt;
            if !grid.contains(x1) {
                return Err(Error::LeftDomain {
                    particle: a,
                    x: x1.to_f64_lossy(),
                });
            }
            xn.push(x1);
        }
        self.set_positions(&xn);
        velocities(self, &xn, prop.units())
    }
}

/// Runs `n_steps` lockstep updates and returns one record per step
/// (step 0 is the initial state).
pub fn evolve_system<T: Real>(
    set: &mut ConditionalSet<T>,
    potential: &Potential1D<T>,
    prop: &Propagator1D<T>,
    n_steps: usize,
) -> Result<Vec<StepRecord<T>>> {
    let units = *prop.units();
    let mut v = velocities(set, set.positions(), &units)?;
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push(StepRecord {
        step: 0,
        time: set.time(),
        positions: set.positions().to_vec(),
        velocities: v.clone(),
    });
    for s in 1..=n_steps {
        v = set.step(prop, potential, &[], &v)?;
        out.push(StepRecord {
            step: s,
            time: set.time(),
            positions: set.positions().to_vec(),
            velocities: v.clone(),
        });
    }
    Ok(out)
}
