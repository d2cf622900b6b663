use super::evolve::{velocities, StepRecord};
use super::set::ConditionalSet;
use crate::error::Result;
use crate::scalar::Real;
use crate::tdse::{Potential1D, Propagator1D};

/// Spin-up and spin-down particles as two independently symmetrized sets.
#[derive(Clone, Debug)]
pub struct SpinChannelSystem<T> {
    pub up: ConditionalSet<T>,
    pub down: ConditionalSet<T>,
    /// Whether pair interactions act across the two channels.
    pub coulomb_coupling: bool,
}

impl<T: Real> SpinChannelSystem<T> {
    /// One lockstep update of both channels from the same step-start
    /// positions. `v` holds the current velocities (up, down).
    pub fn step(
        &mut self,
        potential: &Potential1D<T>,
        prop: &Propagator1D<T>,
        v: (&[T], &[T]),
    ) -> Result<(Vec<T>, Vec<T>)> {
        let (up_x, down_x) = (self.up.positions().to_vec(), self.down.positions().to_vec());
        let (up_extra, down_extra): (&[T], &[T]) = if self.coulomb_coupling {
            (&down_x, &up_x)
        } else {
            (&[], &[])
        };
        let vu = self.up.step(prop, potential, up_extra, v.0)?;
        let vd = self.down.step(prop, potential, down_extra, v.1)?;
        Ok((vu, vd))
    }
}

/// Runs both channels for `n_steps`; exchange acts only inside a channel.
pub fn evolve_spin_channels<T: Real>(
    sys: &mut SpinChannelSystem<T>,
    potential: &Potential1D<T>,
    prop: &Propagator1D<T>,
    n_steps: usize,
) -> Result<(Vec<StepRecord<T>>, Vec<StepRecord<T>>)> {
    let units = *prop.units();
    let mut vu = velocities(&sys.up, sys.up.positions(), &units)?;
    let mut vd = velocities(&sys.down, sys.down.positions(), &units)?;
    let record = |s: &ConditionalSet<T>, step: usize, v: &[T]| StepRecord {
        step,
        time: s.time(),
        positions: s.positions().to_vec(),
        velocities: v.to_vec(),
    };
    let mut up = vec![record(&sys.up, 0, &vu)];
    let mut down = vec![record(&sys.down, 0, &vd)];
    for step in 1..=n_steps {
        let (a, b) = sys.step(potential, prop, (&vu, &vd))?;
        vu = a;
        vd = b;
        up.push(record(&sys.up, step, &vu));
        down.push(record(&sys.down, step, &vd));
    }
    Ok((up, down))
}
