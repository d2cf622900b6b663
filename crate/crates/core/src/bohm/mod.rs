//! Bohmian velocities, quantum potential, trajectory integration and
//! ensemble energy bookkeeping.

mod energies;
mod trajectory;
pub(crate) mod velocity;

pub use energies::{ensemble_energies, EnergyAccumulator, EnergyBreakdown, LocalEnergies, MIN_ENSEMBLE};
pub use trajectory::{advance_trajectory, heun_step, Trajectory, TrajectoryEnsemble};
pub use velocity::{
    local_kinetic, local_velocity, node_threshold, quantum_potential, quantum_potential_2d, velocity_field,
    FieldSample, NODE_FRACTION,
};
