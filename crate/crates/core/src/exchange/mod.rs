//! Conditional-wave-function algorithm for identical particles.

mod ensemble;
mod evolve;
pub mod io;
mod set;
mod spin;
mod symmetry;

pub use ensemble::{
    fields_per_member, kinetic_rms_deviation, run_conditional_ensemble, run_exact_2d_ensemble, run_shared_ensemble,
    sample_ensemble_positions, sample_symmetrized_positions, EnsembleConfig, EnsembleRun, SAMPLING_GRID_MAX,
};
pub use evolve::{evolve_system, local_energies, velocities, StepRecord};
pub use set::{
    assemble_conditional, channel_coefficients, check_packets, cofactor_coefficients, combine, conditional_jet,
    direct_assembly, init_conditional_set, is_node, ConditionalSet, FieldSource, Layout, TrajectoryMatrix,
    NULL_ASSEMBLY_NORM,
};
pub use spin::{evolve_spin_channels, SpinChannelSystem};
pub use symmetry::{swap_symmetry_check, SwapReport, SwapStatus};
