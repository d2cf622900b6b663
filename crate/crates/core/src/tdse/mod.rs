//! Unitary propagation of one- and two-coordinate wave fields.

mod expectation;
mod potential;
mod propagate;
mod tridiag;

pub use expectation::{expectation_1d, expectation_2d, kinetic_energy_1d, Observable};
pub use potential::{Potential1D, Potential2D, Quadratic};
pub use propagate::{
    phase_factors_1d, step_1d, step_2d, Boundary, Propagator1D, Propagator2D, PropagatorConfig, Stencil,
};
pub use tridiag::ConstTridiag;
