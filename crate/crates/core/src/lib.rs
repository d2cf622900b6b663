//! Many-particle Bohmian trajectories with exchange symmetry.
//!
//! The numerical core is generic over the real scalar (`f32` or `f64`); the
//! aliases at the bottom of this file fix it to `f64`.

pub mod bohm;
pub mod error;
pub mod exchange;
pub mod field;
pub mod gaussian;
pub mod grid;
pub mod interp;
pub mod linalg;
pub mod manybody;
pub mod packet;
pub mod sampling;
pub mod scalar;
pub mod species;
pub mod tdse;
pub mod units;

pub use error::{Error, Result};
pub use field::{Jet, Jet2};
pub use gaussian::{ensemble_kinetic_energy, phase_space_distance, spin_mixed_norm_check};
pub use manybody::build_manybody_2d;
pub use packet::build_packet;
pub use sampling::sample_initial_positions;
pub use scalar::{Cplx, Real};
pub use species::Species;

pub type Grid1D = grid::Grid1D<f64>;
pub type WaveField1D = field::WaveField1D<f64>;
pub type WaveField2D = field::WaveField2D<f64>;
pub type GaussianPacketSpec = packet::GaussianPacketSpec<f64>;
pub type UnitSystem = units::UnitSystem<f64>;
