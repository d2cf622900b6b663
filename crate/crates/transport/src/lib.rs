//! Monte Carlo simulation of a one-dimensional nano-resistor with Bohmian
//! electrons, and analysis of its current noise.

pub mod device;
pub mod error;
pub mod injection;
pub mod io;
pub mod noise;
pub mod records;
pub mod run;

pub use device::{Contact, DeviceConfig, Interactions, Spin};
pub use error::{Result, TransportError};
pub use injection::{contact_cells, injection_attempts, ContactInjector, Injection, InjectionCell};
pub use noise::{analyze, autocorrelation, power_spectrum, segment_spectra, Autocorrelation, NoiseSpectrum, Window};
pub use records::{batch_statistics, dwell_statistics, CurrentRecord, DwellFractions, FlightRecord};
pub use run::{run_transport, PopulationSample, RunStats, TransportRun};
