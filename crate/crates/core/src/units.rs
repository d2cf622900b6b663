//! Physical constants and the (eV, nm, fs) unit system.
//!
//! Everything in the crate is expressed in electron-volts, nanometres and
//! femtoseconds. Masses never appear directly; the combination ħ²/m (eV·nm²)
//! is what the kinetic operator needs.

use crate::scalar::Real;

/// Reduced Planck constant in eV·fs (CODATA 2018).
pub const HBAR_EV_FS: f64 = 0.6582119569;
/// ħc in eV·nm (CODATA 2018).
pub const HBAR_C_EV_NM: f64 = 197.3269804;
/// Electron rest energy m₀c² in eV (CODATA 2018).
pub const ELECTRON_REST_ENERGY_EV: f64 = 510998.95;
/// ħ²/m₀ in eV·nm², i.e. (ħc)²/(m₀c²).
pub const HBAR2_OVER_M0: f64 = HBAR_C_EV_NM * HBAR_C_EV_NM / ELECTRON_REST_ENERGY_EV;
/// e²/(4πε₀) in eV·nm.
pub const COULOMB_EV_NM: f64 = 1.439964548;
/// Boltzmann constant in eV/K.
pub const BOLTZMANN_EV_PER_K: f64 = 8.617333262e-5;
/// GaAs effective-mass ratio m*/m₀.
pub const GAAS_MASS_RATIO: f64 = 0.067;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitSystem<T> {
    /// ħ in eV·fs.
    pub hbar: T,
    /// ħ²/m₀ in eV·nm².
    pub mass_free: T,
    /// m*/m₀.
    pub mass_eff_ratio: T,
}

impl<T: Real> UnitSystem<T> {
    /// Free electrons (m* = m₀).
    pub fn free_electron() -> Self {
        Self::with_mass_ratio(T::one())
    }

    pub fn with_mass_ratio(ratio: T) -> Self {
        assert!(ratio > T::zero(), "mass ratio must be positive");
        Self {
            hbar: T::lit(HBAR_EV_FS),
            mass_free: T::lit(HBAR2_OVER_M0),
            mass_eff_ratio: ratio,
        }
    }

    pub fn gaas() -> Self {
        Self::with_mass_ratio(T::lit(GAAS_MASS_RATIO))
    }

    /// ħ²/m* in eV·nm².
    #[inline]
    pub fn hbar2_over_m(&self) -> T {
        self.mass_free / self.mass_eff_ratio
    }

    /// ħ/m* in nm²/fs.
    #[inline]
    pub fn hbar_over_m(&self) -> T {
        self.hbar2_over_m() / self.hbar
    }

    /// m* in eV·fs²/nm².
    #[inline]
    pub fn mass(&self) -> T {
        self.hbar * self.hbar / self.hbar2_over_m()
    }

    /// Central energy (ħk)²/(2m*) of a wave vector.
    #[inline]
    pub fn energy_of_k(&self, k: T) -> T {
        self.hbar2_over_m() * k * k / T::lit(2.0)
    }

    /// Magnitude of the wave vector with kinetic energy `energy`.
    #[inline]
    pub fn k_of_energy(&self, energy: T) -> T {
        (T::lit(2.0) * energy / self.hbar2_over_m()).sqrt()
    }

    /// Group velocity ħk/m* in nm/fs.
    #[inline]
    pub fn velocity_of_k(&self, k: T) -> T {
        self.hbar_over_m() * k
    }
}

impl<T: Real> Default for UnitSystem<T> {
    fn default() -> Self {
        Self::free_electron()
    }
}
