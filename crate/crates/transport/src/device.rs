//! Nano-resistor geometry, contact statistics and numerical settings.

use std::fmt;

use bohmex::tdse::{Boundary, Potential1D, Propagator1D, PropagatorConfig};
use bohmex::units::BOLTZMANN_EV_PER_K;
use bohmex::{Grid1D, UnitSystem};

use crate::error::{Result, TransportError};

/// Packets must fit this many widths inside the simulated contacts.
pub const PACKET_SPAN_SIGMAS: f64 = 6.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Contact {
    Source,
    Drain,
}

impl Contact {
    pub fn label(self) -> &'static str {
        match self {
            Contact::Source => "S",
            Contact::Drain => "D",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn flipped(self) -> Self {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Spin::Up => "up",
            Spin::Down => "down",
        }
    }
}

/// Which interactions act among the electrons in flight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Interactions {
    /// Independent electrons.
    WI,
    /// Coulomb only.
    CI,
    /// Exchange only.
    EI,
    /// Coulomb and exchange.
    CEI,
}

impl Interactions {
    pub const ALL: [Interactions; 4] = [Interactions::WI, Interactions::CI, Interactions::EI, Interactions::CEI];

    pub fn coulomb(self) -> bool {
        matches!(self, Interactions::CI | Interactions::CEI)
    }

    pub fn exchange(self) -> bool {
        matches!(self, Interactions::EI | Interactions::CEI)
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "WI" => Some(Interactions::WI),
            "CI" => Some(Interactions::CI),
            "EI" => Some(Interactions::EI),
            "CEI" => Some(Interactions::CEI),
            _ => None,
        }
    }
}

impl fmt::Display for Interactions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Interactions::WI => "WI",
            Interactions::CI => "CI",
            Interactions::EI => "EI",
            Interactions::CEI => "CEI",
        };
        f.write_str(s)
    }
}

/// Device, contact and discretization parameters. Lengths in nm, energies
/// in eV, times in fs.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviceConfig {
    /// Length of the active region [0, l_active].
    pub l_active: f64,
    /// Simulated contact length on each side of the active region.
    pub contact_extension: f64,
    pub fermi_level: f64,
    /// Bottom of the first subband.
    pub subband_offset: f64,
    /// Kelvin.
    pub temperature: f64,
    pub mass_eff_ratio: f64,
    /// Volts; the drain sits `bias` eV below the source.
    pub bias: f64,
    pub epsilon_r: f64,
    pub injection_sigma: f64,
    /// Distance of the injected packet centres from the active region.
    pub injection_offset: f64,
    pub cells_per_contact: usize,
    /// Occupation below which states are not injected.
    pub occupation_cutoff: f64,
    pub population_cap: usize,
    pub dx: f64,
    pub dt: f64,
    /// Width of the current bins.
    pub current_bin: f64,
    /// An electron that has visited the active region leaves once it is
    /// this far outside it.
    pub exit_margin: f64,
    /// Width and peak of the absorbing layers at both grid ends.
    pub absorber_width: f64,
    pub absorber_strength: f64,
}

impl Default for DeviceConfig {
    fn default() -> Self {
        Self {
            l_active: 30.0,
            contact_extension: 250.0,
            fermi_level: 0.15,
            subband_offset: 0.13,
            temperature: 300.0,
            mass_eff_ratio: 0.067,
            bias: 0.0,
            epsilon_r: 12.9,
            injection_sigma: 25.0,
            injection_offset: 100.0,
            cells_per_contact: 32,
            occupation_cutoff: 1e-6,
            population_cap: 32,
            dx: 1.0,
            dt: 0.4,
            current_bin: 1.0,
            exit_margin: 50.0,
            absorber_width: 50.0,
            absorber_strength: 0.1,
        }
    }
}

impl DeviceConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("l_active", self.l_active),
            ("contact_extension", self.contact_extension),
            ("temperature", self.temperature),
            ("mass_eff_ratio", self.mass_eff_ratio),
            ("epsilon_r", self.epsilon_r),
            ("injection_sigma", self.injection_sigma),
            ("injection_offset", self.injection_offset),
            ("occupation_cutoff", self.occupation_cutoff),
            ("dx", self.dx),
            ("dt", self.dt),
            ("current_bin", self.current_bin),
            ("exit_margin", self.exit_margin),
            ("absorber_width", self.absorber_width),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(TransportError::InvalidConfig(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(self.fermi_level.is_finite() && self.subband_offset.is_finite() && self.bias.is_finite()) {
            return Err(TransportError::InvalidConfig("non-finite energy".into()));
        }
        if self.bias < 0.0 || self.absorber_strength < 0.0 {
            return Err(TransportError::InvalidConfig(
                "bias and absorber strength must be non-negative".into(),
            ));
        }
        if self.cells_per_contact == 0 || self.population_cap == 0 {
            return Err(TransportError::InvalidConfig(
                "cells_per_contact and population_cap must be at least 1".into(),
            ));
        }
        if self.occupation_cutoff >= 1.0 {
            return Err(TransportError::InvalidConfig(
                "occupation_cutoff must be below 1".into(),
            ));
        }
        let need = self.injection_offset + PACKET_SPAN_SIGMAS * self.injection_sigma;
        if self.contact_extension < need {
            return Err(TransportError::Core(bohmex::Error::GridTooNarrow {
                x0: -self.injection_offset,
                sigma: self.injection_sigma,
                need_lo: -need,
                need_hi: self.l_active + need,
                x_min: -self.contact_extension,
                x_max: self.l_active + self.contact_extension,
            }));
        }
        if self.far_exit() + self.absorber_width > self.contact_extension {
            return Err(TransportError::InvalidConfig(format!(
                "exit planes at {} nm from the active region overlap the absorbing layer",
                self.far_exit()
            )));
        }
        if self.exit_margin > self.injection_offset {
            return Err(TransportError::InvalidConfig(
                "exit_margin must not exceed injection_offset".into(),
            ));
        }
        Ok(())
    }

    pub fn units(&self) -> UnitSystem {
        UnitSystem::with_mass_ratio(self.mass_eff_ratio)
    }

    pub fn kt(&self) -> f64 {
        BOLTZMANN_EV_PER_K * self.temperature
    }

    /// Fermi–Dirac occupation of a state with kinetic energy `e` above the
    /// subband bottom.
    pub fn occupation(&self, e: f64) -> f64 {
        let z = (e + self.subband_offset - self.fermi_level) / self.kt();
        1.0 / (1.0 + z.exp())
    }

    /// Kinetic energy at which the occupation drops to the cutoff.
    pub fn cutoff_energy(&self) -> f64 {
        let c = self.occupation_cutoff;
        (self.fermi_level - self.subband_offset + self.kt() * ((1.0 - c) / c).ln()).max(0.0)
    }

    pub fn k_max(&self) -> f64 {
        self.units().k_of_energy(self.cutoff_energy())
    }

    pub fn grid(&self) -> Result<Grid1D> {
        let lo = -self.contact_extension;
        let hi = self.l_active + self.contact_extension;
        let n = ((hi - lo) / self.dx).round() as usize + 1;
        Ok(Grid1D::new(lo, hi, n)?)
    }

    pub fn propagator(&self) -> Result<Propagator1D<f64>> {
        let cfg = PropagatorConfig::new(self.dt).with_boundary(Boundary::Cap {
            strength: self.absorber_strength,
            width: self.absorber_width,
        });
        let grid = self.grid()?;
        cfg.validate(&grid)?;
        Ok(Propagator1D::new(grid, cfg, self.units())?)
    }

    /// Injection centre of a contact.
    pub fn injection_centre(&self, c: Contact) -> f64 {
        match c {
            Contact::Source => -self.injection_offset,
            Contact::Drain => self.l_active + self.injection_offset,
        }
    }

    /// Distance from the active region at which electrons that never
    /// entered it are dropped.
    pub fn far_exit(&self) -> f64 {
        self.injection_offset + 2.0 * self.injection_sigma
    }

    pub fn potential(&self, interactions: Interactions) -> Potential1D<f64> {
        let ramp = Potential1D::LinearRamp {
            bias: self.bias,
            length: self.l_active,
        };
        if interactions.coulomb() {
            Potential1D::Sum(vec![ramp, Potential1D::coulomb_for_grid(self.epsilon_r, self.dx)])
        } else {
            ramp
        }
    }

    /// Largest phase advance per step, ω_max·dt, for the fastest injected
    /// state after falling down the full bias.
    pub fn max_phase_advance(&self) -> f64 {
        (self.cutoff_energy() + self.bias) * self.dt / self.units().hbar
    }
}
