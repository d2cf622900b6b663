//! Scenario configuration files: TOML with a fixed set of sections.
//!
//! A file names its scenario and overrides any subset of that scenario's
//! defaults; `resolve` merges the two and the result is what a run uses
//! and records in its manifest.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use bohmex::GaussianPacketSpec;
use bohmex::UnitSystem;
use bohmex_transport::{DeviceConfig, Interactions};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: cannot read: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    /// Syntax, type or unknown-key error; the message carries the line and
    /// column reported by the parser.
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{path}: key `{key}`: {message}")]
    Invalid {
        path: PathBuf,
        key: String,
        message: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scenario {
    #[serde(rename = "fig1_kinetic_vs_d")]
    KineticVsDistance,
    #[serde(rename = "fig3_free_distinguishable")]
    FreeDistinguishable,
    #[serde(rename = "fig6_fermion_boson_trajectories")]
    FermionBosonTrajectories,
    #[serde(rename = "fig7_energies")]
    IdenticalPairEnergies,
    #[serde(rename = "fig11_12_harmonic_no_exchange")]
    HarmonicNoExchange,
    #[serde(rename = "fig13_14_harmonic_exchange")]
    HarmonicExchange,
    #[serde(rename = "transport_iv")]
    TransportIv,
    #[serde(rename = "transport_noise")]
    TransportNoise,
    #[serde(rename = "appendixB_spin_check")]
    SpinCheck,
    #[serde(rename = "property_suite")]
    PropertySuite,
}

impl Scenario {
    pub const ALL: [Scenario; 10] = [
        Scenario::KineticVsDistance,
        Scenario::FreeDistinguishable,
        Scenario::FermionBosonTrajectories,
        Scenario::IdenticalPairEnergies,
        Scenario::HarmonicNoExchange,
        Scenario::HarmonicExchange,
        Scenario::TransportIv,
        Scenario::TransportNoise,
        Scenario::SpinCheck,
        Scenario::PropertySuite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::KineticVsDistance => "fig1_kinetic_vs_d",
            Scenario::FreeDistinguishable => "fig3_free_distinguishable",
            Scenario::FermionBosonTrajectories => "fig6_fermion_boson_trajectories",
            Scenario::IdenticalPairEnergies => "fig7_energies",
            Scenario::HarmonicNoExchange => "fig11_12_harmonic_no_exchange",
            Scenario::HarmonicExchange => "fig13_14_harmonic_exchange",
            Scenario::TransportIv => "transport_iv",
            Scenario::TransportNoise => "transport_noise",
            Scenario::SpinCheck => "appendixB_spin_check",
            Scenario::PropertySuite => "property_suite",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Scenario::KineticVsDistance => "mean kinetic energy of three packets vs phase-space distance",
            Scenario::FreeDistinguishable => "energies of a free distinguishable pair",
            Scenario::FermionBosonTrajectories => "fermion and boson pair trajectories; diagonal crossings",
            Scenario::IdenticalPairEnergies => "fermion and boson pair energies and kinetic dips",
            Scenario::HarmonicNoExchange => "harmonic pair, conditional vs exact 2D, distinguishable",
            Scenario::HarmonicExchange => "harmonic pair, conditional vs exact 2D, fermions",
            Scenario::TransportIv => "nano-resistor mean current and dwell fractions per bias",
            Scenario::TransportNoise => "nano-resistor current noise spectra and Fano factors",
            Scenario::SpinCheck => "mixed-spin three-electron density vs factorized approximation",
            Scenario::PropertySuite => "quick invariant checks across all modules",
        }
    }

    /// Scenarios whose run ends with pass/fail gates (exit code 2 on
    /// failure).
    pub fn has_gates(self) -> bool {
        !matches!(
            self,
            Scenario::IdenticalPairEnergies | Scenario::TransportIv | Scenario::TransportNoise
        )
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// 1D grid, plus the per-axis size of 2D grids over the same span.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    pub n_points_2d: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            x_min: -400.0,
            x_max: 400.0,
            n_points: 2048,
            n_points_2d: 512,
        }
    }
}

impl GridSection {
    pub fn grid(&self) -> bohmex::Result<bohmex::Grid1D> {
        bohmex::Grid1D::new(self.x_min, self.x_max, self.n_points)
    }

    pub fn grid_2d(&self) -> bohmex::Result<bohmex::Grid1D> {
        bohmex::Grid1D::new(self.x_min, self.x_max, self.n_points_2d)
    }
}

/// A Gaussian packet: centre (nm), central energy (eV), sign of the
/// momentum and width (nm).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PacketSection {
    pub x0: f64,
    pub energy: f64,
    pub direction: f64,
    pub sigma: f64,
}

impl Default for PacketSection {
    fn default() -> Self {
        Self {
            x0: 0.0,
            energy: 0.1,
            direction: 1.0,
            sigma: 25.0,
        }
    }
}

impl PacketSection {
    pub fn spec(&self, units: &UnitSystem) -> GaussianPacketSpec {
        GaussianPacketSpec::from_energy(self.x0, self.energy, self.direction, self.sigma, units)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleSection {
    /// Trajectories per ensemble.
    pub trajectories: usize,
    /// fs.
    pub dt: f64,
    /// fs.
    pub duration: f64,
    /// Steps between recorded samples.
    pub stride: usize,
    /// m*/m₀.
    pub mass_ratio: f64,
    /// Harmonic pair coupling (eV/nm²).
    pub coupling: f64,
    /// Members written to the trajectory CSVs.
    pub saved_members: usize,
}

impl Default for EnsembleSection {
    fn default() -> Self {
        Self {
            trajectories: 4000,
            dt: 0.1,
            duration: 600.0,
            stride: 10,
            mass_ratio: 1.0,
            coupling: 0.0,
            saved_members: 20,
        }
    }
}

impl EnsembleSection {
    pub fn units(&self) -> UnitSystem {
        UnitSystem::with_mass_ratio(self.mass_ratio)
    }

    pub fn n_steps(&self) -> usize {
        (self.duration / self.dt).round() as usize
    }
}

/// Phase-space distances for the three-packet scenarios.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DistanceSection {
    pub values: Vec<f64>,
    /// Packet width (nm).
    pub sigma: f64,
    /// Random points per distance (spin check).
    pub samples: usize,
}

impl Default for DistanceSection {
    fn default() -> Self {
        Self {
            values: vec![0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0],
            sigma: 10.0,
            samples: 1000,
        }
    }
}

/// Device parameters; every field of the transport device model except the
/// bias, which the sweep sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeviceSection {
    pub l_active: f64,
    pub contact_extension: f64,
    pub fermi_level: f64,
    pub subband_offset: f64,
    pub temperature: f64,
    pub mass_eff_ratio: f64,
    pub epsilon_r: f64,
    pub injection_sigma: f64,
    pub injection_offset: f64,
    pub cells_per_contact: usize,
    pub occupation_cutoff: f64,
    pub population_cap: usize,
    pub dx: f64,
    pub dt: f64,
    pub current_bin: f64,
    pub exit_margin: f64,
    pub absorber_width: f64,
    pub absorber_strength: f64,
}

impl Default for DeviceSection {
    fn default() -> Self {
        let d = DeviceConfig::default();
        Self {
            l_active: d.l_active,
            contact_extension: d.contact_extension,
            fermi_level: d.fermi_level,
            subband_offset: d.subband_offset,
            temperature: d.temperature,
            mass_eff_ratio: d.mass_eff_ratio,
            epsilon_r: d.epsilon_r,
            injection_sigma: d.injection_sigma,
            injection_offset: d.injection_offset,
            cells_per_contact: d.cells_per_contact,
            occupation_cutoff: d.occupation_cutoff,
            population_cap: d.population_cap,
            dx: d.dx,
            dt: d.dt,
            current_bin: d.current_bin,
            exit_margin: d.exit_margin,
            absorber_width: d.absorber_width,
            absorber_strength: d.absorber_strength,
        }
    }
}

impl DeviceSection {
    pub fn device(&self, bias: f64) -> DeviceConfig {
        DeviceConfig {
            l_active: self.l_active,
            contact_extension: self.contact_extension,
            fermi_level: self.fermi_level,
            subband_offset: self.subband_offset,
            temperature: self.temperature,
            mass_eff_ratio: self.mass_eff_ratio,
            bias,
            epsilon_r: self.epsilon_r,
            injection_sigma: self.injection_sigma,
            injection_offset: self.injection_offset,
            cells_per_contact: self.cells_per_contact,
            occupation_cutoff: self.occupation_cutoff,
            population_cap: self.population_cap,
            dx: self.dx,
            dt: self.dt,
            current_bin: self.current_bin,
            exit_margin: self.exit_margin,
            absorber_width: self.absorber_width,
            absorber_strength: self.absorber_strength,
        }
    }
}

/// Bias sweep and record processing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransportSection {
    /// V.
    pub biases: Vec<f64>,
    /// Any of "WI", "CI", "EI", "CEI".
    pub interactions: Vec<String>,
    /// Simulated time per run (fs).
    pub duration: f64,
    /// Initial transient dropped before averaging (fs).
    pub trim: f64,
    /// Largest autocorrelation lag (fs).
    pub max_lag: f64,
    /// Batches for the standard error of the mean current.
    pub batches: usize,
}

impl Default for TransportSection {
    fn default() -> Self {
        Self {
            biases: vec![0.0, 0.05, 0.1, 0.2],
            interactions: Interactions::ALL.iter().map(|i| i.to_string()).collect(),
            duration: 12000.0,
            trim: 2000.0,
            max_lag: 1000.0,
            batches: 20,
        }
    }
}

impl TransportSection {
    pub fn parsed_interactions(&self) -> Result<Vec<Interactions>, String> {
        self.interactions
            .iter()
            .map(|s| Interactions::parse(s).ok_or_else(|| format!("unknown interaction flag `{s}`")))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Output directory, relative to the output root; defaults to the
    /// scenario name.
    #[serde(default)]
    pub output_dir: String,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub packets: Vec<PacketSection>,
    #[serde(default)]
    pub ensemble: EnsembleSection,
    #[serde(default)]
    pub distance: DistanceSection,
    #[serde(default)]
    pub device: DeviceSection,
    #[serde(default)]
    pub transport: TransportSection,
}

fn default_seed() -> u64 {
    1
}

fn packet(x0: f64, energy: f64, direction: f64, sigma: f64) -> PacketSection {
    PacketSection {
        x0,
        energy,
        direction,
        sigma,
    }
}

impl ScenarioConfig {
    /// Desk-scale defaults of a scenario.
    pub fn defaults(scenario: Scenario) -> Self {
        let free_pair = vec![packet(50.0, 0.12, -1.0, 25.0), packet(-50.0, 0.08, 1.0, 25.0)];
        let harmonic_pair = vec![packet(50.0, 0.06, -1.0, 25.0), packet(-50.0, 0.04, 1.0, 25.0)];
        let mut c = Self {
            scenario,
            seed: default_seed(),
            output_dir: scenario.name().to_string(),
            grid: GridSection::default(),
            packets: Vec::new(),
            ensemble: EnsembleSection::default(),
            distance: DistanceSection::default(),
            device: DeviceSection {
                population_cap: 48,
                ..DeviceSection::default()
            },
            transport: TransportSection::default(),
        };
        match scenario {
            Scenario::FreeDistinguishable | Scenario::FermionBosonTrajectories | Scenario::IdenticalPairEnergies => {
                c.packets = free_pair;
            }
            Scenario::HarmonicNoExchange | Scenario::HarmonicExchange => {
                c.packets = harmonic_pair;
                c.grid.n_points = 1601;
                c.grid.n_points_2d = 1601;
                c.ensemble.dt = 1.0;
                c.ensemble.duration = 1200.0;
                c.ensemble.stride = 10;
                c.ensemble.coupling = 1e-6;
            }
            Scenario::SpinCheck => {
                c.distance.values = vec![0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0];
            }
            Scenario::TransportNoise => {
                c.transport.biases = vec![0.05, 0.1];
                c.transport.duration = 30000.0;
            }
            Scenario::PropertySuite => {
                c.grid = GridSection {
                    x_min: -200.0,
                    x_max: 200.0,
                    n_points: 801,
                    n_points_2d: 401,
                };
                c.packets = vec![packet(-30.0, 0.04, 1.0, 15.0), packet(30.0, 0.04, -1.0, 15.0)];
                c.ensemble.trajectories = 200;
                c.ensemble.dt = 0.5;
                c.ensemble.duration = 300.0;
                c.ensemble.stride = 10;
                c.transport.duration = 3000.0;
            }
            Scenario::KineticVsDistance | Scenario::TransportIv => {}
        }
        c
    }

    /// Parses `text` (read from `path`) and merges it over the defaults of
    /// the scenario it names.
    pub fn resolve(text: &str, path: &Path) -> Result<Self, ConfigError> {
        let parse_err = |e: toml::de::Error| ConfigError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        // Typed pass for key and type diagnostics with line numbers.
        let typed: ScenarioConfig = toml::from_str(text).map_err(parse_err)?;
        let user: toml::Table = text.parse().map_err(parse_err)?;
        let defaults = Self::defaults(typed.scenario);
        let mut merged = toml::Table::try_from(&defaults).expect("defaults serialize");
        merge(&mut merged, user);
        let cfg: ScenarioConfig = merged.try_into().map_err(parse_err)?;
        cfg.check(path)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::resolve(&text, path)
    }

    /// Value checks the parser cannot express.
    fn check(&self, path: &Path) -> Result<(), ConfigError> {
        let invalid = |key: &str, message: String| ConfigError::Invalid {
            path: path.to_path_buf(),
            key: key.to_string(),
            message,
        };
        if let Err(m) = self.transport.parsed_interactions() {
            return Err(invalid("transport.interactions", m));
        }
        if let Some(b) = self.transport.biases.iter().find(|b| !(**b >= 0.0)) {
            return Err(invalid("transport.biases", format!("bias {b} V must be non-negative")));
        }
        let e = &self.ensemble;
        for (key, v) in [
            ("ensemble.dt", e.dt),
            ("ensemble.duration", e.duration),
            ("ensemble.mass_ratio", e.mass_ratio),
            ("distance.sigma", self.distance.sigma),
            ("transport.duration", self.transport.duration),
            ("transport.max_lag", self.transport.max_lag),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(key, format!("must be positive, got {v}")));
            }
        }
        if e.stride == 0 {
            return Err(invalid("ensemble.stride", "must be at least 1".into()));
        }
        for (i, p) in self.packets.iter().enumerate() {
            if !(p.sigma > 0.0) || !(p.energy >= 0.0) {
                return Err(invalid(
                    &format!("packets[{i}]"),
                    "needs sigma > 0 and energy >= 0".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn packet_specs(&self) -> Vec<GaussianPacketSpec> {
        let u = self.ensemble.units();
        self.packets.iter().map(|p| p.spec(&u)).collect()
    }
}

/// Overwrites `base` with `over`, descending into tables; arrays and
/// scalars are replaced whole.
fn merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}
