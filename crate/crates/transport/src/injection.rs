//! Contact injection: k-space cells, attempt clocks and binomial acceptance.

use rand::Rng;
use rand_distr::StandardNormal;

use bohmex::GaussianPacketSpec;

use crate::device::{Contact, DeviceConfig, Spin};

/// One k-space cell of a contact with its own attempt clock.
#[derive(Clone, Debug, PartialEq)]
pub struct InjectionCell {
    pub contact: Contact,
    pub k_lo: f64,
    pub k_hi: f64,
    /// Minimum separation between two injections from this cell.
    pub t0: f64,
    pub next_attempt_time: f64,
    pub fermi_occupation: f64,
    phase: f64,
    attempts: u64,
}

impl InjectionCell {
    /// Cell [k_lo, k_hi] with group velocity `v_centre` at its centre.
    pub fn new(contact: Contact, k_lo: f64, k_hi: f64, v_centre: f64, fermi_occupation: f64) -> Self {
        let t0 = std::f64::consts::PI / (v_centre * (k_hi - k_lo));
        Self {
            contact,
            k_lo,
            k_hi,
            t0,
            next_attempt_time: 0.0,
            fermi_occupation: fermi_occupation.clamp(0.0, 1.0),
            phase: 0.0,
            attempts: 0,
        }
    }

    /// Shifts the clock so that the first attempt happens at `phase`.
    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self.attempts = 0;
        self.next_attempt_time = phase;
        self
    }

    pub fn k_centre(&self) -> f64 {
        0.5 * (self.k_lo + self.k_hi)
    }

    pub fn attempts_made(&self) -> u64 {
        self.attempts
    }

    /// Makes the next attempt; returns its time if accepted.
    pub fn attempt<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Option<f64> {
        let t = self.next_attempt_time;
        self.attempts += 1;
        self.next_attempt_time = self.phase + self.attempts as f64 * self.t0;
        (rng.gen::<f64>() < self.fermi_occupation).then_some(t)
    }
}

/// Equally wide cells over [0, k_max] for one contact, clocks at zero.
pub fn contact_cells(cfg: &DeviceConfig, contact: Contact) -> Vec<InjectionCell> {
    let units = cfg.units();
    let n = cfg.cells_per_contact;
    let dk = cfg.k_max() / n as f64;
    (0..n)
        .map(|j| {
            let (lo, hi) = (j as f64 * dk, (j + 1) as f64 * dk);
            let kc = 0.5 * (lo + hi);
            InjectionCell::new(
                contact,
                lo,
                hi,
                units.velocity_of_k(kc),
                cfg.occupation(units.energy_of_k(kc)),
            )
        })
        .collect()
}

/// An accepted injection: the packet, its sampled start and its spin.
#[derive(Clone, Debug, PartialEq)]
pub struct Injection {
    pub contact: Contact,
    pub cell: usize,
    pub time: f64,
    pub spin: Spin,
    pub packet: GaussianPacketSpec,
    pub x_start: f64,
}

/// Packet of a cell: centred at the contact offset, moving into the device.
pub fn injected_packet(cfg: &DeviceConfig, cell: &InjectionCell) -> GaussianPacketSpec {
    let k = match cell.contact {
        Contact::Source => cell.k_centre(),
        Contact::Drain => -cell.k_centre(),
    };
    GaussianPacketSpec::from_k(cfg.injection_centre(cell.contact), k, cfg.injection_sigma, &cfg.units())
}

fn accept<R: Rng + ?Sized>(
    cfg: &DeviceConfig,
    cell: &InjectionCell,
    index: usize,
    time: f64,
    spin: &mut Spin,
    rng: &mut R,
) -> Injection {
    let packet = injected_packet(cfg, cell);
    // |ψ|² of the packet is a normal density of width σ/√2.
    let z: f64 = rng.sample(StandardNormal);
    let x_start = packet.x0 + z * packet.sigma_x * std::f64::consts::FRAC_1_SQRT_2;
    let s = *spin;
    *spin = spin.flipped();
    Injection {
        contact: cell.contact,
        cell: index,
        time,
        spin: s,
        packet,
        x_start,
    }
}

/// Runs the floor(τ/t0) attempts of a window of length `tau` starting at
/// the cell's clock.
pub fn injection_attempts<R: Rng + ?Sized>(
    cfg: &DeviceConfig,
    cell: &mut InjectionCell,
    tau: f64,
    spin: &mut Spin,
    rng: &mut R,
) -> Vec<Injection> {
    let m = (tau / cell.t0 * (1.0 + 1e-12)).floor() as u64;
    let mut out = Vec::new();
    for _ in 0..m {
        if let Some(t) = cell.attempt(rng) {
            out.push(accept(cfg, cell, 0, t, spin, rng));
        }
    }
    out
}

/// All cells of one contact plus its spin alternation.
#[derive(Clone, Debug)]
pub struct ContactInjector {
    pub contact: Contact,
    pub cells: Vec<InjectionCell>,
    next_spin: Spin,
}

impl ContactInjector {
    /// Cells with clock phases drawn uniformly in [0, t0).
    pub fn new<R: Rng + ?Sized>(cfg: &DeviceConfig, contact: Contact, rng: &mut R) -> Self {
        let cells = contact_cells(cfg, contact)
            .into_iter()
            .map(|c| {
                let p = rng.gen::<f64>() * c.t0;
                c.with_phase(p)
            })
            .collect();
        Self {
            contact,
            cells,
            next_spin: Spin::Up,
        }
    }

    /// Every attempt due before `t_end`, in cell order.
    pub fn due<R: Rng + ?Sized>(&mut self, cfg: &DeviceConfig, t_end: f64, rng: &mut R) -> Vec<Injection> {
        let mut out = Vec::new();
        for (j, cell) in self.cells.iter_mut().enumerate() {
            while cell.next_attempt_time < t_end {
                if let Some(t) = cell.attempt(rng) {
                    out.push(accept(cfg, cell, j, t, &mut self.next_spin, rng));
                }
            }
        }
        out
    }

    /// Mean injection rate (1/fs) implied by the cells.
    pub fn mean_rate(&self) -> f64 {
        self.cells.iter().map(|c| c.fermi_occupation / c.t0).sum()
    }
}
