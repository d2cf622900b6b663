//! The transport event loop: injection, lockstep evolution, exits and
//! drain-plane current counting.

use bohmex::exchange::{velocities, ConditionalSet, FieldSource, Layout, SpinChannelSystem};
use bohmex::sampling::rng_from_seed;
use bohmex::Species;

use crate::device::{Contact, DeviceConfig, Interactions, Spin};
use crate::error::{Result, TransportError};
use crate::injection::{ContactInjector, Injection};
use crate::records::{CurrentRecord, FlightRecord};

/// Electron counters at the end of one step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PopulationSample {
    pub injected: u64,
    pub exited: u64,
    pub in_flight: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunStats {
    pub steps: usize,
    pub injected: u64,
    pub exited: u64,
    pub in_flight: usize,
    pub max_in_flight: usize,
    pub mean_in_flight: f64,
    /// Drain-plane crossings towards the drain and back.
    pub forward_crossings: u64,
    pub backward_crossings: u64,
    /// Electrons that entered the active region but had not left the
    /// simulation when the run stopped.
    pub open_records: usize,
    /// Electrons dropped without ever reaching the active region.
    pub never_entered: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransportRun {
    pub interactions: Interactions,
    pub bias: f64,
    pub t_total: f64,
    pub current: CurrentRecord,
    pub flights: Vec<FlightRecord>,
    pub stats: RunStats,
    pub population: Vec<PopulationSample>,
}

#[derive(Clone, Debug)]
struct Tracked {
    id: u64,
    spin: Spin,
    entry: Option<(f64, Contact)>,
    exit: Option<(f64, Contact)>,
}

struct Channel {
    tracked: Vec<Tracked>,
    v: Vec<f64>,
    dirty: bool,
}

impl Channel {
    fn new() -> Self {
        Self {
            tracked: Vec::new(),
            v: Vec::new(),
            dirty: false,
        }
    }
}

fn crossing_time(t: f64, dt: f64, x0: f64, x1: f64, plane: f64) -> f64 {
    if x1 == x0 {
        t + dt
    } else {
        t + dt * ((plane - x0) / (x1 - x0)).clamp(0.0, 1.0)
    }
}

struct Bookkeeper<'a> {
    cfg: &'a DeviceConfig,
    counts: Vec<i64>,
    flights: Vec<FlightRecord>,
    stats: RunStats,
}

impl Bookkeeper<'_> {
    fn count(&mut self, t: f64, sign: i64) {
        let bin = ((t / self.cfg.current_bin) as usize).min(self.counts.len() - 1);
        self.counts[bin] += sign;
        if sign > 0 {
            self.stats.forward_crossings += 1;
        } else {
            self.stats.backward_crossings += 1;
        }
    }

    /// Updates crossings and entry/exit times for one move; returns true if
    /// the electron leaves the simulation.
    fn track(&mut self, e: &mut Tracked, t: f64, x0: f64, x1: f64) -> bool {
        let (l, dt) = (self.cfg.l_active, self.cfg.dt);
        if x0 < l && x1 >= l {
            self.count(crossing_time(t, dt, x0, x1, l), 1);
        } else if x0 >= l && x1 < l {
            self.count(crossing_time(t, dt, x0, x1, l), -1);
        }
        let inside = |x: f64| (0.0..=l).contains(&x);
        if !inside(x0) && inside(x1) {
            let (plane, side) = if x0 < 0.0 {
                (0.0, Contact::Source)
            } else {
                (l, Contact::Drain)
            };
            if e.entry.is_none() {
                e.entry = Some((crossing_time(t, dt, x0, x1, plane), side));
            }
        } else if inside(x0) && !inside(x1) {
            let (plane, side) = if x1 < 0.0 {
                (0.0, Contact::Source)
            } else {
                (l, Contact::Drain)
            };
            e.exit = Some((crossing_time(t, dt, x0, x1, plane), side));
        }
        let margin = if e.entry.is_some() {
            self.cfg.exit_margin
        } else {
            self.cfg.far_exit()
        };
        let gone = x1 < -margin || x1 > l + margin;
        if gone {
            match (e.entry, e.exit) {
                (Some((t_in, entry)), Some((t_out, exit))) => self.flights.push(FlightRecord {
                    id: e.id,
                    t_in,
                    t_out,
                    entry,
                    exit,
                    spin: e.spin,
                }),
                _ => self.stats.never_entered += 1,
            }
        }
        gone
    }
}

/// Simulates the device for `t_total` fs. The injection sequence depends
/// only on `seed`, so runs with different interactions share it.
pub fn run_transport(cfg: &DeviceConfig, interactions: Interactions, t_total: f64, seed: u64) -> Result<TransportRun> {
    cfg.validate()?;
    if !(t_total > 0.0) {
        return Err(TransportError::InvalidConfig(format!(
            "t_total must be positive, got {t_total}"
        )));
    }
    let grid = cfg.grid()?;
    let prop = cfg.propagator()?;
    let units = cfg.units();
    let potential = cfg.potential(interactions);
    let (species, layout) = if interactions.exchange() {
        (Species::Fermion, Layout::Full)
    } else {
        (Species::Distinguishable, Layout::Diagonal)
    };
    let empty = || ConditionalSet::new(&[], species, grid, Vec::new(), layout);
    let mut sys = SpinChannelSystem {
        up: empty()?,
        down: empty()?,
        coulomb_coupling: interactions.coulomb(),
    };
    let mut channels = [Channel::new(), Channel::new()];
    let mut rng = rng_from_seed(seed);
    let mut injectors = [
        ContactInjector::new(cfg, Contact::Source, &mut rng),
        ContactInjector::new(cfg, Contact::Drain, &mut rng),
    ];
    let n_steps = (t_total / cfg.dt).ceil() as usize;
    let n_bins = ((n_steps as f64 * cfg.dt) / cfg.current_bin).ceil().max(1.0) as usize;
    let mut book = Bookkeeper {
        cfg,
        counts: vec![0; n_bins],
        flights: Vec::new(),
        stats: RunStats::default(),
    };
    let mut population = Vec::with_capacity(n_steps);
    let mut next_id = 0u64;
    let mut occupancy_sum = 0.0;

    for step in 0..n_steps {
        let t = step as f64 * cfg.dt;
        let mut arrivals: Vec<Injection> = Vec::new();
        for inj in injectors.iter_mut() {
            arrivals.extend(inj.due(cfg, t + cfg.dt, &mut rng));
        }
        for a in arrivals {
            let (set, ch) = match a.spin {
                Spin::Up => (&mut sys.up, &mut channels[0]),
                Spin::Down => (&mut sys.down, &mut channels[1]),
            };
            set.add_particle(a.packet, a.x_start)?;
            let inside = (0.0..=cfg.l_active).contains(&a.x_start);
            ch.tracked.push(Tracked {
                id: next_id,
                spin: a.spin,
                entry: inside.then_some((t, a.contact)),
                exit: None,
            });
            ch.dirty = true;
            next_id += 1;
            book.stats.injected += 1;
        }
        let n = sys.up.n_particles() + sys.down.n_particles();
        if n > cfg.population_cap {
            return Err(TransportError::PopulationOverflow {
                n,
                cap: cfg.population_cap,
                time: t,
            });
        }
        let [ch_up, ch_down] = &mut channels;
        for (set, ch) in [(&sys.up, ch_up), (&sys.down, ch_down)] {
            if ch.dirty {
                ch.v = velocities(set, set.positions(), &units)?;
                ch.dirty = false;
            }
        }
        let x_up = sys.up.positions().to_vec();
        let x_down = sys.down.positions().to_vec();
        let (vu, vd) = sys.step(&potential, &prop, (&channels[0].v, &channels[1].v))?;
        channels[0].v = vu;
        channels[1].v = vd;

        let [ch_up, ch_down] = &mut channels;
        for (set, ch, x_old) in [(&mut sys.up, ch_up, x_up), (&mut sys.down, ch_down, x_down)] {
            let x_new = set.positions().to_vec();
            let mut leaving = Vec::new();
            for (k, e) in ch.tracked.iter_mut().enumerate() {
                if book.track(e, t, x_old[k], x_new[k]) {
                    leaving.push(k);
                }
            }
            for &k in leaving.iter().rev() {
                set.remove_particle(k);
                ch.tracked.remove(k);
                ch.v.remove(k);
                book.stats.exited += 1;
            }
            if !leaving.is_empty() && set.species() != Species::Distinguishable {
                ch.dirty = true;
            }
        }
        let in_flight = sys.up.n_particles() + sys.down.n_particles();
        occupancy_sum += in_flight as f64;
        book.stats.max_in_flight = book.stats.max_in_flight.max(in_flight);
        population.push(PopulationSample {
            injected: book.stats.injected,
            exited: book.stats.exited,
            in_flight,
        });
        if step % 10_000 == 0 {
            log::debug!(
                "{interactions} bias {} V: t = {t:.0} fs, {in_flight} in flight",
                cfg.bias
            );
        }
    }

    let mut stats = book.stats;
    stats.steps = n_steps;
    stats.in_flight = sys.up.n_particles() + sys.down.n_particles();
    stats.mean_in_flight = occupancy_sum / n_steps as f64;
    stats.open_records = channels
        .iter()
        .flat_map(|c| c.tracked.iter())
        .filter(|e| e.entry.is_some())
        .count();
    Ok(TransportRun {
        interactions,
        bias: cfg.bias,
        t_total: n_steps as f64 * cfg.dt,
        current: CurrentRecord::from_counts(cfg.current_bin, &book.counts),
        flights: book.flights,
        stats,
        population,
    })
}
