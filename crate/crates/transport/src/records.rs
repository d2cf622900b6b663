//! Flight records, binned current and dwell statistics.

use crate::device::{Contact, Spin};

/// Time an electron spent in the active region, from its first entry to
/// its final exit.
#[derive(Clone, Debug, PartialEq)]
pub struct FlightRecord {
    pub id: u64,
    pub t_in: f64,
    pub t_out: f64,
    pub entry: Contact,
    pub exit: Contact,
    pub spin: Spin,
}

impl FlightRecord {
    pub fn duration(&self) -> f64 {
        self.t_out - self.t_in
    }
}

/// Net drain-plane crossings per time bin, as a current in e/fs.
#[derive(Clone, Debug, PartialEq)]
pub struct CurrentRecord {
    pub bin_width: f64,
    /// Bin start times.
    pub times: Vec<f64>,
    pub current: Vec<f64>,
    pub mean_current: f64,
}

impl CurrentRecord {
    /// Builds the record from signed crossing counts per bin.
    pub fn from_counts(bin_width: f64, counts: &[i64]) -> Self {
        let times = (0..counts.len()).map(|i| i as f64 * bin_width).collect();
        let current: Vec<f64> = counts.iter().map(|&c| c as f64 / bin_width).collect();
        let total: i64 = counts.iter().sum();
        let span = counts.len() as f64 * bin_width;
        Self {
            bin_width,
            times,
            current,
            mean_current: if span > 0.0 { total as f64 / span } else { 0.0 },
        }
    }

    /// Wraps an arbitrary current series (e/fs per bin).
    pub fn from_series(bin_width: f64, current: Vec<f64>) -> Self {
        let times = (0..current.len()).map(|i| i as f64 * bin_width).collect();
        let mean_current = if current.is_empty() {
            0.0
        } else {
            current.iter().sum::<f64>() / current.len() as f64
        };
        Self {
            bin_width,
            times,
            current,
            mean_current,
        }
    }

    pub fn len(&self) -> usize {
        self.current.len()
    }

    pub fn is_empty(&self) -> bool {
        self.current.is_empty()
    }

    /// ∫ I dt over the record, in units of e.
    pub fn integrated_charge(&self) -> f64 {
        self.current.iter().sum::<f64>() * self.bin_width
    }

    /// The record from time `t_start` on.
    pub fn trimmed(&self, t_start: f64) -> Self {
        let first = ((t_start / self.bin_width).ceil().max(0.0) as usize).min(self.current.len());
        let current = self.current[first..].to_vec();
        let times = self.times[first..].to_vec();
        let mean = if current.is_empty() {
            0.0
        } else {
            current.iter().sum::<f64>() / current.len() as f64
        };
        Self {
            bin_width: self.bin_width,
            times,
            current,
            mean_current: mean,
        }
    }

    /// Mean current and its standard error from `batches` consecutive
    /// batch means.
    pub fn batch_mean(&self, batches: usize) -> (f64, f64) {
        batch_statistics(&self.current, batches)
    }
}

/// Mean and standard error of `x` from consecutive batch means.
pub fn batch_statistics(x: &[f64], batches: usize) -> (f64, f64) {
    let len = x.len() / batches.max(1);
    if batches < 2 || len == 0 {
        let m = if x.is_empty() {
            0.0
        } else {
            x.iter().sum::<f64>() / x.len() as f64
        };
        return (m, f64::NAN);
    }
    let means: Vec<f64> = (0..batches)
        .map(|b| x[b * len..(b + 1) * len].iter().sum::<f64>() / len as f64)
        .collect();
    let m = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (batches - 1) as f64;
    (m, (var / batches as f64).sqrt())
}

/// Normalized dwell times d_{A/B}/d for the four entry/exit pairs.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DwellFractions {
    pub s_to_d: f64,
    pub d_to_s: f64,
    pub s_to_s: f64,
    pub d_to_d: f64,
    /// Σ of all four dwell times (fs).
    pub total: f64,
    pub count: usize,
}

impl DwellFractions {
    pub fn reflected(&self) -> f64 {
        self.s_to_s + self.d_to_d
    }
}

pub fn dwell_statistics(records: &[FlightRecord]) -> DwellFractions {
    if records.is_empty() {
        log::warn!("dwell statistics of an empty record set");
        return DwellFractions::default();
    }
    let mut d = DwellFractions::default();
    for r in records {
        let t = r.duration();
        match (r.entry, r.exit) {
            (Contact::Source, Contact::Drain) => d.s_to_d += t,
            (Contact::Drain, Contact::Source) => d.d_to_s += t,
            (Contact::Source, Contact::Source) => d.s_to_s += t,
            (Contact::Drain, Contact::Drain) => d.d_to_d += t,
        }
    }
    let total = d.s_to_d + d.d_to_s + d.s_to_s + d.d_to_d;
    d.total = total;
    d.count = records.len();
    if total > 0.0 {
        d.s_to_d /= total;
        d.d_to_s /= total;
        d.s_to_s /= total;
        d.d_to_d /= total;
    }
    d
}
