//! Current-fluctuation autocorrelation, noise spectrum and Fano factor.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Result, TransportError};
use crate::records::CurrentRecord;

/// Autocorrelation of the current fluctuations at lags 0..=K bins.
#[derive(Clone, Debug, PartialEq)]
pub struct Autocorrelation {
    /// Lag step (fs).
    pub dt: f64,
    /// R(k·dt) in (e/fs)².
    pub r: Vec<f64>,
    pub mean_current: f64,
    pub n_samples: usize,
}

impl Autocorrelation {
    pub fn lags(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.r.len()).map(|k| k as f64 * self.dt)
    }

    pub fn record_length(&self) -> f64 {
        self.n_samples as f64 * self.dt
    }
}

/// Lag window applied before the transform.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Window {
    #[default]
    Bartlett,
    Rectangular,
}

impl Window {
    fn weight(self, k: usize, max_lag: usize) -> f64 {
        match self {
            Window::Bartlett => 1.0 - k as f64 / (max_lag + 1) as f64,
            Window::Rectangular => 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseSpectrum {
    /// THz.
    pub frequencies: Vec<f64>,
    /// One-sided S(f) in e²/fs.
    pub psd: Vec<f64>,
    /// Mean of the three lowest nonzero-frequency bins.
    pub s_zero: f64,
    /// s_zero/(2⟨I⟩); `None` when ⟨I⟩ is indistinguishable from zero.
    pub fano: Option<f64>,
    pub mean_current: f64,
    /// Standard error of ⟨I⟩ implied by s_zero.
    pub mean_current_error: f64,
    /// Frequency resolution 1/(record length), THz.
    pub delta_f: f64,
    /// 1/(2·bin width), THz.
    pub nyquist: f64,
    pub window: Window,
    pub max_lag: usize,
    pub n_samples: usize,
}

/// 1/fs in THz.
pub const PER_FS_IN_THZ: f64 = 1000.0;

impl NoiseSpectrum {
    pub fn fano_factor(&self) -> Result<f64> {
        self.fano.ok_or(TransportError::UndefinedFano {
            mean: self.mean_current,
            floor: 3.0 * self.mean_current_error,
        })
    }

    /// ∫₀^Nyquist S df by the trapezoid rule, in (e/fs)².
    pub fn integrated_power(&self) -> f64 {
        let df = self.delta_f / PER_FS_IN_THZ;
        let n = self.psd.len();
        let mut acc: f64 = self.psd.iter().sum();
        acc -= 0.5 * (self.psd[0] + self.psd[n - 1]);
        acc * df
    }

    /// Relative standard error of one spectral point of the lag-windowed
    /// estimate.
    pub fn relative_error(&self) -> f64 {
        let k = self.max_lag as f64;
        let factor = match self.window {
            Window::Bartlett => 2.0 * k / 3.0,
            Window::Rectangular => 2.0 * k,
        };
        (factor / self.n_samples as f64).sqrt()
    }

    /// Indices of the bins with frequencies in [lo, hi] THz.
    pub fn band(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let start = self.frequencies.partition_point(|&f| f < lo);
        let end = self.frequencies.partition_point(|&f| f <= hi);
        start..end.max(start)
    }

    /// Mean of S over the bins in [lo, hi] THz; NaN for an empty band.
    pub fn band_mean(&self, lo: f64, hi: f64) -> f64 {
        let b = self.band(lo, hi);
        if b.is_empty() {
            return f64::NAN;
        }
        let n = b.len() as f64;
        self.psd[b].iter().sum::<f64>() / n
    }
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Unbiased time-average estimate of ⟨ΔI(t)ΔI(t+τ)⟩ for τ up to
/// `max_lag` fs, over the whole record (trim transients beforehand).
pub fn autocorrelation(rec: &CurrentRecord, max_lag: f64) -> Result<Autocorrelation> {
    let n = rec.len();
    let k_max = (max_lag / rec.bin_width).round() as usize;
    let need = 10 * k_max.max(1);
    if n < need {
        return Err(TransportError::RecordTooShort {
            len: n,
            max_lag: k_max,
            need,
        });
    }
    let m = mean(&rec.current);
    let size = (2 * n).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = rec
        .current
        .iter()
        .map(|&i| Complex::new(i - m, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(size)
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(size).process(&mut buf);
    for c in buf.iter_mut() {
        *c = Complex::new(c.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(size).process(&mut buf);
    let r = (0..=k_max)
        .map(|k| buf[k].re / (size as f64 * (n - k) as f64))
        .collect();
    Ok(Autocorrelation {
        dt: rec.bin_width,
        r,
        mean_current: m,
        n_samples: n,
    })
}

/// One-sided spectrum S(f) = 2∫ w(τ) R(τ) e^{−2πifτ} dτ on the frequency
/// grid of the record length.
///
/// The lag products enter with the 1/n normalization, (n − k)/n · R(k):
/// that sequence is positive semidefinite, and so is its product with the
/// Bartlett window, which makes S(f) ≥ 0 at every frequency.
pub fn power_spectrum(r: &Autocorrelation, window: Window) -> NoiseSpectrum {
    let k_max = r.r.len() - 1;
    let n = r.n_samples as f64;
    let p = r.n_samples.max(2 * k_max + 2);
    let mut buf = vec![Complex::new(0.0, 0.0); p];
    buf[0] = Complex::new(r.r[0], 0.0);
    for k in 1..=k_max {
        let v = window.weight(k, k_max) * r.r[k] * (n - k as f64) / n;
        buf[k] = Complex::new(v, 0.0);
        buf[p - k] = Complex::new(v, 0.0);
    }
    FftPlanner::new().plan_fft_forward(p).process(&mut buf);
    let half = p / 2;
    let psd: Vec<f64> = buf[..=half].iter().map(|c| 2.0 * r.dt * c.re).collect();
    let df = 1.0 / (p as f64 * r.dt);
    let frequencies = (0..=half).map(|j| j as f64 * df * PER_FS_IN_THZ).collect();
    let s_zero = mean(&psd[1..4.min(psd.len())]);
    let t = r.n_samples as f64 * r.dt;
    let err = (s_zero.max(0.0) / (2.0 * t)).sqrt();
    let fano = (r.mean_current.abs() > 3.0 * err && r.mean_current != 0.0).then(|| s_zero / (2.0 * r.mean_current));
    NoiseSpectrum {
        frequencies,
        psd,
        s_zero,
        fano,
        mean_current: r.mean_current,
        mean_current_error: err,
        delta_f: df * PER_FS_IN_THZ,
        nyquist: 0.5 / r.dt * PER_FS_IN_THZ,
        window,
        max_lag: k_max,
        n_samples: r.n_samples,
    }
}

/// Autocorrelation and Bartlett spectrum of the record from `trim` fs on.
pub fn analyze(rec: &CurrentRecord, trim: f64, max_lag: f64) -> Result<(Autocorrelation, NoiseSpectrum)> {
    let r = autocorrelation(&rec.trimmed(trim), max_lag)?;
    let s = power_spectrum(&r, Window::Bartlett);
    Ok((r, s))
}

/// Spectra of `segments` consecutive, equally long pieces of the record
/// from `trim` fs on; their scatter gives error bars for band averages.
pub fn segment_spectra(rec: &CurrentRecord, trim: f64, segments: usize, max_lag: f64) -> Result<Vec<NoiseSpectrum>> {
    let rec = rec.trimmed(trim);
    let n = rec.len() / segments.max(1);
    (0..segments)
        .map(|i| {
            let piece = CurrentRecord::from_series(rec.bin_width, rec.current[i * n..(i + 1) * n].to_vec());
            Ok(power_spectrum(&autocorrelation(&piece, max_lag)?, Window::Bartlett))
        })
        .collect()
}
