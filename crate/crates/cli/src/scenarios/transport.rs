//! Nano-resistor sweeps: mean current, dwell fractions and noise spectra.

use std::io::Write;

use bohmex_transport::io::{write_current, write_flights, write_run_summary, write_spectrum};
use bohmex_transport::{
    analyze, batch_statistics, dwell_statistics, run_transport, segment_spectra, DwellFractions, Interactions,
    TransportRun,
};

use super::Report;
use crate::config::ScenarioConfig;
use crate::output::Output;
use crate::Result;

/// Band (THz) searched for the high-frequency noise peak.
pub const PEAK_BAND: (f64, f64) = (2.0, 8.0);
/// Band (THz) of the flat shot-noise plateau the peak is measured against.
pub const PLATEAU_BAND: (f64, f64) = (50.0, 200.0);
pub const NOISE_SEGMENTS: usize = 8;
/// Autocorrelation span of each segment spectrum (fs).
pub const SEGMENT_MAX_LAG: f64 = 300.0;

pub struct TransportPoint {
    pub run: TransportRun,
    /// Mean of the trimmed current and its batch-means standard error.
    pub mean_current: f64,
    pub stderr: f64,
    pub dwell: DwellFractions,
}

pub fn simulate(cfg: &ScenarioConfig, bias: f64, interactions: Interactions) -> Result<TransportPoint> {
    let t = &cfg.transport;
    let device = cfg.device.device(bias);
    log::info!("{interactions} at {bias} V for {} fs", t.duration);
    let run = run_transport(&device, interactions, t.duration, cfg.seed)?;
    let (mean_current, stderr) = run.current.trimmed(t.trim).batch_mean(t.batches);
    let dwell = dwell_statistics(&run.flights);
    Ok(TransportPoint {
        run,
        mean_current,
        stderr,
        dwell,
    })
}

/// Mean and standard error of I_a − I_b from paired batch means of two runs
/// that share their injection sequence.
pub fn paired_difference(a: &TransportRun, b: &TransportRun, trim: f64, batches: usize) -> (f64, f64) {
    let (x, y) = (a.current.trimmed(trim), b.current.trimmed(trim));
    let d: Vec<f64> = x.current.iter().zip(&y.current).map(|(p, q)| p - q).collect();
    batch_statistics(&d, batches)
}

/// Per-segment mean S over PEAK_BAND minus mean S over PLATEAU_BAND.
pub fn high_frequency_excess(run: &TransportRun, trim: f64) -> Result<Vec<f64>> {
    Ok(segment_spectra(&run.current, trim, NOISE_SEGMENTS, SEGMENT_MAX_LAG)?
        .iter()
        .map(|s| s.band_mean(PEAK_BAND.0, PEAK_BAND.1) - s.band_mean(PLATEAU_BAND.0, PLATEAU_BAND.1))
        .collect())
}

/// Mean and standard error of independent samples.
pub fn mean_and_stderr(x: &[f64]) -> (f64, f64) {
    batch_statistics(x, x.len())
}

fn label(i: Interactions, bias: f64) -> String {
    format!("{i}_{bias:.3}V")
}

pub fn run_iv(cfg: &ScenarioConfig, out: &mut Output) -> Result<Report> {
    let t = &cfg.transport;
    let flags = cfg.transport.parsed_interactions().expect("checked at load");
    let mut rows = Vec::new();
    let mut r = Report::default();
    let mut runs = out.file("runs.txt")?;
    for &bias in &t.biases {
        for &i in &flags {
            let p = simulate(cfg, bias, i)?;
            let l = label(i, bias);
            write_current(out.file(&format!("current_{l}.csv"))?, &p.run.current)?;
            write_flights(out.file(&format!("flights_{l}.csv"))?, &p.run.flights)?;
            write_run_summary(&mut runs, &p.run, p.stderr, &p.dwell)?;
            let d = &p.dwell;
            rows.push(format!(
                "{bias},{i},{},{},{},{},{},{},{},{},{}",
                p.mean_current,
                p.stderr,
                d.s_to_d,
                d.d_to_s,
                d.s_to_s,
                d.d_to_d,
                d.count,
                p.run.stats.mean_in_flight,
                p.run.stats.max_in_flight
            ));
            r.line(format!("mean_current.{l}"), p.mean_current);
        }
    }
    runs.flush()?;
    out.csv(
        "iv.csv",
        "bias_V,interactions,mean_current_e_per_fs,stderr_e_per_fs,d_SD,d_DS,d_SS,d_DD,flights,mean_in_flight,max_in_flight",
        rows,
    )?;
    Ok(r)
}

pub fn run_noise(cfg: &ScenarioConfig, out: &mut Output) -> Result<Report> {
    let t = &cfg.transport;
    let flags = cfg.transport.parsed_interactions().expect("checked at load");
    let mut rows = Vec::new();
    let mut r = Report::default();
    for &bias in &t.biases {
        for &i in &flags {
            let p = simulate(cfg, bias, i)?;
            let l = label(i, bias);
            let (acf, spec) = analyze(&p.run.current, t.trim, t.max_lag)?;
            write_spectrum(out.file(&format!("spectrum_{l}.csv"))?, &spec)?;
            out.csv(
                &format!("autocorrelation_{l}.csv"),
                "lag_fs,R_e2_per_fs2",
                acf.lags().zip(&acf.r).map(|(tau, v)| format!("{tau},{v}")),
            )?;
            let (excess, excess_err) = mean_and_stderr(&high_frequency_excess(&p.run, t.trim)?);
            let fano = spec.fano.map_or(String::new(), |f| f.to_string());
            rows.push(format!(
                "{bias},{i},{},{},{fano},{excess},{excess_err}",
                spec.mean_current, spec.s_zero
            ));
            r.line(
                format!("fano.{l}"),
                if fano.is_empty() { "undefined".into() } else { fano },
            );
        }
    }
    out.csv(
        "noise.csv",
        "bias_V,interactions,mean_current_e_per_fs,s_zero_e2_per_fs,fano,hf_excess_e2_per_fs,hf_excess_stderr_e2_per_fs",
        rows,
    )?;
    Ok(r)
}
