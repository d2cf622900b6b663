//! CSV and key = value outputs of transport runs.

use std::io::{self, Write};

use crate::noise::NoiseSpectrum;
use crate::records::{CurrentRecord, DwellFractions, FlightRecord};
use crate::run::TransportRun;

pub const FLIGHTS_CSV_HEADER: &str = "id,spin,entry,exit,t_in_fs,t_out_fs";
pub const CURRENT_CSV_HEADER: &str = "t_fs,current_e_per_fs";
pub const SPECTRUM_CSV_HEADER: &str = "f_THz,S_e2_per_fs";

pub fn write_flights<W: Write>(mut out: W, flights: &[FlightRecord]) -> io::Result<()> {
    writeln!(out, "{FLIGHTS_CSV_HEADER}")?;
    for f in flights {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            f.id,
            f.spin.label(),
            f.entry.label(),
            f.exit.label(),
            f.t_in,
            f.t_out
        )?;
    }
    Ok(())
}

pub fn write_current<W: Write>(mut out: W, rec: &CurrentRecord) -> io::Result<()> {
    writeln!(out, "{CURRENT_CSV_HEADER}")?;
    for (t, i) in rec.times.iter().zip(&rec.current) {
        writeln!(out, "{t},{i}")?;
    }
    Ok(())
}

pub fn write_spectrum<W: Write>(mut out: W, s: &NoiseSpectrum) -> io::Result<()> {
    writeln!(out, "{SPECTRUM_CSV_HEADER}")?;
    for (f, p) in s.frequencies.iter().zip(&s.psd) {
        writeln!(out, "{f},{p}")?;
    }
    Ok(())
}

/// `key = value` lines describing one run.
pub fn write_run_summary<W: Write>(
    mut out: W,
    run: &TransportRun,
    mean_current_error: f64,
    dwell: &DwellFractions,
) -> io::Result<()> {
    let s = &run.stats;
    writeln!(out, "[{} bias={}]", run.interactions, run.bias)?;
    writeln!(out, "mean_current_e_per_fs = {}", run.current.mean_current)?;
    writeln!(out, "mean_current_stderr_e_per_fs = {mean_current_error}")?;
    writeln!(out, "t_total_fs = {}", run.t_total)?;
    writeln!(out, "injected = {}", s.injected)?;
    writeln!(out, "exited = {}", s.exited)?;
    writeln!(out, "in_flight_final = {}", s.in_flight)?;
    writeln!(out, "mean_in_flight = {}", s.mean_in_flight)?;
    writeln!(out, "max_in_flight = {}", s.max_in_flight)?;
    writeln!(out, "forward_crossings = {}", s.forward_crossings)?;
    writeln!(out, "backward_crossings = {}", s.backward_crossings)?;
    writeln!(out, "never_entered = {}", s.never_entered)?;
    writeln!(out, "closed_flights = {}", run.flights.len())?;
    writeln!(out, "d_SD = {}", dwell.s_to_d)?;
    writeln!(out, "d_DS = {}", dwell.d_to_s)?;
    writeln!(out, "d_SS = {}", dwell.s_to_s)?;
    writeln!(out, "d_DD = {}", dwell.d_to_d)?;
    Ok(())
}

pub fn write_noise_summary<W: Write>(mut out: W, s: &NoiseSpectrum) -> io::Result<()> {
    writeln!(out, "s_zero_e2_per_fs = {}", s.s_zero)?;
    match s.fano {
        Some(f) => writeln!(out, "fano = {f}")?,
        None => writeln!(out, "fano = undefined")?,
    }
    writeln!(out, "mean_current_e_per_fs = {}", s.mean_current)?;
    writeln!(out, "delta_f_THz = {}", s.delta_f)?;
    writeln!(out, "nyquist_THz = {}", s.nyquist)?;
    writeln!(out, "max_lag_bins = {}", s.max_lag)?;
    Ok(())
}
