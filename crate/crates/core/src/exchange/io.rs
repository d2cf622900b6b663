use std::io::{self, Read, Write};

use num_complex::Complex;

use super::evolve::StepRecord;
use crate::error::{Error, Result};
use crate::field::WaveField1D;
use crate::grid::Grid1D;

pub const TRAJECTORY_CSV_HEADER: &str = "step,particle,x_nm,v_nm_per_fs";

/// Writes one row per (step, particle).
pub fn write_trajectory_csv<W: Write>(out: &mut W, records: &[StepRecord<f64>]) -> io::Result<()> {
    writeln!(out, "{TRAJECTORY_CSV_HEADER}")?;
    for r in records {
        for (j, (x, v)) in r.positions.iter().zip(&r.velocities).enumerate() {
            writeln!(out, "{},{},{:.12e},{:.12e}", r.step, j, x, v)?;
        }
    }
    Ok(())
}

/// Binary dump: x_min, x_max (f64), n_points (u64), time (f64), then
/// interleaved re/im, all little-endian.
pub fn write_snapshot<W: Write>(out: &mut W, psi: &WaveField1D<f64>) -> io::Result<()> {
    let g = psi.grid();
    out.write_all(&g.x_min().to_le_bytes())?;
    out.write_all(&g.x_max().to_le_bytes())?;
    out.write_all(&(g.n_points() as u64).to_le_bytes())?;
    out.write_all(&psi.time().to_le_bytes())?;
    for a in psi.amplitudes() {
        out.write_all(&a.re.to_le_bytes())?;
        out.write_all(&a.im.to_le_bytes())?;
    }
    Ok(())
}

fn read_f64<R: Read>(r: &mut R) -> io::Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn read_snapshot<R: Read>(input: &mut R) -> Result<WaveField1D<f64>> {
    let io_err = |e: io::Error| Error::InvalidInput(format!("snapshot: {e}"));
    let x_min = read_f64(input).map_err(io_err)?;
    let x_max = read_f64(input).map_err(io_err)?;
    let mut b = [0u8; 8];
    input.read_exact(&mut b).map_err(io_err)?;
    let n = u64::from_le_bytes(b) as usize;
    let time = read_f64(input).map_err(io_err)?;
    let grid = Grid1D::new(x_min, x_max, n)?;
    let mut amps = Vec::with_capacity(n);
    for _ in 0..n {
        let re = read_f64(input).map_err(io_err)?;
        let im = read_f64(input).map_err(io_err)?;
        amps.push(Complex::new(re, im));
    }
    WaveField1D::from_amplitudes(grid, amps, time)
}
