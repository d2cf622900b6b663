//! Output directory, CSV helpers, manifest and summary files.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use bohmex::bohm::{EnergyBreakdown, TrajectoryEnsemble};

use crate::config::ScenarioConfig;

/// Ensemble size of the reference calculations the desk-scale runs are
/// scaled down from.
pub const REFERENCE_TRAJECTORIES: usize = 160_000;

pub struct Output {
    dir: PathBuf,
    files: Vec<String>,
}

impl Output {
    pub fn create(root: &Path, cfg: &ScenarioConfig) -> io::Result<Self> {
        let dir = root.join(&cfg.output_dir);
        std::fs::create_dir_all(&dir)?;
        Ok(Self { dir, files: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }

    /// Creates `name` in the output directory.
    pub fn file(&mut self, name: &str) -> io::Result<BufWriter<File>> {
        self.files.push(name.to_string());
        Ok(BufWriter::new(File::create(self.dir.join(name))?))
    }

    /// Writes a CSV with `header` and one line per row.
    pub fn csv<I, R>(&mut self, name: &str, header: &str, rows: I) -> io::Result<()>
    where
        I: IntoIterator<Item = R>,
        R: AsRef<str>,
    {
        let mut w = self.file(name)?;
        writeln!(w, "{header}")?;
        for r in rows {
            writeln!(w, "{}", r.as_ref())?;
        }
        w.flush()
    }

    pub fn manifest(&mut self, cfg: &ScenarioConfig) -> io::Result<()> {
        let mut w = self.file("manifest.toml")?;
        writeln!(w, "# bohmex {} resolved configuration", env!("CARGO_PKG_VERSION"))?;
        write!(w, "{}", cfg.to_toml())?;
        w.flush()
    }

    pub fn summary(&mut self, lines: &[(String, String)]) -> io::Result<()> {
        let mut w = self.file("summary.txt")?;
        for (k, v) in lines {
            writeln!(w, "{k} = {v}")?;
        }
        w.flush()
    }
}

/// Header for `n` particles: time, K_j, Q_j, V, total, K_j standard errors
/// and the number of node samples.
pub fn energies_header(n: usize) -> String {
    let mut h = vec!["t_fs".to_string()];
    h.extend((1..=n).map(|j| format!("K{j}_eV")));
    h.extend((1..=n).map(|j| format!("Q{j}_eV")));
    h.push("V_eV".into());
    h.push("total_eV".into());
    h.extend((1..=n).map(|j| format!("K{j}_stderr_eV")));
    h.push("node_samples".into());
    h.join(",")
}

pub fn energy_rows(e: &[EnergyBreakdown<f64>]) -> Vec<String> {
    e.iter()
        .map(|b| {
            let mut r = vec![b.time.to_string()];
            r.extend(b.k_per_particle.iter().map(f64::to_string));
            r.extend(b.q_per_particle.iter().map(f64::to_string));
            r.push(b.potential.to_string());
            r.push(b.total.to_string());
            r.extend(b.k_stderr.iter().map(f64::to_string));
            r.push(b.node_samples.to_string());
            r.join(",")
        })
        .collect()
}

pub const TRAJECTORIES_HEADER: &str = "member,particle,t_fs,x_nm,v_nm_per_fs";

/// Rows for the first `members` ensemble members.
pub fn trajectory_rows(ens: &TrajectoryEnsemble<f64>, members: usize) -> Vec<String> {
    let mut rows = Vec::new();
    for m in 0..members.min(ens.members()) {
        for tr in ens.member(m) {
            for (i, (&x, &v)) in tr.positions.iter().zip(&tr.velocities).enumerate() {
                rows.push(format!("{m},{},{},{x},{v}", tr.particle_index + 1, ens.times[i]));
            }
        }
    }
    rows
}

/// Summary lines shared by every ensemble scenario.
pub fn ensemble_scale_lines(m: usize) -> Vec<(String, String)> {
    vec![
        ("trajectories".into(), m.to_string()),
        ("reference_trajectories".into(), REFERENCE_TRAJECTORIES.to_string()),
        (
            "ensemble_scale".into(),
            format!(
                "{} (standard errors grow by {:.1}x)",
                m as f64 / REFERENCE_TRAJECTORIES as f64,
                (REFERENCE_TRAJECTORIES as f64 / m as f64).sqrt()
            ),
        ),
    ]
}
