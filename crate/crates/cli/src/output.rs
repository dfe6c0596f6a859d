//! Result files: CSV tables and the JSON run manifest.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use serde::Serialize;

/// Everything needed to rerun an invocation bit for bit.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub subcommand: &'a str,
    pub argv: Vec<String>,
    pub config_file: Option<String>,
    /// Fully resolved parameters after merging the config file and flags.
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub seconds: f64,
    pub host: String,
    pub outputs: Vec<String>,
}

/// Output directory plus bookkeeping shared by all subcommands.
#[derive(Debug)]
pub struct RunContext {
    out: PathBuf,
    config_file: Option<PathBuf>,
    started: Instant,
}

impl RunContext {
    pub fn new(out: PathBuf, config_file: Option<PathBuf>) -> anyhow::Result<Self> {
        std::fs::create_dir_all(&out)
            .with_context(|| format!("cannot create output directory {}", out.display()))?;
        Ok(Self {
            out,
            config_file,
            started: Instant::now(),
        })
    }

    pub fn elapsed(&self) -> f64 {
        self.started.elapsed().as_secs_f64()
    }

    /// Writes `rows` under `header` to `<out>/<name>.csv`.
    pub fn write_csv(
        &self,
        name: &str,
        header: &[&str],
        rows: &[Vec<String>],
    ) -> anyhow::Result<PathBuf> {
        let path = self.out.join(format!("{name}.csv"));
        let mut w = csv::Writer::from_path(&path)
            .with_context(|| format!("cannot create {}", path.display()))?;
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush()
            .with_context(|| format!("cannot write {}", path.display()))?;
        Ok(path)
    }

    /// Writes `<out>/<name>.manifest.json` describing this run.
    pub fn write_manifest(
        &self,
        name: &str,
        subcommand: &str,
        config: serde_json::Value,
        seed: Option<u64>,
        outputs: &[PathBuf],
    ) -> anyhow::Result<PathBuf> {
        let manifest = RunManifest {
            subcommand,
            argv: std::env::args().collect(),
            config_file: self.config_file.as_ref().map(|p| p.display().to_string()),
            config,
            seed,
            version: env!("CARGO_PKG_VERSION"),
            seconds: self.elapsed(),
            host: host_info(),
            outputs: outputs.iter().map(|p| file_name(p)).collect(),
        };
        let path = self.out.join(format!("{name}.manifest.json"));
        let text = serde_json::to_string_pretty(&manifest)?;
        std::fs::write(&path, text + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?;
        Ok(path)
    }
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn host_info() -> String {
    format!(
        "{}-{}, threads={}",
        std::env::consts::OS,
        std::env::consts::ARCH,
        rayon::current_num_threads()
    )
}
