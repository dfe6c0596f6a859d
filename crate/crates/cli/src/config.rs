//! Flat `key = value` configuration files.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};

const KNOWN_KEYS: [&str; 7] = [
    "distance",
    "sigma",
    "sigma_gkp",
    "use_analog_info",
    "trials",
    "seed",
    "case",
];

/// Parsed configuration file. Blank lines and text after `#` are ignored.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config file {}", path.display()))
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`", lineno + 1))?;
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                bail!(
                    "line {}: unknown key {key:?} (known: {})",
                    lineno + 1,
                    KNOWN_KEYS.join(", ")
                );
            }
            if values
                .insert(key.clone(), value.trim().to_string())
                .is_some()
            {
                bail!("line {}: duplicate key {key:?}", lineno + 1);
            }
        }
        Ok(Self { values })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Value of `key` parsed as `T`, if present.
    pub fn get<T>(&self, key: &str) -> anyhow::Result<Option<T>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| anyhow!("config key {key}: cannot parse {v:?}: {e}"))
            })
            .transpose()
    }
}

/// Values from a comma-separated list or an inclusive `start:stop:step` grid.
pub fn parse_axis(s: &str) -> anyhow::Result<Vec<f64>> {
    let s = s.trim();
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            bail!("grid {s:?} must have the form start:stop:step");
        }
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .with_context(|| format!("bad number {p:?} in grid {s:?}"))
        };
        let grid = bqec_core::surface::threshold::grid_range(
            num(parts[0])?,
            num(parts[1])?,
            num(parts[2])?,
        )?;
        return Ok(grid);
    }
    let values = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .with_context(|| format!("bad number {p:?} in list {s:?}"))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    if values.is_empty() {
        bail!("empty list");
    }
    Ok(values)
}

/// Comma-separated list of code distances.
pub fn parse_distances(s: &str) -> anyhow::Result<Vec<usize>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .with_context(|| format!("bad distance {p:?} in {s:?}"))
        })
        .collect()
}
