//! Flat `key = value` run configuration.
//!
//! ```text
//! # electron vortex in a weak field
//! particle = electron
//! sz = -0.5
//! b = 0.01
//! grid.n_points = 4096
//! ```
//!
//! `#` starts a comment, blank lines are skipped, and every key not listed in
//! [`KNOWN_KEYS`] is rejected. Omitted keys take their defaults.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::modes::{Carrier, QuantumNumbers};
use crate::units::{BeamContext, ParticleSpec, Species, Spin};

pub const KNOWN_KEYS: &[&str] = &[
    "particle",
    "sz",
    "b",
    "k",
    "n",
    "ell",
    "pz",
    "grid.r_max_wm",
    "grid.n_points",
    "prop.z_max",
    "prop.n_steps",
    "prop.snapshot_stride",
    "mode",
    "free.w0",
    "output.dir",
    "spectrum.levels",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub particle: Species,
    pub sz: Spin,
    pub b: f64,
    pub k: f64,
    pub n: u32,
    pub ell: i32,
    pub pz: f64,
    /// r_max in units of w_m, or of free.w0 when b = 0.
    pub r_max_wm: f64,
    pub n_points: usize,
    pub z_max: f64,
    pub n_steps: usize,
    pub snapshot_stride: usize,
    pub mode: Carrier,
    pub free_w0: Option<f64>,
    pub output_dir: PathBuf,
    pub spectrum_levels: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            particle: Species::Electron,
            sz: Spin::DOWN,
            b: 0.01,
            k: 1.0,
            n: 0,
            ell: 1,
            pz: 0.0,
            r_max_wm: 8.0,
            n_points: 2048,
            z_max: 100.0,
            n_steps: 2000,
            snapshot_stride: 500,
            mode: Carrier::Paraxial,
            free_w0: None,
            output_dir: PathBuf::from("out"),
            spectrum_levels: 5,
        }
    }
}

fn bad(line: usize, key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        key: key.to_string(),
        message: message.into(),
    }
}

fn finite(line: usize, key: &str, raw: &str) -> Result<f64> {
    let v: f64 = raw
        .parse()
        .map_err(|_| bad(line, key, format!("`{raw}` is not a number")))?;
    if !v.is_finite() {
        return Err(bad(line, key, format!("`{raw}` is not finite")));
    }
    Ok(v)
}

fn positive(line: usize, key: &str, raw: &str) -> Result<f64> {
    let v = finite(line, key, raw)?;
    if v <= 0.0 {
        return Err(bad(line, key, format!("must be > 0, got {raw}")));
    }
    Ok(v)
}

fn integer<T: std::str::FromStr>(line: usize, key: &str, raw: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| bad(line, key, format!("`{raw}` is not a valid integer here")))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen: Vec<&str> = Vec::new();
        for (i, raw_line) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(bad(line, content, "expected `key = value`"));
            };
            let (key, value) = (key.trim(), value.trim());
            let Some(&known) = KNOWN_KEYS.iter().find(|k| **k == key) else {
                return Err(bad(line, key, "unknown key"));
            };
            if seen.contains(&known) {
                return Err(bad(line, key, "duplicate key"));
            }
            seen.push(known);
            if value.is_empty() {
                return Err(bad(line, key, "missing value"));
            }
            cfg.set(line, known, value)?;
        }
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    fn set(&mut self, line: usize, key: &str, v: &str) -> Result<()> {
        match key {
            "particle" => {
                self.particle = v
                    .parse()
                    .map_err(|_| bad(line, key, format!("`{v}` is not electron|positron")))?
            }
            "sz" => {
                let s = finite(line, key, v)?;
                self.sz = Spin::from_f64(s)
                    .map_err(|_| bad(line, key, format!("must be +0.5 or -0.5, got {v}")))?;
            }
            "b" => {
                self.b = finite(line, key, v)?;
                if self.b < 0.0 {
                    return Err(bad(line, key, format!("must be >= 0, got {v}")));
                }
            }
            "k" => self.k = positive(line, key, v)?,
            "n" => self.n = integer(line, key, v)?,
            "ell" => self.ell = integer(line, key, v)?,
            "pz" => self.pz = finite(line, key, v)?,
            "grid.r_max_wm" => self.r_max_wm = positive(line, key, v)?,
            "grid.n_points" => self.n_points = integer(line, key, v)?,
            "prop.z_max" => self.z_max = positive(line, key, v)?,
            "prop.n_steps" => self.n_steps = integer(line, key, v)?,
            "prop.snapshot_stride" => self.snapshot_stride = integer(line, key, v)?,
            "mode" => {
                self.mode = v
                    .parse()
                    .map_err(|_| bad(line, key, format!("`{v}` is not fw|paraxial")))?
            }
            "free.w0" => self.free_w0 = Some(positive(line, key, v)?),
            "output.dir" => self.output_dir = PathBuf::from(v),
            "spectrum.levels" => self.spectrum_levels = integer(line, key, v)?,
            _ => unreachable!("key list and setter disagree on `{key}`"),
        }
        Ok(())
    }

    /// Cross-key constraints; line 0 means the file as a whole.
    fn check(&self) -> Result<()> {
        if self.b == 0.0 && self.free_w0.is_none() {
            return Err(bad(0, "free.w0", "missing key: required when b = 0"));
        }
        if self.n_points < crate::grid::MIN_POINTS {
            return Err(bad(
                0,
                "grid.n_points",
                format!("must be >= {}", crate::grid::MIN_POINTS),
            ));
        }
        for (key, v) in [
            ("prop.n_steps", self.n_steps),
            ("prop.snapshot_stride", self.snapshot_stride),
        ] {
            if v == 0 {
                return Err(bad(0, key, "must be >= 1"));
            }
        }
        if self.spectrum_levels == 0 || self.spectrum_levels > crate::spectrum::MAX_REPORT_LEVELS {
            return Err(bad(
                0,
                "spectrum.levels",
                format!("must be in 1..={}", crate::spectrum::MAX_REPORT_LEVELS),
            ));
        }
        Ok(())
    }

    pub fn particle_spec(&self) -> ParticleSpec {
        ParticleSpec::new(self.particle, self.sz)
    }

    pub fn quantum_numbers(&self) -> QuantumNumbers {
        QuantumNumbers::new(self.n, self.ell)
    }

    pub fn is_free(&self) -> bool {
        self.b == 0.0
    }

    /// Field context; `None` for a free-space run.
    pub fn context(&self) -> Result<Option<BeamContext>> {
        if self.is_free() {
            return Ok(None);
        }
        BeamContext::new(self.particle_spec(), self.b, self.k).map(Some)
    }

    /// Transverse length unit: w_m in a field, free.w0 otherwise.
    pub fn width(&self) -> Result<f64> {
        match self.context()? {
            Some(ctx) => Ok(ctx.w_m),
            None => self
                .free_w0
                .ok_or_else(|| bad(0, "free.w0", "missing key: required when b = 0")),
        }
    }

    pub fn r_max(&self) -> Result<f64> {
        Ok(self.r_max_wm * self.width()?)
    }
}
