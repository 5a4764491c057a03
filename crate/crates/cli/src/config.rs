//! `key = value` run configuration.
//!
//! Precedence, lowest first: built-in defaults, `SKWV_OUT` (output
//! directory only), the config file, command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use skwv::data::InitialData;
use skwv::{ModelKind, Thresholds};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataKind {
    Zero,
    Pulse,
    Stereographic,
    Soliton,
    SolitonPerturbed,
    Shatah,
}

impl DataKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DataKind::Zero => "zero",
            DataKind::Pulse => "pulse",
            DataKind::Stereographic => "stereographic",
            DataKind::Soliton => "soliton",
            DataKind::SolitonPerturbed => "soliton-perturbed",
            DataKind::Shatah => "shatah",
        }
    }
}

impl FromStr for DataKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "zero" => DataKind::Zero,
            "pulse" => DataKind::Pulse,
            "stereographic" => DataKind::Stereographic,
            "soliton" => DataKind::Soliton,
            "soliton-perturbed" => DataKind::SolitonPerturbed,
            "shatah" => DataKind::Shatah,
            other => return Err(format!("unknown data family '{other}'")),
        })
    }
}

impl fmt::Display for DataKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelKind,
    pub data: DataKind,
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
    pub lambda: f64,
    pub tau0: f64,
    pub r_max: f64,
    pub n_cells: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub record_every: usize,
    pub energy_threshold: f64,
    pub gradient_threshold: f64,
    /// Cone vertex (simulation time); `None` means `t_end`.
    pub vertex: Option<f64>,
    pub t0: f64,
    pub t1: f64,
    pub series_points: usize,
    pub samples: usize,
    pub verify_tol: f64,
    pub static_r_max: f64,
    pub static_dr: f64,
    pub a_lo: f64,
    pub a_hi: f64,
    pub tol_a: f64,
    pub refine: bool,
    pub levels: usize,
    /// Directory of snapshot files to analyse instead of a fresh run.
    pub load: Option<PathBuf>,
    pub out: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: ModelKind::AdkinsNappi,
            data: DataKind::Pulse,
            amplitude: 0.1,
            center: 4.0,
            width: 1.0,
            lambda: 1.0,
            tau0: 1.0,
            r_max: 16.0,
            n_cells: 1024,
            cfl: 0.4,
            t_end: 4.0,
            record_every: 1,
            energy_threshold: 1e8,
            gradient_threshold: 1e6,
            vertex: None,
            t0: 0.5,
            t1: 1.5,
            series_points: 16,
            samples: 100_000,
            verify_tol: 1e-3,
            static_r_max: 50.0,
            static_dr: 0.01,
            a_lo: 0.5,
            a_hi: 5.0,
            tol_a: 1e-12,
            refine: false,
            levels: 3,
            load: None,
            out: PathBuf::from("skwv-out"),
            seed: 0,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    value
        .parse::<T>()
        .map_err(|e| CliError::Usage(format!("bad value '{value}' for '{key}': {e}")))
}

impl RunConfig {
    /// Defaults, with `SKWV_OUT` applied when set.
    pub fn from_env() -> Self {
        let mut c = RunConfig::default();
        if let Some(dir) = std::env::var_os("SKWV_OUT").filter(|d| !d.is_empty()) {
            c.out = PathBuf::from(dir);
        }
        c
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let v = value.trim();
        match key {
            "model" => self.model = parse(key, v)?,
            "data" => self.data = parse(key, v)?,
            "amplitude" => self.amplitude = parse(key, v)?,
            "center" => self.center = parse(key, v)?,
            "width" => self.width = parse(key, v)?,
            "lambda" => self.lambda = parse(key, v)?,
            "tau0" => self.tau0 = parse(key, v)?,
            "r_max" => self.r_max = parse(key, v)?,
            "n_cells" => self.n_cells = parse(key, v)?,
            "cfl" => self.cfl = parse(key, v)?,
            "t_end" => self.t_end = parse(key, v)?,
            "record_every" => self.record_every = parse(key, v)?,
            "energy_threshold" => self.energy_threshold = parse(key, v)?,
            "gradient_threshold" => self.gradient_threshold = parse(key, v)?,
            "vertex" => self.vertex = if v == "auto" { None } else { Some(parse(key, v)?) },
            "t0" => self.t0 = parse(key, v)?,
            "t1" => self.t1 = parse(key, v)?,
            "series_points" => self.series_points = parse(key, v)?,
            "samples" => self.samples = parse(key, v)?,
            "verify_tol" => self.verify_tol = parse(key, v)?,
            "static_r_max" => self.static_r_max = parse(key, v)?,
            "static_dr" => self.static_dr = parse(key, v)?,
            "a_lo" => self.a_lo = parse(key, v)?,
            "a_hi" => self.a_hi = parse(key, v)?,
            "tol_a" => self.tol_a = parse(key, v)?,
            "refine" => self.refine = parse(key, v)?,
            "levels" => self.levels = parse(key, v)?,
            "load" => self.load = if v.is_empty() { None } else { Some(PathBuf::from(v)) },
            "out" => self.out = PathBuf::from(v),
            "seed" => self.seed = parse(key, v)?,
            other => return Err(CliError::Usage(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Apply a `key = value` file. Blank lines and `#` comments are ignored;
    /// a key may appear once.
    pub fn apply_file(&mut self, text: &str) -> Result<(), CliError> {
        let mut seen = std::collections::HashSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("line {}: expected key = value", lineno + 1)))?;
            let key = key.trim();
            if !seen.insert(key.to_string()) {
                return Err(CliError::Usage(format!("line {}: duplicate key '{key}'", lineno + 1)));
            }
            self.set(key, value)
                .map_err(|e| CliError::Usage(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn vertex(&self) -> f64 {
        self.vertex.unwrap_or(self.t_end)
    }

    pub fn thresholds(&self) -> Thresholds {
        Thresholds {
            energy_density: self.energy_threshold,
            gradient: self.gradient_threshold,
        }
    }

    pub fn initial_data(&self) -> InitialData {
        let (amplitude, center, width) = (self.amplitude, self.center, self.width);
        match self.data {
            DataKind::Zero => InitialData::Zero,
            DataKind::Pulse => InitialData::Pulse { amplitude, center, width },
            DataKind::Stereographic => InitialData::Stereographic { lambda: self.lambda },
            DataKind::Soliton => InitialData::Soliton,
            DataKind::SolitonPerturbed => InitialData::SolitonPerturbed { amplitude, center, width },
            DataKind::Shatah => InitialData::Shatah { tau0: self.tau0 },
        }
    }

    /// Every key with its current value, in key order.
    pub fn pairs(&self) -> BTreeMap<String, String> {
        let path = |p: &Option<PathBuf>| p.as_ref().map_or(String::new(), |p| p.display().to_string());
        [
            ("model", self.model.to_string()),
            ("data", self.data.to_string()),
            ("amplitude", self.amplitude.to_string()),
            ("center", self.center.to_string()),
            ("width", self.width.to_string()),
            ("lambda", self.lambda.to_string()),
            ("tau0", self.tau0.to_string()),
            ("r_max", self.r_max.to_string()),
            ("n_cells", self.n_cells.to_string()),
            ("cfl", self.cfl.to_string()),
            ("t_end", self.t_end.to_string()),
            ("record_every", self.record_every.to_string()),
            ("energy_threshold", self.energy_threshold.to_string()),
            ("gradient_threshold", self.gradient_threshold.to_string()),
            ("vertex", self.vertex.map_or("auto".into(), |v| v.to_string())),
            ("t0", self.t0.to_string()),
            ("t1", self.t1.to_string()),
            ("series_points", self.series_points.to_string()),
            ("samples", self.samples.to_string()),
            ("verify_tol", self.verify_tol.to_string()),
            ("static_r_max", self.static_r_max.to_string()),
            ("static_dr", self.static_dr.to_string()),
            ("a_lo", self.a_lo.to_string()),
            ("a_hi", self.a_hi.to_string()),
            ("tol_a", self.tol_a.to_string()),
            ("refine", self.refine.to_string()),
            ("levels", self.levels.to_string()),
            ("load", path(&self.load)),
            ("out", self.out.display().to_string()),
            ("seed", self.seed.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }

    /// The configuration as a parseable `key = value` file.
    pub fn to_file(&self) -> String {
        self.pairs().iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_round_trip() {
        let mut c = RunConfig::default();
        c.set("model", "wavemap").unwrap();
        c.set("vertex", "3.5").unwrap();
        c.set("load", "runs/a").unwrap();
        let mut d = RunConfig::default();
        d.apply_file(&c.to_file()).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn comments_and_errors() {
        let mut c = RunConfig::default();
        c.apply_file("# run\n\nn_cells = 256  # coarse\ndata=soliton\n").unwrap();
        assert_eq!(c.n_cells, 256);
        assert_eq!(c.data, DataKind::Soliton);
        assert!(c.apply_file("colour = red\n").is_err());
        assert!(c.apply_file("n_cells = many\n").is_err());
        assert!(c.apply_file("n_cells\n").is_err());
        assert!(c.apply_file("cfl = 0.3\ncfl = 0.2\n").is_err());
    }

    #[test]
    fn every_echoed_key_is_accepted() {
        let c = RunConfig::default();
        let mut d = RunConfig::default();
        for (k, v) in c.pairs() {
            d.set(&k, &v).unwrap();
        }
        assert_eq!(c, d);
    }
}
