use std::path::{Path, PathBuf};

use crate::baselines::DEFAULT_GP_FACTOR;
use crate::confidence::{DEFAULT_WINDOW, MIN_WINDOW};
use crate::error::{Error, Result};
use crate::sim::Channel;
use crate::special_math::Probability;

/// Confidence levels evaluated by default: the two readings of "one sigma"
/// and "two sigma" (0.68 / 0.95 as coverage, 0.8413 / 0.9772 as the one-sided
/// quantile that gives a multiplier of exactly 1 and 2).
pub const DEFAULT_ALPHAS: [f64; 4] = [0.68, 0.8413, 0.95, 0.9772];
pub const DEFAULT_K: usize = 4;
pub const DEFAULT_SEED: u64 = 2017;

#[derive(Debug, Clone, PartialEq)]
pub enum TraceSource {
    Simulated,
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trajectory {
    /// Stationary survey: repeated scans at randomly chosen grid points.
    Survey,
    /// Exploratory mobile user walking between random waypoints.
    Walk,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub w: usize,
    pub alphas: Vec<Probability>,
    pub gp_factor: f64,
    pub k: usize,
    pub seed: u64,
    pub source: TraceSource,
    /// Evaluate the grid-candidate baseline alongside the window estimator.
    pub baseline: bool,
    /// Also score fixes produced before the window filled up.
    pub include_priming: bool,
    pub channel: Channel,
    pub trajectory: Trajectory,
    pub test_points: usize,
    pub samples_per_point: usize,
    pub walk_fixes: usize,
    /// Walking speed, m/s, sampled once per second.
    pub walk_speed: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            w: DEFAULT_WINDOW,
            alphas: DEFAULT_ALPHAS
                .iter()
                .map(|a| Probability::new(*a).expect("valid default"))
                .collect(),
            gp_factor: DEFAULT_GP_FACTOR,
            k: DEFAULT_K,
            seed: DEFAULT_SEED,
            source: TraceSource::Simulated,
            baseline: true,
            include_priming: false,
            channel: Channel::default(),
            trajectory: Trajectory::Survey,
            test_points: 200,
            samples_per_point: 100,
            walk_fixes: 2000,
            walk_speed: 1.0,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse {key} = {value:?}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Config(format!(
            "cannot parse {key} = {value:?} as a boolean"
        ))),
    }
}

pub fn parse_alphas(value: &str) -> Result<Vec<Probability>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Probability::new(parse("alphas", s)?))
        .collect()
}

impl ExperimentConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "w" => self.w = parse(key, value)?,
            "alphas" | "alpha" => self.alphas = parse_alphas(value)?,
            "gp_factor" => self.gp_factor = parse(key, value)?,
            "k" => self.k = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "trace" => {
                self.source = if value.is_empty() || value == "simulated" {
                    TraceSource::Simulated
                } else {
                    TraceSource::File(PathBuf::from(value))
                }
            }
            "baseline" => self.baseline = parse_bool(key, value)?,
            "include_priming" => self.include_priming = parse_bool(key, value)?,
            "tx_power" => self.channel.tx_power = parse(key, value)?,
            "path_loss_exp" => self.channel.path_loss_exp = parse(key, value)?,
            "noise_sd" => self.channel.noise_sd = parse(key, value)?,
            "trajectory" => {
                self.trajectory = match value {
                    "survey" => Trajectory::Survey,
                    "walk" => Trajectory::Walk,
                    _ => return Err(Error::Config(format!("unknown trajectory {value:?}"))),
                }
            }
            "test_points" => self.test_points = parse(key, value)?,
            "samples_per_point" => self.samples_per_point = parse(key, value)?,
            "walk_fixes" => self.walk_fixes = parse(key, value)?,
            "walk_speed" => self.walk_speed = parse(key, value)?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Reads a flat `key = value` file over the current settings. Blank
    /// lines and `#` comments are ignored.
    pub fn merge_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "{}:{}: expected key = value",
                    path.display(),
                    i + 1
                ))
            })?;
            self.set(key, value)
                .map_err(|e| Error::Config(format!("{}:{}: {e}", path.display(), i + 1)))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.w < MIN_WINDOW {
            return Err(Error::Config(format!(
                "w must be at least {MIN_WINDOW}, got {}",
                self.w
            )));
        }
        if self.alphas.is_empty() {
            return Err(Error::Config("at least one alpha is required".into()));
        }
        if let Some(a) = self.alphas.iter().find(|a| !a.is_open()) {
            return Err(Error::Config(format!("alpha {a} is not in (0, 1)")));
        }
        if !(self.gp_factor > 0.0 && self.gp_factor.is_finite()) {
            return Err(Error::Config(format!(
                "gp_factor must be positive, got {}",
                self.gp_factor
            )));
        }
        if self.k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        self.channel.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = ExperimentConfig::default();
        c.validate().unwrap();
        assert_eq!(c.w, 8);
        assert_eq!(c.k, 4);
        assert_eq!(c.gp_factor, 0.5);
        assert_eq!(c.alphas.len(), 4);
    }

    #[test]
    fn file_settings_apply_in_order() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("exp.conf");
        std::fs::write(
            &path,
            "# run\nw = 16\nalphas = 0.5, 0.9  # two levels\n\nnoise-sd=6\ntrace = /tmp/x.csv\ninclude_priming = yes\n",
        )
        .unwrap();
        let mut c = ExperimentConfig::default();
        c.merge_file(&path).unwrap();
        assert_eq!(c.w, 16);
        assert_eq!(
            c.alphas.iter().map(|a| a.value()).collect::<Vec<_>>(),
            vec![0.5, 0.9]
        );
        assert_eq!(c.channel.noise_sd, 6.0);
        assert_eq!(c.source, TraceSource::File("/tmp/x.csv".into()));
        assert!(c.include_priming);
    }

    #[test]
    fn bad_settings_are_reported() {
        let mut c = ExperimentConfig::default();
        assert!(c.set("bogus", "1").is_err());
        assert!(c.set("w", "eight").is_err());
        assert!(c.set("alphas", "0.5,1.2").is_err());
        c.set("w", "1").unwrap();
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::default();
        c.set("alphas", "0.5,1.0").unwrap();
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::default();
        c.set("gp_factor", "0").unwrap();
        assert!(c.validate().is_err());

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.conf");
        std::fs::write(&path, "w = 4\nnot a pair\n").unwrap();
        let err = ExperimentConfig::default().merge_file(&path).unwrap_err();
        assert!(err.to_string().contains(":2:"), "{err}");
    }
}
