//! Flat `key = value` experiment configuration files.
//!
//! The format is plain text, one setting per line, `#` comments allowed.
//! Unknown and duplicate keys are errors so configs stay diffable and typos
//! fail loudly.

use std::collections::HashSet;
use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

use crate::ga::GaConfig;

/// The fifteen generation checkpoints used throughout the analysis.
pub const DEFAULT_CHECKPOINTS: [u32; 15] = [
    25, 30, 35, 40, 50, 67, 85, 100, 125, 150, 200, 250, 335, 400, 500,
];

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    NotKeyValue { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: invalid value `{value}` for `{key}`")]
    BadValue {
        line: usize,
        key: &'static str,
        value: String,
    },
    #[error("missing required key `instance`")]
    MissingInstance,
    #[error("runs must be at least 1")]
    NoRuns,
    #[error("checkpoints must be strictly increasing within [1, max_generations]")]
    BadCheckpoints,
}

/// Everything one batch experiment needs: the GA settings, the run count,
/// the checkpoint schedule, and where outputs go.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub instance_path: PathBuf,
    pub population_size: u32,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub elitism: bool,
    pub max_age: Option<u32>,
    pub edge_cap: Option<u32>,
    pub max_generations: u32,
    pub reverse_insertion: bool,
    pub checkpoints: Vec<u32>,
    pub runs: u32,
    pub master_seed: u64,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            instance_path: PathBuf::from("data/swiss42.tsp"),
            population_size: 100,
            crossover_prob: 0.9,
            mutation_prob: 0.05,
            elitism: false,
            max_age: None,
            edge_cap: None,
            max_generations: 500,
            reverse_insertion: true,
            checkpoints: DEFAULT_CHECKPOINTS.to_vec(),
            runs: 20,
            master_seed: 0,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    /// Parse the flat key = value format. Missing keys keep their defaults;
    /// `instance` is required.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        let mut have_instance = false;
        let mut seen: HashSet<String> = HashSet::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or(ConfigError::NotKeyValue {
                line,
                text: content.to_string(),
            })?;
            let key = key.trim();
            let value = value.trim();
            if !seen.insert(key.to_string()) {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key: key.to_string(),
                });
            }

            fn parse_as<T: std::str::FromStr>(
                line: usize,
                key: &'static str,
                value: &str,
            ) -> Result<T, ConfigError> {
                value.parse().map_err(|_| ConfigError::BadValue {
                    line,
                    key,
                    value: value.to_string(),
                })
            }

            match key {
                "instance" => {
                    cfg.instance_path = PathBuf::from(value);
                    have_instance = true;
                }
                "population_size" => {
                    cfg.population_size = parse_as(line, "population_size", value)?
                }
                "crossover_prob" => cfg.crossover_prob = parse_as(line, "crossover_prob", value)?,
                "mutation_prob" => cfg.mutation_prob = parse_as(line, "mutation_prob", value)?,
                "elitism" => cfg.elitism = parse_as(line, "elitism", value)?,
                "max_age" => {
                    cfg.max_age = if value.eq_ignore_ascii_case("none") {
                        None
                    } else {
                        Some(parse_as(line, "max_age", value)?)
                    }
                }
                "edge_cap" => {
                    cfg.edge_cap = if value.eq_ignore_ascii_case("none") {
                        None
                    } else {
                        Some(parse_as(line, "edge_cap", value)?)
                    }
                }
                "max_generations" => {
                    cfg.max_generations = parse_as(line, "max_generations", value)?
                }
                "reverse_insertion" => {
                    cfg.reverse_insertion = parse_as(line, "reverse_insertion", value)?
                }
                "checkpoints" => {
                    cfg.checkpoints = value
                        .split(',')
                        .map(|v| parse_as(line, "checkpoints", v.trim()))
                        .collect::<Result<_, _>>()?;
                }
                "runs" => cfg.runs = parse_as(line, "runs", value)?,
                "seed" => cfg.master_seed = parse_as(line, "seed", value)?,
                "out" => cfg.out_dir = PathBuf::from(value),
                other => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: other.to_string(),
                    })
                }
            }
        }

        if !have_instance {
            return Err(ConfigError::MissingInstance);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.runs == 0 {
            return Err(ConfigError::NoRuns);
        }
        let ok = !self.checkpoints.is_empty()
            && self.checkpoints[0] >= 1
            && *self.checkpoints.last().unwrap() <= self.max_generations
            && self.checkpoints.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(ConfigError::BadCheckpoints);
        }
        Ok(())
    }

    /// GA settings for one run with the given per-run seed.
    pub fn ga_config(&self, seed: u64) -> GaConfig {
        GaConfig {
            population_size: self.population_size,
            crossover_prob: self.crossover_prob,
            mutation_prob: self.mutation_prob,
            elitism: self.elitism,
            max_age: self.max_age,
            edge_cap: self.edge_cap,
            max_generations: self.max_generations,
            seed,
            reverse_insertion: self.reverse_insertion,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let text = "\
# experiment settings
instance = data/swiss42.tsp
population_size = 50
crossover_prob = 0.8
mutation_prob = 0.1
elitism = true
max_age = 2
edge_cap = none
max_generations = 200
reverse_insertion = false
checkpoints = 25, 50, 100, 200
runs = 5
seed = 1234
out = results/run-a
";
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.population_size, 50);
        assert_eq!(cfg.crossover_prob, 0.8);
        assert!(cfg.elitism);
        assert_eq!(cfg.max_age, Some(2));
        assert_eq!(cfg.edge_cap, None);
        assert_eq!(cfg.checkpoints, vec![25, 50, 100, 200]);
        assert_eq!(cfg.runs, 5);
        assert_eq!(cfg.master_seed, 1234);
        assert_eq!(cfg.out_dir, PathBuf::from("results/run-a"));
        assert!(!cfg.reverse_insertion);
    }

    #[test]
    fn defaults_apply_when_keys_are_absent() {
        let cfg = ExperimentConfig::parse("instance = a.tsp\n").unwrap();
        assert_eq!(cfg.population_size, 100);
        assert_eq!(cfg.crossover_prob, 0.9);
        assert_eq!(cfg.mutation_prob, 0.05);
        assert_eq!(cfg.checkpoints, DEFAULT_CHECKPOINTS.to_vec());
        assert_eq!(cfg.runs, 20);
        assert!(cfg.reverse_insertion);
        assert!(!cfg.elitism);
    }

    #[test]
    fn unknown_key_is_an_error() {
        let err = ExperimentConfig::parse("instance = a.tsp\npopulation = 10\n").unwrap_err();
        assert_eq!(
            err,
            ConfigError::UnknownKey {
                line: 2,
                key: "population".into()
            }
        );
    }

    #[test]
    fn duplicate_key_is_an_error() {
        let err = ExperimentConfig::parse("instance = a.tsp\ninstance = b.tsp\n").unwrap_err();
        assert!(matches!(err, ConfigError::DuplicateKey { line: 2, .. }));
    }

    #[test]
    fn missing_instance_is_an_error() {
        assert_eq!(
            ExperimentConfig::parse("runs = 3\n").unwrap_err(),
            ConfigError::MissingInstance
        );
    }

    #[test]
    fn checkpoints_beyond_horizon_are_rejected() {
        let err = ExperimentConfig::parse(
            "instance = a.tsp\nmax_generations = 100\ncheckpoints = 25, 50, 200\n",
        )
        .unwrap_err();
        assert_eq!(err, ConfigError::BadCheckpoints);
    }

    #[test]
    fn bad_value_reports_key_and_line() {
        let err = ExperimentConfig::parse("instance = a.tsp\nruns = many\n").unwrap_err();
        assert_eq!(
            err,
            ConfigError::BadValue {
                line: 2,
                key: "runs",
                value: "many".into()
            }
        );
    }
}
