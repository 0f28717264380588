//! Run settings from a TOML file, the environment and flags, in increasing
//! order of precedence.
//!
//! ```toml
//! group = "A3"
//! I = [0, 2]
//! nI = [2, 1]
//! seed = 7
//! restarts = 64
//! max_iters = 300
//! cap = 6
//! threads = 4
//! output = "report.json"
//! verbosity = 1
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_RESTARTS: usize = 64;
pub const DEFAULT_MAX_ITERS: usize = 300;
/// Degree cap of `algebra basis` when none is given.
pub const DEFAULT_ALGEBRA_CAP: usize = 4;

/// Every field is optional; unset fields fall back to the next source and
/// finally to the defaults above. `threads = 0` or unset means one thread
/// per core, and an unset `cap` lets the pipeline choose.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub group: Option<String>,
    #[serde(rename = "I")]
    pub index_set: Option<Vec<usize>>,
    #[serde(rename = "nI")]
    pub n_i: Option<Vec<u32>>,
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub max_iters: Option<usize>,
    pub cap: Option<usize>,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
    pub verbosity: Option<u8>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(#[from] toml::de::Error),
    #[error("{name}={value:?} is not a number")]
    Env { name: &'static str, value: String },
}

impl RunConfig {
    pub fn from_toml(s: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    /// `KQ_SEED` and `KQ_THREADS`.
    pub fn from_env(get: impl Fn(&str) -> Option<String>) -> Result<Self, ConfigError> {
        fn num<T: std::str::FromStr>(
            name: &'static str,
            get: &impl Fn(&str) -> Option<String>,
        ) -> Result<Option<T>, ConfigError> {
            get(name)
                .map(|v| {
                    v.trim()
                        .parse()
                        .map_err(|_| ConfigError::Env { name, value: v })
                })
                .transpose()
        }
        Ok(RunConfig {
            seed: num("KQ_SEED", &get)?,
            threads: num("KQ_THREADS", &get)?,
            ..Default::default()
        })
    }

    /// Fields set in `top` win.
    pub fn overlay(self, top: RunConfig) -> RunConfig {
        RunConfig {
            group: top.group.or(self.group),
            index_set: top.index_set.or(self.index_set),
            n_i: top.n_i.or(self.n_i),
            seed: top.seed.or(self.seed),
            restarts: top.restarts.or(self.restarts),
            max_iters: top.max_iters.or(self.max_iters),
            cap: top.cap.or(self.cap),
            threads: top.threads.or(self.threads),
            output: top.output.or(self.output),
            verbosity: top.verbosity.or(self.verbosity),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn restarts(&self) -> usize {
        self.restarts.unwrap_or(DEFAULT_RESTARTS)
    }

    pub fn max_iters(&self) -> usize {
        self.max_iters.unwrap_or(DEFAULT_MAX_ITERS)
    }

    pub fn threads(&self) -> usize {
        self.threads.unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_example() {
        let c = RunConfig::from_toml(
            "group = \"A3\"\nI = [0, 2]\nnI = [2, 1]\nseed = 7\ncap = 6\noutput = \"r.json\"\n",
        )
        .unwrap();
        assert_eq!(c.group.as_deref(), Some("A3"));
        assert_eq!(c.index_set, Some(vec![0, 2]));
        assert_eq!(c.n_i, Some(vec![2, 1]));
        assert_eq!(c.seed(), 7);
        assert_eq!(c.restarts(), DEFAULT_RESTARTS);
    }

    #[test]
    fn unknown_keys_are_errors() {
        assert!(RunConfig::from_toml("sede = 3").is_err());
    }

    #[test]
    fn flags_beat_env_beat_file() {
        let file = RunConfig::from_toml("seed = 1\nthreads = 2\nrestarts = 5").unwrap();
        let env = RunConfig::from_env(|k| (k == "KQ_SEED").then(|| "9".to_string())).unwrap();
        let flags = RunConfig {
            threads: Some(3),
            ..Default::default()
        };
        let c = file.overlay(env).overlay(flags);
        assert_eq!((c.seed(), c.threads(), c.restarts()), (9, 3, 5));
    }

    #[test]
    fn bad_env_value() {
        assert!(RunConfig::from_env(|_| Some("many".into())).is_err());
    }
}
