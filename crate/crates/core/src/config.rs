//! Run configuration for the verification suites and the seeded RNG.
//!
//! The config file is TOML. Its path comes from `--config`, else from the
//! `PSPOLY_CONFIG` environment variable; without either the defaults apply.
//!
//! ```toml
//! seed = 42
//! random_cases = 20        # random instances per randomized check
//! poset_cases = 200        # random (poset, chain, u) triples
//! support_directions = 500 # directions for the Minkowski check
//! membership_points = 10000
//! mc_trials = 100000
//! ```

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CONFIG_ENV: &str = "PSPOLY_CONFIG";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    pub random_cases: usize,
    pub poset_cases: usize,
    pub support_directions: usize,
    pub membership_points: usize,
    pub mc_trials: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 42,
            random_cases: 20,
            poset_cases: 200,
            support_directions: 500,
            membership_points: 10_000,
            mc_trials: 100_000,
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Loads the explicit path if given, else the path named by `PSPOLY_CONFIG`,
    /// else the defaults.
    pub fn resolve(explicit: Option<&Path>) -> Result<Self> {
        let path = explicit.map(Path::to_path_buf).or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
        match path {
            Some(p) => Self::load(&p),
            None => Ok(Self::default()),
        }
    }
}

/// Deterministic RNG used everywhere randomness is needed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn partial_file_keeps_defaults() {
        let c = Config::from_toml("seed = 7\nmc_trials = 10").unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.mc_trials, 10);
        assert_eq!(c.poset_cases, Config::default().poset_cases);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(Config::from_toml("sed = 7").is_err());
    }

    #[test]
    fn seeded_rng_is_reproducible() {
        let a: Vec<u32> = (0..5).map(|_| rng(3).gen()).collect();
        let mut r = rng(3);
        let first: u32 = r.gen();
        assert_eq!(a[0], first);
    }
}
