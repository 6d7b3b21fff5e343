//! Run configuration. Optional `key = value` file; command-line flags win.

use std::fs;
use std::path::Path;

use crate::arith::FactorBudget;
use crate::error::{Error, Result};
use crate::poly::IrreducibilityConfig;

/// Environment variable naming a config file used when `--config` is absent.
pub const CONFIG_ENV: &str = "MONOTRI_CONFIG";

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub factor: FactorBudget,
    pub irreducibility: IrreducibilityConfig,
    /// Allowed relative deviation of the split fraction from 1/|G|.
    pub sampling_tolerance: f64,
    /// Default number of unramified primes for Frobenius sampling.
    pub prime_budget: usize,
    /// Below this many primes a sample report is inconclusive.
    pub min_sample_primes: usize,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            factor: FactorBudget::default(),
            irreducibility: IrreducibilityConfig::default(),
            sampling_tolerance: 0.35,
            prime_budget: 2000,
            min_sample_primes: 100,
            seed: 0x5eed,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad value for {key}: {value:?}")))
}

impl Config {
    /// Applies `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn apply_str(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "trial_division_bound" => self.factor.trial_division_bound = parse_value(key, value)?,
                "rho_iterations" => self.factor.rho_iterations = parse_value(key, value)?,
                "irreducibility_degree_bound" => {
                    self.irreducibility.degree_bound = parse_value(key, value)?
                }
                "irreducibility_primes" => self.irreducibility.primes_to_try = parse_value(key, value)?,
                "sampling_tolerance" => self.sampling_tolerance = parse_value(key, value)?,
                "prime_budget" => self.prime_budget = parse_value(key, value)?,
                "min_sample_primes" => self.min_sample_primes = parse_value(key, value)?,
                "seed" => self.set_seed(parse_value(key, value)?),
                _ => return Err(Error::Config(format!("unknown key {key:?}"))),
            }
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Config::default();
        cfg.apply_str(&text)?;
        Ok(cfg)
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.seed = seed;
        self.irreducibility.seed = seed;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let mut cfg = Config::default();
        cfg.apply_str(
            "# budgets\nrho_iterations = 1000\n\nsampling_tolerance=0.2 # tighter\nseed = 7\n",
        )
        .unwrap();
        assert_eq!(cfg.factor.rho_iterations, 1000);
        assert_eq!(cfg.sampling_tolerance, 0.2);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.irreducibility.seed, 7);
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        let mut cfg = Config::default();
        assert!(cfg.apply_str("nonsense = 1").is_err());
        assert!(cfg.apply_str("prime_budget").is_err());
        assert!(cfg.apply_str("prime_budget = many").is_err());
    }
}
