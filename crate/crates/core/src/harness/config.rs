use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::SimParams;

/// One experiment: simulation parameters plus run controls. Serialized as
/// a flat JSON object whose keys are the `SimParams` field names plus
/// `adversary`, `trials`, `h_m`, `r_prime_m` and `out`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub params: SimParams,
    #[serde(default = "default_adversary")]
    pub adversary: String,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Converse read horizon; defaults to `M`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_m: Option<usize>,
    /// Converse index-set size; defaults to `M / 2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_prime_m: Option<usize>,
    /// Reads the converse adversaries may corrupt; defaults to `d_m + 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flip_budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

fn default_adversary() -> String {
    "honest".to_string()
}

fn default_trials() -> usize {
    1000
}

impl ExperimentConfig {
    pub fn new(params: SimParams, adversary: &str, trials: usize) -> Self {
        Self {
            params,
            adversary: adversary.to_string(),
            trials,
            h_m: None,
            r_prime_m: None,
            flip_budget: None,
            out: None,
        }
    }

    pub fn h_m(&self) -> usize {
        self.h_m.unwrap_or(self.params.m)
    }

    pub fn r_prime_m(&self) -> usize {
        self.r_prime_m.unwrap_or(self.params.m / 2)
    }

    /// The decoder tolerates `d_m` foreign molecules, so corrupting at most
    /// `d_m` reads can never make it settle on another codeword.
    pub fn flip_budget(&self) -> usize {
        self.flip_budget.unwrap_or(self.params.d_m + 1)
    }

    pub fn validate(mut self) -> Result<Self> {
        self.params = self.params.validate()?;
        if self.trials == 0 {
            return Err(Error::InvalidParams("trials out of range".into()));
        }
        if self.r_prime_m() > self.params.m {
            return Err(Error::InvalidParams("r_prime_m out of range".into()));
        }
        Ok(self)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_json() {
        let json = r#"{"m":20,"k":8,"v":4,"p":0.1,"d_m":1,"theta":0.5,"seed":3,
                       "adversary":"weak","trials":50,"h_m":12}"#;
        let cfg: ExperimentConfig = serde_json::from_str(json).unwrap();
        assert_eq!(cfg.params.m, 20);
        assert_eq!(cfg.adversary, "weak");
        assert_eq!(cfg.h_m(), 12);
        assert_eq!(cfg.r_prime_m(), 10);
        let back: ExperimentConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_zero_trials() {
        let cfg = ExperimentConfig::new(SimParams::new(4, 2, 2, 0.0, 0, 1.0, 0), "honest", 0);
        assert_eq!(cfg.validate().unwrap_err().to_string(), "trials out of range");
    }
}
