//! Experiment configuration read from TOML. Command-line flags override it.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use qhecke::SUPPORTED_D;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Fields to run. Empty means all eight.
    #[serde(default)]
    pub d: Vec<i64>,
    /// Values of X, strictly increasing.
    #[serde(default, rename = "X")]
    pub x: Vec<u64>,
    pub sigma: Option<f64>,
    pub phi: Option<String>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
    /// Caps for the invariant suites.
    #[serde(default)]
    pub verify: VerifyCaps,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyCaps {
    pub max_norm: Option<u64>,
    pub reciprocity_norm: Option<i64>,
    pub random_pairs: Option<usize>,
    pub prime_power_norm: Option<u64>,
    pub kronecker_norm: Option<i64>,
    pub poisson_norm: Option<u64>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let cfg: ExperimentConfig = toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        cfg.validate().map_err(|e| format!("{}: {e}", path.display()))?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if let Some(d) = self.d.iter().find(|d| !SUPPORTED_D.contains(d)) {
            return Err(format!("field `d`: {}", qhecke::Error::UnsupportedField(*d)));
        }
        if let Some(s) = self.sigma {
            if !(s > 0.0 && s < 2.0) {
                return Err(format!("field `sigma`: {s} is outside (0, 2)"));
            }
        }
        validate_ladder(&self.x).map_err(|e| format!("field `X`: {e}"))?;
        if let Some(p) = &self.phi {
            if !matches!(p.as_str(), "fejer" | "fejer2") {
                return Err(format!("field `phi`: unknown family {p:?}, expected fejer or fejer2"));
            }
        }
        Ok(())
    }
}

pub fn validate_ladder(xs: &[u64]) -> Result<(), String> {
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("ladder {xs:?} is not strictly increasing"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_validates() {
        let c: ExperimentConfig = toml::from_str("d = [-2, -11]\nX = [1000, 10000]\nsigma = 0.8\n[verify]\nmax_norm = 100\n").unwrap();
        assert!(c.validate().is_ok());
        assert_eq!(c.verify.max_norm, Some(100));
        let bad: ExperimentConfig = toml::from_str("d = [-5]").unwrap();
        assert!(bad.validate().unwrap_err().contains("-5"));
        let bad: ExperimentConfig = toml::from_str("X = [100, 100]").unwrap();
        assert!(bad.validate().is_err());
        let err = toml::from_str::<ExperimentConfig>("sigma = 0.8\nsigmaa = 1").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}
