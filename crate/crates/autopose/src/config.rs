//! Pipeline configuration: TOML file, CLI overrides on top.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    /// Accuracy radius `d` in pixels for evaluation.
    pub accuracy_d: f64,
    /// Temporal propagation window, frames before and after each seed.
    pub temporal_window: usize,
    /// Max per-axis standard deviation for overlapping annotations to agree.
    pub agreement_std_max: f64,
    /// Minimum number of distinct source frames for consensus promotion.
    pub min_source_frames: usize,
    /// K-means cluster budget per joint for the exemplar bank.
    pub clusters_per_joint: usize,
    /// Endpoint pairs sampled when correcting a failed lower arm.
    pub correction_samples: usize,
    /// Z-score threshold for exemplar match significance.
    pub significance_min: f64,
    /// Gaussian kernel bandwidth of the consensus density estimate, pixels.
    pub parzen_sigma: f64,
    /// Number of propagate/evaluate iterations.
    pub iterations: usize,
    pub rng_seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            accuracy_d: 20.0,
            temporal_window: 30,
            agreement_std_max: 20.0,
            min_source_frames: 3,
            clusters_per_joint: 200,
            correction_samples: 25,
            significance_min: 3.0,
            parzen_sigma: 5.0,
            iterations: 5,
            rng_seed: 0,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        let positive_px = [
            ("accuracy_d", self.accuracy_d),
            ("agreement_std_max", self.agreement_std_max),
            ("parzen_sigma", self.parzen_sigma),
        ];
        for (field, v) in positive_px {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(field, format!("must be > 0, got {v}")));
            }
        }
        let counts = [
            ("temporal_window", self.temporal_window),
            ("min_source_frames", self.min_source_frames),
            ("clusters_per_joint", self.clusters_per_joint),
            ("correction_samples", self.correction_samples),
        ];
        for (field, v) in counts {
            if v < 1 {
                return Err(Error::config(field, "must be >= 1"));
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<PipelineConfig> {
        let text = std::fs::read_to_string(path)?;
        let cfg: PipelineConfig = toml::from_str(&text).map_err(|e| Error::Parse {
            file: path.display().to_string(),
            line: e.span().map(|s| line_of(&text, s.start)).unwrap_or(0),
            message: e.message().to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = toml::to_string_pretty(self).expect("config serializes");
        std::fs::write(path, text)?;
        Ok(())
    }
}

pub(crate) fn line_of(text: &str, byte: usize) -> usize {
    text[..byte.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        PipelineConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_zero_counts_and_thresholds() {
        let mut c = PipelineConfig::default();
        c.min_source_frames = 0;
        assert!(c.validate().is_err());
        let mut c = PipelineConfig::default();
        c.agreement_std_max = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn toml_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.toml");
        let mut cfg = PipelineConfig::default();
        cfg.iterations = 3;
        cfg.rng_seed = 99;
        cfg.save(&path).unwrap();
        assert_eq!(PipelineConfig::load(&path).unwrap(), cfg);
    }

    #[test]
    fn parse_error_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.toml");
        std::fs::write(&path, "iterations = 2\naccuracy_d = \"oops\"\n").unwrap();
        match PipelineConfig::load(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
