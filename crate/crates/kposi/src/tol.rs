//! Tolerance profile threaded through classification, spectral analysis,
//! and simulation. Kept in f64 and converted to the working scalar at the
//! point of use.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceProfile {
    /// Hadamard-normalized magnitude below which a minor counts as zero.
    pub tau_zero: f64,
    /// Spectral residual / consistency tolerance.
    pub tau_spec: f64,
    /// Relative eigenvalue gap below which a spectral split is refused.
    pub tau_gap: f64,
    /// Slack added to the separation-rate bound when fitting slopes.
    pub tau_rate: f64,
    /// Relative threshold (times the state's largest magnitude) for treating
    /// trajectory entries as zero when counting sign variations.
    pub state_zero_rel: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        Self {
            tau_zero: 1e-9,
            tau_spec: 1e-6,
            tau_gap: 1e-6,
            tau_rate: 0.05,
            state_zero_rel: 1e-10,
        }
    }
}

impl ToleranceProfile {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("tau_zero", self.tau_zero),
            ("tau_spec", self.tau_spec),
            ("tau_gap", self.tau_gap),
            ("tau_rate", self.tau_rate),
            ("state_zero_rel", self.state_zero_rel),
        ];
        for (name, v) in fields {
            if v <= 0.0 || v.is_nan() || !v.is_finite() {
                return Err(Error::InvalidValue(format!(
                    "tolerance {name} must be strictly positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Parses a `key=value` file; unknown keys are rejected, missing keys
    /// keep their defaults. Lines starting with `#` are comments.
    pub fn from_key_value_str(text: &str) -> Result<Self> {
        let mut profile = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(Error::Parse {
                line: lineno + 1,
                col: 1,
                msg: format!("expected key=value, got {line:?}"),
            })?;
            let parsed: f64 = value.trim().parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                col: key.len() + 2,
                msg: format!("not a number: {:?}", value.trim()),
            })?;
            match key.trim() {
                "tau_zero" => profile.tau_zero = parsed,
                "tau_spec" => profile.tau_spec = parsed,
                "tau_gap" => profile.tau_gap = parsed,
                "tau_rate" => profile.tau_rate = parsed,
                "state_zero_rel" => profile.state_zero_rel = parsed,
                other => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        col: 1,
                        msg: format!("unknown tolerance key {other:?}"),
                    })
                }
            }
        }
        profile.validate()?;
        Ok(profile)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_key_value_str(&text)
    }
}
