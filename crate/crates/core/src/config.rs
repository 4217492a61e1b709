//! Analysis scope and precision settings.
//!
//! Every classifier takes its grid and precision from a [`Config`] (or from
//! explicit arguments that override it). A config document is a flat JSON
//! object; missing keys keep their defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable that overrides [`Config::max_bits`].
pub const MAX_BITS_ENV: &str = "SHIFTLAB_MAX_BITS";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    /// Highest difference order tested by default.
    #[serde(rename = "default_K")]
    pub default_k: usize,
    /// Largest start index tested by default.
    #[serde(rename = "default_N")]
    pub default_n: usize,
    /// Interval precision used for the first attempt.
    pub start_bits: u32,
    /// Interval precision after which a cell is declared undecided.
    pub max_bits: u32,
    /// Largest Hankel order `k` (the matrix is `(k+1)×(k+1)`).
    pub hankel_cap: usize,
    /// Largest window grown by the alternating-order search.
    pub witness_window_cap: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            default_k: 16,
            default_n: 64,
            start_bits: 256,
            max_bits: 4096,
            hankel_cap: 12,
            witness_window_cap: 4096,
        }
    }
}

const KEYS: [&str; 6] = [
    "default_K",
    "default_N",
    "start_bits",
    "max_bits",
    "hankel_cap",
    "witness_window_cap",
];

impl Config {
    /// Merge a JSON object of overrides into the defaults.
    pub fn from_json_str(text: &str) -> Result<Config> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Config {
            key: "<document>".into(),
            message: e.to_string(),
        })?;
        let obj = value.as_object().ok_or_else(|| Error::Config {
            key: "<document>".into(),
            message: "expected a JSON object".into(),
        })?;

        let mut cfg = Config::default();
        for (key, v) in obj {
            let n = v.as_u64().filter(|&n| n > 0).ok_or_else(|| Error::Config {
                key: key.clone(),
                message: format!("expected a positive integer, got {v}"),
            })?;
            match key.as_str() {
                "default_K" => cfg.default_k = n as usize,
                "default_N" => cfg.default_n = n as usize,
                "start_bits" => cfg.start_bits = to_bits(key, n)?,
                "max_bits" => cfg.max_bits = to_bits(key, n)?,
                "hankel_cap" => cfg.hankel_cap = n as usize,
                "witness_window_cap" => cfg.witness_window_cap = n as usize,
                other => {
                    return Err(Error::Config {
                        key: other.to_string(),
                        message: format!("unknown key; expected one of {}", KEYS.join(", ")),
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Apply `SHIFTLAB_MAX_BITS` when it is set.
    pub fn with_env_overrides(mut self) -> Result<Config> {
        if let Ok(raw) = std::env::var(MAX_BITS_ENV) {
            let n: u64 = raw.trim().parse().map_err(|_| Error::Config {
                key: MAX_BITS_ENV.into(),
                message: format!("expected a positive integer, got {raw:?}"),
            })?;
            self.max_bits = to_bits(MAX_BITS_ENV, n)?;
            self.validate()?;
        }
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("default_K", self.default_k as u64),
            ("default_N", self.default_n as u64),
            ("start_bits", self.start_bits as u64),
            ("max_bits", self.max_bits as u64),
            ("hankel_cap", self.hankel_cap as u64),
            ("witness_window_cap", self.witness_window_cap as u64),
        ];
        for (key, v) in positive {
            if v == 0 {
                return Err(Error::Config {
                    key: key.into(),
                    message: "must be positive".into(),
                });
            }
        }
        if self.start_bits > self.max_bits {
            return Err(Error::Config {
                key: "start_bits".into(),
                message: format!(
                    "start_bits ({}) exceeds max_bits ({})",
                    self.start_bits, self.max_bits
                ),
            });
        }
        Ok(())
    }

    /// The precision ladder `start_bits, 2·start_bits, …` capped at `max_bits`.
    pub fn precision_ladder(&self) -> impl Iterator<Item = u32> {
        let max = self.max_bits;
        std::iter::successors(Some(self.start_bits), move |&b| {
            (b < max).then(|| b.saturating_mul(2).min(max))
        })
    }
}

fn to_bits(key: &str, n: u64) -> Result<u32> {
    u32::try_from(n)
        .ok()
        .filter(|&b| b >= 16)
        .ok_or_else(|| Error::Config {
            key: key.into(),
            message: format!("precision must be between 16 and {} bits", u32::MAX),
        })
}

/// Load a config file, or the defaults when `path` is `None`.
pub fn load_config(path: Option<&Path>) -> Result<Config> {
    match path {
        None => Ok(Config::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Config {
                key: "<file>".into(),
                message: format!("{}: {e}", p.display()),
            })?;
            Config::from_json_str(&text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_without_file() {
        let cfg = load_config(None).unwrap();
        assert_eq!(cfg, Config::default());
        assert_eq!((cfg.default_k, cfg.default_n), (16, 64));
        assert_eq!((cfg.start_bits, cfg.max_bits), (256, 4096));
    }

    #[test]
    fn partial_override() {
        let cfg = Config::from_json_str(r#"{"default_K": 24}"#).unwrap();
        assert_eq!(cfg.default_k, 24);
        assert_eq!(cfg.default_n, 64);
    }

    #[test]
    fn start_above_max_is_rejected() {
        let err = Config::from_json_str(r#"{"start_bits": 8192, "max_bits": 4096}"#).unwrap_err();
        match err {
            Error::Config { key, .. } => assert_eq!(key, "start_bits"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_and_bad_keys_are_named() {
        let err = Config::from_json_str(r#"{"default_k": 3}"#).unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "default_k"));
        let err = Config::from_json_str(r#"{"hankel_cap": -1}"#).unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "hankel_cap"));
    }

    #[test]
    fn ladder_doubles_to_cap() {
        let cfg = Config {
            start_bits: 256,
            max_bits: 1500,
            ..Config::default()
        };
        let steps: Vec<u32> = cfg.precision_ladder().collect();
        assert_eq!(steps, vec![256, 512, 1024, 1500]);
    }
}
