//! The JSON document written by `--json-out`.

use serde::Serialize;
use serde_json::Value;
use shiftlab_core::Config;

use crate::claims::ClaimResult;

#[derive(Debug, Clone, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for Tool {
    fn default() -> Self {
        Tool {
            name: "shiftlab",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Precision {
    pub start_bits: u32,
    pub max_bits: u32,
    /// Highest precision any interval verdict needed; `None` if every
    /// verdict was exact.
    pub max_bits_used: Option<u32>,
    pub interval_verdicts: usize,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Timing {
    pub total_ms: u128,
}

/// Everything but `timing` is a deterministic function of the inputs and
/// the configuration.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: Tool,
    pub command: String,
    pub input: Value,
    pub config: Config,
    pub verdicts: Vec<Value>,
    pub tables: Vec<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub claims: Vec<ClaimResult>,
    pub precision: Precision,
    pub timing: Timing,
}

impl Report {
    pub fn new(command: &str, input: Value, config: &Config) -> Report {
        Report {
            tool: Tool::default(),
            command: command.to_string(),
            input,
            config: config.clone(),
            verdicts: Vec::new(),
            tables: Vec::new(),
            claims: Vec::new(),
            precision: Precision {
                start_bits: config.start_bits,
                max_bits: config.max_bits,
                ..Precision::default()
            },
            timing: Timing::default(),
        }
    }

    /// Record a verdict-like value, folding its precision into the totals.
    pub fn push_verdict(&mut self, v: Value) {
        if v.get("path").and_then(Value::as_str) == Some("interval") {
            self.precision.interval_verdicts += 1;
        }
        if let Some(b) = v.get("bits_used").and_then(Value::as_u64) {
            let b = b as u32;
            self.precision.max_bits_used = Some(self.precision.max_bits_used.map_or(b, |m| m.max(b)));
        }
        self.verdicts.push(v);
    }

    pub fn has_status(&self, status: &str) -> bool {
        self.verdicts
            .iter()
            .any(|v| v.get("status").and_then(Value::as_str) == Some(status))
    }

    pub fn errors(&self) -> usize {
        self.verdicts.iter().filter(|v| v.get("error").is_some()).count()
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
