//! `analyze`, `transform` and `export`.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};
use shiftlab_core::classifiers::{
    alternating_order, completely_alternating_verdict, completely_monotone_verdict, hyperexpansive_verdict,
    log_completely_alternating_verdict, mid_verdict, n_contractive_verdict,
};
use shiftlab_core::hankel::{bram_halmos_verdict, hankel_matrix};
use shiftlab_core::numerics::format_rational;
use shiftlab_core::sequences::{difference_table, parse_transform_tag, MomentSequence, Sequence, SequenceDef};
use shiftlab_core::transforms::{apply, TransformTag};
use shiftlab_core::{Config, Error, Result};

use crate::report::Report;

/// One requested classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestKind {
    Cm,
    Ca,
    LogCa,
    Mid,
    Contractive(usize),
    BramHalmos,
    Hyperexpansive,
    Order,
}

impl FromStr for TestKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        Ok(match s {
            "cm" => TestKind::Cm,
            "ca" => TestKind::Ca,
            "log-ca" => TestKind::LogCa,
            "mid" => TestKind::Mid,
            "bram-halmos" => TestKind::BramHalmos,
            "hyperexpansive" => TestKind::Hyperexpansive,
            "order" => TestKind::Order,
            _ => {
                let arg = s
                    .strip_prefix("contractive(")
                    .and_then(|r| r.strip_suffix(')'))
                    .or_else(|| s.strip_prefix("contractive:"))
                    .ok_or_else(|| {
                        format!(
                            "unknown test {s:?}; expected cm, ca, log-ca, mid, contractive(n), \
                             bram-halmos, hyperexpansive or order"
                        )
                    })?;
                let n: usize = arg.parse().map_err(|_| format!("contractive order must be an integer, got {arg:?}"))?;
                if n == 0 {
                    return Err("contractive order must be at least 1".into());
                }
                TestKind::Contractive(n)
            }
        })
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestKind::Cm => f.write_str("cm"),
            TestKind::Ca => f.write_str("ca"),
            TestKind::LogCa => f.write_str("log-ca"),
            TestKind::Mid => f.write_str("mid"),
            TestKind::Contractive(n) => write!(f, "contractive({n})"),
            TestKind::BramHalmos => f.write_str("bram-halmos"),
            TestKind::Hyperexpansive => f.write_str("hyperexpansive"),
            TestKind::Order => f.write_str("order"),
        }
    }
}

/// Which sequence the sequence-level tests (`cm`, `ca`, `log-ca`, `order`)
/// and difference tables act on. Weight-level tests always read the spec
/// as weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Target {
    /// The sequence exactly as specified.
    #[default]
    Weights,
    WeightsSquared,
    Moments,
}

impl Target {
    fn name(self) -> &'static str {
        match self {
            Target::Weights => "weights",
            Target::WeightsSquared => "weights-squared",
            Target::Moments => "moments",
        }
    }
}

enum Targeted {
    Plain(SequenceDef),
    Moments(MomentSequence<SequenceDef>),
}

impl Targeted {
    fn new(s: &SequenceDef, on: Target) -> Targeted {
        match on {
            Target::Weights => Targeted::Plain(s.clone()),
            Target::WeightsSquared => Targeted::Plain(s.squared()),
            Target::Moments => Targeted::Moments(MomentSequence::new(s.clone())),
        }
    }

    fn seq(&self) -> &dyn Sequence {
        match self {
            Targeted::Plain(s) => s,
            Targeted::Moments(m) => m,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub k_max: usize,
    pub n_max: usize,
    pub tests: Vec<TestKind>,
    pub on: Target,
    pub table: bool,
}

fn run_test(s: &SequenceDef, test: TestKind, opts: &AnalyzeOptions, cfg: &Config) -> Result<Value> {
    let (k, n) = (opts.k_max, opts.n_max);
    let target = Targeted::new(s, opts.on);
    let t = target.seq();
    let v = match test {
        TestKind::Cm => completely_monotone_verdict(t, k, n, cfg)?,
        TestKind::Ca => completely_alternating_verdict(t, k, n, cfg)?,
        TestKind::LogCa => log_completely_alternating_verdict(t, k, n, cfg)?,
        TestKind::Mid => mid_verdict(s, k, n, cfg)?,
        TestKind::Contractive(order) => n_contractive_verdict(s, order, n, cfg)?,
        TestKind::BramHalmos => bram_halmos_verdict(s, n, k.min(cfg.hankel_cap), cfg)?,
        TestKind::Hyperexpansive => hyperexpansive_verdict(s, k, n, cfg)?,
        TestKind::Order => {
            let r = alternating_order(t, k, n, cfg)?;
            let mut v = serde_json::to_value(&r).expect("order reports serialize");
            v.as_object_mut()
                .expect("object")
                .insert("test".into(), json!("order"));
            return Ok(v);
        }
    };
    Ok(v.to_json())
}

/// Run the requested tests on `s`. Failures of individual tests are
/// recorded in the report rather than aborting the others.
pub fn analyze(command: &str, s: &SequenceDef, opts: &AnalyzeOptions, cfg: &Config) -> Result<Report> {
    let input = json!({
        "sequence": s.to_json(),
        "on": opts.on.name(),
        "K": opts.k_max,
        "N": opts.n_max,
        "tests": opts.tests.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
    });
    let mut report = Report::new(command, input, cfg);
    for &test in &opts.tests {
        match run_test(s, test, opts, cfg) {
            Ok(v) => report.push_verdict(v),
            Err(e) => report.push_verdict(json!({
                "test": test.to_string(),
                "sequence": s.label(),
                "error": e.to_string(),
            })),
        }
    }
    if opts.table {
        let target = Targeted::new(s, opts.on);
        let t = difference_table(target.seq(), opts.k_max, opts.n_max, cfg.start_bits)?;
        report.tables.push(serde_json::to_value(&t).expect("tables serialize"));
    }
    Ok(report)
}

/// A transform given on the command line: a JSON object such as
/// `{"name":"generalized_mean","t":"1/4"}`, or a bare name for transforms
/// without parameters.
pub fn parse_transform_arg(arg: &str, index: usize) -> Result<TransformTag> {
    let path = format!("--apply[{index}]");
    let v: Value = if arg.trim_start().starts_with('{') {
        serde_json::from_str(arg).map_err(|e| Error::Parse {
            path: path.clone(),
            message: e.to_string(),
        })?
    } else {
        json!({ "name": arg.trim() })
    };
    parse_transform_tag(&v, &path)
}

/// Apply `chain` innermost-first.
pub fn apply_chain(s: SequenceDef, chain: &[TransformTag]) -> Result<SequenceDef> {
    chain.iter().try_fold(s, |acc, tag| apply(tag.clone(), acc))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ExportWhat {
    DiffTable,
    Hankel,
    Moments,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct ExportOptions {
    pub what: ExportWhat,
    pub format: Format,
    pub k_max: usize,
    pub n_max: usize,
    pub on: Target,
}

/// Render the requested table. Rational cells are exact strings;
/// transcendental cells are enclosures at the configured start precision.
pub fn export(s: &SequenceDef, opts: &ExportOptions, cfg: &Config) -> Result<String> {
    let (k, n) = (opts.k_max, opts.n_max);
    match opts.what {
        ExportWhat::DiffTable => {
            let target = Targeted::new(s, opts.on);
            let t = difference_table(target.seq(), k, n, cfg.start_bits)?;
            Ok(match opts.format {
                Format::Csv => t.to_csv(),
                Format::Json => pretty(&serde_json::to_value(&t).expect("tables serialize")),
            })
        }
        ExportWhat::Hankel => {
            let h = hankel_matrix(&MomentSequence::new(s), n, k)?;
            Ok(match opts.format {
                Format::Csv => h.to_csv(),
                Format::Json => pretty(&h.to_json()),
            })
        }
        ExportWhat::Moments => {
            let ts = MomentSequence::new(s).terms(n + 1)?;
            let cells = ts
                .iter()
                .map(|t| match &t.rational {
                    Some(r) => Ok(Value::String(format_rational(r))),
                    None => Ok(serde_json::to_value(t.interval(cfg.start_bits)?).expect("intervals serialize")),
                })
                .collect::<Result<Vec<Value>>>()?;
            Ok(match opts.format {
                Format::Csv => {
                    let mut out = String::from("n,value\n");
                    for (i, c) in cells.iter().enumerate() {
                        match c {
                            Value::String(r) => out.push_str(&format!("{i},{r}\n")),
                            other => out.push_str(&format!(
                                "{i},\"[{}, {}]\"\n",
                                other["lo"].as_str().unwrap_or_default(),
                                other["hi"].as_str().unwrap_or_default()
                            )),
                        }
                    }
                    out
                }
                Format::Json => pretty(&json!({
                    "sequence": s.label(),
                    "N": n,
                    "moments": cells,
                })),
            })
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}
