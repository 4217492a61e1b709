use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use shiftlab_core::config::load_config;
use shiftlab_core::sequences::{parse_sequence_file, SequenceDef};
use shiftlab_core::Config;

use shiftlab_cli::analyze::{
    analyze, apply_chain, export, parse_transform_arg, AnalyzeOptions, ExportOptions, ExportWhat, Format, Target,
    TestKind,
};
use shiftlab_cli::claims::{self, ClaimStatus};
use shiftlab_cli::report::Report;

/// Exact classification of weighted shifts.
#[derive(Parser)]
#[command(name = "shiftlab", version, about)]
struct Cli {
    /// Config JSON; missing keys keep their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Precision cap in bits (overrides the config file and SHIFTLAB_MAX_BITS).
    #[arg(long, global = true)]
    max_bits: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run classifiers on a sequence spec.
    Analyze {
        /// Sequence-spec JSON file.
        spec: PathBuf,
        #[command(flatten)]
        flags: AnalyzeFlags,
    },
    /// Apply transforms (innermost first), then analyze.
    Transform {
        spec: PathBuf,
        /// A transform: a bare name (`aluthge`, `cesaro`, ...) or a JSON
        /// object such as '{"name":"generalized_mean","t":"1/4"}'. Repeat to chain.
        #[arg(long = "apply", short = 't', required = true)]
        chain: Vec<String>,
        #[command(flatten)]
        flags: AnalyzeFlags,
    },
    /// Check the registered claims.
    VerifyClaims {
        /// Claim ids; all of them with --all.
        ids: Vec<String>,
        #[arg(long, conflicts_with = "ids")]
        all: bool,
        /// List the registry and exit.
        #[arg(long)]
        list: bool,
        /// Exit with 3 when some claim is undecided.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Export a difference table, Hankel matrix or moment list.
    Export {
        spec: PathBuf,
        #[arg(long, value_enum)]
        what: ExportWhat,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Highest difference order, or the Hankel order k.
        #[arg(long = "K", short = 'K')]
        k: Option<usize>,
        /// Last column index, the Hankel base index n, or the last moment index.
        #[arg(long = "N", short = 'N')]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "weights")]
        on: Target,
        /// Output file; standard output when absent.
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct AnalyzeFlags {
    #[arg(long = "K", short = 'K')]
    k: Option<usize>,
    #[arg(long = "N", short = 'N')]
    n: Option<usize>,
    /// Comma-separated: cm, ca, log-ca, mid, contractive(n), bram-halmos, hyperexpansive, order.
    #[arg(long, value_delimiter = ',', default_value = "ca,log-ca")]
    tests: Vec<TestKind>,
    /// Sequence the cm/ca/log-ca/order tests act on.
    #[arg(long, value_enum, default_value = "weights")]
    on: Target,
    /// Include the difference table in the report.
    #[arg(long)]
    table: bool,
    /// Exit with 3 when some verdict is undecided.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    json_out: Option<PathBuf>,
}

impl AnalyzeFlags {
    fn options(&self, cfg: &Config) -> AnalyzeOptions {
        AnalyzeOptions {
            k_max: self.k.unwrap_or(cfg.default_k),
            n_max: self.n.unwrap_or(cfg.default_n),
            tests: self.tests.clone(),
            on: self.on,
            table: self.table,
        }
    }
}

fn config(cli: &Cli) -> anyhow::Result<Config> {
    let mut cfg = load_config(cli.config.as_deref())?.with_env_overrides()?;
    if let Some(b) = cli.max_bits {
        cfg.max_bits = b;
        cfg.validate()?;
    }
    Ok(cfg)
}

fn write_out(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn finish_analysis(mut report: Report, flags: &AnalyzeFlags, start: Instant) -> anyhow::Result<ExitCode> {
    report.timing.total_ms = start.elapsed().as_millis();
    for v in &report.verdicts {
        let test = v["test"].as_str().unwrap_or("?");
        if let Some(err) = v.get("error") {
            eprintln!("{test}: error: {}", err.as_str().unwrap_or_default());
            continue;
        }
        let status = v["status"].as_str().unwrap_or("?").to_uppercase();
        let mut line = format!("{test} {} {status}", v["sequence"].as_str().unwrap_or_default());
        if let Some(k) = v.get("max_alternating_order") {
            line.push_str(&format!(" k̂={k}"));
        }
        let w = v.get("witness").or_else(|| v.get("failure_witness"));
        if let Some(w) = w.filter(|w| !w.is_null()) {
            line.push_str(&format!(" witness=({}, {})", w["k"], w["n"]));
            if let Some(val) = w.get("value").and_then(|x| x.as_str()) {
                line.push_str(&format!(" value={val}"));
            }
        }
        if let Some(cells) = v["undecided_cells"].as_array().filter(|c| !c.is_empty()) {
            line.push_str(&format!(" undecided_cells={}", cells.len()));
        }
        println!("{line}");
    }
    if let Some(p) = &flags.json_out {
        write_out(p, &report.to_json_pretty())?;
    }
    if report.errors() > 0 {
        return Ok(ExitCode::FAILURE);
    }
    if flags.strict && report.has_status("undecided") {
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let cfg = config(&cli)?;
    let start = Instant::now();
    match &cli.command {
        Command::Analyze { spec, flags } => {
            let s = parse_sequence_file(spec)?;
            let report = analyze("analyze", &s, &flags.options(&cfg), &cfg)?;
            finish_analysis(report, flags, start)
        }
        Command::Transform { spec, chain, flags } => {
            let s = parse_sequence_file(spec)?;
            let tags = chain
                .iter()
                .enumerate()
                .map(|(i, a)| parse_transform_arg(a, i))
                .collect::<Result<Vec<_>, _>>()?;
            let t = apply_chain(s, &tags)?;
            let report = analyze("transform", &t, &flags.options(&cfg), &cfg)?;
            finish_analysis(report, flags, start)
        }
        Command::VerifyClaims {
            ids,
            all,
            list,
            strict,
            json_out,
        } => {
            if *list {
                for r in claims::records() {
                    let tag = if r.evidence_only { " [evidence only]" } else { "" };
                    println!("{:<26} {}{tag}", r.id, r.description);
                }
                return Ok(ExitCode::SUCCESS);
            }
            if ids.is_empty() && !*all {
                bail!("name claim ids or pass --all (see --list)");
            }
            let results = claims::verify(ids, &cfg).map_err(anyhow::Error::msg)?;
            print!("{}", claims::render_table(&results));
            let mut report = Report::new("verify-claims", json!({ "claims": ids, "all": all }), &cfg);
            report.claims = results;
            report.timing.total_ms = start.elapsed().as_millis();
            if let Some(p) = json_out {
                write_out(p, &report.to_json_pretty())?;
            }
            let bad = report
                .claims
                .iter()
                .any(|c| matches!(c.status, ClaimStatus::Mismatch | ClaimStatus::Error));
            if bad {
                return Ok(ExitCode::from(2));
            }
            if *strict && report.claims.iter().any(|c| c.status == ClaimStatus::Undecided) {
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Export {
            spec,
            what,
            format,
            k,
            n,
            on,
            out,
        } => {
            let s: SequenceDef = parse_sequence_file(spec)?;
            let (dk, dn) = match what {
                ExportWhat::Hankel => (2, 0),
                _ => (cfg.default_k, cfg.default_n),
            };
            let opts = ExportOptions {
                what: *what,
                format: *format,
                k_max: k.unwrap_or(dk),
                n_max: n.unwrap_or(dn),
                on: *on,
            };
            let text = export(&s, &opts, &cfg)?;
            match out {
                Some(p) => write_out(p, &text)?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
