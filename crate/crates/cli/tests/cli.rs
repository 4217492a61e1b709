use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

struct Env {
    dir: TempDir,
}

impl Env {
    fn new() -> Env {
        Env {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn shiftlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftlab"))
        .args(args)
        .env_remove("SHIFTLAB_MAX_BITS")
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn analyze_agler_mid_passes() {
    let env = Env::new();
    let spec = env.file("a.json", r#"{"family":"agler","j":2}"#);
    let out = env.path("r.json");
    let o = shiftlab(&["analyze", s(&spec), "--tests", "mid", "--json-out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = read_json(&out);
    assert_eq!(r["command"], "analyze");
    assert_eq!(r["verdicts"][0]["test"], "mid");
    assert_eq!(r["verdicts"][0]["status"], "pass");
    assert_eq!(r["verdicts"][0]["K"], 16);
    assert_eq!(r["verdicts"][0]["N"], 64);
    assert_eq!(r["input"]["sequence"]["family"], "agler");
    assert_eq!(r["tool"]["name"], "shiftlab");
    assert!(r["timing"]["total_ms"].is_u64());
}

#[test]
fn analyze_constant_weights_ca_passes() {
    let env = Env::new();
    let spec = env.file("c.json", r#"{"explicit":{"weights":["1","1","1"],"tail":{"family":"unilateral"}}}"#);
    let o = shiftlab(&["analyze", s(&spec), "--tests", "ca"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("PASS"), "{}", stdout(&o));
}

#[test]
fn analyze_order_of_cube() {
    let env = Env::new();
    let spec = env.file(
        "p.json",
        r#"{"family":"power_of","of":{"family":"power_of","of":{"family":"bergman"},"m":"2"},"m":"3"}"#,
    );
    let out = env.path("r.json");
    let o = shiftlab(&["analyze", s(&spec), "--tests", "order", "--json-out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = &read_json(&out)["verdicts"][0];
    assert_eq!(v["test"], "order");
    assert_eq!(v["max_alternating_order"], 3);
    assert_eq!(v["failure_witness"]["k"], 4);
    assert!(v["failure_witness"]["value"].is_string());
}

#[test]
fn analyze_targets_and_contractive() {
    let env = Env::new();
    let spec = env.file("b.json", r#"{"family":"bergman"}"#);
    let out = env.path("r.json");
    let o = shiftlab(&[
        "analyze",
        s(&spec),
        "--tests",
        "cm,contractive(2),hyperexpansive",
        "--on",
        "moments",
        "-K",
        "6",
        "-N",
        "20",
        "--json-out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = read_json(&out);
    let statuses: Vec<&str> = r["verdicts"].as_array().unwrap().iter().map(|v| v["status"].as_str().unwrap()).collect();
    assert_eq!(statuses, ["pass", "pass", "fail"]);
    assert_eq!(r["verdicts"][2]["witness"]["k"], 1);
    assert_eq!(r["verdicts"][2]["witness"]["n"], 0);
    assert_eq!(r["verdicts"][2]["witness"]["value"], "1/2");
}

#[test]
fn mid_on_expansive_weights_is_an_explained_error() {
    let env = Env::new();
    let spec = env.file("d.json", r#"{"family":"dirichlet"}"#);
    let out = env.path("r.json");
    let o = shiftlab(&["analyze", s(&spec), "--tests", "mid,hyperexpansive", "--json-out", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("normalize"), "{}", stderr(&o));
    let r = read_json(&out);
    assert!(r["verdicts"][0]["error"].as_str().unwrap().contains("not contractive"));
    assert_eq!(r["verdicts"][1]["status"], "pass");
}

#[test]
fn malformed_spec_reports_location() {
    let env = Env::new();
    let spec = env.file("bad.json", r#"{"family":"sabcd","a":"1","b":"x","c":"1","d":"2"}"#);
    let o = shiftlab(&["analyze", s(&spec)]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("bad.json") && err.contains("$.b"), "{err}");

    let spec = env.file("bad2.json", r#"{"family":"agler","j":3"#);
    let o = shiftlab(&["analyze", s(&spec)]);
    assert!(stderr(&o).contains("line 1"), "{}", stderr(&o));
}

#[test]
fn unknown_test_name_is_rejected() {
    let env = Env::new();
    let spec = env.file("b.json", r#"{"family":"bergman"}"#);
    let o = shiftlab(&["analyze", s(&spec), "--tests", "cm,hyponormal"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("unknown test"));
}

#[test]
fn reports_are_deterministic() {
    let env = Env::new();
    let spec = env.file("g.json", r#"{"family":"geometric_gap","p":["1/2","1/3"]}"#);
    let (a, b) = (env.path("a.json"), env.path("b.json"));
    for out in [&a, &b] {
        let o = shiftlab(&["analyze", s(&spec), "--tests", "ca,log-ca,mid,bram-halmos", "-K", "8", "-N", "30", "--json-out", s(out)]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let strip = |p: &Path| {
        let mut v = read_json(p);
        v.as_object_mut().unwrap().remove("timing");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn transform_aluthge_then_mid() {
    let env = Env::new();
    let spec = env.file("b.json", r#"{"family":"bergman"}"#);
    let out = env.path("r.json");
    let o = shiftlab(&["transform", s(&spec), "--apply", "aluthge", "--tests", "mid", "-K", "12", "-N", "40", "--json-out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = read_json(&out);
    assert_eq!(r["verdicts"][0]["status"], "pass");
    assert_eq!(r["input"]["sequence"]["transform"]["name"], "aluthge");
}

#[test]
fn transform_chain_cesaro_of_weights_squared() {
    let env = Env::new();
    let spec = env.file("b.json", r#"{"family":"power_of","of":{"family":"bergman"},"m":"2"}"#);
    let o = shiftlab(&["transform", s(&spec), "-t", "cesaro", "--tests", "ca", "-K", "12", "-N", "40"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("PASS"));

    // Chains apply innermost first: restriction then the generalized mean.
    let out = env.path("r.json");
    let o = shiftlab(&[
        "transform",
        s(&spec),
        "-t",
        r#"{"name":"restriction","r":2}"#,
        "-t",
        r#"{"name":"generalized_mean","t":"1/4"}"#,
        "--tests",
        "ca",
        "-K",
        "4",
        "-N",
        "8",
        "--json-out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = read_json(&out);
    let t = &r["input"]["sequence"]["transform"];
    assert_eq!(t["name"], "generalized_mean");
    assert_eq!(t["of"]["transform"]["name"], "restriction");
}

#[test]
fn restriction_zero_matches_plain_analysis() {
    let env = Env::new();
    let spec = env.file("g.json", r#"{"family":"sabcd","a":"1","b":"1","c":"1","d":"3"}"#);
    let (a, b) = (env.path("a.json"), env.path("b.json"));
    let flags = ["--tests", "ca,log-ca,mid", "-K", "8", "-N", "20", "--json-out"];
    let mut args = vec!["analyze", s(&spec)];
    args.extend(flags);
    args.push(s(&a));
    assert!(shiftlab(&args).status.success());
    let mut args = vec!["transform", s(&spec), "-t", r#"{"name":"restriction","r":0}"#];
    args.extend(flags);
    args.push(s(&b));
    assert!(shiftlab(&args).status.success());
    let strip = |p: &Path| {
        let mut v = read_json(p);
        let o = v.as_object_mut().unwrap();
        o.remove("timing");
        o.remove("command");
        v
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn bad_transform_parameter_fails() {
    let env = Env::new();
    let spec = env.file("b.json", r#"{"family":"bergman"}"#);
    let o = shiftlab(&["transform", s(&spec), "-t", r#"{"name":"generalized_mean","t":"3/4"}"#]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("generalized_mean"), "{}", stderr(&o));
}

#[test]
fn strict_undecided_exits_three() {
    let env = Env::new();
    let spec = env.file("e.json", r#"{"family":"euler"}"#);
    let cfg = env.file("low.json", r#"{"start_bits":16,"max_bits":16}"#);
    let o = shiftlab(&["--config", s(&cfg), "analyze", s(&spec), "--tests", "ca", "-K", "12", "-N", "40", "--strict"]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    let o = shiftlab(&["--config", s(&cfg), "analyze", s(&spec), "--tests", "ca", "-K", "12", "-N", "40"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn max_bits_environment_override() {
    let env = Env::new();
    let spec = env.file("b.json", r#"{"family":"bergman"}"#);
    let out = env.path("r.json");
    let o = Command::new(env!("CARGO_BIN_EXE_shiftlab"))
        .args(["analyze", s(&spec), "--tests", "cm", "--json-out", s(&out)])
        .env("SHIFTLAB_MAX_BITS", "512")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(read_json(&out)["config"]["max_bits"], 512);

    let o = Command::new(env!("CARGO_BIN_EXE_shiftlab"))
        .args(["analyze", s(&spec)])
        .env("SHIFTLAB_MAX_BITS", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("SHIFTLAB_MAX_BITS"));
}

#[test]
fn invalid_config_names_the_key() {
    let env = Env::new();
    let spec = env.file("b.json", r#"{"family":"bergman"}"#);
    let cfg = env.file("c.json", r#"{"start_bits": 8192, "max_bits": 4096}"#);
    let o = shiftlab(&["--config", s(&cfg), "analyze", s(&spec)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("start_bits"));
}

#[test]
fn verify_selected_claims() {
    let env = Env::new();
    let out = env.path("claims.json");
    let o = shiftlab(&["verify-claims", "power-orders", "lk-agler", "expansivity-p", "--json-out", s(&out)]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.starts_with("claim"));
    assert_eq!(text.matches("MATCH").count(), 3);
    let r = read_json(&out);
    let ids: Vec<&str> = r["claims"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    // Registry order, not argument order.
    assert_eq!(ids, ["power-orders", "lk-agler", "expansivity-p"]);
    assert_eq!(r["claims"][0]["observed"]["items"][0]["value"], 8);
}

#[test]
fn verify_all_claims_match() {
    let env = Env::new();
    let out = env.path("claims.json");
    let o = shiftlab(&["verify-claims", "--all", "--strict", "--json-out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = read_json(&out);
    let claims = r["claims"].as_array().unwrap();
    assert_eq!(claims.len(), 17);
    for c in claims {
        let want = if c["id"] == "remark52-evidence" { "evidence" } else { "match" };
        assert_eq!(c["status"], want, "{c}");
    }
}

#[test]
fn unknown_claim_id_is_an_error() {
    let o = shiftlab(&["verify-claims", "power-orders", "no-such-claim"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no-such-claim"));
}

#[test]
fn claim_list_flags_evidence() {
    let o = shiftlab(&["verify-claims", "--list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 17);
    assert!(text.lines().any(|l| l.starts_with("remark52-evidence") && l.contains("[evidence only]")));
}

#[test]
fn export_bergman_moments_csv() {
    let env = Env::new();
    let spec = env.file("b.json", r#"{"family":"bergman"}"#);
    let o = shiftlab(&["export", s(&spec), "--what", "moments", "-N", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n,value\n0,1\n1,1/2\n2,1/3\n3,1/4\n");
}

#[test]
fn export_unilateral_hankel() {
    let env = Env::new();
    let spec = env.file("u.json", r#"{"family":"unilateral"}"#);
    let out = env.path("h.csv");
    let o = shiftlab(&["export", s(&spec), "--what", "hankel", "-N", "0", "-K", "2", "-o", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text, "1,1,1\n1,1,1\n1,1,1\n");
}

#[test]
fn export_euler_diff_table_has_intervals() {
    let env = Env::new();
    let spec = env.file("e.json", r#"{"family":"euler"}"#);
    let o = shiftlab(&["export", s(&spec), "--what", "diff-table", "-K", "2", "-N", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,n,value"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r.contains(",\"[")), "{text}");

    let o = shiftlab(&["export", s(&spec), "--what", "diff-table", "-K", "1", "-N", "1", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["rows"][1][0]["lo"].is_string());
}

#[test]
fn exported_moments_reimport_with_identical_verdicts() {
    let env = Env::new();
    let spec = env.file("s.json", r#"{"family":"sabcd","a":"1","b":"1","c":"1","d":"2"}"#);
    let o = shiftlab(&["export", s(&spec), "--what", "moments", "-N", "40", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    // The grid below reads moments up to index 32, inside the exported 0..=40.
    let back = env.file("back.json", &serde_json::json!({"explicit": {"moments": v["moments"]}}).to_string());

    let grid = ["--tests", "ca,log-ca,cm,bram-halmos", "--on", "weights-squared", "-K", "6", "-N", "20", "--json-out"];
    let verdicts = |p: &Path, out: &Path| {
        let mut args = vec!["analyze", s(p)];
        args.extend(grid);
        args.push(s(out));
        let o = shiftlab(&args);
        assert!(o.status.success(), "{}", stderr(&o));
        read_json(out)["verdicts"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| (v["status"].clone(), v["witness"].clone()))
            .collect::<Vec<_>>()
    };
    let a = verdicts(&spec, &env.path("a.json"));
    let b = verdicts(&back, &env.path("b.json"));
    assert_eq!(a, b);
    assert_eq!(a.len(), 4);
}
