//! Registry of reproducible claims about weighted shifts, each with a fixed
//! scope and an expected outcome.

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use shiftlab_core::classifiers::{
    alternating_order, completely_alternating_verdict, completely_monotone_verdict, expansivity_power_profile,
    hyperexpansive_verdict, log_completely_alternating_verdict, mid_verdict, OrderStatus,
};
use shiftlab_core::measures::{agler_lk_triple, berger_moment, lk_sequence, Measure, MomentValue};
use shiftlab_core::numerics::rational::{factorial, harmonic, pow_int};
use shiftlab_core::numerics::{int, rat, Rational};
use shiftlab_core::sequences::{difference_table, LogDifference, MomentSequence, Sequence, SequenceDef, TableEntry};
use shiftlab_core::transforms::{apply, cesaro_difference_identity_check, gamma_cesaro_weights, TransformTag};
use shiftlab_core::{Config, Status, Verdict};

/// A labelled component of an expectation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Item<T> {
    pub label: String,
    pub value: T,
}

fn item<T>(label: impl Into<String>, value: T) -> Item<T> {
    Item {
        label: label.into(),
        value,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "items", rename_all = "snake_case")]
pub enum Expectation {
    Statuses(Vec<Item<Status>>),
    Orders(Vec<Item<usize>>),
    Values(Vec<Item<String>>),
    Identity(Vec<Item<bool>>),
    /// No expected outcome; the observation is reported as evidence.
    Evidence,
}

impl Expectation {
    fn render(&self) -> String {
        fn join<T>(items: &[Item<T>], f: impl Fn(&T) -> String) -> String {
            items
                .iter()
                .map(|i| format!("{}: {}", i.label, f(&i.value)))
                .collect::<Vec<_>>()
                .join("; ")
        }
        match self {
            Expectation::Statuses(v) => join(v, |s| s.to_string()),
            Expectation::Orders(v) => join(v, |k| k.to_string()),
            Expectation::Values(v) => join(v, |s| s.clone()),
            Expectation::Identity(v) => join(v, |b| if *b { "holds".into() } else { "fails".into() }),
            Expectation::Evidence => "evidence only".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimRecord {
    pub id: &'static str,
    pub description: &'static str,
    pub expected: Expectation,
    /// The statement being reproduced.
    pub citation: &'static str,
    pub evidence_only: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    Match,
    Mismatch,
    /// Some cell could not be decided within the precision cap.
    Undecided,
    Evidence,
    Error,
}

impl std::fmt::Display for ClaimStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ClaimStatus::Match => "MATCH",
            ClaimStatus::Mismatch => "MISMATCH",
            ClaimStatus::Undecided => "UNDECIDED",
            ClaimStatus::Evidence => "EVIDENCE",
            ClaimStatus::Error => "ERROR",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimResult {
    pub id: &'static str,
    pub citation: &'static str,
    pub expected: Expectation,
    pub observed: Option<Expectation>,
    pub status: ClaimStatus,
    pub detail: String,
}

impl ClaimResult {
    /// `(claim, expected, observed, status)`.
    pub fn row(&self) -> [String; 4] {
        [
            self.id.to_string(),
            self.expected.render(),
            self.observed.as_ref().map_or_else(|| self.detail.clone(), Expectation::render),
            self.status.to_string(),
        ]
    }
}

struct Observation {
    observed: Expectation,
    undecided: bool,
    detail: String,
}

type Check = fn(&Config) -> shiftlab_core::Result<Observation>;

struct Claim {
    record: ClaimRecord,
    check: Check,
}

fn obs(observed: Expectation, detail: impl Into<String>) -> Observation {
    Observation {
        observed,
        undecided: false,
        detail: detail.into(),
    }
}

/// Collects verdict statuses, noting any undecided cells.
#[derive(Default)]
struct Statuses {
    items: Vec<Item<Status>>,
    undecided: bool,
    notes: Vec<String>,
}

impl Statuses {
    fn push(&mut self, label: impl Into<String>, v: &Verdict) {
        let label = label.into();
        if !v.undecided_cells.is_empty() {
            self.undecided = true;
        }
        match v.witness_cell() {
            Some((k, n)) => self.notes.push(format!("{label}: {} at ({k}, {n})", v.status)),
            None => self.notes.push(format!("{label}: {} on ({}, {})", v.status, v.k_max, v.n_max)),
        }
        self.items.push(item(label, v.status));
    }

    fn done(self) -> Observation {
        Observation {
            observed: Expectation::Statuses(self.items),
            undecided: self.undecided,
            detail: self.notes.join("; "),
        }
    }
}

fn statuses(items: &[(&str, Status)]) -> Expectation {
    Expectation::Statuses(items.iter().map(|(l, s)| item(*l, *s)).collect())
}

fn identity(labels: &[&str]) -> Expectation {
    Expectation::Identity(labels.iter().map(|l| item(*l, true)).collect())
}

fn bergman_sq() -> SequenceDef {
    SequenceDef::bergman().squared()
}

/// `((n+1)/(n+2))^m`.
fn bergman_sq_power(m: i64) -> SequenceDef {
    SequenceDef::power_of(bergman_sq(), int(m)).expect("positive exponent")
}

fn power_orders(cfg: &Config) -> shiftlab_core::Result<Observation> {
    let mut items = Vec::new();
    let mut notes = Vec::new();
    let mut undecided = false;
    for m in 2..=5 {
        let r = alternating_order(&bergman_sq_power(m), 16, 64, cfg)?;
        undecided |= r.status == OrderStatus::Undecided;
        if let Some(w) = &r.failure_witness {
            notes.push(format!("m={m}: witness ({}, {})", w.k, w.n));
        }
        items.push(item(format!("m={m}"), r.max_alternating_order));
    }
    Ok(Observation {
        observed: Expectation::Orders(items),
        undecided,
        detail: notes.join("; "),
    })
}

fn cube_not_ca(cfg: &Config) -> shiftlab_core::Result<Observation> {
    let s = bergman_sq_power(3);
    let mut st = Statuses::default();
    st.push("log-ca", &log_completely_alternating_verdict(&s, 16, 64, cfg)?);
    let ca = completely_alternating_verdict(&s, 16, 64, cfg)?;
    st.push("ca", &ca);
    let mut o = st.done();
    if let Some((k, _)) = ca.witness_cell() {
        o.detail.push_str(&format!("; failure order {k} ≤ 4: {}", k <= 4));
    }
    Ok(o)
}

const SABCD_PAIRS: [(i64, i64, i64, i64); 4] = [(1, 1, 2, 1), (1, 3, 1, 2), (3, 2, 4, 1), (2, 1, 5, 1)];

fn sabcd_closed_form(_: &Config) -> shiftlab_core::Result<Observation> {
    let mut first_bad = None;
    for &(sn, sd, tn, td) in &SABCD_PAIRS {
        let (s, t) = (rat(sn, sd), rat(tn, td));
        let seq = SequenceDef::sabcd(int(1), s.clone(), int(1), t.clone())?.squared();
        let table = difference_table(&seq, 10, 20, 64)?;
        'cells: for m in 1..=10usize {
            for n in 0..=20usize {
                let den: Rational = (0..=m).map(|i| int((n + i) as i64) + &t).product();
                let want = Rational::from_integer(factorial(m as u64).into()) * (&s - &t) / den;
                if table.entry(m, n) != &TableEntry::Exact(want) {
                    first_bad = Some(format!("s={s}, t={t}, m={m}, n={n}"));
                    break 'cells;
                }
            }
        }
    }
    let holds = first_bad.is_none();
    Ok(obs(
        Expectation::Identity(vec![item("∇^m α² = m!(s−t)/∏(n+t+i)", holds)]),
        first_bad.unwrap_or_else(|| format!("{} (s, t) pairs, 1 ≤ m ≤ 10, n ≤ 20, exact", SABCD_PAIRS.len())),
    ))
}

fn link_identity(cfg: &Config) -> shiftlab_core::Result<Observation> {
    let mut seqs = vec![
        SequenceDef::agler(3)?,
        SequenceDef::sabcd(int(1), int(1), int(1), int(2))?,
        SequenceDef::geometric_gap(vec![rat(1, 2)])?,
    ];
    // Deterministic irregular weights.
    for seed in 1..=3i64 {
        let ws = (0..32).map(|i| rat((i * 7 + seed * 3) % 11 + 1, (i * 5 + seed) % 7 + 2)).collect();
        seqs.push(SequenceDef::explicit_weights(ws)?);
    }
    let (k_max, n_max) = (8, 20);
    let mut bad = None;
    let mut cells = 0;
    for w in &seqs {
        let gamma = MomentSequence::new(w).terms(n_max + k_max + 2)?;
        let sq = w.squared().terms(n_max + k_max + 1)?;
        for k in 0..=k_max {
            for n in 0..=n_max {
                let lhs = LogDifference::from_terms(&gamma, k + 1, n).sign(cfg)?;
                let rhs = LogDifference::from_terms(&sq, k, n).sign(cfg)?.negate();
                cells += 1;
                if !lhs.is_decided() || lhs != rhs {
                    bad.get_or_insert_with(|| format!("{}: ({k}, {n}) {lhs} vs {rhs}", w.label()));
                }
            }
        }
    }
    let holds = bad.is_none();
    Ok(obs(
        Expectation::Identity(vec![item("sign ∇^{k+1} ln γ = −sign ∇^k ln α²", holds)]),
        bad.unwrap_or_else(|| format!("{cells} cells over {} sequences", seqs.len())),
    ))
}

fn cesaro_identity(_: &Config) -> shiftlab_core::Result<Observation> {
    let mut bad = None;
    for j in 2..=4 {
        let s = SequenceDef::agler(j)?.squared();
        for m in 0..=8 {
            for i in 0..=8 {
                if !cesaro_difference_identity_check(&s, m, i)? && bad.is_none() {
                    bad = Some(format!("agler({j}): m={m}, j={i}"));
                }
            }
        }
    }
    let holds = bad.is_none();
    Ok(obs(
        Expectation::Identity(vec![item("Cesàro difference identity", holds)]),
        bad.unwrap_or_else(|| "agler(2..4) weights squared, m, j ≤ 8".into()),
    ))
}

fn lk_agler(_: &Config) -> shiftlab_core::Result<Observation> {
    let mut bad = None;
    for j in 2..=6u64 {
        let t = agler_lk_triple(j)?;
        for n in 0..=50usize {
            if lk_sequence(&t, n)? != rat(n as i64 + 1, (n as u64 + j) as i64) && bad.is_none() {
                bad = Some(format!("j={j}, n={n}"));
            }
        }
    }
    let holds = bad.is_none();
    Ok(obs(
        Expectation::Identity(vec![item("ψ(n) = (n+1)/(n+j)", holds)]),
        bad.unwrap_or_else(|| "j = 2..6, n ≤ 50".into()),
    ))
}

fn berger_agler(_: &Config) -> shiftlab_core::Result<Observation> {
    let mut bad = None;
    for j in 2..=6u64 {
        let m = Measure::agler_berger(j)?;
        let gs = MomentSequence::new(SequenceDef::agler(j)?).terms(31)?;
        for (n, g) in gs.iter().enumerate() {
            if berger_moment(&m, n)?.exact() != g.rational.as_ref() && bad.is_none() {
                bad = Some(format!("j={j}, n={n}"));
            }
        }
    }
    let holds = bad.is_none();
    Ok(obs(
        Expectation::Identity(vec![item("∫ t^n (j−1)(1−t)^{j−2} dt = γ_n", holds)]),
        bad.unwrap_or_else(|| "j = 2..6, n ≤ 30".into()),
    ))
}

fn berger_logpower(cfg: &Config) -> shiftlab_core::Result<Observation> {
    let mut bad = None;
    for q in 1..=5i64 {
        let m = Measure::log_power(int(q))?;
        for n in 0..=20i64 {
            let want = MomentValue::Exact(pow_int(&int(n + 1), -q)?);
            if berger_moment(&m, n as usize)? != want && bad.is_none() {
                bad = Some(format!("q={q}, n={n}"));
            }
        }
    }
    // Fractional q: the enclosure must contain (n+1)^{-3/2}, that is, its
    // square times (n+1)^3 must contain 1.
    let m = Measure::log_power(rat(3, 2))?;
    for n in 0..=20i64 {
        let e = berger_moment(&m, n as usize)?.enclose(cfg.start_bits)?;
        let cube = shiftlab_core::numerics::Interval::from_int((n + 1).pow(3), cfg.start_bits);
        if !e.square().mul(&cube).contains_rational(&Rational::one()) && bad.is_none() {
            bad = Some(format!("q=3/2, n={n}"));
        }
    }
    let holds = bad.is_none();
    Ok(obs(
        Expectation::Identity(vec![item("moments of (−ln u)^{q−1}/Γ(q) are (n+1)^{−q}", holds)]),
        bad.unwrap_or_else(|| {
            "q = 1..5 exact, q = 3/2 enclosed, n ≤ 20; the (n+1)^{-1/q} reading does not hold".into()
        }),
    ))
}

fn geometric_gap_ca(cfg: &Config) -> shiftlab_core::Result<Observation> {
    let g = SequenceDef::geometric_gap(vec![rat(1, 2)])?;
    let mut st = Statuses::default();
    st.push("ca of weights squared", &completely_alternating_verdict(&g.squared(), 16, 64, cfg)?);
    st.push("mid", &mid_verdict(&g, 16, 64, cfg)?);
    Ok(st.done())
}

fn euler_ca(cfg: &Config) -> shiftlab_core::Result<Observation> {
    let e = SequenceDef::euler();
    let mut st = Statuses::default();
    st.push("ca", &completely_alternating_verdict(&e, 12, 40, cfg)?);
    st.push("mid", &mid_verdict(&e, 12, 40, cfg)?);
    Ok(st.done())
}

fn exp_moment_cm(cfg: &Config) -> shiftlab_core::Result<Observation> {
    let s = apply(TransformTag::ExpMoment, SequenceDef::bergman())?;
    let mut st = Statuses::default();
    st.push("cm of moments", &completely_monotone_verdict(&MomentSequence::new(&s), 12, 40, cfg)?);
    Ok(st.done())
}

fn gamma_cesaro(cfg: &Config) -> shiftlab_core::Result<Observation> {
    let c = apply(TransformTag::Cesaro, bergman_sq())?;
    let xs = c.rationals(31)?.expect("Cesàro of rationals is rational");
    let mut exact = true;
    let mut enclosed = true;
    for (n, x) in xs.iter().enumerate() {
        let want = (int(n as i64 + 2) - harmonic(n as u64 + 2)) / int(n as i64 + 1);
        exact &= *x == want;
        if n <= 20 {
            let (_, enc) = gamma_cesaro_weights(n, cfg.start_bits)?;
            enclosed &= enc.contains_rational(x);
        }
    }
    let v = completely_alternating_verdict(&c, 12, 40, cfg)?;
    let mut st = Statuses::default();
    st.push("ca", &v);
    let mut o = st.done();
    o.observed = Expectation::Statuses(vec![
        item("(n+2−H_{n+2})/(n+1), n ≤ 30", if exact { Status::Pass } else { Status::Fail }),
        item("digamma enclosure, n ≤ 20", if enclosed { Status::Pass } else { Status::Fail }),
        item("ca", v.status),
    ]);
    Ok(o)
}

fn aluthge_mid(cfg: &Config) -> shiftlab_core::Result<Observation> {
    let s = apply(TransformTag::Aluthge, SequenceDef::bergman())?;
    let mut st = Statuses::default();
    st.push("mid", &mid_verdict(&s, 12, 40, cfg)?);
    Ok(st.done())
}

fn mean_transform_bergman(cfg: &Config) -> shiftlab_core::Result<Observation> {
    let mut st = Statuses::default();
    for (label, t) in [("t=0", int(0)), ("t=1/4", rat(1, 4)), ("t=1/2", rat(1, 2))] {
        let s = apply(TransformTag::GeneralizedMean { t }, SequenceDef::bergman())?;
        st.push(format!("mid {label}"), &mid_verdict(&s, 12, 40, cfg)?);
    }
    Ok(st.done())
}

fn hyperexpansive_reciprocal(cfg: &Config) -> shiftlab_core::Result<Observation> {
    let d = SequenceDef::dirichlet();
    let mut st = Statuses::default();
    st.push("hyperexpansive dirichlet", &hyperexpansive_verdict(&d, 16, 64, cfg)?);
    st.push("mid reciprocal", &mid_verdict(&apply(TransformTag::Reciprocal, d)?, 16, 64, cfg)?);
    Ok(st.done())
}

fn expansivity_p(cfg: &Config) -> shiftlab_core::Result<Observation> {
    let prof = expansivity_power_profile(&int(2), &rat(3, 2), &[int(1), int(2)], cfg)?;
    let items = prof
        .iter()
        .map(|e| {
            let sat = match e.satisfied {
                Some(true) => "satisfied",
                Some(false) => "not satisfied",
                None => "undecided",
            };
            item(format!("f({})", e.p), format!("{} ({sat})", e.value.render()))
        })
        .collect();
    Ok(obs(Expectation::Values(items), "α0² = 2, α1² = 3/2"))
}

fn exp_bergman_evidence(cfg: &Config) -> shiftlab_core::Result<Observation> {
    // e^{x_n − 1} with x_n = (n+1)/(n+2), whose supremum is 1.
    let s = apply(TransformTag::ExpNormalized, bergman_sq())?;
    let mut st = Statuses::default();
    st.push("ca", &completely_alternating_verdict(&s, 16, 64, cfg)?);
    st.push("log-ca", &log_completely_alternating_verdict(&s, 16, 64, cfg)?);
    Ok(st.done())
}

fn registry() -> Vec<Claim> {
    use Status::{Fail, Pass};
    let c = |id, description, citation, expected, check: Check| Claim {
        record: ClaimRecord {
            id,
            description,
            evidence_only: expected == Expectation::Evidence,
            expected,
            citation,
        },
        check,
    };
    vec![
        c(
            "power-orders",
            "Alternation orders of ((n+1)/(n+2))^m for m = 2..5",
            "((n+1)/(n+2))^2 is 8- but not 9-alternating, the cube 3- but not 4-, the fourth power 2- but not 3-, the fifth not even 2-alternating",
            Expectation::Orders(vec![item("m=2", 8), item("m=3", 3), item("m=4", 2), item("m=5", 1)]),
            power_orders,
        ),
        c(
            "cube-not-ca",
            "((n+1)/(n+2))^3 is log completely alternating but not completely alternating",
            "the cube of the Bergman weights squared is log completely alternating but not completely alternating",
            statuses(&[("log-ca", Pass), ("ca", Fail)]),
            cube_not_ca,
        ),
        c(
            "sabcd-closed-form",
            "Closed form of the differences of S(1,s,1,t) weights squared",
            "∇^m(α_n²) = m!(s−t)/∏_{i=0}^m (n+t+i) for the shift with weights √((n+s)/(n+t))",
            identity(&["∇^m α² = m!(s−t)/∏(n+t+i)"]),
            sabcd_closed_form,
        ),
        c(
            "link-identity",
            "Differences of log moments against differences of log weights squared",
            "∇^{k+1} ln γ_n = −∇^k ln α_n²",
            identity(&["sign ∇^{k+1} ln γ = −sign ∇^k ln α²"]),
            link_identity,
        ),
        c(
            "cesaro-identity",
            "Cesàro transform difference identity",
            "differences of the Cesàro transform are weighted averages of differences of the sequence",
            identity(&["Cesàro difference identity"]),
            cesaro_identity,
        ),
        c(
            "lk-agler",
            "Lévy–Khintchin triple of the Agler shifts",
            "1/j + ∫(1−t^n)(j−1)t^{j−1} dt reproduces the Agler weights squared",
            identity(&["ψ(n) = (n+1)/(n+j)"]),
            lk_agler,
        ),
        c(
            "berger-agler",
            "Berger measures of the Agler shifts",
            "the Berger measure of A_j is (j−1)(1−t)^{j−2} dt",
            identity(&["∫ t^n (j−1)(1−t)^{j−2} dt = γ_n"]),
            berger_agler,
        ),
        c(
            "berger-logpower",
            "Moments of the log-power Berger density",
            "the density (1/Γ(q))(−ln u)^{q−1} du on (0,1); its moments are (n+1)^{−q}, not (n+1)^{−1/q}",
            identity(&["moments of (−ln u)^{q−1}/Γ(q) are (n+1)^{−q}"]),
            berger_logpower,
        ),
        c(
            "geometric-gap-ca",
            "Geometric-gap shift with p = 1/2",
            "the shift with weights √(1 − p^{2n+2}) is subnormal and moment infinitely divisible",
            statuses(&[("ca of weights squared", Pass), ("mid", Pass)]),
            geometric_gap_ca,
        ),
        c(
            "euler-ca",
            "Euler sequence H_{n+1} − ln(n+2)",
            "H_{n+1} − ln(n+2) is completely alternating and increases to the Euler constant; the shift is MID",
            statuses(&[("ca", Pass), ("mid", Pass)]),
            euler_ca,
        ),
        c(
            "exp-moment-cm",
            "Exponential moment lift of the Bergman shift",
            "the moments e^{γ_n − 1} of the Bergman shift form a completely monotone sequence",
            statuses(&[("cm of moments", Pass)]),
            exp_moment_cm,
        ),
        c(
            "gamma-cesaro",
            "Cesàro transform of the Bergman weights squared",
            "the Cesàro transform of (n+1)/(n+2) is (n+2−H_{n+2})/(n+1), expressible through digamma, and completely alternating",
            statuses(&[
                ("(n+2−H_{n+2})/(n+1), n ≤ 30", Pass),
                ("digamma enclosure, n ≤ 20", Pass),
                ("ca", Pass),
            ]),
            gamma_cesaro,
        ),
        c(
            "aluthge-mid",
            "Aluthge transform of the Bergman shift",
            "if W_α is MID then so is its Aluthge transform",
            statuses(&[("mid", Pass)]),
            aluthge_mid,
        ),
        c(
            "mean-transform-bergman",
            "Generalized mean transforms of the Bergman shift",
            "the mean transform of the Bergman shift is MID",
            statuses(&[("mid t=0", Pass), ("mid t=1/4", Pass), ("mid t=1/2", Pass)]),
            mean_transform_bergman,
        ),
        c(
            "hyperexpansive-reciprocal",
            "Reciprocal of a completely hyperexpansive shift",
            "the reciprocal of a completely hyperexpansive shift is not only subnormal but moment infinitely divisible",
            statuses(&[("hyperexpansive dirichlet", Pass), ("mid reciprocal", Pass)]),
            hyperexpansive_reciprocal,
        ),
        c(
            "expansivity-p",
            "2-expansivity is not preserved under p-th powers",
            "1 − 2α_0^{2p} + α_0^{2p} α_1^{2p} ≤ 0 can fail for p = 2 when it holds for p = 1",
            Expectation::Values(vec![item("f(1)", "0 (satisfied)".into()), item("f(2)", "2 (not satisfied)".into())]),
            expansivity_p,
        ),
        c(
            "remark52-evidence",
            "Is e^{(n+1)/(n+2) − 1} completely alternating?",
            "open question: whether the weights e^{(n+1)/(n+2) − 1} are completely alternating and not merely log completely alternating",
            Expectation::Evidence,
            exp_bergman_evidence,
        ),
    ]
}

/// Registry ids in order.
pub fn ids() -> Vec<&'static str> {
    registry().iter().map(|c| c.record.id).collect()
}

pub fn records() -> Vec<ClaimRecord> {
    registry().into_iter().map(|c| c.record).collect()
}

/// Run the named claims (all of them when `only` is empty) in parallel;
/// results come back in registry order.
pub fn verify(only: &[String], cfg: &Config) -> Result<Vec<ClaimResult>, String> {
    let all = registry();
    if let Some(bad) = only.iter().find(|id| !all.iter().any(|c| c.record.id == id.as_str())) {
        return Err(format!("unknown claim id {bad:?}; known ids: {}", ids().join(", ")));
    }
    let chosen: Vec<Claim> = all
        .into_iter()
        .filter(|c| only.is_empty() || only.iter().any(|id| id == c.record.id))
        .collect();
    Ok(chosen.par_iter().map(|c| run_claim(c, cfg)).collect())
}

fn run_claim(c: &Claim, cfg: &Config) -> ClaimResult {
    let r = &c.record;
    let (observed, status, detail) = match (c.check)(cfg) {
        Err(e) => (None, ClaimStatus::Error, e.to_string()),
        Ok(o) => {
            let status = if r.evidence_only {
                ClaimStatus::Evidence
            } else if o.observed == r.expected {
                ClaimStatus::Match
            } else if o.undecided {
                ClaimStatus::Undecided
            } else {
                ClaimStatus::Mismatch
            };
            (Some(o.observed), status, o.detail)
        }
    };
    ClaimResult {
        id: r.id,
        citation: r.citation,
        expected: r.expected.clone(),
        observed,
        status,
        detail,
    }
}

/// Plain-text table of `(claim, expected, observed, status)`.
pub fn render_table(results: &[ClaimResult]) -> String {
    let header = ["claim", "expected", "observed", "status"].map(String::from);
    let rows: Vec<[String; 4]> = std::iter::once(header).chain(results.iter().map(ClaimResult::row)).collect();
    let widths: Vec<usize> = (0..4)
        .map(|i| rows.iter().map(|r| r[i].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in &rows {
        let cells: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}
