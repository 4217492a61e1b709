use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use shiftlab_core::classifiers::{
    completely_alternating_verdict, completely_monotone_verdict, k_alternating_verdict,
    log_completely_alternating_verdict, n_contractive_verdict, Status,
};
use shiftlab_core::config::Config;
use shiftlab_core::hankel::{hankel_matrix, is_psd_exact};
use shiftlab_core::measures::{berger_moment, lk_sequence_at, LevyKhintchinTriple, Measure};
use shiftlab_core::numerics::rational::pow_int;
use shiftlab_core::numerics::{int, rat, LogCombination, LogValue, Rational, Sign};
use shiftlab_core::sequences::{
    difference_table, parse_sequence_json, LogDifference, MomentSequence, PrefixKind, RationalFn, Sequence,
    SequenceDef, TableEntry, Term,
};
use shiftlab_core::transforms::{apply, TransformTag};

fn cfg() -> Config {
    Config::default()
}

fn rational(lo: i64, hi: i64, max_den: i64) -> impl Strategy<Value = Rational> {
    (1..=max_den).prop_flat_map(move |d| (lo * d..=hi * d).prop_map(move |n| Rational::new(n.into(), d.into())))
}

fn positive(max: i64, max_den: i64) -> impl Strategy<Value = Rational> {
    rational(0, max, max_den).prop_map(|r| r + rat(1, 50))
}

/// `a + bn + Σ mass (1 − loc^n)`: completely alternating by construction.
#[derive(Debug, Clone)]
struct Lk {
    a: Rational,
    b: Rational,
    atoms: Vec<(Rational, Rational)>,
}

impl Lk {
    fn at(&self, n: usize) -> Rational {
        let mut v = &self.a + &self.b * int(n as i64);
        for (loc, mass) in &self.atoms {
            v += mass * (Rational::one() - pow_int(loc, n as i64).unwrap());
        }
        v
    }

    fn values(&self, len: usize) -> Vec<Rational> {
        (0..len).map(|n| self.at(n)).collect()
    }
}

fn lk() -> impl Strategy<Value = Lk> {
    (
        positive(2, 7),
        rational(0, 1, 5),
        prop::collection::vec((rational(0, 1, 9).prop_filter("loc < 1", |l| *l < Rational::one()), positive(3, 4)), 1..=3),
    )
        .prop_map(|(a, b, atoms)| Lk { a, b, atoms })
}

fn positive_seq(len: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(positive(3, 7), len)
}

/// `e^{−tψ}` for a sequence `ψ`.
struct ExpNeg<'a> {
    psi: &'a SequenceDef,
    t: Rational,
}

impl Sequence for ExpNeg<'_> {
    fn terms(&self, len: usize) -> shiftlab_core::Result<Vec<Term>> {
        Ok(self.psi.terms(len)?.iter().map(|x| Term::exp_of(x).pow(&-self.t.clone())).collect())
    }

    fn label(&self) -> String {
        format!("exp(-{} {})", self.t, self.psi.label())
    }
}

/// `Σ (−1)^i C(k,i) x(n+i)` straight from the definition.
fn nabla_oracle(xs: &[Rational], k: usize, n: usize) -> Rational {
    let mut c = Rational::one();
    let mut sum = Rational::zero();
    for i in 0..=k {
        let term = &c * &xs[n + i];
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        c = c * int((k - i) as i64) / int(i as i64 + 1);
    }
    sum
}

fn det(m: &[Vec<Rational>]) -> Rational {
    if m.is_empty() {
        return Rational::one();
    }
    (0..m.len())
        .map(|c| {
            let minor: Vec<Vec<Rational>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
                .collect();
            let t = &m[0][c] * det(&minor);
            if c % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum()
}

fn psd_by_minors(m: &[Vec<Rational>]) -> bool {
    let len = m.len();
    (1u32..(1 << len)).all(|mask| {
        let idx: Vec<usize> = (0..len).filter(|i| mask & (1 << i) != 0).collect();
        let sub: Vec<Vec<Rational>> = idx.iter().map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect()).collect();
        !det(&sub).is_negative()
    })
}

fn symmetric(len: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(rational(-3, 3, 3), len * len).prop_map(move |xs| {
        let mut m = vec![vec![Rational::zero(); len]; len];
        for i in 0..len {
            for j in i..len {
                m[i][j] = xs[i * len + j].clone();
                m[j][i] = xs[i * len + j].clone();
            }
        }
        m
    })
}

/// `B Bᵀ`: positive semidefinite, frequently singular.
fn gram(len: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    (1..=len).prop_flat_map(move |r| {
        prop::collection::vec(rational(-2, 2, 3), len * r).prop_map(move |b| {
            (0..len)
                .map(|i| (0..len).map(|j| (0..r).map(|l| &b[i * r + l] * &b[j * r + l]).sum()).collect())
                .collect()
        })
    })
}

fn family_spec() -> impl Strategy<Value = String> {
    let q = || positive(3, 5).prop_map(|r| format!("\"{r}\""));
    prop_oneof![
        (1u64..8).prop_map(|j| format!(r#"{{"family":"agler","j":{j}}}"#)),
        (q(), q(), q(), q()).prop_map(|(a, b, c, d)| format!(r#"{{"family":"sabcd","a":{a},"b":{b},"c":{c},"d":{d}}}"#)),
        prop::collection::vec(rational(1, 9, 1).prop_map(|r| format!("\"{}\"", r / int(10))), 1..3)
            .prop_map(|ps| format!(r#"{{"family":"geometric_gap","p":[{}]}}"#, ps.join(","))),
        Just(r#"{"family":"euler"}"#.to_string()),
        Just(r#"{"family":"dirichlet"}"#.to_string()),
        q().prop_map(|c| format!(r#"{{"family":"constant","c":{c}}}"#)),
        prop::collection::vec(q(), 1..5).prop_map(|ws| format!(r#"{{"explicit":{{"weights":[{}],"tail":{{"family":"unilateral"}}}}}}"#, ws.join(","))),
    ]
}

fn wrap_transform(inner: String, pick: u8) -> String {
    match pick % 6 {
        0 => inner,
        1 => format!(r#"{{"transform":{{"name":"aluthge","of":{inner}}}}}"#),
        2 => format!(r#"{{"transform":{{"name":"generalized_mean","t":"1/4","of":{inner}}}}}"#),
        3 => format!(r#"{{"transform":{{"name":"schur_power","p":"3/2","of":{inner}}}}}"#),
        4 => format!(r#"{{"transform":{{"name":"restriction","r":3,"of":{inner}}}}}"#),
        _ => format!(r#"{{"family":"power_of","of":{inner},"m":"2"}}"#),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn difference_table_matches_definition(xs in positive_seq(14), k in 0usize..6) {
        let s = SequenceDef::explicit(PrefixKind::Weights, xs.clone(), None).unwrap();
        let t = difference_table(&s, k, 14 - k - 1, 64).unwrap();
        for n in 0..14 - k {
            prop_assert_eq!(t.entry(k, n), &TableEntry::Exact(nabla_oracle(&xs, k, n)));
        }
    }

    #[test]
    fn verdicts_are_identical_across_thread_counts(xs in positive_seq(24)) {
        let s = SequenceDef::explicit(PrefixKind::Weights, xs, None).unwrap();
        let run = || {
            (
                completely_alternating_verdict(&s, 6, 16, &cfg()).unwrap(),
                log_completely_alternating_verdict(&s, 6, 16, &cfg()).unwrap(),
                completely_monotone_verdict(&s, 6, 16, &cfg()).unwrap(),
            )
        };
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = one.install(run);
        prop_assert_eq!(&serial, &run());
        prop_assert_eq!(&serial, &run());
    }

    #[test]
    fn failure_witness_is_the_first_violation(xs in positive_seq(20)) {
        let s = SequenceDef::explicit(PrefixKind::Weights, xs.clone(), None).unwrap();
        let v = completely_alternating_verdict(&s, 5, 12, &cfg()).unwrap();
        let first = (1..=5).flat_map(|k| (0..=12).map(move |n| (k, n))).find(|&(k, n)| nabla_oracle(&xs, k, n).is_positive());
        prop_assert_eq!(v.witness_cell(), first);
        if let Some(w) = &v.witness {
            prop_assert_eq!(w.value.clone(), Some(nabla_oracle(&xs, w.k, w.n)));
        }
    }

    #[test]
    fn k_alternating_rows_agree_with_complete_alternation(xs in positive_seq(20)) {
        let s = SequenceDef::explicit(PrefixKind::Weights, xs, None).unwrap();
        let ca = completely_alternating_verdict(&s, 5, 12, &cfg()).unwrap();
        let first_bad_row = (1..=5).find(|&k| k_alternating_verdict(&s, k, 12, &cfg()).unwrap().is_fail());
        prop_assert_eq!(ca.witness_cell().map(|c| c.0), first_bad_row);
    }

    #[test]
    fn contractivity_matches_monotone_rows(ws in prop::collection::vec(rational(1, 12, 6).prop_map(|r| r / int(10)), 18), order in 1usize..5) {
        let s = SequenceDef::explicit(PrefixKind::Weights, ws, None).unwrap();
        let v = n_contractive_verdict(&s, order, 10, &cfg()).unwrap();
        let table = difference_table(&MomentSequence::new(&s), order, 10, 64).unwrap();
        let first_bad = (0..=10).find(|&m| table.entry(order, m).sign() == Sign::Negative);
        prop_assert_eq!(v.witness_cell(), first_bad.map(|m| (order, m)));
        prop_assert_eq!(v.status == Status::Pass, first_bad.is_none());
    }

    #[test]
    fn lk_sequences_are_completely_alternating(l in lk()) {
        let s = RationalFn::new("lk", move |n| l.at(n));
        let v = completely_alternating_verdict(&s, 10, 20, &cfg()).unwrap();
        prop_assert_eq!(v.status, Status::Pass);
    }

    #[test]
    fn ca_implies_nondecreasing(xs in prop_oneof![positive_seq(20), lk().prop_map(|l| l.values(20))]) {
        let s = SequenceDef::explicit(PrefixKind::Weights, xs.clone(), None).unwrap();
        if completely_alternating_verdict(&s, 3, 15, &cfg()).unwrap().is_pass() {
            for n in 0..16 {
                prop_assert!(xs[n] <= xs[n + 1]);
            }
        }
    }

    #[test]
    fn ca_implies_log_ca(l in lk()) {
        // Positive completely alternating sequences are log completely alternating.
        let s = RationalFn::new("lk", move |n| l.at(n));
        prop_assume!(completely_alternating_verdict(&s, 8, 20, &cfg()).unwrap().is_pass());
        prop_assert!(log_completely_alternating_verdict(&s, 8, 20, &cfg()).unwrap().is_pass());
    }

    #[test]
    fn schur_powers_keep_log_ca_verdict(xs in prop_oneof![positive_seq(30), lk().prop_map(|l| l.values(30))], pn in 1i64..12, pd in 1i64..5) {
        let p = rat(pn, pd);
        let s = SequenceDef::explicit(PrefixKind::Weights, xs, None).unwrap();
        let base = log_completely_alternating_verdict(&s, 8, 20, &cfg()).unwrap();
        let sp = SequenceDef::power_of(s, p).unwrap();
        let v = log_completely_alternating_verdict(&sp, 8, 20, &cfg()).unwrap();
        prop_assert_eq!(v.status, base.status);
        prop_assert_eq!(v.witness_cell(), base.witness_cell());
    }

    #[test]
    fn aluthge_keeps_log_ca(l in lk()) {
        // ln of the Aluthge weights squared is the average of two shifts of
        // ln α², so log complete alternation carries over.
        let sq = l.values(40);
        let s = SequenceDef::explicit(PrefixKind::WeightsSquared, sq, None).unwrap();
        let before = log_completely_alternating_verdict(&s.squared(), 8, 20, &cfg()).unwrap();
        prop_assume!(before.is_pass());
        let a = apply(TransformTag::Aluthge, s).unwrap();
        prop_assert!(log_completely_alternating_verdict(&a.squared(), 8, 20, &cfg()).unwrap().is_pass());
    }

    #[test]
    fn link_identity_signs(ws in positive_seq(24)) {
        let w = SequenceDef::explicit_weights(ws).unwrap();
        let gamma = MomentSequence::new(&w).terms(24).unwrap();
        let sq = w.squared().terms(23).unwrap();
        for k in 0..6 {
            for n in 0..12 {
                let lhs = LogDifference::from_terms(&gamma, k + 1, n).sign(&cfg()).unwrap();
                let rhs = LogDifference::from_terms(&sq, k, n).sign(&cfg()).unwrap().negate();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn psd_agrees_with_minors(m in (1usize..=4).prop_flat_map(|len| prop_oneof![symmetric(len), gram(len)])) {
        prop_assert_eq!(is_psd_exact(&m).unwrap(), psd_by_minors(&m));
    }

    #[test]
    fn hankel_entries_are_moments(ws in positive_seq(12), n in 0usize..4, k in 1usize..4) {
        let w = SequenceDef::explicit_weights(ws).unwrap();
        let g = MomentSequence::new(&w);
        let gs = g.rationals(n + 2 * k + 1).unwrap().unwrap();
        let h = hankel_matrix(&g, n, k).unwrap();
        for i in 0..=k {
            for j in 0..=k {
                prop_assert_eq!(h.entry(i, j), &gs[n + i + j]);
            }
        }
    }

    #[test]
    fn atomic_lk_reproduces_geometric_gap(pn in 1i64..20, pd in 2i64..21) {
        prop_assume!(pn < pd);
        let p = rat(pn, pd);
        let triple = LevyKhintchinTriple {
            a: Rational::zero(),
            b: Rational::zero(),
            mu: Measure::dirac(&p * &p).unwrap(),
        };
        let sq = SequenceDef::geometric_gap(vec![p]).unwrap().squared().rationals(25).unwrap().unwrap();
        for (n, x) in sq.iter().enumerate() {
            prop_assert_eq!(&lk_sequence_at(&triple, n, 1).unwrap(), x);
        }
    }

    #[test]
    fn spec_json_round_trips(spec in family_spec(), pick in 0u8..6) {
        let text = wrap_transform(spec, pick);
        let s = match parse_sequence_json(&text) {
            Ok(s) => s,
            // Some random parameters fall outside a family's domain.
            Err(_) => return Ok(()),
        };
        let back = parse_sequence_json(&s.to_json().to_string()).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.label(), s.label());
    }

    #[test]
    fn measure_json_round_trips(atoms in prop::collection::vec((rational(0, 1, 8), positive(2, 5)), 1..4), cs in prop::collection::vec(rational(-3, 3, 4), 1..5)) {
        for m in [Measure::atomic(atoms.clone()).unwrap(), Measure::poly_density(cs.clone()).unwrap()] {
            let back = Measure::parse_json(&m.to_json().to_string()).unwrap();
            prop_assert_eq!(back, m);
        }
    }

    #[test]
    fn log_combination_sign_matches_floats(terms in prop::collection::vec((positive(5, 9), -4i64..5), 1..5)) {
        let lc = LogCombination::from_terms(terms.iter().map(|(b, e)| (b.clone(), int(*e)))).unwrap();
        let approx: f64 = terms
            .iter()
            .map(|(b, e)| *e as f64 * (num_traits::ToPrimitive::to_f64(b).unwrap()).ln())
            .sum();
        prop_assume!(approx.abs() > 1e-9);
        let sign = LogValue::from_logs(lc).sign(&cfg()).unwrap();
        prop_assert_eq!(sign, if approx > 0.0 { Sign::Positive } else { Sign::Negative });
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn exp_of_ca_families_is_completely_monotone(pick in 0usize..4, t in prop::sample::select(vec![rat(1, 2), int(1), int(2)])) {
        // Finite evidence that e^{−tψ} is completely monotone when ψ is
        // completely alternating.
        let psi = match pick {
            0 => SequenceDef::agler(2).unwrap().squared(),
            1 => SequenceDef::agler(4).unwrap().squared(),
            2 => SequenceDef::sabcd(int(1), int(1), int(1), int(2)).unwrap().squared(),
            _ => SequenceDef::sabcd(int(1), rat(1, 3), int(1), rat(5, 2)).unwrap().squared(),
        };
        let (k, n) = (8, 24);
        prop_assert!(completely_alternating_verdict(&psi, k, n, &cfg()).unwrap().is_pass());
        let e = ExpNeg { psi: &psi, t };
        let v = completely_monotone_verdict(&e, k - 1, n, &cfg()).unwrap();
        prop_assert!(!v.is_fail(), "{} failed at {:?}", e.label(), v.witness_cell());
        prop_assert!(v.undecided_cells.is_empty());
    }
}

#[test]
fn closed_form_ca_families_are_log_ca() {
    let mut fams: Vec<SequenceDef> = (2..=6).map(|j| SequenceDef::agler(j).unwrap().squared()).collect();
    fams.push(SequenceDef::sabcd(int(1), int(1), int(1), int(2)).unwrap().squared());
    fams.push(SequenceDef::sabcd(int(1), rat(1, 2), int(1), int(3)).unwrap().squared());
    fams.push(SequenceDef::geometric_gap(vec![rat(1, 2)]).unwrap().squared());
    fams.push(SequenceDef::geometric_gap(vec![rat(2, 3)]).unwrap().squared());
    for s in &fams {
        assert!(completely_alternating_verdict(s, 16, 64, &cfg()).unwrap().is_pass(), "{}", s.label());
        assert!(log_completely_alternating_verdict(s, 16, 64, &cfg()).unwrap().is_pass(), "{}", s.label());
    }
}

#[test]
fn log_power_moments_are_completely_monotone() {
    for q in 1..=3 {
        let m = Measure::log_power(int(q)).unwrap();
        let s = RationalFn::new(format!("log_power({q})"), move |n| berger_moment(&m, n).unwrap().exact().unwrap().clone());
        let v = completely_monotone_verdict(&s, 12, 40, &cfg()).unwrap();
        assert!(v.is_pass(), "q={q}: {:?}", v.witness_cell());
    }
}
