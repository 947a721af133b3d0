//! Acceptance suite: one test per release criterion. Each test prints a
//! single `criterion N: PASS|FAIL` line (visible with `--nocapture` or on
//! failure). Tests serialize on a global lock so the timed criterion is not
//! skewed by concurrent work.

use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use convergence::{
    bertrand_test, build_b_convergent, build_b_divergent, build_b_from_p, build_p_divergent,
    build_p_from_b_convergent, build_xi_convergent, build_xi_covering, catalog_entries,
    find_entry, gauss_test, kummer_statistic, raabe_statistic, raabe_test, ratio_test,
    verify_witness, weighted_partial_sum, Exact, Float, Outcome, ParamSequence, ParseErrorKind,
    PrecisionConfig, PSource, Rationality, Scalar, SeriesHandle, Status, TermExpr, Window,
    WitnessBundle, WitnessKind,
};
use num_bigint::BigInt;
use num_rational::BigRational;

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn cfg() -> PrecisionConfig {
    PrecisionConfig::new(256)
}

fn entry_series(name: &str) -> SeriesHandle<Exact> {
    find_entry(name).expect("catalog entry").series(cfg())
}

fn q(num: i64, den: i64) -> Exact {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn criterion(n: u32, ok: bool, detail: &str) {
    println!("criterion {n}: {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n}: {detail}");
}

#[test]
fn criterion_01_catalog_battery() {
    let _guard = serial();
    let started = Instant::now();
    let window = Window::new(32, 4096);
    let mut contradictions = 0usize;
    let mut undecided = 0usize;
    fn battery<S: convergence::Scalar>(
        entry: &convergence::CatalogEntry,
        window: Window,
    ) -> [Result<convergence::Verdict, convergence::SeriesError>; 4] {
        let a: SeriesHandle<S> = entry.series(cfg());
        let af: SeriesHandle<Float> = entry.series(cfg());
        [
            ratio_test(&a, window),
            raabe_test(&a, window),
            bertrand_test(&af, window),
            gauss_test(&a, window),
        ]
    }
    for entry in catalog_entries() {
        let mut decided = false;
        let results = match entry.parsed().classify() {
            Rationality::ExactRational => battery::<Exact>(entry, window),
            Rationality::Transcendental => battery::<Float>(entry, window),
        };
        for verdict in results {
            let v = verdict.unwrap_or_else(|e| panic!("{}: {e}", entry.name));
            match v.outcome {
                Outcome::Inconclusive => {}
                Outcome::Converges => {
                    decided = true;
                    if entry.status != Status::Convergent {
                        contradictions += 1;
                    }
                }
                Outcome::Diverges => {
                    decided = true;
                    if entry.status != Status::Divergent {
                        contradictions += 1;
                    }
                }
            }
        }
        if !decided {
            undecided += 1;
        }
    }
    let elapsed = started.elapsed();
    let ok = catalog_entries().len() >= 20
        && contradictions == 0
        && undecided <= 2
        && elapsed < Duration::from_secs(30);
    criterion(
        1,
        ok,
        &format!(
            "{} entries, {contradictions} contradiction(s), {undecided} undecided, {elapsed:?}",
            catalog_entries().len()
        ),
    );
}

#[test]
fn criterion_02_raabe_equals_shifted_kummer() {
    let _guard = serial();
    let one = q(1, 1);
    let mut checked = 0usize;
    for entry in catalog_entries() {
        let a: SeriesHandle<Exact> = entry.series(cfg());
        if a.rationality() != Rationality::ExactRational {
            continue;
        }
        let lo = a.start().max(2);
        for n in lo..=1000 {
            let raabe = raabe_statistic(&a, n).unwrap();
            let kummer = kummer_statistic(&a, &ParamSequence::Linear, n).unwrap();
            // Difference-based equality: comparing the unreduced values
            // directly recurses per continued-fraction quotient.
            let diff = raabe.sub_unreduced(&kummer.add_unreduced(&one));
            assert!(Scalar::is_zero(&diff), "{} at n={n}", entry.name);
            checked += 1;
        }
    }
    criterion(2, checked > 0, "no exact-rational entries checked");
}

#[test]
fn criterion_03_exact_statistic_anchors() {
    let _guard = serial();
    let geo = entry_series("geometric:1/2");
    let harmonic = entry_series("harmonic");
    let one = q(1, 1);
    let zero = q(0, 1);
    for n in 1..=1000 {
        assert_eq!(
            kummer_statistic(&geo, &ParamSequence::Ones, n).unwrap(),
            one,
            "geometric kappa at n={n}"
        );
        assert_eq!(
            kummer_statistic(&harmonic, &ParamSequence::Linear, n).unwrap(),
            zero,
            "harmonic kappa at n={n}"
        );
    }
    criterion(3, true, "");
}

#[test]
fn criterion_04_telescoping_identity() {
    let _guard = serial();
    let pairs: [(&str, ParamSequence); 3] = [
        ("geometric:1/2", ParamSequence::Ones),
        ("p:2", ParamSequence::Linear),
        ("harmonic", ParamSequence::Linear),
    ];
    let c = cfg();
    for (name, p) in pairs {
        let a = entry_series(name);
        for m in [10u64, 100, 1000] {
            let mut lhs = q(0, 1);
            for n in 1..=m {
                let pn: Exact = p.eval(n, &c).unwrap();
                let pn1: Exact = p.eval(n + 1, &c).unwrap();
                lhs += pn * a.term(n).unwrap() - pn1 * a.term(n + 1).unwrap();
            }
            let p1: Exact = p.eval(1, &c).unwrap();
            let pm1: Exact = p.eval(m + 1, &c).unwrap();
            let rhs = p1 * a.term(1).unwrap() - pm1 * a.term(m + 1).unwrap();
            assert_eq!(lhs, rhs, "{name} at m={m}");
        }
    }
    criterion(4, true, "");
}

#[test]
fn criterion_05_lemma1_witness_geometric() {
    let _guard = serial();
    let a = entry_series("geometric:1/2");
    let xi = build_xi_convergent(&a, 32).unwrap();
    let xi_ok = xi
        .xi()
        .iter()
        .enumerate()
        .all(|(i, &x)| x == 2 * (i as u64 + 1) + 1);

    let m = 64u64;
    let cover = build_xi_covering(&a, m).unwrap();
    let b = build_b_convergent(&a, &cover, m, false).unwrap();
    let values = b.values_upto(m);
    let monotone = values.windows(2).all(|w| w[0] <= w[1]);

    let sum = weighted_partial_sum(&a, &b, m).unwrap();
    let total = q(3, 4);
    let below = sum < total;
    let gap = &total - &sum;
    // 2^50 = 1125899906842624
    let within = gap <= q(1, 1_125_899_906_842_624);

    criterion(
        5,
        xi_ok && monotone && below && within,
        &format!("xi_ok={xi_ok} monotone={monotone} below={below} within_2^-50={within} gap={gap}"),
    );
}

#[test]
fn criterion_06_lemma2_witness_harmonic() {
    let _guard = serial();
    let a = entry_series("harmonic");
    let m = 3_300_000u64;
    let (xi, b) = build_b_divergent(&a, m).unwrap();
    let prefix_ok = xi.xi().len() >= 6 && xi.xi()[..5] == [1, 3, 20, 393, 21431];

    // B carries 1/k on block k and never increases.
    let runs = b.runs();
    let mut blocks_ok = runs.len() >= 5;
    for (i, (start, value)) in runs.iter().take(5).enumerate() {
        blocks_ok &= *start == xi.xi()[i] && *value == q(1, i as i64 + 1);
    }
    let nonincreasing = runs.windows(2).all(|w| w[1].1 <= w[0].1);

    let bundle = WitnessBundle {
        xi: Some(xi),
        b: Some(b),
        p: None,
        c: None,
    };
    let report = verify_witness(WitnessKind::Lemma2, &a, &bundle, m).unwrap();
    let verified = report.failures.is_empty() && report.checked >= 5;

    criterion(
        6,
        prefix_ok && blocks_ok && nonincreasing && verified,
        &format!(
            "prefix_ok={prefix_ok} blocks_ok={blocks_ok} nonincreasing={nonincreasing} \
             checked={} failures={:?}",
            report.checked, report.failures
        ),
    );
}

#[test]
fn criterion_07_necessity_one_geometric() {
    let _guard = serial();
    let a = entry_series("geometric:1/2");
    let m = 1001u64;
    let cover = build_xi_covering(&a, m).unwrap();
    let b = build_b_convergent(&a, &cover, m, false).unwrap();
    let p = build_p_from_b_convergent(&a, &b, m).unwrap();

    assert_eq!(p.support, (1..=m).collect::<Vec<_>>());
    let first_ok = p.values[0] == q(3, 2);
    let positive = p.values.iter().all(|v| *v > q(0, 1));
    let margin_ok = p.margin == Some(q(2, 1));

    let two = q(2, 1);
    let mut margin_holds = true;
    for n in 3..=1000u64 {
        let an = a.term(n).unwrap();
        let an1 = a.term(n + 1).unwrap();
        let lhs = &p.values[(n - 1) as usize] * an - &p.values[n as usize] * &an1;
        margin_holds &= lhs >= &two * &an1;
    }

    criterion(
        7,
        first_ok && positive && margin_ok && margin_holds,
        &format!("first_ok={first_ok} positive={positive} margin_ok={margin_ok} margin_holds={margin_holds}"),
    );
}

#[test]
fn criterion_08_necessity_two_harmonic() {
    let _guard = serial();
    let a = entry_series("harmonic");
    let m = 1001u64;
    let (_, b) = build_b_divergent(&a, m).unwrap();
    let p = build_p_divergent(&a, &b, m, false).unwrap();
    assert_eq!(p.support, (1..=m).collect::<Vec<_>>());

    let mut nonpositive = true;
    for n in 1..=1000u64 {
        let lhs = &p.values[(n - 1) as usize] * a.term(n).unwrap()
            - &p.values[n as usize] * a.term(n + 1).unwrap();
        nonpositive &= lhs <= q(0, 1);
    }

    let one = q(1, 1);
    let mut reciprocal_sum = q(0, 1);
    for n in 1..=1000u64 {
        reciprocal_sum += &one / &p.values[(n - 1) as usize];
    }
    let exceeds_five = reciprocal_sum > q(5, 1);

    criterion(
        8,
        nonpositive && exceeds_five,
        &format!("nonpositive={nonpositive} exceeds_five={exceeds_five} sum={reciprocal_sum}"),
    );
}

#[test]
fn criterion_09_sufficiency_extraction() {
    let _guard = serial();
    let a = entry_series("geometric:1/2");
    let m = 1000u64;
    let expectations = [(q(1, 1), q(1, 1)), (q(1, 2), q(2, 1))];
    let mut ok = true;
    for (c, expected) in &expectations {
        let b = build_b_from_p(&a, PSource::Param(&ParamSequence::Ones), c, 1, m).unwrap();
        for n in b.first_index()..=m {
            ok &= b.value(n) == expected;
        }
    }
    criterion(9, ok, "extracted B does not match the exact constant");
}

#[test]
fn criterion_10_round_trip_identity() {
    let _guard = serial();
    let a = entry_series("geometric:1/2");
    let m = 257u64;
    let cover = build_xi_covering(&a, m).unwrap();
    let b = build_b_convergent(&a, &cover, m, false).unwrap();
    let p = build_p_from_b_convergent(&a, &b, m).unwrap();
    let c = p.margin.clone().expect("certified margin");

    let mut identity = true;
    for n in 1..=256u64 {
        let lhs = &p.values[(n - 1) as usize] * a.term(n).unwrap()
            - &p.values[n as usize] * a.term(n + 1).unwrap();
        identity &= lhs == a.term(n + 1).unwrap() * b.value(n + 1);
    }

    // The margin is certified from n = 3 on, so extraction starts there.
    let b2 = build_b_from_p(&a, PSource::Witness(&p), &c, 2, m).unwrap();
    let mut reproduced = true;
    for n in 2..=256u64 {
        reproduced &= &c * b2.value(n + 1) == *b.value(n + 1);
    }

    criterion(
        10,
        identity && reproduced,
        &format!("identity={identity} reproduced={reproduced}"),
    );
}

#[test]
fn criterion_11_parser_suite() {
    let _guard = serial();
    let corpus = [
        "1/2^n",
        "1/n",
        "1/n^2",
        "1/n^3",
        "1/n^4",
        "1/(n*ln(n))",
        "1/(n*ln(n)^2)",
        "n/(n+1)",
        "1/n!",
        "n^2/2^n",
        "n/2^n",
        "(n+1)/(n^2+1)",
        "1/sqrt(n)",
        "1/sqrt(n^3+n)",
        "exp(-n)",
        "2^-n",
        "1/(2*n+1)",
        "3/4",
        "-n^2",
        "2+3*4",
        "2^3^2",
        "1/(n+1)",
        "n",
        "1",
        "ln(n)/n^2",
        "sqrt(n)/(n^2+1)",
        "1/(n^2-n+1)",
        "5/(3*n)",
        "(n+2)/n^3",
        "1/4^n",
        "n^3/3^n",
        "1/(n*(n+1))",
        "ln(n+1)/n^3",
        "1/exp(n)",
        "n!/n^n",
    ];
    assert!(corpus.len() >= 30);
    let mut round_trip = true;
    for src in corpus {
        let parsed = TermExpr::parse(src).unwrap_or_else(|e| panic!("{src}: {e}"));
        let printed = parsed.to_string();
        let reparsed = TermExpr::parse(&printed).unwrap_or_else(|e| panic!("{printed}: {e}"));
        round_trip &= reparsed == parsed;
    }

    let c = cfg();
    let eval = |src: &str, n: u64| -> Exact {
        TermExpr::parse(src).unwrap().evaluate(n, &c).unwrap()
    };
    let precedence = eval("2+3*4", 1) == q(14, 1)
        && eval("2^3^2", 1) == q(512, 1)
        && eval("-n^2", 3) == q(-9, 1);

    let expect_err = |src: &str, kind: ParseErrorKind, position: usize| -> bool {
        match TermExpr::parse(src) {
            Err(e) => e.kind == kind && e.position == position,
            Ok(_) => false,
        }
    };
    let errors = expect_err("n @ 2", ParseErrorKind::UnknownCharacter, 2)
        && expect_err("1.", ParseErrorKind::MalformedNumber, 0)
        && expect_err("n!!", ParseErrorKind::UnexpectedToken, 2)
        && expect_err("(1+2", ParseErrorKind::UnbalancedParen, 0)
        && expect_err("sin(n)", ParseErrorKind::UnknownFunction, 0)
        && expect_err("(n/2)!", ParseErrorKind::FactorialOfNonInteger, 0);

    criterion(
        11,
        round_trip && precedence && errors,
        &format!("round_trip={round_trip} precedence={precedence} errors={errors}"),
    );
}

#[test]
fn criterion_12_deterministic_json() {
    let _guard = serial();
    let bin = env!("CARGO_BIN_EXE_convergence");
    let invocations: [&[&str]; 2] = [
        &["analyze", "--term", "1/2^n", "--format", "json"],
        &[
            "witness",
            "--term",
            "1/2^n",
            "--mode",
            "lemma1",
            "--catalog",
            "geometric:1/2",
            "--format",
            "json",
        ],
    ];
    let mut ok = true;
    for args in invocations {
        let run = || {
            let out = Command::new(bin).args(args).output().expect("spawn CLI");
            assert!(out.status.success(), "{args:?}: {:?}", out.status);
            out.stdout
        };
        let first = run();
        let second = run();
        ok &= !first.is_empty() && first == second;
    }
    criterion(12, ok, "outputs differ between identical invocations");
}
