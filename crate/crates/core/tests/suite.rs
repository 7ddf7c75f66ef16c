use supercong_core::rational::{int, rat};
use supercong_core::report::{emit, run_suite, Format, RandomTrials, Report, Selection, SuiteConfig};
use supercong_core::verifier::{evaluate, holds_at, Params, Record, StatementId};

fn small_config() -> SuiteConfig {
    let mut c = SuiteConfig::new(
        Selection::List(vec![
            StatementId::Lemma2_1,
            StatementId::Theorem1_1,
            StatementId::CorC8,
            StatementId::AuxReflectH,
            StatementId::BgMao,
        ]),
        5,
        17,
    );
    c.identity_n_max = 3;
    c.x_set = vec![rat(-1, 3), int(2), rat(1, 7)];
    c.d_set = vec![int(1), rat(7, 2)];
    c.random_trials = Some(RandomTrials { count: 2, seed: 11 });
    c
}

fn render(report: &Report, format: Format) -> String {
    let mut buf = Vec::new();
    emit(report, format, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn json_emission_round_trips() {
    let report = run_suite(&small_config()).unwrap();
    let json = render(&report, Format::Json);
    assert_eq!(Report::from_json(&json).unwrap(), report);
}

#[test]
fn every_tuple_is_accounted_for() {
    let config = small_config();
    let report = run_suite(&config).unwrap();
    // identities: (3·2 grid + 2 random) pairs × n ∈ 0..=3
    let identity = 8 * 4;
    // primes 5, 7, 11, 13, 17
    let theorem = 5 * 3 * 2;
    let corollary = 5 * 2;
    let reflect = 5 + 7 + 11 + 13 + 17;
    let mao = 5 * 3;
    let t = &report.summary.totals;
    assert_eq!(t.records + t.skipped, (identity + theorem + corollary + reflect + mao) as u64);
    assert_eq!(t.records as usize, report.records.len());
    assert_eq!(t.skipped as usize, report.skipped.len());
    let per_statement: u64 = report
        .summary
        .statements
        .iter()
        .map(|s| s.pass + s.fail + s.skipped.values().sum::<u64>())
        .sum();
    assert_eq!(per_statement, t.records + t.skipped);
    // x = 1/7 is not 7-integral; d = 7/2 is not a 7-unit; COR_C8 starts at 7.
    assert!(report.skipped.iter().any(|s| s.reason == "x-not-p-integral"));
    assert!(report.skipped.iter().any(|s| s.reason == "d-not-unit"));
    assert!(report.skipped.iter().any(|s| s.reason == "prime-out-of-range"));
    assert_eq!(t.fail, 0);
}

#[test]
fn csv_has_one_row_per_record() {
    let report = run_suite(&small_config()).unwrap();
    let csv = render(&report, Format::Csv);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("statement,p,x,d,case,exponent,lhs,rhs,pass"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), report.records.len());
    assert!(rows.iter().all(|r| r.split(',').count() == 9));
    assert!(rows.iter().any(|r| r.starts_with("LEMMA_2_1,-,") && r.contains(",n=3,exact,")));
}

#[test]
fn parallel_and_serial_json_match() {
    let mut config = small_config();
    let serial = render(&run_suite(&config).unwrap(), Format::Json);
    config.parallelism = 3;
    let mut parallel = run_suite(&config).unwrap();
    parallel.config.parallelism = 1;
    assert_eq!(serial, render(&parallel, Format::Json));
}

#[test]
fn timings_are_opt_in() {
    let mut config = small_config();
    config.record_timings = true;
    let report = run_suite(&config).unwrap();
    assert!(report.summary.wall_clock_micros.is_some());
    let json = render(&report, Format::Json);
    assert!(json.contains("elapsed_micros"));
    config.record_timings = false;
    assert!(!render(&run_suite(&config).unwrap(), Format::Json).contains("elapsed_micros"));
}

#[test]
fn dual_reading_can_be_dropped() {
    let mut config = SuiteConfig::new(Selection::List(vec![StatementId::CorC4]), 7, 11);
    config.d_set = vec![int(2)];
    let with = run_suite(&config).unwrap();
    config.dual_reading = false;
    let without = run_suite(&config).unwrap();
    for (a, b) in with.records.iter().zip(&without.records) {
        match (a, b) {
            (Record::Congruence(a), Record::Congruence(b)) => {
                assert!(a.alternate.is_some());
                assert!(b.alternate.is_none());
                assert_eq!(a.pass, b.pass);
            }
            _ => panic!("congruence records expected"),
        }
    }
}

#[test]
fn passing_records_pass_at_every_smaller_exponent() {
    let params = Params {
        x: Some(rat(-2, 7)),
        d: Some(int(3)),
        ..Params::default()
    };
    for id in [StatementId::Theorem1_1, StatementId::Theorem1_3, StatementId::CorC2, StatementId::AuxCarlitz] {
        for p in [11, 13, 29] {
            let ev = evaluate(id, p, &params).unwrap();
            assert!(ev.holds(), "{id} at {p}");
            assert!((0..=ev.exponent).all(|e| holds_at(&ev, e)), "{id} at {p}");
        }
    }
}
