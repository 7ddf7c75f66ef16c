//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use supercong_core::binomial::{bridge, Family, Reading};
use supercong_core::padic::vp;
use supercong_core::rational::{int, parse_rational, rat};
use supercong_core::report::{run_suite, RandomTrials, Report, Selection, SuiteConfig};
use supercong_core::special::{bernoulli, euler_number, h11, harmonic, BernoulliTable};
use supercong_core::verifier::{
    check_corollary, check_theorem_1_1, evaluate, Params, Record, SideResidue, StatementId, VerificationRecord,
};
use supercong_core::BigRational;

use StatementId::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rats(items: &[&str]) -> Vec<BigRational> {
    items.iter().map(|s| parse_rational(s).unwrap()).collect()
}

struct Suites {
    /// Every congruence record produced by criteria 3 to 7, for the negative controls.
    congruences: Vec<VerificationRecord>,
    identities: Vec<Record>,
    elapsed: Duration,
}

impl Suites {
    fn run(&mut self, ids: &[StatementId], pmin: u64, pmax: u64, tweak: impl FnOnce(&mut SuiteConfig)) -> Report {
        let mut config = SuiteConfig::new(Selection::List(ids.to_vec()), pmin, pmax);
        tweak(&mut config);
        let started = Instant::now();
        let report = run_suite(&config).expect("suite runs");
        self.elapsed += started.elapsed();
        for r in &report.records {
            match r {
                Record::Congruence(v) => self.congruences.push(v.clone()),
                Record::Identity(_) => self.identities.push(r.clone()),
            }
        }
        report
    }
}

fn all_pass(report: &Report) -> Result<(), String> {
    let failed: Vec<String> = report
        .records
        .iter()
        .filter(|r| !r.pass())
        .take(5)
        .map(|r| format!("{r:?}"))
        .collect();
    ensure(failed.is_empty(), || format!("failures: {}", failed.join("; ")))
}

fn congruence(r: &Record) -> &VerificationRecord {
    match r {
        Record::Congruence(v) => v,
        Record::Identity(_) => panic!("expected a congruence record"),
    }
}

fn valuation_at_least(v: &VerificationRecord, e: i64) -> bool {
    v.difference_valuation.is_none_or(|got| got >= e)
}

fn criterion_1(s: &mut Suites) -> Outcome {
    let started = Instant::now();
    let report = s.run(&[Lemma2_1, Theorem1_5], 3, 3, |c| {
        c.x_set.clear();
        c.d_set.clear();
        c.identity_n_max = 25;
        c.random_trials = Some(RandomTrials { count: 200, seed: 20240517 });
    });
    let elapsed = started.elapsed();
    all_pass(&report)?;
    ensure(report.records.len() == 2 * 200 * 26, || format!("{} records", report.records.len()))?;
    let odd_with_part_two = report
        .records
        .iter()
        .filter_map(|r| match r {
            Record::Identity(i) if i.statement == Theorem1_5 && i.n % 2 == 1 => Some(i.equations.len()),
            _ => None,
        })
        .all(|n| n == 4);
    ensure(odd_with_part_two, || "odd n lacks the second part".into())?;
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!("{} exact records in {:.1?}", report.records.len(), elapsed))
}

fn criterion_2() -> Outcome {
    for f in Family::ALL {
        for k in 0..=30 {
            let (product, gen) = bridge(f, k);
            ensure(product == gen, || format!("{f} bridge fails at k = {k}"))?;
        }
    }
    let printed = Family::Six.product(1, Reading::Printed);
    let (adopted, gen) = bridge(Family::Six, 1);
    ensure(printed == int(60) && adopted == int(30) && gen == int(30), || {
        format!("SIX k = 1: printed {printed}, bridge {adopted}, generalized {gen}")
    })?;
    Ok("TWO/THREE/FOUR/SIX exact for k <= 30; SIX printed reading gives 60 against 30 at k = 1".into())
}

fn criterion_3(s: &mut Suites) -> Outcome {
    let report = s.run(&[Theorem1_1], 5, 199, |_| {});
    all_pass(&report)?;
    let weak = report.records.iter().map(congruence).filter(|v| !valuation_at_least(v, 4)).count();
    ensure(weak == 0, || format!("{weak} records below p^4"))?;

    // p = 5, x = -1/2, d = -1/16 divided by x^2 + x = -1/4 is the COR_C1 instance.
    let ev = evaluate(
        Theorem1_1,
        5,
        &Params {
            x: Some(rat(-1, 2)),
            d: Some(rat(-1, 16)),
            ..Params::default()
        },
    )
    .map_err(|e| e.to_string())?;
    let scale = int(-4);
    let m = int(625);
    let reduce = |q: BigRational| {
        let q = q * &scale;
        let r = q.numer() * modinv(q.denom(), m.numer()) % m.numer();
        (r + m.numer()) % m.numer()
    };
    let (l, r) = (reduce(ev.lhs.clone()), reduce(ev.rhs.clone()));
    ensure(l == 45.into() && r == 45.into(), || format!("anchor residues {l}, {r}"))?;
    let c1 = check_corollary(CorC1, &int(1), 5).map_err(|e| e.to_string())?;
    ensure(c1.lhs == SideResidue::Residue(45u32.into()) && c1.modulus_exponent == 4, || "COR_C1 anchor".into())?;

    // Through the TWO bridge the corollary is the theorem at x = -1/2, d = -d/16.
    let mut agreements = 0;
    for d in rats(&["1", "-1", "2", "1/2", "3"]) {
        for p in primes(7, 199) {
            let th = check_theorem_1_1(&rat(-1, 2), &(-&d / int(16)), p).map_err(|e| e.to_string())?;
            let co = check_corollary(CorC1, &d, p).map_err(|e| e.to_string())?;
            ensure(th.pass == co.pass, || format!("theorem and COR_C1 disagree at d = {d}, p = {p}"))?;
            agreements += 1;
        }
    }
    Ok(format!(
        "{} records, all with v_p >= 4; anchor 45 = 45 mod 625; {agreements} cross-checks agree",
        report.records.len()
    ))
}

fn criterion_4(s: &mut Suites) -> Outcome {
    let report = s.run(&[Theorem1_3], 5, 199, |_| {});
    all_pass(&report)?;
    let mut counts: BTreeMap<(u64, String), u64> = BTreeMap::new();
    for v in report.records.iter().map(congruence) {
        let case = v.case.clone().unwrap_or_default();
        let expected = match case.as_str() {
            "less" => 4,
            "equal" => 5,
            "greater" => 2,
            other => return Err(format!("unknown case {other:?}")),
        };
        ensure(v.modulus_exponent == expected, || format!("{case} uses p^{}", v.modulus_exponent))?;
        ensure(valuation_at_least(v, expected as i64), || format!("{case} below p^{expected}"))?;
        *counts.entry((v.p % 12, case)).or_default() += 1;
    }
    for class in [1, 5, 7, 11] {
        for case in ["less", "equal", "greater"] {
            let n = counts.get(&(class, case.to_string())).copied().unwrap_or(0);
            ensure(n >= 10, || format!("class {class} mod 12, case {case}: only {n} hits"))?;
        }
    }
    let ev = evaluate(
        Theorem1_3,
        5,
        &Params {
            x: Some(rat(-1, 2)),
            d: Some(rat(-1, 16)),
            ..Params::default()
        },
    )
    .map_err(|e| e.to_string())?;
    let (l, r) = (&ev.lhs * int(-4), &ev.rhs * int(-4));
    ensure(l == int(150) && r == int(6400) && ev.exponent == 5, || format!("anchor {l} vs {r}"))?;
    ensure(vp(&(l - r), 5).unwrap() >= 5, || "anchor not congruent mod 3125".into())?;
    let min_hits = counts.values().min().copied().unwrap_or(0);
    Ok(format!(
        "{} records; every (p mod 12, case) hit >= {min_hits} times; anchor 150 = 6400 mod 3125",
        report.records.len()
    ))
}

fn criterion_5(s: &mut Suites) -> Outcome {
    let ids = [CorC1, CorC2, CorC3, CorC4, CorC5, CorC6, CorC7, CorC8];
    let report = s.run(&ids, 7, 199, |c| c.d_set = rats(&["1", "-1", "2", "1/2", "3"]));
    all_pass(&report)?;
    ensure(report.skipped.is_empty(), || format!("{} unexpected skips", report.skipped.len()))?;
    let expected = ids.len() * primes(7, 199).len() * 5;
    ensure(report.records.len() == expected, || format!("{} records, wanted {expected}", report.records.len()))?;
    let mut printed_fail = 0;
    for v in report.records.iter().map(congruence) {
        if matches!(v.statement, CorC4 | CorC8) {
            let alt = v.alternate.as_ref().ok_or_else(|| format!("{} at p = {} has no dual verdict", v.statement, v.p))?;
            printed_fail += u64::from(!alt.pass);
        }
    }
    Ok(format!(
        "{} records pass; SIX family under the bridge reading, printed reading fails {printed_fail} times",
        report.records.len()
    ))
}

fn criterion_6(s: &mut Suites) -> Outcome {
    let wide = [
        AuxWolstenholme,
        AuxCarlitz,
        AuxHalfHarmonic,
        AuxHalfHarmonic2,
        AuxLemma31H3,
        AuxLemma31H4,
        AuxLemma31H6,
        AuxLemma31H3_2,
        AuxLemma31H4_2,
        AuxLemma31H6_2,
        AuxH2p3,
        AuxH2p3_2,
    ];
    let a = s.run(&wide, 5, 499, |_| {});
    all_pass(&a)?;
    let bad_skips: Vec<_> = a
        .skipped
        .iter()
        .filter(|k| !(k.p == Some(5) || k.reason == "wrong-residue-class"))
        .collect();
    ensure(bad_skips.is_empty(), || format!("unexpected skips {bad_skips:?}"))?;
    let mut total = a.records.len();
    for p in [5, 7, 11, 13] {
        let r = s.run(&[AuxReflectH, AuxReflectH2], p, p, |_| {});
        all_pass(&r)?;
        ensure(r.records.len() as u64 == 2 * p, || format!("reflections at {p}: {}", r.records.len()))?;
        total += r.records.len();
    }
    let prod = s.run(&[AuxProductL1, AuxSpecializationL3], 5, 199, |_| {});
    all_pass(&prod)?;
    total += prod.records.len();
    Ok(format!("{total} auxiliary records pass"))
}

fn criterion_7(s: &mut Suites) -> Outcome {
    let a = s.run(&[BgZps, BgSunD0, BgSunD1, BgSunDm1, BgMt], 5, 199, |_| {});
    all_pass(&a)?;
    ensure(a.skipped.iter().all(|k| k.statement == BgZps && k.p == Some(5)), || "unexpected skips".into())?;
    let b = s.run(&[BgWangHan, BgMao], 5, 99, |_| {});
    all_pass(&b)?;
    ensure(b.skipped.iter().all(|k| k.reason == "x-not-p-integral"), || "unexpected skips".into())?;
    Ok(format!("{} background records pass", a.records.len() + b.records.len()))
}

fn criterion_8(s: &Suites) -> Outcome {
    let mut flipped = 0usize;
    for v in &s.congruences {
        let params = Params {
            x: v.x.clone(),
            d: v.d.clone(),
            k: v.k,
            n: None,
        };
        let ev = evaluate(v.statement, v.p, &params).map_err(|e| format!("{}: {e}", v.statement))?;
        ensure(ev.holds(), || format!("{} at p = {} does not hold", v.statement, v.p))?;
        ensure(!ev.perturbed().holds(), || format!("{} at p = {} survives perturbation", v.statement, v.p))?;
        flipped += 1;
    }
    for r in &s.identities {
        if let Record::Identity(i) = r {
            ensure(!i.perturbed().pass, || format!("{} survives perturbation", i.statement))?;
            flipped += 1;
        }
    }
    Ok(format!("{flipped} perturbed instances, 0 false passes"))
}

fn euler_oracle(n: usize) -> Vec<BigRational> {
    // sech t = 1 / cosh t, by power-series division; E_k = k! [t^k].
    let mut fact = vec![BigRational::one()];
    for k in 1..=n {
        let prev = fact[k - 1].clone();
        fact.push(prev * int(k as u64));
    }
    let cosh: Vec<BigRational> = (0..=n)
        .map(|k| if k % 2 == 0 { fact[k].recip() } else { BigRational::zero() })
        .collect();
    let mut inv = vec![BigRational::zero(); n + 1];
    inv[0] = BigRational::one();
    for k in 1..=n {
        let s = (1..=k).fold(BigRational::zero(), |acc, j| acc + &cosh[j] * &inv[k - j]);
        inv[k] = -s;
    }
    (0..=n).map(|k| &inv[k] * &fact[k]).collect()
}

fn criterion_9() -> Outcome {
    let table = BernoulliTable::new(20);
    ensure(table.recurrence_holds(), || "Bernoulli recurrence".into())?;
    ensure(bernoulli(12) == rat(-691, 2730), || format!("B_12 = {}", bernoulli(12)))?;
    for (k, e) in euler_oracle(12).iter().enumerate() {
        ensure(&BigRational::from_integer(euler_number(k as u64)) == e, || format!("E_{k}"))?;
    }
    for n in 0..=200 {
        let h = harmonic(n, 1);
        let expected = (&h * &h - harmonic(n, 2)) / int(2);
        ensure(h11(n) == expected, || format!("H(1,1;{n})"))?;
    }
    Ok("B_0..B_20, E_0..E_12, H(1,1;n) for n <= 200".into())
}

fn criterion_10(s: &Suites) -> Outcome {
    ensure(s.elapsed < Duration::from_secs(600), || format!("criteria 1-7 took {:?}", s.elapsed))?;
    let mut config = SuiteConfig::new(Selection::All, 3, 41);
    config.identity_n_max = 8;
    config.random_trials = Some(RandomTrials { count: 5, seed: 7 });
    let serial = serde_json::to_string_pretty(&run_suite(&config).unwrap()).unwrap();
    config.parallelism = 4;
    let mut parallel = run_suite(&config).unwrap();
    parallel.config.parallelism = 1;
    let parallel = serde_json::to_string_pretty(&parallel).unwrap();
    ensure(serial == parallel, || "serial and parallel JSON differ".into())?;
    Ok(format!(
        "criteria 1-7 in {:.1?}; serial and 4-worker JSON identical ({} bytes)",
        s.elapsed,
        serial.len()
    ))
}

fn primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&p| supercong_core::padic::is_prime(p)).collect()
}

fn modinv(a: &num_bigint::BigInt, m: &num_bigint::BigInt) -> num_bigint::BigInt {
    let e = num_integer::Integer::extended_gcd(a, m);
    (e.x % m + m) % m
}

fn main() -> ExitCode {
    let mut suites = Suites {
        congruences: Vec::new(),
        identities: Vec::new(),
        elapsed: Duration::ZERO,
    };
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "exact identities", criterion_1(&mut suites)),
        (2, "bridge identities", criterion_2()),
        (3, "THEOREM_1_1 grid", criterion_3(&mut suites)),
        (4, "THEOREM_1_3 grid", criterion_4(&mut suites)),
        (5, "corollaries", criterion_5(&mut suites)),
        (6, "auxiliary suite", criterion_6(&mut suites)),
        (7, "background suite", criterion_7(&mut suites)),
        (8, "negative controls", criterion_8(&suites)),
        (9, "special values", criterion_9()),
        (10, "performance and determinism", criterion_10(&suites)),
    ];
    let mut failed = 0;
    for (n, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS criterion {n:>2} ({name}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {n:>2} ({name}): {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
