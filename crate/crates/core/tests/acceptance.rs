//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines are always printed; exits nonzero if any criterion fails.
//!
//!     cargo test --release --test acceptance
//!     cargo test --release --test acceptance -- 3 7     (selected criteria)

mod common;

use std::time::{Duration, Instant};

use defring::checks::{run_suite, Report};
use serde_json::Value;

const SEED: u64 = 1;

type Outcome = Result<String, String>;

fn suite(name: &str) -> Report {
    run_suite(name, SEED).expect("known suite")
}

fn passed(r: &Report) -> Result<(), String> {
    if r.passed {
        Ok(())
    } else {
        Err(format!("{} of {} cases failed; first: {}", r.failed, r.cases, r.failures.first().map_or("", |s| s)))
    }
}

fn value<'a>(r: &'a Report, path: &[&str]) -> Result<&'a Value, String> {
    let mut v = r.values.get(path[0]).ok_or_else(|| format!("{}: no value {}", r.suite, path[0]))?;
    for k in &path[1..] {
        v = v.get(k).ok_or_else(|| format!("{}: no value {}", r.suite, path.join(".")))?;
    }
    Ok(v)
}

fn expect_u64(r: &Report, path: &[&str], want: u64) -> Result<(), String> {
    let got = value(r, path)?;
    if got.as_u64() == Some(want) {
        Ok(())
    } else {
        Err(format!("{}: {got}, expected {want}", path.join(".")))
    }
}

fn linear_space_counts() -> Outcome {
    let r = suite("counts");
    // q^dim for dim so(n) = n(n−1)/2, sp(2r) = r(2r+1), u(r) = r²
    let expected: [(&str, u64); 9] = [
        ("lie:so:2@fq:3", 3),
        ("lie:so:3@fq:3", 27),
        ("lie:so:3@fq:5", 125),
        ("lie:so:4@fq:3", 729),
        ("lie:sp:2@fq:3", 27),
        ("lie:sp:2@fq:5", 125),
        ("lie:sp:4@fq:3", 59049),
        ("lie:u:1@inv:3", 3),
        ("lie:u:2@inv:3", 81),
    ];
    for (key, n) in expected {
        expect_u64(&r, &[key, "guided"], n)?;
        expect_u64(&r, &[key, "oracle"], n)?;
    }
    let est = value(&r, &["lie:sp:4:sampled", "estimate"])?.as_f64().unwrap_or(f64::NAN);
    let se = value(&r, &["lie:sp:4:sampled", "stderr"])?.as_f64().unwrap_or(f64::NAN);
    passed(&r)?;
    Ok(format!("9 counts exact, sp(4) sampled {est:.0} ± {se:.0}, {} naive skips", r.skipped.len()))
}

fn regularity() -> Outcome {
    let r = suite("regularity");
    // gl(2): q⁴ minus the q³ matrices with a repeated eigenvalue.
    // sp(2) = sl(2): regular semisimple iff det ≠ 0; the nilpotent cone has q² points.
    expect_u64(&r, &["gl:2@fq:3", "points"], 81)?;
    expect_u64(&r, &["gl:2@fq:3", "regular"], 81 - 27)?;
    expect_u64(&r, &["sp:2@fq:5", "points"], 125)?;
    expect_u64(&r, &["sp:2@fq:5", "regular"], 125 - 25)?;
    passed(&r)?;
    Ok(format!("{} comparisons under both strategies", r.cases))
}

fn pfaffian() -> Outcome {
    let r = suite("pfaffian");
    expect_u64(&r, &["instances_per_field"], 200)?;
    passed(&r)?;
    Ok(format!("200 instances each over F3, F5, Q; {} checks", r.cases))
}

fn projection() -> Outcome {
    let r = suite("projection");
    let sizes = value(&r, &["instances_by_size"])?;
    let total: u64 = sizes.as_array().map_or(0, |a| a.iter().filter_map(Value::as_u64).sum());
    if total != 50 {
        return Err(format!("{total} instances, expected 50"));
    }
    passed(&r)?;
    Ok(format!("50 rational instances, sizes {sizes}, {} checks", r.cases))
}

fn pass_equivalence() -> Outcome {
    let r = suite("passes");
    expect_u64(&r, &["desugar.instances"], 100)?;
    expect_u64(&r, &["realify.tally", "u1.membership", "points"], 9)?;
    expect_u64(&r, &["realify.tally", "u2.membership", "points"], 6561)?;
    expect_u64(&r, &["realify.tally", "u2.membership", "true"], 81)?;
    for k in ["u1.norm", "u1.trace_form", "u2.norm", "u2.trace_form"] {
        let n = value(&r, &["realify.tally", k, "points"])?.as_u64().unwrap_or(0);
        if n == 0 {
            return Err(format!("no {k} points evaluated"));
        }
    }
    passed(&r)?;
    Ok(format!("{} comparisons, {} notes", r.cases, r.skipped.len()))
}

fn guided_equals_naive() -> Outcome {
    let r = suite("guided");
    passed(&r)?;
    Ok(format!("{} points agree, {} instances over the naive budget", r.cases, r.skipped.len()))
}

fn partition() -> Outcome {
    let r = suite("partition");
    let mut parts = Vec::new();
    for key in ["odd-orth:r=1,a=1,b=0@fq:3", "sympl:r=1,a=1,b=0@fq:3", "unitary:n=2,a=1,b=1@inv:3"] {
        let v = value(&r, &[key])?;
        let get = |k: &str| v.get(k).and_then(Value::as_u64).unwrap_or(0);
        if get("sampled") < 50 {
            return Err(format!("{key}: only {} sampled points", get("sampled")));
        }
        if get("minus") + get("zero") + get("plus") != get("sampled") {
            return Err(format!("{key}: classes do not cover the sample"));
        }
        parts.push(format!("{}/{}/{}", get("plus"), get("zero"), get("minus")));
    }
    if r.failures.iter().any(|f| f.contains("partition violation")) {
        return Err("partition violation".into());
    }
    passed(&r)?;
    Ok(format!("+/0/− tallies {}", parts.join(", ")))
}

fn parity() -> Outcome {
    let r = suite("parity");
    // 1 + 3 + 9 + 27 monic polynomials of degree ≤ 3, three conditions
    expect_u64(&r, &["polynomials_times_conditions"], 40 * 3)?;
    passed(&r)?;
    Ok(format!("{} evaluations", r.cases))
}

fn serialization() -> Outcome {
    let r = suite("serialization");
    expect_u64(&r, &["random_formulas"], 500)?;
    let bad = common::golden_mismatches();
    if let Some(first) = bad.first() {
        return Err(format!("{} golden mismatches; first: {first}", bad.len()));
    }
    passed(&r)?;
    let sets = value(&r, &["catalog_sets"])?;
    Ok(format!("500 round trips, {sets} golden sets byte-equal"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let min = |m: u64| Duration::from_secs(60 * m);
    let criteria = [
        Criterion { id: 1, name: "linear-space counts", limit: min(15), run: linear_space_counts },
        Criterion { id: 2, name: "regularity equivalence", limit: min(1), run: regularity },
        Criterion { id: 3, name: "pfaffian suite", limit: min(2), run: pfaffian },
        Criterion { id: 4, name: "projection suite", limit: min(2), run: projection },
        Criterion { id: 5, name: "pass equivalence", limit: min(10), run: pass_equivalence },
        Criterion { id: 6, name: "guided = naive", limit: min(30), run: guided_equals_naive },
        Criterion { id: 7, name: "partition", limit: min(60), run: partition },
        Criterion { id: 8, name: "even-parity oracle", limit: min(5), run: parity },
        Criterion { id: 9, name: "serialization", limit: min(1), run: serialization },
    ];
    // libtest flags such as --nocapture may be passed through; numbers select
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in criteria.iter().filter(|c| only.is_empty() || only.contains(&c.id)) {
        let start = Instant::now();
        let outcome = (c.run)();
        let t = start.elapsed();
        let outcome = match outcome {
            Ok(d) if t > c.limit => Err(format!("{d}; took {:.1}s, limit {}s", t.as_secs_f64(), c.limit.as_secs())),
            o => o,
        };
        let (word, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failed += outcome.is_err() as u32;
        println!(
            "criterion {} {:<24} {word}  [{:.1}s / {}s]  {detail}",
            c.id,
            c.name,
            t.as_secs_f64(),
            c.limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
