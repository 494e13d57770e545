//! Verification suites. Each one cross-checks a symbolic construction against
//! an independent route (the concrete oracle, brute force, or the other
//! evaluation strategy) and returns a [`Report`].

mod counts;
pub mod gen;
mod guided;
mod parity;
mod partition;
mod passes;
mod pfaffian;
mod projection;
mod regularity;
mod serialization;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::field::FieldOps;
use crate::interp::Structure;
use crate::lie::Family;
use crate::oracle::{ConcreteMatrix, Ops};

/// Failures beyond this many are counted but not listed.
const MAX_LISTED: usize = 25;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    /// Individual comparisons made.
    pub cases: u64,
    pub failed: u64,
    pub failures: Vec<String>,
    /// Instances left out, with the reason.
    pub skipped: Vec<String>,
    /// Suite-specific results (counts, tallies).
    pub values: BTreeMap<String, Value>,
}

impl Report {
    fn new(suite: &str, seed: u64) -> Report {
        Report {
            suite: suite.to_string(),
            seed,
            passed: true,
            cases: 0,
            failed: 0,
            failures: Vec::new(),
            skipped: Vec::new(),
            values: BTreeMap::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, msg: String) {
        self.passed = false;
        self.failed += 1;
        if self.failures.len() < MAX_LISTED {
            self.failures.push(msg);
        }
    }

    fn skip(&mut self, msg: String) {
        self.skipped.push(msg);
    }

    fn value(&mut self, key: &str, v: impl Serialize) {
        self.values.insert(key.to_string(), serde_json::to_value(v).expect("serializable"));
    }

    fn absorb(&mut self, other: Report) {
        self.cases += other.cases;
        self.failed += other.failed;
        self.passed &= other.passed;
        for f in other.failures {
            if self.failures.len() < MAX_LISTED {
                self.failures.push(format!("[{}] {f}", other.suite));
            }
        }
        self.skipped.extend(other.skipped.into_iter().map(|s| format!("[{}] {s}", other.suite)));
        for (k, v) in other.values {
            self.values.insert(format!("{}.{k}", other.suite), v);
        }
    }

    /// One line: `suite: PASS (n cases)` or `suite: FAIL (k of n failed)`.
    pub fn summary(&self) -> String {
        if self.passed {
            format!("{}: PASS ({} cases, {} skipped)", self.suite, self.cases, self.skipped.len())
        } else {
            format!("{}: FAIL ({} of {} cases failed)", self.suite, self.failed, self.cases)
        }
    }
}

pub const SUITES: [&str; 11] = [
    "counts",
    "regularity",
    "pfaffian",
    "projection",
    "desugar",
    "realify",
    "passes",
    "guided",
    "partition",
    "parity",
    "serialization",
];

/// Runs a suite by name; `None` for an unknown name.
pub fn run_suite(name: &str, seed: u64) -> Option<Report> {
    Some(match name {
        "counts" => counts::run(seed),
        "regularity" => regularity::run(seed),
        "pfaffian" => pfaffian::run(seed),
        "projection" => projection::run(seed),
        "desugar" => passes::desugar_suite(seed),
        "realify" => passes::realify_suite(seed),
        "passes" => {
            let mut r = Report::new("passes", seed);
            r.absorb(passes::desugar_suite(seed));
            r.absorb(passes::realify_suite(seed));
            r
        }
        "guided" => guided::run(seed),
        "partition" => partition::run(seed),
        "parity" => parity::run(seed),
        "serialization" => serialization::run(seed),
        _ => return None,
    })
}

pub(crate) fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn structure(spec: &str) -> Structure {
    spec.parse().expect("built-in structure spec")
}

fn random_matrix(s: &Structure, rng: &mut ChaCha8Rng, n: usize) -> ConcreteMatrix<u32> {
    ConcreteMatrix::from_fn(n, n, |_, _| rng.gen_range(0..s.size()))
}

/// `ᵗX̄ J + J X = 0`, concretely.
fn is_member<K: FieldOps>(k: &K, fam: Family, x: &ConcreteMatrix<K::Elem>) -> bool {
    let ops = Ops(k);
    match ops.j(fam) {
        None => true,
        Some(j) => {
            let xt = if fam.involution() { ops.bar(x).transpose() } else { x.transpose() };
            ops.is_zero(&ops.add(&ops.mul(&xt, &j), &ops.mul(&j, x)))
        }
    }
}

/// `τ(M) = J⁻¹ ᵗM̄ J`, concretely; the transpose for `gl`.
fn tau<K: FieldOps>(k: &K, fam: Family, m: &ConcreteMatrix<K::Elem>) -> ConcreteMatrix<K::Elem> {
    let ops = Ops(k);
    let mt = if fam.involution() { ops.bar(m).transpose() } else { m.transpose() };
    match ops.j(fam) {
        None => mt,
        Some(j) => {
            let ji = ops.inverse(&j).expect("J is invertible");
            ops.mul(&ops.mul(&ji, &mt), &j)
        }
    }
}

/// Every element of the span of `basis` over a finite structure, in odometer
/// order of the coefficients.
fn span_elements(s: &Structure, basis: &[ConcreteMatrix<u32>], n: usize) -> Vec<ConcreteMatrix<u32>> {
    let ops = Ops(s);
    let q = s.size() as u64;
    let total = q.pow(basis.len() as u32);
    (0..total)
        .map(|mut idx| {
            let mut acc = ops.zero(n, n);
            for b in basis {
                let c = (idx % q) as u32;
                idx /= q;
                acc = ops.add(&acc, &ops.scale(&c, b));
            }
            acc
        })
        .collect()
}

fn matrix_text(m: &ConcreteMatrix<u32>) -> String {
    format!("{:?}", m.to_rows())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope", 1).is_none());
    }

    #[test]
    fn failures_are_capped_but_counted() {
        let mut r = Report::new("t", 0);
        for i in 0..40 {
            r.check(i % 2 == 0, || format!("case {i}"));
        }
        assert!(!r.passed);
        assert_eq!(r.cases, 40);
        assert_eq!(r.failed, 20);
        assert_eq!(r.failures.len(), 20);
        assert!(r.summary().starts_with("t: FAIL"));
    }

    #[test]
    fn span_of_identity_over_f3() {
        let s = structure("fq:3");
        let id = Ops(&s).identity(2);
        let all = span_elements(&s, &[id], 2);
        assert_eq!(all.len(), 3);
    }
}
