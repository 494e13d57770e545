//! Every sampled domain point lies in exactly one sign set, and the 0-set
//! is the complement of the ±-set inside the domain.

use rand::seq::SliceRandom;
use serde_json::json;

use crate::interp::{enumerate_points, Classifier, Compiled, EvalError, EvalOptions};
use crate::lie::TripleSpec;
use crate::transfer::{sigma_sets, triple_signature, SignClass};

use super::{rng, structure, Report};

pub const CASES: [(&str, &str); 3] = [
    ("odd-orth:r=1,a=1,b=0", "fq:3"),
    ("sympl:r=1,a=1,b=0", "fq:3"),
    ("unitary:n=2,a=1,b=1", "inv:3"),
];

/// Uniform sample size per triple.
pub const SAMPLES: usize = 50;
/// Extra points drawn from the ±-set.
const PM_EXTRA: usize = 10;

pub fn run(seed: u64) -> Report {
    let mut r = Report::new("partition", seed);
    for (i, (name, spec)) in CASES.iter().enumerate() {
        let s = structure(spec);
        let t: TripleSpec = name.parse().expect("built-in triple");
        let glreg = t.default_glreg();
        let sets = sigma_sets(&t, glreg);
        let key = format!("{name}@{spec}");
        let guided = EvalOptions::guided();

        let domain = match enumerate_points(&s, &sets.domain, &[], &guided) {
            Ok(d) => d,
            Err(e) => {
                r.fail(format!("{key}: enumerating the domain: {e}"));
                continue;
            }
        };
        let free = triple_signature(&t);
        let pm = Compiled::new(&s, sets.pm.body(), &free).expect("compiles");
        let zero = Compiled::new(&s, sets.zero.body(), &free).expect("compiles");
        let mut pm_points = Vec::new();
        for p in &domain {
            let (in_pm, in_zero) = (pm.eval(p, &guided), zero.eval(p, &guided));
            match (in_pm, in_zero) {
                (Ok(a), Ok(b)) => {
                    r.check(a != b, || format!("{key}: pm {a} and zero {b} at {p:?}"));
                    if a {
                        pm_points.push(p.clone());
                    }
                }
                (Err(e), _) | (_, Err(e)) => r.fail(format!("{key}: {e}")),
            }
        }

        let mut g = rng(seed, i as u64);
        let mut sample: Vec<Vec<u32>> = domain.choose_multiple(&mut g, SAMPLES).cloned().collect();
        sample.extend(pm_points.choose_multiple(&mut g, PM_EXTRA).cloned());

        let classifier = Classifier::new(&s, &t, glreg).expect("compiles");
        let mut tally = [0u64; 3];
        for p in &sample {
            match classifier.classify(p, &guided) {
                Ok(c) => {
                    tally[(c.value() + 1) as usize] += 1;
                    let in_pm = pm.eval(p, &guided).unwrap_or(false);
                    r.check((c != SignClass::Zero) == in_pm, || format!("{key}: class {c} but pm = {in_pm} at {p:?}"));
                }
                Err(EvalError::PartitionViolation(hits)) => {
                    r.fail(format!("{key}: partition violation {hits:?} at {p:?}"))
                }
                Err(e) => r.fail(format!("{key}: {e} at {p:?}")),
            }
        }
        // The naive strategy cannot classify ± points: the +1 block
        // quantifies over two n×n matrices and more.
        if let Some(p) = pm_points.first() {
            match classifier.classify(p, &EvalOptions::naive()) {
                Err(EvalError::BudgetExceeded { needed, budget }) => {
                    r.skip(format!("{key}: naive classification needs {needed:.2e} steps, budget {budget}"))
                }
                Ok(c) => {
                    let want = classifier.classify(p, &guided);
                    r.check(want.as_ref() == Ok(&c), || format!("{key}: naive {c}, guided {want:?} at {p:?}"));
                }
                Err(e) => r.fail(format!("{key}: naive classification: {e}")),
            }
        }
        r.value(
            &key,
            json!({
                "domain": domain.len(),
                "pm": pm_points.len(),
                "sampled": sample.len(),
                "minus": tally[0],
                "zero": tally[1],
                "plus": tally[2],
                "glreg": glreg,
            }),
        );
    }
    r
}
