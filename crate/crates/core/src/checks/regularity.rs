//! The regular semisimple formula against the oracle's gcd criterion.

use serde_json::json;

use crate::catalog::resolve;
use crate::interp::{enumerate_points, Compiled, EvalOptions, Strategy};
use crate::lie::Family;
use crate::oracle::{ConcreteMatrix, Ops};

use super::{matrix_text, structure, Report};

/// `(family, structure, every point of the ambient gl(n))`: `false` means
/// only the members of the family are visited.
const CASES: [(&str, &str, bool); 3] = [("gl:2", "fq:3", true), ("sp:2", "fq:5", false), ("so:4", "fq:3", false)];

pub fn run(seed: u64) -> Report {
    let mut r = Report::new("regularity", seed);
    for (fam_name, spec, ambient) in CASES {
        let s = structure(spec);
        let fam: Family = fam_name.parse().expect("built-in family");
        let n = fam.size();
        let key = format!("{fam_name}@{spec}");
        let points: Vec<Vec<u32>> = if ambient {
            let total = (s.size() as u64).pow((n * n) as u32);
            (0..total)
                .map(|mut idx| {
                    (0..n * n)
                        .map(|_| {
                            let v = (idx % s.size() as u64) as u32;
                            idx /= s.size() as u64;
                            v
                        })
                        .collect()
                })
                .collect()
        } else {
            let lie = resolve(&format!("lie:{fam_name}")).expect("catalog name");
            match enumerate_points(&s, &lie, &[], &EvalOptions::guided()) {
                Ok(p) => p,
                Err(e) => {
                    r.fail(format!("{key}: enumerating members: {e}"));
                    continue;
                }
            }
        };
        let rss = resolve(&format!("rss:{fam_name}")).expect("catalog name");
        let c = match Compiled::new(&s, rss.body(), rss.signature()) {
            Ok(c) => c,
            Err(e) => {
                r.fail(format!("{key}: {e}"));
                continue;
            }
        };
        let ops = Ops(&s);
        let mut regular = 0u64;
        for p in &points {
            let m = ConcreteMatrix::from_fn(n, n, |i, j| p[i * n + j]);
            let want = ops.is_regular_in(fam, &m).expect("square");
            regular += want as u64;
            for strategy in [Strategy::Naive, Strategy::Guided] {
                let opts = EvalOptions { strategy, ..EvalOptions::default() };
                match c.eval(p, &opts) {
                    Ok(got) => r.check(got == want, || {
                        format!("{key} {strategy}: formula {got}, oracle {want} at {}", matrix_text(&m))
                    }),
                    Err(e) => r.fail(format!("{key} {strategy}: {e}")),
                }
            }
        }
        r.value(&key, json!({ "points": points.len(), "regular": regular }));
    }
    r
}
