//! Point counts of the Lie algebras, three ways: guided, naive (within
//! budget), and an oracle count. The oracle is `q^nullity` of the concrete
//! membership map for prime fields and brute force for the involutive
//! structure, whose membership map is only semilinear.

use rand::Rng;
use serde_json::json;

use crate::catalog::resolve;
use crate::interp::{count_points, enumerate_points, CountMode, EvalError, EvalOptions, Structure, StructureKind};
use crate::lie::Family;
use crate::oracle::{ConcreteMatrix, Ops};

use super::{is_member, rng, structure, Report};

pub const CASES: [(&str, &str); 9] = [
    ("so:2", "fq:3"),
    ("so:3", "fq:3"),
    ("so:3", "fq:5"),
    ("so:4", "fq:3"),
    ("sp:2", "fq:3"),
    ("sp:2", "fq:5"),
    ("sp:4", "fq:3"),
    ("u:1", "inv:3"),
    ("u:2", "inv:3"),
];

/// The set whose count is also checked by sampling.
const SAMPLED: &str = "sp:4";

fn oracle_count(s: &Structure, fam: Family) -> u64 {
    let n = fam.size();
    let q = s.size() as u64;
    if matches!(fam, Family::Gl(_)) {
        return q.pow((n * n) as u32);
    }
    if matches!(s.kind(), StructureKind::Prime) {
        // X ↦ ᵗX J + J X on the basis of unit matrices
        let ops = Ops(s);
        let j = ops.j(fam).expect("odd characteristic");
        let lin = ConcreteMatrix::from_fn(n * n, n * n, |row, col| {
            let unit = ConcreteMatrix::from_fn(n, n, |i, k| u32::from(i * n + k == col));
            let image = ops.add(&ops.mul(&unit.transpose(), &j), &ops.mul(&j, &unit));
            *image.get(row / n, row % n)
        });
        q.pow(ops.nullspace(&lin).len() as u32)
    } else {
        let total = q.pow((n * n) as u32);
        (0..total)
            .filter(|&idx| {
                let mut rest = idx;
                let m = ConcreteMatrix::from_fn(n, n, |_, _| {
                    let v = (rest % q) as u32;
                    rest /= q;
                    v
                });
                is_member(s, fam, &m)
            })
            .count() as u64
    }
}

pub fn run(seed: u64) -> Report {
    let mut r = Report::new("counts", seed);
    for (i, (fam_name, spec)) in CASES.iter().enumerate() {
        let s = structure(spec);
        let fam: Family = fam_name.parse().expect("built-in family");
        let set_name = format!("lie:{fam_name}");
        let set = resolve(&set_name).expect("catalog name");
        let key = format!("{set_name}@{spec}");

        let guided = count_points(&s, &set, &[], CountMode::Exhaustive, &EvalOptions::guided()).map(|c| c.count.unwrap());
        let oracle = oracle_count(&s, fam);
        let naive = match count_points(&s, &set, &[], CountMode::Exhaustive, &EvalOptions::naive()) {
            Ok(c) => Some(c.count.unwrap()),
            Err(EvalError::BudgetExceeded { needed, budget }) => {
                r.skip(format!("naive count of {key}: needs {needed:.2e} steps, budget {budget}"));
                None
            }
            Err(e) => {
                r.fail(format!("naive count of {key}: {e}"));
                None
            }
        };
        let guided = match guided {
            Ok(g) => g,
            Err(e) => {
                r.fail(format!("guided count of {key}: {e}"));
                continue;
            }
        };
        r.check(guided == oracle, || format!("{key}: guided {guided}, oracle {oracle}"));
        if let Some(nv) = naive {
            r.check(nv == guided, || format!("{key}: naive {nv}, guided {guided}"));
        }
        r.value(&key, json!({ "guided": guided, "naive": naive, "oracle": oracle }));

        if *fam_name == SAMPLED {
            sample_verify(&mut r, &s, fam, &set_name, guided, seed, i as u64);
        }
    }
    r
}

/// Checks a large count by sampling: the enumerated points are distinct
/// members (a random subset is checked against the oracle), random points of
/// the ambient space agree with the oracle, and the sampled estimate is
/// within five standard errors of the exact count.
fn sample_verify(r: &mut Report, s: &Structure, fam: Family, set_name: &str, exact: u64, seed: u64, stream: u64) {
    let set = resolve(set_name).expect("catalog name");
    let n = fam.size();
    let opts = EvalOptions::guided();
    let points = match enumerate_points(s, &set, &[], &opts) {
        Ok(p) => p,
        Err(e) => return r.fail(format!("enumerating {set_name}: {e}")),
    };
    let mut distinct = points.clone();
    distinct.sort();
    distinct.dedup();
    r.check(distinct.len() as u64 == exact && points.len() == distinct.len(), || {
        format!("{set_name}: {} enumerated, {} distinct, count {exact}", points.len(), distinct.len())
    });
    let mut g = rng(seed, 1000 + stream);
    let to_matrix = |p: &[u32]| ConcreteMatrix::from_fn(n, n, |i, j| p[i * n + j]);
    for _ in 0..2000 {
        let p = &points[g.gen_range(0..points.len())];
        r.check(is_member(s, fam, &to_matrix(p)), || format!("{set_name}: enumerated {p:?} is not a member"));
    }
    let c = crate::interp::Compiled::new(s, set.body(), set.signature()).expect("compiles");
    for _ in 0..2000 {
        let p: Vec<u32> = (0..n * n).map(|_| g.gen_range(0..s.size())).collect();
        let ok = c.eval(&p, &opts).expect("in budget");
        r.check(ok == is_member(s, fam, &to_matrix(&p)), || format!("{set_name}: membership of {p:?}"));
    }
    let samples = 200_000;
    match count_points(s, &set, &[], CountMode::Sample { seed, samples }, &opts) {
        Ok(est) => {
            let (e, se) = (est.estimate.unwrap(), est.stderr.unwrap());
            r.check((e - exact as f64).abs() <= 5.0 * se.max(1.0), || {
                format!("{set_name}: estimate {e:.0} ± {se:.0} vs exact {exact}")
            });
            r.value(
                &format!("{set_name}:sampled"),
                json!({ "samples": samples, "hits": est.hits, "estimate": e, "stderr": se }),
            );
        }
        Err(e) => r.fail(format!("sampling {set_name}: {e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_counts_small() {
        assert_eq!(oracle_count(&structure("fq:3"), Family::So(3)), 27);
        assert_eq!(oracle_count(&structure("inv:3"), Family::U(1)), 3);
        assert_eq!(oracle_count(&structure("fq:5"), Family::Gl(1)), 5);
    }
}
