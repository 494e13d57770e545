//! Guided and naive evaluation agree on the building blocks of the sign
//! sets: norm conditions, trace forms and factor-parity conditions.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::interp::{Compiled, EvalOptions, Structure};
use crate::lang::{Formula, Fresh, Var};
use crate::lie::Family;
use crate::oracle::{factor_monic, poly_mul, ConcreteMatrix, Ops};
use crate::poly::{char_poly, even_poly, MonicPoly, TermMatrix};
use crate::transfer::{even_parity, norm_formula, trace_form_formula};

use super::{random_matrix, rng, tau, Report};

/// Points tried per norm or trace-form instance.
const POINTS: usize = 12;

fn structures() -> Vec<(&'static str, Structure)> {
    vec![
        ("F2", Structure::even_characteristic(1).expect("F2")),
        ("F3", "fq:3".parse().expect("F3")),
    ]
}

/// Families whose form is defined over the structure, with `n ≤ 3`.
fn families(label: &str) -> Vec<Family> {
    let mut out = vec![Family::Gl(1), Family::Gl(2), Family::Gl(3), Family::Sp(2)];
    if label != "F2" {
        // J for so has entries 1/2
        out.extend([Family::So(2), Family::So(3)]);
    }
    out
}

struct Instance {
    name: String,
    body: Formula,
    free: Vec<Var>,
}

fn norm_instances(g: Family) -> Vec<Instance> {
    let n = g.size();
    (1..=n)
        .map(|d| {
            let x = TermMatrix::vars("x", n);
            let u = TermMatrix::vars("u", n);
            let f = MonicPoly::generic("f", d);
            let px = char_poly(&x).expect("square");
            let body = norm_formula(g, &x, &px, &f, &u, &mut Fresh::starting_at(0));
            let mut free = x.vars_used();
            free.extend(f.vars());
            free.extend(u.vars_used());
            Instance { name: format!("norm {g} deg f = {d}"), body, free }
        })
        .collect()
}

fn trace_instance(g: Family) -> Instance {
    let n = g.size();
    let x = TermMatrix::vars("x", n);
    let c = TermMatrix::vars("c", n);
    let body = trace_form_formula(g, &x, &c, &mut Fresh::starting_at(0));
    let mut free = x.vars_used();
    free.extend(c.vars_used());
    Instance { name: format!("trace form {g}"), body, free }
}

pub const PHIS: [&str; 3] = ["true", "false", "even-poly"];

/// `even-parity(f)` with a named per-factor condition.
pub fn parity_formula(f: &MonicPoly, phi: &str) -> Formula {
    let mut fresh = Fresh::starting_at(0);
    let mut cond = |g: &MonicPoly, _: &mut Fresh| match phi {
        "true" => Formula::True,
        "false" => Formula::False,
        _ => even_poly(g).unwrap_or(Formula::False),
    };
    even_parity(f, &mut fresh, &mut cond)
}

/// Points `(X, f, U)` for a norm instance: `f` divides `P_X` when
/// possible, and `U` is zero, the identity, in `C(X)`, of the form
/// `X₁ τ(X₁)` with `X₁ ∈ C(X)`, or arbitrary.
fn norm_points(s: &Structure, g: Family, d: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<u32>> {
    let n = g.size();
    let ops = Ops(s);
    let els: Vec<u32> = s.elements().collect();
    (0..POINTS)
        .map(|k| {
            let x = random_matrix(s, rng, n);
            let px = ops.char_poly(&x).expect("square");
            let factors = factor_monic(s, &els, &px);
            let mut f: Vec<u32> = (0..d).map(|_| rng.gen_range(0..s.size())).collect();
            for _ in 0..8 {
                let prod = factors
                    .iter()
                    .filter(|_| rng.gen_bool(0.5))
                    .fold(vec![1], |acc, p| poly_mul(s, &acc, p));
                if prod.len() == d + 1 {
                    f = prod[..d].to_vec();
                    break;
                }
            }
            let basis = ops.centralizer_basis(&x).expect("square");
            let in_cx = |rng: &mut ChaCha8Rng| {
                basis.iter().fold(ops.zero(n, n), |acc, b| {
                    let c = rng.gen_range(0..s.size());
                    ops.add(&acc, &ops.scale(&c, b))
                })
            };
            let u = match k % 5 {
                0 => ops.zero(n, n),
                1 => ops.identity(n),
                2 => in_cx(rng),
                3 => {
                    let x1 = in_cx(rng);
                    ops.mul(&x1, &tau(s, g, &x1))
                }
                _ => random_matrix(s, rng, n),
            };
            let mut p = x.entries().to_vec();
            p.extend(f);
            p.extend(u.entries().iter().copied());
            p
        })
        .collect()
}

/// Points `(X, c)`: `c` in `C(X)` with `τ(c) = ±c` half the time.
fn trace_points(s: &Structure, g: Family, rng: &mut ChaCha8Rng) -> Vec<Vec<u32>> {
    let n = g.size();
    let ops = Ops(s);
    (0..POINTS)
        .map(|k| {
            let x = random_matrix(s, rng, n);
            let c: ConcreteMatrix<u32> = if k % 2 == 0 {
                let basis = ops.centralizer_basis(&x).expect("square");
                let cands: Vec<_> = super::span_elements(s, &basis, n)
                    .into_iter()
                    .filter(|c| {
                        let t = tau(s, g, c);
                        t == *c || t == ops.scale(&s.neg_e(1), c)
                    })
                    .collect();
                cands[rng.gen_range(0..cands.len())].clone()
            } else {
                random_matrix(s, rng, n)
            };
            let mut p = x.entries().to_vec();
            p.extend(c.entries().iter().copied());
            p
        })
        .collect()
}

fn compare(r: &mut Report, s: &Structure, label: &str, inst: &Instance, points: &[Vec<u32>]) -> (u64, u64) {
    let c = match Compiled::new(s, &inst.body, &inst.free) {
        Ok(c) => c,
        Err(e) => {
            r.fail(format!("{label} {}: {e}", inst.name));
            return (0, 0);
        }
    };
    let naive = EvalOptions::naive();
    if c.naive_cost() > naive.budget as f64 {
        r.skip(format!(
            "{label} {}: naive cost {:.2e} exceeds the budget {}",
            inst.name,
            c.naive_cost(),
            naive.budget
        ));
        return (0, 0);
    }
    let guided = EvalOptions::guided().validating();
    let (mut n, mut t) = (0, 0);
    for p in points {
        match (c.eval(p, &naive), c.eval(p, &guided)) {
            (Ok(a), Ok(b)) => {
                n += 1;
                t += a as u64;
                r.check(a == b, || format!("{label} {}: naive {a}, guided {b} at {p:?}", inst.name));
            }
            (Err(e), _) | (_, Err(e)) => r.fail(format!("{label} {}: {e} at {p:?}", inst.name)),
        }
    }
    (n, t)
}

pub fn run(seed: u64) -> Report {
    let mut r = Report::new("guided", seed);
    let mut tally = serde_json::Map::new();
    for (si, (label, s)) in structures().iter().enumerate() {
        for (fi, g) in families(label).into_iter().enumerate() {
            let mut gen = rng(seed, (si * 100 + fi) as u64);
            for (d, inst) in norm_instances(g).iter().enumerate() {
                let pts = norm_points(s, g, d + 1, &mut gen);
                let (n, t) = compare(&mut r, s, label, inst, &pts);
                tally.insert(format!("{label} {}", inst.name), json!({ "points": n, "true": t }));
            }
            let inst = trace_instance(g);
            let pts = trace_points(s, g, &mut gen);
            let (n, t) = compare(&mut r, s, label, &inst, &pts);
            tally.insert(format!("{label} {}", inst.name), json!({ "points": n, "true": t }));
        }
        for d in 1..=3 {
            let f = MonicPoly::generic("f", d);
            let pts: Vec<Vec<u32>> = (0..(s.size() as u64).pow(d as u32))
                .map(|mut idx| {
                    (0..d)
                        .map(|_| {
                            let v = (idx % s.size() as u64) as u32;
                            idx /= s.size() as u64;
                            v
                        })
                        .collect()
                })
                .collect();
            for phi in PHIS {
                let inst = Instance {
                    name: format!("even-parity deg {d} φ = {phi}"),
                    body: parity_formula(&f, phi),
                    free: f.vars(),
                };
                let (n, t) = compare(&mut r, s, label, &inst, &pts);
                tally.insert(format!("{label} {}", inst.name), json!({ "points": n, "true": t }));
            }
        }
    }
    r.values.insert("tally".into(), serde_json::Value::Object(tally));
    r
}
