//! Desugaring and realification preserve truth values.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::field::FieldOps;
use crate::interp::{eval_formula, Assignment, Compiled, EvalError, EvalOptions, Structure};
use crate::lang::realify::components;
use crate::lang::{desugar, is_core, realify_formula, Formula, Fresh, Var};
use crate::lie::{commutes, Family};
use crate::oracle::{factor_monic, poly_mul, ConcreteMatrix, Ops, Poly};
use crate::poly::{char_poly, MonicPoly, TermMatrix};
use crate::transfer::{norm_formula, trace_form_formula};

use super::gen::{formula, GenConfig};
use super::{rng, span_elements, structure, tau, Report};

pub const DESUGAR_INSTANCES: usize = 100;

pub fn desugar_suite(seed: u64) -> Report {
    let mut r = Report::new("desugar", seed);
    let specs: [(&str, &[i64], bool); 5] = [
        ("fq:3", &[2], false),
        ("fq:5", &[2, 3, 4], false),
        ("fq:7", &[2, 3, 5], false),
        ("fq:9", &[2], false),
        ("inv:3", &[2], true),
    ];
    let mut g = rng(seed, 0);
    let mut fallback = 0;
    let mut true_count = 0;
    for i in 0..DESUGAR_INSTANCES {
        let (spec, dens, bar) = specs[i % specs.len()];
        let s = structure(spec);
        let f = formula(&mut g, &GenConfig::evaluable(dens.to_vec(), bar));
        let d = desugar(&f);
        r.check(is_core(&d), || format!("#{i}: desugared formula leaves the core"));
        let a: Assignment = f.free_vars().into_iter().map(|v| (v, g.gen_range(0..s.size()))).collect();
        let eval = |opts: &EvalOptions| -> Result<(bool, bool), EvalError> {
            Ok((eval_formula(&s, &f, &a, opts)?, eval_formula(&s, &d, &a, opts)?))
        };
        let outcome = match eval(&EvalOptions::naive()) {
            Err(EvalError::BudgetExceeded { .. }) => {
                fallback += 1;
                eval(&EvalOptions::guided())
            }
            other => other,
        };
        match outcome {
            Ok((x, y)) => {
                true_count += x as u64;
                r.check(x == y, || format!("#{i} over {spec}: {x} before, {y} after desugaring"));
            }
            Err(e) => r.fail(format!("#{i} over {spec}: {e}")),
        }
    }
    if fallback > 0 {
        r.skip(format!("{fallback} instances exceeded the naive budget and were compared with the guided strategy"));
    }
    r.value("instances", DESUGAR_INSTANCES);
    r.value("true_instances", true_count);
    r
}

/// Compares a formula over `inv:3` with its realification over `fq:3`.
struct RealifyPair<'s> {
    inv: &'s Structure,
    free: Vec<Var>,
    original: Compiled<'s>,
    realified: Compiled<'s>,
    /// `u = ε²` and `1/(2ε)`, `1/2` in the involutive structure.
    u: u32,
    inv_two_eps: u32,
    half: u32,
}

impl<'s> RealifyPair<'s> {
    fn new(inv: &'s Structure, base: &'s Structure, f: &Formula, free: Vec<Var>) -> RealifyPair<'s> {
        let uvar = Var::new("ueps");
        let rf = realify_formula(f, &uvar).expect("no clashes");
        let mut rfree = vec![uvar];
        for v in &free {
            let (x, y) = components(v);
            rfree.push(x);
            rfree.push(y);
        }
        let eps = inv
            .elements()
            .find(|&e| e != 0 && inv.bar(&e) == Some(inv.neg(&e)))
            .expect("inv:q has imaginary elements");
        let two = inv.from_i64(2);
        RealifyPair {
            inv,
            original: Compiled::new(inv, f, &free).expect("compiles"),
            realified: Compiled::new(base, &rf, &rfree).expect("compiles"),
            free,
            u: inv.mul(&eps, &eps),
            inv_two_eps: inv.inv(&inv.mul(&two, &eps)).unwrap(),
            half: inv.inv(&two).unwrap(),
        }
    }

    /// `z = x + y ε` with `x, y` in the fixed field, which for `inv:p` is the
    /// prime field with the same element indices.
    fn split(&self, z: u32) -> (u32, u32) {
        let k = self.inv;
        let zb = k.bar(&z).unwrap();
        let x = k.mul(&k.add(&z, &zb), &self.half);
        let y = k.mul(&k.sub(&z, &zb), &self.inv_two_eps);
        (x, y)
    }

    fn compare(&self, r: &mut Report, label: &str, values: &[u32]) -> Option<bool> {
        let opts = EvalOptions::guided();
        let mut rv = vec![self.u];
        for &z in values {
            let (x, y) = self.split(z);
            debug_assert!(x < 3 && y < 3);
            rv.push(x);
            rv.push(y);
        }
        match (self.original.eval(values, &opts), self.realified.eval(&rv, &opts)) {
            (Ok(a), Ok(b)) => {
                r.check(a == b, || format!("{label}: {a} over inv:3, {b} realified, at {values:?}"));
                Some(a)
            }
            (Err(e), _) | (_, Err(e)) => {
                r.fail(format!("{label}: {e}"));
                None
            }
        }
    }

    fn arity(&self) -> usize {
        self.free.len()
    }
}

fn all_points(q: u32, arity: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = (q as u64).pow(arity as u32);
    (0..total).map(move |mut idx| {
        (0..arity)
            .map(|_| {
                let v = (idx % q as u64) as u32;
                idx /= q as u64;
                v
            })
            .collect()
    })
}

fn flat(m: &ConcreteMatrix<u32>) -> Vec<u32> {
    m.entries().to_vec()
}

/// `(x matrix, f coefficients, u matrix)` variables of a norm instance.
fn norm_instance(n: usize, d: usize) -> (Formula, Vec<Var>) {
    let g = Family::U(n);
    let x = TermMatrix::vars("x", n);
    let u = TermMatrix::vars("u", n);
    let f = MonicPoly::generic("f", d);
    let px = char_poly(&x).expect("square");
    let mut fresh = Fresh::starting_at(0);
    let body = norm_formula(g, &x, &px, &f, &u, &mut fresh);
    let mut free = x.vars_used();
    free.extend(f.vars());
    free.extend(u.vars_used());
    (body, free)
}

fn trace_instance(n: usize) -> (Formula, Vec<Var>) {
    let g = Family::U(n);
    let x = TermMatrix::vars("x", n);
    let c = TermMatrix::vars("c", n);
    let mut fresh = Fresh::starting_at(0);
    let body = trace_form_formula(g, &x, &c, &mut fresh);
    let mut free = x.vars_used();
    free.extend(c.vars_used());
    (body, free)
}

/// Monic divisors of `p` of degree `d` over the structure (leading 1 kept).
fn divisors(s: &Structure, p: &Poly<u32>, d: usize) -> Vec<Poly<u32>> {
    let els: Vec<u32> = s.elements().collect();
    let factors = factor_monic(s, &els, p);
    let mut out: Vec<Poly<u32>> = Vec::new();
    for mask in 0u32..(1 << factors.len()) {
        let prod = factors
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(vec![1], |acc, (_, f)| poly_mul(s, &acc, f));
        if prod.len() == d + 1 && !out.contains(&prod) {
            out.push(prod);
        }
    }
    out
}

fn random_in_span(s: &Structure, g: &mut ChaCha8Rng, basis: &[ConcreteMatrix<u32>], n: usize) -> ConcreteMatrix<u32> {
    let ops = Ops(s);
    basis.iter().fold(ops.zero(n, n), |acc, b| {
        let c = g.gen_range(0..s.size());
        ops.add(&acc, &ops.scale(&c, b))
    })
}

pub fn realify_suite(seed: u64) -> Report {
    let mut r = Report::new("realify", seed);
    let inv = structure("inv:3");
    let base = structure("fq:3");
    let ops = Ops(&inv);
    let mut g = rng(seed, 1);
    let q = inv.size();
    let mut tally = serde_json::Map::new();
    let mut record = |name: &str, cases: u64, holds: u64| {
        tally.insert(name.to_string(), json!({ "points": cases, "true": holds }));
    };

    for n in [1, 2] {
        let fam = Family::U(n);
        let x = TermMatrix::vars("x", n);
        let pair = RealifyPair::new(&inv, &base, &fam.membership(&x), x.vars_used());
        let (mut cases, mut holds) = (0, 0);
        let mut members = Vec::new();
        for p in all_points(q, pair.arity()) {
            cases += 1;
            if pair.compare(&mut r, &format!("u({n}) membership"), &p) == Some(true) {
                holds += 1;
                members.push(p);
            }
        }
        record(&format!("u{n}.membership"), cases, holds);

        // norm
        let max_d = n;
        let (mut cases, mut holds) = (0, 0);
        for d in 0..=max_d {
            let (body, free) = norm_instance(n, d);
            let pair = RealifyPair::new(&inv, &base, &body, free);
            let label = format!("u({n}) norm, deg f = {d}");
            for xp in &members {
                let xm = ConcreteMatrix::from_fn(n, n, |i, j| xp[i * n + j]);
                let fs: Vec<Vec<u32>> = if n == 1 {
                    all_points(q, d).collect()
                } else {
                    let px = ops.char_poly(&xm).expect("square");
                    let mut fs: Vec<Vec<u32>> = divisors(&inv, &px, d).into_iter().map(|p| p[..d].to_vec()).collect();
                    fs.push((0..d).map(|_| g.gen_range(0..q)).collect());
                    fs
                };
                let us: Vec<ConcreteMatrix<u32>> = if n == 1 {
                    all_points(q, 1).map(|p| ConcreteMatrix::from_fn(1, 1, |_, _| p[0])).collect()
                } else {
                    let basis = ops.centralizer_basis(&xm).expect("square");
                    let x1 = random_in_span(&inv, &mut g, &basis, n);
                    vec![
                        ops.zero(n, n),
                        ops.identity(n),
                        random_in_span(&inv, &mut g, &basis, n),
                        ops.mul(&x1, &tau(&inv, fam, &x1)),
                        super::random_matrix(&inv, &mut g, n),
                    ]
                };
                for f in &fs {
                    for u in &us {
                        let mut values = xp.clone();
                        values.extend(f);
                        values.extend(flat(u));
                        cases += 1;
                        holds += (pair.compare(&mut r, &label, &values) == Some(true)) as u64;
                    }
                }
            }
        }
        record(&format!("u{n}.norm"), cases, holds);

        // trace form
        let (body, free) = trace_instance(n);
        let pair = RealifyPair::new(&inv, &base, &body, free);
        let label = format!("u({n}) trace form");
        let (mut cases, mut holds) = (0, 0);
        let chi = if n % 2 == 0 { inv.neg(&1) } else { 1 };
        // the form is only defined where C(X) has dimension n
        let mut skipped = 0;
        for xp in &members {
            let xm = ConcreteMatrix::from_fn(n, n, |i, j| xp[i * n + j]);
            let basis = ops.centralizer_basis(&xm).expect("square");
            if basis.len() != n {
                skipped += 1;
                continue;
            }
            let cs: Vec<ConcreteMatrix<u32>> = if n == 1 {
                all_points(q, 1).map(|p| ConcreteMatrix::from_fn(1, 1, |_, _| p[0])).collect()
            } else {
                let mut cs: Vec<_> = span_elements(&inv, &basis, n)
                    .into_iter()
                    .filter(|c| tau(&inv, fam, c) == ops.scale(&chi, c))
                    .collect();
                cs.shuffle(&mut g);
                cs.truncate(9);
                cs.push(super::random_matrix(&inv, &mut g, n));
                cs
            };
            for c in &cs {
                let mut values = xp.clone();
                values.extend(flat(c));
                cases += 1;
                holds += (pair.compare(&mut r, &label, &values) == Some(true)) as u64;
            }
        }
        if skipped > 0 {
            r.skip(format!("u({n}) trace form: {skipped} members with dim C(X) > {n} not evaluated"));
        }
        record(&format!("u{n}.trace_form"), cases, holds);
    }
    // the centralizer condition alone, as a cheap sanity anchor
    let x = TermMatrix::vars("x", 2);
    let y = TermMatrix::vars("y", 2);
    let mut free = x.vars_used();
    free.extend(y.vars_used());
    let pair = RealifyPair::new(&inv, &base, &commutes(&x, &y), free);
    for _ in 0..200 {
        let p: Vec<u32> = (0..8).map(|_| g.gen_range(0..q)).collect();
        pair.compare(&mut r, "commutes", &p);
    }
    r.values.insert("tally".into(), serde_json::Value::Object(tally));
    r
}
