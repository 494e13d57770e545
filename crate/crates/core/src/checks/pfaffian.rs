//! Pfaffian identities over F₃, F₅ and ℚ, each instance also checked against
//! the symbolic pfaffian and θ terms.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldOps, Rationals};
use crate::lang::{Term, TermKind, Var};
use crate::lie::Family;
use crate::oracle::{ConcreteMatrix, Ops};
use crate::poly::{pfaffian_term, TermMatrix};

use super::{is_member, rng, structure, Report};

pub const INSTANCES: usize = 200;
const THETA_PAIRS: [(usize, usize); 3] = [(1, 1), (1, 2), (2, 2)];

struct Symbolic {
    /// pf of a generic skew matrix of size 2, 4, 6.
    pf: Vec<(TermMatrix, Term)>,
    /// θ on so(2k), k = 1..=4.
    theta: Vec<(TermMatrix, Term)>,
}

impl Symbolic {
    fn new() -> Symbolic {
        let skew = |n: usize| {
            TermMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Less => Term::var(&Var::indexed("a", &[i as u32 + 1, j as u32 + 1])),
                std::cmp::Ordering::Equal => Term::zero(),
                std::cmp::Ordering::Greater => Term::neg(&Term::var(&Var::indexed("a", &[j as u32 + 1, i as u32 + 1]))),
            })
        };
        let pf = [2, 4, 6]
            .iter()
            .map(|&n| {
                let m = skew(n);
                let t = pfaffian_term(&m).expect("even");
                (m, t)
            })
            .collect();
        let theta = (1..=4)
            .map(|k| {
                let x = TermMatrix::vars("x", 2 * k);
                let t = Family::So(2 * k).theta(&x);
                (x, t)
            })
            .collect();
        Symbolic { pf, theta }
    }
}

fn eval_at<K: FieldOps>(k: &K, vars: &TermMatrix, t: &Term, m: &ConcreteMatrix<K::Elem>) -> K::Elem {
    let n = vars.rows();
    let mut env: HashMap<Var, K::Elem> = HashMap::new();
    for i in 0..n {
        for j in 0..n {
            // entries below the diagonal of a generic skew matrix are not variables
            if let TermKind::Var(v) = vars.get(i, j).kind() {
                env.insert(v.clone(), m.get(i, j).clone());
            }
        }
    }
    t.eval(k, &|v| env.get(v).cloned()).expect("all variables bound")
}

fn random_skew<K: FieldOps>(
    k: &K,
    n: usize,
    rnd: &mut dyn FnMut() -> K::Elem,
) -> ConcreteMatrix<K::Elem> {
    let mut m = Ops(k).zero(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = rnd();
            m.set(j, i, k.neg(&v));
            m.set(i, j, v);
        }
    }
    m
}

/// A random member of `so(2a)`: `J⁻¹ S` with `S` skew.
fn random_so<K: FieldOps>(k: &K, n: usize, rnd: &mut dyn FnMut() -> K::Elem) -> ConcreteMatrix<K::Elem> {
    let ops = Ops(k);
    let j = ops.j(Family::So(n)).expect("odd characteristic");
    let ji = ops.inverse(&j).expect("J is invertible");
    ops.mul(&ji, &random_skew(k, n, rnd))
}

fn sign<K: FieldOps>(k: &K, odd: bool) -> K::Elem {
    if odd {
        k.neg(&k.one())
    } else {
        k.one()
    }
}

fn suite_over<K: FieldOps>(r: &mut Report, k: &K, label: &str, sym: &Symbolic, rnd: &mut dyn FnMut() -> K::Elem) {
    let ops = Ops(k);
    // J_{2a+2b} = ψ((−1)^b J_{2a}, J_{2b})
    for (a, b) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let ja = ops.j(Family::So(2 * a)).expect("odd characteristic");
        let jb = ops.j(Family::So(2 * b)).expect("odd characteristic");
        let jab = ops.j(Family::So(2 * a + 2 * b)).expect("odd characteristic");
        let psi = ops.psi(&ops.scale(&sign(k, b % 2 == 1), &ja), &jb).expect("even sizes");
        r.check(psi == jab, || format!("{label}: J identity fails for (a, b) = ({a}, {b})"));
    }
    for i in 0..INSTANCES {
        let m = 1 + i % 3;
        let n = 2 * m;
        let a = random_skew(k, n, rnd);
        let pf_a = ops.pfaffian(&a).expect("even");
        let det_a = ops.det(&a).expect("square");
        r.check(k.mul(&pf_a, &pf_a) == det_a, || format!("{label} #{i}: pf² ≠ det for {a:?}"));

        let (vars, term) = &sym.pf[m - 1];
        let sym_pf = eval_at(k, vars, term, &a);
        r.check(sym_pf == pf_a, || format!("{label} #{i}: symbolic pf {sym_pf:?}, oracle {pf_a:?}"));

        let g = ConcreteMatrix::from_fn(n, n, |_, _| rnd());
        let conj = ops.mul(&ops.mul(&g.transpose(), &a), &g);
        let lhs = ops.pfaffian(&conj).expect("even");
        let rhs = k.mul(&ops.det(&g).expect("square"), &pf_a);
        r.check(lhs == rhs, || format!("{label} #{i}: pf(ᵗgAg) ≠ det(g) pf(A)"));

        let nb = 2 * (1 + i % 2);
        let b = random_skew(k, nb, rnd);
        let lhs = ops.pfaffian(&ops.block_diag(&a, &b)).expect("even");
        let rhs = k.mul(&pf_a, &ops.pfaffian(&b).expect("even"));
        r.check(lhs == rhs, || format!("{label} #{i}: pf(A⊕B) ≠ pf(A) pf(B)"));

        let (pa, pb) = THETA_PAIRS[i % 3];
        let x = random_so(k, 2 * pa, rnd);
        let y = random_so(k, 2 * pb, rnd);
        let psi = ops.psi(&x, &y).expect("even sizes");
        r.check(is_member(k, Family::So(2 * (pa + pb)), &psi), || {
            format!("{label} #{i}: ψ(A, B) is not in so({})", 2 * (pa + pb))
        });
        let tx = ops.theta(&x).expect("even");
        let ty = ops.theta(&y).expect("even");
        let tpsi = ops.theta(&psi).expect("even");
        let want = k.mul(&k.mul(&tx, &ty), &sign(k, pa * pb % 2 == 1));
        r.check(tpsi == want, || format!("{label} #{i}: θ(ψ(A,B)) ≠ θ(A)θ(B)(−1)^ab for (a, b) = ({pa}, {pb})"));
        for (m, t) in [(&x, tx), (&y, ty), (&psi, tpsi)] {
            let (vars, term) = &sym.theta[m.rows() / 2 - 1];
            let s = eval_at(k, vars, term, m);
            r.check(s == t, || format!("{label} #{i}: symbolic θ {s:?}, oracle {t:?}"));
        }
    }
}

fn rational(g: &mut ChaCha8Rng) -> BigRational {
    let n = g.gen_range(-5i64..=5);
    let d = if g.gen_bool(0.25) { g.gen_range(1i64..=3) } else { 1 };
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn run(seed: u64) -> Report {
    let mut r = Report::new("pfaffian", seed);
    let sym = Symbolic::new();
    for (stream, spec) in ["fq:3", "fq:5"].iter().enumerate() {
        let s = structure(spec);
        let mut g = rng(seed, stream as u64);
        let size = s.size();
        suite_over(&mut r, &s, spec, &sym, &mut || g.gen_range(0..size));
    }
    let mut g = rng(seed, 2);
    suite_over(&mut r, &Rationals, "Q", &sym, &mut || rational(&mut g));
    r.value("instances_per_field", INSTANCES);
    r
}
