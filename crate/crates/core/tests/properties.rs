//! Invariants checked on generated inputs. Formulas here come from a small
//! generator of their own, independent of the one the check suites use.

use std::collections::HashMap;

use defring::field::{rat, FieldOps, Rationals};
use defring::interp::{count_points, eval_formula, Assignment, Classifier, CountMode, EvalError, EvalOptions, Structure};
use defring::lang::{desugar, formula_to_sexpr, is_core, parse_formula, Formula, Term, Var};
use defring::lie::{centralizer, Family, TripleSpec};
use defring::oracle::{monic_polys, poly_gcd, ConcreteMatrix, Ops};
use defring::poly::{char_poly, pfaffian_term, resultant_term, MonicPoly, Poly, TermMatrix};
use proptest::prelude::*;

const VARS: [&str; 3] = ["a", "b", "c"];

fn var(i: usize) -> Var {
    Var::new(VARS[i])
}

fn term(bar: bool) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0..VARS.len()).prop_map(|i| Term::var(&var(i))),
        (-3i64..4).prop_map(Term::int),
    ];
    leaf.prop_recursive(3, 12, 2, move |inner| {
        let base = prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Term::add(&x, &y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Term::mul(&x, &y)),
            inner.clone().prop_map(|x| Term::neg(&x)),
        ];
        if bar {
            prop_oneof![3 => base, 1 => inner.prop_map(|x| Term::bar(&x))].boxed()
        } else {
            base.boxed()
        }
    })
}

fn formula(bar: bool) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        4 => (term(bar), term(bar)).prop_map(|(x, y)| Formula::eq(&x, &y)),
        1 => Just(Formula::True),
        1 => Just(Formula::False),
    ];
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Formula::and(x, y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Formula::or(x, y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Formula::implies(x, y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Formula::iff(x, y)),
            (0..VARS.len(), inner.clone()).prop_map(|(i, f)| Formula::exists(&var(i), f)),
            (0..VARS.len(), inner).prop_map(|(i, f)| Formula::forall(&var(i), f)),
        ]
    })
}

fn structure_spec(bar: bool) -> impl Strategy<Value = &'static str> {
    if bar {
        Just("inv:3").boxed()
    } else {
        prop_oneof![Just("fq:3"), Just("fq:5"), Just("fq:9")].boxed()
    }
}

fn assignment(s: &Structure, values: &[u32]) -> Assignment {
    (0..VARS.len()).map(|i| (var(i), values[i] % s.size())).collect()
}

fn eval(s: &Structure, f: &Formula, a: &Assignment) -> bool {
    eval_formula(s, f, a, &EvalOptions::naive()).expect("small formula")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn desugar_preserves_truth((f, spec) in any::<bool>().prop_flat_map(|bar| (formula(bar), structure_spec(bar))), vals in prop::array::uniform3(0u32..9)) {
        let s: Structure = spec.parse().unwrap();
        let a = assignment(&s, &vals);
        let core = desugar(&f);
        prop_assert!(is_core(&core));
        prop_assert_eq!(eval(&s, &core, &a), eval(&s, &f, &a));
    }

    #[test]
    fn substitution_lemma(f in formula(false), t in term(false), x in 0..VARS.len(), vals in prop::array::uniform3(0u32..5)) {
        let s: Structure = "fq:5".parse().unwrap();
        let a = assignment(&s, &vals);
        let tv = t.eval(&s, &|v: &Var| a.get(v).copied()).unwrap();
        let mut map = HashMap::new();
        map.insert(var(x), t.clone());
        let mut shifted = a.clone();
        shifted.insert(var(x), tv);
        prop_assert_eq!(eval(&s, &f.substitute(&map), &a), eval(&s, &f, &shifted));
    }

    #[test]
    fn forall_is_not_exists_not(f in formula(false), x in 0..VARS.len(), vals in prop::array::uniform3(0u32..3)) {
        let s: Structure = "fq:3".parse().unwrap();
        let a = assignment(&s, &vals);
        let lhs = Formula::forall(&var(x), f.clone());
        let rhs = Formula::not(Formula::exists(&var(x), Formula::not(f)));
        prop_assert_eq!(eval(&s, &lhs, &a), eval(&s, &rhs, &a));
    }

    #[test]
    fn strategies_agree(f in formula(true), vals in prop::array::uniform3(0u32..9)) {
        let s: Structure = "inv:3".parse().unwrap();
        let a = assignment(&s, &vals);
        let g = eval_formula(&s, &f, &a, &EvalOptions::guided().validating()).unwrap();
        prop_assert_eq!(eval(&s, &f, &a), g);
    }

    #[test]
    fn text_round_trip(f in formula(true), spaces in prop::collection::vec(1usize..4, 0..64)) {
        let text = formula_to_sexpr(&f);
        let back = parse_formula(&text).unwrap();
        prop_assert_eq!(&back, &f);
        // extra whitespace between tokens is not significant
        let mut k = 0;
        let loose: String = text
            .chars()
            .flat_map(|c| {
                let pad = if c == ' ' { spaces.get(k).copied().unwrap_or(1) } else { 0 };
                k += (c == ' ') as usize;
                std::iter::once(c).chain(std::iter::repeat_n(' ', pad)).chain(std::iter::repeat_n('\n', (pad == 3) as usize))
            })
            .collect();
        prop_assert_eq!(parse_formula(&loose).unwrap(), f);
    }

    #[test]
    fn char_poly_matches_oracle(spec in prop_oneof![Just("fq:3"), Just("fq:5"), Just("fq:7")], n in 1usize..5, raw in prop::collection::vec(0u32..7, 16)) {
        let s: Structure = spec.parse().unwrap();
        let entries: Vec<u32> = raw.iter().map(|v| v % s.size()).collect();
        let m = TermMatrix::from_fn(n, n, |i, j| Term::int(entries[i * n + j] as i64));
        let sym = char_poly(&m).unwrap();
        let none = |_: &Var| None;
        let mut got: Vec<u32> = sym.coeffs().iter().map(|c| c.eval(&s, &none).unwrap()).collect();
        got.push(1);
        let ops = Ops(&s);
        let want = ops.char_poly(&ConcreteMatrix::from_fn(n, n, |i, j| entries[i * n + j])).unwrap();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn char_poly_matches_oracle_over_rationals(n in 1usize..5, ks in prop::collection::vec((-9i64..10, 1i64..4), 16)) {
        let r = |i: usize| rat(ks[i].0, ks[i].1);
        let m = TermMatrix::from_fn(n, n, |i, j| Term::rational(r(i * n + j)));
        let none = |_: &Var| None;
        let mut got: Vec<_> = char_poly(&m).unwrap().coeffs().iter().map(|c| c.eval(&Rationals, &none).unwrap()).collect();
        got.push(rat(1, 1));
        let want = Ops(&Rationals).char_poly(&ConcreteMatrix::from_fn(n, n, |i, j| r(i * n + j))).unwrap();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn pfaffian_squared_is_det(n in prop_oneof![Just(2usize), Just(4), Just(6)], vals in prop::collection::vec(0u32..5, 15)) {
        let s: Structure = "fq:5".parse().unwrap();
        let ops = Ops(&s);
        let mut k = 0;
        let mut upper = HashMap::new();
        for i in 0..n {
            for j in i + 1..n {
                upper.insert((i, j), vals[k]);
                k += 1;
            }
        }
        let a = ConcreteMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Less => upper[&(i, j)],
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => s.neg(&upper[&(j, i)]),
        });
        let pf = ops.pfaffian(&a).unwrap();
        prop_assert_eq!(s.mul(&pf, &pf), ops.det(&a).unwrap());
        let t = TermMatrix::from_fn(n, n, |i, j| Term::int(*a.get(i, j) as i64));
        let none = |_: &Var| None;
        prop_assert_eq!(pfaffian_term(&t).unwrap().eval(&s, &none).unwrap(), pf);
    }

    #[test]
    fn regular_centralizers_have_q_to_the_n_points(n in 1usize..4, vals in prop::collection::vec(0u32..3, 9)) {
        let s: Structure = "fq:3".parse().unwrap();
        let ops = Ops(&s);
        let x = ConcreteMatrix::from_fn(n, n, |i, j| vals[i * n + j]);
        let basis = ops.centralizer_basis(&x).unwrap();
        // gl-regular: the centralizer is as small as it can be
        prop_assume!(basis.len() == n);
        let params: Vec<u32> = x.entries().to_vec();
        let c = count_points(&s, &centralizer(n), &params, CountMode::Exhaustive, &EvalOptions::guided()).unwrap();
        prop_assert_eq!(c.count, Some(3u64.pow(n as u32)));
        for a in &basis {
            for b in &basis {
                let ab = ops.mul(a, b);
                prop_assert!(ops.is_zero(&ops.add(&ops.mul(&x, &ab), &ops.scale(&s.neg(&1), &ops.mul(&ab, &x)))));
                prop_assert_eq!(ops.mul(a, b), ops.mul(b, a));
            }
        }
    }

    #[test]
    fn stable_orbit_is_char_poly_and_theta_equality(
        fam in prop_oneof![Just(Family::Sp(2)), Just(Family::So(3)), Just(Family::So(4))],
        seed in any::<u64>(),
    ) {
        let s: Structure = "fq:3".parse().unwrap();
        let ops = Ops(&s);
        let n = fam.size();
        let lie = fam.lie_algebra();
        let members = defring::interp::enumerate_points(&s, &lie, &[], &EvalOptions::guided()).unwrap();
        let pick = |k: u64| members[(k % members.len() as u64) as usize].clone();
        let (xp, yp) = (pick(seed), pick(seed.rotate_left(29) ^ 0x9e37));
        let orbit = fam.stable_orbit();
        let mut free = orbit.params().to_vec();
        free.extend(orbit.signature().iter().cloned());
        let mut point = xp.clone();
        point.extend(&yp);
        let got = defring::interp::Compiled::new(&s, orbit.body(), &free).unwrap().eval(&point, &EvalOptions::guided()).unwrap();
        let (x, y) = (ConcreteMatrix::from_fn(n, n, |i, j| xp[i * n + j]), ConcreteMatrix::from_fn(n, n, |i, j| yp[i * n + j]));
        let mut want = ops.char_poly(&x).unwrap() == ops.char_poly(&y).unwrap();
        if fam.is_even_orthogonal() {
            want &= ops.theta(&x).unwrap() == ops.theta(&y).unwrap();
        }
        prop_assert_eq!(got, want);
        // a point is always in its own orbit
        let mut diag = xp.clone();
        diag.extend(&xp);
        prop_assert!(defring::interp::Compiled::new(&s, orbit.body(), &free).unwrap().eval(&diag, &EvalOptions::guided()).unwrap());
    }

    #[test]
    fn classification_never_violates_the_partition(vals in prop::collection::vec(0u32..9, 2)) {
        let s: Structure = "inv:3".parse().unwrap();
        let t: TripleSpec = "unitary:n=1,a=1,b=0".parse().unwrap();
        let c = Classifier::new(&s, &t, false).unwrap();
        match c.classify(&vals, &EvalOptions::guided()) {
            Ok(_) | Err(EvalError::NotInDomain) => {}
            Err(e) => prop_assert!(false, "{e} at {vals:?}"),
        }
    }
}

/// res(f, g) = 0 exactly when f and g share a factor: every monic pair of
/// degree ≤ 3 over F₃.
#[test]
fn resultant_vanishes_iff_common_factor() {
    let s: Structure = "fq:3".parse().unwrap();
    let els: Vec<u32> = s.elements().collect();
    let polys: Vec<Vec<u32>> = (0..=3).flat_map(|d| monic_polys(&els, &1, d)).collect();
    let none = |_: &Var| None;
    let to_monic = |p: &[u32]| MonicPoly::from_ints(&p[..p.len() - 1].iter().map(|&c| c as i64).collect::<Vec<_>>());
    let to_poly = |p: &[u32]| Poly::from_ints(&p.iter().map(|&c| c as i64).collect::<Vec<_>>());
    let mut zeros = 0;
    for f in &polys {
        for g in &polys {
            let r = resultant_term(&to_monic(f), &to_poly(g)).eval(&s, &none).unwrap();
            let common = poly_gcd(&s, f, g).len() > 1;
            assert_eq!(r == 0, common, "f = {f:?}, g = {g:?}");
            zeros += common as usize;
        }
    }
    assert!(zeros > 0);
}
