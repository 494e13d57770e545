//! Lowering to the strict core `{=, ¬, ∨, ∃}` over `{var, 0, 1, +, ×, bar}`.
//!
//! Literals `k ≥ 2` become sums of ones. A negative literal `-k` is replaced
//! by a witness `w` constrained by `w + k = 0`; a rational `m/d` by a witness
//! with `d·w = m`. Witnesses are quantified around the atom they occur in.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::formula::Formula;
use super::term::{rebuild_raw, Term, TermKind};
use super::var::{Fresh, Var};

pub fn desugar(f: &Formula) -> Formula {
    let mut fresh = Fresh::avoiding(f.all_vars().iter());
    lower(f, &mut fresh)
}

fn core_true() -> Formula {
    Formula::eq(&Term::zero(), &Term::zero())
}

fn core_and(a: Formula, b: Formula) -> Formula {
    Formula::not(Formula::or(Formula::not(a), Formula::not(b)))
}

fn lower(f: &Formula, fresh: &mut Fresh) -> Formula {
    match f {
        Formula::Eq(a, b) => lower_atom(a, b, fresh),
        Formula::Not(a) => Formula::not(lower(a, fresh)),
        Formula::Or(a, b) => Formula::or(lower(a, fresh), lower(b, fresh)),
        Formula::Exists(v, a) => Formula::exists(v, lower(a, fresh)),
        Formula::And(a, b) => core_and(lower(a, fresh), lower(b, fresh)),
        Formula::Forall(v, a) => Formula::not(Formula::exists(v, Formula::not(lower(a, fresh)))),
        Formula::Implies(a, b) => Formula::or(Formula::not(lower(a, fresh)), lower(b, fresh)),
        Formula::Iff(a, b) => {
            let (la, lb) = (lower(a, fresh), lower(b, fresh));
            core_and(
                Formula::or(Formula::not(la.clone()), lb.clone()),
                Formula::or(Formula::not(lb), la),
            )
        }
        Formula::True => core_true(),
        Formula::False => Formula::not(core_true()),
        Formula::BigOr(parts) => match parts.split_first() {
            None => Formula::not(core_true()),
            Some((first, [])) => lower(first, fresh),
            Some((first, rest)) => {
                let head = lower(first, fresh);
                Formula::or(head, lower(&Formula::big_or(rest.to_vec()), fresh))
            }
        },
        Formula::BigAnd(parts) => match parts.split_first() {
            None => core_true(),
            Some((first, [])) => lower(first, fresh),
            Some((first, rest)) => {
                let head = lower(first, fresh);
                core_and(head, lower(&Formula::big_and(rest.to_vec()), fresh))
            }
        },
    }
}

/// `1 + 1 + … + 1` for small `k`, binary doubling above 16.
pub fn lower_natural(k: &BigInt) -> Term {
    if k.is_zero() {
        return Term::zero();
    }
    if k.is_one() {
        return Term::one();
    }
    if let Some(small) = k.to_u32().filter(|&s| s <= 16) {
        let mut t = Term::one();
        for _ in 1..small {
            t = Term::raw(TermKind::Add(t, Term::one()));
        }
        return t;
    }
    let two = Term::raw(TermKind::Add(Term::one(), Term::one()));
    let half: BigInt = k / 2;
    let doubled = Term::raw(TermKind::Mul(two, lower_natural(&half)));
    if (k % 2u32).is_zero() {
        doubled
    } else {
        Term::raw(TermKind::Add(doubled, Term::one()))
    }
}

fn lower_atom(a: &Term, b: &Term, fresh: &mut Fresh) -> Formula {
    // Literals needing a witness, in first-occurrence order.
    let mut witnessed: Vec<BigRational> = Vec::new();
    for t in [a, b] {
        t.visit(&mut |n| {
            let lit = match n.kind() {
                TermKind::Int(k) if k.is_negative() => Some(BigRational::from_integer(k.clone())),
                TermKind::Rat(r) => Some(r.clone()),
                _ => None,
            };
            if let Some(r) = lit {
                if !witnessed.contains(&r) {
                    witnessed.push(r);
                }
            }
        });
    }
    let witnesses: Vec<Var> = witnessed.iter().map(|_| fresh.var("w")).collect();

    let mut memo = HashMap::new();
    let mut rewrite = |t: &Term| {
        t.rebuild(&mut memo, &mut |n, kids| match n.kind() {
            TermKind::Int(k) if k.is_negative() => {
                let r = BigRational::from_integer(k.clone());
                let i = witnessed.iter().position(|w| *w == r).unwrap();
                Term::var(&witnesses[i])
            }
            TermKind::Int(k) => lower_natural(k),
            TermKind::Rat(r) => {
                let i = witnessed.iter().position(|w| w == r).unwrap();
                Term::var(&witnesses[i])
            }
            _ => rebuild_raw(n, kids),
        })
    };
    let atom = Formula::eq(&rewrite(a), &rewrite(b));

    let mut body = atom;
    for (r, w) in witnessed.iter().zip(&witnesses).rev() {
        let wt = Term::var(w);
        let den = r.denom();
        let num = r.numer();
        let scaled = if den.is_one() {
            wt
        } else {
            Term::raw(TermKind::Mul(lower_natural(den), wt))
        };
        let constraint = if num.is_negative() {
            Formula::eq(&Term::raw(TermKind::Add(scaled, lower_natural(&-num))), &Term::zero())
        } else {
            Formula::eq(&scaled, &lower_natural(num))
        };
        body = Formula::exists(w, core_and(constraint, body));
    }
    body
}

/// True when `f` only uses the strict core.
pub fn is_core(f: &Formula) -> bool {
    let mut ok = true;
    f.walk(&mut |g| match g {
        Formula::Eq(a, b) => {
            for t in [a, b] {
                t.visit(&mut |n| {
                    if matches!(n.kind(), TermKind::Int(_) | TermKind::Rat(_)) {
                        ok = false;
                    }
                });
            }
        }
        Formula::Not(_) | Formula::Or(..) | Formula::Exists(..) => {}
        _ => ok = false,
    });
    ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::sexpr::formula_to_sexpr;

    #[test]
    fn forall_lowers_to_not_exists_not() {
        let x = Var::new("x");
        let f = Formula::forall(&x, Formula::eq(&Term::var(&x), &Term::var(&x)));
        assert_eq!(formula_to_sexpr(&desugar(&f)), "(not (exists x (not (= x x))))");
    }

    #[test]
    fn three_is_one_plus_one_plus_one() {
        let x = Var::new("x");
        let f = Formula::eq(&Term::var(&x), &Term::int(3));
        assert_eq!(formula_to_sexpr(&desugar(&f)), "(= x (+ (+ 1 1) 1))");
    }

    #[test]
    fn minus_one_uses_a_witness() {
        let y = Var::new("y");
        let f = Formula::eq(&Term::var(&y), &Term::int(-1));
        let expected = "(exists w$0 (not (or (not (= (+ w$0 1) 0)) (not (= y w$0)))))";
        assert_eq!(formula_to_sexpr(&desugar(&f)), expected);
    }

    #[test]
    fn rational_witness() {
        let y = Var::new("y");
        let f = Formula::eq(&Term::var(&y), &Term::ratio(-1, 2));
        let s = formula_to_sexpr(&desugar(&f));
        assert_eq!(s, "(exists w$0 (not (or (not (= (+ (* (+ 1 1) w$0) 1) 0)) (not (= y w$0)))))");
    }

    #[test]
    fn big_literals_stay_small() {
        let t = lower_natural(&BigInt::from(1000));
        assert!(t.dag_size() < 60);
    }

    #[test]
    fn empty_connectives() {
        assert!(is_core(&desugar(&Formula::big_or(vec![]))));
        assert_eq!(formula_to_sexpr(&desugar(&Formula::big_and(vec![]))), "(= 0 0)");
    }
}
