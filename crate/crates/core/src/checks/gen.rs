//! Seeded random terms and formulas.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::lang::{Formula, Term, Var};

/// What the generator may produce.
#[derive(Debug, Clone)]
pub struct GenConfig {
    pub vars: Vec<Var>,
    /// Allowed denominators for rational literals (empty: integers only).
    pub denominators: Vec<i64>,
    pub bar: bool,
    /// Largest absolute integer literal.
    pub max_int: i64,
    pub term_depth: u32,
    pub formula_depth: u32,
    /// Cap on nested quantifiers.
    pub max_quantifiers: u32,
}

impl GenConfig {
    /// Small formulas over `x, y, z, w`, safe to evaluate naively.
    pub fn evaluable(denominators: Vec<i64>, bar: bool) -> GenConfig {
        GenConfig {
            vars: ["x", "y", "z", "w"].iter().map(|n| Var::new(n)).collect(),
            denominators,
            bar,
            max_int: 4,
            term_depth: 3,
            formula_depth: 4,
            max_quantifiers: 3,
        }
    }

    /// Anything the printer must handle: indexed and generated-looking
    /// names, large literals, deep nesting.
    pub fn syntactic() -> GenConfig {
        GenConfig {
            vars: vec![
                Var::new("x"),
                Var::new("y2"),
                Var::indexed("a", &[1]),
                Var::indexed("m", &[2, 3]),
                Var::new("g$4"),
                Var::new("w$0"),
            ],
            denominators: vec![2, 3, 7, 10],
            bar: true,
            max_int: 1_000_000_000_000,
            term_depth: 4,
            formula_depth: 5,
            max_quantifiers: 4,
        }
    }
}

pub fn term<R: Rng>(rng: &mut R, cfg: &GenConfig, depth: u32) -> Term {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..6) {
            0 => Term::zero(),
            1 => Term::one(),
            2 => {
                let n = rng.gen_range(-cfg.max_int..=cfg.max_int);
                if rng.gen_bool(0.1) {
                    // beyond i64 now and then
                    Term::big_int(BigInt::from(n) * BigInt::from(n) * BigInt::from(n))
                } else {
                    Term::int(n)
                }
            }
            3 if !cfg.denominators.is_empty() => {
                let d = *cfg.denominators.choose(rng).unwrap();
                let n = rng.gen_range(-cfg.max_int.min(50)..=cfg.max_int.min(50));
                Term::ratio(n, d)
            }
            _ => Term::var(cfg.vars.choose(rng).unwrap()),
        };
    }
    match rng.gen_range(0..7) {
        0 | 1 | 2 => Term::add(&term(rng, cfg, depth - 1), &term(rng, cfg, depth - 1)),
        3 | 4 => Term::mul(&term(rng, cfg, depth - 1), &term(rng, cfg, depth - 1)),
        5 if cfg.bar => Term::bar(&term(rng, cfg, depth - 1)),
        _ => Term::neg(&term(rng, cfg, depth - 1)),
    }
}

pub fn formula<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Formula {
    formula_at(rng, cfg, cfg.formula_depth, cfg.max_quantifiers)
}

fn formula_at<R: Rng>(rng: &mut R, cfg: &GenConfig, depth: u32, quants: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..12) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::eq(&term(rng, cfg, cfg.term_depth), &term(rng, cfg, cfg.term_depth)),
        };
    }
    let sub = |rng: &mut R, q: u32| formula_at(rng, cfg, depth - 1, q);
    match rng.gen_range(0..10) {
        0 => Formula::not(sub(rng, quants)),
        1 => Formula::and(sub(rng, quants), sub(rng, quants)),
        2 => Formula::or(sub(rng, quants), sub(rng, quants)),
        3 => Formula::implies(sub(rng, quants), sub(rng, quants)),
        4 => Formula::iff(sub(rng, quants), sub(rng, quants)),
        5 | 6 if quants > 0 => {
            let v = cfg.vars.choose(rng).unwrap().clone();
            let body = sub(rng, quants - 1);
            if rng.gen_bool(0.5) {
                Formula::exists(&v, body)
            } else {
                Formula::forall(&v, body)
            }
        }
        7 => {
            let k = rng.gen_range(0..4);
            Formula::big_or((0..k).map(|_| sub(rng, quants)).collect())
        }
        8 => {
            let k = rng.gen_range(0..4);
            Formula::big_and((0..k).map(|_| sub(rng, quants)).collect())
        }
        _ => Formula::eq(&term(rng, cfg, cfg.term_depth), &term(rng, cfg, cfg.term_depth)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::rng;

    #[test]
    fn same_seed_same_formula() {
        let cfg = GenConfig::syntactic();
        let a = formula(&mut rng(7, 0), &cfg);
        let b = formula(&mut rng(7, 0), &cfg);
        assert_eq!(a, b);
    }

    #[test]
    fn no_bar_when_disabled() {
        let cfg = GenConfig::evaluable(vec![2], false);
        let mut r = rng(3, 1);
        for _ in 0..100 {
            assert!(!formula(&mut r, &cfg).contains_bar());
        }
    }
}
