//! Elimination of the involution.
//!
//! Each variable `z` is split as `z = x + y·ε` with `ε̄ = -ε` and `ε² = u`;
//! atoms are compared componentwise, so the output is an involution-free
//! formula whose free variables are `u` and the component variables.

use std::collections::HashMap;

use super::formula::Formula;
use super::term::{Term, TermKind};
use super::var::Var;
use super::vset::VirtualSet;
use super::LangError;

/// Component variables `(z.re, z.im)` of an involution-language variable.
pub fn components(z: &Var) -> (Var, Var) {
    (
        z.renamed(&format!("{}.re", z.name())),
        z.renamed(&format!("{}.im", z.name())),
    )
}

struct Realifier {
    u: Term,
    memo: HashMap<u64, (Term, Term)>,
}

impl Realifier {
    fn term(&mut self, t: &Term) -> (Term, Term) {
        if let Some(hit) = self.memo.get(&t.id()) {
            return hit.clone();
        }
        let mut order = Vec::new();
        let mut seen = self.memo.keys().copied().collect();
        t.visit_inner(&mut seen, &mut |n| order.push(n.clone()));
        for n in order {
            let out = match n.kind() {
                TermKind::Var(z) => {
                    let (x, y) = components(z);
                    (Term::var(&x), Term::var(&y))
                }
                TermKind::Zero | TermKind::One | TermKind::Int(_) | TermKind::Rat(_) => (n.clone(), Term::zero()),
                TermKind::Add(a, b) => {
                    let (ar, ai) = self.memo[&a.id()].clone();
                    let (br, bi) = self.memo[&b.id()].clone();
                    (Term::add(&ar, &br), Term::add(&ai, &bi))
                }
                TermKind::Mul(a, b) => {
                    let (ar, ai) = self.memo[&a.id()].clone();
                    let (br, bi) = self.memo[&b.id()].clone();
                    let re = Term::add(&Term::mul(&ar, &br), &Term::mul(&self.u, &Term::mul(&ai, &bi)));
                    let im = Term::add(&Term::mul(&ar, &bi), &Term::mul(&ai, &br));
                    (re, im)
                }
                TermKind::Bar(a) => {
                    let (ar, ai) = self.memo[&a.id()].clone();
                    (ar, Term::neg(&ai))
                }
            };
            self.memo.insert(n.id(), out);
        }
        self.memo[&t.id()].clone()
    }

    fn formula(&mut self, f: &Formula) -> Formula {
        match f {
            Formula::Eq(a, b) => {
                let (ar, ai) = self.term(a);
                let (br, bi) = self.term(b);
                Formula::and(Formula::eq(&ar, &br), Formula::eq(&ai, &bi))
            }
            Formula::Exists(z, body) | Formula::Forall(z, body) => {
                let (x, y) = components(z);
                let inner = self.formula(body);
                if matches!(f, Formula::Exists(..)) {
                    Formula::exists(&x, Formula::exists(&y, inner))
                } else {
                    Formula::forall(&x, Formula::forall(&y, inner))
                }
            }
            Formula::Not(a) => Formula::not(self.formula(a)),
            Formula::Or(a, b) => Formula::or(self.formula(a), self.formula(b)),
            Formula::And(a, b) => Formula::and(self.formula(a), self.formula(b)),
            Formula::Implies(a, b) => Formula::implies(self.formula(a), self.formula(b)),
            Formula::Iff(a, b) => Formula::iff(self.formula(a), self.formula(b)),
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::BigOr(v) => Formula::big_or(v.iter().map(|g| self.formula(g)).collect()),
            Formula::BigAnd(v) => Formula::big_and(v.iter().map(|g| self.formula(g)).collect()),
        }
    }
}

/// Realifies a formula with respect to the parameter `u = ε²`.
pub fn realify_formula(f: &Formula, u: &Var) -> Result<Formula, LangError> {
    let all = f.all_vars();
    if all.contains(u) {
        return Err(LangError::NameClash(u.clone()));
    }
    for v in &all {
        let (x, y) = components(v);
        if all.contains(&x) || all.contains(&y) || x == *u || y == *u {
            return Err(LangError::NameClash(v.clone()));
        }
    }
    let mut r = Realifier {
        u: Term::var(u),
        memo: HashMap::new(),
    };
    Ok(r.formula(f))
}

/// Realifies a virtual set in the involution language. The signature becomes
/// `(x1, y1, …, xn, yn)` and `u` is added as the first parameter.
pub fn realify(v: &VirtualSet, u: &Var) -> Result<VirtualSet, LangError> {
    if !v.involution() {
        return Err(LangError::InvolutionNotEnabled);
    }
    let body = realify_formula(v.body(), u)?;
    let split = |vars: &[Var]| -> Vec<Var> {
        vars.iter()
            .flat_map(|z| {
                let (x, y) = components(z);
                [x, y]
            })
            .collect()
    };
    let mut params = vec![u.clone()];
    params.extend(split(v.params()));
    VirtualSet::with_params(split(v.signature()), params, body, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::sexpr::formula_to_sexpr;

    #[test]
    fn bar_equals_minus_z() {
        let z = Var::new("z");
        let zt = Term::var(&z);
        let f = Formula::eq(&Term::bar(&zt), &Term::neg(&zt));
        let g = realify_formula(&f, &Var::new("u")).unwrap();
        assert_eq!(
            formula_to_sexpr(&g),
            "(and (= z.re (* -1 z.re)) (= (* -1 z.im) (* -1 z.im)))"
        );
    }

    #[test]
    fn norm_form_components() {
        let z = Var::new("z");
        let zt = Term::var(&z);
        let c = Term::var(&Var::new("c"));
        let f = Formula::eq(&Term::mul(&zt, &Term::bar(&zt)), &c);
        let g = realify_formula(&f, &Var::new("u")).unwrap();
        let expected = "(and (= (+ (* z.re z.re) (* u (* z.im (* -1 z.im)))) c.re) \
                        (= (+ (* z.re (* -1 z.im)) (* z.im z.re)) c.im))";
        assert_eq!(formula_to_sexpr(&g), expected);
    }

    #[test]
    fn requires_involution_language() {
        let x = Var::new("x");
        let v = VirtualSet::new(vec![x.clone()], Formula::eq(&Term::var(&x), &Term::zero())).unwrap();
        assert_eq!(realify(&v, &Var::new("u")).unwrap_err(), LangError::InvolutionNotEnabled);
    }

    #[test]
    fn signature_doubles_plus_parameter() {
        let z = Var::new("z");
        let body = Formula::eq(&Term::bar(&Term::var(&z)), &Term::var(&z));
        let v = VirtualSet::new(vec![z], body).unwrap();
        let r = realify(&v, &Var::new("u")).unwrap();
        assert_eq!(r.arity(), 2);
        assert_eq!(r.params(), &[Var::new("u")]);
        assert!(!r.body().contains_bar());
    }

    #[test]
    fn parameter_clash_is_rejected() {
        let u = Var::new("u");
        let f = Formula::eq(&Term::var(&u), &Term::zero());
        assert!(realify_formula(&f, &u).is_err());
    }
}
