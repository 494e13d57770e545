use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use super::term::{Term, TermKind};
use super::var::{Fresh, Var};

/// First-order formulas over the ring language.
///
/// The strict core is `Eq`, `Not`, `Or`, `Exists`; everything else is sugar
/// that [`crate::lang::desugar`] lowers away.
#[derive(Clone, PartialEq)]
pub enum Formula {
    Eq(Term, Term),
    Not(Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Exists(Var, Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Forall(Var, Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
    Iff(Arc<Formula>, Arc<Formula>),
    True,
    False,
    /// Empty disjunction is false.
    BigOr(Arc<Vec<Formula>>),
    /// Empty conjunction is true.
    BigAnd(Arc<Vec<Formula>>),
}

impl Formula {
    pub fn eq(a: &Term, b: &Term) -> Formula {
        Formula::Eq(a.clone(), b.clone())
    }

    /// `a = b`, or `True` when both sides are the same term.
    pub fn eq_reduced(a: &Term, b: &Term) -> Formula {
        if a == b {
            Formula::True
        } else {
            Formula::eq(a, b)
        }
    }

    /// `a != b`.
    pub fn ne(a: &Term, b: &Term) -> Formula {
        Formula::not(Formula::eq(a, b))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Arc::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Arc::new(a), Arc::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Arc::new(a), Arc::new(b))
    }

    pub fn exists(v: &Var, f: Formula) -> Formula {
        Formula::Exists(v.clone(), Arc::new(f))
    }

    pub fn forall(v: &Var, f: Formula) -> Formula {
        Formula::Forall(v.clone(), Arc::new(f))
    }

    /// `∃v1 ∃v2 … f`, outermost first.
    pub fn exists_many(vars: &[Var], f: Formula) -> Formula {
        vars.iter().rev().fold(f, |acc, v| Formula::exists(v, acc))
    }

    pub fn forall_many(vars: &[Var], f: Formula) -> Formula {
        vars.iter().rev().fold(f, |acc, v| Formula::forall(v, acc))
    }

    pub fn big_or(fs: Vec<Formula>) -> Formula {
        Formula::BigOr(Arc::new(fs))
    }

    pub fn big_and(fs: Vec<Formula>) -> Formula {
        Formula::BigAnd(Arc::new(fs))
    }

    /// Conjunction that drops `True` parts, collapses on `False`, and avoids
    /// a wrapper for zero or one part.
    pub fn and_all(fs: impl IntoIterator<Item = Formula>) -> Formula {
        let mut parts = Vec::new();
        for f in fs {
            match f {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::BigAnd(inner) => parts.extend(inner.iter().cloned()),
                other => parts.push(other),
            }
        }
        match parts.len() {
            0 => Formula::True,
            1 => parts.pop().unwrap(),
            _ => Formula::big_and(parts),
        }
    }

    /// Disjunction counterpart of [`Formula::and_all`].
    pub fn or_any(fs: impl IntoIterator<Item = Formula>) -> Formula {
        let mut parts = Vec::new();
        for f in fs {
            match f {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::BigOr(inner) => parts.extend(inner.iter().cloned()),
                other => parts.push(other),
            }
        }
        match parts.len() {
            0 => Formula::False,
            1 => parts.pop().unwrap(),
            _ => Formula::big_or(parts),
        }
    }

    /// Entry-wise equality of two equally long term vectors.
    pub fn eq_all(a: &[Term], b: &[Term]) -> Formula {
        debug_assert_eq!(a.len(), b.len());
        Formula::and_all(a.iter().zip(b).map(|(x, y)| Formula::eq(x, y)))
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Eq(..) | Formula::True | Formula::False => vec![],
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => vec![a],
            Formula::Or(a, b) | Formula::And(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                vec![a, b]
            }
            Formula::BigOr(v) | Formula::BigAnd(v) => v.iter().collect(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    /// Every variable occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        let mut seen = HashSet::new();
        self.walk(&mut |f| match f {
            Formula::Eq(a, b) => {
                for t in [a, b] {
                    t.visit_inner(&mut seen, &mut |n| {
                        if let TermKind::Var(v) = n.kind() {
                            out.insert(v.clone());
                        }
                    });
                }
            }
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn walk(&self, f: &mut dyn FnMut(&Formula)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    pub fn contains_bar(&self) -> bool {
        let mut found = false;
        self.walk(&mut |f| {
            if let Formula::Eq(a, b) = f {
                found |= a.contains_bar() || b.contains_bar();
            }
        });
        found
    }

    /// Capture-avoiding simultaneous substitution.
    pub fn substitute(&self, map: &HashMap<Var, Term>) -> Formula {
        let mut avoid: Vec<Var> = self.all_vars().into_iter().collect();
        for (k, t) in map {
            avoid.push(k.clone());
            avoid.extend(t.vars());
        }
        let mut fresh = Fresh::avoiding(avoid.iter());
        subst(self, map, &mut fresh)
    }

    pub fn stats(&self) -> FormulaStats {
        let mut quantifiers = 0;
        let mut formula_nodes = 0;
        let mut seen = HashSet::new();
        let mut term_nodes = 0;
        self.walk(&mut |f| {
            formula_nodes += 1;
            match f {
                Formula::Exists(..) | Formula::Forall(..) => quantifiers += 1,
                Formula::Eq(a, b) => {
                    a.visit_inner(&mut seen, &mut |_| term_nodes += 1);
                    b.visit_inner(&mut seen, &mut |_| term_nodes += 1);
                }
                _ => {}
            }
        });
        FormulaStats {
            free_vars: self.free_vars().len(),
            quantifiers,
            formula_nodes,
            term_nodes,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct FormulaStats {
    pub free_vars: usize,
    pub quantifiers: usize,
    pub formula_nodes: usize,
    /// Distinct term DAG nodes.
    pub term_nodes: usize,
}

fn collect_free(f: &Formula, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    match f {
        Formula::Eq(a, b) => {
            for v in a.vars().into_iter().chain(b.vars()) {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        }
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            bound.push(v.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
        other => {
            for c in other.children() {
                collect_free(c, bound, out);
            }
        }
    }
}

fn subst(f: &Formula, map: &HashMap<Var, Term>, fresh: &mut Fresh) -> Formula {
    if map.is_empty() {
        return f.clone();
    }
    match f {
        Formula::Eq(a, b) => {
            let mut memo = HashMap::new();
            let a = a.substitute_memo(map, &mut memo);
            let b = b.substitute_memo(map, &mut memo);
            Formula::Eq(a, b)
        }
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let body_free = body.free_vars();
            let mut inner: HashMap<Var, Term> = map
                .iter()
                .filter(|(k, _)| *k != v && body_free.contains(*k))
                .map(|(k, t)| (k.clone(), t.clone()))
                .collect();
            let captures = inner.values().any(|t| t.vars().contains(v));
            let (bv, new_body) = if captures {
                let nv = fresh.like(v);
                inner.insert(v.clone(), Term::var(&nv));
                (nv, subst(body, &inner, fresh))
            } else {
                (v.clone(), subst(body, &inner, fresh))
            };
            match f {
                Formula::Exists(..) => Formula::exists(&bv, new_body),
                _ => Formula::forall(&bv, new_body),
            }
        }
        Formula::Not(a) => Formula::not(subst(a, map, fresh)),
        Formula::Or(a, b) => Formula::or(subst(a, map, fresh), subst(b, map, fresh)),
        Formula::And(a, b) => Formula::and(subst(a, map, fresh), subst(b, map, fresh)),
        Formula::Implies(a, b) => Formula::implies(subst(a, map, fresh), subst(b, map, fresh)),
        Formula::Iff(a, b) => Formula::iff(subst(a, map, fresh), subst(b, map, fresh)),
        Formula::True | Formula::False => f.clone(),
        Formula::BigOr(v) => Formula::big_or(v.iter().map(|g| subst(g, map, fresh)).collect()),
        Formula::BigAnd(v) => Formula::big_and(v.iter().map(|g| subst(g, map, fresh)).collect()),
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::lang::sexpr::formula_to_sexpr(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::lang::sexpr::formula_to_sexpr(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Var {
        Var::new(n)
    }
    fn t(n: &str) -> Term {
        Term::var(&v(n))
    }

    #[test]
    fn free_vars_of_atom_and_binder() {
        let f = Formula::eq(&t("x"), &Term::add(&Term::one(), &Term::one()));
        assert_eq!(f.free_vars(), [v("x")].into_iter().collect());
        let g = Formula::exists(&v("x"), Formula::eq(&t("x"), &t("y")));
        assert_eq!(g.free_vars(), [v("y")].into_iter().collect());
    }

    #[test]
    fn substitution_of_closed_term() {
        let f = Formula::eq(&t("x"), &Term::zero());
        let map = HashMap::from([(v("x"), Term::one())]);
        assert_eq!(f.substitute(&map), Formula::eq(&Term::one(), &Term::zero()));
    }

    #[test]
    fn substitution_avoids_capture() {
        let f = Formula::exists(&v("x"), Formula::eq(&t("x"), &t("y")));
        let map = HashMap::from([(v("y"), t("x"))]);
        let g = f.substitute(&map);
        match &g {
            Formula::Exists(b, body) => {
                assert_ne!(b, &v("x"));
                assert_eq!(**body, Formula::eq(&Term::var(b), &t("x")));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(g.free_vars(), [v("x")].into_iter().collect());
    }

    #[test]
    fn bound_variable_is_not_substituted() {
        let f = Formula::exists(&v("x"), Formula::eq(&t("x"), &t("x")));
        let map = HashMap::from([(v("x"), Term::one())]);
        assert_eq!(f.substitute(&map), f);
    }

    #[test]
    fn and_all_simplifies() {
        assert_eq!(Formula::and_all(vec![]), Formula::True);
        assert_eq!(
            Formula::and_all(vec![Formula::True, Formula::eq(&t("x"), &t("x"))]),
            Formula::eq(&t("x"), &t("x"))
        );
        assert_eq!(
            Formula::and_all(vec![Formula::False, Formula::eq(&t("x"), &t("x"))]),
            Formula::False
        );
    }
}
