//! Expanded polynomial normal form of terms, for deciding symbolic
//! identities. `bar x` is treated as an independent indeterminate.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::lang::{Term, TermKind, Var};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Var(Var),
    Bar(Var),
}

impl Atom {
    fn bar(&self) -> Atom {
        match self {
            Atom::Var(v) => Atom::Bar(v.clone()),
            Atom::Bar(v) => Atom::Var(v.clone()),
        }
    }
}

/// Sorted `(atom, exponent)` pairs.
pub type Monomial = Vec<(Atom, u32)>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparsePoly {
    terms: BTreeMap<Monomial, BigRational>,
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut m: BTreeMap<Atom, u32> = a.iter().cloned().collect();
    for (x, e) in b {
        *m.entry(x.clone()).or_insert(0) += e;
    }
    m.into_iter().collect()
}

impl SparsePoly {
    pub fn zero() -> SparsePoly {
        SparsePoly::default()
    }

    pub fn constant(c: BigRational) -> SparsePoly {
        let mut p = SparsePoly::zero();
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn atom(a: Atom) -> SparsePoly {
        let mut p = SparsePoly::zero();
        p.terms.insert(vec![(a, 1)], BigRational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    /// The constant value, when the polynomial has no indeterminates.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let e = out.terms.entry(m.clone()).or_insert_with(BigRational::zero);
            *e += c;
            if e.is_zero() {
                out.terms.remove(m);
            }
        }
        out
    }

    pub fn neg(&self) -> SparsePoly {
        SparsePoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &SparsePoly) -> SparsePoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = mono_mul(ma, mb);
                let e = out.terms.entry(m.clone()).or_insert_with(BigRational::zero);
                *e += ca * cb;
                if e.is_zero() {
                    out.terms.remove(&m);
                }
            }
        }
        out
    }

    pub fn bar(&self) -> SparsePoly {
        let mut out = SparsePoly::zero();
        for (m, c) in &self.terms {
            let mut mm: Monomial = m.iter().map(|(a, e)| (a.bar(), *e)).collect();
            mm.sort();
            out.terms.insert(mm, c.clone());
        }
        out
    }

    pub fn from_term(t: &Term) -> SparsePoly {
        let mut memo: HashMap<u64, SparsePoly> = HashMap::new();
        let mut order = Vec::new();
        t.visit(&mut |n| order.push(n.clone()));
        for n in order {
            let p = match n.kind() {
                TermKind::Var(v) => SparsePoly::atom(Atom::Var(v.clone())),
                TermKind::Zero => SparsePoly::zero(),
                TermKind::One => SparsePoly::constant(BigRational::one()),
                TermKind::Int(k) => SparsePoly::constant(BigRational::from_integer(k.clone())),
                TermKind::Rat(r) => SparsePoly::constant(r.clone()),
                TermKind::Add(a, b) => memo[&a.id()].add(&memo[&b.id()]),
                TermKind::Mul(a, b) => memo[&a.id()].mul(&memo[&b.id()]),
                TermKind::Bar(a) => memo[&a.id()].bar(),
            };
            memo.insert(n.id(), p);
        }
        memo.remove(&t.id()).unwrap_or_default()
    }
}

/// True when `a - b` expands to zero.
pub fn identical(a: &Term, b: &Term) -> bool {
    SparsePoly::from_term(a) == SparsePoly::from_term(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_of_sum() {
        let x = Term::var(&Var::new("x"));
        let y = Term::var(&Var::new("y"));
        let s = Term::add(&x, &y);
        let lhs = Term::mul(&s, &s);
        let rhs = Term::sum(&[
            Term::mul(&x, &x),
            Term::mul(&Term::int(2), &Term::mul(&x, &y)),
            Term::mul(&y, &y),
        ]);
        assert!(identical(&lhs, &rhs));
        assert!(!identical(&lhs, &Term::mul(&x, &x)));
    }

    #[test]
    fn bar_distributes() {
        let x = Term::var(&Var::new("x"));
        let t = Term::bar(&Term::mul(&Term::int(3), &Term::add(&x, &Term::one())));
        let u = Term::add(&Term::mul(&Term::int(3), &Term::bar(&x)), &Term::int(3));
        assert!(identical(&t, &u));
    }
}
