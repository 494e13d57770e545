//! Linear-space formulas over a virtual set.

use super::formula::Formula;
use super::term::Term;
use super::var::{Fresh, Var};
use super::vset::VirtualSet;
use super::LangError;

fn check_len(v: &VirtualSet, e: &[Term]) -> Result<(), LangError> {
    if e.len() != v.arity() {
        return Err(LangError::ArityMismatch {
            expected: v.arity(),
            found: e.len(),
        });
    }
    Ok(())
}

fn fresh_for(v: &VirtualSet, vectors: &[Vec<Term>]) -> Fresh {
    let mut used: Vec<Var> = v.body().all_vars().into_iter().collect();
    used.extend(v.signature().iter().cloned());
    used.extend(v.params().iter().cloned());
    for e in vectors {
        for t in e {
            used.extend(t.vars());
        }
    }
    Fresh::avoiding(used.iter())
}

fn combination(coeffs: &[Term], vectors: &[Vec<Term>], len: usize) -> Vec<Term> {
    (0..len)
        .map(|k| {
            let parts: Vec<Term> = coeffs.iter().zip(vectors).map(|(c, e)| Term::mul(c, &e[k])).collect();
            Term::sum(&parts)
        })
        .collect()
}

/// `∀λ1 λ2 ∀x1 x2 (x1, x2 ∈ V ⇒ λ1 x1 + λ2 x2 ∈ V)`.
pub fn lin(v: &VirtualSet) -> Result<Formula, LangError> {
    let mut fresh = fresh_for(v, &[]);
    let n = v.arity();
    let l1 = fresh.var("l");
    let l2 = fresh.var("l");
    let x1: Vec<Var> = (0..n).map(|_| fresh.var("x")).collect();
    let x2: Vec<Var> = (0..n).map(|_| fresh.var("x")).collect();
    let t1: Vec<Term> = x1.iter().map(Term::var).collect();
    let t2: Vec<Term> = x2.iter().map(Term::var).collect();
    let combo = combination(&[Term::var(&l1), Term::var(&l2)], &[t1.clone(), t2.clone()], n);
    let body = Formula::implies(Formula::and(v.member(&t1)?, v.member(&t2)?), v.member(&combo)?);
    let mut bound = vec![l1, l2];
    bound.extend(x1);
    bound.extend(x2);
    Ok(Formula::forall_many(&bound, body))
}

/// `∀c1…cn (Σ ci ei = 0 ⇒ c1 = … = cn = 0)`.
pub fn lin_ind(e: &[Vec<Term>], v: &VirtualSet) -> Result<Formula, LangError> {
    lin_ind_with(e, v, &mut fresh_for(v, e))
}

/// As [`lin_ind`], drawing bound names from the caller's counter.
pub fn lin_ind_with(e: &[Vec<Term>], v: &VirtualSet, fresh: &mut Fresh) -> Result<Formula, LangError> {
    for ei in e {
        check_len(v, ei)?;
    }
    let cs: Vec<Var> = e.iter().map(|_| fresh.var("c")).collect();
    let ct: Vec<Term> = cs.iter().map(Term::var).collect();
    let combo = combination(&ct, e, v.arity());
    let zeros = vec![Term::zero(); v.arity()];
    let all_zero = Formula::and_all(ct.iter().map(|c| Formula::eq(c, &Term::zero())));
    Ok(Formula::forall_many(&cs, Formula::implies(Formula::eq_all(&combo, &zeros), all_zero)))
}

/// `∀w ∈ V ∃λ1…λn (w = Σ λi ei)`.
pub fn span(e: &[Vec<Term>], v: &VirtualSet) -> Result<Formula, LangError> {
    span_with(e, v, &mut fresh_for(v, e))
}

pub fn span_with(e: &[Vec<Term>], v: &VirtualSet, fresh: &mut Fresh) -> Result<Formula, LangError> {
    for ei in e {
        check_len(v, ei)?;
    }
    let w: Vec<Var> = (0..v.arity()).map(|_| fresh.var("v")).collect();
    let wt: Vec<Term> = w.iter().map(Term::var).collect();
    let ls: Vec<Var> = e.iter().map(|_| fresh.var("l")).collect();
    let lt: Vec<Term> = ls.iter().map(Term::var).collect();
    let combo = combination(&lt, e, v.arity());
    let inner = Formula::exists_many(&ls, Formula::eq_all(&wt, &combo));
    Ok(Formula::forall_many(&w, Formula::implies(v.member(&wt)?, inner)))
}

pub fn basis(e: &[Vec<Term>], v: &VirtualSet) -> Result<Formula, LangError> {
    basis_with(e, v, &mut fresh_for(v, e))
}

pub fn basis_with(e: &[Vec<Term>], v: &VirtualSet, fresh: &mut Fresh) -> Result<Formula, LangError> {
    Ok(Formula::and(lin_ind_with(e, v, fresh)?, span_with(e, v, fresh)?))
}

/// `lin(V) ∧ ∃e1…en ∈ V basis(e1…en, V)`.
pub fn dim(v: &VirtualSet, n: usize) -> Result<Formula, LangError> {
    let mut fresh = fresh_for(v, &[]);
    let evars: Vec<Vec<Var>> = (0..n).map(|_| (0..v.arity()).map(|_| fresh.var("e")).collect()).collect();
    let e: Vec<Vec<Term>> = evars.iter().map(|ev| ev.iter().map(Term::var).collect()).collect();
    let mut conj = Vec::new();
    for ei in &e {
        conj.push(v.member(ei)?);
    }
    conj.push(basis(&e, v)?);
    let flat: Vec<Var> = evars.into_iter().flatten().collect();
    Ok(Formula::and(lin(v)?, Formula::exists_many(&flat, Formula::and_all(conj))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::vset::lefschetz;

    #[test]
    fn lin_of_lefschetz_is_closed() {
        let f = lin(&lefschetz(2)).unwrap();
        assert!(f.free_vars().is_empty());
    }

    #[test]
    fn dim_is_closed() {
        let f = dim(&lefschetz(2), 2).unwrap();
        assert!(f.free_vars().is_empty());
    }

    #[test]
    fn wrong_vector_length() {
        let e = vec![vec![Term::one()]];
        assert!(lin_ind(&e, &lefschetz(2)).is_err());
    }
}
