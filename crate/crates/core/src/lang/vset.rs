use std::collections::{BTreeSet, HashMap};

use super::formula::Formula;
use super::term::Term;
use super::var::Var;
use super::LangError;

/// A formula read as a set comprehension `{ signature : body }`, possibly
/// depending on parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct VirtualSet {
    signature: Vec<Var>,
    params: Vec<Var>,
    body: Formula,
    involution: bool,
}

impl VirtualSet {
    pub fn new(signature: Vec<Var>, body: Formula) -> Result<VirtualSet, LangError> {
        let involution = body.contains_bar();
        VirtualSet::with_params(signature, Vec::new(), body, involution)
    }

    /// Checks that the body's free variables are covered and that `bar`
    /// only appears when the involution language is selected.
    pub fn with_params(
        signature: Vec<Var>,
        params: Vec<Var>,
        body: Formula,
        involution: bool,
    ) -> Result<VirtualSet, LangError> {
        let mut slots = BTreeSet::new();
        for v in signature.iter().chain(&params) {
            if !slots.insert(v.clone()) {
                return Err(LangError::DuplicateSlot(v.clone()));
            }
        }
        if let Some(v) = body.free_vars().into_iter().find(|v| !slots.contains(v)) {
            return Err(LangError::UncoveredVariable(v));
        }
        if !involution && body.contains_bar() {
            return Err(LangError::InvolutionNotEnabled);
        }
        Ok(VirtualSet {
            signature,
            params,
            body,
            involution,
        })
    }

    pub fn signature(&self) -> &[Var] {
        &self.signature
    }

    pub fn params(&self) -> &[Var] {
        &self.params
    }

    pub fn body(&self) -> &Formula {
        &self.body
    }

    pub fn involution(&self) -> bool {
        self.involution
    }

    pub fn arity(&self) -> usize {
        self.signature.len()
    }

    /// The formula `point ∈ self`, i.e. the body with the signature replaced.
    pub fn member(&self, point: &[Term]) -> Result<Formula, LangError> {
        if point.len() != self.signature.len() {
            return Err(LangError::ArityMismatch {
                expected: self.signature.len(),
                found: point.len(),
            });
        }
        let map: HashMap<Var, Term> = self
            .signature
            .iter()
            .cloned()
            .zip(point.iter().cloned())
            .collect();
        Ok(self.body.substitute(&map))
    }

    /// Fixes the parameters to the given terms.
    pub fn instantiate(&self, values: &[Term]) -> Result<VirtualSet, LangError> {
        if values.len() != self.params.len() {
            return Err(LangError::ArityMismatch {
                expected: self.params.len(),
                found: values.len(),
            });
        }
        let map: HashMap<Var, Term> = self.params.iter().cloned().zip(values.iter().cloned()).collect();
        let body = self.body.substitute(&map);
        let mut params: Vec<Var> = Vec::new();
        for t in values {
            for v in t.vars() {
                if !params.contains(&v) && !self.signature.contains(&v) {
                    params.push(v);
                }
            }
        }
        VirtualSet::with_params(self.signature.clone(), params, body, self.involution)
    }

    /// The same set over a different signature, renaming capture-free.
    pub fn with_signature(&self, signature: &[Var]) -> Result<VirtualSet, LangError> {
        let point: Vec<Term> = signature.iter().map(Term::var).collect();
        let body = self.member(&point)?;
        VirtualSet::with_params(signature.to_vec(), self.params.clone(), body, self.involution)
    }
}

/// `x_1 = x_1 ∧ … ∧ x_n = x_n`: the standard linear space of dimension n.
pub fn lefschetz(n: usize) -> VirtualSet {
    let vars = super::var::vector_vars("x", n);
    let body = Formula::and_all(vars.iter().map(|v| Formula::eq(&Term::var(v), &Term::var(v))));
    VirtualSet::new(vars, body).expect("closed by construction")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Subset,
    Intersect,
    Union,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SetResult {
    Formula(Formula),
    Set(VirtualSet),
}

/// Subset, intersection and union, identifying signatures positionally.
pub fn set_algebra(op: SetOp, a: &VirtualSet, b: &VirtualSet) -> Result<SetResult, LangError> {
    if a.arity() != b.arity() {
        return Err(LangError::ArityMismatch {
            expected: a.arity(),
            found: b.arity(),
        });
    }
    let point: Vec<Term> = a.signature.iter().map(Term::var).collect();
    let phi = a.body.clone();
    let psi = b.member(&point)?;
    let mut params = a.params.clone();
    for p in &b.params {
        if !params.contains(p) {
            params.push(p.clone());
        }
    }
    let involution = a.involution || b.involution;
    Ok(match op {
        SetOp::Subset => SetResult::Formula(Formula::forall_many(&a.signature, Formula::implies(phi, psi))),
        SetOp::Intersect => SetResult::Set(VirtualSet::with_params(
            a.signature.clone(),
            params,
            Formula::and(phi, psi),
            involution,
        )?),
        SetOp::Union => SetResult::Set(VirtualSet::with_params(
            a.signature.clone(),
            params,
            Formula::or(phi, psi),
            involution,
        )?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lefschetz_free_vars() {
        let l = lefschetz(3);
        assert_eq!(l.body().free_vars().len(), 3);
        assert_eq!(l.arity(), 3);
    }

    #[test]
    fn intersect_conjoins_bodies() {
        let x = Var::new("x");
        let y = Var::new("y");
        let a = VirtualSet::new(vec![x.clone()], Formula::eq(&Term::var(&x), &Term::zero())).unwrap();
        let b = VirtualSet::new(vec![y.clone()], Formula::eq(&Term::var(&y), &Term::one())).unwrap();
        let SetResult::Set(c) = set_algebra(SetOp::Intersect, &a, &b).unwrap() else {
            panic!()
        };
        assert_eq!(
            c.body(),
            &Formula::and(
                Formula::eq(&Term::var(&x), &Term::zero()),
                Formula::eq(&Term::var(&x), &Term::one())
            )
        );
    }

    #[test]
    fn arity_mismatch_is_rejected() {
        let err = set_algebra(SetOp::Union, &lefschetz(1), &lefschetz(2)).unwrap_err();
        assert!(matches!(err, LangError::ArityMismatch { .. }));
    }

    #[test]
    fn bar_requires_involution_flag() {
        let x = Var::new("x");
        let body = Formula::eq(&Term::bar(&Term::var(&x)), &Term::var(&x));
        assert!(VirtualSet::with_params(vec![x.clone()], vec![], body.clone(), false).is_err());
        assert!(VirtualSet::new(vec![x], body).unwrap().involution());
    }
}
