//! Evaluation of formulas and virtual sets over finite fields.

mod compile;
mod count;
mod machine;
pub mod structure;

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lang::{Formula, Var};
use crate::transfer::SignClass;

pub use compile::{Compiled, HintKind, QuantHint};
pub use count::{classify, count_points, enumerate_points, Classifier, CountMode, CountResult};
pub use structure::{Structure, StructureError, StructureKind};

use machine::Machine;

/// Default cap on evaluation steps.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// The evaluation budget, overridable through `DEFRING_BUDGET`.
pub fn default_budget() -> u64 {
    std::env::var("DEFRING_BUDGET")
        .ok()
        .and_then(|s| s.trim().replace('_', "").parse::<f64>().ok())
        .filter(|b| *b >= 1.0)
        .map(|b| b as u64)
        .unwrap_or(DEFAULT_BUDGET)
}

pub type Assignment = BTreeMap<Var, u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Every quantifier enumerates the whole domain.
    Naive,
    /// Quantifier blocks are staged: linear equations are solved, the rest
    /// filters an enumeration.
    Guided,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::Naive => "naive",
            Strategy::Guided => "guided",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub strategy: Strategy,
    /// Cap on atom evaluations plus enumeration steps.
    pub budget: u64,
    /// Cross-check every linear solve against brute force.
    pub validate_hints: bool,
}

impl Default for EvalOptions {
    fn default() -> EvalOptions {
        EvalOptions {
            strategy: Strategy::Guided,
            budget: default_budget(),
            validate_hints: false,
        }
    }
}

impl EvalOptions {
    pub fn naive() -> EvalOptions {
        EvalOptions {
            strategy: Strategy::Naive,
            ..EvalOptions::default()
        }
    }

    pub fn guided() -> EvalOptions {
        EvalOptions::default()
    }

    pub fn with_budget(self, budget: u64) -> EvalOptions {
        EvalOptions { budget, ..self }
    }

    pub fn validating(self) -> EvalOptions {
        EvalOptions {
            validate_hints: true,
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("free variable {0} has no value")]
    Unbound(Var),
    #[error("variable {0} listed twice")]
    DuplicateVariable(Var),
    #[error("constant {0} has a denominator that is not invertible in the structure")]
    Denominator(BigRational),
    #[error("formula uses the involution but the structure has none")]
    NoInvolution,
    #[error("value {value} is outside the domain of size {size}")]
    OutOfDomain { value: u32, size: u32 },
    #[error("expected {expected} values, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("evaluation needs about {needed:.3e} steps, budget is {budget}")]
    BudgetExceeded { needed: f64, budget: u64 },
    #[error("invalid quantifier hint: {0}")]
    InvalidHint(String),
    #[error("point is outside 𝔤 ⊕ 𝔥 (or outside the regular locus)")]
    NotInDomain,
    #[error("partition violation: sets {0:?} hold simultaneously")]
    PartitionViolation(Vec<SignClass>),
    #[error("no sign set holds at a point of the domain")]
    NoSignSet,
}

impl Compiled<'_> {
    fn check_values(&self, values: &[u32]) -> Result<(), EvalError> {
        if values.len() != self.free.len() {
            return Err(EvalError::Arity {
                expected: self.free.len(),
                found: values.len(),
            });
        }
        let size = self.structure.size();
        if let Some(&value) = values.iter().find(|&&v| v >= size) {
            return Err(EvalError::OutOfDomain { value, size });
        }
        Ok(())
    }

    /// Truth value with the free variables set to `values`, in order.
    pub fn eval(&self, values: &[u32], opts: &EvalOptions) -> Result<bool, EvalError> {
        self.check_values(values)?;
        if opts.strategy == Strategy::Naive && self.naive_cost() > opts.budget as f64 {
            return Err(EvalError::BudgetExceeded {
                needed: self.naive_cost(),
                budget: opts.budget,
            });
        }
        let mut m = Machine::new(self, opts);
        m.env[..values.len()].copy_from_slice(values);
        m.eval(self.root)
    }
}

/// Evaluates `f` under an assignment covering its free variables.
pub fn eval_formula(s: &Structure, f: &Formula, a: &Assignment, opts: &EvalOptions) -> Result<bool, EvalError> {
    let free: Vec<Var> = f.free_vars().into_iter().collect();
    let values = free
        .iter()
        .map(|v| a.get(v).copied().ok_or_else(|| EvalError::Unbound(v.clone())))
        .collect::<Result<Vec<u32>, _>>()?;
    Compiled::new(s, f, &free)?.eval(&values, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse_formula, Term};

    fn f3() -> Structure {
        Structure::prime(3).unwrap()
    }

    fn both(s: &Structure, f: &Formula, a: &Assignment) -> bool {
        let n = eval_formula(s, f, a, &EvalOptions::naive()).unwrap();
        let g = eval_formula(s, f, a, &EvalOptions::guided().validating()).unwrap();
        assert_eq!(n, g, "strategies disagree on {f}");
        n
    }

    #[test]
    fn x_plus_one_has_root() {
        let f = parse_formula("(exists x (= (+ x 1) 0))").unwrap();
        assert!(both(&f3(), &f, &Assignment::new()));
    }

    #[test]
    fn two_is_not_a_square_mod_three() {
        let f = parse_formula("(exists x (= (* x x) 2))").unwrap();
        assert!(!both(&f3(), &f, &Assignment::new()));
        assert!(both(&Structure::prime(7).unwrap(), &f, &Assignment::new()));
    }

    #[test]
    fn uncovered_variable() {
        let f = parse_formula("(= x y)").unwrap();
        let mut a = Assignment::new();
        a.insert(Var::new("x"), 1);
        assert_eq!(
            eval_formula(&f3(), &f, &a, &EvalOptions::default()).unwrap_err(),
            EvalError::Unbound(Var::new("y"))
        );
    }

    #[test]
    fn half_needs_odd_characteristic() {
        let f = parse_formula("(= (* 2 x) 1)").unwrap();
        let g = Formula::eq(&Term::var(&Var::new("x")), &Term::ratio(1, 2));
        let mut a = Assignment::new();
        a.insert(Var::new("x"), 2);
        assert!(both(&f3(), &f, &a));
        assert!(both(&f3(), &g, &a));
        let f2 = Structure::even_characteristic(1).unwrap();
        assert!(matches!(
            eval_formula(&f2, &g, &a, &EvalOptions::default()),
            Err(EvalError::Denominator(_))
        ));
    }

    #[test]
    fn shadowed_names_get_separate_slots() {
        let f = parse_formula("(exists x (and (= x 1) (exists x (= x 2))))").unwrap();
        assert!(both(&f3(), &f, &Assignment::new()));
        let g = parse_formula("(forall x (exists y (= (+ x y) 0)))").unwrap();
        assert!(both(&f3(), &g, &Assignment::new()));
    }

    #[test]
    fn naive_budget_is_checked_up_front() {
        let f = parse_formula("(exists a (exists b (exists c (exists d (= (* a b) (* c d))))))").unwrap();
        let opts = EvalOptions::naive().with_budget(10);
        assert!(matches!(
            eval_formula(&f3(), &f, &Assignment::new(), &opts),
            Err(EvalError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn involution_needs_involutive_structure() {
        let f = parse_formula("(exists z (and (not (= z 0)) (= (bar z) (* -1 z))))").unwrap();
        let inv3: Structure = "inv:3".parse().unwrap();
        assert!(both(&inv3, &f, &Assignment::new()));
        assert_eq!(
            eval_formula(&f3(), &f, &Assignment::new(), &EvalOptions::default()).unwrap_err(),
            EvalError::NoInvolution
        );
    }

    #[test]
    fn linear_block_is_solved() {
        let f = parse_formula("(exists a (exists b (and (= (+ a b) x) (= (+ a (* 2 b)) 1))))").unwrap();
        let s = f3();
        let c = Compiled::new(&s, &f, &[Var::new("x")]).unwrap();
        let hints = c.hints();
        assert_eq!(hints.len(), 1);
        assert_eq!(hints[0].kind, HintKind::LinearSolve);
        assert_eq!(hints[0].vars.len(), 2);
        for x in 0..3 {
            assert!(c.eval(&[x], &EvalOptions::guided().validating()).unwrap());
        }
    }
}
