//! The first-order ring language, optionally with an involution.

pub mod desugar;
pub mod formula;
pub mod linear;
pub mod realify;
pub mod sexpr;
pub mod term;
pub mod var;
pub mod vset;

pub use desugar::{desugar, is_core};
pub use formula::{Formula, FormulaStats};
pub use realify::{realify, realify_formula};
pub use sexpr::{
    formula_to_sexpr, parse_formula, parse_object, parse_term, parse_vset, term_to_sexpr, vset_to_sexpr, Object,
    ParseError,
};
pub use term::{Term, TermEvalError, TermKind};
pub use var::{matrix_vars, vector_vars, Fresh, Var};
pub use vset::{lefschetz, set_algebra, SetOp, SetResult, VirtualSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LangError {
    #[error("variable {0} occupies two slots")]
    DuplicateSlot(Var),
    #[error("free variable {0} is not in the signature or parameters")]
    UncoveredVariable(Var),
    #[error("bar used outside the involution language")]
    InvolutionNotEnabled,
    #[error("expected {expected} slots, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("variable {0} collides with a generated name")]
    NameClash(Var),
}
