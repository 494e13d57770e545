//! Named virtual sets.
//!
//! ```text
//! L:n                      affine n-space
//! lie:<fam>:<n>            the Lie algebra            (fam = gl | so | sp | u)
//! rss:<fam>:<n>            its regular semisimple part
//! orbit:<fam>:<n>          stable orbit of a parameter X
//! central:<fam>:<n>        centralizer of X inside the algebra
//! C:n                      centralizer of X inside gl(n)
//! proj:n                   idempotents preserving C(X)
//! sum:<triple>             𝔤 ⊕ 𝔥, also written triple:<triple>
//! pm:<triple>              the ±-set
//! plus: minus: zero:<triple>
//! ```
//!
//! Triples are written `odd-orth:r=1,a=1,b=0`, `unitary:n=2,a=1,b=1`, ...

use thiserror::Error;

use crate::lang::{lefschetz, VirtualSet};
use crate::lie::{centralizer, proj_set, Family, LieError, TripleSpec};
use crate::transfer::{pm_set, sigma_sets, sum_membership, triple_signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("unknown set name `{0}`")]
    Unknown(String),
    #[error("bad size in `{0}`")]
    BadSize(String),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// A resolved name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetName {
    Affine(usize),
    Lie(Family),
    Rss(Family),
    Orbit(Family),
    Central(Family),
    Centralizer(usize),
    Proj(usize),
    Sum(TripleSpec),
    Pm(TripleSpec),
    Plus(TripleSpec),
    Minus(TripleSpec),
    Zero(TripleSpec),
}

impl SetName {
    pub fn parse(name: &str) -> Result<SetName, NameError> {
        let unknown = || NameError::Unknown(name.to_string());
        let (head, rest) = name.split_once(':').ok_or_else(unknown)?;
        let size = || rest.parse::<usize>().map_err(|_| NameError::BadSize(name.to_string()));
        Ok(match head {
            "L" => SetName::Affine(size()?),
            "C" => SetName::Centralizer(size()?),
            "proj" => SetName::Proj(size()?),
            "lie" => SetName::Lie(rest.parse()?),
            "rss" => SetName::Rss(rest.parse()?),
            "orbit" => SetName::Orbit(rest.parse()?),
            "central" => SetName::Central(rest.parse()?),
            "sum" | "triple" => SetName::Sum(rest.parse()?),
            "pm" => SetName::Pm(rest.parse()?),
            "plus" => SetName::Plus(rest.parse()?),
            "minus" => SetName::Minus(rest.parse()?),
            "zero" => SetName::Zero(rest.parse()?),
            _ => return Err(unknown()),
        })
    }

    /// The triple of a sign-partition name.
    pub fn triple(&self) -> Option<TripleSpec> {
        match self {
            SetName::Sum(t) | SetName::Pm(t) | SetName::Plus(t) | SetName::Minus(t) | SetName::Zero(t) => Some(*t),
            _ => None,
        }
    }

    /// Builds the set. `glreg` only affects plus/minus/zero; `None` takes
    /// the triple's default.
    pub fn build(&self, glreg: Option<bool>) -> VirtualSet {
        let sign = |t: &TripleSpec| sigma_sets(t, glreg.unwrap_or(t.default_glreg()));
        match self {
            SetName::Affine(n) => lefschetz(*n),
            SetName::Lie(g) => g.lie_algebra(),
            SetName::Rss(g) => g.regular_ss(),
            SetName::Orbit(g) => g.stable_orbit(),
            SetName::Central(g) => g.centralizer_in(),
            SetName::Centralizer(n) => centralizer(*n),
            SetName::Proj(n) => proj_set(*n),
            SetName::Sum(t) => VirtualSet::with_params(triple_signature(t), Vec::new(), sum_membership(t), t.involution())
                .expect("closed by construction"),
            SetName::Pm(t) => pm_set(t),
            SetName::Plus(t) => sign(t).plus,
            SetName::Minus(t) => sign(t).minus,
            SetName::Zero(t) => sign(t).zero,
        }
    }
}

/// Resolves and builds a name with default options.
pub fn resolve(name: &str) -> Result<VirtualSet, NameError> {
    Ok(SetName::parse(name)?.build(None))
}

/// Every catalog name at its smallest meaningful size. These are the names
/// pinned by the golden files.
pub fn minimal_names() -> Vec<String> {
    let mut out: Vec<String> = ["L:1", "L:2", "C:1", "C:2", "proj:1", "proj:2"].map(String::from).to_vec();
    let fams = ["gl:1", "gl:2", "so:0", "so:2", "so:3", "sp:2", "u:1", "u:2"];
    for kind in ["lie", "rss", "orbit", "central"] {
        for f in fams {
            out.push(format!("{kind}:{f}"));
        }
    }
    let triples = [
        "odd-orth:r=1,a=1,b=0",
        "odd-orth:r=1,a=0,b=1",
        "sympl:r=1,a=1,b=0",
        "even-orth:r=2,a=2,b=0",
        "even-orth:r=2,a=0,b=2",
        "unitary:n=1,a=1,b=0",
        "unitary:n=1,a=0,b=1",
    ];
    for kind in ["sum", "pm", "plus", "minus", "zero"] {
        for t in triples {
            out.push(format!("{kind}:{t}"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::Formula;

    #[test]
    fn names_resolve() {
        assert_eq!(resolve("lie:sp:2").unwrap().arity(), 4);
        assert_eq!(resolve("L:3").unwrap().arity(), 3);
        let so0 = resolve("lie:so:0").unwrap();
        assert_eq!(so0.arity(), 0);
        assert_eq!(so0.body(), &Formula::True);
        assert_eq!(resolve("orbit:so:2").unwrap().params().len(), 4);
        let t = "odd-orth:r=1,a=1,b=0";
        assert_eq!(resolve(&format!("triple:{t}")).unwrap(), resolve(&format!("sum:{t}")).unwrap());
    }

    #[test]
    fn bad_names() {
        assert!(matches!(SetName::parse("nope"), Err(NameError::Unknown(_))));
        assert!(matches!(SetName::parse("L:x"), Err(NameError::BadSize(_))));
        assert!(matches!(SetName::parse("lie:sp:3"), Err(NameError::Lie(_))));
        assert!(SetName::parse("plus:sympl:r=2,a=1,b=1").is_err());
    }

    #[test]
    fn minimal_names_all_parse() {
        for n in minimal_names() {
            SetName::parse(&n).unwrap();
        }
    }
}
