use std::fmt;
use std::str::FromStr;

use super::{Family, LieError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TripleCase {
    OddOrthogonal,
    Symplectic,
    EvenOrthogonal,
    Unitary,
}

impl TripleCase {
    pub fn tag(&self) -> &'static str {
        match self {
            TripleCase::OddOrthogonal => "odd-orth",
            TripleCase::Symplectic => "sympl",
            TripleCase::EvenOrthogonal => "even-orth",
            TripleCase::Unitary => "unitary",
        }
    }

    pub const ALL: [TripleCase; 4] = [
        TripleCase::OddOrthogonal,
        TripleCase::Symplectic,
        TripleCase::EvenOrthogonal,
        TripleCase::Unitary,
    ];
}

/// One endoscopic triple `𝔤 ⊕ 𝔥₁ ⊕ 𝔥₂` with `a + b = r` (or `n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TripleSpec {
    case: TripleCase,
    r: usize,
    a: usize,
    b: usize,
}

impl TripleSpec {
    pub fn new(case: TripleCase, r: usize, a: usize, b: usize) -> Result<TripleSpec, LieError> {
        let bad = |why: &str| Err(LieError::InvalidTriple(format!("{} r={r},a={a},b={b}: {why}", case.tag())));
        if a + b != r {
            return bad("a + b must equal the rank");
        }
        match case {
            TripleCase::Symplectic if b == 1 => return bad("b = 1 is excluded"),
            TripleCase::EvenOrthogonal if a == 1 || b == 1 || r == 1 => return bad("a, b, r must differ from 1"),
            _ => {}
        }
        Ok(TripleSpec { case, r, a, b })
    }

    pub fn case(&self) -> TripleCase {
        self.case
    }

    /// `(r, a, b)`, or `(n, a, b)` in the unitary case.
    pub fn params(&self) -> (usize, usize, usize) {
        (self.r, self.a, self.b)
    }

    /// `(𝔤, 𝔥₁, 𝔥₂)`.
    pub fn families(&self) -> (Family, Family, Family) {
        let (r, a, b) = (self.r, self.a, self.b);
        match self.case {
            TripleCase::OddOrthogonal => (Family::So(2 * r + 1), Family::So(2 * a + 1), Family::So(2 * b + 1)),
            TripleCase::Symplectic => (Family::Sp(2 * r), Family::Sp(2 * a), Family::So(2 * b)),
            TripleCase::EvenOrthogonal => (Family::So(2 * r), Family::So(2 * a), Family::So(2 * b)),
            TripleCase::Unitary => (Family::U(r), Family::U(a), Family::U(b)),
        }
    }

    pub fn involution(&self) -> bool {
        self.case == TripleCase::Unitary
    }

    /// `χ`: −1 for `sp(2r)` and for `u(n)` with `n` even.
    pub fn chi(&self) -> i64 {
        match self.case {
            TripleCase::Symplectic => -1,
            TripleCase::Unitary if self.r % 2 == 0 => -1,
            _ => 1,
        }
    }

    /// Whether classification is restricted to `X` regular in `gl(n)` by default.
    pub fn default_glreg(&self) -> bool {
        self.case == TripleCase::EvenOrthogonal
    }
}

impl fmt::Display for TripleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rank = if self.case == TripleCase::Unitary { "n" } else { "r" };
        write!(f, "{}:{rank}={},a={},b={}", self.case.tag(), self.r, self.a, self.b)
    }
}

impl FromStr for TripleSpec {
    type Err = LieError;

    fn from_str(s: &str) -> Result<TripleSpec, LieError> {
        let bad = || LieError::InvalidTriple(format!("cannot parse `{s}`"));
        let (tag, rest) = s.split_once(':').ok_or_else(bad)?;
        let case = TripleCase::ALL.into_iter().find(|c| c.tag() == tag).ok_or_else(bad)?;
        let rank_key = if case == TripleCase::Unitary { "n" } else { "r" };
        let mut vals = [None; 3];
        for part in rest.split(',') {
            let (k, v) = part.split_once('=').ok_or_else(bad)?;
            let slot = match k.trim() {
                k if k == rank_key => 0,
                "a" => 1,
                "b" => 2,
                _ => return Err(bad()),
            };
            if vals[slot].is_some() {
                return Err(bad());
            }
            vals[slot] = Some(v.trim().parse::<usize>().map_err(|_| bad())?);
        }
        match vals {
            [Some(r), Some(a), Some(b)] => TripleSpec::new(case, r, a, b),
            _ => Err(bad()),
        }
    }
}

/// Every valid triple with rank from 1 to `max_rank`.
pub fn triple_catalog(max_rank: usize) -> Vec<TripleSpec> {
    let mut out = Vec::new();
    for case in TripleCase::ALL {
        for r in 1..=max_rank {
            for a in (0..=r).rev() {
                if let Ok(t) = TripleSpec::new(case, r, a, r - a) {
                    out.push(t);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_orth_rank_one() {
        let t: TripleSpec = "odd-orth:r=1,a=1,b=0".parse().unwrap();
        assert_eq!(t.families(), (Family::So(3), Family::So(3), Family::So(1)));
        assert_eq!(t.to_string(), "odd-orth:r=1,a=1,b=0");
    }

    #[test]
    fn exclusions() {
        assert!(TripleSpec::new(TripleCase::Symplectic, 2, 1, 1).is_err());
        assert!(TripleSpec::new(TripleCase::EvenOrthogonal, 1, 1, 0).is_err());
        assert!(TripleSpec::new(TripleCase::EvenOrthogonal, 3, 2, 1).is_err());
        assert!(TripleSpec::new(TripleCase::OddOrthogonal, 2, 1, 0).is_err());
    }

    #[test]
    fn unitary_two() {
        let t: TripleSpec = "unitary:n=2,a=1,b=1".parse().unwrap();
        assert_eq!(t.families(), (Family::U(2), Family::U(1), Family::U(1)));
        assert_eq!(t.chi(), -1);
    }

    #[test]
    fn chi_table() {
        let chi = |s: &str| s.parse::<TripleSpec>().unwrap().chi();
        assert_eq!(chi("sympl:r=1,a=1,b=0"), -1);
        assert_eq!(chi("odd-orth:r=1,a=0,b=1"), 1);
        assert_eq!(chi("even-orth:r=2,a=2,b=0"), 1);
        assert_eq!(chi("unitary:n=1,a=1,b=0"), 1);
        assert_eq!(chi("unitary:n=2,a=2,b=0"), -1);
    }

    #[test]
    fn catalog_respects_constraints() {
        let cat = triple_catalog(3);
        assert!(cat.iter().all(|t| TripleSpec::new(t.case, t.r, t.a, t.b).is_ok()));
        assert!(!cat.iter().any(|t| t.case == TripleCase::EvenOrthogonal && t.r == 1));
        assert!(cat.contains(&"sympl:r=2,a=0,b=2".parse().unwrap()));
    }
}
