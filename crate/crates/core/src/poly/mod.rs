//! Meta-polynomials in a placeholder λ whose coefficients are terms, and the
//! symbolic matrix constructions built from them.

mod det;
mod factor;
mod matrix;
pub mod sparse;

pub use det::{char_poly, det_term, eval_at_matrix, pfaffian_term, proj_numerator, resultant_term, sylvester};
pub use factor::{compositions, even_poly, exists_factorization, fresh_factors, irred, product_eq, Parts};
pub use matrix::TermMatrix;

use crate::lang::{Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("Pfaffian of odd size {0}")]
    OddSize(usize),
    #[error("{0}")]
    Invalid(&'static str),
}

/// `λ^n + a_{n-1} λ^{n-1} + … + a_0`, stored as `(a_0, …, a_{n-1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonicPoly {
    coeffs: Vec<Term>,
}

impl MonicPoly {
    pub fn new(coeffs: Vec<Term>) -> MonicPoly {
        MonicPoly { coeffs }
    }

    /// The constant polynomial 1.
    pub fn one() -> MonicPoly {
        MonicPoly { coeffs: Vec::new() }
    }

    /// Coefficients `name[1] … name[n]` standing for `a_0 … a_{n-1}`.
    pub fn generic(name: &str, n: usize) -> MonicPoly {
        MonicPoly::new(crate::lang::vector_vars(name, n).iter().map(Term::var).collect())
    }

    pub fn from_ints(coeffs: &[i64]) -> MonicPoly {
        MonicPoly::new(coeffs.iter().map(|&c| Term::int(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Term] {
        &self.coeffs
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out: Vec<Var> = Vec::new();
        for c in &self.coeffs {
            for v in c.vars() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// All `n + 1` coefficients, lowest first, including the leading 1.
    pub fn full(&self) -> Poly {
        let mut c = self.coeffs.clone();
        c.push(Term::one());
        Poly::new(c)
    }

    /// `p(λ)/λ`; the constant coefficient is dropped.
    pub fn shift_down(&self, k: usize) -> MonicPoly {
        MonicPoly::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn mul(&self, other: &MonicPoly) -> MonicPoly {
        let full = self.full().mul(&other.full());
        let mut c = full.coeffs;
        c.pop();
        MonicPoly::new(c)
    }

    /// Coefficientwise bar.
    pub fn bar(&self) -> MonicPoly {
        MonicPoly::new(self.coeffs.iter().map(Term::bar).collect())
    }
}

/// A polynomial with term coefficients, lowest degree first. The nominal
/// degree is `len - 1`; the leading term is not assumed nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Term>,
}

impl Poly {
    pub fn new(coeffs: Vec<Term>) -> Poly {
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| Term::int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Term] {
        &self.coeffs
    }

    /// Nominal degree; `None` for the empty polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::new(Vec::new());
        }
        let mut out = vec![Term::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = Term::add(&out[i + j], &Term::mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Term::zero();
        Poly::new(
            (0..n)
                .map(|i| Term::add(self.coeffs.get(i).unwrap_or(&zero), other.coeffs.get(i).unwrap_or(&zero)))
                .collect(),
        )
    }

    /// Formal derivative in λ.
    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Term::mul(&Term::int(i as i64), c))
                .collect(),
        )
    }
}

impl From<&MonicPoly> for Poly {
    fn from(p: &MonicPoly) -> Poly {
        p.full()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_cubic() {
        let p = MonicPoly::from_ints(&[5, 0, -3]).full();
        assert_eq!(p.derivative(), Poly::from_ints(&[0, -6, 3]));
    }

    #[test]
    fn monic_product() {
        let p = MonicPoly::from_ints(&[-1]).mul(&MonicPoly::from_ints(&[1]));
        assert_eq!(p, MonicPoly::from_ints(&[-1, 0]));
    }

    #[test]
    fn shift_drops_constant() {
        let p = MonicPoly::from_ints(&[0, 4]).shift_down(1);
        assert_eq!(p, MonicPoly::from_ints(&[4]));
    }
}
