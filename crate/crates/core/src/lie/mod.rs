//! The classical Lie algebras as virtual sets, and the sets built over them.

mod triple;

pub use triple::{triple_catalog, TripleCase, TripleSpec};

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::rat;
use crate::lang::{matrix_vars, Formula, LangError, Term, Var, VirtualSet};
use crate::poly::{self, char_poly, pfaffian_term, MonicPoly, TermMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Gl(usize),
    /// `so(n)`, odd or even.
    So(usize),
    /// `sp(n)` with `n = 2r`.
    Sp(usize),
    /// `u(n)`, in the involution language.
    U(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("unknown family `{0}`")]
    Unknown(String),
    #[error("sp needs an even size, got {0}")]
    OddSymplectic(usize),
    #[error("invalid triple: {0}")]
    InvalidTriple(String),
    #[error(transparent)]
    Lang(#[from] LangError),
}

impl Family {
    pub fn new_sp(n: usize) -> Result<Family, LieError> {
        if n % 2 == 1 {
            Err(LieError::OddSymplectic(n))
        } else {
            Ok(Family::Sp(n))
        }
    }

    pub fn size(&self) -> usize {
        match *self {
            Family::Gl(n) | Family::So(n) | Family::Sp(n) | Family::U(n) => n,
        }
    }

    pub fn involution(&self) -> bool {
        matches!(self, Family::U(_))
    }

    pub fn is_even_orthogonal(&self) -> bool {
        matches!(self, Family::So(n) if n % 2 == 0)
    }

    /// The form `J`, exactly; `None` for `gl`.
    pub fn j_rational(&self) -> Option<Vec<Vec<BigRational>>> {
        let n = self.size();
        let sign = |k: usize| if k % 2 == 0 { BigRational::one() } else { -BigRational::one() };
        let half = rat(1, 2);
        let mut j = vec![vec![BigRational::zero(); n]; n];
        match *self {
            Family::Gl(_) => return None,
            Family::So(_) => {
                for i in 1..=n {
                    let k = n + 1 - i;
                    j[i - 1][k - 1] = if i == k {
                        sign(i + 1)
                    } else if i < k {
                        sign(i + 1) * &half
                    } else {
                        sign(k + 1) * &half
                    };
                }
            }
            Family::Sp(_) => {
                for i in 1..=n {
                    j[i - 1][n - i] = sign(i);
                }
            }
            Family::U(_) => {
                for i in 1..=n {
                    j[i - 1][n - i] = sign(i + 1) * BigRational::from_integer(2.into());
                }
            }
        }
        Some(j)
    }

    /// `J` as a constant term matrix; the identity for `gl`.
    pub fn j_matrix(&self) -> TermMatrix {
        match self.j_rational() {
            Some(j) => TermMatrix::from_rationals(j.len(), j.len(), |a, b| j[a][b].clone()),
            None => TermMatrix::identity(self.size()),
        }
    }

    /// `J⁻¹`. Every `J` here has one nonzero entry per row and column.
    pub fn j_inverse(&self) -> TermMatrix {
        let n = self.size();
        match self.j_rational() {
            Some(j) => {
                let mut inv = vec![vec![BigRational::zero(); n]; n];
                for (a, row) in j.iter().enumerate() {
                    for (b, q) in row.iter().enumerate() {
                        if !q.is_zero() {
                            inv[b][a] = q.recip();
                        }
                    }
                }
                TermMatrix::from_rationals(n, n, |a, b| inv[a][b].clone())
            }
            None => TermMatrix::identity(n),
        }
    }

    /// `ᵗX̄ J + J X = 0`, entrywise (the bar only in the unitary case).
    pub fn membership(&self, x: &TermMatrix) -> Formula {
        match self {
            Family::Gl(_) => Formula::and_all(x.entries().iter().map(|t| Formula::eq(t, t))),
            _ => {
                let j = self.j_matrix();
                let xt = if self.involution() { x.bar().transpose() } else { x.transpose() };
                let lhs = xt.mul(&j).add(&j.mul(x));
                let zero = Term::zero();
                Formula::and_all(lhs.entries().iter().map(|t| Formula::eq_reduced(t, &zero)))
            }
        }
    }

    /// `τ(M) = J⁻¹ ᵗM̄ J`.
    pub fn tau(&self, m: &TermMatrix) -> TermMatrix {
        let mt = if self.involution() { m.bar().transpose() } else { m.transpose() };
        self.j_inverse().mul(&mt).mul(&self.j_matrix())
    }

    /// The regular semisimple condition on `x`, assuming membership.
    pub fn regular(&self, x: &TermMatrix) -> Formula {
        let p = char_poly(x).expect("square");
        let distinct = res_nonzero(&p);
        if self.is_even_orthogonal() && self.size() >= 2 {
            // P = λ² f with f separable and f(0) ≠ 0.
            let c = p.coeffs();
            let f = p.shift_down(2);
            let f0 = f.full().coeffs()[0].clone();
            let b = Formula::and_all([
                Formula::eq(&c[0], &Term::zero()),
                Formula::eq(&c[1], &Term::zero()),
                res_nonzero(&f),
                Formula::ne(&f0, &Term::zero()),
            ]);
            Formula::or(distinct, b)
        } else {
            distinct
        }
    }

    pub fn lie_algebra(&self) -> VirtualSet {
        let x = TermMatrix::vars("x", self.size());
        set_over(&x, Vec::new(), self.membership(&x), self.involution())
    }

    pub fn regular_ss(&self) -> VirtualSet {
        let x = TermMatrix::vars("x", self.size());
        let body = Formula::and(self.membership(&x), self.regular(&x));
        set_over(&x, Vec::new(), body, self.involution())
    }

    /// `{Y ∈ 𝔤 : P_X = P_Y (∧ pf(JX) = pf(JY))}` with parameter `X`.
    pub fn stable_orbit(&self) -> VirtualSet {
        let n = self.size();
        let x = TermMatrix::vars("x", n);
        let y = TermMatrix::vars("y", n);
        let px = char_poly(&x).expect("square");
        let py = char_poly(&y).expect("square");
        let mut parts = vec![self.membership(&y), Formula::eq_all(px.coeffs(), py.coeffs())];
        if self.is_even_orthogonal() {
            parts.push(Formula::eq(&self.theta(&x), &self.theta(&y)));
        }
        set_over(&y, matrix_vars("x", n, n), Formula::and_all(parts), self.involution())
    }

    /// `pf(J X)`.
    pub fn theta(&self, x: &TermMatrix) -> Term {
        pfaffian_term(&self.j_matrix().mul(x)).expect("even size")
    }

    /// `C_𝔤(X)` with parameter `X`.
    pub fn centralizer_in(&self) -> VirtualSet {
        let n = self.size();
        let x = TermMatrix::vars("x", n);
        let y = TermMatrix::vars("y", n);
        let body = Formula::and(self.membership(&y), commutes(&x, &y));
        set_over(&y, matrix_vars("x", n, n), body, self.involution())
    }

    /// Short name, e.g. `so:3`.
    pub fn tag(&self) -> String {
        match self {
            Family::Gl(n) => format!("gl:{n}"),
            Family::So(n) => format!("so:{n}"),
            Family::Sp(n) => format!("sp:{n}"),
            Family::U(n) => format!("u:{n}"),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl FromStr for Family {
    type Err = LieError;

    fn from_str(s: &str) -> Result<Family, LieError> {
        let (kind, size) = s.split_once(':').ok_or_else(|| LieError::Unknown(s.to_string()))?;
        let n: usize = size.parse().map_err(|_| LieError::Unknown(s.to_string()))?;
        match kind {
            "gl" => Ok(Family::Gl(n)),
            "so" => Ok(Family::So(n)),
            "sp" => Family::new_sp(n),
            "u" => Ok(Family::U(n)),
            _ => Err(LieError::Unknown(s.to_string())),
        }
    }
}

fn set_over(m: &TermMatrix, params: Vec<Var>, body: Formula, involution: bool) -> VirtualSet {
    let sig: Vec<Var> = m.vars_used();
    // vars_used skips nothing here: every entry is a distinct variable.
    debug_assert_eq!(sig.len(), m.entries().len());
    VirtualSet::with_params(sig, params, body, involution).expect("closed by construction")
}

/// `res(p, p′) ≠ 0`.
pub fn res_nonzero(p: &MonicPoly) -> Formula {
    let d = p.full().derivative();
    Formula::ne(&poly::resultant_term(p, &d), &Term::zero())
}

/// `res(P_X, P_X′) ≠ 0`: regular in `gl(n)`.
pub fn gl_regular(x: &TermMatrix) -> Formula {
    res_nonzero(&char_poly(x).expect("square"))
}

/// `XY − YX = 0`, entrywise.
pub fn commutes(x: &TermMatrix, y: &TermMatrix) -> Formula {
    let c = x.mul(y).sub(&y.mul(x));
    let zero = Term::zero();
    Formula::and_all(c.entries().iter().map(|t| Formula::eq_reduced(t, &zero)))
}

/// `C(X) = {Y ∈ gl(n) : XY − YX = 0}` with parameter `X`.
pub fn centralizer(n: usize) -> VirtualSet {
    let x = TermMatrix::vars("x", n);
    let y = TermMatrix::vars("y", n);
    set_over(&y, matrix_vars("x", n, n), commutes(&x, &y), false)
}

/// `C(X)` for an arbitrary matrix of terms `x` over the signature `y`.
pub fn centralizer_of(x: &TermMatrix, y_name: &str, involution: bool) -> VirtualSet {
    let n = x.rows();
    let y = TermMatrix::vars(y_name, n);
    let params = x.vars_used();
    VirtualSet::with_params(y.vars_used(), params, commutes(x, &y), involution).expect("closed by construction")
}

/// `{P : ∀Y ∈ C(X) (PY ∈ C(X) ∧ PPY = PY)}` with parameter `X`.
pub fn proj_set(n: usize) -> VirtualSet {
    let x = TermMatrix::vars("x", n);
    let p = TermMatrix::vars("p", n);
    let y = TermMatrix::vars("y", n);
    let py = p.mul(&y);
    let body = Formula::forall_many(
        &matrix_vars("y", n, n),
        Formula::implies(
            commutes(&x, &y),
            Formula::and(commutes(&x, &py), p.mul(&py).eq_formula(&py)),
        ),
    );
    set_over(&p, matrix_vars("x", n, n), body, false)
}

/// `P_X′(X)`.
pub fn derivative_at(p: &MonicPoly, x: &TermMatrix) -> TermMatrix {
    poly::eval_at_matrix(&p.full().derivative(), x)
}

/// `λ·p`.
pub fn times_lambda(p: &MonicPoly) -> MonicPoly {
    let mut c = vec![Term::zero()];
    c.extend(p.coeffs().iter().cloned());
    MonicPoly::new(c)
}

/// `p` rescaled to `P(λ/s)·sⁿ`, i.e. the
/// characteristic polynomial of `sX` when `p = P_X`.
pub fn scaled_char_poly(p: &MonicPoly, s: &Term) -> MonicPoly {
    let n = p.degree();
    MonicPoly::new(
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| Term::mul(&Term::pow(s, (n - k) as u32), c))
            .collect(),
    )
}
