use std::fmt;

use num_rational::BigRational;

use super::PolyError;
use crate::lang::{matrix_vars, Formula, Term, Var};

/// A dense row-major matrix of terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TermMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Term>,
}

impl TermMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Term) -> TermMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        TermMatrix { rows, cols, entries }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Term>) -> TermMatrix {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        TermMatrix { rows, cols, entries }
    }

    pub fn from_ints(rows: &[&[i64]]) -> TermMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        TermMatrix::from_fn(r, c, |i, j| Term::int(rows[i][j]))
    }

    pub fn from_rationals(n: usize, m: usize, f: impl Fn(usize, usize) -> BigRational) -> TermMatrix {
        TermMatrix::from_fn(n, m, |i, j| Term::rational(f(i, j)))
    }

    /// The matrix of variables `name[i,j]`.
    pub fn vars(name: &str, n: usize) -> TermMatrix {
        let entries = matrix_vars(name, n, n).iter().map(Term::var).collect();
        TermMatrix::from_entries(n, n, entries)
    }

    pub fn zero(rows: usize, cols: usize) -> TermMatrix {
        TermMatrix::from_fn(rows, cols, |_, _| Term::zero())
    }

    pub fn identity(n: usize) -> TermMatrix {
        TermMatrix::from_fn(n, n, |i, j| if i == j { Term::one() } else { Term::zero() })
    }

    pub fn scalar(n: usize, t: &Term) -> TermMatrix {
        TermMatrix::from_fn(n, n, |i, j| if i == j { t.clone() } else { Term::zero() })
    }

    pub fn diag(d: &[Term]) -> TermMatrix {
        TermMatrix::from_fn(d.len(), d.len(), |i, j| if i == j { d[i].clone() } else { Term::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn require_square(&self) -> Result<usize, PolyError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(PolyError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &Term {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, t: Term) {
        self.entries[i * self.cols + j] = t;
    }

    pub fn entries(&self) -> &[Term] {
        &self.entries
    }

    /// True when every entry is a literal.
    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(Term::is_literal)
    }

    /// Variables in entries, in first-occurrence order.
    pub fn vars_used(&self) -> Vec<Var> {
        let mut out: Vec<Var> = Vec::new();
        for t in &self.entries {
            for v in t.vars() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(&Term) -> Term) -> TermMatrix {
        TermMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> TermMatrix {
        TermMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn bar(&self) -> TermMatrix {
        self.map(Term::bar)
    }

    pub fn add(&self, other: &TermMatrix) -> TermMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        TermMatrix::from_fn(self.rows, self.cols, |i, j| Term::add(self.get(i, j), other.get(i, j)))
    }

    pub fn sub(&self, other: &TermMatrix) -> TermMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        TermMatrix::from_fn(self.rows, self.cols, |i, j| Term::sub(self.get(i, j), other.get(i, j)))
    }

    pub fn scale(&self, t: &Term) -> TermMatrix {
        self.map(|e| Term::mul(t, e))
    }

    pub fn neg(&self) -> TermMatrix {
        self.map(Term::neg)
    }

    pub fn mul(&self, other: &TermMatrix) -> TermMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        TermMatrix::from_fn(self.rows, other.cols, |i, j| {
            let parts: Vec<Term> = (0..self.cols)
                .map(|k| Term::mul(self.get(i, k), other.get(k, j)))
                .collect();
            Term::sum(&parts)
        })
    }

    pub fn trace(&self) -> Term {
        let d: Vec<Term> = (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect();
        Term::sum(&d)
    }

    /// Drops one row and one column.
    pub fn minor(&self, row: usize, col: usize) -> TermMatrix {
        TermMatrix::from_fn(self.rows - 1, self.cols - 1, |i, j| {
            let ii = if i < row { i } else { i + 1 };
            let jj = if j < col { j } else { j + 1 };
            self.get(ii, jj).clone()
        })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> TermMatrix {
        TermMatrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// `A ⊕ B`.
    pub fn block_diag(&self, other: &TermMatrix) -> TermMatrix {
        TermMatrix::from_fn(self.rows + other.rows, self.cols + other.cols, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols).clone()
            } else {
                Term::zero()
            }
        })
    }

    /// Entrywise `self = other`.
    pub fn eq_formula(&self, other: &TermMatrix) -> Formula {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in eq");
        Formula::eq_all(&self.entries, &other.entries)
    }

    pub fn is_zero_formula(&self) -> Formula {
        let z = vec![Term::zero(); self.entries.len()];
        Formula::eq_all(&self.entries, &z)
    }
}

impl fmt::Debug for TermMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_times_m() {
        let m = TermMatrix::vars("x", 2);
        assert_eq!(TermMatrix::identity(2).mul(&m), m);
    }

    #[test]
    fn minor_shape() {
        let m = TermMatrix::from_ints(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(m.minor(1, 1), TermMatrix::from_ints(&[&[1, 3], &[7, 9]]));
    }
}
