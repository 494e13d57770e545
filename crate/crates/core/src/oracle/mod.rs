//! Concrete exact linear algebra over a field: the ground truth that symbolic
//! constructions are checked against. Nothing here goes through terms.

mod upoly;

use std::fmt;

use thiserror::Error;

use crate::field::FieldOps;
use crate::lie::Family;
use crate::lang::TermEvalError;
use crate::poly::TermMatrix;

pub use upoly::{
    factor_monic, is_irreducible, monic_polys, poly_add, poly_derivative, poly_divrem, poly_eval, poly_eval_matrix,
    poly_ext_gcd, poly_gcd, poly_mul, poly_sub, poly_trim, Poly,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("size {0} is odd")]
    OddSize(usize),
    #[error("the polynomials share a factor")]
    NotCoprime,
    #[error("shapes do not match")]
    Shape,
}

#[derive(Clone, PartialEq)]
pub struct ConcreteMatrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: fmt::Debug> fmt::Debug for ConcreteMatrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[E]> = self.data.chunks(self.cols.max(1)).take(self.rows).collect();
        write!(f, "{rows:?}")
    }
}

impl<E: Clone> ConcreteMatrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ConcreteMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ConcreteMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        ConcreteMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<F>(&self, f: impl Fn(&E) -> F) -> ConcreteMatrix<F> {
        ConcreteMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn require_square(&self) -> Result<usize, OracleError> {
        if self.rows != self.cols {
            return Err(OracleError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rows)
    }

    /// Rows and columns `idx`, in order.
    pub fn principal(&self, idx: &[usize]) -> Self {
        ConcreteMatrix::from_fn(idx.len(), idx.len(), |i, j| self.get(idx[i], idx[j]).clone())
    }
}

/// Matrix arithmetic against a field.
pub struct Ops<'k, K: FieldOps>(pub &'k K);

type M<K> = ConcreteMatrix<<K as FieldOps>::Elem>;

impl<K: FieldOps> Ops<'_, K> {
    pub fn zero(&self, rows: usize, cols: usize) -> M<K> {
        ConcreteMatrix::from_fn(rows, cols, |_, _| self.0.zero())
    }

    pub fn identity(&self, n: usize) -> M<K> {
        ConcreteMatrix::from_fn(n, n, |i, j| if i == j { self.0.one() } else { self.0.zero() })
    }

    pub fn from_ints(&self, rows: &[Vec<i64>]) -> M<K> {
        ConcreteMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| self.0.from_i64(x)).collect()).collect())
    }

    pub fn add(&self, a: &M<K>, b: &M<K>) -> M<K> {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols));
        ConcreteMatrix::from_fn(a.rows, a.cols, |i, j| self.0.add(a.get(i, j), b.get(i, j)))
    }

    pub fn sub(&self, a: &M<K>, b: &M<K>) -> M<K> {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols));
        ConcreteMatrix::from_fn(a.rows, a.cols, |i, j| self.0.sub(a.get(i, j), b.get(i, j)))
    }

    pub fn scale(&self, s: &K::Elem, a: &M<K>) -> M<K> {
        a.map(|x| self.0.mul(s, x))
    }

    pub fn mul(&self, a: &M<K>, b: &M<K>) -> M<K> {
        assert_eq!(a.cols, b.rows);
        ConcreteMatrix::from_fn(a.rows, b.cols, |i, j| {
            (0..a.cols).fold(self.0.zero(), |acc, k| self.0.add(&acc, &self.0.mul(a.get(i, k), b.get(k, j))))
        })
    }

    pub fn pow(&self, a: &M<K>, e: usize) -> M<K> {
        (0..e).fold(self.identity(a.rows), |acc, _| self.mul(&acc, a))
    }

    pub fn bar(&self, a: &M<K>) -> M<K> {
        a.map(|x| self.0.bar(x).expect("field has an involution"))
    }

    pub fn is_zero(&self, a: &M<K>) -> bool {
        a.data.iter().all(|x| self.0.is_zero(x))
    }

    pub fn trace(&self, a: &M<K>) -> K::Elem {
        (0..a.rows.min(a.cols)).fold(self.0.zero(), |acc, i| self.0.add(&acc, a.get(i, i)))
    }

    pub fn block_diag(&self, a: &M<K>, b: &M<K>) -> M<K> {
        let n = a.rows + b.rows;
        let m = a.cols + b.cols;
        ConcreteMatrix::from_fn(n, m, |i, j| {
            if i < a.rows && j < a.cols {
                a.get(i, j).clone()
            } else if i >= a.rows && j >= a.cols {
                b.get(i - a.rows, j - a.cols).clone()
            } else {
                self.0.zero()
            }
        })
    }

    /// Row echelon form in place; returns pivot columns and the determinant
    /// factor accumulated from swaps and scalings.
    fn echelon(&self, m: &mut M<K>) -> (Vec<usize>, K::Elem) {
        let k = self.0;
        let mut det = k.one();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            let Some(r) = (row..m.rows).find(|&r| !k.is_zero(m.get(r, col))) else {
                continue;
            };
            if r != row {
                for c in 0..m.cols {
                    m.data.swap(r * m.cols + c, row * m.cols + c);
                }
                det = k.neg(&det);
            }
            let p = m.get(row, col).clone();
            det = k.mul(&det, &p);
            let pinv = k.inv(&p).expect("pivot is nonzero");
            for c in 0..m.cols {
                let v = k.mul(m.get(row, c), &pinv);
                m.set(row, c, v);
            }
            for r2 in 0..m.rows {
                if r2 != row && !k.is_zero(m.get(r2, col)) {
                    let f = m.get(r2, col).clone();
                    for c in 0..m.cols {
                        let v = k.sub(m.get(r2, c), &k.mul(&f, m.get(row, c)));
                        m.set(r2, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == m.rows {
                break;
            }
        }
        (pivots, det)
    }

    pub fn det(&self, a: &M<K>) -> Result<K::Elem, OracleError> {
        let n = a.require_square()?;
        let mut m = a.clone();
        let (pivots, det) = self.echelon(&mut m);
        Ok(if pivots.len() == n { det } else { self.0.zero() })
    }

    pub fn rank(&self, a: &M<K>) -> usize {
        let mut m = a.clone();
        self.echelon(&mut m).0.len()
    }

    pub fn inverse(&self, a: &M<K>) -> Option<M<K>> {
        let n = a.require_square().ok()?;
        let mut aug = ConcreteMatrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                a.get(i, j).clone()
            } else if j - n == i {
                self.0.one()
            } else {
                self.0.zero()
            }
        });
        let (pivots, _) = self.echelon(&mut aug);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(ConcreteMatrix::from_fn(n, n, |i, j| aug.get(i, n + j).clone()))
    }

    /// Basis of `{v : a v = 0}`.
    pub fn nullspace(&self, a: &M<K>) -> Vec<Vec<K::Elem>> {
        let k = self.0;
        let mut m = a.clone();
        let (pivots, _) = self.echelon(&mut m);
        (0..a.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![k.zero(); a.cols];
                v[free] = k.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = k.neg(m.get(r, free));
                }
                v
            })
            .collect()
    }

    /// Characteristic polynomial `det(λ - a)`, low coefficient first, by
    /// reduction to Hessenberg form.
    pub fn char_poly(&self, a: &M<K>) -> Result<Poly<K::Elem>, OracleError> {
        let n = a.require_square()?;
        let k = self.0;
        let mut h = a.clone();
        // similarity reduction to upper Hessenberg form
        for col in 0..n.saturating_sub(2) {
            let Some(p) = (col + 1..n).find(|&r| !k.is_zero(h.get(r, col))) else {
                continue;
            };
            if p != col + 1 {
                let q = col + 1;
                for c in 0..n {
                    h.data.swap(p * n + c, q * n + c);
                }
                for r in 0..n {
                    h.data.swap(r * n + p, r * n + q);
                }
            }
            let pinv = k.inv(h.get(col + 1, col)).expect("nonzero pivot");
            for r in col + 2..n {
                let f = k.mul(h.get(r, col), &pinv);
                if k.is_zero(&f) {
                    continue;
                }
                for c in 0..n {
                    let v = k.sub(h.get(r, c), &k.mul(&f, h.get(col + 1, c)));
                    h.set(r, c, v);
                }
                for rr in 0..n {
                    let v = k.add(h.get(rr, col + 1), &k.mul(&f, h.get(rr, r)));
                    h.set(rr, col + 1, v);
                }
            }
        }
        // p_0 = 1, p_{m} = (λ - h_mm) p_{m-1} - Σ h_{i,m} (Π sub-diagonal) p_{i-1}
        let mut ps: Vec<Poly<K::Elem>> = vec![vec![k.one()]];
        for m in 0..n {
            let lam_minus = vec![k.neg(h.get(m, m)), k.one()];
            let mut pm = poly_mul(k, &lam_minus, &ps[m]);
            let mut prod = k.one();
            for i in (0..m).rev() {
                prod = k.mul(&prod, h.get(i + 1, i));
                let coef = k.mul(h.get(i, m), &prod);
                let term: Poly<K::Elem> = ps[i].iter().map(|c| k.mul(c, &coef)).collect();
                pm = poly_sub(k, &pm, &term);
            }
            ps.push(pm);
        }
        let mut out = ps.pop().unwrap();
        out.resize(n + 1, k.zero());
        Ok(out)
    }

    /// `gcd(P, P')` is a unit.
    pub fn is_regular(&self, a: &M<K>) -> Result<bool, OracleError> {
        let p = self.char_poly(a)?;
        Ok(poly_gcd(self.0, &p, &poly_derivative(self.0, &p)).len() == 1)
    }

    /// Regularity in the sense of the family: the gcd criterion, plus for
    /// even orthogonal algebras the pattern "0 twice, other roots simple".
    pub fn is_regular_in(&self, fam: Family, a: &M<K>) -> Result<bool, OracleError> {
        if self.is_regular(a)? {
            return Ok(true);
        }
        if !(fam.is_even_orthogonal() && a.rows >= 2) {
            return Ok(false);
        }
        let k = self.0;
        let p = self.char_poly(a)?;
        if !(k.is_zero(&p[0]) && k.is_zero(&p[1])) {
            return Ok(false);
        }
        let f: Poly<K::Elem> = p[2..].to_vec();
        if k.is_zero(&f[0]) {
            return Ok(false);
        }
        Ok(poly_gcd(k, &f, &poly_derivative(k, &f)).len() == 1)
    }

    /// Pfaffian by expansion along the first row.
    pub fn pfaffian(&self, a: &M<K>) -> Result<K::Elem, OracleError> {
        let n = a.require_square()?;
        if n % 2 == 1 {
            return Err(OracleError::OddSize(n));
        }
        let idx: Vec<usize> = (0..n).collect();
        Ok(self.pf_rec(a, &idx))
    }

    fn pf_rec(&self, a: &M<K>, idx: &[usize]) -> K::Elem {
        let k = self.0;
        if idx.is_empty() {
            return k.one();
        }
        let mut acc = k.zero();
        for j in 1..idx.len() {
            let entry = a.get(idx[0], idx[j]);
            if k.is_zero(entry) {
                continue;
            }
            let rest: Vec<usize> = idx[1..].iter().copied().filter(|&x| x != idx[j]).collect();
            let term = k.mul(entry, &self.pf_rec(a, &rest));
            // sign (-1)^(j+1) with 0-based j
            acc = if j % 2 == 1 { k.add(&acc, &term) } else { k.sub(&acc, &term) };
        }
        acc
    }

    /// `ψ(A, B)`: `A` in the middle, the four `b × b` blocks of `B` in the
    /// corners.
    pub fn psi(&self, a: &M<K>, b: &M<K>) -> Result<M<K>, OracleError> {
        let na = a.require_square()?;
        let nb = b.require_square()?;
        if na % 2 == 1 {
            return Err(OracleError::OddSize(na));
        }
        if nb % 2 == 1 {
            return Err(OracleError::OddSize(nb));
        }
        let h = nb / 2;
        let n = na + nb;
        let place = |i: usize| -> (bool, usize) {
            if i < h {
                (true, i)
            } else if i < h + na {
                (false, i - h)
            } else {
                (true, i - na)
            }
        };
        Ok(ConcreteMatrix::from_fn(n, n, |i, j| match (place(i), place(j)) {
            ((false, x), (false, y)) => a.get(x, y).clone(),
            ((true, x), (true, y)) => b.get(x, y).clone(),
            _ => self.0.zero(),
        }))
    }

    /// `J` of a family over this field; `None` when a denominator of `J` is
    /// not invertible.
    pub fn j(&self, fam: Family) -> Option<M<K>> {
        match fam.j_rational() {
            None => Some(self.identity(fam.size())),
            Some(rows) => {
                let mut out = Vec::with_capacity(rows.len());
                for r in rows {
                    let mut row = Vec::with_capacity(r.len());
                    for q in r {
                        row.push(self.0.from_rat(&q)?);
                    }
                    out.push(row);
                }
                Some(ConcreteMatrix::from_rows(out))
            }
        }
    }

    /// `θ(X) = pf(J X)` for an even orthogonal `X`.
    pub fn theta(&self, x: &M<K>) -> Result<K::Elem, OracleError> {
        let n = x.require_square()?;
        let j = self.j(Family::So(n)).expect("odd characteristic");
        self.pfaffian(&self.mul(&j, x))
    }

    /// Basis of `{Y : M Y = Y M}` as matrices.
    pub fn centralizer_basis(&self, m: &M<K>) -> Result<Vec<M<K>>, OracleError> {
        let n = m.require_square()?;
        let k = self.0;
        // (MY - YM)_{ij} = Σ_l m_il y_lj - y_il m_lj; unknown y_ab at a*n + b
        let lin = ConcreteMatrix::from_fn(n * n, n * n, |row, col| {
            let (i, j) = (row / n, row % n);
            let (a, b) = (col / n, col % n);
            let mut v = k.zero();
            if b == j {
                v = k.add(&v, m.get(i, a));
            }
            if a == i {
                v = k.sub(&v, m.get(b, j));
            }
            v
        });
        Ok(self
            .nullspace(&lin)
            .into_iter()
            .map(|v| ConcreteMatrix::from_fn(n, n, |i, j| v[i * n + j].clone()))
            .collect())
    }

    /// Projector onto `ker f(X)` along `ker g(X)`, for `f g = P_X` coprime;
    /// computed as `(v g)(X)` from `u f + v g = 1`.
    pub fn eigenprojector(&self, x: &M<K>, f: &Poly<K::Elem>, g: &Poly<K::Elem>) -> Result<M<K>, OracleError> {
        x.require_square()?;
        let k = self.0;
        let (d, _u, v) = poly_ext_gcd(k, f, g);
        if d.len() != 1 {
            return Err(OracleError::NotCoprime);
        }
        let vg = poly_mul(k, &v, g);
        Ok(poly_eval_matrix(k, &vg, x))
    }

    /// Evaluates a constant term matrix; `None` on a non-invertible
    /// denominator or a free variable.
    pub fn from_terms(&self, t: &TermMatrix) -> Result<M<K>, TermEvalError> {
        let mut data = Vec::with_capacity(t.rows() * t.cols());
        for e in t.entries() {
            data.push(e.eval(self.0, &|_| None)?);
        }
        Ok(ConcreteMatrix {
            rows: t.rows(),
            cols: t.cols(),
            data,
        })
    }

    /// Flat row-major matrices as a point of the sign-set signature.
    pub fn flatten(&self, ms: &[&M<K>]) -> Vec<K::Elem> {
        ms.iter().flat_map(|m| m.data.iter().cloned()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Rationals};
    use crate::interp::Structure;
    use num_rational::BigRational;

    fn q(rows: &[Vec<i64>]) -> ConcreteMatrix<BigRational> {
        Ops(&Rationals).from_ints(rows)
    }

    #[test]
    fn char_poly_examples() {
        let o = Ops(&Rationals);
        let p = o.char_poly(&q(&[vec![1, 0], vec![0, 2]])).unwrap();
        assert_eq!(p, vec![rat(2, 1), rat(-3, 1), rat(1, 1)]);
        assert!(o.is_regular(&q(&[vec![1, 0], vec![0, 2]])).unwrap());
        assert!(!o.is_regular(&q(&[vec![0, 0], vec![0, 0]])).unwrap());
        let j = q(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(o.char_poly(&j).unwrap(), vec![rat(1, 1), rat(-2, 1), rat(1, 1)]);
        assert!(!o.is_regular(&j).unwrap());
    }

    #[test]
    fn char_poly_needs_pivot_search() {
        let o = Ops(&Rationals);
        let a = q(&[vec![0, 0, 1], vec![0, 0, 0], vec![1, 1, 0]]);
        // det(λ - a) = λ^3 - λ
        assert_eq!(o.char_poly(&a).unwrap(), vec![rat(0, 1), rat(-1, 1), rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn pfaffian_small() {
        let o = Ops(&Rationals);
        assert_eq!(o.pfaffian(&q(&[vec![0, 1], vec![-1, 0]])).unwrap(), rat(1, 1));
        let a = q(&[vec![0, 1, 2, 3], vec![-1, 0, 4, 5], vec![-2, -4, 0, 6], vec![-3, -5, -6, 0]]);
        // af - be + cd
        assert_eq!(o.pfaffian(&a).unwrap(), rat(6 - 10 + 12, 1));
        assert_eq!(o.pfaffian(&q(&[vec![0]])), Err(OracleError::OddSize(1)));
    }

    #[test]
    fn centralizer_dimensions() {
        let o = Ops(&Rationals);
        assert_eq!(o.centralizer_basis(&q(&[vec![1, 0], vec![0, 2]])).unwrap().len(), 2);
        assert_eq!(o.centralizer_basis(&q(&[vec![3, 0], vec![0, 3]])).unwrap().len(), 4);
    }

    #[test]
    fn eigenprojector_examples() {
        let o = Ops(&Rationals);
        let x = q(&[vec![1, 0], vec![0, 2]]);
        let f = vec![rat(-1, 1), rat(1, 1)];
        let g = vec![rat(-2, 1), rat(1, 1)];
        assert_eq!(o.eigenprojector(&x, &f, &g).unwrap(), q(&[vec![1, 0], vec![0, 0]]));
        let p = o.char_poly(&x).unwrap();
        assert_eq!(o.eigenprojector(&x, &p, &vec![rat(1, 1)]).unwrap(), o.identity(2));
        assert_eq!(o.eigenprojector(&x, &f, &f), Err(OracleError::NotCoprime));
    }

    #[test]
    fn j_identity_for_psi() {
        let o = Ops(&Rationals);
        for (a, b) in [(1usize, 1usize), (1, 2), (2, 1), (2, 2)] {
            let ja = o.j(Family::So(2 * a)).unwrap();
            let jb = o.j(Family::So(2 * b)).unwrap();
            let sign = if b % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
            let lhs = o.j(Family::So(2 * a + 2 * b)).unwrap();
            assert_eq!(lhs, o.psi(&o.scale(&sign, &ja), &jb).unwrap());
        }
    }

    #[test]
    fn inverse_and_det_over_f5() {
        let f5 = Structure::prime(5).unwrap();
        let o = Ops(&f5);
        let a = o.from_ints(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(o.det(&a).unwrap(), f5.from_i64(-2));
        let inv = o.inverse(&a).unwrap();
        assert_eq!(o.mul(&a, &inv), o.identity(2));
        assert!(o.inverse(&o.from_ints(&[vec![1, 2], vec![2, 4]])).is_none());
    }
}
