use std::collections::BTreeMap;

use super::{MonicPoly, Poly, PolyError, TermMatrix};
use crate::lang::Term;

/// Determinant by Laplace expansion over column subsets, row by row.
/// Division-free, so it is valid over any commutative ring.
pub fn det_term(m: &TermMatrix) -> Result<Term, PolyError> {
    let n = m.require_square()?;
    if n == 0 {
        return Ok(Term::one());
    }
    assert!(n < 32, "determinant size {n} is out of range");
    // layer[mask] = det of rows 0..k by the columns in mask.
    let mut layer: BTreeMap<u32, Term> = BTreeMap::new();
    layer.insert(0, Term::one());
    for row in 0..n {
        let mut next: BTreeMap<u32, Term> = BTreeMap::new();
        for (&mask, sub) in &layer {
            if sub.is_zero() {
                continue;
            }
            for col in 0..n {
                if mask & (1 << col) != 0 {
                    continue;
                }
                let entry = m.get(row, col);
                if entry.is_zero() {
                    continue;
                }
                let full = mask | (1 << col);
                // position of `col` among the columns of `full`
                let pos = (full & ((1u32 << col) - 1)).count_ones() as usize;
                let mut term = Term::mul(entry, sub);
                if (row + pos) % 2 == 1 {
                    term = Term::neg(&term);
                }
                let acc = next.entry(full).or_insert_with(Term::zero);
                *acc = Term::add(acc, &term);
            }
        }
        layer = next;
    }
    Ok(layer.remove(&((1u32 << n) - 1)).unwrap_or_else(Term::zero))
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `det(λ·Id − M)` as a monic polynomial.
pub fn char_poly(m: &TermMatrix) -> Result<MonicPoly, PolyError> {
    let n = m.require_square()?;
    if n <= 4 {
        char_poly_minors(m, n)
    } else {
        Ok(char_poly_berkowitz(m, n))
    }
}

fn char_poly_minors(m: &TermMatrix, n: usize) -> Result<MonicPoly, PolyError> {
    let mut coeffs = vec![Term::zero(); n];
    for k in 1..=n {
        let mut parts = Vec::new();
        for s in subsets_of_size(n, k) {
            parts.push(det_term(&m.submatrix(&s, &s))?);
        }
        let e = Term::sum(&parts);
        coeffs[n - k] = if k % 2 == 1 { Term::neg(&e) } else { e };
    }
    Ok(MonicPoly::new(coeffs))
}

fn char_poly_berkowitz(m: &TermMatrix, n: usize) -> MonicPoly {
    // Coefficients highest degree first.
    let mut p: Vec<Term> = vec![Term::one()];
    for k in 1..=n {
        let a = m.get(k - 1, k - 1);
        let lead: Vec<usize> = (0..k - 1).collect();
        let inner = m.submatrix(&lead, &lead);
        let row: Vec<Term> = (0..k - 1).map(|j| m.get(k - 1, j).clone()).collect();
        let mut v: Vec<Term> = (0..k - 1).map(|i| m.get(i, k - 1).clone()).collect();
        let mut col = vec![Term::one(), Term::neg(a)];
        for _ in 2..=k {
            let dot: Vec<Term> = row.iter().zip(&v).map(|(r, s)| Term::mul(r, s)).collect();
            col.push(Term::neg(&Term::sum(&dot)));
            v = (0..k - 1)
                .map(|i| {
                    let parts: Vec<Term> = (0..k - 1).map(|j| Term::mul(inner.get(i, j), &v[j])).collect();
                    Term::sum(&parts)
                })
                .collect();
        }
        let next: Vec<Term> = (0..=k)
            .map(|i| {
                let parts: Vec<Term> = (0..k)
                    .filter(|&j| j <= i)
                    .map(|j| Term::mul(&col[i - j], &p[j]))
                    .collect();
                Term::sum(&parts)
            })
            .collect();
        p = next;
    }
    p.reverse();
    p.pop();
    MonicPoly::new(p)
}

/// Pfaffian as a signed sum over perfect matchings; the matching
/// `(1,2)(3,4)…` has sign +1. Only the upper triangle is read.
pub fn pfaffian_term(m: &TermMatrix) -> Result<Term, PolyError> {
    let n = m.require_square()?;
    if n % 2 == 1 {
        return Err(PolyError::OddSize(n));
    }
    let mut parts = Vec::new();
    let mut pairs = Vec::new();
    let mut used = vec![false; n];
    matchings(m, &mut used, &mut pairs, &mut parts);
    Ok(Term::sum(&parts))
}

fn matchings(m: &TermMatrix, used: &mut [bool], pairs: &mut Vec<(usize, usize)>, out: &mut Vec<Term>) {
    let Some(i) = used.iter().position(|u| !u) else {
        let mut crossings = 0;
        for (x, &(a, b)) in pairs.iter().enumerate() {
            for &(c, d) in &pairs[x + 1..] {
                if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                    crossings += 1;
                }
            }
        }
        let factors: Vec<Term> = pairs.iter().map(|&(a, b)| m.get(a, b).clone()).collect();
        let prod = Term::product(&factors);
        out.push(if crossings % 2 == 1 { Term::neg(&prod) } else { prod });
        return;
    };
    used[i] = true;
    for j in i + 1..used.len() {
        if used[j] || m.get(i, j).is_zero() {
            continue;
        }
        used[j] = true;
        pairs.push((i, j));
        matchings(m, used, pairs, out);
        pairs.pop();
        used[j] = false;
    }
    used[i] = false;
}

/// Sylvester matrix of `f` (nominal degree m) and `g` (nominal degree k):
/// k rows of shifted `f` coefficients, then m rows of `g`, columns in
/// descending powers of λ.
pub fn sylvester(f: &Poly, g: &Poly) -> TermMatrix {
    let m = f.degree().unwrap_or(0);
    let k = g.degree().unwrap_or(0);
    let n = m + k;
    let fc: Vec<Term> = f.coeffs().iter().rev().cloned().collect();
    let gc: Vec<Term> = g.coeffs().iter().rev().cloned().collect();
    TermMatrix::from_fn(n, n, |i, j| {
        let (c, shift) = if i < k { (&fc, i) } else { (&gc, i - k) };
        if j >= shift && j - shift < c.len() {
            c[j - shift].clone()
        } else {
            Term::zero()
        }
    })
}

pub fn resultant_term(f: &MonicPoly, g: &Poly) -> Term {
    det_term(&sylvester(&f.full(), g)).expect("Sylvester matrices are square")
}

/// `p(X)` by Horner's rule.
pub fn eval_at_matrix(p: &Poly, x: &TermMatrix) -> TermMatrix {
    let n = x.rows();
    let mut acc = TermMatrix::zero(n, n);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(x).add(&TermMatrix::scalar(n, c));
    }
    acc
}

/// `Π(X, f, f̃) = (v·f̃)(X)` where `u·f + v·f̃ = res(f, f̃)` comes from the
/// adjugate of the Sylvester system. Dividing by `res(f, f̃)` gives the
/// projector onto `ker f(X)` along `ker f̃(X)`.
pub fn proj_numerator(x: &TermMatrix, f: &MonicPoly, ft: &MonicPoly) -> Result<TermMatrix, PolyError> {
    let n = x.require_square()?;
    let (m, k) = (f.degree(), ft.degree());
    if m + k != n {
        return Err(PolyError::DegreeMismatch {
            expected: n,
            found: m + k,
        });
    }
    if m == 0 {
        return Ok(TermMatrix::zero(n, n));
    }
    let s = sylvester(&f.full(), &ft.full());
    let last = n - 1;
    // v has degree < m; coefficient of λ^{m-1-i} is x_{k+i}.
    let mut v = vec![Term::zero(); m];
    for i in 0..m {
        let r = k + i;
        let mut xi = det_term(&s.minor(r, last))?;
        if (r + last) % 2 == 1 {
            xi = Term::neg(&xi);
        }
        v[m - 1 - i] = xi;
    }
    let w = Poly::new(v).mul(&ft.full());
    Ok(eval_at_matrix(&w, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{Term, Var};
    use crate::poly::sparse::SparsePoly;

    fn v(name: &str) -> Term {
        Term::var(&Var::new(name))
    }

    fn same(a: &Term, b: &Term) -> bool {
        SparsePoly::from_term(a) == SparsePoly::from_term(b)
    }

    #[test]
    fn diag_det() {
        let m = TermMatrix::diag(&[v("a"), v("b")]);
        assert!(same(&det_term(&m).unwrap(), &Term::mul(&v("a"), &v("b"))));
    }

    #[test]
    fn linear_resultant() {
        let f = MonicPoly::new(vec![Term::neg(&v("a"))]);
        let g = MonicPoly::new(vec![Term::neg(&v("b"))]).full();
        assert!(same(&resultant_term(&f, &g), &Term::sub(&v("a"), &v("b"))));
    }

    #[test]
    fn quadratic_resultant() {
        let f = MonicPoly::from_ints(&[-1, 0]);
        let g = Poly::from_ints(&[0, 2]);
        assert!(same(&resultant_term(&f, &g), &Term::int(-4)));
    }

    #[test]
    fn char_poly_generic_2x2() {
        let x = TermMatrix::vars("x", 2);
        let p = char_poly(&x).unwrap();
        let (x11, x12, x21, x22) = (x.get(0, 0), x.get(0, 1), x.get(1, 0), x.get(1, 1));
        assert!(same(&p.coeffs()[1], &Term::neg(&Term::add(x11, x22))));
        let d = Term::sub(&Term::mul(x11, x22), &Term::mul(x12, x21));
        assert!(same(&p.coeffs()[0], &d));
    }

    #[test]
    fn char_poly_diag() {
        let p = char_poly(&TermMatrix::from_ints(&[&[1, 0], &[0, 2]])).unwrap();
        assert!(same(&p.coeffs()[0], &Term::int(2)));
        assert!(same(&p.coeffs()[1], &Term::int(-3)));
    }

    #[test]
    fn berkowitz_matches_minors() {
        for n in 1..=4 {
            let x = TermMatrix::vars("x", n);
            let a = char_poly_minors(&x, n).unwrap();
            let b = char_poly_berkowitz(&x, n);
            for (s, t) in a.coeffs().iter().zip(b.coeffs()) {
                assert!(same(s, t), "size {n}");
            }
        }
    }

    #[test]
    fn pfaffian_small_cases() {
        let a = v("a");
        let m = TermMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => a.clone(),
            (1, 0) => Term::neg(&a),
            _ => Term::zero(),
        });
        assert_eq!(pfaffian_term(&m).unwrap(), a);
        assert_eq!(pfaffian_term(&TermMatrix::zero(0, 0)).unwrap(), Term::one());
        assert!(pfaffian_term(&TermMatrix::zero(3, 3)).is_err());
    }

    #[test]
    fn pfaffian_4x4() {
        let a = TermMatrix::vars("a", 4);
        let pf = pfaffian_term(&a).unwrap();
        let g = |i: usize, j: usize| a.get(i - 1, j - 1).clone();
        let expected = Term::add(
            &Term::sub(&Term::mul(&g(1, 2), &g(3, 4)), &Term::mul(&g(1, 3), &g(2, 4))),
            &Term::mul(&g(1, 4), &g(2, 3)),
        );
        assert!(same(&pf, &expected));
    }

    #[test]
    fn pfaffian_squared_is_det_6x6() {
        let a = TermMatrix::vars("a", 6);
        let skew = TermMatrix::from_fn(6, 6, |i, j| {
            if i < j {
                a.get(i, j).clone()
            } else if i > j {
                Term::neg(a.get(j, i))
            } else {
                Term::zero()
            }
        });
        let pf = pfaffian_term(&skew).unwrap();
        assert!(same(&Term::mul(&pf, &pf), &det_term(&skew).unwrap()));
    }

    #[test]
    fn projector_degenerate_splits() {
        let x = TermMatrix::from_ints(&[&[1, 0], &[0, 2]]);
        let p = char_poly(&x).unwrap();
        let full = proj_numerator(&x, &p, &MonicPoly::one()).unwrap();
        assert_eq!(full, TermMatrix::identity(2));
        let none = proj_numerator(&x, &MonicPoly::one(), &p).unwrap();
        assert_eq!(none, TermMatrix::zero(2, 2));
    }

    #[test]
    fn projector_on_diag_1_2() {
        let x = TermMatrix::from_ints(&[&[1, 0], &[0, 2]]);
        let f = MonicPoly::from_ints(&[-1]);
        let ft = MonicPoly::from_ints(&[-2]);
        let r = resultant_term(&f, &ft.full());
        let pi = proj_numerator(&x, &f, &ft).unwrap();
        // res = 1 - 2 = -1, so Π = -diag(1, 0)
        assert!(same(&r, &Term::int(-1)));
        assert!(same(pi.get(0, 0), &Term::int(-1)));
        assert!(same(pi.get(1, 1), &Term::zero()));
        assert!(same(pi.get(0, 1), &Term::zero()));
    }
}
