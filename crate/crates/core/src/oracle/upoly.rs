//! Univariate polynomials over a field as coefficient vectors, low degree
//! first, with no trailing zeros (the zero polynomial is empty).

use crate::field::FieldOps;

use super::ConcreteMatrix;

pub type Poly<E> = Vec<E>;

pub fn poly_trim<K: FieldOps>(k: &K, mut p: Poly<K::Elem>) -> Poly<K::Elem> {
    while p.last().is_some_and(|c| k.is_zero(c)) {
        p.pop();
    }
    p
}

pub fn poly_add<K: FieldOps>(k: &K, a: &Poly<K::Elem>, b: &Poly<K::Elem>) -> Poly<K::Elem> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => k.add(x, y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => unreachable!(),
        })
        .collect();
    poly_trim(k, out)
}

pub fn poly_sub<K: FieldOps>(k: &K, a: &Poly<K::Elem>, b: &Poly<K::Elem>) -> Poly<K::Elem> {
    let nb: Poly<K::Elem> = b.iter().map(|c| k.neg(c)).collect();
    poly_add(k, a, &nb)
}

pub fn poly_mul<K: FieldOps>(k: &K, a: &Poly<K::Elem>, b: &Poly<K::Elem>) -> Poly<K::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    poly_trim(k, out)
}

pub fn poly_derivative<K: FieldOps>(k: &K, p: &Poly<K::Elem>) -> Poly<K::Elem> {
    let out = p.iter().enumerate().skip(1).map(|(i, c)| k.mul(&k.from_i64(i as i64), c)).collect();
    poly_trim(k, out)
}

/// Quotient and remainder; panics on division by zero.
pub fn poly_divrem<K: FieldOps>(k: &K, a: &Poly<K::Elem>, b: &Poly<K::Elem>) -> (Poly<K::Elem>, Poly<K::Elem>) {
    let b = poly_trim(k, b.clone());
    let lead_inv = k.inv(b.last().expect("division by the zero polynomial")).unwrap();
    let mut r = poly_trim(k, a.clone());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![k.zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = k.mul(r.last().unwrap(), &lead_inv);
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = k.sub(&r[shift + i], &k.mul(&c, bi));
        }
        q[shift] = c;
        r = poly_trim(k, r);
    }
    (poly_trim(k, q), r)
}

fn make_monic<K: FieldOps>(k: &K, p: Poly<K::Elem>) -> (Poly<K::Elem>, K::Elem) {
    match p.last() {
        None => (p, k.one()),
        Some(l) => {
            let inv = k.inv(l).unwrap();
            (p.iter().map(|c| k.mul(c, &inv)).collect(), inv)
        }
    }
}

/// Monic gcd (empty when both inputs are zero).
pub fn poly_gcd<K: FieldOps>(k: &K, a: &Poly<K::Elem>, b: &Poly<K::Elem>) -> Poly<K::Elem> {
    poly_ext_gcd(k, a, b).0
}

/// `(d, u, v)` with `u a + v b = d`, `d` monic.
pub fn poly_ext_gcd<K: FieldOps>(
    k: &K,
    a: &Poly<K::Elem>,
    b: &Poly<K::Elem>,
) -> (Poly<K::Elem>, Poly<K::Elem>, Poly<K::Elem>) {
    let (mut r0, mut r1) = (poly_trim(k, a.clone()), poly_trim(k, b.clone()));
    let (mut u0, mut u1) = (vec![k.one()], Vec::new());
    let (mut v0, mut v1) = (Vec::new(), vec![k.one()]);
    while !r1.is_empty() {
        let (q, r) = poly_divrem(k, &r0, &r1);
        let u2 = poly_sub(k, &u0, &poly_mul(k, &q, &u1));
        let v2 = poly_sub(k, &v0, &poly_mul(k, &q, &v1));
        r0 = std::mem::replace(&mut r1, r);
        u0 = std::mem::replace(&mut u1, u2);
        v0 = std::mem::replace(&mut v1, v2);
    }
    let (d, s) = make_monic(k, r0);
    let scale = |p: Poly<K::Elem>| poly_trim(k, p.iter().map(|c| k.mul(c, &s)).collect());
    (d, scale(u0), scale(v0))
}

pub fn poly_eval<K: FieldOps>(k: &K, p: &Poly<K::Elem>, x: &K::Elem) -> K::Elem {
    p.iter().rev().fold(k.zero(), |acc, c| k.add(&k.mul(&acc, x), c))
}

/// Horner evaluation at a square matrix.
pub fn poly_eval_matrix<K: FieldOps>(
    k: &K,
    p: &Poly<K::Elem>,
    x: &ConcreteMatrix<K::Elem>,
) -> ConcreteMatrix<K::Elem> {
    let ops = super::Ops(k);
    let n = x.rows();
    let mut acc = ops.zero(n, n);
    for c in p.iter().rev() {
        acc = ops.add(&ops.mul(&acc, x), &ops.scale(c, &ops.identity(n)));
    }
    acc
}

/// All monic polynomials of degree `d` over a finite field listed by
/// `elements`, lower coefficients in odometer order.
pub fn monic_polys<E: Clone>(elements: &[E], one: &E, d: usize) -> Vec<Poly<E>> {
    let q = elements.len();
    let total = q.pow(d as u32);
    (0..total)
        .map(|mut idx| {
            let mut p: Vec<E> = (0..d)
                .map(|_| {
                    let e = elements[idx % q].clone();
                    idx /= q;
                    e
                })
                .collect();
            p.push(one.clone());
            p
        })
        .collect()
}

/// Factorization of a monic polynomial into monic irreducibles (with
/// multiplicity, nondecreasing degree) by trial division.
pub fn factor_monic<K: FieldOps>(k: &K, elements: &[K::Elem], f: &Poly<K::Elem>) -> Vec<Poly<K::Elem>> {
    let mut rest = poly_trim(k, f.clone());
    let mut out = Vec::new();
    let mut d = 1;
    while rest.len() > 1 {
        if 2 * d > rest.len() - 1 {
            out.push(rest);
            break;
        }
        let mut found = false;
        for g in monic_polys(elements, &k.one(), d) {
            let (q, r) = poly_divrem(k, &rest, &g);
            if r.is_empty() {
                out.push(g);
                rest = q;
                found = true;
                break;
            }
        }
        if !found {
            d += 1;
        }
    }
    out
}

pub fn is_irreducible<K: FieldOps>(k: &K, elements: &[K::Elem], f: &Poly<K::Elem>) -> bool {
    f.len() > 1 && factor_monic(k, elements, f).len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::Structure;

    #[test]
    fn gcd_and_bezout() {
        let f3 = Structure::prime(3).unwrap();
        // (x-1)(x-2) and (x-1)
        let a = vec![2, 0, 1];
        let b = vec![2, 1];
        let (d, u, v) = poly_ext_gcd(&f3, &a, &b);
        assert_eq!(d, vec![2, 1]);
        let lhs = poly_add(&f3, &poly_mul(&f3, &u, &a), &poly_mul(&f3, &v, &b));
        assert_eq!(lhs, d);
    }

    #[test]
    fn factorization_over_f3() {
        let f3 = Structure::prime(3).unwrap();
        let els: Vec<u32> = f3.elements().collect();
        // x^2 + 1 is irreducible mod 3, x^2 - 1 splits
        assert_eq!(factor_monic(&f3, &els, &vec![1, 0, 1]), vec![vec![1, 0, 1]]);
        assert_eq!(factor_monic(&f3, &els, &vec![2, 0, 1]).len(), 2);
        // x^3 = x·x·x
        assert_eq!(factor_monic(&f3, &els, &vec![0, 0, 0, 1]), vec![vec![0, 1]; 3]);
        assert!(factor_monic(&f3, &els, &vec![1]).is_empty());
        let irreducible_cubics = monic_polys(&els, &1, 3).iter().filter(|p| is_irreducible(&f3, &els, p)).count();
        assert_eq!(irreducible_cubics, 8);
    }
}
