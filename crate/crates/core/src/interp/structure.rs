//! Finite fields given by operation tables.
//!
//! An element of `F_{p^k}` is stored as the integer `c_0 + c_1 p + … + c_{k-1} p^{k-1}`
//! where `c_0 + c_1 x + …` is its residue modulo the defining polynomial.
//! The prime subfield therefore occupies `0..p` in its usual order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::field::{mod_small, FieldOps};

/// Largest domain for which tables are built.
pub const MAX_DOMAIN: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("malformed structure spec `{0}`")]
    Malformed(String),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("even characteristic is not supported")]
    EvenCharacteristic,
    #[error("modulus `{0}` is reducible or has the wrong degree")]
    BadModulus(String),
    #[error("domain of size {0} exceeds the table limit")]
    TooLarge(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureKind {
    /// `F_p`.
    Prime,
    /// `F_{p^k}`, `k > 1`.
    Extension,
    /// `F_{q^2}` with `x ↦ x^q`.
    Involutive { q: u32 },
}

#[derive(Clone)]
pub struct Structure {
    kind: StructureKind,
    p: u32,
    degree: u32,
    size: u32,
    /// Monic, low coefficient first; absent for prime fields.
    modulus: Option<Vec<u32>>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    bar: Option<Vec<u32>>,
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Structure({})", self.spec())
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

fn prime_power(n: u32) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let (mut m, mut k) = (n, 0);
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

impl Structure {
    /// `F_p` for an odd prime `p`.
    pub fn prime(p: u32) -> Result<Structure, StructureError> {
        Structure::field(p, None)
    }

    /// `F_q` with a searched modulus when `q` is not prime.
    pub fn field(q: u32, modulus: Option<Vec<u32>>) -> Result<Structure, StructureError> {
        let (p, k) = prime_power(q).ok_or(StructureError::NotPrimePower(q))?;
        if p == 2 {
            return Err(StructureError::EvenCharacteristic);
        }
        Structure::build(p, k, modulus, None)
    }

    /// `F_{q^2}` with the involution `x ↦ x^q`.
    pub fn involutive(q: u32, modulus: Option<Vec<u32>>) -> Result<Structure, StructureError> {
        let (p, k) = prime_power(q).ok_or(StructureError::NotPrimePower(q))?;
        if p == 2 {
            return Err(StructureError::EvenCharacteristic);
        }
        Structure::build(p, 2 * k, modulus, Some(q))
    }

    /// `F_{2^k}` without the odd-characteristic guard. Formulas with
    /// denominator 2 fail to compile here; everything else evaluates.
    pub fn even_characteristic(k: u32) -> Result<Structure, StructureError> {
        Structure::build(2, k, None, None)
    }

    fn build(p: u32, k: u32, modulus: Option<Vec<u32>>, inv_q: Option<u32>) -> Result<Structure, StructureError> {
        let size = (p as u64).pow(k);
        if size > MAX_DOMAIN as u64 {
            return Err(StructureError::TooLarge(size));
        }
        let size = size as u32;
        let modulus = if k == 1 {
            None
        } else {
            match modulus {
                Some(m) => {
                    let m: Vec<u32> = m.into_iter().map(|c| c % p).collect();
                    if m.len() != k as usize + 1 || m[k as usize] != 1 {
                        return Err(StructureError::BadModulus(poly_string(&m)));
                    }
                    if !is_field(p, &m) {
                        return Err(StructureError::BadModulus(poly_string(&m)));
                    }
                    Some(m)
                }
                None => Some(search_modulus(p, k)),
            }
        };
        let n = size as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..size {
            let ca = digits(a, p, k);
            for b in 0..size {
                let cb = digits(b, p, k);
                let s: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * n + b as usize] = undigits(&s, p);
                mul[a as usize * n + b as usize] = match &modulus {
                    None => (a * b) % p,
                    Some(m) => undigits(&poly_mulmod(&ca, &cb, m, p), p),
                };
            }
        }
        let neg = (0..size)
            .map(|a| (0..size).find(|&b| add[a as usize * n + b as usize] == 0).unwrap())
            .collect();
        let inv = (0..size)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..size).find(|&b| mul[a as usize * n + b as usize] == 1).unwrap()
                }
            })
            .collect();
        let kind = match (k, inv_q) {
            (_, Some(q)) => StructureKind::Involutive { q },
            (1, None) => StructureKind::Prime,
            _ => StructureKind::Extension,
        };
        let mut s = Structure {
            kind,
            p,
            degree: k,
            size,
            modulus,
            add,
            mul,
            neg,
            inv,
            bar: None,
        };
        if let Some(q) = inv_q {
            let bar = (0..size).map(|a| s.pow(&a, q as u64)).collect();
            s.bar = Some(bar);
        }
        Ok(s)
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn has_involution(&self) -> bool {
        self.bar.is_some()
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.size
    }

    /// Canonical spec string; includes the modulus when there is one.
    pub fn spec(&self) -> String {
        let head = match self.kind {
            StructureKind::Prime => format!("fq:{}", self.p),
            StructureKind::Extension => format!("fq:{}", self.size),
            StructureKind::Involutive { q } => format!("inv:{q}"),
        };
        match &self.modulus {
            Some(m) => format!("{head}:modulus={}", poly_string(m)),
            None => head,
        }
    }

    #[inline]
    pub fn add_e(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.size + b) as usize]
    }

    #[inline]
    pub fn mul_e(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.size + b) as usize]
    }

    #[inline]
    pub fn neg_e(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub_e(&self, a: u32, b: u32) -> u32 {
        self.add_e(a, self.neg_e(b))
    }

    /// Panics if the structure has no involution.
    #[inline]
    pub fn bar_e(&self, a: u32) -> u32 {
        self.bar.as_ref().expect("structure has no involution")[a as usize]
    }

    /// Coordinates over the prime field.
    pub fn coords(&self, a: u32) -> Vec<u32> {
        digits(a, self.p, self.degree)
    }

    pub fn from_coords(&self, c: &[u32]) -> u32 {
        undigits(c, self.p)
    }

    /// The element `x^i` of the coordinate basis.
    pub fn basis_elem(&self, i: u32) -> u32 {
        self.p.pow(i)
    }

    /// Human-readable element: an integer in the prime field, a polynomial in
    /// `x` otherwise.
    pub fn format_elem(&self, a: u32) -> String {
        if self.degree == 1 {
            a.to_string()
        } else {
            poly_string(&self.coords(a))
        }
    }

    /// Inverse of [`Structure::format_elem`]: an integer, or a polynomial in
    /// `x` of degree below the extension degree.
    pub fn parse_elem(&self, s: &str) -> Option<u32> {
        let c = parse_poly(s, self.p)?;
        if c.len() > self.degree as usize {
            return None;
        }
        Some(self.from_coords(&c))
    }
}

impl FieldOps for Structure {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.add_e(*a, *b)
    }
    fn neg(&self, a: &u32) -> u32 {
        self.neg_e(*a)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.mul_e(*a, *b)
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        (*a != 0).then(|| self.inv[*a as usize])
    }
    fn from_int(&self, n: &BigInt) -> u32 {
        mod_small(n, self.p as u64) as u32
    }
    fn bar(&self, a: &u32) -> Option<u32> {
        self.bar.as_ref().map(|t| t[*a as usize])
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
}

impl FromStr for Structure {
    type Err = StructureError;

    /// `fq:N`, `fq:N:modulus=<poly in x>`, `inv:q`, `inv:q:modulus=<poly>`.
    fn from_str(s: &str) -> Result<Structure, StructureError> {
        let bad = || StructureError::Malformed(s.to_string());
        let mut parts = s.trim().splitn(3, ':');
        let head = parts.next().ok_or_else(bad)?;
        let n: u32 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let modulus = match parts.next() {
            None => None,
            Some(m) => {
                let text = m.strip_prefix("modulus=").ok_or_else(bad)?;
                let (p, _) = prime_power(n).ok_or(StructureError::NotPrimePower(n))?;
                Some(parse_poly(text, p).ok_or_else(bad)?)
            }
        };
        match head {
            "fq" => Structure::field(n, modulus),
            "inv" => Structure::involutive(n, modulus),
            _ => Err(bad()),
        }
    }
}

fn digits(mut a: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

fn undigits(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Product of two residues (length `k`) modulo the monic `m` (length `k+1`).
fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let k = m.len() - 1;
    let mut prod = vec![0u32; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for d in (k..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        for (i, &mi) in m.iter().enumerate() {
            let idx = d - k + i;
            prod[idx] = (prod[idx] + (p - c) * mi % p) % p;
        }
    }
    prod.truncate(k);
    prod
}

/// The quotient by `m` is a field iff it has no zero divisors.
fn is_field(p: u32, m: &[u32]) -> bool {
    let k = (m.len() - 1) as u32;
    let size = p.pow(k);
    for a in 1..size {
        let ca = digits(a, p, k);
        for b in a..size {
            if poly_mulmod(&ca, &digits(b, p, k), m, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// First irreducible monic of degree `k`, lower coefficients taken in
/// element order.
fn search_modulus(p: u32, k: u32) -> Vec<u32> {
    (0..p.pow(k))
        .map(|low| {
            let mut m = digits(low, p, k);
            m.push(1);
            m
        })
        .find(|m| m[0] != 0 && is_field(p, m))
        .expect("irreducible polynomials exist in every degree")
}

/// `x^2+2*x+1` style, highest degree first.
pub fn poly_string(c: &[u32]) -> String {
    let mut out = Vec::new();
    for (i, &ci) in c.iter().enumerate().rev() {
        if ci == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        out.push(match (ci, i) {
            (_, 0) => ci.to_string(),
            (1, _) => mono,
            _ => format!("{ci}*{mono}"),
        });
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out.join("+")
    }
}

/// Parses a polynomial in `x` with integer coefficients reduced mod `p`.
pub fn parse_poly(s: &str, p: u32) -> Option<Vec<u32>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let mut coeffs: Vec<i64> = Vec::new();
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (i, ch) in s.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    for t in terms {
        let (sign, body) = match t.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, t.strip_prefix('+').unwrap_or(&t)),
        };
        let (coef, exp) = match body.find('x') {
            None => (body.parse::<i64>().ok()?, 0usize),
            Some(pos) => {
                let c = body[..pos].trim_end_matches('*');
                let c = if c.is_empty() { 1 } else { c.parse::<i64>().ok()? };
                let rest = &body[pos + 1..];
                let e = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')?.parse::<usize>().ok()?
                };
                (c, e)
            }
        };
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, 0);
        }
        coeffs[exp] += sign * coef;
    }
    Some(coeffs.into_iter().map(|c| c.rem_euclid(p as i64) as u32).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_tables() {
        let f: Structure = "fq:3".parse().unwrap();
        assert_eq!(f.elements().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(f.add_e(2, 2), 1);
        assert_eq!(f.mul_e(2, 2), 1);
        assert_eq!(f.neg_e(1), 2);
        assert_eq!(f.spec(), "fq:3");
    }

    #[test]
    fn even_characteristic_rejected() {
        assert_eq!("fq:2".parse::<Structure>().unwrap_err(), StructureError::EvenCharacteristic);
        assert_eq!("inv:4".parse::<Structure>().unwrap_err(), StructureError::EvenCharacteristic);
        assert!(Structure::even_characteristic(1).is_ok());
    }

    #[test]
    fn searched_modulus_for_nine() {
        let f: Structure = "fq:9".parse().unwrap();
        assert_eq!(f.spec(), "fq:9:modulus=x^2+1");
        let x = f.basis_elem(1);
        assert_eq!(f.mul_e(x, x), f.neg_e(1));
    }

    #[test]
    fn reducible_modulus_rejected() {
        let e = "fq:9:modulus=x^2+2".parse::<Structure>().unwrap_err();
        assert!(matches!(e, StructureError::BadModulus(_)));
        assert!("fq:9:modulus=x^2+x+2".parse::<Structure>().is_ok());
    }

    #[test]
    fn every_nonzero_element_invertible() {
        for spec in ["fq:5", "fq:9", "fq:27", "inv:3", "inv:5"] {
            let f: Structure = spec.parse().unwrap();
            for a in 1..f.size() {
                assert_eq!(f.mul_e(a, f.inv(&a).unwrap()), 1, "{spec}");
            }
        }
    }

    #[test]
    fn frobenius_fixes_subfield() {
        for q in [3u32, 5, 9] {
            let f = Structure::involutive(q, None).unwrap();
            let fixed = f.elements().filter(|&a| f.bar_e(a) == a).count();
            assert_eq!(fixed as u32, q);
            for a in f.elements() {
                assert_eq!(f.bar_e(f.bar_e(a)), a);
                for b in f.elements() {
                    assert_eq!(f.bar_e(f.mul_e(a, b)), f.mul_e(f.bar_e(a), f.bar_e(b)));
                }
            }
        }
    }

    #[test]
    fn poly_text_round_trip() {
        assert_eq!(parse_poly("x^2+1", 3), Some(vec![1, 0, 1]));
        assert_eq!(parse_poly("x^2 - x + 2", 3), Some(vec![2, 2, 1]));
        assert_eq!(parse_poly("2*x^3+x", 5), Some(vec![0, 1, 0, 2]));
        assert_eq!(poly_string(&[2, 2, 1]), "x^2+2*x+2");
        assert_eq!(parse_poly("x^", 3), None);
    }

    #[test]
    fn spec_records_modulus() {
        let f: Structure = "inv:3".parse().unwrap();
        let g: Structure = f.spec().parse().unwrap();
        assert_eq!(f.spec(), g.spec());
        assert_eq!(f.size(), 9);
    }
}
