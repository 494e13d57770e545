use super::{MonicPoly, PolyError};
use crate::lang::{Formula, Fresh, Term, Var};

/// `f = f1 ⋯ fl` as one equality per non-leading coefficient.
pub fn product_eq(f: &MonicPoly, factors: &[MonicPoly]) -> Result<Formula, PolyError> {
    let total: usize = factors.iter().map(MonicPoly::degree).sum();
    if total != f.degree() {
        return Err(PolyError::DegreeMismatch {
            expected: f.degree(),
            found: total,
        });
    }
    let prod = factors.iter().fold(MonicPoly::one(), |acc, g| acc.mul(g));
    Ok(Formula::eq_all(f.coeffs(), prod.coeffs()))
}

/// How many factors a factorization may have.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parts {
    /// Exactly this many factors, each of degree ≥ 0.
    Exactly(usize),
    /// Any number of factors, each of degree ≥ 1.
    Any,
}

/// Ordered compositions of `n`.
pub fn compositions(n: usize, parts: Parts) -> Vec<Vec<usize>> {
    fn fixed(n: usize, l: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if l == 0 {
            if n == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if l == 1 {
            cur.push(n);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in 0..=n {
            cur.push(first);
            fixed(n - first, l - 1, cur, out);
            cur.pop();
        }
    }
    fn any(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for first in (1..=n).rev() {
            cur.push(first);
            any(n - first, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    match parts {
        Parts::Exactly(l) => fixed(n, l, &mut Vec::new(), &mut out),
        Parts::Any => any(n, &mut Vec::new(), &mut out),
    }
    out
}

/// Fresh monic factors of the given degrees, with their coefficient variables.
pub fn fresh_factors(degrees: &[usize], fresh: &mut Fresh) -> (Vec<MonicPoly>, Vec<Var>) {
    let mut vars = Vec::new();
    let mut factors = Vec::new();
    for &d in degrees {
        let base = fresh.var("g");
        let cs: Vec<Var> = (1..=d).map(|i| Var::indexed(base.name(), &[i as u32])).collect();
        factors.push(MonicPoly::new(cs.iter().map(Term::var).collect()));
        vars.extend(cs);
    }
    (factors, vars)
}

/// `⋁ over compositions ∃ f1 … fl (f = f1 ⋯ fl ∧ body(f1, …, fl))`.
pub fn exists_factorization(
    f: &MonicPoly,
    parts: Parts,
    constraint: impl Fn(&[usize]) -> bool,
    fresh: &mut Fresh,
    mut body: impl FnMut(&[MonicPoly], &mut Fresh) -> Formula,
) -> Formula {
    let mut disjuncts = Vec::new();
    for degrees in compositions(f.degree(), parts) {
        if !constraint(&degrees) {
            continue;
        }
        let (factors, vars) = fresh_factors(&degrees, fresh);
        let prod = product_eq(f, &factors).expect("composition degrees sum to deg f");
        let inner = Formula::and_all([prod, body(&factors, fresh)]);
        disjuncts.push(Formula::exists_many(&vars, inner));
    }
    Formula::or_any(disjuncts)
}

/// `¬∃ f1 f2 (f = f1 f2, deg f1 ≥ 1, deg f2 ≥ 1)`.
pub fn irred(f: &MonicPoly, fresh: &mut Fresh) -> Result<Formula, PolyError> {
    if f.degree() == 0 {
        return Err(PolyError::Invalid("irreducibility of a constant"));
    }
    let split = exists_factorization(
        f,
        Parts::Exactly(2),
        |d| d.iter().all(|&k| k >= 1),
        fresh,
        |_, _| Formula::True,
    );
    Ok(Formula::not(split))
}

/// `a1 = a3 = … = 0`.
pub fn even_poly(f: &MonicPoly) -> Result<Formula, PolyError> {
    if f.degree() % 2 == 1 {
        return Err(PolyError::Invalid("even-poly of odd degree"));
    }
    let zero = Term::zero();
    Ok(Formula::and_all(
        f.coeffs().iter().skip(1).step_by(2).map(|c| Formula::eq(c, &zero)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::formula_to_sexpr;

    #[test]
    fn quadratic_product() {
        let f = MonicPoly::generic("a", 2);
        let b = MonicPoly::generic("b", 1);
        let c = MonicPoly::generic("c", 1);
        let s = formula_to_sexpr(&product_eq(&f, &[b, c]).unwrap());
        assert_eq!(s, "(big-and (= a[1] (* b[1] c[1])) (= a[2] (+ b[1] c[1])))");
    }

    #[test]
    fn empty_product() {
        assert_eq!(product_eq(&MonicPoly::one(), &[]).unwrap(), Formula::True);
        assert!(product_eq(&MonicPoly::generic("a", 1), &[]).is_err());
    }

    #[test]
    fn composition_lists() {
        assert_eq!(compositions(3, Parts::Any), vec![vec![3], vec![2, 1], vec![1, 2], vec![1, 1, 1]]);
        assert_eq!(compositions(0, Parts::Any), vec![Vec::<usize>::new()]);
        let two: Vec<_> = compositions(2, Parts::Exactly(2))
            .into_iter()
            .filter(|d| d.iter().all(|&k| k >= 1))
            .collect();
        assert_eq!(two, vec![vec![1, 1]]);
    }

    #[test]
    fn linear_is_irreducible_syntactically() {
        let mut fresh = Fresh::starting_at(0);
        let f = irred(&MonicPoly::generic("a", 1), &mut fresh).unwrap();
        assert_eq!(f, Formula::not(Formula::False));
        assert!(irred(&MonicPoly::one(), &mut fresh).is_err());
    }

    #[test]
    fn even_poly_degree_two() {
        let f = MonicPoly::generic("a", 2);
        assert_eq!(formula_to_sexpr(&even_poly(&f).unwrap()), "(= a[2] 0)");
        assert!(even_poly(&MonicPoly::generic("a", 3)).is_err());
    }
}
