//! The sign partition of a triple: the ±-set, and its +1, −1 and 0 parts.

use std::fmt;

use crate::lang::linear::basis_with;
use crate::lang::{matrix_vars, Formula, Fresh, Term, Var, VirtualSet};
use crate::lie::{
    centralizer_of, commutes, derivative_at, gl_regular, scaled_char_poly, times_lambda, Family, TripleCase,
    TripleSpec,
};
use crate::poly::{
    char_poly, even_poly, exists_factorization, fresh_factors, irred, proj_numerator, product_eq, MonicPoly, Parts,
    TermMatrix,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum SignClass {
    Minus,
    Zero,
    Plus,
}

impl SignClass {
    pub fn value(&self) -> i8 {
        match self {
            SignClass::Minus => -1,
            SignClass::Zero => 0,
            SignClass::Plus => 1,
        }
    }
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// True iff an even number of `args` are false.
pub fn even_k(args: Vec<Formula>) -> Formula {
    let mut it = args.into_iter();
    let Some(first) = it.next() else {
        return Formula::True;
    };
    it.fold(first, |acc, b| {
        Formula::or(
            Formula::and(acc.clone(), b.clone()),
            Formula::and(Formula::not(acc), Formula::not(b)),
        )
    })
}

/// `P_{Z,0}`: `P_Z/λ` in the odd orthogonal case, `P_Z` otherwise.
pub fn pz0(case: TripleCase, pz: &MonicPoly) -> MonicPoly {
    if case == TripleCase::OddOrthogonal {
        pz.shift_down(1)
    } else {
        pz.clone()
    }
}

/// A square matrix of fresh variables `base$k[i,j]`.
pub fn fresh_matrix(fresh: &mut Fresh, base: &str, n: usize) -> (TermMatrix, Vec<Var>) {
    let b = fresh.var(base);
    let vars = matrix_vars(b.name(), n, n);
    let m = TermMatrix::from_entries(n, n, vars.iter().map(Term::var).collect());
    (m, vars)
}

/// `∃f̃ ∃X₁ ∈ C(X) (P_X = f f̃ ∧ U ∈ C(X) ∧ Π(X,f,f̃) X₁ τ(X₁) = Π(X,f,f̃) U)`.
pub fn norm_formula(
    g: Family,
    x: &TermMatrix,
    px: &MonicPoly,
    f: &MonicPoly,
    u: &TermMatrix,
    fresh: &mut Fresh,
) -> Formula {
    let n = x.rows();
    if f.degree() > n {
        return Formula::False;
    }
    let (ft, ft_vars) = fresh_factors(&[n - f.degree()], fresh);
    let ft = &ft[0];
    let (x1, x1_vars) = fresh_matrix(fresh, "w", n);
    let pi = proj_numerator(x, f, ft).expect("degrees add up");
    let body = Formula::and_all([
        product_eq(px, &[f.clone(), ft.clone()]).expect("degrees add up"),
        commutes(x, &x1),
        commutes(x, u),
        pi.mul(&x1).mul(&g.tau(&x1)).eq_formula(&pi.mul(u)),
    ]);
    let mut vars = ft_vars;
    vars.extend(x1_vars);
    Formula::exists_many(&vars, body)
}

/// `∃e₁…eₙ ∀x, x′ (basis(e, C(X)) ∧ c ∈ C(X) ∧ trace(τ(Σxᵢeᵢ)(Σx′ⱼeⱼ)c) = ᵗx̄ J x′)`,
/// with the universal block scoped over the last conjunct only and the
/// `eᵢ ∈ C(X)` conditions stated explicitly.
pub fn trace_form_formula(g: Family, x: &TermMatrix, c: &TermMatrix, fresh: &mut Fresh) -> Formula {
    let n = x.rows();
    let mut e_mats = Vec::new();
    let mut e_vars = Vec::new();
    for _ in 0..n {
        let (m, vs) = fresh_matrix(fresh, "e", n);
        e_mats.push(m);
        e_vars.extend(vs);
    }
    let sig = fresh.var("k");
    let cx: VirtualSet = centralizer_of(x, sig.name(), g.involution());
    let e_vecs: Vec<Vec<Term>> = e_mats.iter().map(|m| m.entries().to_vec()).collect();
    let basis = basis_with(&e_vecs, &cx, fresh).expect("vectors match the signature");

    let xs: Vec<Var> = (0..n).map(|_| fresh.var("s")).collect();
    let xps: Vec<Var> = (0..n).map(|_| fresh.var("t")).collect();
    let combo = |coeffs: &[Var]| {
        coeffs
            .iter()
            .zip(&e_mats)
            .fold(TermMatrix::zero(n, n), |acc, (s, e)| acc.add(&e.scale(&Term::var(s))))
    };
    let lhs = g.tau(&combo(&xs)).mul(&combo(&xps)).mul(c).trace();
    let j = g.j_matrix();
    let mut rhs_parts = Vec::new();
    for (i, si) in xs.iter().enumerate() {
        let xi = if g.involution() { Term::bar(&Term::var(si)) } else { Term::var(si) };
        for (k, tk) in xps.iter().enumerate() {
            let q = j.get(i, k);
            if !q.is_zero() {
                rhs_parts.push(Term::mul(q, &Term::mul(&xi, &Term::var(tk))));
            }
        }
    }
    let rhs = Term::sum(&rhs_parts);
    let mut all = xs.clone();
    all.extend(xps);

    let mut conj: Vec<Formula> = e_mats.iter().map(|e| commutes(x, e)).collect();
    conj.push(basis);
    conj.push(commutes(x, c));
    conj.push(Formula::forall_many(&all, Formula::eq(&lhs, &rhs)));
    Formula::exists_many(&e_vars, Formula::and_all(conj))
}

/// Even parity of the number of irreducible factors of `f` failing `phi`.
pub fn even_parity(
    f: &MonicPoly,
    fresh: &mut Fresh,
    phi: &mut dyn FnMut(&MonicPoly, &mut Fresh) -> Formula,
) -> Formula {
    if f.degree() == 0 {
        return Formula::True;
    }
    exists_factorization(f, Parts::Any, |_| true, fresh, |factors, fresh| {
        let mut conj: Vec<Formula> = factors
            .iter()
            .map(|fi| irred(fi, fresh).expect("factors have degree at least 1"))
            .collect();
        let values: Vec<Formula> = factors.iter().map(|fi| phi(fi, fresh)).collect();
        conj.push(even_k(values));
        Formula::and_all(conj)
    })
}

/// `even-poly(f)`, false for odd degree.
fn even_poly_or_false(f: &MonicPoly) -> Formula {
    even_poly(f).unwrap_or(Formula::False)
}

/// The per-factor condition `φ(f, X, c′ [, ε])`.
#[allow(clippy::too_many_arguments)]
pub fn phi_case(
    case: TripleCase,
    g: Family,
    f: &MonicPoly,
    x: &TermMatrix,
    px: &MonicPoly,
    cp: &TermMatrix,
    eps: Option<&Term>,
    fresh: &mut Fresh,
) -> Formula {
    let n = x.rows();
    let u = derivative_at(px, x).mul(cp);
    match case {
        TripleCase::OddOrthogonal | TripleCase::Symplectic => {
            Formula::implies(even_poly_or_false(f), norm_formula(g, x, px, f, &u, fresh))
        }
        TripleCase::EvenOrthogonal => {
            let (xp, xp_vars) = fresh_matrix(fresh, "v", n);
            let inner = Formula::and_all([
                commutes(x, &xp),
                x.mul(&xp).eq_formula(&TermMatrix::identity(n)),
                norm_formula(g, x, px, f, &u.mul(&xp), fresh),
            ]);
            Formula::implies(even_poly_or_false(f), Formula::exists_many(&xp_vars, inner))
        }
        TripleCase::Unitary => {
            let eps = eps.expect("unitary case needs ε");
            let xe = x.scale(eps);
            let pxe = scaled_char_poly(px, eps);
            norm_formula(g, &xe, &pxe, f, &u, fresh)
        }
    }
}

/// The matrices of a triple point: `x`, `y`, `z`.
pub fn triple_matrices(t: &TripleSpec) -> (TermMatrix, TermMatrix, TermMatrix) {
    let (g, h1, h2) = t.families();
    (
        TermMatrix::vars("x", g.size()),
        TermMatrix::vars("y", h1.size()),
        TermMatrix::vars("z", h2.size()),
    )
}

pub fn triple_signature(t: &TripleSpec) -> Vec<Var> {
    let (x, y, z) = triple_matrices(t);
    let mut sig = x.vars_used();
    sig.extend(y.vars_used());
    sig.extend(z.vars_used());
    sig
}

/// Membership in `𝔤 ⊕ 𝔥`.
pub fn sum_membership(t: &TripleSpec) -> Formula {
    let (g, h1, h2) = t.families();
    let (x, y, z) = triple_matrices(t);
    Formula::and_all([g.membership(&x), h1.membership(&y), h2.membership(&z)])
}

/// `θ(X) = (−1)^{ab} θ(Y) θ(Z)` for even orthogonal triples.
pub fn theta_relation(t: &TripleSpec, x: &TermMatrix, y: &TermMatrix, z: &TermMatrix) -> Formula {
    let (g, h1, h2) = t.families();
    let (_, a, b) = t.params();
    let mut rhs = Term::mul(&h1.theta(y), &h2.theta(z));
    if a * b % 2 == 1 {
        rhs = Term::neg(&rhs);
    }
    Formula::eq(&g.theta(x), &rhs)
}

/// Body of the ±-set.
pub fn pm_body(t: &TripleSpec) -> Formula {
    let (g, h1, h2) = t.families();
    let (x, y, z) = triple_matrices(t);
    let px = char_poly(&x).expect("square");
    let py = char_poly(&y).expect("square");
    let pz = char_poly(&z).expect("square");
    let cond = match t.case() {
        TripleCase::Symplectic | TripleCase::Unitary => product_eq(&px, &[py, pz]).expect("degrees add up"),
        TripleCase::OddOrthogonal => product_eq(&times_lambda(&px), &[py, pz]).expect("degrees add up"),
        TripleCase::EvenOrthogonal => Formula::and(
            product_eq(&px, &[py, pz]).expect("degrees add up"),
            theta_relation(t, &x, &y, &z),
        ),
    };
    Formula::and_all([
        g.membership(&x),
        g.regular(&x),
        h1.membership(&y),
        h1.regular(&y),
        h2.membership(&z),
        h2.regular(&z),
        cond,
    ])
}

/// The existential block that cuts the +1-set out of the ±-set.
pub fn plus_block(t: &TripleSpec, fresh: &mut Fresh) -> Formula {
    let (g, _, _) = t.families();
    let (x, _, z) = triple_matrices(t);
    let n = g.size();
    let px = char_poly(&x).expect("square");
    let pz = char_poly(&z).expect("square");
    let (c, c_vars) = fresh_matrix(fresh, "c", n);
    let (cp, cp_vars) = fresh_matrix(fresh, "d", n);
    let chi = Term::int(t.chi());
    let case = t.case();

    let mut conj = vec![
        commutes(&x, &c),
        g.tau(&c).eq_formula(&c.scale(&chi)),
        commutes(&x, &cp),
        c.mul(&cp).eq_formula(&TermMatrix::identity(n)),
        trace_form_formula(g, &x, &c, fresh),
    ];
    if case == TripleCase::Unitary {
        let ev = fresh.var("eps");
        let eps = Term::var(&ev);
        let pze = scaled_char_poly(&pz, &eps);
        let parity = even_parity(&pze, fresh, &mut |f, fresh| {
            phi_case(case, g, f, &x, &px, &cp, Some(&eps), fresh)
        });
        conj.push(Formula::exists(
            &ev,
            Formula::and_all([
                Formula::ne(&eps, &Term::zero()),
                Formula::eq(&Term::bar(&eps), &Term::neg(&eps)),
                parity,
            ]),
        ));
    } else {
        let p0 = pz0(case, &pz);
        conj.push(even_parity(&p0, fresh, &mut |f, fresh| {
            phi_case(case, g, f, &x, &px, &cp, None, fresh)
        }));
    }
    let mut vars = c_vars;
    vars.extend(cp_vars);
    Formula::exists_many(&vars, Formula::and_all(conj))
}

/// The four sets of a triple over the signature `(X, Y, Z)`.
#[derive(Debug, Clone)]
pub struct SigmaSets {
    pub pm: VirtualSet,
    pub plus: VirtualSet,
    pub minus: VirtualSet,
    pub zero: VirtualSet,
    /// Points the partition is taken over: `𝔤 ⊕ 𝔥`, intersected with
    /// `X ∈ gl(n)^reg` when that restriction is on.
    pub domain: VirtualSet,
}

fn over_triple(t: &TripleSpec, body: Formula) -> VirtualSet {
    VirtualSet::with_params(triple_signature(t), Vec::new(), body, t.involution()).expect("closed by construction")
}

pub fn pm_set(t: &TripleSpec) -> VirtualSet {
    over_triple(t, pm_body(t))
}

pub fn plus_set(t: &TripleSpec) -> VirtualSet {
    sigma_sets(t, t.default_glreg()).plus
}

/// plus = pm ∧ G ∧ block, minus = pm ∧ G ∧ ¬block, zero = (𝔤 ⊕ 𝔥) ∧ G ∧ ¬pm,
/// where G is `X ∈ gl(n)^reg` if `glreg` is set and true otherwise.
pub fn sigma_sets(t: &TripleSpec, glreg: bool) -> SigmaSets {
    let (x, _, _) = triple_matrices(t);
    let pm = pm_body(t);
    let guard = if glreg { gl_regular(&x) } else { Formula::True };
    let mut fresh = Fresh::starting_at(0);
    let block = plus_block(t, &mut fresh);
    let member = sum_membership(t);
    SigmaSets {
        pm: over_triple(t, pm.clone()),
        plus: over_triple(t, Formula::and_all([pm.clone(), guard.clone(), block.clone()])),
        minus: over_triple(t, Formula::and_all([pm.clone(), guard.clone(), Formula::not(block)])),
        zero: over_triple(t, Formula::and_all([member.clone(), guard.clone(), Formula::not(pm)])),
        domain: over_triple(t, Formula::and_all([member, guard])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(name: &str) -> Formula {
        let v = Term::var(&Var::new(name));
        Formula::eq(&v, &v)
    }

    #[test]
    fn even_two_matches_definition() {
        let f = even_k(vec![b("p"), b("q")]);
        let expected = Formula::or(
            Formula::and(b("p"), b("q")),
            Formula::and(Formula::not(b("p")), Formula::not(b("q"))),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn even_small_cases() {
        assert_eq!(even_k(vec![]), Formula::True);
        assert_eq!(even_k(vec![b("p")]), b("p"));
    }

    #[test]
    fn pz0_cases() {
        let z1 = TermMatrix::vars("z", 1);
        let p = char_poly(&z1).unwrap();
        assert_eq!(pz0(TripleCase::OddOrthogonal, &p).degree(), 0);
        assert_eq!(pz0(TripleCase::Symplectic, &p), p);
        let empty = char_poly(&TermMatrix::zero(0, 0)).unwrap();
        assert_eq!(pz0(TripleCase::Symplectic, &empty), MonicPoly::one());
    }

    #[test]
    fn parity_of_constant_is_true() {
        let mut fresh = Fresh::starting_at(0);
        assert_eq!(even_parity(&MonicPoly::one(), &mut fresh, &mut |_, _| Formula::False), Formula::True);
    }

    #[test]
    fn norm_with_oversized_factor_is_false() {
        let x = TermMatrix::vars("x", 1);
        let px = char_poly(&x).unwrap();
        let f = MonicPoly::generic("a", 2);
        let mut fresh = Fresh::starting_at(0);
        let u = TermMatrix::identity(1);
        assert_eq!(norm_formula(Family::So(1), &x, &px, &f, &u, &mut fresh), Formula::False);
    }

    #[test]
    fn even_orth_sign_only_for_odd_ab() {
        let rel = |spec: &str| {
            let t: TripleSpec = spec.parse().unwrap();
            let (g, h1, h2) = t.families();
            let (x, y, z) = (TermMatrix::vars("x", g.size()), TermMatrix::vars("y", h1.size()), TermMatrix::vars("z", h2.size()));
            let plain = Term::mul(&h1.theta(&y), &h2.theta(&z));
            (theta_relation(&t, &x, &y, &z), g.theta(&x), plain)
        };
        for spec in ["even-orth:r=2,a=2,b=0", "even-orth:r=4,a=2,b=2", "even-orth:r=5,a=3,b=2"] {
            let (f, lhs, rhs) = rel(spec);
            assert_eq!(f, Formula::eq(&lhs, &rhs), "{spec}");
        }
        let (f, lhs, rhs) = rel("even-orth:r=6,a=3,b=3");
        assert_eq!(f, Formula::eq(&lhs, &Term::neg(&rhs)));
    }

    #[test]
    fn plus_set_is_closed_over_the_triple() {
        for s in ["odd-orth:r=1,a=1,b=0", "sympl:r=1,a=1,b=0", "unitary:n=1,a=1,b=0"] {
            let t: TripleSpec = s.parse().unwrap();
            let sets = sigma_sets(&t, false);
            assert_eq!(sets.plus.arity(), triple_signature(&t).len());
        }
    }
}
