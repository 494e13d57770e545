//! `Π(X, f, f̃)/res(f, f̃)` against the oracle eigenprojector, over ℚ.
//!
//! Instances are `X = U (C_f ⊕ C_f̃) U⁻¹` with companion blocks of coprime
//! monic `f`, `f̃`, so `P_X = f f̃` by construction.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldOps, Rationals};
use crate::lang::Term;
use crate::oracle::{poly_eval_matrix, poly_gcd, poly_mul, ConcreteMatrix, Ops, Poly};
use crate::poly::{proj_numerator, resultant_term, MonicPoly, TermMatrix};

use super::{rng, Report};

pub const INSTANCES: usize = 50;

type Q = BigRational;

fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Monic of degree `d`, low coefficients first, leading 1 included.
fn random_monic(g: &mut ChaCha8Rng, d: usize) -> Poly<Q> {
    let mut p: Poly<Q> = (0..d).map(|_| int(g.gen_range(-3..=3))).collect();
    p.push(int(1));
    p
}

fn companion(p: &Poly<Q>) -> ConcreteMatrix<Q> {
    let d = p.len() - 1;
    ConcreteMatrix::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -p[i].clone()
        } else if i == j + 1 {
            int(1)
        } else {
            Q::zero()
        }
    })
}

fn invertible(g: &mut ChaCha8Rng, n: usize) -> (ConcreteMatrix<Q>, ConcreteMatrix<Q>) {
    let ops = Ops(&Rationals);
    loop {
        let u = ConcreteMatrix::from_fn(n, n, |_, _| int(g.gen_range(-2..=2)));
        if let Some(ui) = ops.inverse(&u) {
            return (u, ui);
        }
    }
}

fn monic_terms(p: &Poly<Q>) -> MonicPoly {
    MonicPoly::new(p[..p.len() - 1].iter().cloned().map(Term::rational).collect())
}

pub fn run(seed: u64) -> Report {
    let mut r = Report::new("projection", seed);
    let k = Rationals;
    let ops = Ops(&k);
    let mut g = rng(seed, 0);
    let mut by_size = [0u64; 5];
    for i in 0..INSTANCES {
        let n = 1 + i % 4;
        let deg_f = g.gen_range(1..=n);
        let (f, ft) = loop {
            let f = random_monic(&mut g, deg_f);
            let ft = random_monic(&mut g, n - deg_f);
            if poly_gcd(&k, &f, &ft).len() == 1 {
                break (f, ft);
            }
        };
        let block = if ft.len() > 1 { ops.block_diag(&companion(&f), &companion(&ft)) } else { companion(&f) };
        let (u, ui) = invertible(&mut g, n);
        let x = ops.mul(&ops.mul(&u, &block), &ui);
        by_size[n] += 1;

        let px = ops.char_poly(&x).expect("square");
        r.check(px == poly_mul(&k, &f, &ft), || format!("#{i}: P_X ≠ f f̃"));

        let xt = TermMatrix::from_rationals(n, n, |a, b| x.get(a, b).clone());
        let (fm, ftm) = (monic_terms(&f), monic_terms(&ft));
        let numer = match proj_numerator(&xt, &fm, &ftm) {
            Ok(m) => ops.from_terms(&m).expect("constant"),
            Err(e) => {
                r.fail(format!("#{i}: {e}"));
                continue;
            }
        };
        let res = resultant_term(&fm, &ftm.full()).eval(&k, &|_| None).expect("constant");
        if res.is_zero() {
            r.fail(format!("#{i}: res(f, f̃) = 0 for coprime f, f̃"));
            continue;
        }
        let m = ops.scale(&k.inv(&res).unwrap(), &numer);
        let oracle = ops.eigenprojector(&x, &f, &ft).expect("coprime");
        r.check(m == oracle, || format!("#{i}: Π/res differs from the eigenprojector for X = {x:?}"));
        r.check(ops.mul(&m, &m) == m, || format!("#{i}: M² ≠ M"));
        r.check(ops.mul(&m, &x) == ops.mul(&x, &m), || format!("#{i}: MX ≠ XM"));
        let fx = poly_eval_matrix(&k, &f, &x);
        r.check(ops.is_zero(&ops.mul(&fx, &m)), || format!("#{i}: f(X) M ≠ 0"));
        let rank = ops.rank(&m);
        r.check(rank == deg_f, || format!("#{i}: rank M = {rank}, deg f = {deg_f}"));
    }
    r.value("instances_by_size", &by_size[1..]);
    r
}
