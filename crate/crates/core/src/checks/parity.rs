//! The factor-parity formula against brute-force factorization.

use serde_json::json;

use crate::interp::{Compiled, EvalOptions};
use crate::oracle::{factor_monic, monic_polys, Poly};
use crate::poly::MonicPoly;

use super::guided::{parity_formula, PHIS};
use super::{structure, Report};

fn holds(phi: &str, factor: &Poly<u32>) -> bool {
    match phi {
        "true" => true,
        "false" => false,
        // f(λ) = f(−λ): even degree, odd coefficients zero
        _ => {
            let deg = factor.len() - 1;
            deg % 2 == 0 && factor.iter().skip(1).step_by(2).all(|&c| c == 0)
        }
    }
}

pub fn run(seed: u64) -> Report {
    let mut r = Report::new("parity", seed);
    let s = structure("fq:3");
    let els: Vec<u32> = s.elements().collect();
    let mut evens = 0u64;
    let mut total = 0u64;
    for d in 0..=3 {
        let f = MonicPoly::generic("f", d);
        for phi in PHIS {
            let body = parity_formula(&f, phi);
            let c = match Compiled::new(&s, &body, &f.vars()) {
                Ok(c) => c,
                Err(e) => {
                    r.fail(format!("deg {d} φ = {phi}: {e}"));
                    continue;
                }
            };
            for p in monic_polys(&els, &1, d) {
                let failing = factor_monic(&s, &els, &p).iter().filter(|g| !holds(phi, g)).count();
                let want = failing % 2 == 0;
                total += 1;
                evens += want as u64;
                for opts in [EvalOptions::naive(), EvalOptions::guided()] {
                    match c.eval(&p[..d], &opts) {
                        Ok(got) => r.check(got == want, || {
                            format!("f = {p:?} φ = {phi} ({}): formula {got}, {failing} failing factors", opts.strategy)
                        }),
                        Err(e) => r.fail(format!("f = {p:?} φ = {phi}: {e}")),
                    }
                }
            }
        }
    }
    r.value("polynomials_times_conditions", total);
    r.value("even", evens);
    r.value("summary", json!({ "structure": "fq:3", "max_degree": 3 }));
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_poly_by_hand() {
        // λ² + 1 is even, λ² + λ is not, λ is odd degree
        assert!(holds("even-poly", &vec![1, 0, 1]));
        assert!(!holds("even-poly", &vec![0, 1, 1]));
        assert!(!holds("even-poly", &vec![0, 1]));
    }
}
