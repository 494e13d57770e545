//! The projector onto ker f(X) along ker f̃(X), built from the resultant
//! identity, at a rational X whose characteristic polynomial is f·f̃.
//!
//!     cargo run --example eigenprojector

use std::error::Error;

use defring::field::{rat, Rationals};
use defring::lang::{Term, Var};
use defring::oracle::Ops;
use defring::poly::{proj_numerator, resultant_term, MonicPoly, TermMatrix};

pub fn run() -> Result<(), Box<dyn Error>> {
    // f = λ − 1, f̃ = λ² + 1, X upper triangular with those factors
    let f = MonicPoly::from_ints(&[-1]);
    let ft = MonicPoly::from_ints(&[1, 0]);
    let x = TermMatrix::from_fn(3, 3, |i, j| {
        let k = [[1, 2, 0], [0, 0, -1], [0, 1, 0]][i][j];
        Term::int(k)
    });
    let num = proj_numerator(&x, &f, &ft)?;
    let res = resultant_term(&f, &ft.full());
    let ops = Ops(&Rationals);
    let none = |_: &Var| None;
    let r = res.eval(&Rationals, &none)?;
    let m = ops.scale(&(rat(1, 1) / &r), &ops.from_terms(&num)?);
    println!("res(f, f̃) = {r}");
    for i in 0..3 {
        let row: Vec<String> = (0..3).map(|j| m.get(i, j).to_string()).collect();
        println!("  [{}]", row.join(", "));
    }
    let xm = ops.from_terms(&x)?;
    assert_eq!(ops.mul(&m, &m), m);
    assert_eq!(ops.mul(&m, &xm), ops.mul(&xm, &m));
    assert_eq!(ops.rank(&m), 1);
    println!("M² = M, MX = XM, rank M = deg f = 1");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
