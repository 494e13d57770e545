//! The Pfaffian of a generic 4×4 skew matrix, and pf² = det at a random
//! rational point.
//!
//!     cargo run --example pfaffian

use std::collections::BTreeMap;
use std::error::Error;

use defring::field::{rat, Rationals};
use defring::lang::{term_to_sexpr, Term, Var};
use defring::poly::{det_term, pfaffian_term, TermMatrix};

pub fn run() -> Result<(), Box<dyn Error>> {
    let n = 4;
    let a = TermMatrix::from_fn(n, n, |i, j| {
        let v = Term::var(&Var::indexed("a", &[i.min(j) as u32 + 1, i.max(j) as u32 + 1]));
        match i.cmp(&j) {
            std::cmp::Ordering::Less => v,
            std::cmp::Ordering::Equal => Term::zero(),
            std::cmp::Ordering::Greater => Term::neg(&v),
        }
    });
    let pf = pfaffian_term(&a)?;
    println!("pf = {}", term_to_sexpr(&pf));

    let values: BTreeMap<Var, _> = pf
        .vars()
        .into_iter()
        .zip([3, -1, 2, 5, 7, -4])
        .map(|(v, k)| (v, rat(k, 1 + k.unsigned_abs() as i64 % 3)))
        .collect();
    let env = |v: &Var| values.get(v).cloned();
    let p = pf.eval(&Rationals, &env)?;
    let d = det_term(&a)?.eval(&Rationals, &env)?;
    let at: Vec<String> = values.iter().map(|(v, r)| format!("{v} = {r}")).collect();
    println!("at {}\n  pf = {p}, pf² = {}, det = {d}", at.join(", "), &p * &p);
    assert_eq!(&p * &p, d);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
