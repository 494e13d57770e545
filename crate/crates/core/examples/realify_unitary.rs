//! Removes the involution from the u(1) membership formula and counts both
//! versions: over F₉ with conjugation, and over F₃ with z = x + yε.
//!
//!     cargo run --example realify_unitary

use std::error::Error;

use defring::field::FieldOps;
use defring::interp::{count_points, CountMode, EvalOptions, Structure};
use defring::lang::{formula_to_sexpr, realify, Var};
use defring::lie::Family;

pub fn run() -> Result<(), Box<dyn Error>> {
    let u1 = Family::U(1).lie_algebra();
    let eps2 = Var::new("u");
    let real = realify(&u1, &eps2)?;
    println!("u(1):      {}", formula_to_sexpr(u1.body()));
    println!("realified: {}", formula_to_sexpr(real.body()));

    let f9: Structure = "inv:3".parse()?;
    let f3: Structure = "fq:3".parse()?;
    let opts = EvalOptions::guided();
    let over_f9 = count_points(&f9, &u1, &[], CountMode::Exhaustive, &opts)?.count;
    // ε² = −1 in the default modulus x² + 1
    let u = f3.from_i64(-1);
    let over_f3 = count_points(&f3, &real, &[u], CountMode::Exhaustive, &opts)?.count;
    println!("points: {over_f9:?} over F9, {over_f3:?} after realification");
    assert_eq!(over_f9, over_f3);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
