//! "An even number of irreducible factors of f fail φ", evaluated for every
//! monic quadratic over F₃ with φ = "the factor is even".
//!
//!     cargo run --example even_parity

use std::error::Error;

use defring::interp::{Compiled, EvalOptions, Structure};
use defring::lang::Fresh;
use defring::poly::{even_poly, MonicPoly};
use defring::transfer::even_parity;

pub fn run() -> Result<(), Box<dyn Error>> {
    let s: Structure = "fq:3".parse()?;
    let f = MonicPoly::generic("f", 2);
    let mut fresh = Fresh::starting_at(0);
    let mut phi = |g: &MonicPoly, _: &mut Fresh| even_poly(g).unwrap_or(defring::lang::Formula::False);
    let body = even_parity(&f, &mut fresh, &mut phi);
    let c = Compiled::new(&s, &body, &f.vars())?;
    for a1 in 0..3 {
        for a0 in 0..3 {
            let holds = c.eval(&[a0, a1], &EvalOptions::guided())?;
            println!("λ² + {a1}λ + {a0}: {}", if holds { "even" } else { "odd" });
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
