//! Compares the regular semisimple formula with the gcd test on every 2×2
//! matrix over F₃.
//!
//!     cargo run --example regular_semisimple

use std::error::Error;

use defring::interp::{Compiled, EvalOptions, Structure};
use defring::lie::Family;
use defring::oracle::{ConcreteMatrix, Ops};

pub fn run() -> Result<(), Box<dyn Error>> {
    let s: Structure = "fq:3".parse()?;
    let rss = Family::Gl(2).regular_ss();
    let c = Compiled::new(&s, rss.body(), rss.signature())?;
    let ops = Ops(&s);
    let (mut regular, mut agree) = (0, 0);
    for idx in 0..81u32 {
        let p: Vec<u32> = (0..4).map(|k| idx / 3u32.pow(k) % 3).collect();
        let by_formula = c.eval(&p, &EvalOptions::guided())?;
        let x = ConcreteMatrix::from_fn(2, 2, |i, j| p[2 * i + j]);
        let by_gcd = ops.is_regular(&x)?;
        regular += by_formula as u32;
        agree += (by_formula == by_gcd) as u32;
    }
    println!("gl(2) over F3: {regular} of 81 regular semisimple, formula and gcd agree on {agree}");
    assert_eq!(agree, 81);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
