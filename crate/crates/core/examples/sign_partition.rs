//! Splits 𝔤 ⊕ 𝔥 for the symplectic triple (sp(2), sp(2), so(0)) over F₃
//! into the +1, −1 and 0 sets and checks that every point lands in
//! exactly one of them.
//!
//!     cargo run --release --example sign_partition

use std::collections::BTreeMap;
use std::error::Error;

use defring::interp::{enumerate_points, Classifier, EvalOptions, Structure};
use defring::lie::TripleSpec;
use defring::transfer::sigma_sets;

pub fn run() -> Result<(), Box<dyn Error>> {
    let s: Structure = "fq:3".parse()?;
    let t: TripleSpec = "sympl:r=1,a=1,b=0".parse()?;
    let glreg = t.default_glreg();
    let opts = EvalOptions::guided();
    let domain = enumerate_points(&s, &sigma_sets(&t, glreg).domain, &[], &opts)?;
    let classifier = Classifier::new(&s, &t, glreg)?;
    let mut tally: BTreeMap<i8, usize> = BTreeMap::new();
    for p in &domain {
        *tally.entry(classifier.classify(p, &opts)?.value()).or_default() += 1;
    }
    println!("{t} over {}: {} points", s.spec(), domain.len());
    for (sign, n) in &tally {
        println!("  σ = {sign:>2}: {n}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
