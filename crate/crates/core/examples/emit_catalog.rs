//! Builds a few named sets, prints their size, and checks that the text
//! form parses back to the same set.
//!
//!     cargo run --example emit_catalog

use std::error::Error;

use defring::catalog::resolve;
use defring::lang::{parse_vset, vset_to_sexpr};

pub fn run() -> Result<(), Box<dyn Error>> {
    for name in ["L:2", "lie:sp:2", "lie:u:1", "rss:gl:2", "central:so:2", "pm:odd-orth:r=1,a=1,b=0"] {
        let v = resolve(name)?;
        let text = vset_to_sexpr(&v);
        let st = v.body().stats();
        println!(
            "{name:<26} arity {:>2}  params {:>2}  quantifiers {:>3}  {:>8} bytes",
            v.arity(),
            v.params().len(),
            st.quantifiers,
            text.len()
        );
        if parse_vset(&text)? != v {
            return Err(format!("{name} does not round-trip").into());
        }
    }
    let sp2 = vset_to_sexpr(&resolve("lie:sp:2")?);
    println!("\n{sp2}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
