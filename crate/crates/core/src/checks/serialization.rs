//! Printing then parsing is the identity, on random formulas and on every
//! catalog set at its minimal size.

use crate::catalog::{minimal_names, resolve};
use crate::lang::{formula_to_sexpr, parse_formula, parse_vset, vset_to_sexpr};

use super::gen::{formula, GenConfig};
use super::{rng, Report};

pub const ROUND_TRIPS: usize = 500;

/// Catalog sets with longer text are only checked for deterministic output.
const PARSE_LIMIT: usize = 4 << 20;

pub fn run(seed: u64) -> Report {
    let mut r = Report::new("serialization", seed);
    let mut g = rng(seed, 0);
    let cfg = GenConfig::syntactic();
    for i in 0..ROUND_TRIPS {
        let f = formula(&mut g, &cfg);
        let text = formula_to_sexpr(&f);
        match parse_formula(&text) {
            Ok(back) => {
                r.check(back == f, || format!("#{i}: parse(print(f)) ≠ f for {text}"));
                let again = formula_to_sexpr(&back);
                r.check(again == text, || format!("#{i}: printing is not stable: {text} vs {again}"));
            }
            Err(e) => r.fail(format!("#{i}: {e} in {text}")),
        }
    }
    for name in minimal_names() {
        let v = resolve(&name).expect("catalog name");
        let text = vset_to_sexpr(&v);
        r.check(vset_to_sexpr(&resolve(&name).expect("catalog name")) == text, || {
            format!("{name}: emission is not deterministic")
        });
        if text.len() > PARSE_LIMIT {
            r.skip(format!("{name}: {} bytes, round trip not attempted", text.len()));
            continue;
        }
        match parse_vset(&text) {
            Ok(back) => r.check(back == v && vset_to_sexpr(&back) == text, || format!("{name}: round trip changes the set")),
            Err(e) => r.fail(format!("{name}: {e}")),
        }
    }
    r.value("random_formulas", ROUND_TRIPS);
    r.value("catalog_sets", minimal_names().len());
    r
}
