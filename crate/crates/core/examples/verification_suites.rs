//! Runs verification suites by name and prints one line each. With no
//! arguments it runs the quick ones.
//!
//!     cargo run --release --example verification_suites -- pfaffian parity

use std::error::Error;

use defring::checks::run_suite;

pub fn run_named(names: &[String]) -> Result<(), Box<dyn Error>> {
    let mut failed = 0;
    for name in names {
        let report = run_suite(name, 1).ok_or_else(|| format!("unknown suite {name}"))?;
        println!("{}", report.summary());
        for f in report.failures.iter().take(5) {
            println!("  {f}");
        }
        failed += !report.passed as usize;
    }
    if failed > 0 {
        return Err(format!("{failed} suites failed").into());
    }
    Ok(())
}

pub fn run() -> Result<(), Box<dyn Error>> {
    run_named(&["projection".into(), "parity".into()])
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() {
        run()
    } else {
        run_named(&args)
    }
}
