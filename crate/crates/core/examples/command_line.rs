//! Drives the command-line interface in-process: emit a set, count it, and
//! classify two points from a file.
//!
//!     cargo run --example command_line

use std::error::Error;

use defring::cli;

fn call(args: &[&str]) -> Result<String, Box<dyn Error>> {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(std::iter::once("defring").chain(args.iter().copied()), &mut out, &mut err);
    if code != cli::EXIT_OK {
        return Err(format!("{args:?} exited with {code}: {}", String::from_utf8_lossy(&err)).into());
    }
    Ok(String::from_utf8(out)?)
}

pub fn run() -> Result<(), Box<dyn Error>> {
    print!("{}", call(&["emit", "--set", "lie:u:1"])?);
    print!("{}", call(&["count", "--set", "lie:so:3", "--structure", "fq:3"])?);

    let dir = std::env::temp_dir().join(format!("defring-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let points = dir.join("points.json");
    std::fs::write(
        &points,
        r#"[{"X": [[0,0],[0,0]], "Y": [[0,0],[0,0]]},
            {"X": [[1,0],[0,2]], "Y": [[1,0],[0,2]]}]"#,
    )?;
    let path = points.to_string_lossy().into_owned();
    print!(
        "{}",
        call(&["classify", "--triple", "sympl:r=1,a=1,b=0", "--structure", "fq:3", "--points", &path])?
    );
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
