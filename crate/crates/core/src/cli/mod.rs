//! Command-line front end.
//!
//! ```text
//! defring emit     --set lie:sp:2 [--format sexpr|json] [--glreg on|off] [--out FILE]
//! defring count    --set lie:so:3 --structure fq:3 [--mode exhaustive|sample] [--seed N] [--samples N]
//! defring classify --triple odd-orth:r=1,a=1,b=0 --structure fq:3 --points FILE [--strategy naive|guided|both]
//! defring check    --suite pfaffian [--seed N]
//! ```
//!
//! Exit codes: 0 success, 2 configuration error, 3 budget exceeded,
//! 4 invariant violation (failed check, partition violation, strategies
//! disagreeing).

mod points;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::SetName;
use crate::checks::{run_suite, SUITES};
use crate::interp::{count_points, default_budget, Classifier, CountMode, EvalError, EvalOptions, Structure};
use crate::lang::vset_to_sexpr;
use crate::lie::TripleSpec;
use crate::transfer::SignClass;

pub use points::{parse_points, PointError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "defring", version, about = "Definable sets over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EmitFormat {
    Sexpr,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyArg {
    Naive,
    Guided,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Toggle {
    On,
    Off,
}

impl Toggle {
    fn on(self) -> bool {
        self == Toggle::On
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a catalog set as an s-expression.
    Emit {
        #[arg(long)]
        set: String,
        #[arg(long, value_enum, default_value = "sexpr")]
        format: EmitFormat,
        /// Restrict sign sets to the gl-regular locus.
        #[arg(long, value_enum)]
        glreg: Option<Toggle>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count the points of a catalog set over a finite structure.
    Count {
        #[arg(long)]
        set: String,
        #[arg(long)]
        structure: String,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, value_enum, default_value = "guided")]
        strategy: StrategyArg,
        /// Evaluation step budget; defaults to DEFRING_BUDGET or 1e8.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, value_enum)]
        glreg: Option<Toggle>,
        /// Parameter values, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sign class of each point of a JSON point file.
    Classify {
        #[arg(long)]
        triple: String,
        #[arg(long)]
        structure: String,
        #[arg(long)]
        points: PathBuf,
        #[arg(long, value_enum, default_value = "guided")]
        strategy: StrategyArg,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, value_enum)]
        glreg: Option<Toggle>,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite.
    Check {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Everything that determines a command's output, written into each record.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triple: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<StrategyArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub glreg: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

/// A failed command with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn config(m: impl std::fmt::Display) -> Failure {
        Failure { code: EXIT_CONFIG, message: m.to_string() }
    }

    fn invariant(m: impl std::fmt::Display) -> Failure {
        Failure { code: EXIT_INVARIANT, message: m.to_string() }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Failure {
        let code = match e {
            EvalError::BudgetExceeded { .. } => EXIT_BUDGET,
            EvalError::PartitionViolation(_) | EvalError::NoSignSet | EvalError::InvalidHint(_) => EXIT_INVARIANT,
            _ => EXIT_CONFIG,
        };
        Failure { code, message: e.to_string() }
    }
}

/// The text a command produced and its exit code.
pub struct Output {
    pub code: i32,
    pub text: String,
    /// Human-oriented notes for stderr.
    pub notes: Vec<String>,
}

fn structure(spec: &str) -> Result<Structure, Failure> {
    spec.parse::<Structure>().map_err(|e| Failure::config(format!("structure `{spec}`: {e}")))
}

fn options(strategy: StrategyArg, budget: Option<u64>) -> EvalOptions {
    let base = match strategy {
        StrategyArg::Naive => EvalOptions::naive(),
        _ => EvalOptions::guided(),
    };
    base.with_budget(budget.unwrap_or_else(default_budget))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Runs a parsed command.
pub fn execute(cmd: &Command) -> Result<Output, Failure> {
    match cmd {
        Command::Emit { set, format, glreg, out } => {
            let config = RunConfig {
                command: "emit".into(),
                set: Some(set.clone()),
                glreg: glreg.map(Toggle::on),
                format: Some(format!("{format:?}").to_lowercase()),
                out: out.clone(),
                ..RunConfig::default()
            };
            emit(config, set, *format, glreg.map(Toggle::on))
        }
        Command::Count {
            set,
            structure,
            mode,
            seed,
            samples,
            strategy,
            budget,
            glreg,
            params,
            out,
        } => {
            let sample = *mode == Mode::Sample;
            let config = RunConfig {
                command: "count".into(),
                set: Some(set.clone()),
                structure: Some(structure.clone()),
                mode: Some(*mode),
                seed: sample.then_some(*seed),
                samples: sample.then_some(*samples),
                strategy: Some(*strategy),
                budget: Some(budget.unwrap_or_else(default_budget)),
                glreg: glreg.map(Toggle::on),
                params: params.clone(),
                out: out.clone(),
                ..RunConfig::default()
            };
            count(config)
        }
        Command::Classify {
            triple,
            structure,
            points,
            strategy,
            budget,
            glreg,
            format,
            out,
        } => {
            let config = RunConfig {
                command: "classify".into(),
                triple: Some(triple.clone()),
                structure: Some(structure.clone()),
                strategy: Some(*strategy),
                budget: Some(budget.unwrap_or_else(default_budget)),
                glreg: glreg.map(Toggle::on),
                format: Some(format!("{format:?}").to_lowercase()),
                out: out.clone(),
                ..RunConfig::default()
            };
            classify(config, points, *format)
        }
        Command::Check { suite, seed, out } => {
            let config = RunConfig {
                command: "check".into(),
                suite: Some(suite.clone()),
                seed: Some(*seed),
                out: out.clone(),
                ..RunConfig::default()
            };
            check(config)
        }
    }
}

fn emit(config: RunConfig, name: &str, format: EmitFormat, glreg: Option<bool>) -> Result<Output, Failure> {
    let v = SetName::parse(name).map_err(Failure::config)?.build(glreg);
    let text = vset_to_sexpr(&v);
    let stats = v.body().stats();
    let notes = vec![format!(
        "{name}: {} free vars, {} quantifiers, {} formula nodes, {} term nodes",
        stats.free_vars, stats.quantifiers, stats.formula_nodes, stats.term_nodes
    )];
    let text = match format {
        EmitFormat::Sexpr => text + "\n",
        EmitFormat::Json => pretty(&json!({ "config": config, "set": name, "sexpr": text, "stats": stats })),
    };
    Ok(Output { code: EXIT_OK, text, notes })
}

fn count(config: RunConfig) -> Result<Output, Failure> {
    let name = config.set.as_deref().expect("set");
    let s = structure(config.structure.as_deref().expect("structure"))?;
    let v = SetName::parse(name).map_err(Failure::config)?.build(config.glreg);
    if v.params().len() != config.params.len() {
        return Err(Failure::config(format!(
            "{name} takes {} parameters, {} given",
            v.params().len(),
            config.params.len()
        )));
    }
    let params = config
        .params
        .iter()
        .map(|p| points::element(&s, &Value::String(p.clone())))
        .collect::<Result<Vec<u32>, PointError>>()
        .map_err(Failure::config)?;
    let mode = match config.mode.expect("mode") {
        Mode::Exhaustive => CountMode::Exhaustive,
        Mode::Sample => CountMode::Sample {
            seed: config.seed.expect("seed"),
            samples: config.samples.expect("samples"),
        },
    };
    let strategy = config.strategy.expect("strategy");
    let budget = config.budget;
    let start = Instant::now();
    let run = |st| count_points(&s, &v, &params, mode, &options(st, budget));
    let result = match strategy {
        StrategyArg::Both => {
            let a = run(StrategyArg::Naive)?;
            let b = run(StrategyArg::Guided)?;
            if a != b {
                return Err(Failure::invariant(format!("naive {a:?} and guided {b:?} disagree")));
            }
            b
        }
        st => run(st)?,
    };
    let mut record = json!({
        "config": config,
        "set": name,
        "structure": s.spec(),
        "mode": config.mode,
    });
    let obj = record.as_object_mut().expect("object");
    if let Some(c) = result.count {
        obj.insert("count".into(), json!(c));
    }
    if let Some(e) = result.estimate {
        obj.insert("estimate".into(), json!(e));
        obj.insert("stderr".into(), json!(result.stderr));
        obj.insert("hits".into(), json!(result.hits));
        obj.insert("seed".into(), json!(config.seed));
    }
    obj.insert("elapsed".into(), json!(start.elapsed().as_secs_f64()));
    Ok(Output { code: EXIT_OK, text: pretty(&record), notes: Vec::new() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct Row {
    index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    naive: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    guided: Option<i8>,
    status: String,
}

/// Sign class under one strategy, or the status word for a failure.
fn sign(c: &Classifier, p: &[u32], opts: &EvalOptions) -> Result<SignClass, (String, i32)> {
    c.classify(p, opts).map_err(|e| match e {
        EvalError::NotInDomain => ("not-in-domain".into(), EXIT_OK),
        EvalError::BudgetExceeded { .. } => ("budget".into(), EXIT_BUDGET),
        EvalError::PartitionViolation(h) => {
            let list: Vec<String> = h.iter().map(|c| c.to_string()).collect();
            (format!("partition-violation:{}", list.join("|")), EXIT_INVARIANT)
        }
        e => (format!("error:{e}"), EXIT_INVARIANT),
    })
}

fn classify(config: RunConfig, path: &PathBuf, format: TableFormat) -> Result<Output, Failure> {
    let name = config.triple.as_deref().expect("triple");
    let t: TripleSpec = name.parse().map_err(|e| Failure::config(format!("triple `{name}`: {e}")))?;
    let s = structure(config.structure.as_deref().expect("structure"))?;
    if t.involution() != s.has_involution() {
        return Err(Failure::config(format!("{name} does not live over {}", s.spec())));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
    let pts = parse_points(&s, &t, &text).map_err(Failure::config)?;
    let glreg = config.glreg.unwrap_or(t.default_glreg());
    let classifier = Classifier::new(&s, &t, glreg)?;
    let strategy = config.strategy.expect("strategy");
    let budget = config.budget;

    let rows: Vec<(Row, i32)> = pts
        .par_iter()
        .enumerate()
        .map(|(index, p)| {
            let mut row = Row { index, sigma: None, naive: None, guided: None, status: "ok".into() };
            let mut code = EXIT_OK;
            let mut settle = |r: Result<SignClass, (String, i32)>, label: &str| match r {
                Ok(c) => Some(c.value()),
                Err((status, c)) => {
                    if code == EXIT_OK || c == EXIT_INVARIANT {
                        code = c;
                    }
                    row.status = if label.is_empty() { status } else { format!("{label}-{status}") };
                    None
                }
            };
            match strategy {
                StrategyArg::Both => {
                    let n = settle(sign(&classifier, p, &options(StrategyArg::Naive, budget)), "naive");
                    let g = settle(sign(&classifier, p, &options(StrategyArg::Guided, budget)), "guided");
                    row.naive = n;
                    row.guided = g;
                    match (n, g) {
                        (Some(a), Some(b)) if a != b => {
                            row.status = "strategies-disagree".into();
                            code = EXIT_INVARIANT;
                        }
                        _ => row.sigma = g.or(n),
                    }
                }
                st => row.sigma = settle(sign(&classifier, p, &options(st, budget)), ""),
            }
            (row, code)
        })
        .collect();
    let code = rows.iter().map(|(_, c)| *c).fold(EXIT_OK, |acc, c| match (acc, c) {
        (EXIT_INVARIANT, _) | (_, EXIT_INVARIANT) => EXIT_INVARIANT,
        (EXIT_OK, c) => c,
        (a, _) => a,
    });
    let rows: Vec<Row> = rows.into_iter().map(|(r, _)| r).collect();
    let mut notes = Vec::new();
    if code != EXIT_OK {
        notes.push(format!("{} of {} points did not classify cleanly", rows.iter().filter(|r| r.status != "ok").count(), rows.len()));
    }
    let text = match format {
        TableFormat::Json => pretty(&json!({
            "config": config,
            "triple": t.to_string(),
            "structure": s.spec(),
            "glreg": glreg,
            "results": rows,
        })),
        TableFormat::Csv => {
            let mut out = format!("# {}\n", serde_json::to_string(&config).expect("serializes"));
            let cell = |v: Option<i8>| v.map(|x| x.to_string()).unwrap_or_default();
            if strategy == StrategyArg::Both {
                out.push_str("index,sigma,naive,guided,status\n");
                for r in &rows {
                    out.push_str(&format!("{},{},{},{},{}\n", r.index, cell(r.sigma), cell(r.naive), cell(r.guided), r.status));
                }
            } else {
                out.push_str("index,sigma,status\n");
                for r in &rows {
                    out.push_str(&format!("{},{},{}\n", r.index, cell(r.sigma), r.status));
                }
            }
            out
        }
    };
    Ok(Output { code, text, notes })
}

fn check(config: RunConfig) -> Result<Output, Failure> {
    let suite = config.suite.as_deref().expect("suite");
    let start = Instant::now();
    let report = run_suite(suite, config.seed.expect("seed"))
        .ok_or_else(|| Failure::config(format!("unknown suite `{suite}`; known: {}", SUITES.join(", "))))?;
    let code = if report.passed { EXIT_OK } else { EXIT_INVARIANT };
    let notes = vec![report.summary()];
    let text = pretty(&json!({
        "config": config,
        "report": report,
        "elapsed": start.elapsed().as_secs_f64(),
    }));
    Ok(Output { code, text, notes })
}

/// Parses `args` (program name first), runs the command, and writes the
/// result to `--out` or `stdout`. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let out = match &cli.command {
        Command::Emit { out, .. } | Command::Count { out, .. } | Command::Classify { out, .. } | Command::Check { out, .. } => out.clone(),
    };
    match execute(&cli.command) {
        Ok(o) => {
            for n in &o.notes {
                let _ = writeln!(stderr, "{n}");
            }
            let written = match out {
                Some(path) => std::fs::write(&path, &o.text).map_err(|e| format!("{}: {e}", path.display())),
                None => stdout.write_all(o.text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => o.code,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    EXIT_CONFIG
                }
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr())
}
