//! Command-line surface for the dihedral Hurwitz-vector calculus.
//!
//! Exit codes are a stable contract: 0 success / true, 1 usage or parse
//! error, 2 semantic failure / false, 3 state budget exceeded.

use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use hurwitz_core::{
    enumerate_types, reduce, same_orbit, verify_theorem, GroupContext, HurwitzError,
    HurwitzVector, OracleConfig, OracleError, OrbitFlavor,
};

#[derive(Parser)]
#[command(name = "hurwitz", version, about = "Dihedral Hurwitz vectors: validation, reduction to normal form, numerical types, and orbit verification", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output mode.
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
    /// State budget for oracle enumeration.
    #[arg(long, global = true, env = "HURWITZ_MAX_STATES", default_value_t = 50_000_000)]
    max_states: u64,
    /// Worker threads (0 = auto).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Flavor {
    B,
    Ba,
}

impl From<Flavor> for OrbitFlavor {
    fn from(f: Flavor) -> Self {
        match f {
            Flavor::B => OrbitFlavor::Braid,
            Flavor::Ba => OrbitFlavor::BraidAuto,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the Hurwitz-vector conditions for a vector literal.
    Validate { vector: String },
    /// Rewrite a valid vector to its canonical normal form.
    Reduce {
        vector: String,
        /// Also emit the move trace as JSON.
        #[arg(long)]
        trace: bool,
        /// Replay the trace and confirm it reproduces the output.
        #[arg(long)]
        check: bool,
    },
    /// List the realizable numerical types of length `d` over `D_n`.
    Types { n: u32, d: usize },
    /// Exhaustively verify that orbits match numerical types at `(n, d)`.
    Verify { n: u32, d: usize },
    /// Decide whether two vectors lie in one orbit.
    Orbit {
        v: String,
        w: String,
        #[arg(long, value_enum, default_value_t = Flavor::B)]
        flavor: Flavor,
    },
    /// Covering genus of a valid vector.
    Genus { vector: String },
}

const EXIT_USAGE: u8 = 1;
const EXIT_SEMANTIC: u8 = 2;
const EXIT_BUDGET: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help and version requests are successes, not usage errors.
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp
                | clap::error::ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    let cfg = OracleConfig { max_states: cli.max_states.max(1), threads: cli.threads, seed: cli.seed };
    ExitCode::from(run(&cli, &cfg))
}

/// Spec-facing condition name for a validation failure.
fn violation_name(e: &HurwitzError) -> String {
    match e {
        HurwitzError::IdentityEntry { index } => format!("IdentityEntry({index})"),
        HurwitzError::NotGenerating { .. } => "NotGenerating".to_string(),
        HurwitzError::ProductNotIdentity { .. } => "ProductNotIdentity".to_string(),
        other => format!("{other}"),
    }
}

fn parse_vector(lit: &str) -> Result<HurwitzVector, u8> {
    HurwitzVector::from_str(lit).map_err(|e| {
        eprintln!("parse error: {e}");
        EXIT_USAGE
    })
}

fn emit(output: Output, text: String, json: serde_json::Value) {
    use std::io::Write;
    // Ignore EPIPE so piping into `head` is well-behaved.
    let mut out = std::io::stdout();
    let _ = match output {
        Output::Text => writeln!(out, "{text}"),
        Output::Json => writeln!(out, "{json}"),
    };
}

fn run(cli: &Cli, cfg: &OracleConfig) -> u8 {
    match &cli.cmd {
        Cmd::Validate { vector } => {
            let v = match parse_vector(vector) {
                Ok(v) => v,
                Err(code) => return code,
            };
            match v.validate() {
                Ok(()) => {
                    emit(
                        cli.output,
                        v.to_string(),
                        serde_json::json!({"ok": true, "vector": v.to_string()}),
                    );
                    0
                }
                Err(e) => {
                    let name = violation_name(&e);
                    emit(
                        cli.output,
                        name.clone(),
                        serde_json::json!({"ok": false, "violation": name, "detail": e.to_string()}),
                    );
                    EXIT_SEMANTIC
                }
            }
        }
        Cmd::Reduce { vector, trace, check } => {
            let v = match parse_vector(vector) {
                Ok(v) => v,
                Err(code) => return code,
            };
            if let Err(e) = v.validate() {
                let name = violation_name(&e);
                emit(
                    cli.output,
                    name.clone(),
                    serde_json::json!({"ok": false, "violation": name, "detail": e.to_string()}),
                );
                return EXIT_SEMANTIC;
            }
            match reduce(&v) {
                Ok((out, tr)) => {
                    if *check {
                        let ok = tr.replay(&v).map(|r| r == out).unwrap_or(false);
                        if !ok {
                            eprintln!("trace replay mismatch");
                            return EXIT_SEMANTIC;
                        }
                    }
                    let trace_json = serde_json::to_value(&tr).expect("trace serializes");
                    let mut text = out.to_string();
                    if *trace {
                        text = format!("{text}\n{trace_json}");
                    }
                    let mut obj = serde_json::json!({"result": out.to_string()});
                    if *trace {
                        obj["trace"] = trace_json;
                    }
                    emit(cli.output, text, obj);
                    0
                }
                Err(e) => {
                    eprintln!("reduction failed: {e}");
                    EXIT_SEMANTIC
                }
            }
        }
        Cmd::Types { n, d } => {
            let ctx = GroupContext::new(*n);
            let rows = enumerate_types(&ctx, *d);
            let mut lines = Vec::new();
            let mut items = Vec::new();
            for row in &rows {
                let ty_json = serde_json::to_value(&row.ty).expect("type serializes");
                let genus = row.ty.genus().ok();
                match (&row.canonical, genus) {
                    (Some(form), Some(g)) => {
                        lines.push(format!("{ty_json}\tform={form}\tg={g}"));
                        items.push(serde_json::json!({
                            "type": ty_json, "form": form.to_string(), "genus": g,
                            "realizable": true,
                        }));
                    }
                    _ => {
                        lines.push(format!("{ty_json}\tNotRealizable"));
                        items.push(serde_json::json!({
                            "type": ty_json, "realizable": false,
                        }));
                    }
                }
            }
            emit(cli.output, lines.join("\n"), serde_json::Value::Array(items));
            0
        }
        Cmd::Verify { n, d } => {
            let ctx = GroupContext::new(*n);
            match verify_theorem(&ctx, *d, cfg) {
                Ok(report) => {
                    let json = serde_json::to_value(&report).expect("report serializes");
                    let text = if report.passed() {
                        format!(
                            "PASS: {} valid vectors, {} orbits, one orbit per numerical type",
                            report.valid_count,
                            report.orbits.len()
                        )
                    } else {
                        format!("FAIL: {}", json["theorem"])
                    };
                    emit(cli.output, text, json);
                    if report.passed() {
                        0
                    } else {
                        EXIT_SEMANTIC
                    }
                }
                Err(e @ OracleError::BudgetExceeded { .. }) => {
                    eprintln!("{e}");
                    EXIT_BUDGET
                }
                Err(e) => {
                    eprintln!("{e}");
                    EXIT_SEMANTIC
                }
            }
        }
        Cmd::Orbit { v, w, flavor } => {
            let v = match parse_vector(v) {
                Ok(v) => v,
                Err(code) => return code,
            };
            let w = match parse_vector(w) {
                Ok(w) => w,
                Err(code) => return code,
            };
            match same_orbit(&v, &w, (*flavor).into(), cfg) {
                Ok(true) => {
                    emit(cli.output, "true".into(), serde_json::json!({"same_orbit": true}));
                    0
                }
                Ok(false) => {
                    emit(cli.output, "false".into(), serde_json::json!({"same_orbit": false}));
                    EXIT_SEMANTIC
                }
                Err(OracleError::ContextMismatch) => {
                    eprintln!("vectors live in different contexts");
                    EXIT_USAGE
                }
                Err(e @ OracleError::BudgetExceeded { .. }) => {
                    emit(
                        cli.output,
                        "inconclusive".into(),
                        serde_json::json!({"same_orbit": "inconclusive", "detail": e.to_string()}),
                    );
                    EXIT_BUDGET
                }
            }
        }
        Cmd::Genus { vector } => {
            let v = match parse_vector(vector) {
                Ok(v) => v,
                Err(code) => return code,
            };
            if let Err(e) = v.validate() {
                let name = violation_name(&e);
                emit(
                    cli.output,
                    name.clone(),
                    serde_json::json!({"ok": false, "violation": name}),
                );
                return EXIT_SEMANTIC;
            }
            match v.covering_genus() {
                Ok(g) => {
                    emit(cli.output, g.to_string(), serde_json::json!({"genus": g}));
                    0
                }
                Err(e) => {
                    eprintln!("{e}");
                    EXIT_SEMANTIC
                }
            }
        }
    }
}
