//! Command-line front end. Every command prints one JSON document on
//! standard output; the exit code is 0 on success, 1 when a verification
//! fails and 2 on malformed input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::codes::{
    code_from_factorization, is_maximal_code, kraft_sum, sardinas_patterson, CodeSpec,
};
use crate::construct::{
    build_tower, check_c1, check_four_code, check_three_code, extend_layer, peel_layers,
    ConstructError, FourCodeSpec, TeocExtension, ThreeCodeSpec, TowerSpec,
};
use crate::cyclic::{
    default_witness_bound, hajos_witnesses, is_factorization, krasner_pairs, verify_krasner,
};
use crate::factorization::{
    classify_4code, layer_decompose, normalize_sign, verify_factorization, FactorizationPair,
};
use crate::fixtures;
use crate::upoly::IntSet;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "fcodes",
    version,
    about = "Factorizations of finite maximal codes over {a, b}"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide unique decipherability and maximality of a finite code.
    VerifyCode { code: PathBuf },
    /// Check that P(A-1)S + 1 is the given code, or any code when none is given.
    VerifyFactorization {
        pair: PathBuf,
        #[arg(long)]
        code: Option<PathBuf>,
    },
    /// Print the layers C_0, C_1, ... of P(A-1)S + 1.
    Layers { pair: PathBuf },
    /// Classify a 4-code factorization.
    Classify { pair: PathBuf },
    /// Krasner factorizations of Z_n.
    Krasner {
        #[command(subcommand)]
        action: KrasnerCommand,
    },
    /// Hajós factorizations of Z_n.
    Hajos {
        #[command(subcommand)]
        action: HajosCommand,
    },
    /// Build a positive factorization from parameters.
    Construct { kind: ConstructKind, spec: PathBuf },
    /// Replay the built-in worked instances.
    Fixtures {
        #[command(subcommand)]
        action: FixturesCommand,
    },
}

#[derive(Subcommand, Debug)]
enum KrasnerCommand {
    Enum {
        n: u32,
    },
    Verify {
        #[arg(long = "I", value_parser = parse_set)]
        i: IntSet,
        #[arg(long = "J", value_parser = parse_set)]
        j: IntSet,
        #[arg(long)]
        n: u32,
    },
}

#[derive(Subcommand, Debug)]
enum HajosCommand {
    Check {
        #[arg(long = "T", value_parser = parse_set)]
        t: IntSet,
        #[arg(long = "R", value_parser = parse_set)]
        r: IntSet,
        #[arg(long)]
        n: u32,
        /// Largest element tried in M and L; defaults to 2n.
        #[arg(long)]
        bound: Option<u32>,
    },
}

#[derive(Subcommand, Debug)]
enum FixturesCommand {
    Run {
        #[arg(required_unless_present = "all", conflicts_with = "all")]
        name: Option<String>,
        #[arg(long)]
        all: bool,
    },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum ConstructKind {
    #[value(name = "three-code", alias = "3code")]
    ThreeCode,
    #[value(name = "c1")]
    C1,
    #[value(name = "tower")]
    Tower,
    #[value(name = "teoc-extend", alias = "extend")]
    TeocExtend,
    #[value(name = "teoc-peel", alias = "peel")]
    TeocPeel,
    #[value(name = "four-code", alias = "4code")]
    FourCode,
}

#[derive(Deserialize)]
struct PeelSpec {
    pair: FactorizationPair,
    r: usize,
}

fn parse_set(s: &str) -> Result<IntSet, String> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<u32>().map_err(|e| format!("{x:?}: {e}")))
        .collect()
}

/// Input problems; reported with exit code 2.
struct InputError(String);

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

struct Outcome {
    ok: bool,
    body: Value,
}

impl Outcome {
    fn new(ok: bool, body: Value) -> Self {
        Outcome { ok, body }
    }
}

fn pair_json(f: &FactorizationPair) -> Value {
    json!({ "P": f.p, "S": f.s })
}

fn layers_json(f: &FactorizationPair) -> Value {
    let stack = layer_decompose(f);
    json!(stack
        .layers
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>())
}

fn code_report(code: &CodeSpec) -> Value {
    let verdict = sardinas_patterson(code);
    let kraft = kraft_sum(code);
    let maximal = verdict.is_code && num_traits::One::is_one(&kraft);
    let mut out = json!({
        "is_code": verdict.is_code,
        "kraft_sum": kraft.to_string(),
        "is_maximal": maximal,
    });
    if let Some(w) = verdict.witness {
        out["witness"] = json!(w);
    }
    out
}

fn construct_outcome(result: Result<FactorizationPair, ConstructError>) -> Outcome {
    match result {
        Ok(f) => {
            let mut body = pair_json(&f);
            body["layers"] = layers_json(&f);
            Outcome::new(true, body)
        }
        Err(e) => Outcome::new(false, json!({ "error": e, "message": e.to_string() })),
    }
}

fn execute(command: Command) -> Result<Outcome, InputError> {
    Ok(match command {
        Command::VerifyCode { code } => {
            let code: CodeSpec = read_json(&code)?;
            if code.is_empty() {
                return Err(InputError("code has no words".into()));
            }
            let report = code_report(&code);
            Outcome::new(report["is_code"] == json!(true), report)
        }
        Command::VerifyFactorization { pair, code } => {
            let f: FactorizationPair = read_json(&pair)?;
            match code {
                Some(path) => {
                    let code: CodeSpec = read_json(&path)?;
                    let ok = verify_factorization(&code, &f);
                    Outcome::new(ok, json!({ "verified": ok }))
                }
                None => match code_from_factorization(&f.p, &f.s) {
                    Ok(code) => {
                        let ok = is_maximal_code(&code);
                        Outcome::new(ok, json!({ "verified": ok, "code": code }))
                    }
                    Err(e) => Outcome::new(
                        false,
                        json!({ "verified": false, "message": e.to_string() }),
                    ),
                },
            }
        }
        Command::Layers { pair } => {
            let f: FactorizationPair = read_json(&pair)?;
            let stack = layer_decompose(&f);
            Outcome::new(
                true,
                json!({
                    "layers": layers_json(&f),
                    "nonnegative": stack.is_nonneg(),
                }),
            )
        }
        Command::Classify { pair } => {
            let f: FactorizationPair = read_json(&pair)?;
            let sign = normalize_sign(&f).map_err(|e| e.to_string());
            match classify_4code(&f) {
                Ok(c) => Outcome::new(true, json!({ "classification": c, "sign": sign.ok() })),
                Err(e) => Outcome::new(false, json!({ "error": e.to_string() })),
            }
        }
        Command::Krasner {
            action: KrasnerCommand::Enum { n },
        } => match krasner_pairs(n) {
            Ok(pairs) => Outcome::new(true, json!({ "n": n, "pairs": pairs })),
            Err(e) => return Err(InputError(e.to_string())),
        },
        Command::Krasner {
            action: KrasnerCommand::Verify { i, j, n },
        } => {
            if n == 0 {
                return Err(InputError("n must be positive".into()));
            }
            let ok = verify_krasner(&i, &j, n);
            Outcome::new(ok, json!({ "krasner": ok }))
        }
        Command::Hajos {
            action: HajosCommand::Check { t, r, n, bound },
        } => {
            let is_fact = is_factorization(&t, &r, n).map_err(|e| InputError(e.to_string()))?;
            if !is_fact {
                return Ok(Outcome::new(false, json!({ "is_factorization": false })));
            }
            let bound = bound.unwrap_or_else(|| default_witness_bound(n));
            let witnesses =
                hajos_witnesses(&t, &r, n, bound).map_err(|e| InputError(e.to_string()))?;
            let strong = witnesses.iter().find(|w| w.is_strong());
            let body = json!({
                "is_factorization": true,
                "bound": bound,
                "witness": witnesses.first(),
                "witness_count": witnesses.len(),
                "strong_witness": strong,
            });
            let witness = witnesses.first();
            Outcome::new(witness.is_some(), body)
        }
        Command::Construct { kind, spec } => match kind {
            ConstructKind::ThreeCode => {
                construct_outcome(check_three_code(&read_json::<ThreeCodeSpec>(&spec)?))
            }
            ConstructKind::C1 => match check_c1(&read_json::<ThreeCodeSpec>(&spec)?) {
                Ok(c1) => Outcome::new(true, json!({ "C_1": c1.to_string() })),
                Err(e) => Outcome::new(false, json!({ "error": e, "message": e.to_string() })),
            },
            ConstructKind::Tower => construct_outcome(build_tower(&read_json::<TowerSpec>(&spec)?)),
            ConstructKind::TeocExtend => {
                construct_outcome(extend_layer(&read_json::<TeocExtension>(&spec)?))
            }
            ConstructKind::TeocPeel => {
                let p: PeelSpec = read_json(&spec)?;
                construct_outcome(peel_layers(&p.pair, p.r))
            }
            ConstructKind::FourCode => {
                construct_outcome(check_four_code(&read_json::<FourCodeSpec>(&spec)?))
            }
        },
        Command::Fixtures {
            action: FixturesCommand::Run { name, all },
        } => {
            let names: Vec<String> = if all {
                fixtures::NAMES.iter().map(|s| s.to_string()).collect()
            } else {
                vec![name.unwrap_or_default()]
            };
            let mut reports = Vec::new();
            for n in &names {
                match fixtures::run(n) {
                    Some(r) => reports.push(r),
                    None => {
                        return Err(InputError(format!(
                            "unknown fixture {n:?}; expected one of {}",
                            fixtures::NAMES.join(", ")
                        )))
                    }
                }
            }
            let ok = reports.iter().all(|r| r.passed);
            let body = if all {
                json!(reports)
            } else {
                json!(reports[0])
            };
            Outcome::new(ok, body)
        }
    })
}

/// Runs one command, writing JSON to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_INPUT,
            };
        }
    };
    match execute(cli.command) {
        Ok(outcome) => {
            let text = serde_json::to_string_pretty(&outcome.body).expect("JSON values serialize");
            let _ = writeln!(out, "{text}");
            if outcome.ok {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(InputError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(
        args,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}
