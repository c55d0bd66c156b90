//! The `boolcomplex` command line.
//!
//! Every subcommand reads one input, either a `.cplx` file (`-` for stdin)
//! or `builtin:NAME`, and prints a JSON report on stdout. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0    | computed; the decomposition exists or the property holds |
//! | 10   | no decomposition exists, or the property fails |
//! | 20   | the node budget ran out before an answer |
//! | 2    | malformed input or arguments |
//!
//! `builtin` and `glue` print the complex in `.cplx` form instead, unless
//! `--output` is given, in which case the file is written there and the
//! report goes to stdout as usual.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::complex::{Face, RelativeComplex, SimplicialComplex, Vertex};
use crate::constructions::{glue_copies, Builtin, PaperComplex};
use crate::cplx::{parse_cplx, write_cplx, write_relative_cplx, Cplx};
use crate::decomp::{
    check_certificate, find_interval_decomposition, find_tree_decomposition, Decomposition,
    DecompositionCertificate, SolverConfig, Target,
};
use crate::homology::{betti_numbers, is_acyclic, is_k_fold_acyclic};
use crate::linalg::FieldPrime;
use crate::shifting::{cone_apex_depth, exterior_shift};
use crate::stacked::{find_stacked_shelling, is_stacked_equiv_dfold, stacked_decomposition};

pub const SEED_VAR: &str = "BOOLCOMPLEX_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "boolcomplex",
    version,
    about = "Simplicial complex decompositions, acyclicity and shifting"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Field characteristic (default 2 for homology, 2147483647 for shifting).
    #[arg(long, global = true)]
    pub prime: Option<u32>,
    /// Overridden by the BOOLCOMPLEX_SEED environment variable.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Independent random matrices that must agree when shifting.
    #[arg(long, global = true, default_value_t = 2)]
    pub trials: usize,
    /// Search nodes before giving up with exit code 20.
    #[arg(long, global = true, default_value_t = 1_000_000_000)]
    pub budget: u64,
    #[arg(long, global = true)]
    pub parallel: bool,
    /// Record wall-clock time in certificates (reports are then not byte-stable).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Where to write the certificate or complex.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// f-vector, and the largest power of (1+t) dividing f(t).
    Fvector { input: String },
    /// Reduced Betti numbers.
    Betti { input: String },
    /// Whether every face of size < K has an acyclic link.
    Acyclic {
        #[arg(long)]
        k: usize,
        input: String,
    },
    /// Rank-K boolean interval (or tree) decomposition.
    Decompose {
        #[arg(long)]
        rank: usize,
        /// Require the minima to form a subcomplex.
        #[arg(long)]
        subcomplex_minima: bool,
        /// Decompose into boolean trees instead of intervals.
        #[arg(long)]
        trees: bool,
        input: String,
    },
    /// Stacked shelling and the d-fold acyclicity it should agree with.
    Stacked {
        /// Also build a rank-K decomposition from the shelling.
        #[arg(long, requires = "rank")]
        decompose: bool,
        #[arg(long)]
        rank: Option<usize>,
        input: String,
    },
    /// Exterior algebraic shifting.
    Shift { input: String },
    /// Iterated Betti numbers of the exterior shift.
    IteratedBetti { input: String },
    /// Glue N copies of the input along a common induced subcomplex.
    Glue {
        #[arg(long)]
        along: String,
        #[arg(long)]
        copies: usize,
        input: String,
    },
    /// A named complex: Sigma, Upsilon, Psi, GammaPaper, DeltaPaper, PhiPaper or OmegaN.
    Builtin { name: String },
    /// Re-check a certificate (or a decompose report) against its target.
    Verify {
        certificate: PathBuf,
        /// Defaults to the source recorded in the certificate.
        #[arg(long)]
        target: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Fails,
    Unknown,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Fails => 10,
            Status::Unknown => 20,
        }
    }

    fn holds(yes: bool) -> Self {
        if yes {
            Status::Ok
        } else {
            Status::Fails
        }
    }
}

/// What a command printed and how it ended.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub stdout: String,
}

impl Outcome {
    fn report(status: Status, report: Value) -> Self {
        let mut stdout = serde_json::to_string_pretty(&report).expect("reports serialize");
        stdout.push('\n');
        Outcome { status, stdout }
    }
}

/// Errors that end with exit code 2.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Parse {
        path: String,
        source: crate::cplx::ParseError,
    },
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Builtin(#[from] crate::constructions::UnknownBuiltin),
    #[error("{0}")]
    Invalid(String),
}

/// Parsed input; relative complexes are only accepted where they make sense.
enum Input {
    Complex(SimplicialComplex),
    Relative(RelativeComplex),
}

impl Input {
    fn complex(self, command: &str) -> Result<SimplicialComplex, InputError> {
        match self {
            Input::Complex(c) => Ok(c),
            Input::Relative(_) => Err(InputError::Invalid(format!(
                "`{command}` needs a simplicial complex, not a relative complex"
            ))),
        }
    }

    fn target(&self) -> Target {
        match self {
            Input::Complex(c) => Target::from_complex(c),
            Input::Relative(r) => Target::from_relative(r),
        }
    }

    fn labels(&self) -> &std::collections::BTreeMap<Vertex, String> {
        match self {
            Input::Complex(c) => c.labels(),
            Input::Relative(r) => r.total().labels(),
        }
    }
}

fn load(spec: &str) -> Result<Input, InputError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return Ok(match name.parse::<PaperComplex>()?.build() {
            Builtin::Complex(c) => Input::Complex(c),
            Builtin::Relative(r) => Input::Relative(r),
        });
    }
    let text = if spec == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|source| InputError::Io {
                path: spec.into(),
                source,
            })?;
        s
    } else {
        fs::read_to_string(spec).map_err(|source| InputError::Io {
            path: spec.into(),
            source,
        })?
    };
    match parse_cplx(&text) {
        Ok(Cplx::Complex(c)) => Ok(Input::Complex(c)),
        Ok(Cplx::Relative(r)) => Ok(Input::Relative(r)),
        Err(source) => Err(InputError::Parse {
            path: spec.into(),
            source,
        }),
    }
}

fn prime(options: &Options, default: FieldPrime) -> Result<FieldPrime, InputError> {
    match options.prime {
        None => Ok(default),
        Some(p) => {
            FieldPrime::new(p).map_err(|_| InputError::Invalid(format!("{p} is not a prime")))
        }
    }
}

/// `--seed`, unless `BOOLCOMPLEX_SEED` is set.
pub fn effective_seed(options: &Options) -> Result<u64, InputError> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| InputError::Invalid(format!("{SEED_VAR}={s:?} is not a seed"))),
        Err(_) => Ok(options.seed),
    }
}

fn solver_config(options: &Options) -> Result<SolverConfig, InputError> {
    Ok(SolverConfig {
        node_budget: options.budget,
        seed: effective_seed(options)?,
        parallel: options.parallel,
        timing: options.timing,
    })
}

fn write_output(path: &Path, contents: &str) -> Result<(), InputError> {
    fs::write(path, contents).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn labelled(faces: &[Face], labels: &std::collections::BTreeMap<Vertex, String>) -> Vec<String> {
    faces
        .iter()
        .map(|f| f.display_with(labels).to_string())
        .collect()
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

pub fn run(cli: &Cli) -> Result<Outcome, InputError> {
    let o = &cli.options;
    match &cli.command {
        Command::Fvector { input } => {
            let parsed = load(input)?;
            let f = match &parsed {
                Input::Complex(c) => c.f_polynomial(),
                Input::Relative(r) => r.f_polynomial(),
            };
            let power = f.max_power();
            let quotient = power.map(|k| f.quotient(k).expect("divides").coeffs().to_vec());
            Ok(Outcome::report(
                Status::Ok,
                json!({
                    "command": "fvector",
                    "input": input,
                    "f_vector": f.coeffs(),
                    "faces": f.eval_one(),
                    "one_plus_t_power": power,
                    "quotient": quotient,
                }),
            ))
        }
        Command::Betti { input } => {
            let c = load(input)?.complex("betti")?;
            let p = prime(o, FieldPrime::TWO)?;
            let betti = betti_numbers(&c, p);
            Ok(Outcome::report(
                Status::Ok,
                json!({
                    "command": "betti",
                    "input": input,
                    "prime": p.get(),
                    "reduced_betti": betti.values(),
                    "acyclic": betti.is_zero(),
                }),
            ))
        }
        Command::Acyclic { k, input } => {
            let c = load(input)?.complex("acyclic")?;
            let p = prime(o, FieldPrime::TWO)?;
            let report = is_k_fold_acyclic(&c, *k, p);
            let witness_label = report
                .witness
                .as_ref()
                .map(|w| w.display_with(c.labels()).to_string());
            Ok(Outcome::report(
                Status::holds(report.holds),
                json!({
                    "command": "acyclic",
                    "input": input,
                    "prime": p.get(),
                    "k": k,
                    "holds": report.holds,
                    "witness": report.witness,
                    "witness_label": witness_label,
                }),
            ))
        }
        Command::Decompose {
            rank,
            subcomplex_minima,
            trees,
            input,
        } => {
            let parsed = load(input)?;
            let target = parsed.target().with_source(input.clone());
            let config = solver_config(o)?;
            let start = Instant::now();
            let result = if *trees {
                find_tree_decomposition(&target, *rank, *subcomplex_minima, &config)
            } else {
                find_interval_decomposition(&target, *rank, *subcomplex_minima, &config)
            };
            let mut report = json!({
                "command": "decompose",
                "input": input,
                "kind": if *trees { "tree" } else { "interval" },
                "rank": rank,
                "subcomplex_minima": subcomplex_minima,
                "faces": target.len(),
                "target_hash": target.hash(),
                "seed": config.seed,
                "budget": config.node_budget,
            });
            if o.timing {
                report["wallclock_ms"] = json!(start.elapsed().as_millis() as u64);
            }
            let status = match &result {
                Decomposition::Found(cert) => {
                    report["status"] = json!("found");
                    report["nodes"] = json!(cert.solver.nodes);
                    report["minima_f_vector"] =
                        json!(crate::fpoly::FPolynomial::from_faces(&cert.minima).coeffs());
                    report["minima_labels"] = json!(labelled(&cert.minima, parsed.labels()));
                    report["certificate"] = to_value(cert);
                    if let Some(path) = &o.output {
                        write_output(path, &cert.to_json())?;
                    }
                    Status::Ok
                }
                Decomposition::Infeasible(why) => {
                    report["status"] = json!("infeasible");
                    if let (Value::Object(r), Value::Object(w)) = (&mut report, to_value(why)) {
                        r.extend(w);
                    }
                    Status::Fails
                }
                Decomposition::Unknown { nodes } => {
                    report["status"] = json!("unknown");
                    report["nodes"] = json!(nodes);
                    Status::Unknown
                }
            };
            Ok(Outcome::report(status, report))
        }
        Command::Stacked {
            decompose,
            rank,
            input,
        } => {
            let c = load(input)?.complex("stacked")?;
            let p = prime(o, FieldPrime::TWO)?;
            let equiv = is_stacked_equiv_dfold(&c, p);
            let mut report = json!({
                "command": "stacked",
                "input": input,
                "prime": p.get(),
                "report": to_value(&equiv),
            });
            let mut status = Status::holds(equiv.stacked);
            if *decompose {
                let k = rank.expect("clap requires --rank");
                match find_stacked_shelling(&c) {
                    None => {
                        report["decomposition"] = json!({"error": "not stacked"});
                        status = Status::Fails;
                    }
                    Some(shelling) => {
                        let config = solver_config(o)?;
                        match stacked_decomposition(&shelling, k, &config) {
                            Ok(d) => {
                                let mut cert = d.certificate;
                                cert.source = Some(input.clone());
                                if let Some(path) = &o.output {
                                    write_output(path, &cert.to_json())?;
                                }
                                report["decomposition"] = json!({
                                    "used_fallback": d.used_fallback,
                                    "certificate": to_value(&cert),
                                });
                            }
                            Err(e @ crate::stacked::StackedError::RankTooLarge { .. }) => {
                                return Err(InputError::Invalid(e.to_string()))
                            }
                            Err(e @ crate::stacked::StackedError::Unknown { .. }) => {
                                report["decomposition"] = json!({"error": e.to_string()});
                                status = Status::Unknown;
                            }
                            Err(e) => {
                                report["decomposition"] = json!({"error": e.to_string()});
                                status = Status::Fails;
                            }
                        }
                    }
                }
            }
            Ok(Outcome::report(status, report))
        }
        Command::Shift { input } | Command::IteratedBetti { input } => {
            let iterated = matches!(cli.command, Command::IteratedBetti { .. });
            let c = load(input)?.complex("shift")?;
            let p = prime(o, FieldPrime::MERSENNE31)?;
            let seed = effective_seed(o)?;
            let r = match exterior_shift(&c, p, seed, o.trials) {
                Ok(r) => r,
                Err(e) => {
                    return Ok(Outcome::report(
                        Status::Fails,
                        json!({"command": if iterated { "iterated-betti" } else { "shift" },
                               "input": input, "error": e.to_string()}),
                    ))
                }
            };
            let mut report = json!({
                "command": if iterated { "iterated-betti" } else { "shift" },
                "input": input,
                "prime": p.get(),
                "seed": seed,
                "trials": r.trials,
                "vertex_map": r.vertex_map,
                "shifted_facets": r.shifted.facets(),
                "iterated_betti": r.iterated_betti.entries,
            });
            if !iterated {
                report["f_vector"] = json!(r.shifted.f_polynomial().coeffs());
                report["cone_apex_depth"] = json!(cone_apex_depth(&r.shifted).ok());
                report["acyclic"] = json!(is_acyclic(&c, FieldPrime::TWO));
            }
            Ok(Outcome::report(Status::Ok, report))
        }
        Command::Glue {
            along,
            copies,
            input,
        } => {
            let delta = load(input)?.complex("glue")?;
            let gamma = load(along)?.complex("glue")?;
            let glued = glue_copies(&delta, &gamma, *copies)
                .map_err(|e| InputError::Invalid(e.to_string()))?;
            emit_complex(
                o,
                "glue",
                &write_cplx(&glued),
                glued.f_polynomial().coeffs(),
            )
        }
        Command::Builtin { name } => {
            let name = name.strip_prefix("builtin:").unwrap_or(name);
            let (text, f) = match name.parse::<PaperComplex>()?.build() {
                Builtin::Complex(c) => (write_cplx(&c), c.f_polynomial()),
                Builtin::Relative(r) => (write_relative_cplx(&r), r.f_polynomial()),
            };
            emit_complex(o, "builtin", &text, f.coeffs())
        }
        Command::Verify {
            certificate,
            target,
        } => {
            let text = fs::read_to_string(certificate).map_err(|source| InputError::Io {
                path: certificate.display().to_string(),
                source,
            })?;
            let cert = read_certificate(&text)
                .map_err(|e| InputError::Invalid(format!("{}: {e}", certificate.display())))?;
            let spec = target
                .clone()
                .or_else(|| cert.source.clone())
                .ok_or_else(|| {
                    InputError::Invalid("the certificate records no source; pass --target".into())
                })?;
            let t = load(&spec)?.target();
            let check = check_certificate(&cert, &t);
            Ok(Outcome::report(
                Status::holds(check.is_ok()),
                json!({
                    "command": "verify",
                    "certificate": certificate.display().to_string(),
                    "target": spec,
                    "valid": check.is_ok(),
                    "error": check.err().map(|e| e.to_string()),
                }),
            ))
        }
    }
}

/// Accepts a bare certificate or a `decompose`/`stacked` report holding one.
fn read_certificate(text: &str) -> Result<DecompositionCertificate, serde_json::Error> {
    let v: Value = serde_json::from_str(text)?;
    let inner = v
        .get("certificate")
        .or_else(|| v.get("decomposition").and_then(|d| d.get("certificate")))
        .cloned()
        .unwrap_or(v);
    serde_json::from_value(inner)
}

fn emit_complex(o: &Options, command: &str, text: &str, f: &[i64]) -> Result<Outcome, InputError> {
    match &o.output {
        None => Ok(Outcome {
            status: Status::Ok,
            stdout: text.to_owned(),
        }),
        Some(path) => {
            write_output(path, text)?;
            Ok(Outcome::report(
                Status::Ok,
                json!({
                    "command": command,
                    "output": path.display().to_string(),
                    "f_vector": f,
                }),
            ))
        }
    }
}

/// Parses the process arguments, runs the command and maps the outcome to
/// an exit code.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.status.code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
