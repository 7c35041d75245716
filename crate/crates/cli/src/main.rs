mod commands;
mod params;

use clap::{Args, Parser, Subcommand, ValueEnum};
use multitype::error::Error;
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

/// Report schema version; bump when the envelope layout changes.
pub const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "multitype", version, about = "Serre weights, tame types, phi-modules and multitype deformation rings")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Default)]
pub struct Global {
    /// prime(s), comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    pub p: Vec<u64>,
    /// degree(s) of the residue field, comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    pub f: Vec<usize>,
    /// character as a list of pairs, e.g. 5,1,8,1; several separated by ';'
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// I(ρ̄,μ) as signed roots, e.g. +0,-1 or w0
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub irhomu: Option<String>,
    /// root set I
    #[arg(long = "I", global = true, allow_hyphen_values = true)]
    pub i: Option<String>,
    #[arg(long = "prec-N", global = true)]
    pub prec_n: Option<u32>,
    #[arg(long = "prec-M", global = true)]
    pub prec_m: Option<u32>,
    /// half-width w of the tangent window [-w, 2w]
    #[arg(long, global = true)]
    pub window: Option<i64>,
    #[arg(long = "cache-dir", global = true, env = "MULTITYPE_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// JSON file with the same keys as the flags; flags take precedence
    #[arg(long, global = true)]
    pub params: Option<PathBuf>,
    /// include wall-clock timings (reports are then not byte-stable)
    #[arg(long, global = true)]
    pub timings: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// genericity, σ_J, Jordan-Hölder tables of the tame types, W(ρ̄)
    Weights,
    /// graded and integral skeletons of R_{μ,I}, gluing shadows, covering check
    Skeleton,
    /// presentations, quotient table, transversality, multiplicities, gluing sequence
    Defring,
    /// residual module, universal expansion, normal-form round trip
    Phi,
    /// first-order obstruction verdicts
    Tangent {
        /// one direction, e.g. Y_0 or X_0,X_alpha; default: every 0/1 direction
        #[arg(long)]
        t: Option<String>,
    },
    /// build or refresh the decomposition cache
    Oracle,
    /// cache administration
    Cache {
        #[command(subcommand)]
        op: CacheOp,
    },
    /// the acceptance suite over a scope
    CheckAll {
        /// also rerun at doubled precision and on one thread
        #[arg(long)]
        stability: bool,
    },
}

#[derive(Subcommand, Clone, Copy)]
pub enum CacheOp {
    List,
    /// check every entry; recompute one seeded column, or all with --all
    Verify {
        #[arg(long)]
        all: bool,
    },
    Purge,
}

/// A failed run: parameter errors exit with 2, everything else with 1.
#[derive(Debug)]
pub struct Fail {
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl Fail {
    pub fn param(msg: impl Into<String>) -> Fail {
        Fail { code: 2, kind: "param".into(), message: msg.into() }
    }

    pub fn core(e: Error) -> Fail {
        let (code, kind) = match &e {
            Error::Param(_) => (2, "param"),
            Error::NonGeneric(_) => (2, "non_generic"),
            Error::Precondition(_) => (2, "precondition"),
            Error::WindowTooSmall(_) => (2, "window_too_small"),
            Error::AmbientMismatch(_) => (2, "ambient_mismatch"),
            Error::NotInvertible(_) => (1, "not_invertible"),
            Error::Singular(_) => (1, "singular"),
            Error::NonConvergence(_) => (1, "non_convergence"),
            Error::ShapeMismatch(_) => (1, "shape_mismatch"),
            Error::Cache(_) => (1, "cache"),
            Error::Cancelled => (1, "cancelled"),
        };
        Fail { code, kind: kind.into(), message: e.to_string() }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail::core(e)
    }
}

/// Result of a subcommand: the payload and whether its checks passed.
pub struct Outcome {
    pub result: Value,
    pub pass: bool,
    pub timings: Option<Value>,
}

impl Outcome {
    pub fn new(result: Value, pass: bool) -> Outcome {
        Outcome { result, pass, timings: None }
    }
}

fn command_name(c: &Cmd) -> &'static str {
    match c {
        Cmd::Weights => "weights",
        Cmd::Skeleton => "skeleton",
        Cmd::Defring => "defring",
        Cmd::Phi => "phi",
        Cmd::Tangent { .. } => "tangent",
        Cmd::Oracle => "oracle",
        Cmd::Cache { .. } => "cache",
        Cmd::CheckAll { .. } => "check-all",
    }
}

fn parameters(g: &Global) -> Value {
    json!({
        "p": g.p,
        "f": g.f,
        "mu": g.mu,
        "I_rho_mu": g.irhomu,
        "I": g.i,
        "seed": g.seed.unwrap_or(0),
    })
}

fn run(g: &Global, cmd: &Cmd) -> Result<Outcome, Fail> {
    match cmd {
        Cmd::Weights => commands::weights(g),
        Cmd::Skeleton => commands::skeleton(g),
        Cmd::Defring => commands::defring(g),
        Cmd::Phi => commands::phi(g),
        Cmd::Tangent { t } => commands::tangent(g, t.as_deref()),
        Cmd::Oracle => commands::oracle(g),
        Cmd::Cache { op } => commands::cache(g, *op),
        Cmd::CheckAll { stability } => commands::check_all(g, *stability),
    }
}

/// Flat `path = value` lines over the same envelope.
fn render_text(v: &Value, path: &str, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                render_text(x, &if path.is_empty() { k.clone() } else { format!("{path}.{k}") }, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (k, x) in a.iter().enumerate() {
                render_text(x, &format!("{path}[{k}]"), out);
            }
        }
        _ => out.push(format!("{path} = {v}")),
    }
}

fn main() -> ExitCode {
    let mut cli = Cli::parse();
    let start = Instant::now();
    let name = command_name(&cli.cmd);
    let outcome = (|| {
        if let Some(path) = cli.global.params.clone() {
            params::merge_file(&mut cli.global, &path)?;
        }
        if let Some(j) = cli.global.jobs {
            if j == 0 {
                return Err(Fail::param("--jobs must be positive"));
            }
            rayon::ThreadPoolBuilder::new().num_threads(j).build_global().map_err(|e| Fail::param(e.to_string()))?;
        }
        run(&cli.global, &cli.cmd)
    })();
    let g = &cli.global;
    let prec = g.precision();
    let mut env = json!({
        "tool": "multitype",
        "version": env!("CARGO_PKG_VERSION"),
        "schema": SCHEMA,
        "command": name,
        "parameters": parameters(g),
        "precision": { "N": prec.n, "M": prec.m, "window": prec.window },
    });
    let code = match outcome {
        Ok(o) => {
            env["result"] = o.result;
            env["pass"] = json!(o.pass);
            if g.timings {
                env["timings"] = o.timings.unwrap_or_else(|| json!({}));
                env["timings"]["total_seconds"] = json!(start.elapsed().as_secs_f64());
            }
            if o.pass {
                0
            } else {
                1
            }
        }
        Err(f) => {
            env["pass"] = json!(false);
            env["error"] = json!({ "kind": f.kind, "message": f.message, "exit_code": f.code });
            f.code
        }
    };
    let text = match g.format {
        Format::Json => serde_json::to_string_pretty(&env).expect("report serialises"),
        Format::Text => {
            let mut lines = vec![];
            render_text(&env, "", &mut lines);
            lines.join("\n")
        }
    };
    // A closed pipe (e.g. `| head`) is not an error of the computation.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    ExitCode::from(code)
}
