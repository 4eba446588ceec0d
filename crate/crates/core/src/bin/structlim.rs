use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use structlim::analysis::{
    cluster_report, expanding_check, fo1local_equiv, h_out, hall_ratio, ExpanderParams, Fo1Verdict, HoutMode,
    DEFAULT_NODE_BUDGET,
};
use structlim::eval::{Arity, CompiledFormula};
use structlim::generate::{generate, GeneratorSpec};
use structlim::interp::{builtin, Interpretation};
use structlim::lifts::{epsilon_net, lift_hausdorff, LiftMode, LiftParams, DEFAULT_LIFT_BUDGET};
use structlim::logic::{classify, parse};
use structlim::metrics::{ball_distribution_with_limit, dist_bounds, tv_distance, ChainCovering};
use structlim::rational::{self, Exact, Rational};
use structlim::report::{converge_report, load_dir, ConvergeParams};
use structlim::structure::{StructureJson, DEFAULT_CANON_LIMIT};
use structlim::{Error, Structure};

#[derive(Parser)]
#[command(name = "structlim", version, about = "Structural convergence toolkit for finite relational structures")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "STRUCTLIM_THREADS")]
    threads: Option<usize>,
    /// Human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Sampled,
}

#[derive(Args)]
struct LiftArgs {
    #[arg(short = 'r', long, default_value_t = 1)]
    radius: usize,
    /// Mark count; defaults to min(radius, c-max).
    #[arg(short = 'c', long)]
    marks: Option<usize>,
    #[arg(long, default_value_t = 1)]
    c_max: usize,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    /// Exact: cap on enumerated lifts. Sampled: number of draws.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_CANON_LIMIT)]
    canon_limit: usize,
}

impl LiftArgs {
    fn params(&self) -> LiftParams {
        let c = self.marks.unwrap_or(self.radius.min(self.c_max));
        match self.mode {
            Mode::Exact => LiftParams {
                budget: self.budget.unwrap_or(DEFAULT_LIFT_BUDGET),
                canon_limit: self.canon_limit,
                ..LiftParams::exact(self.radius, c)
            },
            Mode::Sampled => LiftParams {
                canon_limit: self.canon_limit,
                ..LiftParams::sampled(self.radius, c, self.budget.unwrap_or(1000), self.seed)
            },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a structure file, optionally with a formula or interpretation.
    Validate {
        #[arg(short = 's', long)]
        structure: Option<PathBuf>,
        #[arg(short = 'f', long)]
        formula: Option<String>,
        #[arg(long)]
        interp: Option<PathBuf>,
    },
    /// Generate a structure from a family spec such as `cycle:8`.
    Gen { spec: String },
    /// Stone pairing and satisfying set of a formula.
    Eval {
        #[arg(short = 's', long)]
        structure: PathBuf,
        #[arg(short = 'f', long)]
        formula: String,
        /// Tuple width; defaults to the largest free variable index.
        #[arg(short = 'p', long)]
        arity: Option<usize>,
        /// Also list the satisfying tuples.
        #[arg(long)]
        tuples: bool,
    },
    /// Bounds on the chain-covering distance of two structures.
    Dist {
        /// Given twice.
        #[arg(short = 's', long, required = true)]
        structure: Vec<PathBuf>,
        #[arg(long, default_value_t = 10)]
        nmax: usize,
        #[arg(long, default_value_t = DEFAULT_CANON_LIMIT)]
        canon_limit: usize,
        /// JSON file `{"levels": [["formula", ...], ...]}` replacing the ball chain.
        #[arg(long)]
        chain: Option<PathBuf>,
    },
    /// Total variation between ball-type distributions.
    Tv {
        /// Given twice.
        #[arg(short = 's', long, required = true)]
        structure: Vec<PathBuf>,
        #[arg(short = 'r', long, default_value_t = 1)]
        radius: usize,
        #[arg(short = 'c', long, default_value_t = 0)]
        marks: usize,
        #[arg(long, default_value_t = DEFAULT_CANON_LIMIT)]
        canon_limit: usize,
    },
    /// Hausdorff distance between lift statistic sets.
    LiftHausdorff {
        /// Given twice.
        #[arg(short = 's', long, required = true)]
        structure: Vec<PathBuf>,
        #[command(flatten)]
        lift: LiftArgs,
    },
    /// Greedy epsilon-net of a lift statistic set.
    EpsNet {
        #[arg(short = 's', long)]
        structure: PathBuf,
        #[arg(long)]
        eps: String,
        #[command(flatten)]
        lift: LiftArgs,
    },
    /// Apply an interpretation to a formula or a structure.
    Interpret {
        #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
        interp: Option<PathBuf>,
        /// identity, shadow, forget:A,B, rename:E=F, mark_reindex:C, complement:E
        #[arg(long)]
        builtin: Option<String>,
        #[arg(long, requires = "formula", conflicts_with = "apply", required_unless_present = "apply")]
        transform: bool,
        #[arg(long, requires = "structure")]
        apply: bool,
        #[arg(short = 'f', long)]
        formula: Option<String>,
        /// Input structure; also supplies the source signature of a builtin.
        #[arg(short = 's', long)]
        structure: Option<PathBuf>,
    },
    /// Component-count equivalence certificate.
    Equiv {
        /// Given twice.
        #[arg(short = 's', long, required = true)]
        structure: Vec<PathBuf>,
    },
    /// Exhaustive (d, eps, delta)-expansion check.
    Expander {
        #[arg(short = 's', long)]
        structure: PathBuf,
        #[arg(short = 'd', long, default_value_t = 1)]
        d: usize,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        delta: String,
    },
    /// Isoperimetric constant h_out.
    Hout {
        #[arg(short = 's', long)]
        structure: PathBuf,
        /// `sampled` runs a seeded local search for an upper bound.
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        /// Local-search restarts.
        #[arg(long, default_value_t = 64)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Independence number over order.
    Hall {
        #[arg(short = 's', long)]
        structure: PathBuf,
        /// Branch-and-bound node budget.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Per-index diagnostics of a marked subset sequence.
    ClusterReport {
        #[arg(short = 's', long, required = true)]
        structure: Vec<PathBuf>,
        /// Mark index k of M_k.
        #[arg(long, default_value_t = 1)]
        mark: usize,
        #[arg(long, default_value_t = 1)]
        dmax: usize,
        /// Profile formulas, evaluated on the marked substructure.
        #[arg(short = 'f', long)]
        formula: Vec<String>,
    },
    /// Pairwise distance tables over a directory of structures.
    ConvergeReport {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, default_value_t = 10)]
        nmax: usize,
        #[command(flatten)]
        lift: LiftArgs,
        /// Skip the lift-Hausdorff tables.
        #[arg(long)]
        no_lifts: bool,
    },
}

/// Exit statuses.
const USAGE: u8 = 1;
const LIMIT: u8 = 2;
const VALIDATION: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::InvalidParameter(_) => USAGE,
        e if e.is_limit() => LIMIT,
        _ => VALIDATION,
    }
}

fn exact(q: &Rational) -> Value {
    serde_json::to_value(Exact::from(q)).expect("serializable")
}

fn load(path: &Path) -> structlim::Result<Structure> {
    Structure::load(path)
}

fn load_pair(paths: &[PathBuf]) -> structlim::Result<(Structure, Structure)> {
    if paths.len() != 2 {
        return Err(Error::InvalidParameter(format!(
            "expected exactly two structures, got {}",
            paths.len()
        )));
    }
    Ok((load(&paths[0])?, load(&paths[1])?))
}

fn rational_arg(text: &str) -> structlim::Result<Rational> {
    rational::parse(text).map_err(|_| Error::InvalidParameter(format!("expected a rational p/q, got `{text}`")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainFile {
    levels: Vec<Vec<String>>,
}

fn run(command: Command) -> structlim::Result<Value> {
    Ok(match command {
        Command::Validate {
            structure,
            formula,
            interp,
        } => {
            let mut out = serde_json::Map::new();
            let s = structure.as_deref().map(load).transpose()?;
            if let Some(s) = &s {
                out.insert("domain".into(), json!(s.domain_size()));
                out.insert("tuples".into(), json!(s.tuple_count()));
                out.insert("signature".into(), json!(s.signature().to_string()));
            }
            if let Some(text) = formula {
                let f = parse(&text)?;
                if let Some(s) = &s {
                    f.check_signature(s.signature())?;
                }
                out.insert("formula".into(), json!(f.to_string()));
            }
            if let Some(path) = interp {
                let i = Interpretation::load(&path)?;
                out.insert("interpretation_width".into(), json!(i.width()));
                out.insert("interpretation_basic".into(), json!(i.is_basic()));
            }
            out.insert("valid".into(), json!(true));
            Value::Object(out)
        }
        Command::Gen { spec } => {
            let spec: GeneratorSpec = spec.parse()?;
            serde_json::to_value(StructureJson::from(&generate(&spec)?))?
        }
        Command::Eval {
            structure,
            formula,
            arity,
            tuples,
        } => {
            let s = load(&structure)?;
            let f = parse(&formula)?;
            let compiled = CompiledFormula::new(s.signature(), &f)?;
            let arity = arity.map_or(Arity::Auto, Arity::Fixed);
            let p = match arity {
                Arity::Auto => compiled.max_free(),
                Arity::Fixed(p) => p,
            };
            let pairing = compiled.pairing(&s, arity)?;
            let mut out = json!({
                "formula": f.to_string(),
                "arity": p,
                "pairing": exact(&pairing),
                "count": compiled.count(&s, p)?.to_string(),
                "fragments": classify(&f).iter().map(ToString::to_string).collect::<Vec<_>>(),
            });
            if tuples {
                out["tuples"] = json!(compiled.sat_set(&s, p)?.tuples());
            }
            out
        }
        Command::Dist {
            structure,
            nmax,
            canon_limit,
            chain,
        } => {
            let (a, b) = load_pair(&structure)?;
            let chain = match chain {
                None => ChainCovering::BallChain { canon_limit },
                Some(path) => {
                    let file: ChainFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
                    let levels = file
                        .levels
                        .iter()
                        .map(|level| level.iter().map(|f| parse(f)).collect())
                        .collect::<structlim::Result<_>>()?;
                    ChainCovering::explicit(levels)?
                }
            };
            serde_json::to_value(dist_bounds(&a, &b, &chain, nmax)?.to_json())?
        }
        Command::Tv {
            structure,
            radius,
            marks,
            canon_limit,
        } => {
            let (a, b) = load_pair(&structure)?;
            let da = ball_distribution_with_limit(&a, radius, marks, canon_limit)?;
            let db = ball_distribution_with_limit(&b, radius, marks, canon_limit)?;
            json!({
                "r": radius,
                "c": marks,
                "tv": exact(&tv_distance(&da, &db)?),
                "distributions": [da.to_json(), db.to_json()],
            })
        }
        Command::LiftHausdorff { structure, lift } => {
            let (a, b) = load_pair(&structure)?;
            let params = lift.params();
            let d = lift_hausdorff(&a, &b, &params)?;
            json!({
                "r": params.r,
                "c": params.c,
                "mode": if params.mode == LiftMode::Exact { "exact" } else { "sampled" },
                "value": exact(&d.value),
                "heuristic": d.heuristic,
                "stat_set_sizes": [d.left_stats, d.right_stats],
            })
        }
        Command::EpsNet { structure, eps, lift } => {
            let s = load(&structure)?;
            let eps = rational_arg(&eps)?;
            let params = lift.params();
            let (net, heuristic) = epsilon_net(&s, &params, &eps)?;
            json!({
                "r": params.r,
                "c": params.c,
                "eps": exact(&eps),
                "size": net.len(),
                "heuristic": heuristic,
                "net": net.iter().map(|d| d.to_json()).collect::<Vec<_>>(),
            })
        }
        Command::Interpret {
            interp,
            builtin: spec,
            transform,
            apply: _,
            formula,
            structure,
        } => {
            let s = structure.as_deref().map(load).transpose()?;
            let i = match (interp, spec) {
                (Some(path), _) => Interpretation::load(&path)?,
                (None, Some(spec)) => {
                    let s = s.as_ref().ok_or_else(|| {
                        Error::InvalidParameter("a builtin interpretation needs -s for its source signature".into())
                    })?;
                    builtin(&spec, s.signature())?
                }
                (None, None) => unreachable!("clap requires one of --interp, --builtin"),
            };
            if transform {
                let f = parse(formula.as_deref().expect("clap requires --formula"))?;
                json!({ "formula": i.transform_formula(&f)?.to_string() })
            } else {
                let s = s.expect("clap requires --structure");
                let (out, classes) = i.apply_with_classes(&s)?;
                json!({ "structure": StructureJson::from(&out), "classes": classes })
            }
        }
        Command::Equiv { structure } => {
            let (a, b) = load_pair(&structure)?;
            match fo1local_equiv(&a, &b)? {
                Fo1Verdict::Equivalent {
                    common,
                    a_copies,
                    b_copies,
                } => json!({
                    "equivalent": true,
                    "common": StructureJson::from(&common),
                    "copies": [a_copies, b_copies],
                }),
                Fo1Verdict::Distinct { radius } => json!({ "equivalent": false, "distinguishing_radius": radius }),
            }
        }
        Command::Expander {
            structure,
            d,
            eps,
            delta,
        } => {
            let s = load(&structure)?;
            let params = ExpanderParams::new(d, rational_arg(&eps)?, rational_arg(&delta)?)?;
            let v = expanding_check(&s, &params)?;
            json!({
                "expanding": v.holds,
                "witness": v.witness.map(|x| x.iter().collect::<Vec<_>>()),
                "inf_ratio": v.inf_ratio.as_ref().map(exact),
            })
        }
        Command::Hout {
            structure,
            mode,
            budget,
            seed,
        } => {
            let s = load(&structure)?;
            let mode = match mode {
                Mode::Exact => HoutMode::Exact,
                Mode::Sampled => HoutMode::LocalSearch {
                    restarts: budget as usize,
                    seed,
                },
            };
            let h = h_out(&s, &mode)?;
            json!({
                "h_out": h.value.as_ref().map(exact),
                "witness": h.witness.map(|x| x.iter().collect::<Vec<_>>()),
                "heuristic": h.heuristic,
            })
        }
        Command::Hall { structure, budget } => {
            let s = load(&structure)?;
            json!({ "hall_ratio": exact(&hall_ratio(&s, budget)?) })
        }
        Command::ClusterReport {
            structure,
            mark,
            dmax,
            formula,
        } => {
            let seq = structure.iter().map(|p| load(p)).collect::<structlim::Result<Vec<_>>>()?;
            let formulas = formula.iter().map(|f| parse(f)).collect::<structlim::Result<Vec<_>>>()?;
            serde_json::to_value(cluster_report(&seq, mark, dmax, &formulas)?.to_json())?
        }
        Command::ConvergeReport {
            dir,
            nmax,
            lift,
            no_lifts,
        } => {
            let structures = load_dir(&dir)?;
            let params = ConvergeParams {
                n_max: nmax,
                chain: ChainCovering::BallChain {
                    canon_limit: lift.canon_limit,
                },
                lift_levels: if no_lifts { vec![] } else { vec![lift.params()] },
            };
            serde_json::to_value(converge_report(&structures, &params)?.to_json())?
        }
    })
}

fn is_exact(v: &Value) -> Option<String> {
    let obj = v.as_object()?;
    if obj.len() != 2 {
        return None;
    }
    let e = obj.get("exact")?.as_str()?;
    let a = obj.get("approx")?.as_f64()?;
    Some(format!("{e} (~{a:.6})"))
}

/// Distance bounds collapse to one cell.
fn is_bounds(v: &Value) -> Option<String> {
    let obj = v.as_object()?;
    let lower = obj.get("lower")?.get("exact")?.as_str()?;
    let upper = obj.get("upper")?.get("exact")?.as_str()?;
    if obj.get("exact")?.as_bool()? {
        Some(lower.to_string())
    } else {
        Some(format!("[{lower},{upper}]"))
    }
}

fn scalar(v: &Value) -> Option<String> {
    if let Some(e) = is_exact(v).or_else(|| is_bounds(v)) {
        return Some(e);
    }
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| matches!(i, Value::Number(_) | Value::String(_))) => Some(
            items.iter().map(|i| scalar(i).unwrap_or_default()).collect::<Vec<_>>().join(" "),
        ),
        _ => None,
    }
}

/// Indented key/value rendering; rows of scalars become table rows.
fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            for (k, item) in map {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}{k:width$}  {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}\n"));
                        render(item, indent + 2, out);
                    }
                }
            }
        }
        Value::Array(rows) => {
            let cells: Option<Vec<Vec<String>>> = rows
                .iter()
                .map(|r| r.as_array().and_then(|r| r.iter().map(scalar).collect()))
                .collect();
            match cells {
                Some(cells) if !cells.is_empty() => {
                    let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
                    for row in cells {
                        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                        out.push_str(&format!("{pad}{}\n", line.join("  ")));
                    }
                }
                _ => {
                    for (i, item) in rows.iter().enumerate() {
                        match scalar(item) {
                            Some(s) => out.push_str(&format!("{pad}[{i}]  {s}\n")),
                            None => {
                                out.push_str(&format!("{pad}[{i}]\n"));
                                render(item, indent + 2, out);
                            }
                        }
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE);
        }
    }
    match run(cli.command) {
        Ok(value) => {
            if cli.pretty {
                let mut out = String::new();
                render(&value, 0, &mut out);
                print!("{out}");
            } else {
                println!("{value}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
