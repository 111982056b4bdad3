//! `ctask`: command-line driver for chromatic complexes, subdivisions,
//! piecewise-affine maps, and distributed decision tasks.
//!
//! Every subcommand reads and writes JSON. Results go to stdout (or the
//! file named by `--out` where available); errors go to stderr as a JSON
//! object `{"error": "..."}`. Exit codes: 0 on success, 1 when a checked
//! property turns out false (a map is not chromatic, a task is refuted, a
//! verification fails), 2 on usage or input errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use chromatic_tasks::approx::{
    chromatic_approximation, verify_chromatic_approximation, ApproxError, ApproxOptions,
    ChromaticApproximation,
};
use chromatic_tasks::apxagree::{self, PreferenceParams};
use chromatic_tasks::chromap::{
    check_chromatic, project_point, Chromaticity, ChromaticityOptions, PAMap, ViolationKind,
};
use chromatic_tasks::complex::{Color, Complex, Simplex, VertexId};
use chromatic_tasks::geometry::Point;
use chromatic_tasks::iis::{enumerate_outcomes, enumerate_round_schedules, DEFAULT_EXECUTION_CAP};
use chromatic_tasks::rational::parse_rational;
use chromatic_tasks::subdivision::{iterate_chromatic, Subdivision};
use chromatic_tasks::task::{
    generate_failsafe_consensus, induced_task, search_decision_map, verify_solution, DecisionMap,
    Order, Task,
};

#[derive(Parser)]
#[command(name = "ctask", version, about = "Chromatic task solvability toolkit")]
struct Cli {
    /// Seed for every randomized procedure; equal seeds give identical output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect chromatic simplicial complexes.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Subdivide a complex and emit the subdivision with its embedding.
    Subdivide {
        /// Complex JSON file.
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Chromatic)]
        method: Method,
        /// Iteration depth; the barycentric method supports depth 1 only.
        #[arg(long, default_value_t = 1)]
        depth: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate, project, and check piecewise-affine maps.
    #[command(subcommand)]
    Map(MapCmd),
    /// Compute and verify chromatic simplicial approximations.
    #[command(subcommand)]
    Approx(ApproxCmd),
    /// Build, verify, refute, and generate decision tasks.
    #[command(subcommand)]
    Task(TaskCmd),
    /// Iterated immediate-snapshot executions and outcome tables.
    #[command(subcommand)]
    Iis(IisCmd),
    /// Approximate agreement from binary preferences.
    #[command(subcommand)]
    Apxagree(ApxCmd),
    /// Re-emit any document in canonical JSON form.
    Export {
        file: PathBuf,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a command described by a manifest file.
    RunManifest { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Chromatic,
    Barycentric,
}

#[derive(Subcommand)]
enum ComplexCmd {
    /// Parse a complex and report its shape; parse failure exits 2.
    Validate { file: PathBuf },
    /// Emit the r-skeleton as a complex of its own.
    Skeleton {
        file: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check graded connectivity of every face link; a witness exits 1.
    LinkConnected { file: PathBuf },
}

#[derive(Subcommand)]
enum MapCmd {
    /// Decide whether a map is chromatic; a violation exits 1.
    CheckChromatic {
        file: PathBuf,
        /// Random points to sample when no exact decision applies.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// Evaluate the map at a point of its domain.
    Evaluate {
        file: PathBuf,
        /// Point JSON, inline or as @path to read from a file.
        #[arg(long)]
        point: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Project away one color, from the whole map or from one image point.
    Project {
        file: PathBuf,
        #[arg(long)]
        color: u32,
        /// With a point: project the image of that point instead of the map.
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ApproxCmd {
    /// Search for a chromatic simplicial approximation; exhaustion exits 1.
    Run {
        /// Map JSON file.
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        min_depth: u32,
        #[arg(long, default_value_t = 4)]
        max_depth: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a decision map against a map it claims to approximate.
    Verify {
        /// Map JSON file.
        file: PathBuf,
        /// Decision JSON file with fields depth and map.
        #[arg(long)]
        decision: PathBuf,
    },
}

#[derive(Subcommand)]
enum TaskCmd {
    /// Derive the task a map solves from its face-image supports.
    Induce {
        /// Map JSON file.
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a decision map against a task; an invalid solution exits 1.
    Verify {
        /// Task JSON file.
        file: PathBuf,
        #[arg(long)]
        decision: PathBuf,
    },
    /// Search for a solution at a fixed depth; refutation exits 1.
    Search {
        /// Task JSON file.
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        depth: u32,
        #[arg(long, value_enum, default_value_t = SearchOrder::Lex)]
        order: SearchOrder,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate consensus with up to k crashing participants allowed to abstain.
    GenFailsafe {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchOrder {
    /// Deterministic smallest-vertex-id-first exploration.
    Lex,
    /// Candidate order shuffled by the global seed.
    Seeded,
}

#[derive(Subcommand)]
enum IisCmd {
    /// Count round schedules and executions and match them against cells.
    Enumerate {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a decision map over every execution and tabulate outcomes.
    Run {
        /// Task JSON file supplying input and output complexes.
        #[arg(long)]
        task: PathBuf,
        /// Decision JSON file with fields depth and map.
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EXECUTION_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ApxCmd {
    /// Solve two-process approximate agreement for slope k and plateau m1.
    Solve {
        /// Required closeness, a rational like 1/2.
        #[arg(long)]
        k: String,
        /// Plateau value in (k, 1), a rational like 3/5.
        #[arg(long)]
        m1: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A stored invocation: the argv tail plus optional inputs, parameters,
/// output path, and seed, assembled back into a command line in that order.
#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    command: Vec<String>,
    #[serde(default)]
    inputs: Vec<String>,
    #[serde(default)]
    parameters: BTreeMap<String, String>,
    #[serde(default)]
    out: Option<String>,
    #[serde(default)]
    seed: Option<u64>,
}

/// What a subcommand produced: the JSON payload, where to write it, and
/// the process exit code (0 success, 1 checked property false).
struct Outcome {
    payload: Value,
    out: Option<PathBuf>,
    code: u8,
}

impl Outcome {
    fn ok(payload: Value, out: Option<PathBuf>) -> Self {
        Outcome { payload, out, code: 0 }
    }

    fn refuted(payload: Value, out: Option<PathBuf>) -> Self {
        Outcome { payload, out, code: 1 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{}", json!({ "error": e.to_string() }));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(outcome) => match emit(&outcome.payload, outcome.out.as_deref()) {
            Ok(()) => ExitCode::from(outcome.code),
            Err(e) => {
                eprintln!("{}", json!({ "error": e }));
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("{}", json!({ "error": e }));
            ExitCode::from(2)
        }
    }
}

fn emit(payload: &Value, out: Option<&Path>) -> Result<(), String> {
    let mut text = serde_json::to_string_pretty(payload).map_err(|e| e.to_string())?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_json(path: &Path) -> Result<Value, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_complex(path: &Path) -> Result<Complex, String> {
    Complex::from_json(&read_json(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_map(path: &Path) -> Result<PAMap, String> {
    PAMap::from_json(&read_json(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_task(path: &Path) -> Result<Task, String> {
    Task::from_json(&read_json(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_decision(path: &Path) -> Result<DecisionMap, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Accepts inline JSON or `@path` indirection for point arguments.
fn parse_point(arg: &str, ambient: &Complex) -> Result<Point, String> {
    let value: Value = match arg.strip_prefix('@') {
        Some(path) => read_json(Path::new(path))?,
        None => serde_json::from_str(arg).map_err(|e| format!("point: {e}"))?,
    };
    Point::from_json(ambient, &value)
}

fn simplex_ids(s: &Simplex) -> Vec<u32> {
    s.vertices().iter().map(|v| v.0).collect()
}

fn run(cli: Cli) -> Result<Outcome, String> {
    let seed = cli.seed;
    match cli.command {
        Command::Complex(cmd) => run_complex(cmd),
        Command::Subdivide { file, method, depth, out } => {
            let base = load_complex(&file)?;
            let s = match method {
                Method::Chromatic => iterate_chromatic(&base, depth),
                Method::Barycentric => {
                    if depth != 1 {
                        return Err("barycentric subdivision supports --depth 1 only".into());
                    }
                    Subdivision::barycentric(&base)
                }
            };
            Ok(Outcome::ok(s.to_json(), out))
        }
        Command::Map(cmd) => run_map(cmd, seed),
        Command::Approx(cmd) => run_approx(cmd),
        Command::Task(cmd) => run_task(cmd, seed),
        Command::Iis(cmd) => run_iis(cmd),
        Command::Apxagree(cmd) => run_apxagree(cmd),
        Command::Export { file, format, out } => {
            if format != "json" {
                return Err(format!("unsupported export format {format:?}"));
            }
            let value = read_json(&file)?;
            Ok(Outcome::ok(canonicalize(&value)?, out))
        }
        Command::RunManifest { file } => {
            let manifest: Manifest = serde_json::from_str(
                &fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?,
            )
            .map_err(|e| format!("{}: {e}", file.display()))?;
            run_manifest(manifest)
        }
    }
}

fn run_complex(cmd: ComplexCmd) -> Result<Outcome, String> {
    match cmd {
        ComplexCmd::Validate { file } => {
            let c = load_complex(&file)?;
            let payload = json!({
                "vertices": c.vertices().count(),
                "facets": c.facets().len(),
                "dimension": c.dimension(),
                "pure": c.is_pure(),
            });
            Ok(Outcome::ok(payload, None))
        }
        ComplexCmd::Skeleton { file, dim, out } => {
            let c = load_complex(&file)?;
            let skeleton = c.skeleton(dim).map_err(|e| e.to_string())?;
            Ok(Outcome::ok(skeleton.to_json(), out))
        }
        ComplexCmd::LinkConnected { file } => {
            let c = load_complex(&file)?;
            let verdict = c.is_link_connected().map_err(|e| e.to_string())?;
            match verdict.witness {
                None => Ok(Outcome::ok(json!({ "connected": true }), None)),
                Some(w) => Ok(Outcome::refuted(
                    json!({ "connected": false, "witness": simplex_ids(&w) }),
                    None,
                )),
            }
        }
    }
}

fn run_map(cmd: MapCmd, seed: u64) -> Result<Outcome, String> {
    match cmd {
        MapCmd::CheckChromatic { file, samples } => {
            let f = load_map(&file)?;
            let options = ChromaticityOptions { samples, seed };
            match check_chromatic(&f, &options) {
                Chromaticity::Chromatic { certificate } => {
                    let witness = certificate.map(|w| {
                        w.iter().map(|(v, u)| (v.0.to_string(), u.0)).collect::<BTreeMap<_, _>>()
                    });
                    Ok(Outcome::ok(
                        json!({ "verdict": "chromatic", "witness": witness }),
                        None,
                    ))
                }
                Chromaticity::NoViolationFound { samples } => Ok(Outcome::ok(
                    json!({ "verdict": "no_violation_found", "samples": samples }),
                    None,
                )),
                Chromaticity::Violation(v) => {
                    let kind = match v.kind {
                        ViolationKind::NoSharedColor => json!("no_shared_color"),
                        ViolationKind::UncoveredColor(c) => json!({ "uncovered_color": c.0 }),
                    };
                    Ok(Outcome::refuted(
                        json!({
                            "verdict": "violation",
                            "at": v.at.to_json(),
                            "region_colors": v.region_colors.iter().map(|c| c.0).collect::<Vec<_>>(),
                            "image_colors": v.image_colors.iter().map(|c| c.0).collect::<Vec<_>>(),
                            "kind": kind,
                        }),
                        None,
                    ))
                }
            }
        }
        MapCmd::Evaluate { file, point, out } => {
            let f = load_map(&file)?;
            let x = parse_point(&point, f.domain().base())?;
            let y = f.evaluate(&x).map_err(|e| e.to_string())?;
            Ok(Outcome::ok(y.to_json(), out))
        }
        MapCmd::Project { file, color, point, out } => {
            let f = load_map(&file)?;
            match point {
                Some(arg) => {
                    let x = parse_point(&arg, f.domain().base())?;
                    let y = f.evaluate(&x).map_err(|e| e.to_string())?;
                    let projected =
                        project_point(f.codomain(), &y, Color(color)).map_err(|e| e.to_string())?;
                    Ok(Outcome::ok(projected.to_json(), out))
                }
                None => {
                    let mut images = BTreeMap::new();
                    for v in f.domain().complex().vertices() {
                        let projected =
                            project_point(f.codomain(), f.image_of_vertex(v.id), Color(color))
                                .map_err(|e| e.to_string())?;
                        images.insert(v.id, projected);
                    }
                    let g = PAMap::new(f.domain().clone(), f.codomain().clone(), images)
                        .map_err(|e| e.to_string())?;
                    Ok(Outcome::ok(g.to_json(), out))
                }
            }
        }
    }
}

fn run_approx(cmd: ApproxCmd) -> Result<Outcome, String> {
    match cmd {
        ApproxCmd::Run { file, min_depth, max_depth, out } => {
            let f = load_map(&file)?;
            let options = ApproxOptions { min_depth, max_depth };
            match chromatic_approximation(&f, &options) {
                Ok(approx) => {
                    let decision = DecisionMap { depth: approx.depth, map: approx.assignment };
                    Ok(Outcome::ok(
                        serde_json::to_value(&decision).map_err(|e| e.to_string())?,
                        out,
                    ))
                }
                Err(ApproxError::DepthExhausted { max_depth }) => Ok(Outcome::refuted(
                    json!({ "failed": "depth_exhausted", "max_depth": max_depth }),
                    out,
                )),
                Err(e) => Err(e.to_string()),
            }
        }
        ApproxCmd::Verify { file, decision } => {
            let f = load_map(&file)?;
            let decision = load_decision(&decision)?;
            match rebuild_approximation(&f, &decision) {
                Ok(approx) => {
                    let verified =
                        verify_chromatic_approximation(&f, &approx).map_err(|e| e.to_string())?;
                    let payload = json!({ "verified": verified });
                    if verified {
                        Ok(Outcome::ok(payload, None))
                    } else {
                        Ok(Outcome::refuted(payload, None))
                    }
                }
                Err(reason) => Ok(Outcome::refuted(
                    json!({ "verified": false, "reason": reason }),
                    None,
                )),
            }
        }
    }
}

/// A decision file only stores depth and vertex images; the subdivision and
/// its realization are rebuilt here before verification.
fn rebuild_approximation(
    f: &PAMap,
    decision: &DecisionMap,
) -> Result<ChromaticApproximation, String> {
    let s = iterate_chromatic(f.domain().base(), decision.depth);
    let realization = PAMap::realize_simplicial(s.clone(), f.codomain(), &decision.map)
        .map_err(|e| e.to_string())?;
    Ok(ChromaticApproximation {
        depth: decision.depth,
        subdivision: s,
        assignment: decision.map.clone(),
        realization,
    })
}

fn run_task(cmd: TaskCmd, seed: u64) -> Result<Outcome, String> {
    match cmd {
        TaskCmd::Induce { file, out } => {
            let f = load_map(&file)?;
            Ok(Outcome::ok(induced_task(&f).to_json(), out))
        }
        TaskCmd::Verify { file, decision } => {
            let task = load_task(&file)?;
            let decision = load_decision(&decision)?;
            let s = iterate_chromatic(task.input(), decision.depth);
            let valid = verify_solution(&task, &s, &decision).map_err(|e| e.to_string())?;
            let payload = json!({ "valid": valid });
            if valid {
                Ok(Outcome::ok(payload, None))
            } else {
                Ok(Outcome::refuted(payload, None))
            }
        }
        TaskCmd::Search { file, depth, order, out } => {
            let task = load_task(&file)?;
            let s = iterate_chromatic(task.input(), depth);
            let order = match order {
                SearchOrder::Lex => Order::Lexicographic,
                SearchOrder::Seeded => Order::Seeded(seed),
            };
            match search_decision_map(&task, &s, order).map_err(|e| e.to_string())? {
                Some(decision) => Ok(Outcome::ok(
                    serde_json::to_value(&decision).map_err(|e| e.to_string())?,
                    out,
                )),
                None => Ok(Outcome::refuted(json!({ "refuted_at_depth": depth }), out)),
            }
        }
        TaskCmd::GenFailsafe { n, k, out } => {
            let task = generate_failsafe_consensus(n, k).map_err(|e| e.to_string())?;
            Ok(Outcome::ok(task.to_json(), out))
        }
    }
}

fn run_iis(cmd: IisCmd) -> Result<Outcome, String> {
    match cmd {
        IisCmd::Enumerate { n, r, out } => {
            if n == 0 {
                return Err("need at least one process".into());
            }
            let vertices: Vec<_> = (0..n)
                .map(|p| chromatic_tasks::complex::vertex(p, p, &format!("p{}", p + 1)))
                .collect();
            let facet: Vec<VertexId> = (0..n).map(VertexId).collect();
            let base = Complex::build(vertices, vec![facet]).map_err(|e| e.to_string())?;
            let participants = base.simplex_colors(&base.facets()[0]);
            let schedules = enumerate_round_schedules(&participants);
            let executions = (schedules.len() as u64).pow(r);
            let cells = iterate_chromatic(&base, r).complex().facets().len() as u64;
            let listed: Vec<Value> = schedules
                .iter()
                .map(|s| {
                    Value::Array(
                        s.blocks()
                            .iter()
                            .map(|b| {
                                Value::Array(b.iter().map(|c| json!(c.0)).collect())
                            })
                            .collect(),
                    )
                })
                .collect();
            Ok(Outcome::ok(
                json!({
                    "processes": n,
                    "rounds": r,
                    "schedules": listed,
                    "executions": executions,
                    "cells": cells,
                    "bijective": executions == cells,
                }),
                out,
            ))
        }
        IisCmd::Run { task, solution, cap, out } => {
            let task = load_task(&task)?;
            let decision = load_decision(&solution)?;
            let table = enumerate_outcomes(
                task.input(),
                decision.depth,
                &decision,
                task.output(),
                cap,
            )
            .map_err(|e| e.to_string())?;
            Ok(Outcome::ok(table.to_json(), out))
        }
    }
}

fn run_apxagree(cmd: ApxCmd) -> Result<Outcome, String> {
    match cmd {
        ApxCmd::Solve { k, m1, out } => {
            let k = parse_rational(&k).map_err(|e| format!("--k: {e}"))?;
            let m1 = parse_rational(&m1).map_err(|e| format!("--m1: {e}"))?;
            let params = PreferenceParams::new(k, m1).map_err(|e| e.to_string())?;
            match apxagree::solve(&params) {
                Ok((decision, report)) => Ok(Outcome::ok(
                    json!({
                        "decision": serde_json::to_value(&decision).map_err(|e| e.to_string())?,
                        "report": report.to_json(),
                    }),
                    out,
                )),
                Err(e @ chromatic_tasks::apxagree::ApxError::GuaranteeViolated(_)) => Ok(
                    Outcome::refuted(json!({ "guarantee_violated": e.to_string() }), out),
                ),
                Err(e) => Err(e.to_string()),
            }
        }
    }
}

/// Detects the document kind by its top-level keys, revalidates through the
/// typed parser, and re-emits the canonical serialization.
fn canonicalize(value: &Value) -> Result<Value, String> {
    let object = value.as_object().ok_or("expected a JSON object")?;
    let has = |k: &str| object.contains_key(k);
    if has("vertices") && has("facets") {
        return Ok(Complex::from_json(value)?.to_json());
    }
    if has("base") && has("complex") {
        return Ok(Subdivision::from_json(value)?.to_json());
    }
    if has("input") && has("output") && has("delta") {
        return Ok(Task::from_json(value)?.to_json());
    }
    if has("domain") && has("codomain") {
        return Ok(PAMap::from_json(value)?.to_json());
    }
    if has("depth") && has("map") {
        let decision: DecisionMap =
            serde_json::from_value(value.clone()).map_err(|e| e.to_string())?;
        return serde_json::to_value(&decision).map_err(|e| e.to_string());
    }
    Err("unrecognized document kind".into())
}

fn run_manifest(manifest: Manifest) -> Result<Outcome, String> {
    if manifest.command.first().map(String::as_str) == Some("run-manifest") {
        return Err("manifests cannot invoke run-manifest".into());
    }
    let mut argv: Vec<String> = vec!["ctask".into()];
    argv.extend(manifest.command);
    argv.extend(manifest.inputs);
    for (name, value) in manifest.parameters {
        argv.push(format!("--{name}"));
        argv.push(value);
    }
    if let Some(out) = manifest.out {
        argv.push("--out".into());
        argv.push(out);
    }
    if let Some(seed) = manifest.seed {
        argv.push("--seed".into());
        argv.push(seed.to_string());
    }
    let cli = Cli::try_parse_from(&argv).map_err(|e| format!("manifest: {e}"))?;
    run(cli)
}
