//! Command-line front end. Every command produces a JSON report whose
//! `canonical` section depends only on the inputs and flags; wall time is
//! kept outside it.
//!
//! Exit codes: 0 normal, 10 obstruction found, 20 budget exceeded or
//! inconclusive, 2 input error.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::biset::BisetMachine;
use crate::complex::{build_truncation, delta_estimate, ComplexGraph, DeltaMode, EdgeKind};
use crate::contraction::{
    contraction_ratio_estimate, levy_search, nucleus, verify_closure, Budget, ContractionStatus, LevyOptions,
    LevyWitness, RatioOptions, WitnessKind,
};
use crate::group::ModelKind;
use crate::subdivision::{mesh_search, tile_graph, Contact, SubdivisionRule};
use crate::torus::{classify, sweep, torus_biset, unit_eigen_witness, IntMatrix2, TorusKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OBSTRUCTION: i32 = 10;
pub const EXIT_INCONCLUSIVE: i32 = 20;
pub const EXIT_INPUT: i32 = 2;

const FREE_MODEL_CAVEAT: &str = "computed in the free group model; whether the verdict transfers to an orbifold \
                                 fundamental group with torsion is not decided";
const BUDGET_CAVEAT: &str = "budget exceeded: inconclusive, not a proof of non-contraction";
const TRUNCATION_CAVEAT: &str = "distances and delta are those of the finite truncation, which is not \
                                 isometrically embedded in the full complex";
const TILE_CAVEAT: &str = "the tile-adjacency graph is a combinatorial stand-in for a cover-based complex";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "selfsim", version, about = "Bisets, nucleus closure, self-similarity complexes and subdivision rules")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Clone)]
pub struct BudgetArgs {
    #[arg(long, default_value_t = 500)]
    pub max_size: usize,
    #[arg(long, default_value_t = 50)]
    pub max_len: usize,
    #[arg(long, default_value_t = 30)]
    pub max_iter: usize,
    /// Largest restriction depth tried by the closure.
    #[arg(long, default_value_t = 4)]
    pub max_level: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Result<Budget, String> {
        let b = Budget {
            max_nucleus_size: self.max_size,
            max_element_length: self.max_len,
            max_depth: self.max_iter,
            max_level: self.max_level,
        };
        if b.is_valid() {
            Ok(b)
        } else {
            Err("budgets must be positive".into())
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Nucleus closure.
    Contract {
        machine: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Search for g · w = w · g with g nontrivial.
    Levy {
        machine: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_g: usize,
        #[arg(long, default_value_t = 4)]
        max_w: usize,
        /// Defaults to four times --max-w.
        #[arg(long)]
        cycle_depth: Option<usize>,
    },
    /// Contraction ratio estimates for depths 1..=depth.
    Ratio {
        machine: PathBuf,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value_t = 16)]
        length: usize,
        #[arg(long, default_value_t = 50_000)]
        samples: usize,
        #[arg(long, default_value_t = 200_000)]
        exhaustive_limit: usize,
    },
    /// Truncation of the self-similarity complex.
    Complex {
        machine: PathBuf,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// `exhaustive` or `samples=K[,seed=S]`.
        #[arg(long)]
        delta: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        max_vertices: usize,
    },
    /// Torus endomorphisms.
    #[command(args_conflicts_with_subcommands = true)]
    Torus {
        #[command(subcommand)]
        sweep: Option<TorusCommand>,
        /// Entries `a,b,c,d` of [[a, b], [c, d]].
        #[arg(long, allow_hyphen_values = true)]
        matrix: Option<String>,
        #[arg(long)]
        emit_biset: Option<PathBuf>,
    },
    /// Finite subdivision rules.
    Fsr {
        #[command(subcommand)]
        command: FsrCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum TorusCommand {
    /// Compare the spectral classes with nucleus closure and the Levy search.
    Sweep {
        #[arg(long, default_value_t = 3)]
        range: i64,
        #[arg(long, default_value_t = 9)]
        det_max: i64,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, default_value_t = 8)]
        max_g: usize,
        #[arg(long, default_value_t = 4)]
        max_w: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum FsrCommand {
    /// Smallest level at which the mesh conditions hold.
    Check {
        rule: PathBuf,
        #[arg(long, default_value_t = 5)]
        max_n: usize,
    },
    /// Tile-adjacency graph of levels 0..=levels.
    Graph {
        rule: PathBuf,
        #[arg(long, default_value_t = 2)]
        levels: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "vertex")]
        contact: ContactArg,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        max_vertices: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ContactArg {
    Vertex,
    Edge,
}

/// What a command produced: an exit code and the text for `--out` or
/// standard output.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

struct Report {
    command: &'static str,
    digest: String,
    config: Value,
    result: Value,
    caveats: Vec<String>,
    code: i32,
    graph: Option<ComplexGraph>,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read_input(path: &Path) -> Result<(String, String), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let d = digest(text.as_bytes());
    Ok((text, d))
}

fn load_machine(path: &Path) -> Result<(BisetMachine, String), String> {
    let (text, d) = read_input(path)?;
    let m = BisetMachine::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((m, d))
}

fn load_rule(path: &Path) -> Result<(SubdivisionRule, String), String> {
    let (text, d) = read_input(path)?;
    let r = SubdivisionRule::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((r, d))
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn model_caveats(m: &BisetMachine) -> Vec<String> {
    if m.model().kind() == ModelKind::Free {
        vec![FREE_MODEL_CAVEAT.to_string()]
    } else {
        Vec::new()
    }
}

fn witness_json(m: &BisetMachine, w: &LevyWitness) -> Value {
    let orbit: Option<Vec<String>> = match &w.kind {
        WitnessKind::ExactFixed => None,
        WitnessKind::RestrictionCycle { orbit } => Some(orbit.iter().map(|g| m.model().format(g)).collect()),
    };
    json!({
        "element": m.model().format(&w.element),
        "word": m.alphabet().format_word(&w.word),
        "kind": match w.kind { WitnessKind::ExactFixed => "exact_fixed", WitnessKind::RestrictionCycle { .. } => "restriction_cycle" },
        "orbit": orbit,
        "replays": w.replay(m),
    })
}

fn parse_delta(spec: &str, seed: u64) -> Result<DeltaMode, String> {
    if spec == "exhaustive" {
        return Ok(DeltaMode::Exhaustive);
    }
    let mut samples = None;
    let mut seed = seed;
    for part in spec.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("bad --delta '{spec}'"))?;
        let n: u64 = v.parse().map_err(|_| format!("bad number in --delta '{spec}'"))?;
        match k {
            "samples" => samples = Some(n as usize),
            "seed" => seed = n,
            _ => return Err(format!("unknown --delta key '{k}'")),
        }
    }
    let samples = samples.ok_or_else(|| format!("--delta '{spec}' needs samples=K"))?;
    Ok(DeltaMode::Sampled { samples, seed })
}

fn graph_summary(g: &ComplexGraph) -> Value {
    json!({
        "vertices": g.vertex_count(),
        "level_counts": g.level_counts(),
        "horizontal_edges": g.edges_of_kind(EdgeKind::Horizontal).count(),
        "vertical_edges": g.edges_of_kind(EdgeKind::Vertical).count(),
    })
}

fn run_command(cfg: &RunConfig) -> Result<Report, String> {
    match &cfg.command {
        Command::Contract { machine, budget } => {
            let b = budget.budget()?;
            let (m, d) = load_machine(machine)?;
            let r = nucleus(&m, &b);
            let fmt = |v: &[crate::group::GroupElement]| v.iter().map(|g| m.model().format(g)).collect::<Vec<_>>();
            let closure_verified = (r.status == ContractionStatus::Contracting)
                .then(|| verify_closure(&m, &r.nucleus, r.level).is_ok());
            let mut caveats = model_caveats(&m);
            let code = match r.status {
                ContractionStatus::Contracting => EXIT_OK,
                ContractionStatus::ObstructionFound => EXIT_OBSTRUCTION,
                ContractionStatus::BudgetExceeded => {
                    caveats.push(BUDGET_CAVEAT.to_string());
                    EXIT_INCONCLUSIVE
                }
            };
            Ok(Report {
                command: "contract",
                digest: d,
                config: json!({ "budget": b }),
                result: json!({
                    "status": r.status,
                    "level": r.level,
                    "nucleus": fmt(&r.nucleus),
                    "nucleus_size": r.nucleus.len(),
                    "recurrent": fmt(&r.recurrent),
                    "closure_verified": closure_verified,
                    "witness": r.witness.as_ref().map(|w| witness_json(&m, w)),
                    "stats": r.stats,
                }),
                caveats,
                code,
                graph: None,
            })
        }
        Command::Levy { machine, max_g, max_w, cycle_depth } => {
            if *max_g == 0 || *max_w == 0 {
                return Err("--max-g and --max-w must be positive".into());
            }
            let mut opts = LevyOptions::new(*max_g, *max_w);
            if let Some(c) = cycle_depth {
                opts.cycle_depth = *c;
            }
            let (m, d) = load_machine(machine)?;
            let w = levy_search(&m, &opts);
            Ok(Report {
                command: "levy",
                digest: d,
                config: json!({ "levy": opts }),
                result: json!({ "witness": w.as_ref().map(|w| witness_json(&m, w)) }),
                caveats: model_caveats(&m),
                code: if w.is_some() { EXIT_OBSTRUCTION } else { EXIT_OK },
                graph: None,
            })
        }
        Command::Ratio { machine, depth, length, samples, exhaustive_limit } => {
            if *depth == 0 || *length < 2 {
                return Err("--depth must be ≥ 1 and --length ≥ 2".into());
            }
            let (m, d) = load_machine(machine)?;
            let opts = RatioOptions { exhaustive_limit: *exhaustive_limit, samples: *samples, seed: cfg.seed };
            let table: Vec<Value> = (1..=*depth)
                .map(|n| {
                    let e = contraction_ratio_estimate(&m, n, *length, &opts);
                    json!({
                        "depth": n,
                        "max_ratio": e.max_ratio.to_string(),
                        "estimate": e.estimate,
                        "exact": e.exact.map(|r| r.to_string()),
                        "argmax": e.argmax.as_ref().map(|g| m.model().format(g)),
                        "examined": e.examined,
                        "in_domain": e.in_domain,
                        "sampling": e.sampling,
                        "inconclusive": e.inconclusive,
                        "degenerate": e.degenerate,
                    })
                })
                .collect();
            let inconclusive = table.iter().any(|r| r["inconclusive"] == json!(true));
            let mut caveats = model_caveats(&m);
            caveats.push("per-depth ratios are reported without extrapolation".into());
            Ok(Report {
                command: "ratio",
                digest: d,
                config: json!({ "depth": depth, "length": length, "ratio": opts }),
                result: json!({ "table": table }),
                caveats,
                code: if inconclusive { EXIT_INCONCLUSIVE } else { EXIT_OK },
                graph: None,
            })
        }
        Command::Complex { machine, levels, dot, json: json_out, delta, max_vertices } => {
            let (m, d) = load_machine(machine)?;
            let g = build_truncation(&m, *levels, *max_vertices).map_err(|e| e.to_string())?;
            let mode = delta.as_deref().map(|s| parse_delta(s, cfg.seed)).transpose()?;
            let delta_table = match mode {
                Some(mode) => {
                    let mut rows = Vec::new();
                    for k in 0..=*levels {
                        let gk = build_truncation(&m, k, *max_vertices).map_err(|e| e.to_string())?;
                        let p = delta_estimate(&gk, mode).map_err(|e| e.to_string())?;
                        rows.push(json!({ "level": k, "probe": p }));
                    }
                    Some(rows)
                }
                None => None,
            };
            if let Some(p) = dot {
                write_file(p, &g.to_dot())?;
            }
            if let Some(p) = json_out {
                write_file(p, &g.to_json())?;
            }
            let mut caveats = model_caveats(&m);
            caveats.push(TRUNCATION_CAVEAT.into());
            Ok(Report {
                command: "complex",
                digest: d,
                config: json!({ "levels": levels, "delta": mode, "max_vertices": max_vertices }),
                result: json!({ "graph": graph_summary(&g), "delta_table": delta_table }),
                caveats,
                code: EXIT_OK,
                graph: Some(g),
            })
        }
        Command::Torus { sweep: Some(TorusCommand::Sweep { range, det_max, budget, max_g, max_w }), .. } => {
            let b = budget.budget()?;
            let levy = LevyOptions::new(*max_g, *max_w);
            let r = sweep(*range, *det_max, &b, &levy);
            let key = format!("sweep {range} {det_max}");
            Ok(Report {
                command: "torus sweep",
                digest: digest(key.as_bytes()),
                config: json!({ "range": range, "det_max": det_max, "budget": b, "levy": levy }),
                result: serde_json::to_value(&r).expect("sweep serializes"),
                caveats: Vec::new(),
                code: EXIT_OK,
                graph: None,
            })
        }
        Command::Torus { sweep: None, matrix, emit_biset } => {
            let text = matrix.as_deref().ok_or("torus needs --matrix a,b,c,d or the sweep subcommand")?;
            let a = IntMatrix2::parse(text).map_err(|e| e.to_string())?;
            let class = classify(&a).map_err(|e| e.to_string())?;
            let witness = unit_eigen_witness(&a).map_err(|e| e.to_string())?;
            let tb = torus_biset(&a).map_err(|e| e.to_string())?;
            if let Some(p) = emit_biset {
                write_file(p, &tb.machine.to_json())?;
            }
            let entries = a.entries();
            let key = format!("{},{},{},{}", entries[0], entries[1], entries[2], entries[3]);
            let reps: Vec<[i64; 2]> = tb.reps.clone();
            Ok(Report {
                command: "torus",
                digest: digest(key.as_bytes()),
                config: json!({ "matrix": entries }),
                result: json!({
                    "class": class,
                    "witness": witness,
                    "expanding": class.kind == TorusKind::Expanding,
                    "coset_representatives": reps,
                }),
                caveats: Vec::new(),
                code: if witness.is_some() { EXIT_OBSTRUCTION } else { EXIT_OK },
                graph: None,
            })
        }
        Command::Fsr { command: FsrCommand::Check { rule, max_n } } => {
            if *max_n == 0 {
                return Err("--max-n must be ≥ 1".into());
            }
            let (r, d) = load_rule(rule)?;
            let c0 = r.initial_complex().map_err(|e| e.to_string())?;
            let s = mesh_search(&r, &c0, *max_n).map_err(|e| e.to_string())?;
            let mut caveats = Vec::new();
            if s.level.is_none() {
                caveats.push(format!("no passing level up to {max_n}: inconclusive, the condition is existential in n"));
            }
            Ok(Report {
                command: "fsr check",
                digest: d,
                config: json!({ "max_n": max_n }),
                result: serde_json::to_value(&s).expect("mesh report serializes"),
                caveats,
                code: if s.level.is_some() { EXIT_OK } else { EXIT_INCONCLUSIVE },
                graph: None,
            })
        }
        Command::Fsr { command: FsrCommand::Graph { rule, levels, dot, json: json_out, contact, delta, max_vertices } } => {
            let (r, d) = load_rule(rule)?;
            let c0 = r.initial_complex().map_err(|e| e.to_string())?;
            let contact = match contact {
                ContactArg::Vertex => Contact::Vertex,
                ContactArg::Edge => Contact::Edge,
            };
            let g = tile_graph(&r, &c0, *levels, contact, *max_vertices).map_err(|e| e.to_string())?;
            let mode = delta.as_deref().map(|s| parse_delta(s, cfg.seed)).transpose()?;
            let probe = mode.map(|m| delta_estimate(&g, m)).transpose().map_err(|e| e.to_string())?;
            if let Some(p) = dot {
                write_file(p, &g.to_dot())?;
            }
            if let Some(p) = json_out {
                write_file(p, &g.to_json())?;
            }
            Ok(Report {
                command: "fsr graph",
                digest: d,
                config: json!({ "levels": levels, "contact": contact, "delta": mode, "max_vertices": max_vertices }),
                result: json!({ "graph": graph_summary(&g), "delta": probe }),
                caveats: vec![TILE_CAVEAT.into(), TRUNCATION_CAVEAT.into()],
                code: EXIT_OK,
                graph: Some(g),
            })
        }
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        other => {
            out.push_str(prefix);
            out.push_str(": ");
            out.push_str(&other.to_string());
            out.push('\n');
        }
    }
}

/// The report's `canonical` section.
pub fn canonical(command: &str, digest: &str, seed: u64, config: &Value, result: &Value, caveats: &[String]) -> Value {
    let mut config = config.clone();
    config["seed"] = json!(seed);
    json!({
        "tool": "selfsim",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "input_digest": digest,
        "config": config,
        "result": result,
        "caveats": caveats,
    })
}

pub fn dispatch(cfg: &RunConfig) -> Outcome {
    let start = Instant::now();
    let report = match run_command(cfg) {
        Ok(r) => r,
        Err(e) => return Outcome { code: EXIT_INPUT, output: format!("error: {e}\n") },
    };
    let canon = canonical(report.command, &report.digest, cfg.seed, &report.config, &report.result, &report.caveats);
    let output = match cfg.format {
        Format::Json => {
            let envelope = json!({ "canonical": canon, "wall_time_ms": start.elapsed().as_millis() as u64 });
            let mut s = serde_json::to_string_pretty(&envelope).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            flatten("", &canon, &mut s);
            s
        }
        Format::Dot => match &report.graph {
            Some(g) => g.to_dot(),
            None => {
                return Outcome {
                    code: EXIT_INPUT,
                    output: format!("error: --format dot applies to graph commands, not '{}'\n", report.command),
                }
            }
        },
    };
    if let Some(path) = &cfg.out {
        if let Err(e) = write_file(path, &output) {
            return Outcome { code: EXIT_INPUT, output: format!("error: {e}\n") };
        }
        return Outcome { code: report.code, output: String::new() };
    }
    Outcome { code: report.code, output }
}

/// Parses arguments and runs. Argument errors map to exit code 2.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(cfg) => dispatch(&cfg),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            Outcome { code, output: e.to_string() }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_flag_parses() {
        assert_eq!(parse_delta("exhaustive", 3).unwrap(), DeltaMode::Exhaustive);
        assert_eq!(parse_delta("samples=10", 3).unwrap(), DeltaMode::Sampled { samples: 10, seed: 3 });
        assert_eq!(parse_delta("samples=10,seed=9", 3).unwrap(), DeltaMode::Sampled { samples: 10, seed: 9 });
        assert!(parse_delta("seed=9", 3).is_err());
        assert!(parse_delta("samples=x", 3).is_err());
    }

    #[test]
    fn torus_matrix_report() {
        let o = run(["selfsim", "torus", "--matrix", "3,1,1,1"]);
        assert_eq!(o.code, EXIT_OK);
        let v: Value = serde_json::from_str(&o.output).unwrap();
        assert_eq!(v["canonical"]["result"]["class"]["kind"], "hyperbolic_not_expanding");
    }

    #[test]
    fn negative_entries_parse() {
        let o = run(["selfsim", "torus", "--matrix", "-2,1,-1,-2"]);
        assert_eq!(o.code, EXIT_OK, "{}", o.output);
    }

    #[test]
    fn missing_file_is_input_error() {
        let o = run(["selfsim", "contract", "/nonexistent/machine.json"]);
        assert_eq!(o.code, EXIT_INPUT);
        assert!(o.output.starts_with("error:"));
    }

    #[test]
    fn dot_needs_a_graph() {
        let o = run(["selfsim", "torus", "--matrix", "2,0,0,2", "--format", "dot"]);
        assert_eq!(o.code, EXIT_INPUT);
    }

    #[test]
    fn text_is_a_projection() {
        let o = run(["selfsim", "torus", "--matrix", "2,0,1,1", "--format", "text"]);
        assert!(o.output.contains("result.class.kind: \"unit_eigenvalue\""));
        assert!(o.output.contains("result.witness: [0,1]"));
    }
}
