//! `overfull`: generate graphs, classify them, and run the regularize and
//! decompose pipeline.
//!
//! Exit status is 0 when a command completes (or its verdict passes), 2 for a
//! structured analytic failure, and 1 for usage and I/O errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use overfull_core::decompose::{parse_fraction, run_pipeline, Outcome};
use overfull_core::edge_color::{check_proper, chromatic_index_exact, parity_check, EdgeColoring};
use overfull_core::overfull::{
    conjecture_verdict, find_delta_overfull_subgraph, is_edge_chromatic_critical, CRITICAL_EDGE_CAP,
};
use overfull_core::{degree_seq, generators, Error, Fraction, Multigraph};

#[derive(Parser)]
#[command(name = "overfull", version, about = "Overfull subgraphs, chromatic index and Δ-edge-colorings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph file.
    Gen {
        #[arg(value_enum)]
        kind: Kind,
        /// Sizes for the generator, e.g. `6` for complete or `8 4` for circulant.
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Chromatic index, overfull subgraphs, criticality and the conjecture verdict.
    Classify {
        #[arg(long)]
        input: PathBuf,
        /// Skip the exponential checks above this many vertices.
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        /// ε in the hypothesis Δ ≥ (1 − ε)n.
        #[arg(long, default_value = "1/3")]
        eps: String,
    },
    /// Regularize and decompose, emitting a verified Δ-edge-coloring.
    Pipeline {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        eta: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Allow fallbacks outside the analytic route when a step gets stuck.
        #[arg(long)]
        rescue: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Complete,
    CompleteMinusMatching,
    CompleteBipartite,
    Cycle,
    Circulant,
    NearRegular,
    Petersen,
    PetersenMinusVertex,
    Random,
}

/// Usage or I/O problem: exit status 1.
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // help and version are not errors; everything else is usage
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Usage> {
    match &cli.command {
        Command::Gen { kind, params, seed } => {
            let g = generate(*kind, params, *seed)?;
            let body = match cli.format {
                Format::Text => g.to_edge_list(),
                Format::Json => pretty(&json!(g)),
            };
            emit(cli.out.as_deref(), &body)?;
            Ok(0)
        }
        Command::Classify { input, max_n, eps } => {
            let (g, digest) = read_graph(input)?;
            let eps = parse_fraction(eps)?;
            let (results, code) = classify(&g, *max_n, eps)?;
            let report = run_report("classify", &digest, None, results);
            emit(cli.out.as_deref(), &render(cli.format, &report))?;
            Ok(code)
        }
        Command::Pipeline { input, eta, seed, rescue } => {
            let (g, digest) = read_graph(input)?;
            let eta = parse_fraction(eta)?;
            let start = Instant::now();
            let result = run_pipeline(&g, eta, *seed, *rescue)?;
            let mut results = json!({ "decomposition": result });
            let mut code = 2;
            if let Outcome::Complete { restriction, .. } = &result.outcome {
                let c = &restriction.coloring;
                let reloaded = EdgeColoring::parse_text(&g, c.palette(), &c.to_text())?;
                let proper = check_proper(&g, &reloaded)?.proper && reloaded.is_total();
                if !proper {
                    return Err(Usage("coloring failed to re-verify after reload".into()));
                }
                let parity = parity_check(&g, &reloaded)?.holds;
                results["coloring"] = match &cli.out {
                    Some(out) => {
                        let path = out.with_extension("coloring");
                        write(&path, &c.to_text())?;
                        json!({ "file": path.display().to_string(), "reverified": proper, "parity": parity })
                    }
                    None => json!({ "text": c.to_text(), "reverified": proper, "parity": parity }),
                };
                code = 0;
            }
            results["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
            let report = run_report("pipeline", &digest, Some(*seed), results);
            emit(cli.out.as_deref(), &render(cli.format, &report))?;
            Ok(code)
        }
    }
}

fn arg(params: &[String], i: usize, name: &str) -> Result<usize, Usage> {
    let raw = params.get(i).ok_or_else(|| Usage(format!("missing parameter <{name}>")))?;
    raw.parse().map_err(|_| Usage(format!("<{name}> must be a non-negative integer, got '{raw}'")))
}

fn generate(kind: Kind, p: &[String], seed: u64) -> Result<Multigraph, Usage> {
    Ok(match kind {
        Kind::Complete => generators::complete(arg(p, 0, "n")?),
        Kind::CompleteMinusMatching => generators::complete_minus_matching(arg(p, 0, "n")?)?,
        Kind::CompleteBipartite => generators::complete_bipartite(arg(p, 0, "s")?, arg(p, 1, "t")?),
        Kind::Cycle => generators::cycle(arg(p, 0, "n")?)?,
        Kind::Circulant => degree_seq::build_regular_circulant(arg(p, 0, "m")?, arg(p, 1, "d")?)?,
        Kind::NearRegular => degree_seq::realize_near_regular(arg(p, 0, "m")?, arg(p, 1, "d")?, arg(p, 2, "t")?)?,
        Kind::Petersen => generators::petersen(),
        Kind::PetersenMinusVertex => generators::petersen_minus_vertex(),
        Kind::Random => {
            let n = arg(p, 0, "n")?;
            let density: f64 = p
                .get(1)
                .map(|s| s.parse().map_err(|_| Usage(format!("<density> must be a number, got '{s}'"))))
                .transpose()?
                .unwrap_or(0.5);
            if !(0.0..=1.0).contains(&density) {
                return Err(Usage("<density> must lie in [0, 1]".into()));
            }
            let mult = if p.len() > 2 { arg(p, 2, "max-multiplicity")? } else { 1 };
            generators::random_multigraph(n, density, mult.max(1), seed)
        }
    })
}

fn classify(g: &Multigraph, max_n: usize, eps: Fraction) -> Result<(Value, u8), Usage> {
    let overfull = find_delta_overfull_subgraph(g)?;
    let mut out = json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "max_degree": g.max_degree(),
        "max_multiplicity": g.max_multiplicity(),
        "simple": g.is_simple(),
        "overfull": overfull,
        "partial": false,
    });
    if g.vertex_count() > max_n {
        out["partial"] = json!(true);
        out["note"] = json!(format!("{} vertices exceed --max-n {max_n}; exact checks skipped", g.vertex_count()));
        return Ok((out, 0));
    }
    let exact = match chromatic_index_exact(g) {
        Ok(r) => r,
        Err(Error::Resource(why)) => {
            out["partial"] = json!(true);
            out["note"] = json!(why);
            return Ok((out, 0));
        }
        Err(e) => return Err(e.into()),
    };
    let chi = exact.chromatic_index;
    out["chromatic_index"] = json!(chi);
    out["class"] = json!(if chi == g.max_degree() { 1 } else { 2 });
    out["critical"] = if g.is_simple() && g.edge_count() <= CRITICAL_EDGE_CAP {
        json!(is_edge_chromatic_critical(g)?)
    } else {
        Value::Null
    };
    let verdict = conjecture_verdict(g, eps)?;
    let holds = verdict.biconditional_holds;
    out["conjecture"] = json!(verdict);
    Ok((out, if holds { 0 } else { 2 }))
}

fn run_report(command: &str, digest: &str, seed: Option<u64>, results: Value) -> Value {
    json!({
        "command": command,
        "input_digest": digest,
        "seed": seed,
        "results": results,
    })
}

fn render(format: Format, report: &Value) -> String {
    match format {
        Format::Json => pretty(report),
        Format::Text => text_summary(report),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn text_summary(report: &Value) -> String {
    let r = &report["results"];
    let mut lines = vec![format!("command: {}", report["command"].as_str().unwrap_or("?"))];
    lines.push(format!("input: {}", report["input_digest"].as_str().unwrap_or("?")));
    if let Some(d) = r.get("decomposition") {
        let outcome = &d["outcome"];
        match outcome["status"].as_str() {
            Some("complete") => {
                let used = &outcome["restriction"]["colors_used"];
                lines.push(format!("status: complete, {used} colors on the input graph"));
            }
            _ => lines.push(format!(
                "status: failed at {}: {}",
                outcome["step"].as_str().unwrap_or("?"),
                outcome["condition"].as_str().unwrap_or("?")
            )),
        }
        if let Some(p) = d["trace"]["params"].as_object() {
            lines.push(format!("k = {}, l = {}, Δ = {}", p["k"], p["l"], p["delta"]));
        }
        for note in d["trace"]["fallbacks"].as_array().into_iter().flatten() {
            lines.push(format!("fallback: {}", note.as_str().unwrap_or("?")));
        }
    } else {
        for key in ["vertices", "edges", "max_degree", "chromatic_index", "class", "critical", "partial"] {
            if let Some(v) = r.get(key) {
                lines.push(format!("{key}: {v}"));
            }
        }
        lines.push(format!("overfull subgraph: {}", r["overfull"]["mode"].as_str().unwrap_or("?")));
        if let Some(c) = r.get("conjecture") {
            lines.push(format!("biconditional holds: {}", c["biconditional_holds"]));
            lines.push(format!("Δ > n/3: {}", c["above_third"]));
        }
    }
    lines.push(String::new());
    lines.join("\n")
}

fn read_graph(path: &Path) -> Result<(Multigraph, String), Usage> {
    let text = fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;
    // accept the JSON form `gen` writes by default as well as edge lists
    let g = if text.trim_start().starts_with('{') {
        serde_json::from_str(&text).map_err(|e| Usage(format!("bad graph JSON in {}: {e}", path.display())))?
    } else {
        Multigraph::parse_edge_list(&text)?
    };
    let digest: String = Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
    Ok((g, format!("sha256:{digest}")))
}

fn write(path: &Path, body: &str) -> Result<(), Usage> {
    fs::write(path, body).map_err(|e| Usage(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, body: &str) -> Result<(), Usage> {
    match out {
        Some(p) => write(p, body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}
