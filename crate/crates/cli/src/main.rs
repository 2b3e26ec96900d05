use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use weakdeg::at::{at_number, diff, Orientation};
use weakdeg::audit::{audit_structure, Theorem};
use weakdeg::certify::{certify_reducible_sfdt, SweepLimits};
use weakdeg::chain::{chain_row, ChainLimits};
use weakdeg::coloring::dp_chromatic_number;
use weakdeg::config::{catalog, config_from_json, find_matches, lookup};
use weakdeg::cover::{cover_from_json, find_sfdt};
use weakdeg::degeneracy::{degeneracy_order, f_removing_order};
use weakdeg::gen::connected_graphs;
use weakdeg::io::{parse_arcs, parse_edge_list, parse_rotation};
use weakdeg::script::certify_reducible_weak;
use weakdeg::weak::{is_weakly_f_degenerate, is_weakly_f_degenerate_capped, weak_degeneracy_capped};
use weakdeg::{Budget, Configuration, Error, Graph};

const DEFAULT_MAX_STATES: usize = 50_000_000;
const DEFAULT_MAX_COVERS: u64 = 50_000_000;

#[derive(Parser)]
#[command(name = "weakdeg", version, about = "Weak degeneracy, DP-cover transversals and Alon-Tarsi orientations on small graphs")]
struct Cli {
    /// Print the report as JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Cap on stored game states / orientations / list assignments.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STATES)]
    max_states: usize,
    /// Cap on outer cover-search nodes.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_COVERS)]
    max_covers: u64,
    /// Threads for certification sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Degeneracy d(G) and a smallest-last order.
    Degeneracy { graph: PathBuf },
    /// wd(G), or with --budget the weak f-degeneracy decision.
    WeakDegeneracy {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',')]
        budget: Option<Vec<u32>>,
    },
    /// Strict f-degeneracy decision with an f-removing order.
    StrictCheck {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        budget: Vec<u32>,
    },
    /// DP-chromatic number.
    DpChromatic { graph: PathBuf },
    /// Strictly f-degenerate transversal of a cover (JSON).
    Sfdt { cover: PathBuf },
    /// Alon-Tarsi number.
    AtNumber { graph: PathBuf },
    /// diff(D) of an orientation.
    Diff { orientation: PathBuf },
    /// Matches of catalog configurations.
    Detect {
        graph: PathBuf,
        /// Configuration names; all catalog entries if omitted.
        #[arg(long)]
        config: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        boundary: Vec<usize>,
    },
    /// Reducibility certificates.
    Certify {
        /// Catalog name, or `reducible` for every scripted entry.
        #[arg(long)]
        config: Vec<String>,
        /// Configuration JSON files.
        #[arg(long)]
        file: Vec<PathBuf>,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
        /// Give up each sweep after this many seconds (exit code 3).
        #[arg(long)]
        time_limit: Option<f64>,
    },
    /// Structure audit of a plane graph.
    Audit {
        graph: PathBuf,
        #[arg(long)]
        rotation: PathBuf,
        /// Index into the faces of the rotation system.
        #[arg(long)]
        outer_face: usize,
        #[arg(long)]
        theorem: Theorem,
    },
    /// χ ≤ χ_ℓ ≤ χ_DP ≤ wd+1 ≤ d+1 on all connected graphs up to --max-n, or on given graphs.
    Chain {
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        graphs: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Sfdt,
    Weak,
    Both,
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Report {
    command: String,
    args: Vec<String>,
    inputs: Vec<InputDigest>,
    result: Value,
    timing_ms: u64,
}

/// Exit status plus the result body.
enum Outcome {
    Done(Value),
    Negative(Value),
}

struct Inputs(Vec<InputDigest>);

impl Inputs {
    fn read(&mut self, p: &Path) -> Result<String, Error> {
        let bytes = std::fs::read(p).map_err(|e| Error::Format(format!("{}: {e}", p.display())))?;
        self.0.push(InputDigest {
            path: p.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).map_err(|_| Error::Format(format!("{}: not UTF-8", p.display())))
    }

    fn graph(&mut self, p: &Path) -> Result<Graph, Error> {
        parse_edge_list(&self.read(p)?)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded(_) => 3,
        Error::CounterexampleFound(_) | Error::NoClauseHolds(_) | Error::NoExtension(_) => 1,
        _ => 2,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } | Error::Format(_) => "malformed_input",
        Error::UnknownConfiguration(_) => "unknown_configuration",
        Error::BudgetExceeded(_) => "budget_exceeded",
        Error::CounterexampleFound(_) => "counterexample_found",
        Error::NoClauseHolds(_) => "no_clause_holds",
        Error::HypothesisViolated(_) => "hypothesis_violated",
        _ => "invalid_input",
    }
}

fn run(cli: &Cli, inputs: &mut Inputs) -> Result<Outcome, Error> {
    match &cli.cmd {
        Cmd::Degeneracy { graph } => {
            let g = inputs.graph(graph)?;
            let (order, d) = degeneracy_order(&g);
            Ok(Outcome::Done(json!({ "degeneracy": d, "order": order })))
        }
        Cmd::WeakDegeneracy { graph, budget } => {
            let g = inputs.graph(graph)?;
            match budget {
                None => {
                    let wd = weak_degeneracy_capped(&g, Some(cli.max_states))?;
                    let w = is_weakly_f_degenerate(&g, &Budget::constant(g.n(), wd as u32))?;
                    Ok(Outcome::Done(json!({ "weak_degeneracy": wd, "witness": w.witness })))
                }
                Some(f) => {
                    let out = is_weakly_f_degenerate_capped(&g, &Budget::new(f.clone()), cli.max_states)?;
                    let body = json!({ "weakly_f_degenerate": out.degenerate, "witness": out.witness, "states": out.states });
                    Ok(if out.degenerate { Outcome::Done(body) } else { Outcome::Negative(body) })
                }
            }
        }
        Cmd::StrictCheck { graph, budget } => {
            let g = inputs.graph(graph)?;
            let order = f_removing_order(&g, &Budget::new(budget.clone()))?;
            let body = json!({ "strictly_f_degenerate": order.is_some(), "order": order });
            Ok(if order.is_some() { Outcome::Done(body) } else { Outcome::Negative(body) })
        }
        Cmd::DpChromatic { graph } => {
            let g = inputs.graph(graph)?;
            Ok(Outcome::Done(json!({ "dp_chromatic": dp_chromatic_number(&g, cli.max_covers)? })))
        }
        Cmd::Sfdt { cover } => {
            let (h, f) = cover_from_json(&inputs.read(cover)?)?;
            Ok(match find_sfdt(&h, &f)? {
                // fan indices are 1-based on the outside
                Some(r) => Outcome::Done(json!({ "transversal": r.0.iter().map(|&i| i + 1).collect::<Vec<_>>() })),
                None => Outcome::Negative(json!({ "transversal": null })),
            })
        }
        Cmd::AtNumber { graph } => {
            let g = inputs.graph(graph)?;
            Ok(Outcome::Done(json!({ "at_number": at_number(&g, cli.max_states as u64)? })))
        }
        Cmd::Diff { orientation } => {
            let (n, arcs) = parse_arcs(&inputs.read(orientation)?)?;
            let d = Orientation::new(n, arcs)?;
            let df = diff(&d);
            let k = (df != 0.into()).then(|| d.max_out_degree() + 1);
            Ok(Outcome::Done(json!({
                "diff": df.to_string(),
                "max_out_degree": d.max_out_degree(),
                "at_orientation_for": k,
            })))
        }
        Cmd::Detect { graph, config, boundary } => {
            let g = inputs.graph(graph)?;
            let configs: Vec<Configuration> = if config.is_empty() {
                catalog()
            } else {
                config.iter().map(|c| lookup(c)).collect::<Result<_, _>>()?
            };
            let matches: Vec<Value> = configs
                .iter()
                .flat_map(|c| {
                    find_matches(&g, c, boundary).into_iter().map(move |m| {
                        let map: serde_json::Map<String, Value> =
                            (0..c.n()).map(|v| (c.label(v).to_string(), json!(m.map[v]))).collect();
                        json!({ "config": c.name(), "map": map })
                    })
                })
                .collect();
            Ok(Outcome::Done(json!({ "count": matches.len(), "matches": matches })))
        }
        Cmd::Certify { config, file, k, mode, time_limit } => {
            let mut configs = Vec::new();
            for name in config {
                if name == "reducible" {
                    configs.extend(catalog().into_iter().filter(|c| c.script().is_some()));
                } else {
                    configs.push(lookup(name)?);
                }
            }
            for p in file {
                configs.push(config_from_json(&inputs.read(p)?)?);
            }
            if configs.is_empty() {
                return Err(Error::Format("certify needs --config or --file".into()));
            }
            let time_limit = time_limit
                .map(|x| Duration::try_from_secs_f64(x).map_err(|_| Error::Format(format!("bad time limit {x}"))))
                .transpose()?;
            let limits = SweepLimits {
                max_nodes: cli.max_covers,
                par_depth: if cli.workers > 1 { 2 } else { 0 },
                time_limit,
            };
            let mut out = Vec::new();
            for c in &configs {
                let t = Instant::now();
                let mut entry = json!({ "name": c.name() });
                if *mode != Mode::Weak {
                    entry["sfdt"] = serde_json::to_value(certify_reducible_sfdt(c, *k, limits)?).expect("serializable");
                }
                if *mode != Mode::Sfdt {
                    entry["weak"] = serde_json::to_value(certify_reducible_weak(c)?).expect("serializable");
                }
                entry["timing_ms"] = json!(t.elapsed().as_millis() as u64);
                out.push(entry);
            }
            Ok(Outcome::Done(json!({ "certified": out })))
        }
        Cmd::Audit {
            graph,
            rotation,
            outer_face,
            theorem,
        } => {
            let g = inputs.graph(graph)?;
            let rot = parse_rotation(&inputs.read(rotation)?, g.n())?;
            let faces = rot.faces(&g)?;
            let outer = faces
                .get(*outer_face)
                .ok_or_else(|| Error::Format(format!("face {outer_face} of {}", faces.len())))?;
            let report = audit_structure(&g, &rot, outer, *theorem)?;
            Ok(Outcome::Done(json!({ "outer": outer.vertices(), "report": report })))
        }
        Cmd::Chain { max_n, graphs } => {
            let mut gs = Vec::new();
            for p in graphs {
                gs.push(inputs.graph(p)?);
            }
            if graphs.is_empty() {
                if *max_n > 6 {
                    return Err(Error::TooLarge(*max_n));
                }
                for n in 1..=*max_n {
                    gs.extend(connected_graphs(n)?);
                }
            }
            let limits = ChainLimits {
                max_states: Some(cli.max_states),
                max_covers: cli.max_covers,
            };
            let rows = gs.iter().map(|g| chain_row(g, limits)).collect::<Result<Vec<_>, _>>()?;
            let holds = rows.iter().all(|r| r.holds);
            let body = json!({ "chain_holds": holds, "rows": rows });
            Ok(if holds { Outcome::Done(body) } else { Outcome::Negative(body) })
        }
    }
}

fn print_text(result: &Value) {
    if let Some(rows) = result.get("rows").and_then(Value::as_array) {
        println!("{:>3} {:>3} {:>4} {:>4} {:>4} {:>5} {:>4}  edges", "n", "χ", "χ_ℓ", "χ_DP", "wd+1", "d+1", "ok");
        for r in rows {
            println!(
                "{:>3} {:>3} {:>4} {:>4} {:>4} {:>5} {:>4}  {}",
                r["n"].to_string(),
                r["chi"].to_string(),
                r["chi_list"].to_string(),
                r["chi_dp"].to_string(),
                r["wd_plus_one"].to_string(),
                r["d_plus_one"].to_string(),
                r["holds"].to_string(),
                r["edges"]
            );
        }
        println!("chain holds: {}", result["chain_holds"]);
        return;
    }
    if let Some(obj) = result.as_object() {
        for (k, v) in obj {
            println!("{k}: {v}");
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.workers > 1 {
        // A second call fails only if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build_global();
    }
    let t = Instant::now();
    let mut inputs = Inputs(Vec::new());
    let outcome = run(&cli, &mut inputs);
    let (code, result) = match outcome {
        Ok(Outcome::Done(v)) => (0, v),
        Ok(Outcome::Negative(v)) => (1, v),
        Err(e) => {
            if !cli.json {
                eprintln!("error: {e}");
            }
            (exit_code(&e), json!({ "error": { "kind": error_kind(&e), "message": e.to_string() } }))
        }
    };
    let args: Vec<String> = std::env::args().skip(1).collect();
    let report = Report {
        command: args.iter().find(|a| !a.starts_with('-')).cloned().unwrap_or_default(),
        args,
        inputs: inputs.0,
        result,
        timing_ms: t.elapsed().as_millis() as u64,
    };
    if cli.json {
        // Through Value so keys come out sorted and a reparse re-serializes identically.
        let v = serde_json::to_value(&report).expect("serializable");
        println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
    } else if report.result.get("error").is_none() {
        print_text(&report.result);
    }
    ExitCode::from(code)
}
