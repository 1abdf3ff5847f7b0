//! Command surface of the `sscnet` binary.
//!
//! Exit codes: 0 the property holds, 1 it fails (a witness is in the record),
//! 2 usage or validation error, 3 a budget was exceeded. Results go to
//! stdout as a [`RunRecord`]; `export-dot` prints the DOT text instead.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::components::{auto_decompose, classify_component, validate_decomposition, PactusDecomposition, StateSubgraph};
use crate::graph::SignedNetwork;
use crate::io::{digest, export_dot, parse_network, DotAnnotations, RunRecord};
use crate::numeric::{self, MonteCarloOptions};
use crate::placement::{self, PlacementError};
use crate::ssc::{self, SscError, SscOptions};
use crate::symbolic::{self, SymbolicError, SymbolicOptions};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "sscnet", version, about = "Strong sign controllability of undirected signed networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Symbolic,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Annotate {
    None,
    Ssc,
    Place1,
    Place2,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide SSC; reports a failing subset when it does not hold.
    Check {
        file: PathBuf,
        /// Largest ground set to enumerate.
        #[arg(long, default_value_t = ssc::DEFAULT_MAX_GROUND)]
        max_ground: usize,
    },
    /// List the SSC state nodes.
    SscNodes { file: PathBuf },
    /// Component kinds of the embedded or inferred chain decomposition.
    Classify { file: PathBuf },
    /// Place external inputs on a chain decomposition.
    Place {
        file: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        algorithm: u8,
    },
    /// Minimum number of inputs by exhaustive search.
    MinInputs {
        file: PathBuf,
        #[arg(long)]
        exhaustive: bool,
        /// Upper bound on the number of inputs tried.
        #[arg(long)]
        max_inputs: Option<usize>,
        /// Subset checks allowed.
        #[arg(long, default_value_t = placement::DEFAULT_MIN_INPUTS_BUDGET)]
        budget: u128,
    },
    /// Gramian rank, symbolically or over sampled weights.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = numeric::DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long)]
        sign_definite_pivots: bool,
        #[arg(long)]
        fix_b_magnitudes: bool,
        /// Term cap for symbolic entries.
        #[arg(long, default_value_t = symbolic::DEFAULT_TERM_CAP)]
        term_cap: usize,
        /// Evaluations for the structured counterexample search; 0 skips it.
        #[arg(long, default_value_t = 0)]
        search_budget: usize,
    },
    /// Graphviz rendering, optionally annotated.
    ExportDot {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Annotate::None)]
        annotate: Annotate,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub record: Option<RunRecord>,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        Outcome { exit_code: EXIT_USAGE, record: None, stdout: String::new(), stderr: msg.into() }
    }
}

/// Result of a subcommand before it is wrapped in a record.
struct Done {
    code: i32,
    output: Value,
    seeds: Vec<u64>,
    text: Option<String>,
}

fn done(code: i32, output: Value) -> Result<Done, String> {
    Ok(Done { code, output, seeds: vec![], text: None })
}

/// Parses `argv` (including the program name), runs the command and
/// renders its output. Never prints.
pub fn run_command<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_HOLDS };
            let text = e.render().to_string();
            return if code == EXIT_HOLDS {
                Outcome { exit_code: code, record: None, stdout: text, stderr: String::new() }
            } else {
                Outcome::usage(text)
            };
        }
    };
    let command: Vec<String> = argv.iter().skip(1).map(|s| s.to_string_lossy().into_owned()).collect();
    let file = match &cli.command {
        Command::Check { file, .. }
        | Command::SscNodes { file }
        | Command::Classify { file }
        | Command::Place { file, .. }
        | Command::MinInputs { file, .. }
        | Command::Verify { file, .. }
        | Command::ExportDot { file, .. } => file.clone(),
    };
    let bytes = match std::fs::read(&file) {
        Ok(b) => b,
        Err(e) => return Outcome::usage(format!("cannot read {}: {e}\n", file.display())),
    };
    let text = match String::from_utf8(bytes.clone()) {
        Ok(t) => t,
        Err(_) => return Outcome::usage(format!("{} is not UTF-8\n", file.display())),
    };
    let (net, dec) = match parse_network(&text) {
        Ok(x) => x,
        Err(e) => return Outcome::usage(format!("{}: {e}\n", file.display())),
    };
    let start = Instant::now();
    let result = dispatch(&cli.command, &net, dec.as_ref());
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let d = match result {
        Ok(d) => d,
        Err(msg) => return Outcome::usage(msg),
    };
    let record = RunRecord {
        command,
        input_digest: digest(&bytes),
        seeds: d.seeds,
        exit_code: d.code,
        output: d.output,
        wall_time_ms,
    };
    let stdout = match d.text {
        Some(t) => t,
        None => serde_json::to_string_pretty(&record).expect("record serializes") + "\n",
    };
    let stderr = if d.code == EXIT_BUDGET {
        format!("budget exceeded: {}\n", record.output["error"].as_str().unwrap_or_default())
    } else {
        String::new()
    };
    Outcome { exit_code: d.code, record: Some(record), stdout, stderr }
}

fn ssc_failure(e: SscError) -> Result<Done, String> {
    match e {
        SscError::GroundSetTooLarge { .. } => done(EXIT_BUDGET, json!({ "error": e.to_string() })),
        SscError::NotAccessible => done(EXIT_FAILS, json!({ "is_ssc": false, "reason": e.to_string() })),
        other => Err(format!("{other}\n")),
    }
}

fn placement_failure(e: PlacementError) -> Result<Done, String> {
    match e {
        PlacementError::BudgetExceeded { .. } => done(EXIT_BUDGET, json!({ "error": e.to_string() })),
        PlacementError::Ssc(s) => ssc_failure(s),
        PlacementError::NoFeasiblePlacement(_) | PlacementError::PredecessorNotSsc(_) | PlacementError::AssembledNotSsc => {
            done(EXIT_FAILS, json!({ "error": e.to_string() }))
        }
        PlacementError::NotAPactus(_) | PlacementError::BridgeMultiplicity { .. } | PlacementError::PreconditionTreeJoin(_) => {
            Err(format!("{e}\n"))
        }
    }
}

fn chain_of(net: &SignedNetwork, dec: Option<&PactusDecomposition>) -> Option<(PactusDecomposition, &'static str)> {
    match dec {
        Some(d) => Some((d.clone(), "document")),
        None => auto_decompose(net).map(|d| (d, "inferred")),
    }
}

fn dispatch(cmd: &Command, net: &SignedNetwork, dec: Option<&PactusDecomposition>) -> Result<Done, String> {
    match cmd {
        Command::Check { max_ground, .. } => {
            let opts = SscOptions { max_ground: *max_ground, ..Default::default() };
            match ssc::check_ssc_with(net, &opts) {
                Ok(r) => done(if r.is_ssc { EXIT_HOLDS } else { EXIT_FAILS }, json!(r)),
                Err(e) => ssc_failure(e),
            }
        }
        Command::SscNodes { .. } => match ssc::ssc_state_nodes(net) {
            Ok(nodes) => {
                let all = nodes.len() == net.state_count();
                done(if all { EXIT_HOLDS } else { EXIT_FAILS }, json!({ "ssc_state_nodes": nodes, "all_state_nodes": all }))
            }
            Err(e) => ssc_failure(e),
        },
        Command::Classify { .. } => {
            let whole = classify_component(&StateSubgraph::of_network(net)).ok();
            match chain_of(net, dec) {
                Some((d, source)) => {
                    let check = validate_decomposition(net, &d);
                    let components: Vec<Value> = d
                        .components
                        .iter()
                        .zip(&d.kinds)
                        .map(|(c, k)| json!({ "nodes": c.nodes, "kind": k }))
                        .collect();
                    let bridges: Vec<Value> = d
                        .bridges
                        .iter()
                        .map(|b| json!({ "i": b.component_i, "j": b.component_j, "edges": b.edges.iter().map(|e| (e.a, e.b)).collect::<Vec<_>>() }))
                        .collect();
                    let out = json!({
                        "state_graph_kind": whole,
                        "source": source,
                        "valid": check.valid,
                        "diagnostics": check.diagnostics,
                        "components": components,
                        "bridges": bridges,
                        "paths": d.path_count(),
                        "cycles": d.cycle_count(),
                    });
                    done(if check.valid { EXIT_HOLDS } else { EXIT_FAILS }, out)
                }
                None => done(EXIT_FAILS, json!({ "state_graph_kind": whole, "valid": false, "diagnostics": ["no chain decomposition found"] })),
            }
        }
        Command::Place { algorithm, .. } => {
            let Some((d, source)) = chain_of(net, dec) else {
                return Err(String::from("no chain decomposition in the document and none could be inferred\n"));
            };
            let run = if *algorithm == 1 { placement::algorithm1(&d) } else { placement::algorithm2(&d) };
            match run {
                Ok(p) => {
                    let assembled = p.assemble(&d);
                    let holds = ssc::check_ssc(&assembled).map(|r| r.is_ssc).unwrap_or(false);
                    let out = json!({ "decomposition": source, "placement": p, "assembled_is_ssc": holds });
                    done(if holds { EXIT_HOLDS } else { EXIT_FAILS }, out)
                }
                Err(e) => placement_failure(e),
            }
        }
        Command::MinInputs { exhaustive, max_inputs, budget, .. } => {
            if !exhaustive {
                return Err(String::from("min-inputs needs --exhaustive\n"));
            }
            let cap = max_inputs.unwrap_or(net.state_count());
            match placement::exhaustive_min_inputs_with_budget(net, cap, *budget) {
                Ok(Some(m)) => done(EXIT_HOLDS, json!({ "min_inputs": m })),
                Ok(None) => done(EXIT_FAILS, json!({ "min_inputs": null, "max_inputs": cap })),
                Err(e) => placement_failure(e),
            }
        }
        Command::Verify {
            mode: Mode::Symbolic, sign_definite_pivots, term_cap, ..
        } => {
            let opts = SymbolicOptions { sign_definite_pivots: *sign_definite_pivots, term_cap: *term_cap };
            match symbolic::verify_ssc_symbolic(net, &opts) {
                Ok((full, report, table)) => {
                    let zeroed: Vec<String> = report.zeroed().map(|e| table.render(&e.pivot)).collect();
                    let out = json!({
                        "mode": "symbolic",
                        "rank": report.rank,
                        "state_count": net.state_count(),
                        "full_rank": full,
                        "symbols": table.edges.iter().enumerate().map(|(v, _)| table.name(v as _)).collect::<Vec<_>>(),
                        "zeroed_pivots": zeroed,
                        "audit": report.audit(&table).lines().collect::<Vec<_>>(),
                    });
                    done(if full { EXIT_HOLDS } else { EXIT_FAILS }, out)
                }
                Err(e @ SymbolicError::PolynomialBudgetExceeded { .. }) => done(EXIT_BUDGET, json!({ "error": e.to_string() })),
                Err(e) => Err(format!("{e}\n")),
            }
        }
        Command::Verify {
            mode: Mode::Numeric, samples, seed, tol, fix_b_magnitudes, search_budget, ..
        } => {
            if *samples == 0 || tol.is_nan() || *tol <= 0.0 {
                return Err(String::from("--samples must be positive and --tol must be positive\n"));
            }
            let opts = MonteCarloOptions { samples: *samples, seed: *seed, tol: *tol, fix_b_magnitudes: *fix_b_magnitudes, injected: vec![] };
            let report = numeric::monte_carlo_with(net, &opts);
            let found = if *search_budget > 0 && report.counterexample.is_none() {
                numeric::adversarial_search_seeded(net, *search_budget, *seed)
            } else {
                None
            };
            let fails = report.counterexample.is_some() || found.is_some();
            let out = json!({ "mode": "numeric", "report": report, "search_counterexample": found });
            Ok(Done { code: if fails { EXIT_FAILS } else { EXIT_HOLDS }, output: out, seeds: vec![*seed], text: None })
        }
        Command::ExportDot { annotate, .. } => {
            let ann = match annotate {
                Annotate::None => None,
                Annotate::Ssc => match ssc::ssc_state_nodes(net) {
                    Ok(nodes) => {
                        let mut a = DotAnnotations {
                            ssc_nodes: nodes.iter().map(|n| n.label()).collect(),
                            ..Default::default()
                        };
                        if let Ok(r) = ssc::check_ssc(net) {
                            a.witness = DotAnnotations::from_report(&r).witness;
                        }
                        Some(a)
                    }
                    Err(e) => return ssc_failure(e),
                },
                Annotate::Place1 | Annotate::Place2 => {
                    let Some((d, _)) = chain_of(net, dec) else {
                        return Err(String::from("no chain decomposition for placement annotation\n"));
                    };
                    let run = if *annotate == Annotate::Place1 { placement::algorithm1(&d) } else { placement::algorithm2(&d) };
                    match run {
                        Ok(p) => Some(DotAnnotations::from_placement(&p)),
                        Err(e) => return placement_failure(e),
                    }
                }
            };
            let dot = export_dot(net, ann.as_ref());
            let marked: BTreeSet<u32> = ann.as_ref().map(|a| a.ssc_nodes.clone()).unwrap_or_default();
            Ok(Done { code: EXIT_HOLDS, output: json!({ "dot": dot, "ssc_nodes": marked }), seeds: vec![], text: Some(dot) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::io::serialize_network;

    fn write(name: &str, text: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("sscnet-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn run(args: &[&str]) -> Outcome {
        run_command(std::iter::once("sscnet").chain(args.iter().copied()))
    }

    #[test]
    fn check_exit_codes() {
        let ok = write("p4t.json", &serialize_network(&fixtures::path4_terminal_input(), None));
        let bad = write("p4i.json", &serialize_network(&fixtures::path4_interior_input(), None));
        let o = run(&["check", ok.to_str().unwrap()]);
        assert_eq!(o.exit_code, 0);
        assert_eq!(o.record.unwrap().output["is_ssc"], true);
        let o = run(&["check", bad.to_str().unwrap()]);
        assert_eq!(o.exit_code, 1);
        assert_eq!(o.record.unwrap().output["witness_alpha"], json!(["1", "2", "4"]));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(&["check"]).exit_code, 2);
        assert_eq!(run(&["frobnicate", "x"]).exit_code, 2);
        assert_eq!(run(&["check", "/nonexistent/file.json"]).exit_code, 2);
        let f = write("bad.json", "{\"version\":\"1\",\"state_nodes\":[]}");
        let o = run(&["check", f.to_str().unwrap()]);
        assert_eq!(o.exit_code, 2);
        assert!(o.stderr.contains("state_nodes"));
        let ok = write("p4t2.json", &serialize_network(&fixtures::path4_terminal_input(), None));
        assert_eq!(run(&["place", "--algorithm", "3", ok.to_str().unwrap()]).exit_code, 2);
        assert_eq!(run(&["min-inputs", ok.to_str().unwrap()]).exit_code, 2);
    }

    #[test]
    fn budget_exit() {
        let (net, _) = fixtures::single_bridge_chain();
        let f = write("chain.json", &serialize_network(&net, None));
        let o = run(&["min-inputs", "--exhaustive", "--budget", "1000", f.to_str().unwrap()]);
        assert_eq!(o.exit_code, 3);
        let placed = write("placed.json", &serialize_network(&fixtures::single_bridge_chain_placed(), None));
        let o = run(&["check", "--max-ground", "4", placed.to_str().unwrap()]);
        assert_eq!(o.exit_code, 3);
        let f = write("p3.json", &serialize_network(&fixtures::path3_middle_input(), None));
        assert_eq!(run(&["verify", "--mode", "symbolic", "--term-cap", "1", f.to_str().unwrap()]).exit_code, 3);
    }

    #[test]
    fn export_dot_prints_text() {
        let f = write("pair.json", &serialize_network(&fixtures::two_bridge_pair(), None));
        let o = run(&["export-dot", "--annotate", "ssc", f.to_str().unwrap()]);
        assert_eq!(o.exit_code, 0);
        assert!(o.stdout.starts_with("graph network {"));
        assert_eq!(o.record.unwrap().output["ssc_nodes"], json!([1, 2, 3, 4, 6]));
    }
}
