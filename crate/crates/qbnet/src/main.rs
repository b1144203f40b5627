//! Command-line front end: validate network files, run classical or
//! interference-based inferences, sweep and search phase space, and replay
//! the published reference tables.
//!
//! Exit codes: 0 success (or all reproduction cells pass), 1 domain error or
//! reproduction failure, 2 I/O or usage error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use qbnet::golden::{run_suite, ReproSuite, SuiteReport};
use qbnet::net::{builtin, parse_network, serialize_network, validate, NetworkDoc, BUILTIN_NAMES};
use qbnet::quantum::{infer_quantum, path_count, ThetaVector};
use qbnet::report::{NetworkDigest, RunReport};
use qbnet::search::{grid_search, sweep_pair, sweep_shared_phase, Strategy, SweepTrace};
use qbnet::{infer_classical, Evidence, Network};
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "qbnet",
    version,
    about = "Discrete Bayesian networks with classical and interference-based inference"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a network file against every model invariant.
    Validate {
        /// Path to a network JSON document.
        path: PathBuf,
    },
    /// Run a single inference and print the full distribution.
    Infer(InferArgs),
    /// Trace probabilities while phases move over a grid; emits CSV.
    Sweep(SweepArgs),
    /// Maximize one query state's probability over the phase grid.
    Search(SearchArgs),
    /// Replay the published reference tables cell by cell.
    Reproduce {
        /// Suite to run; `all` runs every suite in order.
        #[arg(long, value_parser = parse_what)]
        what: WhatArg,
    },
}

#[derive(Args)]
struct InferArgs {
    /// Builtin name (gamble, burglar, lung_cancer) or path to a network file.
    #[arg(long)]
    net: String,
    /// Query variable.
    #[arg(long)]
    query: String,
    /// Optional state label to highlight in the report.
    #[arg(long)]
    state: Option<String>,
    /// Evidence as Var=StateLabel, repeatable.
    #[arg(long, value_name = "VAR=STATE", num_args = 1..)]
    evidence: Vec<String>,
    /// Inference mode.
    #[arg(long, value_enum, default_value_t = Mode::Classical)]
    mode: Mode,
    /// Phases in radians, comma- or space-separated, one per unobserved
    /// configuration (quantum mode; optional when there is a single path).
    #[arg(long, conflicts_with = "theta_file", allow_hyphen_values = true)]
    theta: Option<String>,
    /// File holding the phases: a JSON array or whitespace-separated numbers.
    #[arg(long)]
    theta_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Decimal places for table output (full precision internally).
    #[arg(long, default_value_t = 4)]
    precision: usize,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    net: String,
    #[arg(long)]
    query: String,
    #[arg(long, value_name = "VAR=STATE", num_args = 1..)]
    evidence: Vec<String>,
    /// Grid step in radians; defaults to 0.0001 for shared, 0.1 for pair.
    #[arg(long)]
    step: Option<f64>,
    /// Sweep family: one shared difference, or two free axes.
    #[arg(long, value_enum)]
    vary: Vary,
    /// First varied theta index (pair mode, zero-based).
    #[arg(long)]
    i: Option<usize>,
    /// Second varied theta index (pair mode, zero-based).
    #[arg(long)]
    j: Option<usize>,
    /// Phases for the non-varied indexes (pair mode); defaults to zeros.
    #[arg(long, allow_hyphen_values = true)]
    fixed: Option<String>,
    #[arg(long, value_enum, default_value_t = SweepFormat::Csv)]
    format: SweepFormat,
    /// Write the trace here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    net: String,
    #[arg(long)]
    query: String,
    /// State label whose probability is maximized.
    #[arg(long)]
    state: String,
    #[arg(long, value_name = "VAR=STATE", num_args = 1..)]
    evidence: Vec<String>,
    /// Grid step in radians.
    #[arg(long, default_value_t = 0.1)]
    step: f64,
    #[arg(long, value_enum, default_value_t = StrategyArg::CoordinateAscent)]
    strategy: StrategyArg,
    /// Random restarts (coordinate ascent).
    #[arg(long, default_value_t = 100)]
    restarts: u32,
    /// Seed for the restart initializations.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long, default_value_t = 4)]
    precision: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Classical,
    Quantum,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepFormat {
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Vary {
    Shared,
    Pair,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    #[value(name = "coordinate-ascent")]
    CoordinateAscent,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Exhaustive => Strategy::Exhaustive,
            StrategyArg::CoordinateAscent => Strategy::CoordinateAscent,
        }
    }
}

#[derive(Clone)]
enum WhatArg {
    All,
    One(ReproSuite),
}

fn parse_what(s: &str) -> Result<WhatArg, String> {
    if s == "all" {
        return Ok(WhatArg::All);
    }
    s.parse::<ReproSuite>().map(WhatArg::One).map_err(|e| {
        format!("{e}; `all` runs every suite")
    })
}

/// Domain errors exit 1, I/O errors exit 2 (usage errors are handled by the
/// argument parser, also with exit 2).
enum CliError {
    Domain(String),
    Io(String),
}

impl CliError {
    fn domain(e: impl ToString) -> Self {
        CliError::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(CliError::Domain(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Io(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Infer(args) => cmd_infer(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Search(args) => cmd_search(args),
        Command::Reproduce { what } => cmd_reproduce(what),
    }
}

fn cmd_validate(path: &PathBuf) -> Result<ExitCode, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read `{}`: {e}", path.display())))?;
    let doc: NetworkDoc = match serde_json::from_str(&text) {
        Ok(doc) => doc,
        Err(e) => {
            println!("SyntaxError at {}: {e}", path.display());
            return Ok(ExitCode::from(1));
        }
    };
    let violations = validate(&doc);
    if violations.is_empty() {
        println!(
            "ok: `{}` is a valid network ({} variables)",
            doc.name,
            doc.variables.len()
        );
        Ok(ExitCode::SUCCESS)
    } else {
        for violation in &violations {
            println!("{violation}");
        }
        Ok(ExitCode::from(1))
    }
}

/// Resolves `--net` to a builtin or a file, along with its content digest.
fn load_network(spec: &str) -> Result<(Network, NetworkDigest), CliError> {
    if BUILTIN_NAMES.contains(&spec) {
        let net = builtin(spec).expect("builtin names are valid");
        let document = serialize_network(&net);
        let digest = NetworkDigest::new(spec, &document);
        return Ok((net, digest));
    }
    let text = fs::read_to_string(spec)
        .map_err(|e| CliError::Io(format!("cannot read `{spec}`: {e}")))?;
    let net = parse_network(&text).map_err(CliError::domain)?;
    let digest = NetworkDigest::new(spec, &text);
    Ok((net, digest))
}

fn parse_evidence(net: &Network, pairs: &[String]) -> Result<Evidence, CliError> {
    let mut labeled = Vec::new();
    for pair in pairs {
        let Some((var, state)) = pair.split_once('=') else {
            return Err(CliError::Domain(format!(
                "evidence `{pair}` is not of the form VAR=STATE"
            )));
        };
        labeled.push((var, state));
    }
    Evidence::from_labels(net, &labeled).map_err(CliError::domain)
}

fn parse_theta_numbers(text: &str) -> Result<Vec<f64>, CliError> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        return serde_json::from_str(trimmed)
            .map_err(|e| CliError::Domain(format!("theta list is not a JSON array: {e}")));
    }
    trimmed
        .split([',', ' ', '\t', '\n', '\r'])
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| CliError::Domain(format!("bad theta value `{s}`: {e}")))
        })
        .collect()
}

fn evidence_json(net: &Network, evidence: &Evidence) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> = evidence
        .iter()
        .map(|(v, s)| {
            let var = net.variable(v);
            (
                var.name.clone(),
                serde_json::Value::String(var.states[s].clone()),
            )
        })
        .collect();
    serde_json::Value::Object(map)
}

fn cmd_infer(args: InferArgs) -> Result<ExitCode, CliError> {
    let (net, digest) = load_network(&args.net)?;
    let query = net.var_index_or_err(&args.query).map_err(CliError::domain)?;
    let evidence = parse_evidence(&net, &args.evidence)?;
    if let Some(state) = &args.state {
        net.variable(query)
            .state_index(state)
            .ok_or_else(|| CliError::Domain(format!("unknown state `{state}` for `{}`", args.query)))?;
    }

    let start = Instant::now();
    let k = path_count(&net, query, &evidence);
    let thetas = match (&args.theta, &args.theta_file, args.mode) {
        (_, _, Mode::Classical) => None,
        (Some(list), _, Mode::Quantum) => Some(ThetaVector::new(parse_theta_numbers(list)?)),
        (None, Some(path), Mode::Quantum) => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::Io(format!("cannot read `{}`: {e}", path.display()))
            })?;
            Some(ThetaVector::new(parse_theta_numbers(&text)?))
        }
        (None, None, Mode::Quantum) if k <= 1 => Some(ThetaVector::zeros(k)),
        (None, None, Mode::Quantum) => {
            return Err(CliError::Domain(format!(
                "quantum mode needs --theta or --theta-file ({k} unobserved configurations)"
            )));
        }
    };

    let (distribution, quantum) = match args.mode {
        Mode::Classical => (
            infer_classical(&net, query, &evidence).map_err(CliError::domain)?,
            None,
        ),
        Mode::Quantum => {
            let result = infer_quantum(&net, query, &evidence, thetas.as_ref().unwrap())
                .map_err(CliError::domain)?;
            (result.distribution.clone(), Some(result))
        }
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1000.0;

    let states = &net.variable(query).states;
    match args.format {
        Format::Table => {
            let width = states.iter().map(|s| s.len()).max().unwrap_or(5).max(5);
            if let Some(result) = &quantum {
                println!(
                    "{:width$}  {:>12}  {:>14}  {:>14}  {:>14}",
                    "state", "probability", "classical_mass", "interference", "unnormalized"
                );
                for (i, label) in states.iter().enumerate() {
                    let terms = &result.states[i];
                    println!(
                        "{label:width$}  {:>12.prec$}  {:>14.prec$}  {:>14.prec$}  {:>14.prec$}",
                        distribution.p(i),
                        terms.classical_mass,
                        terms.interference,
                        terms.unnormalized,
                        prec = args.precision,
                    );
                }
                println!("alpha = {:.prec$}", result.alpha, prec = args.precision);
                let rendered: Vec<String> = thetas
                    .as_ref()
                    .unwrap()
                    .as_slice()
                    .iter()
                    .map(|t| format!("{t:.prec$}", prec = args.precision))
                    .collect();
                println!("theta = [{}]", rendered.join(", "));
            } else {
                println!("{:width$}  {:>12}", "state", "probability");
                for (i, label) in states.iter().enumerate() {
                    println!(
                        "{label:width$}  {:>12.prec$}",
                        distribution.p(i),
                        prec = args.precision
                    );
                }
            }
        }
        Format::Csv => {
            if let Some(result) = &quantum {
                println!("state,probability,classical_mass,interference,unnormalized");
                for (i, label) in states.iter().enumerate() {
                    let terms = &result.states[i];
                    println!(
                        "{label},{},{},{},{}",
                        distribution.p(i),
                        terms.classical_mass,
                        terms.interference,
                        terms.unnormalized
                    );
                }
            } else {
                println!("state,probability");
                for (i, label) in states.iter().enumerate() {
                    println!("{label},{}", distribution.p(i));
                }
            }
        }
        Format::Json => {
            let mut results = serde_json::json!({
                "variable": distribution.variable,
                "states": states,
                "probabilities": distribution.probabilities,
            });
            if let Some(result) = &quantum {
                let obj = results.as_object_mut().unwrap();
                obj.insert(
                    "classical_mass".into(),
                    serde_json::json!(result
                        .states
                        .iter()
                        .map(|s| s.classical_mass)
                        .collect::<Vec<_>>()),
                );
                obj.insert(
                    "interference".into(),
                    serde_json::json!(result
                        .states
                        .iter()
                        .map(|s| s.interference)
                        .collect::<Vec<_>>()),
                );
                obj.insert(
                    "unnormalized".into(),
                    serde_json::json!(result
                        .states
                        .iter()
                        .map(|s| s.unnormalized)
                        .collect::<Vec<_>>()),
                );
                obj.insert("alpha".into(), serde_json::json!(result.alpha));
                obj.insert(
                    "theta".into(),
                    serde_json::json!(thetas.as_ref().unwrap().as_slice()),
                );
            }
            let report = RunReport {
                command: "infer".into(),
                network: digest,
                parameters: serde_json::json!({
                    "query": args.query,
                    "state": args.state,
                    "evidence": evidence_json(&net, &evidence),
                    "mode": match args.mode { Mode::Classical => "classical", Mode::Quantum => "quantum" },
                    "theta": thetas.as_ref().map(|t| t.as_slice().to_vec()),
                    "precision": args.precision,
                }),
                results,
                seed: None,
                wall_ms,
            };
            println!("{}", report.to_json());
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// CSV with the exact header contract: `theta_1..theta_k,p_<state>...`.
fn sweep_csv(trace: &SweepTrace) -> String {
    let k = trace.samples.first().map_or(0, |s| s.thetas.len());
    let mut header: Vec<String> = (1..=k).map(|i| format!("theta_{i}")).collect();
    header.extend(trace.states.iter().map(|s| format!("p_{s}")));
    let mut out = header.join(",");
    out.push('\n');
    for sample in &trace.samples {
        let mut fields: Vec<String> = sample.thetas.iter().map(|t| format!("{t}")).collect();
        fields.extend(sample.probabilities.iter().map(|p| format!("{p}")));
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, CliError> {
    let (net, _digest) = load_network(&args.net)?;
    let query = net.var_index_or_err(&args.query).map_err(CliError::domain)?;
    let evidence = parse_evidence(&net, &args.evidence)?;
    let trace = match args.vary {
        Vary::Shared => {
            let step = args.step.unwrap_or(0.0001);
            sweep_shared_phase(&net, query, &evidence, step).map_err(CliError::domain)?
        }
        Vary::Pair => {
            let step = args.step.unwrap_or(0.1);
            let (Some(i), Some(j)) = (args.i, args.j) else {
                return Err(CliError::Domain(
                    "pair sweeps need --i and --j theta indices".into(),
                ));
            };
            let k = path_count(&net, query, &evidence);
            let fixed = match &args.fixed {
                Some(list) => ThetaVector::new(parse_theta_numbers(list)?),
                None => ThetaVector::zeros(k),
            };
            sweep_pair(&net, query, &evidence, &fixed, i, j, step).map_err(CliError::domain)?
        }
    };
    let csv = sweep_csv(&trace);
    match &args.out {
        Some(path) => {
            let mut file = fs::File::create(path)
                .map_err(|e| CliError::Io(format!("cannot create `{}`: {e}", path.display())))?;
            file.write_all(csv.as_bytes())
                .map_err(|e| CliError::Io(format!("cannot write `{}`: {e}", path.display())))?;
        }
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_search(args: SearchArgs) -> Result<ExitCode, CliError> {
    let (net, digest) = load_network(&args.net)?;
    let query = net.var_index_or_err(&args.query).map_err(CliError::domain)?;
    let state = net
        .variable(query)
        .state_index(&args.state)
        .ok_or_else(|| {
            CliError::Domain(format!("unknown state `{}` for `{}`", args.state, args.query))
        })?;
    let evidence = parse_evidence(&net, &args.evidence)?;

    let start = Instant::now();
    let result = grid_search(
        &net,
        query,
        state,
        &evidence,
        args.step,
        args.strategy.into(),
        args.restarts,
        args.seed,
    )
    .map_err(CliError::domain)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1000.0;

    match args.format {
        Format::Json => {
            let report = RunReport {
                command: "search".into(),
                network: digest,
                parameters: serde_json::json!({
                    "query": args.query,
                    "state": args.state,
                    "evidence": evidence_json(&net, &evidence),
                    "step": args.step,
                    "strategy": result.strategy.to_string(),
                    "restarts": args.restarts,
                }),
                results: serde_json::json!({
                    "best_probability": result.best_probability,
                    "best_thetas": result.best_thetas.as_slice(),
                    "evaluations": result.evaluations,
                    "strategy": result.strategy.to_string(),
                    "restarts": result.restarts,
                }),
                seed: Some(args.seed),
                wall_ms,
            };
            println!("{}", report.to_json());
        }
        Format::Table | Format::Csv => {
            let rendered: Vec<String> = result
                .best_thetas
                .as_slice()
                .iter()
                .map(|t| format!("{t:.prec$}", prec = args.precision))
                .collect();
            println!(
                "best Pr({}={}) = {:.prec$}",
                args.query,
                args.state,
                result.best_probability,
                prec = args.precision
            );
            println!("thetas      = [{}]", rendered.join(", "));
            println!("strategy    = {}", result.strategy);
            println!("evaluations = {}", result.evaluations);
            println!("restarts    = {}", result.restarts);
            println!("seed        = {}", result.seed);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_suite(report: &SuiteReport) {
    println!("suite {}:", report.suite);
    for cell in &report.cells {
        println!("  {cell}");
    }
    println!(
        "suite {}: {}/{} cells pass",
        report.suite,
        report.pass_count(),
        report.cells.len()
    );
}

fn cmd_reproduce(what: WhatArg) -> Result<ExitCode, CliError> {
    let suites = match what {
        WhatArg::All => ReproSuite::all().to_vec(),
        WhatArg::One(suite) => vec![suite],
    };
    let mut all_pass = true;
    for suite in suites {
        let report = run_suite(suite);
        print_suite(&report);
        all_pass &= report.passed();
    }
    if all_pass {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
