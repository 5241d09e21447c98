use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use osc_optimizer::cnf::parse_dimacs;
use osc_optimizer::dynamics::{Engine, OdeConfig, SweepConfig};
use osc_optimizer::fixtures::load_dir;
use osc_optimizer::oracle::{brute_force, check, Budget, OracleError};
use osc_optimizer::problem::{ProblemInstance, Witness};
use osc_optimizer::reductions::{params_of, predict_resources, CountParams, EncodeOptions};
use osc_optimizer::solve::{solve, Solution, SolveConfig};

#[derive(Parser)]
#[command(name = "oscopt", version, about = "Potts oscillator optimizer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance (JSON or DIMACS CNF).
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        run: RunFlags,
        /// Output directory.
        #[arg(long, env = "OSCOPT_OUT", default_value = "oscopt-out")]
        out: PathBuf,
    },
    /// Repeat the run recorded in a manifest.
    Rerun {
        manifest: PathBuf,
        #[arg(long, env = "OSCOPT_OUT", default_value = "oscopt-out")]
        out: PathBuf,
    },
    /// Print predicted variable, clause and network counts.
    Predict(PredictArgs),
    /// Check a witness or solution file against an instance.
    Verify { instance: PathBuf, witness: PathBuf },
    /// Run every fixture in a directory against the oracle.
    Corpus {
        dir: PathBuf,
        #[command(flatten)]
        run: RunFlags,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum EngineKind {
    Hopfield,
    Kuramoto,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
struct RunFlags {
    #[arg(long, value_enum, default_value = "hopfield")]
    engine: EngineKind,
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Hopfield sweep limit.
    #[arg(long, default_value_t = 10_000)]
    sweeps: usize,
    /// Kuramoto step size.
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    /// Kuramoto integration time.
    #[arg(long, default_value_t = 50.0)]
    time: f64,
    /// Use one biased source per clause instead of three rails.
    #[arg(long)]
    merge_bias: bool,
}

impl RunFlags {
    fn config(&self) -> SolveConfig {
        let engine = match self.engine {
            EngineKind::Hopfield => Engine::Hopfield(SweepConfig {
                max_sweeps: self.sweeps,
                seed: self.seed,
                ..Default::default()
            }),
            EngineKind::Kuramoto => Engine::Kuramoto(OdeConfig {
                dt: self.dt,
                total_time: self.time,
                seed: self.seed,
                ..Default::default()
            }),
        };
        SolveConfig {
            engine,
            restarts: self.restarts,
            encode: EncodeOptions {
                merge_bias: self.merge_bias,
                ..Default::default()
            },
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CountKind {
    Sat,
    HamiltonPath,
    HamiltonCircle,
    Clique,
    NodeCover,
    Chromatic,
    FeedbackNodeSet,
    ExactCover,
    Ip01,
}

#[derive(Args)]
struct PredictArgs {
    /// Formula family; omit when --instance is given.
    #[arg(value_enum)]
    kind: Option<CountKind>,
    /// Derive the parameters from an instance file.
    #[arg(long, conflicts_with = "kind")]
    instance: Option<PathBuf>,
    #[arg(long)]
    vars: Option<usize>,
    #[arg(long)]
    clauses: Option<usize>,
    /// Vertices (complete graph unless --edges is given).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    edges: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    sets: Option<usize>,
    /// Number of sets holding each element, comma separated.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    command: String,
    instance: PathBuf,
    seed: u64,
    config: RunFlags,
    started: u64,
    finished: u64,
    outputs: Vec<PathBuf>,
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn read_instance(path: &Path) -> Result<ProblemInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        let v: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
        // fixture files wrap the instance
        let body = match v.get("instance") {
            Some(inner) => inner.to_string(),
            None => text,
        };
        ProblemInstance::from_json(&body).map_err(|e| anyhow!("{}: {e}", path.display()))
    } else {
        let f = parse_dimacs(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
        Ok(ProblemInstance::from_cnf(&f))
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn cmd_solve(instance: &Path, run: &RunFlags, out: &Path) -> Result<ExitCode> {
    let started = unix_now();
    let inst = read_instance(instance)?;
    let sol = solve(&inst, &run.config())?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let solution = out.join("solution.json");
    let trace = out.join("trace.csv");
    let manifest = out.join("manifest.json");
    write(&solution, &(serde_json::to_string_pretty(&sol)? + "\n"))?;
    let csv = sol
        .trace
        .as_ref()
        .map(|t| t.to_csv())
        .unwrap_or_else(|| "step,energy\n".to_string());
    write(&trace, &csv)?;
    let m = Manifest {
        command: "solve".into(),
        instance: instance.to_path_buf(),
        seed: run.seed,
        config: run.clone(),
        started,
        finished: unix_now(),
        outputs: vec![solution, trace],
    };
    write(&manifest, &(serde_json::to_string_pretty(&m)? + "\n"))?;

    for w in &sol.warnings {
        eprintln!("warning: {w}");
    }
    print_summary(&sol);
    Ok(if sol.feasible {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn print_summary(sol: &Solution) {
    if !sol.feasible {
        println!("{}: no feasible solution found", sol.kind);
        return;
    }
    let w = match &sol.witness {
        Some(Witness::Order(p)) => format!("order {p:?}"),
        Some(Witness::Subset(s)) => format!("subset {s:?}"),
        Some(Witness::Coloring(c)) => format!("coloring {c:?}"),
        Some(Witness::Assignment(a)) | Some(Witness::Partition(a)) => {
            let bits: String = a.iter().map(|&b| if b { '1' } else { '0' }).collect();
            format!("bits {bits}")
        }
        Some(Witness::TruthTable(t)) => format!("{} rows", t.len()),
        None => String::new(),
    };
    match sol.objective {
        Some(o) => println!("{}: feasible, objective {o}, {w}", sol.kind),
        None => println!("{}: feasible, {w}", sol.kind),
    }
}

fn cmd_rerun(manifest: &Path, out: &Path) -> Result<ExitCode> {
    let text = fs::read_to_string(manifest).with_context(|| format!("reading {}", manifest.display()))?;
    let m: Manifest = serde_json::from_str(&text).context("parsing manifest")?;
    if m.command != "solve" {
        bail!("cannot rerun command {:?}", m.command);
    }
    cmd_solve(&m.instance, &m.config, out)
}

fn params_from_flags(a: &PredictArgs, kind: CountKind) -> Result<CountParams> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| anyhow!("--{flag} is required for this kind"));
    let complete = |n: usize| n * n.saturating_sub(1) / 2;
    Ok(match kind {
        CountKind::Sat => CountParams::Sat {
            v: need(a.vars, "vars")?,
            c: need(a.clauses, "clauses")?,
            lengths: None,
        },
        CountKind::HamiltonPath => {
            let n = need(a.n, "n")?;
            CountParams::HamiltonPath {
                neighbors: vec![n.saturating_sub(1); n],
            }
        }
        CountKind::HamiltonCircle => {
            let n = need(a.n, "n")?;
            CountParams::HamiltonCircle {
                neighbors: vec![n.saturating_sub(1); n],
                edges: a.edges.unwrap_or(complete(n)),
            }
        }
        CountKind::Clique => {
            let n = need(a.n, "n")?;
            CountParams::Clique {
                n,
                edges: a.edges.unwrap_or(complete(n)),
                k: need(a.k, "k")?,
            }
        }
        CountKind::NodeCover => {
            let n = need(a.n, "n")?;
            CountParams::NodeCover {
                n,
                edges: a.edges.unwrap_or(complete(n)),
                k: need(a.k, "k")?,
            }
        }
        CountKind::Chromatic => CountParams::Chromatic {
            n: need(a.n, "n")?,
            k: need(a.k, "k")?,
        },
        CountKind::FeedbackNodeSet => CountParams::FeedbackNodeSet { n: need(a.n, "n")? },
        CountKind::ExactCover => {
            if a.sizes.is_empty() {
                bail!("--sizes is required for exact-cover");
            }
            CountParams::ExactCover {
                sets: need(a.sets, "sets")?,
                sizes: a.sizes.clone(),
            }
        }
        CountKind::Ip01 => CountParams::Ip01 { n: need(a.n, "n")? },
    })
}

fn cmd_predict(a: &PredictArgs) -> Result<ExitCode> {
    let params = match (&a.instance, a.kind) {
        (Some(path), _) => {
            let inst = read_instance(path)?;
            params_of(&inst).ok_or_else(|| anyhow!("no count formula for kind {}", inst.kind()))?
        }
        (None, Some(kind)) => params_from_flags(a, kind)?,
        (None, None) => bail!("give a kind or --instance"),
    };
    let report = predict_resources(&params)?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
        return Ok(ExitCode::SUCCESS);
    }
    println!("table: {}{}", report.table, if report.per_block { " (per block)" } else { "" });
    print!("{}", report.to_csv());
    println!(
        "network: {} nodes, {} connections, {} merged",
        report.network.nodes, report.network.connections, report.network_merged.connections
    );
    for d in report.discrepancies() {
        println!("discrepancy: {d}");
    }
    for n in &report.notes {
        println!("note: {n}");
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WitnessFile {
    Solution { kind: String, witness: Option<Witness> },
    Bare(Witness),
}

fn cmd_verify(instance: &Path, witness: &Path) -> Result<ExitCode> {
    let inst = read_instance(instance)?;
    let text = fs::read_to_string(witness).with_context(|| format!("reading {}", witness.display()))?;
    let parsed: WitnessFile =
        serde_json::from_str(&text).map_err(|e| anyhow!("{}: {e}", witness.display()))?;
    let w = match parsed {
        WitnessFile::Solution { kind, witness } => {
            if kind != inst.kind() {
                bail!("witness is for kind {kind}, instance is {}", inst.kind());
            }
            match witness {
                Some(w) => w,
                None => {
                    println!("invalid: solution carries no witness");
                    return Ok(ExitCode::from(2));
                }
            }
        }
        WitnessFile::Bare(w) => w,
    };
    match check(&inst, &w) {
        Ok(true) => {
            println!("valid");
            Ok(ExitCode::SUCCESS)
        }
        Ok(false) => {
            println!("invalid");
            Ok(ExitCode::from(2))
        }
        Err(OracleError::Malformed(m)) => bail!("witness does not fit {}: {m}", inst.kind()),
        Err(e) => Err(e.into()),
    }
}

struct Row {
    name: String,
    kind: &'static str,
    label: bool,
    oracle: Result<bool, String>,
    solver: Result<bool, String>,
    problems: Vec<String>,
}

fn cmd_corpus(dir: &Path, run: &RunFlags) -> Result<ExitCode> {
    let fixtures = load_dir(dir).map_err(|e| anyhow!(e))?;
    if fixtures.is_empty() {
        bail!("no fixtures in {}", dir.display());
    }
    let cfg = run.config();
    let rows: Vec<Row> = fixtures
        .par_iter()
        .map(|f| {
            let mut problems = Vec::new();
            let oracle = brute_force(&f.instance, &Budget::default())
                .map(|v| v.feasible)
                .map_err(|e| e.to_string());
            match &oracle {
                Ok(o) if *o != f.expect_feasible => {
                    problems.push(format!("labelled {} but oracle says {}", sat(f.expect_feasible), sat(*o)))
                }
                Err(e) => problems.push(format!("oracle: {e}")),
                _ => {}
            }
            let solver = match solve(&f.instance, &cfg) {
                Ok(s) => {
                    if s.feasible {
                        let ok = s.witness.as_ref().is_some_and(|w| check(&f.instance, w).unwrap_or(false));
                        if !ok {
                            problems.push("solver witness fails the checker".into());
                        }
                        if oracle == Ok(false) {
                            problems.push("solver feasible on an infeasible instance".into());
                        }
                    }
                    Ok(s.feasible)
                }
                Err(e) => {
                    problems.push(format!("solver: {e}"));
                    Err(e.to_string())
                }
            };
            Row {
                name: f.name.clone(),
                kind: f.instance.kind(),
                label: f.expect_feasible,
                oracle,
                solver,
                problems,
            }
        })
        .collect();

    // kind -> [sat&found, sat&missed, unsat&none, unsat&found]
    let mut matrix: BTreeMap<&str, [usize; 4]> = BTreeMap::new();
    for r in &rows {
        let cell = matrix.entry(r.kind).or_default();
        let truth = r.oracle.clone().unwrap_or(r.label);
        let found = r.solver.clone().unwrap_or(false);
        cell[match (truth, found) {
            (true, true) => 0,
            (true, false) => 1,
            (false, false) => 2,
            (false, true) => 3,
        }] += 1;
    }
    println!("{:<22} {:>9} {:>9} {:>9} {:>9}", "kind", "sat/found", "sat/miss", "unsat/ok", "unsat/BAD");
    let mut total = [0usize; 4];
    for (kind, c) in &matrix {
        println!("{kind:<22} {:>9} {:>9} {:>9} {:>9}", c[0], c[1], c[2], c[3]);
        for i in 0..4 {
            total[i] += c[i];
        }
    }
    println!("{:<22} {:>9} {:>9} {:>9} {:>9}", "total", total[0], total[1], total[2], total[3]);
    let bad: Vec<&Row> = rows.iter().filter(|r| !r.problems.is_empty()).collect();
    for r in &bad {
        for p in &r.problems {
            println!("FAIL {}: {p}", r.name);
        }
    }
    println!("{} fixtures, {} with problems", rows.len(), bad.len());
    Ok(if bad.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

fn sat(b: bool) -> &'static str {
    if b {
        "feasible"
    } else {
        "infeasible"
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Solve { instance, run, out } => cmd_solve(instance, run, out),
        Command::Rerun { manifest, out } => cmd_rerun(manifest, out),
        Command::Predict(a) => cmd_predict(a),
        Command::Verify { instance, witness } => cmd_verify(instance, witness),
        Command::Corpus { dir, run } => cmd_corpus(dir, run),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
