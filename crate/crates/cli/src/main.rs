use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};
use temporal_cluster::flow::CenterNetwork;
use temporal_cluster::generators::dimacs::parse_dimacs;
use temporal_cluster::generators::{
    gen_random_walkers, gen_sat3, gen_setcover_metric, Cnf3, GadgetParams, SetCoverInstance,
    WalkerParams,
};
use temporal_cluster::io::{load_clustering, load_instance, save_clustering, save_instance};
use temporal_cluster::kcenter::{level_nets, solve_bicriteria, solve_exact_k, solve_rds_greedy};
use temporal_cluster::level_graph::LevelGraph;
use temporal_cluster::median::{iteration_count, solve_median_greedy, Exponent};
use temporal_cluster::oracle::{oracle_feasible, oracle_opt_k, oracle_opt_r, OracleBudget};
use temporal_cluster::{
    check_solution, Clustering, ClusteringStats, Objective, SolveOutcome, TemporalSampling,
    Validation,
};

const EXIT_INFEASIBLE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "temporal-cluster", version, about = "Cluster sequences of point sets with trajectories")]
struct Cli {
    /// Absolute tolerance for closed distance comparisons.
    #[arg(long, global = true, env = "TEMPORAL_CLUSTER_TOLERANCE", value_parser = nonneg)]
    tolerance: Option<f64>,
    /// Skip metric-axiom validation of matrix inputs.
    #[arg(long, global = true)]
    skip_validation: bool,
    /// Output file (stdout if omitted).
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance.
    Generate {
        #[command(subcommand)]
        kind: Generate,
    },
    /// Run an approximation algorithm.
    Solve(SolveArgs),
    /// Compute statistics of a clustering, optionally checking bounds.
    Eval(EvalArgs),
    /// Exhaustive search on small instances.
    Oracle {
        #[command(subcommand)]
        query: OracleQuery,
    },
}

#[derive(Subcommand, Debug)]
enum Generate {
    /// Planar 3-SAT gadget from a DIMACS file.
    Sat3 {
        /// DIMACS CNF file (stdin if omitted).
        #[arg(long, short)]
        input: Option<PathBuf>,
        /// Use a built-in formula instead of reading one.
        #[arg(long, conflicts_with = "input")]
        builtin: Option<BuiltinCnf>,
        #[arg(long, default_value_t = 4.0, value_parser = nonneg)]
        r0: f64,
        #[arg(long, default_value_t = 1.0, value_parser = nonneg)]
        delta0: f64,
        #[arg(long, default_value_t = 5.0, value_parser = nonneg)]
        rho: f64,
        /// Write gadget metadata (k and clause phases) here.
        #[arg(long)]
        meta: Option<PathBuf>,
    },
    /// Single-level metric encoding a set-cover instance.
    Setcover {
        /// Set-cover JSON {"universe": n, "sets": [[...], ...]} (stdin if omitted).
        #[arg(long, short)]
        input: Option<PathBuf>,
        /// Use the built-in example with five sets over six elements.
        #[arg(long, conflicts_with = "input")]
        example: bool,
    },
    /// Random walkers with a planted clustering.
    Walkers {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 5)]
        t: usize,
        #[arg(long, default_value_t = 3)]
        extras: usize,
        #[arg(long, default_value_t = 1.0, value_parser = nonneg)]
        step: f64,
        #[arg(long, default_value_t = 1.0, value_parser = nonneg)]
        radius: f64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Write the planted clustering here.
        #[arg(long)]
        planted: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BuiltinCnf {
    /// One clause over three variables.
    Single,
    /// All eight sign patterns over three variables.
    Unsat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    ExactK,
    RdsGreedy,
    Bicriteria,
    MedianGreedy,
    MeansGreedy,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    /// Instance JSON (stdin if omitted).
    #[arg(long, short, conflicts_with = "batch")]
    input: Option<PathBuf>,
    /// Solve every *.json instance in a directory and emit CSV.
    #[arg(long)]
    batch: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_parser = nonneg)]
    r: f64,
    #[arg(long, value_parser = nonneg)]
    delta: f64,
    #[arg(long, default_value_t = 0.1, value_parser = positive)]
    epsilon: f64,
    /// Write G_δ as JSON here.
    #[arg(long)]
    dump_graph: Option<PathBuf>,
    /// Write the flow network used by exact-k or bicriteria as JSON here.
    #[arg(long)]
    dump_network: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Instance JSON.
    #[arg(long, short)]
    input: PathBuf,
    /// Clustering JSON (stdin if omitted); solve output is accepted as is.
    #[arg(long, short)]
    clustering: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Center)]
    objective: ObjectiveArg,
    /// Check the clustering against k, r and delta.
    #[arg(long, requires_all = ["k", "r", "delta"])]
    check: bool,
    /// Relax the checked bounds to the guarantee of this algorithm.
    #[arg(long, value_enum, requires = "check")]
    guarantee: Option<Algo>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_parser = nonneg)]
    r: Option<f64>,
    #[arg(long, value_parser = nonneg)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 0.1, value_parser = positive)]
    epsilon: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ObjectiveArg {
    Center,
    Median,
    Means,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Center => Objective::Center,
            ObjectiveArg::Median => Objective::Median,
            ObjectiveArg::Means => Objective::Means,
        }
    }
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long, short)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Center)]
    objective: ObjectiveArg,
    #[arg(long, value_parser = nonneg)]
    delta: f64,
    #[arg(long, default_value_t = OracleBudget::default().max_trajectories)]
    max_trajectories: usize,
    #[arg(long, default_value_t = OracleBudget::default().max_subsets)]
    max_subsets: usize,
}

#[derive(Subcommand, Debug)]
enum OracleQuery {
    /// Does a (k, r, δ)-clustering exist?
    Feasible {
        #[command(flatten)]
        common: OracleArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = nonneg)]
        r: f64,
    },
    /// Smallest k at fixed r and δ.
    OptK {
        #[command(flatten)]
        common: OracleArgs,
        #[arg(long, value_parser = nonneg)]
        r: f64,
    },
    /// Smallest cost at fixed k and δ.
    OptR {
        #[command(flatten)]
        common: OracleArgs,
        #[arg(long)]
        k: usize,
    },
}

fn nonneg(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() && x >= 0.0 {
        Ok(x)
    } else {
        Err(format!("expected a finite nonnegative number, got {s}"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let x = nonneg(s)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err("expected a positive number".into())
    }
}

struct Ctx {
    tolerance: Option<f64>,
    validation: Validation,
    output: Option<PathBuf>,
}

impl Ctx {
    fn read(&self, path: Option<&Path>) -> anyhow::Result<Vec<u8>> {
        match path {
            Some(p) => fs::read(p).with_context(|| format!("cannot read {}", p.display())),
            None => {
                let mut buf = Vec::new();
                io::stdin().read_to_end(&mut buf).context("cannot read stdin")?;
                Ok(buf)
            }
        }
    }

    fn instance(&self, path: Option<&Path>) -> anyhow::Result<TemporalSampling> {
        let bytes = self.read(path)?;
        let name = path.map_or("stdin".into(), |p| p.display().to_string());
        let mut p = load_instance(&bytes, self.validation)
            .with_context(|| format!("invalid instance in {name}"))?;
        if let Some(t) = self.tolerance {
            p.set_tolerance(t);
        }
        Ok(p)
    }

    fn emit(&self, text: &str) -> anyhow::Result<()> {
        match &self.output {
            Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
            None => {
                let mut out = io::stdout().lock();
                out.write_all(text.as_bytes())?;
                out.flush()?;
                Ok(())
            }
        }
    }

    fn emit_json(&self, v: &Value) -> anyhow::Result<()> {
        let mut s = serde_json::to_string(v)?;
        s.push('\n');
        self.emit(&s)
    }
}

fn write_file(path: &Path, v: &Value) -> anyhow::Result<()> {
    fs::write(path, format!("{}\n", serde_json::to_string(v)?))
        .with_context(|| format!("cannot write {}", path.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let ctx = Ctx {
        tolerance: cli.tolerance,
        validation: if cli.skip_validation {
            Validation::Skip
        } else {
            Validation::Full
        },
        output: cli.output,
    };
    match run(&ctx, cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(ctx: &Ctx, command: Command) -> anyhow::Result<u8> {
    match command {
        Command::Generate { kind } => generate(ctx, kind),
        Command::Solve(args) => match &args.batch {
            Some(dir) => batch(ctx, &args, dir),
            None => solve(ctx, &args),
        },
        Command::Eval(args) => eval(ctx, &args),
        Command::Oracle { query } => oracle(ctx, query),
    }
}

fn generate(ctx: &Ctx, kind: Generate) -> anyhow::Result<u8> {
    match kind {
        Generate::Sat3 {
            input,
            builtin,
            r0,
            delta0,
            rho,
            meta,
        } => {
            let cnf = match builtin {
                Some(BuiltinCnf::Single) => Cnf3::single_clause(),
                Some(BuiltinCnf::Unsat) => Cnf3::all_sign_patterns(),
                None => {
                    let bytes = ctx.read(input.as_deref())?;
                    parse_dimacs(std::str::from_utf8(&bytes).context("DIMACS input is not UTF-8")?)?
                }
            };
            let inst = gen_sat3(&cnf, GadgetParams::new(r0, delta0, rho)?)?;
            if let Some(path) = meta {
                let clauses: Vec<Value> = inst
                    .clauses
                    .iter()
                    .map(|c| {
                        json!({
                            "assembly": [c.assembly.start, c.assembly.end],
                            "check": [c.check.start, c.check.end],
                            "disassembly": [c.disassembly.start, c.disassembly.end],
                        })
                    })
                    .collect();
                write_file(&path, &json!({ "k": inst.k, "clauses": clauses }))?;
            }
            ctx.emit(&save_instance(&inst.sampling))?;
        }
        Generate::Setcover { input, example } => {
            let sc = if example {
                SetCoverInstance::example()
            } else {
                let sc: SetCoverInstance = serde_json::from_slice(&ctx.read(input.as_deref())?)
                    .context("invalid set-cover JSON")?;
                sc.validate()?;
                sc
            };
            ctx.emit(&save_instance(&gen_setcover_metric(&sc)?))?;
        }
        Generate::Walkers {
            seed,
            k,
            t,
            extras,
            step,
            radius,
            dim,
            planted,
        } => {
            let (p, c) = gen_random_walkers(WalkerParams {
                seed,
                k,
                t,
                extras_per_level: extras,
                step,
                radius,
                dim,
            })?;
            if let Some(path) = planted {
                fs::write(&path, save_clustering(&c))
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            ctx.emit(&save_instance(&p))?;
        }
    }
    Ok(0)
}

fn exponent(algo: Algo) -> Option<Exponent> {
    match algo {
        Algo::MedianGreedy => Some(Exponent::One),
        Algo::MeansGreedy => Some(Exponent::Two),
        _ => None,
    }
}

fn need_k(args: &SolveArgs) -> anyhow::Result<usize> {
    args.k
        .ok_or_else(|| anyhow!("--k is required for --algo {:?}", args.algo))
}

fn run_algo(p: &TemporalSampling, args: &SolveArgs) -> anyhow::Result<SolveOutcome> {
    let (r, delta) = (args.r, args.delta);
    Ok(match args.algo {
        Algo::ExactK => solve_exact_k(p, need_k(args)?, r, delta)?,
        Algo::Bicriteria => solve_bicriteria(p, need_k(args)?, r, delta)?,
        Algo::RdsGreedy => solve_rds_greedy(p, r, delta)?,
        Algo::MedianGreedy | Algo::MeansGreedy => {
            let e = exponent(args.algo).expect("median algorithms have an exponent");
            solve_median_greedy(p, need_k(args)?, r, delta, args.epsilon, e)?
        }
    })
}

fn outcome_json(p: &TemporalSampling, out: &SolveOutcome) -> anyhow::Result<Value> {
    Ok(match out {
        SolveOutcome::Clustering(c) => json!({
            "status": "feasible",
            "trajectories": c.trajectories(),
            "stats": ClusteringStats::compute(p, c)?,
        }),
        SolveOutcome::Infeasible(cert) => {
            let mut v = serde_json::to_value(cert)?;
            v["message"] = json!(cert.to_string());
            json!({ "status": "infeasible", "certificate": v })
        }
    })
}

fn solve(ctx: &Ctx, args: &SolveArgs) -> anyhow::Result<u8> {
    let p = ctx.instance(args.input.as_deref())?;
    if let Some(path) = &args.dump_graph {
        write_file(path, &LevelGraph::build(&p, args.delta).to_debug_json())?;
    }
    if let Some(path) = &args.dump_network {
        let gamma = match args.algo {
            Algo::ExactK => 2.0 * args.r + args.delta,
            Algo::Bicriteria => args.r + args.delta,
            other => bail!("--dump-network applies to exact-k and bicriteria, not {other:?}"),
        };
        let net = CenterNetwork::build(&p, &level_nets(&p, 2.0 * args.r), gamma)?;
        write_file(path, &net.to_debug_json())?;
    }
    let out = run_algo(&p, args)?;
    ctx.emit_json(&outcome_json(&p, &out)?)?;
    Ok(if out.is_feasible() { 0 } else { EXIT_INFEASIBLE })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn batch(ctx: &Ctx, args: &SolveArgs, dir: &Path) -> anyhow::Result<u8> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<io::Result<_>>()?;
    files.retain(|f| f.extension().is_some_and(|x| x == "json"));
    files.sort();
    let rows: Vec<String> = files
        .par_iter()
        .map(|f| {
            let name = f.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
            let row = ctx
                .instance(Some(f))
                .and_then(|p| Ok((run_algo(&p, args)?, p)))
                .and_then(|(out, p)| {
                    Ok(match out {
                        SolveOutcome::Clustering(c) => {
                            let s = ClusteringStats::compute(&p, &c)?;
                            format!("feasible,{},{},{},{},{},", s.k, s.rad_inf, s.rad_1, s.rad_2, s.delta)
                        }
                        SolveOutcome::Infeasible(cert) => {
                            format!("infeasible,,,,,,{}", csv_field(&cert.to_string()))
                        }
                    })
                })
                .unwrap_or_else(|e| format!("error,,,,,,{}", csv_field(&format!("{e:#}"))));
            format!("{},{row}\n", csv_field(&name))
        })
        .collect();
    let mut text = String::from("name,status,k,rad_inf,rad_1,rad_2,delta,detail\n");
    text.extend(rows);
    ctx.emit(&text)?;
    Ok(0)
}

fn eval(ctx: &Ctx, args: &EvalArgs) -> anyhow::Result<u8> {
    let p = ctx.instance(Some(&args.input))?;
    let c: Clustering = load_clustering(&ctx.read(args.clustering.as_deref())?)
        .context("invalid clustering JSON")?;
    p.validate_clustering(&c)?;
    let objective = Objective::from(args.objective);
    if !args.check {
        ctx.emit_json(&serde_json::to_value(ClusteringStats::compute(&p, &c)?)?)?;
        return Ok(0);
    }
    let (k, r, delta) = (
        args.k.expect("clap requires k"),
        args.r.expect("clap requires r"),
        args.delta.expect("clap requires delta"),
    );
    let (k, r, delta) = match args.guarantee {
        None => (k, r, delta),
        Some(Algo::ExactK) => (k, 2.0 * r, 2.0 * r + delta),
        Some(Algo::Bicriteria) => (2 * k, 2.0 * r, r + delta),
        Some(Algo::RdsGreedy) => (usize::MAX, r, delta),
        Some(algo) => {
            let e = exponent(algo).expect("median algorithms have an exponent");
            if objective != e.objective() {
                bail!("--guarantee {algo:?} needs --objective {:?}", e.objective());
            }
            (1 + iteration_count(&p, k, args.epsilon, e), (1.0 + args.epsilon) * r, delta)
        }
    };
    let report = check_solution(&p, &c, k, r, delta, objective)?;
    let violations: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
    ctx.emit_json(&json!({
        "passed": report.passed(),
        "stats": report.stats,
        "violations": violations,
    }))?;
    Ok(if report.passed() { 0 } else { EXIT_INFEASIBLE })
}

fn oracle(ctx: &Ctx, query: OracleQuery) -> anyhow::Result<u8> {
    let common = match &query {
        OracleQuery::Feasible { common, .. }
        | OracleQuery::OptK { common, .. }
        | OracleQuery::OptR { common, .. } => common,
    };
    let p = ctx.instance(common.input.as_deref())?;
    let budget = OracleBudget {
        max_trajectories: common.max_trajectories,
        max_subsets: common.max_subsets,
    };
    let objective = Objective::from(common.objective);
    let delta = common.delta;
    let (found, v) = match query {
        OracleQuery::Feasible { k, r, .. } => match oracle_feasible(&p, k, r, delta, objective, budget)? {
            Some(c) => (true, json!({ "status": "feasible", "trajectories": c.trajectories() })),
            None => (false, json!({ "status": "infeasible" })),
        },
        OracleQuery::OptK { r, .. } => match oracle_opt_k(&p, r, delta, objective, budget)? {
            Some((k, c)) => (
                true,
                json!({ "status": "feasible", "opt_k": k, "trajectories": c.trajectories() }),
            ),
            None => (false, json!({ "status": "infeasible" })),
        },
        OracleQuery::OptR { k, .. } => match oracle_opt_r(&p, k, delta, objective, budget)? {
            Some((r, c)) => (
                true,
                json!({ "status": "feasible", "opt_r": r, "trajectories": c.trajectories() }),
            ),
            None => (false, json!({ "status": "infeasible" })),
        },
    };
    ctx.emit_json(&v)?;
    Ok(if found { 0 } else { EXIT_INFEASIBLE })
}
