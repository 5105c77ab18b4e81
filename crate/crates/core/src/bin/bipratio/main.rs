use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use bipratio::game::{approx_bipartiteness, CertificateBeta, GameParams, GameReport, GramMode, SweepReport};
use bipratio::gen::{complete, cycle, gnp, planted_bipartite};
use bipratio::io::{read_graph, write_edge_list};
use bipratio::maxcut::{guarantee, recursive_bipart, CutResult, MaxCutParams};
use bipratio::oracle::{brute_beta, brute_maxcut, brute_well_linked};
use bipratio::verify::{run_suite, CheckReport, VerifyOptions, CHECKS};
use bipratio::{tripartition, Error, Ratio, SignVector, WeightedGraph};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "bipratio", version, about = "Bipartiteness ratio approximation and max cut")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, env = "BIPRATIO_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads for the sweep over k.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Report wall-clock phases (makes output nondeterministic).
    #[arg(long, global = true)]
    timings: bool,
    /// -v logs each game, -vv each round.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Approximate the bipartiteness ratio with the cut-matching sweep.
    Approx {
        #[command(flatten)]
        input: GraphArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Exact ratio by enumeration (n <= 16), optionally well-linkedness at 1/k.
    Exact {
        #[command(flatten)]
        input: GraphArgs,
        /// Also decide well-linkedness at r = 1/k (n <= 7).
        #[arg(long)]
        k: Option<u64>,
    },
    /// Max cut by recursive bipartition.
    Maxcut {
        #[command(flatten)]
        input: GraphArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Compare with the exhaustive optimum (n <= 20).
        #[arg(long)]
        exact: bool,
        /// Known upper bound on the uncut fraction of an optimal cut.
        #[arg(long)]
        eta: Option<f64>,
    },
    /// Write a random or structured graph in edge-list format.
    Gen {
        #[command(subcommand)]
        family: Family,
        /// Output file; stdout when absent.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
        /// JSON file describing the instance.
        #[arg(long, global = true)]
        sidecar: Option<PathBuf>,
    },
    /// Run property suites; exit code 4 on any failure.
    Verify {
        /// Check id, repeatable; all checks when absent.
        #[arg(long = "check", value_parser = clap::builder::PossibleValuesParser::new(CHECKS))]
        checks: Vec<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long)]
        k: Option<u64>,
        /// Small corpus (n <= 5).
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Subcommand)]
enum Family {
    Gnp { n: usize, p: f64, w_max: u64, seed: u64 },
    PlantedBipartite { n: usize, p_cross: f64, p_noise: f64, seed: u64 },
    Cycle { n: usize },
    Complete { n: usize },
}

#[derive(Args)]
struct GraphArgs {
    /// Edge-list file.
    #[arg(long)]
    graph: PathBuf,
    /// Vertex-weight file; degrees when absent.
    #[arg(long)]
    weights: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GramArg {
    Exact,
    Approximate,
}

#[derive(Args)]
struct SolverArgs {
    /// Round cap T per game.
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, value_enum)]
    gram: Option<GramArg>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    projection_attempts: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Stop a game once λ_min(ΣF) >= 2.
    #[arg(long)]
    early_exit: bool,
}

impl SolverArgs {
    fn game_params(&self, n: usize, seed: u64) -> GameParams {
        let mut p = GameParams::for_graph(n, seed);
        if let Some(t) = self.rounds {
            p.rounds = t;
        }
        if let Some(d) = self.delta {
            p.delta = d;
        }
        if let Some(g) = self.gram {
            p.gram = match g {
                GramArg::Exact => GramMode::Exact,
                GramArg::Approximate => GramMode::Approximate,
            };
        }
        if let Some(e) = self.eps {
            p.eps = e;
        }
        if let Some(a) = self.projection_attempts {
            p.projection_attempts = a;
        }
        if let Some(r) = self.restarts {
            p.restarts = r;
        }
        p.early_exit = self.early_exit;
        p
    }
}

/// A command's failure and its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::GameFailed { .. }
            | Error::RoundFail { .. }
            | Error::NumericalFailure { .. }
            | Error::RecursionLimit(_)
            | Error::SaturatingFlow
            | Error::MalformedPath
            | Error::DegreeOverflow { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Text or JSON, plus the exit code to finish with.
struct Output {
    text: String,
    code: u8,
}

struct Ctx {
    json: bool,
    seed: u64,
    jobs: usize,
    timings: bool,
    phases: Vec<(&'static str, f64)>,
    clock: Instant,
}

impl Ctx {
    fn lap(&mut self, phase: &'static str) {
        let now = Instant::now();
        self.phases.push((phase, (now - self.clock).as_secs_f64() * 1e3));
        self.clock = now;
    }

    fn timings_json(&self) -> Value {
        if self.timings {
            Value::Object(self.phases.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
        } else {
            Value::Null
        }
    }

    fn timings_text(&self, out: &mut String) {
        if self.timings {
            for (phase, ms) in &self.phases {
                let _ = writeln!(out, "time {phase}: {ms:.3} ms");
            }
        }
    }

    fn report(&self, graph: Option<&WeightedGraph>, mode: &str, params: Value, result: Value) -> String {
        let value = json!({
            "graph": graph.map(graph_json),
            "mode": mode,
            "params": params,
            "result": result,
            "timings_ms": self.timings_json(),
            "seed": self.seed,
            "version": env!("CARGO_PKG_VERSION"),
        });
        let mut s = serde_json::to_string_pretty(&value).expect("report serializes");
        s.push('\n');
        s
    }
}

fn graph_json(g: &WeightedGraph) -> Value {
    json!({ "n": g.n(), "m": g.m(), "total_weight": g.total_weight() })
}

fn ratio_json(r: Ratio) -> Value {
    let r = r.reduced();
    json!({ "fraction": r.to_string(), "num": r.num(), "den": r.den(), "decimal": r.decimal() })
}

fn ratio_text(r: Ratio) -> String {
    format!("{r} = {}", r.decimal())
}

fn one_based(set: &[usize]) -> Vec<usize> {
    set.iter().map(|&i| i + 1).collect()
}

fn list(set: &[usize]) -> String {
    if set.is_empty() {
        "-".into()
    } else {
        one_based(set).iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
    }
}

fn signs(x: &SignVector) -> String {
    x.as_slice().iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

fn sign_json(x: &SignVector) -> Value {
    let parts = tripartition(x);
    json!({
        "x": x.as_slice(),
        "left": one_based(&parts.left),
        "right": one_based(&parts.right),
        "zero": one_based(&parts.zero),
    })
}

fn load(input: &GraphArgs) -> Result<WeightedGraph, Failure> {
    Ok(read_graph(&input.graph, input.weights.as_deref())?)
}

fn graph_line(g: &WeightedGraph) -> String {
    format!("graph: n={} m={} w(E)={} b(V)={}\n", g.n(), g.m(), g.total_weight(), g.total_b())
}

/// `β_H / (2 k T)`, the rerouting lower bound on `β_b(G)`.
fn certified_bound(report: &GameReport) -> Option<f64> {
    let cert = report.outcome.certificate()?;
    let bh = match cert.beta_h {
        CertificateBeta::Exact(r) => r.to_f64(),
        CertificateBeta::LowerBound(l) => l,
        CertificateBeta::Unknown => return None,
    };
    Some(bh / (2.0 * report.k as f64 * cert.rounds as f64))
}

fn certificate_json(report: &GameReport) -> Value {
    let Some(cert) = report.outcome.certificate() else {
        return Value::Null;
    };
    let beta_h = match cert.beta_h {
        CertificateBeta::Exact(r) => json!({ "kind": "exact", "value": ratio_json(r) }),
        CertificateBeta::LowerBound(l) => json!({ "kind": "lower_bound", "value": l }),
        CertificateBeta::Unknown => json!({ "kind": "unknown" }),
    };
    json!({
        "k": report.k,
        "rounds": cert.rounds,
        "lambda_min": cert.lambda_min,
        "loss_total": cert.loss_total,
        "beta_h": beta_h,
        "h_paths": cert.h.total_paths(),
        "lower_bound": certified_bound(report),
        "restarts_used": report.restarts_used,
    })
}

fn sweep_json(r: &SweepReport) -> Value {
    json!({
        "beta": ratio_json(r.beta_best),
        "witness": sign_json(&r.x_best),
        "sweep_exponent": r.sweep_exponent,
        "k_cert": r.k_cert,
        "r_cert": r.r_cert.map(ratio_json),
        "certificate": r.certificate.as_ref().map(certificate_json),
        "games": r.games,
        "rounds_total": r.rounds_total,
        "flow_solves": r.flow_solves,
    })
}

fn cmd_approx(ctx: &mut Ctx, input: &GraphArgs, solver: &SolverArgs) -> Result<Output, Failure> {
    let g = load(input)?;
    ctx.lap("parse");
    let params = solver.game_params(g.n(), ctx.seed);
    let r = approx_bipartiteness(&g, &params, ctx.jobs)?;
    ctx.lap("solve");
    if ctx.json {
        let p = json!({ "game": params, "jobs": ctx.jobs });
        return Ok(Output {
            text: ctx.report(Some(&g), "approx", p, sweep_json(&r)),
            code: 0,
        });
    }
    let parts = tripartition(&r.x_best);
    let mut out = graph_line(&g);
    let _ = writeln!(out, "beta: {}", ratio_text(r.beta_best));
    let _ = writeln!(out, "x: {}", signs(&r.x_best));
    let _ = writeln!(out, "L: {}", list(&parts.left));
    let _ = writeln!(out, "R: {}", list(&parts.right));
    let _ = writeln!(
        out,
        "sweep: k = 1..{} ({} games), {} rounds, {} flow solves",
        1u64 << r.sweep_exponent,
        r.games.len(),
        r.rounds_total,
        r.flow_solves
    );
    match (&r.certificate, r.r_cert) {
        (Some(report), Some(rc)) => {
            let cert = report.outcome.certificate().expect("certificate outcome");
            let _ = writeln!(out, "r_cert: {rc} (k = {}, T = {})", report.k, cert.rounds);
            if let Some(l) = cert.lambda_min {
                let _ = writeln!(out, "lambda_min: {l:.9}");
            }
            match cert.beta_h {
                CertificateBeta::Exact(bh) => {
                    let _ = writeln!(out, "beta_H: {}", ratio_text(bh));
                }
                CertificateBeta::LowerBound(l) => {
                    let _ = writeln!(out, "beta_H >= {l:.9}");
                }
                CertificateBeta::Unknown => {}
            }
            if let Some(lb) = certified_bound(report) {
                let _ = writeln!(out, "certified: beta >= beta_H/(2kT) = {lb:.9e}");
            }
        }
        _ => out.push_str("r_cert: none\n"),
    }
    ctx.timings_text(&mut out);
    Ok(Output { text: out, code: 0 })
}

fn cmd_exact(ctx: &mut Ctx, input: &GraphArgs, k: Option<u64>) -> Result<Output, Failure> {
    let g = load(input)?;
    ctx.lap("parse");
    let b = brute_beta(&g)?;
    let linked = k.map(|k| brute_well_linked(&g, k).map(|w| (k, w))).transpose()?;
    ctx.lap("solve");
    if ctx.json {
        let linked_json = linked.as_ref().map(|(k, w)| {
            json!({
                "k": k,
                "linked": w.linked,
                "violating_pair": w.violating_pair.as_ref().map(|(l, r)| json!({
                    "left": one_based(l),
                    "right": one_based(r),
                })),
            })
        });
        let result = json!({
            "beta": ratio_json(b.beta),
            "argmin": sign_json(&b.argmin),
            "well_linked": linked_json,
        });
        return Ok(Output {
            text: ctx.report(Some(&g), "exact", json!({ "k": k }), result),
            code: 0,
        });
    }
    let mut out = graph_line(&g);
    let _ = writeln!(out, "beta: {}", ratio_text(b.beta));
    let _ = writeln!(out, "x: {}", signs(&b.argmin));
    if let Some((k, w)) = linked {
        match &w.violating_pair {
            None => {
                let _ = writeln!(out, "well-linked at r = 1/{k}: yes");
            }
            Some((l, r)) => {
                let _ = writeln!(
                    out,
                    "well-linked at r = 1/{k}: no (L = {}, R = {})",
                    list(l),
                    list(r)
                );
            }
        }
    }
    ctx.timings_text(&mut out);
    Ok(Output { text: out, code: 0 })
}

fn cut_json(r: &CutResult) -> Value {
    let levels: Vec<Value> = r
        .levels
        .iter()
        .map(|l| {
            json!({
                "depth": l.depth,
                "n": l.n,
                "left": one_based(&l.left),
                "right": one_based(&l.right),
                "zero": one_based(&l.zero),
                "isolated": one_based(&l.isolated),
                "beta": ratio_json(l.beta),
                "w_inside": l.w_inside,
                "w_cross_zero": l.w_cross_zero,
                "vol_lr": l.vol_lr,
                "uncut_level": l.uncut_level,
                "uncut_rec": l.uncut_rec,
                "flipped": l.flipped,
                "accounting_holds": l.accounting_holds(),
                "level_bound_holds": l.level_bound_holds(),
            })
        })
        .collect();
    json!({
        "value": ratio_json(r.value),
        "side": one_based(&r.side),
        "uncut_weight": r.uncut_weight,
        "levels": levels,
        "flow_solves": r.flow_solves,
    })
}

fn cmd_maxcut(
    ctx: &mut Ctx,
    input: &GraphArgs,
    solver: &SolverArgs,
    exact: bool,
    eta: Option<f64>,
) -> Result<Output, Failure> {
    let g = load(input)?;
    if !g.has_degree_weights() && input.weights.is_some() {
        log::warn!("max cut recomputes b = deg at every level; the weights file is ignored");
    }
    ctx.lap("parse");
    let mut params = MaxCutParams::new(ctx.seed);
    params.rounds = solver.rounds;
    params.early_exit = solver.early_exit;
    params.jobs = ctx.jobs;
    if let Some(d) = solver.delta {
        params.delta = d;
    }
    let r = recursive_bipart(&g, &params)?;
    let optimum = if exact { Some(brute_maxcut(&g)?) } else { None };
    ctx.lap("solve");

    let measured_eta = optimum.as_ref().map(|o| 1.0 - o.value.to_f64());
    let eta = eta.or(measured_eta);
    let c = 10.0 * (g.n() as f64).ln();
    let bound = eta.map(|e| guarantee(e, c));

    if ctx.json {
        let mut result = cut_json(&r);
        result["optimum"] = optimum.as_ref().map_or(Value::Null, |o| {
            json!({ "value": ratio_json(o.value), "side": one_based(&o.side) })
        });
        result["eta"] = json!(eta);
        result["guarantee"] = json!(bound);
        return Ok(Output {
            text: ctx.report(Some(&g), "maxcut", json!({ "solver": params, "exact": exact }), result),
            code: 0,
        });
    }
    let mut out = graph_line(&g);
    let _ = writeln!(out, "cut: {}", ratio_text(r.value));
    let _ = writeln!(out, "S: {}", list(&r.side));
    let _ = writeln!(out, "uncut weight: {}", r.uncut_weight);
    for l in &r.levels {
        let _ = writeln!(
            out,
            "level {}: n={} |L|={} |R|={} |Z|={} beta={} uncut={} (level bound {})",
            l.depth,
            l.n,
            l.left.len(),
            l.right.len(),
            l.zero.len(),
            l.beta,
            l.uncut_level,
            if l.accounting_holds() && l.level_bound_holds() { "ok" } else { "VIOLATED" }
        );
    }
    if let Some(o) = &optimum {
        let _ = writeln!(out, "optimum: {}", ratio_text(o.value));
        let _ = writeln!(out, "ratio to optimum: {:.9}", r.value.to_f64() / o.value.to_f64());
    }
    if let (Some(e), Some(b)) = (eta, bound) {
        let met = r.value.to_f64() >= b;
        let _ = writeln!(
            out,
            "bound: 1 - {c:.4} * eta * ln(3/eta) = {b:.9} at eta = {e:.9} ({})",
            if met { "met" } else { "not met" }
        );
    }
    ctx.timings_text(&mut out);
    Ok(Output { text: out, code: 0 })
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::from(Error::Io(format!("{}: {e}", path.display()))))
}

fn cmd_gen(
    ctx: &mut Ctx,
    family: &Family,
    out_path: Option<&Path>,
    sidecar: Option<&Path>,
) -> Result<Output, Failure> {
    let (g, meta) = match *family {
        Family::Gnp { n, p, w_max, seed } => (
            gnp(n, p, w_max, seed)?,
            json!({ "generator": "gnp", "n": n, "p": p, "w_max": w_max, "seed": seed }),
        ),
        Family::PlantedBipartite { n, p_cross, p_noise, seed } => {
            let (g, meta) = planted_bipartite(n, p_cross, p_noise, seed)?;
            let mut m = serde_json::to_value(&meta).expect("metadata serializes");
            m["generator"] = json!("planted-bipartite");
            (g, m)
        }
        Family::Cycle { n } => (cycle(n)?, json!({ "generator": "cycle", "n": n })),
        Family::Complete { n } => (complete(n)?, json!({ "generator": "complete", "n": n })),
    };
    ctx.lap("generate");
    let text = write_edge_list(g.n(), g.edges());
    if let Some(path) = sidecar {
        let mut s = serde_json::to_string_pretty(&meta).expect("metadata serializes");
        s.push('\n');
        write_file(path, &s)?;
    }
    let Some(path) = out_path else {
        return Ok(Output { text, code: 0 });
    };
    write_file(path, &text)?;
    let summary = if ctx.json {
        ctx.report(Some(&g), "gen", meta, json!({ "out": path.display().to_string() }))
    } else {
        format!("wrote {} ({} vertices, {} edges)\n", path.display(), g.n(), g.m())
    };
    Ok(Output { text: summary, code: 0 })
}

fn check_text(r: &CheckReport, out: &mut String) {
    let _ = writeln!(
        out,
        "{} {} {}/{}{}",
        if r.ok { "PASS" } else { "FAIL" },
        r.id,
        r.passed,
        r.trials,
        if r.required < r.trials { format!(" (need {})", r.required) } else { String::new() }
    );
    for note in &r.notes {
        let _ = writeln!(out, "    note: {note}");
    }
    for f in &r.failures {
        let _ = writeln!(out, "    failure: {f}");
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    ctx: &mut Ctx,
    checks: &[String],
    n: Option<usize>,
    trials: Option<usize>,
    graph: Option<&Path>,
    weights: Option<&Path>,
    k: Option<u64>,
    quick: bool,
) -> Result<Output, Failure> {
    let graph = graph.map(|p| read_graph(p, weights)).transpose()?;
    ctx.lap("parse");
    let ids: Vec<&str> = if checks.is_empty() {
        CHECKS.to_vec()
    } else {
        checks.iter().map(String::as_str).collect()
    };
    let opts = VerifyOptions {
        seed: ctx.seed,
        n,
        trials,
        graph: graph.clone(),
        k,
        quick,
    };
    let reports = run_suite(&ids, &opts)?;
    ctx.lap("verify");
    let passed = reports.iter().filter(|r| r.ok).count();
    let code = if passed == reports.len() { 0 } else { 4 };
    if ctx.json {
        let params = json!({ "checks": ids, "n": n, "trials": trials, "k": k, "quick": quick });
        let result = json!({ "passed": passed, "total": reports.len(), "checks": reports });
        return Ok(Output {
            text: ctx.report(graph.as_ref(), "verify", params, result),
            code,
        });
    }
    let mut out = String::new();
    for r in &reports {
        check_text(r, &mut out);
    }
    let _ = writeln!(out, "verify: {passed}/{} checks passed", reports.len());
    ctx.timings_text(&mut out);
    Ok(Output { text: out, code })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let mut ctx = Ctx {
        json: cli.json,
        seed: cli.seed,
        jobs: cli.jobs.max(1),
        timings: cli.timings,
        phases: Vec::new(),
        clock: Instant::now(),
    };
    match &cli.command {
        Command::Approx { input, solver } => cmd_approx(&mut ctx, input, solver),
        Command::Exact { input, k } => cmd_exact(&mut ctx, input, *k),
        Command::Maxcut { input, solver, exact, eta } => cmd_maxcut(&mut ctx, input, solver, *exact, *eta),
        Command::Gen { family, out, sidecar } => cmd_gen(&mut ctx, family, out.as_deref(), sidecar.as_deref()),
        Command::Verify { checks, n, trials, graph, weights, k, quick } => cmd_verify(
            &mut ctx,
            checks,
            *n,
            *trials,
            graph.as_deref(),
            weights.as_deref(),
            *k,
            *quick,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
