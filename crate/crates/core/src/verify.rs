//! Property suites over seeded corpora, shared by the CLI and the tests.

use std::ops::RangeInclusive;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{
    build_network, consistent_min_cut, drop_inconsistent, is_saturating, max_flow,
    residual_source_side,
};
use crate::game::{cut_matching_game, Certificate, CertificateBeta, GameOutcome, GameParams, GameReport, RoundRecord};
use crate::gen::{all_connected_graphs, connected_gnp, random_bipartite};
use crate::graph::{aux_cut_ratio, evaluate_beta, tripartition, AuxiliaryGraph, Edge, SignVector, WeightedGraph};
use crate::maxcut::{guarantee, recursive_bipart, MaxCutParams};
use crate::oracle::{brute_beta, brute_maxcut, brute_well_linked};
use crate::ratio::Ratio;
use crate::spectral::{
    approx_gram, exact_gram, mmwu_density, project, sym_eigen, taylor_exp_apply, MmwuState,
    DEFAULT_DELTA, LOSS_BOUND, ACCEPT_MASS,
};
use crate::spectral::gram::{centred_exponent, default_tau, jl_sketch, sketch_dimension, taylor_order};

/// Check ids in suite order.
pub const CHECKS: [&str; 10] = [
    "claim",
    "thm-linked",
    "consistent-cut",
    "witness",
    "regret",
    "demand-degree",
    "certificate",
    "gram",
    "rounding",
    "maxcut",
];

const SHOWN_FAILURES: usize = 5;

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Instance size, where a check has one.
    pub n: Option<usize>,
    pub trials: Option<usize>,
    /// Runs graph-based checks on this graph only.
    pub graph: Option<WeightedGraph>,
    pub k: Option<u64>,
    /// Corpus restricted to `n <= 5` and fewer trials.
    pub quick: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub id: &'static str,
    pub ok: bool,
    pub trials: usize,
    pub passed: usize,
    /// Passing trials needed.
    pub required: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

/// Accumulates trial outcomes of one check.
struct Tally {
    id: &'static str,
    trials: usize,
    passed: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new(id: &'static str) -> Self {
        Tally {
            id,
            trials: 0,
            passed: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.trials += 1;
        if ok {
            self.passed += 1;
        } else if self.failures.len() < SHOWN_FAILURES {
            self.failures.push(describe());
        }
    }

    fn finish(self, required: usize) -> CheckReport {
        CheckReport {
            id: self.id,
            ok: self.passed >= required,
            trials: self.trials,
            passed: self.passed,
            required,
            failures: self.failures,
            notes: self.notes,
        }
    }

    fn all(self) -> CheckReport {
        let t = self.trials;
        self.finish(t)
    }

    /// At least `fraction` of trials.
    fn fraction(self, fraction: f64) -> CheckReport {
        let required = (fraction * self.trials as f64).ceil() as usize;
        self.finish(required)
    }
}

fn check_rng(seed: u64, id: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stream = CHECKS.iter().position(|c| *c == id).unwrap_or(CHECKS.len());
    rng.set_stream(stream as u64);
    rng
}

pub fn run_check(id: &str, opts: &VerifyOptions) -> Result<CheckReport> {
    let id: &'static str = CHECKS
        .iter()
        .find(|c| **c == id)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown check {id:?}")))?;
    let mut rng = check_rng(opts.seed, id);
    match id {
        "claim" => check_claim(opts, &mut rng),
        "thm-linked" => check_thm_linked(opts, &mut rng),
        "consistent-cut" => check_consistent_cut(opts, &mut rng),
        "witness" | "regret" | "demand-degree" | "certificate" => {
            let runs = game_corpus_for(opts, &mut rng)?;
            Ok(match id {
                "witness" => check_witness(&runs),
                "regret" => check_regret(&runs, opts.quick),
                "demand-degree" => check_demand_degree(&runs),
                _ => check_certificate(&runs)?,
            })
        }
        "gram" => check_gram(opts, &mut rng),
        "rounding" => check_rounding(opts, &mut rng),
        _ => check_maxcut(opts, &mut rng),
    }
}

pub fn run_suite(ids: &[&str], opts: &VerifyOptions) -> Result<Vec<CheckReport>> {
    ids.iter().map(|id| run_check(id, opts)).collect()
}

// ---------------------------------------------------------------- corpora

/// Random graph, possibly disconnected, with weights in `1..=w_max` and
/// vertex weights in `1..=b_max`.
pub fn random_instance<R: Rng + ?Sized>(n: usize, w_max: u64, b_max: u64, rng: &mut R) -> WeightedGraph {
    let p: f64 = rng.random_range(0.1..0.9);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push(Edge::new(u, v, rng.random_range(1..=w_max)));
            }
        }
    }
    let b = (0..n).map(|_| rng.random_range(1..=b_max)).collect();
    WeightedGraph::new(n, edges, b).expect("random instance is valid")
}

pub fn random_sign_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SignVector {
    loop {
        let x: Vec<i8> = (0..n).map(|_| rng.random_range(-1..=1)).collect();
        if x.iter().any(|&s| s != 0) {
            return SignVector::new(x).expect("entries are signs");
        }
    }
}

/// Unit-weight connected graph with `b = deg`.
fn random_unit_connected<R: Rng + ?Sized>(n: usize, rng: &mut R) -> WeightedGraph {
    let p = rng.random_range(0.1..0.8);
    connected_gnp(n, p, 1, rng)
}

/// Every connected graph on at most `max_n` vertices, then `random` unit
/// connected graphs with sizes drawn from `sizes`.
pub fn linked_corpus<R: Rng + ?Sized>(
    max_n: usize,
    random: usize,
    sizes: RangeInclusive<usize>,
    rng: &mut R,
) -> Vec<WeightedGraph> {
    let mut out: Vec<WeightedGraph> = (2..=max_n).flat_map(all_connected_graphs).collect();
    for _ in 0..random {
        let n = rng.random_range(sizes.clone());
        out.push(random_unit_connected(n, rng));
    }
    out
}

fn linked_corpus_for<R: Rng + ?Sized>(opts: &VerifyOptions, rng: &mut R) -> Vec<WeightedGraph> {
    if let Some(g) = &opts.graph {
        return vec![g.clone()];
    }
    if let Some(n) = opts.n {
        let trials = opts.trials.unwrap_or(100);
        return (0..trials).map(|_| random_unit_connected(n, rng)).collect();
    }
    if opts.quick {
        linked_corpus(4, opts.trials.unwrap_or(20), 5..=5, rng)
    } else {
        linked_corpus(5, opts.trials.unwrap_or(100), 6..=7, rng)
    }
}

fn ks_for(opts: &VerifyOptions, default: &[u64]) -> Vec<u64> {
    opts.k.map_or_else(|| default.to_vec(), |k| vec![k])
}

/// One game report with the graph it was played on.
#[derive(Debug, Clone)]
pub struct GameRun {
    pub graph: WeightedGraph,
    pub report: GameReport,
}

/// Games at every `k` in `ks` on `graphs` random connected graphs with
/// sizes in `sizes`, weights up to 4 and, on every other graph, random
/// vertex weights up to 5 instead of degrees.
pub fn game_corpus<R: Rng + ?Sized>(
    graphs: usize,
    sizes: RangeInclusive<usize>,
    ks: &[u64],
    rng: &mut R,
) -> Result<Vec<GameRun>> {
    let mut out = Vec::new();
    for i in 0..graphs {
        let n = rng.random_range(sizes.clone());
        let p = rng.random_range(0.2..0.9);
        let mut g = connected_gnp(n, p, 4, rng);
        if i % 2 == 1 {
            let b = (0..n).map(|_| rng.random_range(1..=5)).collect();
            g = g.with_weights(b)?;
        }
        let seed = rng.random();
        out.extend(play_all(&g, ks, seed)?);
    }
    Ok(out)
}

fn play_all(graph: &WeightedGraph, ks: &[u64], seed: u64) -> Result<Vec<GameRun>> {
    let params = GameParams::for_graph(graph.n(), seed);
    ks.iter()
        .map(|&k| {
            Ok(GameRun {
                graph: graph.clone(),
                report: cut_matching_game(graph, k, &params)?,
            })
        })
        .collect()
}

fn game_corpus_for<R: Rng + ?Sized>(opts: &VerifyOptions, rng: &mut R) -> Result<Vec<GameRun>> {
    let ks = ks_for(opts, &[1, 2, 4, 8, 16]);
    if let Some(g) = &opts.graph {
        return play_all(g, &ks, opts.seed);
    }
    let sizes = match opts.n {
        Some(n) => n..=n,
        None if opts.quick => 2..=5,
        None => 3..=8,
    };
    let graphs = opts.trials.unwrap_or(if opts.quick { 10 } else { 60 });
    game_corpus(graphs, sizes, &ks, rng)
}

fn describe(graph: &WeightedGraph) -> String {
    format!("n={} m={} w(E)={}", graph.n(), graph.m(), graph.total_weight())
}

// ------------------------------------------------------------------ checks

fn check_claim(opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<CheckReport> {
    let mut tally = Tally::new("claim");
    let graphs: Vec<WeightedGraph> = match &opts.graph {
        Some(g) => vec![g.clone()],
        None => {
            let max_n = opts.n.unwrap_or(if opts.quick { 5 } else { 8 });
            let count = opts.trials.unwrap_or(if opts.quick { 100 } else { 500 });
            (0..count)
                .map(|_| {
                    let n = rng.random_range(1..=max_n);
                    random_instance(n, 5, 5, rng)
                })
                .collect()
        }
    };
    for g in &graphs {
        let aux = AuxiliaryGraph::build(g);
        for _ in 0..20 {
            let x = random_sign_vector(g.n(), rng);
            let parts = tripartition(&x);
            let direct = evaluate_beta(g, &x)?;
            let via_aux = aux_cut_ratio(&aux, &parts.left, &parts.right)?;
            tally.record(direct == via_aux, || {
                format!("{}: x={:?} beta={direct} aux={via_aux}", describe(g), x.as_slice())
            });
        }
    }
    Ok(tally.all())
}

fn check_thm_linked(opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<CheckReport> {
    let mut tally = Tally::new("thm-linked");
    let ks = ks_for(opts, &[1, 2, 3, 4]);
    for g in linked_corpus_for(opts, rng) {
        let beta = brute_beta(&g)?.beta;
        let mut agree = true;
        let mut detail = String::new();
        for &k in &ks {
            let linked = brute_well_linked(&g, k)?.linked;
            if linked != beta.at_least_reciprocal(k) {
                agree = false;
                detail = format!("{}: beta={beta} k={k} linked={linked}", describe(&g));
            }
        }
        tally.record(agree, || detail);
    }
    Ok(tally.all())
}

fn check_consistent_cut(opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<CheckReport> {
    let mut tally = Tally::new("consistent-cut");
    let corpus = linked_corpus_for(opts, rng);
    let ks = ks_for(opts, &[1, 2, 3, 4]);
    let target = match (&opts.graph, opts.trials) {
        (_, Some(t)) => t,
        (Some(_), None) => 20,
        (None, None) if opts.quick => 50,
        (None, None) => 200,
    };
    let mut draws = 0;
    while tally.trials < target {
        draws += 1;
        if draws > 1000 * target {
            tally.notes.push(format!("only {} non-saturating networks found", tally.trials));
            break;
        }
        let g = &corpus[rng.random_range(0..corpus.len())];
        let k = ks[rng.random_range(0..ks.len())];
        let x = random_sign_vector(g.n(), rng);
        let parts = tripartition(&x);
        let aux = AuxiliaryGraph::build(g);
        let net = build_network(&aux, &parts.left, &parts.right, k)?;
        let flow = max_flow(&net);
        if is_saturating(&net, &flow) {
            continue;
        }
        let reduced = drop_inconsistent(&net, &residual_source_side(&net, &flow));
        let capacity = net.cut_capacity(&reduced);
        let cut = consistent_min_cut(&net, &flow)?;
        let beta = evaluate_beta(g, &cut)?;
        tally.record(capacity == flow.value && beta.below_reciprocal(k), || {
            format!(
                "{}: L={:?} R={:?} k={k} flow={} reduced cut={capacity} beta={beta}",
                describe(g),
                parts.left,
                parts.right,
                flow.value
            )
        });
    }
    Ok(tally.all())
}

fn check_witness(runs: &[GameRun]) -> CheckReport {
    let mut tally = Tally::new("witness");
    for run in runs {
        if let GameOutcome::Witness { x, beta } = &run.report.outcome {
            let k = run.report.k;
            let exact = evaluate_beta(&run.graph, x).map(|b| b == *beta).unwrap_or(false);
            tally.record(exact && beta.below_reciprocal(k), || {
                format!("{}: k={k} beta={beta}", describe(&run.graph))
            });
        }
    }
    tally.all()
}

/// `λ_min(Σ F_t) - ((1 - ρδ) Σ ⟨F_t, X_t⟩ - ln n / δ)`.
pub fn regret_slack(n: usize, certificate: &Certificate, delta: f64) -> Option<f64> {
    let lambda = certificate.lambda_min?;
    let ln_n = (n.max(1) as f64).ln();
    Some(lambda - ((1.0 - LOSS_BOUND * delta) * certificate.loss_total - ln_n / delta))
}

fn check_regret(runs: &[GameRun], quick: bool) -> CheckReport {
    let mut tally = Tally::new("regret");
    for run in runs {
        let Some(cert) = run.report.outcome.certificate() else {
            continue;
        };
        if run.graph.n() > 12 {
            continue;
        }
        let slack = regret_slack(run.graph.n(), cert, DEFAULT_DELTA);
        tally.record(slack.is_some_and(|s| s >= -1e-6), || {
            format!("{}: k={} slack={slack:?}", describe(&run.graph), run.report.k)
        });
    }
    if tally.trials == 0 && !quick {
        tally.notes.push("no certificate in the corpus".into());
    }
    tally.all()
}

/// Degree law and `λ_max(F_t) <= 4` on a Match round.
pub fn match_round_ok(r: &RoundRecord) -> bool {
    r.degree_law == Some(true) && r.loss_lambda_max.is_none_or(|l| l <= LOSS_BOUND + 1e-8)
}

fn check_demand_degree(runs: &[GameRun]) -> CheckReport {
    let mut tally = Tally::new("demand-degree");
    for run in runs {
        for r in run.report.trace.iter().filter(|r| r.matched) {
            tally.record(match_round_ok(r), || {
                format!(
                    "{}: k={} round {} lambda_max={:?}",
                    describe(&run.graph),
                    run.report.k,
                    r.round,
                    r.loss_lambda_max
                )
            });
        }
    }
    tally.all()
}

/// `β_G · factor · k · T >= β_H`, exactly.
pub fn rerouting_holds(beta_g: Ratio, beta_h: Ratio, k: u64, rounds: usize, factor: u64) -> bool {
    let m = factor as u128 * k as u128 * rounds as u128;
    let lhs = beta_g.num() as u128 * beta_h.den() as u128;
    let rhs = beta_h.num() as u128 * beta_g.den() as u128;
    // lhs * m >= rhs  ⇔  lhs >= ⌈rhs / m⌉
    lhs >= rhs.div_ceil(m.max(1))
}

/// Every round's usage of each auxiliary copy stays within `w(e) · k`.
pub fn congestion_holds(graph: &WeightedGraph, k: u64, certificate: &Certificate) -> bool {
    certificate.ledgers.iter().all(|ledger| {
        ledger
            .usage
            .iter()
            .all(|(&e, u)| u[0].max(u[1]) <= graph.edges()[e].w * k)
    })
}

fn check_certificate(runs: &[GameRun]) -> Result<CheckReport> {
    let mut tally = Tally::new("certificate");
    let mut stated = 0;
    for run in runs {
        let Some(cert) = run.report.outcome.certificate() else {
            continue;
        };
        let k = run.report.k;
        let spectral = match (cert.beta_h, cert.lambda_min) {
            (CertificateBeta::Exact(bh), Some(l)) => bh.to_f64() >= l / 2.0 - 1e-7,
            (CertificateBeta::LowerBound(_), _) | (_, None) => true,
            (CertificateBeta::Unknown, _) => true,
        };
        let mut sound = true;
        if let CertificateBeta::Exact(bh) = cert.beta_h {
            let bg = brute_beta(&run.graph)?.beta;
            sound = rerouting_holds(bg, bh, k, cert.rounds, 2);
            stated += rerouting_holds(bg, bh, k, cert.rounds, 1) as usize;
        }
        let congestion = congestion_holds(&run.graph, k, cert);
        tally.record(spectral && sound && congestion, || {
            format!(
                "{}: k={k} T={} beta_h={:?} lambda_min={:?} spectral={spectral} rerouting={sound} congestion={congestion}",
                describe(&run.graph),
                cert.rounds,
                cert.beta_h,
                cert.lambda_min
            )
        });
    }
    tally.notes.push(format!(
        "beta(G) >= beta(H)/(kT) without the factor 2 of two auxiliary copies: {stated}/{}",
        tally.trials
    ));
    Ok(tally.all())
}

/// One comparison of sketched against exact Gram vectors.
#[derive(Debug, Clone, Serialize)]
pub struct GramAudit {
    pub n: usize,
    pub norms_ok: bool,
    pub pairs_ok: bool,
    /// `‖Y′ - Y″‖₂` for the sketch and Taylor order of the run, when the
    /// sketch preserved `tr(exp A)` within `1 ± ε`.
    pub taylor_error: Option<f64>,
    /// `12 n^{3/2} τ / max b`.
    pub taylor_bound: f64,
}

impl GramAudit {
    pub fn bounds_ok(&self) -> bool {
        self.norms_ok && self.pairs_ok
    }

    pub fn taylor_ok(&self) -> bool {
        self.taylor_error.is_none_or(|e| e <= self.taylor_bound + 1e-9)
    }
}

fn spectral_norm(m: &DMatrix<f64>) -> Result<f64> {
    let e = sym_eigen(m)?;
    Ok(e.min().abs().max(e.max().abs()))
}

fn scaled_outer(w: &DMatrix<f64>, b: &[u64]) -> DMatrix<f64> {
    let mut y = w * w.transpose();
    let trace = y.trace();
    for i in 0..b.len() {
        for j in 0..b.len() {
            y[(i, j)] /= (b[i] as f64 * b[j] as f64).sqrt() * trace;
        }
    }
    y
}

/// Compares `W = exp(A/2) Uᵀ` with its truncated Taylor series through the
/// normalized Gram matrices `Y′`, `Y″`, conditioned on the sketch keeping
/// `tr(W Wᵀ)` within `(1 ± ε) tr(exp A)`.
pub fn taylor_audit(
    a: &DMatrix<f64>,
    b: &[u64],
    u: &DMatrix<f64>,
    k: usize,
    eps: f64,
) -> Result<Option<f64>> {
    let eig = sym_eigen(a)?;
    let w = eig.apply(|x| (x / 2.0).exp()) * u.transpose();
    let trace_exp: f64 = eig.values.iter().map(|x| x.exp()).sum();
    if (w.norm_squared() - trace_exp).abs() > eps * trace_exp {
        return Ok(None);
    }
    let z = taylor_exp_apply(a, u, k);
    Ok(Some(spectral_norm(&(scaled_outer(&w, b) - scaled_outer(&z, b)))?))
}

/// Random accumulated loss with top eigenvalue uniform in `[0, 64]` and
/// vertex weights in `1..=5`; sketched vectors at `ε = 1/4`, default `τ`.
pub fn gram_audit<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<GramAudit> {
    let eps = 0.25;
    let tau = default_tau(n);
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let mut acc = &g * g.transpose();
    let top = sym_eigen(&acc)?.max();
    acc *= rng.random_range(0.0..64.0) / top.max(1e-12);
    let b: Vec<u64> = (0..n).map(|_| rng.random_range(1..=5)).collect();

    let mut state = MmwuState::new(n, DEFAULT_DELTA);
    state.update(&acc);
    let exact = exact_gram(&mmwu_density(&state)?, &b)?;
    let approx = approx_gram(&acc, DEFAULT_DELTA, &b, eps, tau, rng);
    let norms_ok = (0..n).all(|i| {
        let (e, a) = (exact.norm_sq(i), approx.norm_sq(i));
        (a - e).abs() <= eps * e + tau
    });
    let pairs_ok = (0..n).all(|i| {
        (i..n).all(|j| {
            let (e, a) = (exact.pair_sum_sq(i, j), approx.pair_sum_sq(i, j));
            (a - e).abs() <= eps * e + tau
        })
    });

    let (a, radius) = centred_exponent(&acc, DEFAULT_DELTA);
    let u = jl_sketch(sketch_dimension(n, eps), n, rng);
    let taylor_error = taylor_audit(&a, &b, &u, taylor_order(radius, n, tau), eps)?;
    let max_b = *b.iter().max().expect("n >= 1") as f64;
    Ok(GramAudit {
        n,
        norms_ok,
        pairs_ok,
        taylor_error,
        taylor_bound: 12.0 * (n as f64).powf(1.5) * tau / max_b,
    })
}

/// The error audit alone, on an arbitrary symmetric exponent.
pub fn random_taylor_audit<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<GramAudit> {
    let eps = 0.25;
    let cap = 1.0 / (12.0 * (n as f64).powf(1.5));
    let tau = cap * rng.random_range(1e-3..1.0);
    let scale = rng.random_range(0.1..3.0);
    let mut a = DMatrix::from_fn(n, n, |_, _| scale * rng.sample::<f64, _>(StandardNormal));
    a = (&a + a.transpose()) * 0.5;
    let b: Vec<u64> = (0..n).map(|_| rng.random_range(1..=5)).collect();
    let u = jl_sketch(sketch_dimension(n, eps), n, rng);
    let k = taylor_order(spectral_norm(&a)?, n, tau);
    let taylor_error = taylor_audit(&a, &b, &u, k, eps)?;
    let max_b = *b.iter().max().expect("n >= 1") as f64;
    Ok(GramAudit {
        n,
        norms_ok: true,
        pairs_ok: true,
        taylor_error,
        taylor_bound: 12.0 * (n as f64).powf(1.5) * tau / max_b,
    })
}

fn check_gram(opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<CheckReport> {
    let sizes = match opts.n {
        Some(n) => vec![n],
        None if opts.quick => vec![5],
        None => vec![8, 16],
    };
    let seeds = opts.trials.unwrap_or(if opts.quick { 20 } else { 200 });
    let mut bounds = Tally::new("gram");
    let mut taylor_fail = Vec::new();
    let mut audited = 0;
    let mut audit = |r: &GramAudit, fails: &mut Vec<String>| {
        if r.taylor_error.is_some() {
            audited += 1;
        }
        if !r.taylor_ok() {
            fails.push(format!(
                "n={}: |Y'-Y''| = {:e} > {:e}",
                r.n,
                r.taylor_error.unwrap_or(0.0),
                r.taylor_bound
            ));
        }
    };
    for &n in &sizes {
        for s in 0..seeds {
            let r = gram_audit(n, rng)?;
            bounds.record(r.bounds_ok(), || format!("n={n} seed #{s}: norms={} pairs={}", r.norms_ok, r.pairs_ok));
            audit(&r, &mut taylor_fail);
        }
    }
    for _ in 0..seeds {
        let r = random_taylor_audit(6, rng)?;
        audit(&r, &mut taylor_fail);
    }
    bounds
        .notes
        .push(format!("Taylor error bound: {}/{audited} audited instances", audited - taylor_fail.len()));
    let taylor_ok = taylor_fail.is_empty();
    bounds.failures.extend(taylor_fail.into_iter().take(SHOWN_FAILURES));
    let mut report = bounds.fraction(0.95);
    report.ok &= taylor_ok;
    Ok(report)
}

/// Share of projections of the uniform density `I/n` (`b ≡ 1`) failing the
/// mass test.
pub fn rejection_rate<R: Rng + ?Sized>(n: usize, samples: usize, rng: &mut R) -> Result<f64> {
    let x = DMatrix::identity(n, n) / n as f64;
    let v = exact_gram(&x, &vec![1; n])?;
    let rejected = (0..samples)
        .filter(|_| {
            let t = project(&v, rng);
            t.iter().map(|y| y * y).sum::<f64>() < ACCEPT_MASS
        })
        .count();
    Ok(rejected as f64 / samples as f64)
}

fn check_rounding(opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<CheckReport> {
    let n = opts.n.unwrap_or(if opts.quick { 5 } else { 64 });
    let samples = opts.trials.unwrap_or(if opts.quick { 2000 } else { 10_000 });
    let rate = rejection_rate(n, samples, rng)?;
    let limit = (-1.0f64 / 16.0).exp() + 0.03;
    let mut tally = Tally::new("rounding");
    tally.record(rate <= limit, || format!("n={n}: rejection rate {rate} > {limit}"));
    tally.notes.push(format!("n={n}, {samples} samples: rejection rate {rate:.4}, limit {limit:.4}"));
    Ok(tally.all())
}

fn check_maxcut(opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> Result<CheckReport> {
    let mut tally = Tally::new("maxcut");
    let mut bound_tally = (0usize, 0usize);
    let mut accounting = true;
    let trials = opts.trials.unwrap_or(if opts.quick { 10 } else { 50 });
    let (bip_max, noisy_max) = match opts.n {
        Some(n) => (n, n.min(16)),
        None if opts.quick => (5, 5),
        None => (30, 16),
    };
    let run = |g: &WeightedGraph, seed: u64, acc: &mut bool| -> Result<Ratio> {
        let r = recursive_bipart(g, &MaxCutParams::new(seed))?;
        *acc &= r.levels.iter().all(|l| l.accounting_holds() && l.level_bound_holds());
        Ok(r.value)
    };
    if let Some(g) = &opts.graph {
        let value = run(g, opts.seed, &mut accounting)?;
        if g.n() <= 20 {
            let best = brute_maxcut(g)?.value;
            tally.record(value <= best, || format!("value {value} above optimum {best}"));
        }
    } else {
        for _ in 0..trials {
            let n = rng.random_range(2..=bip_max);
            let g = random_bipartite(n, rng.random_range(0.1..0.6), 3, rng);
            let seed = rng.random();
            let value = run(&g, seed, &mut accounting)?;
            tally.record(value == Ratio::ONE, || format!("bipartite {}: value {value}", describe(&g)));
        }
        for _ in 0..trials {
            let n = rng.random_range(3..=noisy_max.max(3));
            let g = connected_gnp(n, rng.random_range(0.2..0.9), 3, rng);
            let best = brute_maxcut(&g)?.value;
            let seed = rng.random();
            let value = run(&g, seed, &mut accounting)?;
            let eta = 1.0 - best.to_f64();
            if eta > 0.0 {
                bound_tally.0 += 1;
                let target = guarantee(eta, 10.0 * (n as f64).ln());
                bound_tally.1 += (value.to_f64() >= target) as usize;
            }
        }
    }
    let (noisy, met) = bound_tally;
    tally.notes.push(format!("guarantee met on {met}/{noisy} non-bipartite runs"));
    let ok = accounting && met as f64 >= 0.9 * noisy as f64;
    if !accounting {
        tally.failures.push("per-level accounting violated".into());
    }
    let mut report = tally.all();
    report.ok &= ok;
    Ok(report)
}
