//! Geometric search over the guess `r = 1/k`.

use log::info;
use rayon::prelude::*;
use serde::Serialize;

use super::{cut_matching_game, GameOutcome, GameParams, GameReport};
use crate::error::{Error, Result};
use crate::graph::{evaluate_beta, SignVector, WeightedGraph};
use crate::ratio::Ratio;

/// `K = ⌈log₂(w(E) · b(V))⌉ + 1`; the sweep visits `k = 2^0, …, 2^K`.
pub fn sweep_exponent(graph: &WeightedGraph) -> u32 {
    let product = (graph.total_weight() as u128 * graph.total_b() as u128).max(1);
    let ceil_log = if product == 1 {
        0
    } else {
        128 - (product - 1).leading_zeros()
    };
    ceil_log + 1
}

/// One game of the sweep, without its trace.
#[derive(Debug, Clone, Serialize)]
pub struct GameSummary {
    pub k: u64,
    pub outcome: &'static str,
    pub rounds: usize,
    pub beta: Option<Ratio>,
    pub flow_solves: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub sweep_exponent: u32,
    pub x_best: SignVector,
    pub beta_best: Ratio,
    /// Smallest swept `k` that produced a non-vacuous certificate.
    pub k_cert: Option<u64>,
    pub r_cert: Option<Ratio>,
    pub certificate: Option<GameReport>,
    pub games: Vec<GameSummary>,
    pub flow_solves: usize,
    pub rounds_total: usize,
}

fn summarize(report: &GameReport) -> GameSummary {
    let (outcome, beta) = match &report.outcome {
        GameOutcome::Witness { beta, .. } => ("witness", Some(*beta)),
        GameOutcome::Certificate(c) if c.vacuous => ("vacuous_certificate", None),
        GameOutcome::Certificate(_) => ("certificate", None),
    };
    GameSummary {
        k: report.k,
        outcome,
        rounds: report.trace.len(),
        beta,
        flow_solves: report.flow_solves,
    }
}

/// Best single-vertex indicator, used only when no game produced a witness.
fn best_indicator(graph: &WeightedGraph) -> Result<(SignVector, Ratio)> {
    let mut best: Option<(SignVector, Ratio)> = None;
    for i in 0..graph.n() {
        let x = SignVector::from_sets(graph.n(), &[i], &[])?;
        let beta = evaluate_beta(graph, &x)?;
        if best.as_ref().is_none_or(|(_, b)| beta < *b) {
            best = Some((x, beta));
        }
    }
    best.ok_or(Error::InvalidGraph("graph has no vertices".into()))
}

/// Plays the game at `k = 1, 2, 4, …, 2^K` and stops at the first
/// certificate whose multigraph has positive ratio.
///
/// A certificate with `β_b(H) = 0` proves nothing, so the sweep continues
/// past it. The best witness seen is returned. With `jobs > 1` all games
/// run concurrently on their own streams and are scanned in order
/// afterwards, so the report is identical to the sequential one.
pub fn approx_bipartiteness(
    graph: &WeightedGraph,
    params: &GameParams,
    jobs: usize,
) -> Result<SweepReport> {
    if graph.n() == 0 {
        return Err(Error::InvalidGraph("graph has no vertices".into()));
    }
    params.validate(graph.n())?;
    let exponent = sweep_exponent(graph);
    let ks: Vec<u64> = (0..=exponent).map(|j| 1u64 << j).collect();

    let precomputed: Option<Vec<Result<GameReport>>> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        Some(pool.install(|| {
            ks.par_iter()
                .map(|&k| cut_matching_game(graph, k, params))
                .collect()
        }))
    } else {
        None
    };
    let mut precomputed = precomputed.map(|v| v.into_iter());

    let mut games = Vec::new();
    let mut best: Option<(SignVector, Ratio)> = None;
    let mut certificate = None;
    let mut flow_solves = 0;
    let mut rounds_total = 0;
    for &k in &ks {
        let report = match precomputed.as_mut() {
            Some(it) => it.next().expect("one result per k")?,
            None => cut_matching_game(graph, k, params)?,
        };
        let summary = summarize(&report);
        info!("k = {k}: {} after {} rounds", summary.outcome, summary.rounds);
        flow_solves += report.flow_solves;
        rounds_total += report.trace.len();
        games.push(summary);
        match &report.outcome {
            GameOutcome::Witness { x, beta } => {
                if best.as_ref().is_none_or(|(_, b)| beta < b) {
                    best = Some((x.clone(), *beta));
                }
            }
            GameOutcome::Certificate(c) if !c.vacuous => {
                certificate = Some(report);
                break;
            }
            GameOutcome::Certificate(_) => {}
        }
    }

    let (x_best, beta_best) = match best {
        Some(b) => b,
        None => best_indicator(graph)?,
    };
    let k_cert = certificate.as_ref().map(|c| c.k);
    Ok(SweepReport {
        sweep_exponent: exponent,
        x_best,
        beta_best,
        k_cert,
        r_cert: k_cert.map(|k| Ratio::new(1, k)),
        certificate,
        games,
        flow_solves,
        rounds_total,
    })
}
