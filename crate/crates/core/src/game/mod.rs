//! The cut-matching game for a fixed guess `r = 1/k`, and the sweep over `k`.

mod sweep;

pub use sweep::{approx_bipartiteness, sweep_exponent, GameSummary, SweepReport};

use log::debug;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{
    consistent_min_cut, decompose_flow, demand_graph, is_saturating, max_flow, CongestionLedger,
    DemandMultigraph, FlowNetwork,
};
use crate::graph::{evaluate_beta, AuxiliaryGraph, SignVector, WeightedGraph};
use crate::oracle::brute_beta_multigraph;
use crate::ratio::Ratio;
use crate::spectral::gram::default_tau;
use crate::spectral::{
    approx_gram, assemble_f, default_projection_attempts, eigen_range, exact_gram,
    frobenius_inner, gaussian_round, mmwu_density, GramVectors, MmwuState, DEFAULT_DELTA,
    LOSS_BOUND,
};

/// Largest `n` for which dense eigenvalues (Gram vectors by default,
/// `λ_min` of the certificate, `λ_max` of each loss) are computed.
pub const DENSE_LIMIT: usize = 512;

/// Largest `n` for which a certificate's ratio is brute-forced.
pub const EXACT_CERTIFICATE_LIMIT: usize = 8;

/// `λ_min(Σ F_t)` at which the optional early exit fires.
pub const EARLY_EXIT_LAMBDA: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GramMode {
    Exact,
    Approximate,
}

#[derive(Debug, Clone, Serialize)]
pub struct GameParams {
    /// Round cap `T`.
    pub rounds: usize,
    /// Gaussian resamples per round before a round fails.
    pub projection_attempts: usize,
    pub delta: f64,
    pub eps: f64,
    pub tau: f64,
    pub gram: GramMode,
    /// Failed rounds tolerated over a whole game.
    pub restarts: usize,
    pub early_exit: bool,
    pub seed: u64,
}

/// `max(16, ⌈9 ln² n⌉)`.
pub fn default_rounds(n: usize) -> usize {
    let l = (n.max(1) as f64).ln();
    ((9.0 * l * l).ceil() as usize).max(16)
}

impl GameParams {
    pub fn for_graph(n: usize, seed: u64) -> Self {
        GameParams {
            rounds: default_rounds(n),
            projection_attempts: default_projection_attempts(n),
            delta: DEFAULT_DELTA,
            eps: 0.25,
            tau: default_tau(n.max(1)),
            gram: if n <= DENSE_LIMIT {
                GramMode::Exact
            } else {
                GramMode::Approximate
            },
            restarts: 3,
            early_exit: false,
            seed,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::InvalidParameter("round cap must be at least 1".into()));
        }
        if self.projection_attempts == 0 {
            return Err(Error::InvalidParameter(
                "projection attempts must be at least 1".into(),
            ));
        }
        if !(self.delta > 0.0 && self.delta * LOSS_BOUND < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "step size {} must lie in (0, 1/4)",
                self.delta
            )));
        }
        if self.gram == GramMode::Approximate {
            if !(self.eps > 0.0 && self.eps <= 0.25) {
                return Err(Error::InvalidParameter("eps must lie in (0, 1/4]".into()));
            }
            let cap = 1.0 / (12.0 * (n.max(1) as f64).powf(1.5));
            if !(self.tau > 0.0 && self.tau <= cap) {
                return Err(Error::InvalidParameter(format!("tau must lie in (0, {cap:e}]")));
            }
        } else if n > DENSE_LIMIT {
            return Err(Error::InvalidParameter(format!(
                "exact Gram decomposition is limited to n <= {DENSE_LIMIT}"
            )));
        }
        Ok(())
    }
}

/// The generator of the game at guess `1/k`.
pub fn game_rng(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

/// One round's outcome.
#[derive(Debug, Clone)]
pub enum RoundResult {
    Cut {
        x: SignVector,
        beta: Ratio,
    },
    Match {
        demand: DemandMultigraph,
        loss: DMatrix<f64>,
    },
}

/// What one round did, for reports and invariant checks.
#[derive(Debug, Clone, Serialize)]
pub struct RoundRecord {
    pub round: usize,
    pub left: Vec<usize>,
    pub attempts: usize,
    pub flow_value: u64,
    pub demand: u64,
    pub matched: bool,
    /// `⟨F_t, X_t⟩` on Match rounds.
    pub loss_inner: Option<f64>,
    /// `Σ_{(i,j) ∈ M_t} ‖v_i + v_j‖²` on Match rounds.
    pub pair_sum: Option<f64>,
    /// `λ_max(F_t)` on Match rounds with `n <= 512`.
    pub loss_lambda_max: Option<f64>,
    /// `deg_{M_t}(i) = 2 b_i` on `L` and 0 elsewhere.
    pub degree_law: Option<bool>,
}

/// `β_b(H)` of a certificate: exact at small `n`, else the spectral bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum CertificateBeta {
    Exact(Ratio),
    LowerBound(f64),
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    /// `M_1 ⊕ … ⊕ M_T`.
    pub h: DemandMultigraph,
    pub rounds: usize,
    /// `λ_min(Σ F_t)`, dense, for `n <= 512`.
    pub lambda_min: Option<f64>,
    /// `Σ_t ⟨F_t, X_t⟩`.
    pub loss_total: f64,
    pub beta_h: CertificateBeta,
    /// `β_b(H) = 0`: some component of `H` is bipartite, so nothing is
    /// certified.
    pub vacuous: bool,
    pub ledgers: Vec<CongestionLedger>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GameOutcome {
    Witness { x: SignVector, beta: Ratio },
    Certificate(Certificate),
}

impl GameOutcome {
    pub fn witness(&self) -> Option<(&SignVector, Ratio)> {
        match self {
            GameOutcome::Witness { x, beta } => Some((x, *beta)),
            GameOutcome::Certificate(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            GameOutcome::Certificate(c) => Some(c),
            GameOutcome::Witness { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GameReport {
    pub k: u64,
    pub outcome: GameOutcome,
    pub trace: Vec<RoundRecord>,
    pub flow_solves: usize,
    pub restarts_used: usize,
}

fn gram_vectors(
    state: &MmwuState,
    x: &DMatrix<f64>,
    b: &[u64],
    params: &GameParams,
    rng: &mut ChaCha8Rng,
) -> Result<GramVectors> {
    match params.gram {
        GramMode::Exact => exact_gram(x, b),
        GramMode::Approximate => Ok(approx_gram(
            &state.accumulated,
            state.delta,
            b,
            params.eps,
            params.tau,
            rng,
        )),
    }
}

/// Plays one round: density, Gram vectors, rounding to `L`, one max flow.
///
/// On a Match the loss is absorbed into `state`.
pub fn run_round(
    aux: &AuxiliaryGraph<'_>,
    k: u64,
    params: &GameParams,
    state: &mut MmwuState,
    rng: &mut ChaCha8Rng,
) -> Result<(RoundResult, RoundRecord)> {
    let g = aux.base();
    let b = g.b();
    let density = mmwu_density(state)?;
    let v = gram_vectors(state, &density, b, params, rng)?;
    let cut = gaussian_round(&v, b, rng, params.projection_attempts)?;
    let network = FlowNetwork::build(aux, &cut.left, &cut.right, k)?;
    let flow = max_flow(&network);
    let mut record = RoundRecord {
        round: state.t + 1,
        left: cut.left.clone(),
        attempts: cut.attempts,
        flow_value: flow.value,
        demand: network.demand(),
        matched: false,
        loss_inner: None,
        pair_sum: None,
        loss_lambda_max: None,
        degree_law: None,
    };
    if !is_saturating(&network, &flow) {
        let x = consistent_min_cut(&network, &flow)?;
        let beta = evaluate_beta(g, &x)?;
        debug_assert!(beta.below_reciprocal(k));
        return Ok((RoundResult::Cut { x, beta }, record));
    }

    let paths = decompose_flow(&network, &flow);
    let demand = demand_graph(&network, &paths)?;
    let loss = assemble_f(&demand, b)?;
    let degrees = demand.degrees();
    let mut in_left = vec![false; g.n()];
    for &i in &cut.left {
        in_left[i] = true;
    }
    record.matched = true;
    record.degree_law = Some(
        (0..g.n()).all(|i| degrees[i] == if in_left[i] { 2 * b[i] } else { 0 }),
    );
    record.loss_inner = Some(frobenius_inner(&loss, &density));
    if params.gram == GramMode::Exact {
        record.pair_sum = Some(
            demand
                .edges()
                .map(|(i, j, c)| c as f64 * v.pair_sum_sq(i, j))
                .sum(),
        );
    }
    if g.n() <= DENSE_LIMIT {
        record.loss_lambda_max = Some(eigen_range(&loss)?.1);
    }
    state.update(&loss);
    Ok((RoundResult::Match { demand, loss }, record))
}

/// Runs the game at `r = 1/k` until a round yields a cut or `T` rounds match.
pub fn cut_matching_game(graph: &WeightedGraph, k: u64, params: &GameParams) -> Result<GameReport> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    params.validate(graph.n())?;
    let n = graph.n();
    let aux = AuxiliaryGraph::build(graph);
    let mut rng = game_rng(params.seed, k);
    let mut state = MmwuState::new(n, params.delta);
    let mut h = DemandMultigraph::empty(n);
    let mut ledgers = Vec::new();
    let mut trace = Vec::new();
    let mut loss_total = 0.0;
    let mut lambda_min = None;
    let mut flow_solves = 0;
    let mut restarts_used = 0;

    while state.t < params.rounds {
        let (result, record) = match run_round(&aux, k, params, &mut state, &mut rng) {
            Ok(r) => r,
            Err(Error::RoundFail { attempts }) => {
                restarts_used += 1;
                debug!("k = {k}: round {} rejected {attempts} projections", state.t + 1);
                if restarts_used > params.restarts {
                    return Err(Error::GameFailed {
                        restarts: params.restarts,
                    });
                }
                continue;
            }
            Err(e) => return Err(e),
        };
        flow_solves += 1;
        debug!(
            "k = {k}: round {} |L| = {} flow {}/{}",
            record.round,
            record.left.len(),
            record.flow_value,
            record.demand
        );
        loss_total += record.loss_inner.unwrap_or(0.0);
        trace.push(record);
        match result {
            RoundResult::Cut { x, beta } => {
                return Ok(GameReport {
                    k,
                    outcome: GameOutcome::Witness { x, beta },
                    trace,
                    flow_solves,
                    restarts_used,
                });
            }
            RoundResult::Match { demand, .. } => {
                ledgers.push(demand.ledger().clone());
                h.merge(&demand);
            }
        }
        if params.early_exit && n <= DENSE_LIMIT {
            let low = eigen_range(&state.accumulated)?.0;
            if low >= EARLY_EXIT_LAMBDA {
                lambda_min = Some(low);
                break;
            }
        }
    }

    if lambda_min.is_none() && n <= DENSE_LIMIT {
        lambda_min = Some(eigen_range(&state.accumulated)?.0);
    }
    let vacuous = h.has_zero_ratio();
    let beta_h = if vacuous {
        CertificateBeta::Exact(Ratio::ZERO)
    } else if n <= EXACT_CERTIFICATE_LIMIT {
        CertificateBeta::Exact(brute_beta_multigraph(&h, graph.b())?.beta)
    } else if let Some(l) = lambda_min {
        CertificateBeta::LowerBound(l / 2.0)
    } else {
        CertificateBeta::Unknown
    };
    Ok(GameReport {
        k,
        outcome: GameOutcome::Certificate(Certificate {
            h,
            rounds: state.t,
            lambda_min,
            loss_total,
            beta_h,
            vacuous,
            ledgers,
        }),
        trace,
        flow_solves,
        restarts_used,
    })
}
