//! Gaussian projection of Gram vectors to a vertex set.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::gram::GramVectors;
use crate::error::{Error, Result};

/// A projection passes when `Σ b_i ṽ_i² >= ACCEPT_MASS`.
pub const ACCEPT_MASS: f64 = 0.25;

/// Attempt cap `⌈8 ln n⌉ + 8`.
pub fn default_projection_attempts(n: usize) -> usize {
    (8.0 * (n.max(1) as f64).ln()).ceil() as usize + 8
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundedCut {
    pub tilde_v: Vec<f64>,
    /// The heavier sign class, ascending.
    pub left: Vec<usize>,
    /// Always empty: only the one-sided pair is played.
    pub right: Vec<usize>,
    /// `Σ_{i ∈ left} b_i ṽ_i²`.
    pub mass: f64,
    /// `Σ_i b_i ṽ_i²`.
    pub total_mass: f64,
    pub attempts: usize,
}

/// Projection `ṽ_i = ⟨g, v_i⟩` onto one standard Gaussian direction.
pub fn project<R: Rng + ?Sized>(v: &GramVectors, rng: &mut R) -> Vec<f64> {
    let g: Vec<f64> = (0..v.dim()).map(|_| rng.sample(StandardNormal)).collect();
    let g = nalgebra::DVector::from_vec(g);
    (&v.vectors * g).iter().copied().collect()
}

/// Samples projections until one carries `b`-mass at least 1/4, then keeps
/// the sign class with the larger mass (the positive class on ties).
pub fn gaussian_round<R: Rng + ?Sized>(
    v: &GramVectors,
    b: &[u64],
    rng: &mut R,
    max_attempts: usize,
) -> Result<RoundedCut> {
    assert_eq!(v.n(), b.len());
    for attempt in 1..=max_attempts {
        let tilde_v = project(v, rng);
        let weighted = |i: usize| b[i] as f64 * tilde_v[i] * tilde_v[i];
        let total_mass: f64 = (0..b.len()).map(weighted).sum();
        if total_mass < ACCEPT_MASS {
            continue;
        }
        let positive: Vec<usize> = (0..b.len()).filter(|&i| tilde_v[i] > 0.0).collect();
        let negative: Vec<usize> = (0..b.len()).filter(|&i| tilde_v[i] < 0.0).collect();
        let pos_mass: f64 = positive.iter().map(|&i| weighted(i)).sum();
        let neg_mass: f64 = negative.iter().map(|&i| weighted(i)).sum();
        let (left, mass) = if neg_mass > pos_mass {
            (negative, neg_mass)
        } else {
            (positive, pos_mass)
        };
        return Ok(RoundedCut {
            tilde_v,
            left,
            right: Vec::new(),
            mass,
            total_mass,
            attempts: attempt,
        });
    }
    Err(Error::RoundFail {
        attempts: max_attempts,
    })
}
