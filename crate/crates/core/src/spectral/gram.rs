//! Gram decompositions of `D_b^{-1/2} X D_b^{-1/2}`.

use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use super::eigen::sym_eigen;
use crate::error::Result;

/// How a set of Gram vectors was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "flavor", rename_all = "snake_case")]
pub enum GramFlavor {
    Exact,
    Approximate { eps: f64, tau: f64 },
}

/// One vector per vertex, stored as the rows of an `n × d` matrix.
#[derive(Debug, Clone)]
pub struct GramVectors {
    pub vectors: DMatrix<f64>,
    pub flavor: GramFlavor,
}

impl GramVectors {
    pub fn n(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn dim(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn dot(&self, i: usize, j: usize) -> f64 {
        self.vectors.row(i).dot(&self.vectors.row(j))
    }

    pub fn norm_sq(&self, i: usize) -> f64 {
        self.dot(i, i)
    }

    /// `‖v_i + v_j‖²`.
    pub fn pair_sum_sq(&self, i: usize, j: usize) -> f64 {
        (self.vectors.row(i) + self.vectors.row(j)).norm_squared()
    }

    /// `Σ_i b_i ‖v_i‖²`.
    pub fn weighted_mass(&self, b: &[u64]) -> f64 {
        b.iter()
            .enumerate()
            .map(|(i, &bi)| bi as f64 * self.norm_sq(i))
            .sum()
    }

    /// The matrix `(⟨v_i, v_j⟩)_{ij}`.
    pub fn gram_matrix(&self) -> DMatrix<f64> {
        &self.vectors * self.vectors.transpose()
    }
}

fn scale_rows_by_inv_sqrt_b(m: &mut DMatrix<f64>, b: &[u64]) {
    for (i, &bi) in b.iter().enumerate() {
        let s = 1.0 / (bi as f64).sqrt();
        for j in 0..m.ncols() {
            m[(i, j)] *= s;
        }
    }
}

/// Gram vectors from `X = Q Λ Qᵀ`: row `i` of `D_b^{-1/2} Q Λ^{1/2}`.
///
/// Tiny negative eigenvalues from rounding are clamped to zero.
pub fn exact_gram(x: &DMatrix<f64>, b: &[u64]) -> Result<GramVectors> {
    assert_eq!(x.nrows(), b.len());
    let e = sym_eigen(x)?;
    let mut v = e.vectors.clone();
    for (j, &lambda) in e.values.iter().enumerate() {
        let s = lambda.max(0.0).sqrt();
        for i in 0..v.nrows() {
            v[(i, j)] *= s;
        }
    }
    scale_rows_by_inv_sqrt_b(&mut v, b);
    Ok(GramVectors {
        vectors: v,
        flavor: GramFlavor::Exact,
    })
}

/// Sketch dimension `⌈32 ln n / ε²⌉`, at least 1.
pub fn sketch_dimension(n: usize, eps: f64) -> usize {
    ((32.0 * (n as f64).ln() / (eps * eps)).ceil() as usize).max(1)
}

/// Largest admissible additive error for `n` vertices: `min(1/(12 n^{3/2}), 1e-9)`.
pub fn default_tau(n: usize) -> f64 {
    (1.0 / (12.0 * (n as f64).powf(1.5))).min(1e-9)
}

/// Truncation order `⌈max(e² λ, ln(n / τ))⌉` for an exponent of norm `λ`.
pub fn taylor_order(norm_bound: f64, n: usize, tau: f64) -> usize {
    let e2 = std::f64::consts::E * std::f64::consts::E;
    (e2 * norm_bound)
        .max((n as f64 / tau).ln())
        .ceil()
        .max(1.0) as usize
}

/// Random `d × n` sign matrix with entries `±1/√d`, drawn row-major.
pub fn jl_sketch<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> DMatrix<f64> {
    let s = 1.0 / (d as f64).sqrt();
    let mut u = DMatrix::zeros(d, n);
    for r in 0..d {
        for c in 0..n {
            u[(r, c)] = if rng.random::<bool>() { s } else { -s };
        }
    }
    u
}

/// `Z = Σ_{i=0}^{k} (A/2)^i / i! · Uᵀ`, one iterated mat-vec chain per row
/// of `U`.
pub fn taylor_exp_apply(a: &DMatrix<f64>, u: &DMatrix<f64>, k: usize) -> DMatrix<f64> {
    assert!(k >= 1, "truncation order must be positive");
    let n = a.nrows();
    let half = a * 0.5;
    let mut z = DMatrix::zeros(n, u.nrows());
    for col in 0..u.nrows() {
        let mut term = u.row(col).transpose();
        let mut sum = term.clone();
        for i in 1..=k {
            term = &half * term / i as f64;
            sum += &term;
        }
        z.set_column(col, &sum);
    }
    z
}

/// Largest absolute row sum, an upper bound on the spectral norm.
pub fn gershgorin_bound(a: &DMatrix<f64>) -> f64 {
    a.row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// The exponent actually fed to the Taylor chain and its norm bound.
///
/// `A = -δ Σ F` has spectrum in `[-δ g, 0]` with `g` the Gershgorin bound of
/// `Σ F`; shifting by `δ g / 2` centres it, halving the norm. The shift only
/// rescales `Z`, which the trace normalization removes.
pub fn centred_exponent(accumulated: &DMatrix<f64>, delta: f64) -> (DMatrix<f64>, f64) {
    let n = accumulated.nrows();
    let radius = delta * gershgorin_bound(accumulated) / 2.0;
    let a = accumulated * -delta + DMatrix::<f64>::identity(n, n) * radius;
    (a, radius)
}

/// Rows `(D_b^{-1/2} Z)_i / √tr(Z Zᵀ)`.
pub fn normalized_rows(z: &DMatrix<f64>, b: &[u64]) -> DMatrix<f64> {
    let trace = z.norm_squared();
    let mut v = z / trace.sqrt();
    scale_rows_by_inv_sqrt_b(&mut v, b);
    v
}

/// Sketched Gram vectors of `D_b^{-1/2} X D_b^{-1/2}` for
/// `X ∝ exp(-δ · accumulated)`, without an eigendecomposition.
pub fn approx_gram<R: Rng + ?Sized>(
    accumulated: &DMatrix<f64>,
    delta: f64,
    b: &[u64],
    eps: f64,
    tau: f64,
    rng: &mut R,
) -> GramVectors {
    let n = accumulated.nrows();
    assert_eq!(b.len(), n);
    let (a, norm) = centred_exponent(accumulated, delta);
    let d = sketch_dimension(n, eps);
    let u = jl_sketch(d, n, rng);
    let k = taylor_order(norm, n, tau);
    let z = taylor_exp_apply(&a, &u, k);
    GramVectors {
        vectors: normalized_rows(&z, b),
        flavor: GramFlavor::Approximate { eps, tau },
    }
}
