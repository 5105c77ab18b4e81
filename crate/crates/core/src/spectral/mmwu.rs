//! Matrix multiplicative weights: loss matrices and density iterates.

use nalgebra::DMatrix;

use super::eigen::sym_eigen;
use crate::error::{Error, Result};
use crate::flow::DemandMultigraph;

/// Step size used when none is given; makes `1 - 4δ = 1/2`.
pub const DEFAULT_DELTA: f64 = 0.125;

/// Upper bound on the spectrum of every loss matrix.
pub const LOSS_BOUND: f64 = 4.0;

/// `F = D_b^{-1/2} (D_M + A_M) D_b^{-1/2}`.
///
/// Each demand edge `{i, j}` contributes `(e_i + e_j)(e_i + e_j)ᵀ` before
/// scaling, so a self-loop of multiplicity `c` adds `4c / b_i` to `F_ii`.
pub fn assemble_f(demand: &DemandMultigraph, b: &[u64]) -> Result<DMatrix<f64>> {
    let n = demand.n();
    assert_eq!(b.len(), n);
    for (vertex, (&degree, &bi)) in demand.degrees().iter().zip(b).enumerate() {
        if degree > 2 * bi {
            return Err(Error::DegreeOverflow {
                vertex,
                degree,
                limit: 2 * bi,
            });
        }
    }
    let mut f = DMatrix::zeros(n, n);
    for (i, j, c) in demand.edges() {
        let c = c as f64;
        if i == j {
            f[(i, i)] += 4.0 * c / b[i] as f64;
        } else {
            f[(i, i)] += c / b[i] as f64;
            f[(j, j)] += c / b[j] as f64;
            let off = c / (b[i] as f64 * b[j] as f64).sqrt();
            f[(i, j)] += off;
            f[(j, i)] += off;
        }
    }
    Ok(f)
}

/// `⟨A, B⟩ = tr(AᵀB)`.
pub fn frobenius_inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.component_mul(b).sum()
}

/// Running sum of loss matrices with step size `delta`.
#[derive(Debug, Clone)]
pub struct MmwuState {
    pub n: usize,
    pub delta: f64,
    pub accumulated: DMatrix<f64>,
    /// Number of losses absorbed so far; the next iterate is `X_{t+1}`.
    pub t: usize,
}

impl MmwuState {
    pub fn new(n: usize, delta: f64) -> Self {
        assert!(delta > 0.0, "step size must be positive");
        MmwuState {
            n,
            delta,
            accumulated: DMatrix::zeros(n, n),
            t: 0,
        }
    }

    pub fn update(&mut self, loss: &DMatrix<f64>) {
        self.accumulated += loss;
        self.t += 1;
    }

    /// `-δ Σ F_τ`.
    pub fn exponent(&self) -> DMatrix<f64> {
        &self.accumulated * -self.delta
    }
}

/// `X = exp(-δ Σ F_τ) / tr(exp(-δ Σ F_τ))`.
///
/// The exponent is shifted by its largest eigenvalue before exponentiating,
/// which cancels in the normalization.
pub fn mmwu_density(state: &MmwuState) -> Result<DMatrix<f64>> {
    if state.t == 0 {
        return Ok(DMatrix::identity(state.n, state.n) / state.n as f64);
    }
    let e = sym_eigen(&state.exponent())?;
    let top = e.max();
    let trace: f64 = e.values.iter().map(|&l| (l - top).exp()).sum();
    let x = e.apply(|l| (l - top).exp() / trace);
    Ok((&x + x.transpose()) * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::eigen::eigen_range;

    fn demand(n: usize, edges: &[(usize, usize, u64)]) -> DemandMultigraph {
        let mut m = DemandMultigraph::empty(n);
        for &(i, j, c) in edges {
            m.add(i, j, c);
        }
        m
    }

    #[test]
    fn self_loop_contributes_four_c_over_b() {
        let f = assemble_f(&demand(2, &[(0, 0, 2)]), &[2, 1]).unwrap();
        assert_eq!(f, DMatrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 0.0]));
        let (_, top) = eigen_range(&f).unwrap();
        assert!((top - 4.0).abs() < 1e-12);
    }

    #[test]
    fn empty_demand_is_zero() {
        let f = assemble_f(&DemandMultigraph::empty(3), &[1, 1, 1]).unwrap();
        assert_eq!(f, DMatrix::zeros(3, 3));
    }

    #[test]
    fn single_edge_unit_weights() {
        let f = assemble_f(&demand(2, &[(0, 1, 1)]), &[1, 1]).unwrap();
        assert_eq!(f, DMatrix::from_element(2, 2, 1.0));
        let (_, top) = eigen_range(&f).unwrap();
        assert!((top - 2.0).abs() < 1e-12);
    }

    #[test]
    fn degree_overflow_is_rejected() {
        let err = assemble_f(&demand(2, &[(0, 1, 3)]), &[1, 2]).unwrap_err();
        assert_eq!(
            err,
            Error::DegreeOverflow {
                vertex: 0,
                degree: 3,
                limit: 2
            }
        );
    }

    #[test]
    fn full_degree_demand_stays_below_four() {
        // a 2b-regular demand on a triangle with b = (1, 2, 3)
        let m = demand(3, &[(0, 1, 1), (0, 2, 1), (1, 2, 1), (1, 1, 1), (2, 2, 2)]);
        assert_eq!(m.degrees(), vec![2, 4, 6]);
        let f = assemble_f(&m, &[1, 2, 3]).unwrap();
        let (low, top) = eigen_range(&f).unwrap();
        assert!(low > -1e-12);
        assert!(top <= LOSS_BOUND + 1e-8);
    }

    #[test]
    fn first_iterate_is_uniform() {
        let x = mmwu_density(&MmwuState::new(4, DEFAULT_DELTA)).unwrap();
        assert_eq!(x, DMatrix::identity(4, 4) / 4.0);
    }

    #[test]
    fn identity_loss_keeps_uniform() {
        let mut s = MmwuState::new(3, 0.7);
        s.update(&DMatrix::identity(3, 3));
        let x = mmwu_density(&s).unwrap();
        assert!((x - DMatrix::identity(3, 3) / 3.0).norm() < 1e-12);
    }

    #[test]
    fn diagonal_loss_matches_scalar_exponentials() {
        let mut s = MmwuState::new(2, 1.0);
        s.update(&DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 10.0]));
        let x = mmwu_density(&s).unwrap();
        let z = 1.0 + (-10.0f64).exp();
        assert!((x[(0, 0)] - 1.0 / z).abs() < 1e-12);
        assert!((x[(1, 1)] - (-10.0f64).exp() / z).abs() < 1e-12);
        assert!(x[(0, 1)].abs() < 1e-12);
    }

    #[test]
    fn density_has_unit_trace_and_is_psd() {
        let mut s = MmwuState::new(3, DEFAULT_DELTA);
        for _ in 0..20 {
            s.update(&assemble_f(&demand(3, &[(0, 1, 1), (2, 2, 1)]), &[1, 1, 1]).unwrap());
        }
        let x = mmwu_density(&s).unwrap();
        assert!((x.trace() - 1.0).abs() < 1e-9);
        let (low, _) = eigen_range(&x).unwrap();
        assert!(low >= -1e-10);
    }
}
