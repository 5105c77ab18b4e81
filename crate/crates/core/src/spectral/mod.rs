//! Density iterates, Gram decompositions and Gaussian rounding for the cut
//! player.

pub mod eigen;
pub mod gram;
pub mod mmwu;
pub mod rounding;

pub use eigen::{eigen_range, sym_eigen, SymEigen};
pub use gram::{approx_gram, exact_gram, taylor_exp_apply, GramFlavor, GramVectors};
pub use mmwu::{assemble_f, frobenius_inner, mmwu_density, MmwuState, DEFAULT_DELTA, LOSS_BOUND};
pub use rounding::{default_projection_attempts, gaussian_round, project, RoundedCut, ACCEPT_MASS};
