//! The auxiliary network `N_{A,B,r}`: max flow, consistent min cuts, path
//! decomposition and demand graphs.

mod decompose;
mod demand;
pub mod dinic;
mod network;

pub use decompose::{decompose_flow, FlowPath};
pub use demand::{demand_graph, CongestionLedger, DemandMultigraph};
pub use network::{
    consistent_min_cut, drop_inconsistent, is_saturating, max_flow, residual_source_side,
    ArcKind, FlowAssignment, FlowNetwork, NetArc,
};

use crate::error::Result;
use crate::graph::AuxiliaryGraph;

/// Free-function form of [`FlowNetwork::build`].
pub fn build_network(
    aux: &AuxiliaryGraph<'_>,
    left: &[usize],
    right: &[usize],
    k: u64,
) -> Result<FlowNetwork> {
    FlowNetwork::build(aux, left, right, k)
}
