//! Weighted network efficiency.
//!
//! The path efficiency between `i` and `j` is the reciprocal of the minimum
//! total length `Σ 1/w_l` over active directed paths from `i` to `j` (zero when
//! `j` is unreachable). Network efficiency averages it over all `N(N-1)`
//! ordered pairs of the full node set; shocked nodes stay in `N` and simply
//! contribute zero-valued pairs. Dividing by a reference mean edge weight makes
//! values comparable across years.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::network::{NodeId, TradeNetwork};
use crate::paths::{CsrView, Dijkstra, Direction};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EfficiencyError {
    #[error("path efficiency needs two distinct nodes, got {0} twice")]
    SameNode(usize),
    #[error("node {0} is not active")]
    InactiveNode(usize),
    #[error("reference mean weight must be positive, got {0}")]
    NonPositiveReference(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EfficiencyResult {
    pub raw_efficiency: f64,
    pub normalized_efficiency: f64,
    pub reference_mean_weight: f64,
    pub pair_count: usize,
    /// Set when `N < 2`; every efficiency is then defined as zero.
    pub degenerate: bool,
}

/// Path efficiency `E_ij`.
pub fn path_efficiency(net: &TradeNetwork, i: NodeId, j: NodeId) -> Result<f64, EfficiencyError> {
    if i == j {
        return Err(EfficiencyError::SameNode(i.0));
    }
    for n in [i, j] {
        if !net.is_node_active(n) {
            return Err(EfficiencyError::InactiveNode(n.0));
        }
    }
    let g = CsrView::new(net, Direction::Out);
    let mut dij = Dijkstra::new(net.node_count());
    dij.run(&g, i.0);
    let d = dij.dist[j.0];
    Ok(if d.is_finite() { 1.0 / d } else { 0.0 })
}

/// Sum of `E_ij` over all ordered pairs.
///
/// Per-source sums are computed in parallel and reduced in source order, so
/// the result is bit-identical regardless of thread count.
pub fn efficiency_sum(net: &TradeNetwork) -> f64 {
    let n = net.node_count();
    if n < 2 {
        return 0.0;
    }
    let g = CsrView::new(net, Direction::Out);
    let per_source: Vec<f64> = (0..n)
        .into_par_iter()
        .map_init(
            || Dijkstra::new(n),
            |dij, s| {
                if !net.is_node_active(NodeId(s)) {
                    return 0.0;
                }
                dij.run(&g, s);
                dij.reciprocal_sum(s)
            },
        )
        .collect();
    per_source.iter().sum()
}

/// Network efficiency `E`, normalized by the network's own baseline ⟨w⟩.
pub fn network_efficiency(net: &TradeNetwork) -> EfficiencyResult {
    let reference = net.baseline_mean_weight();
    let mut res = raw_result(net);
    res.reference_mean_weight = reference;
    if reference > 0.0 {
        res.normalized_efficiency = res.raw_efficiency / reference;
    }
    res
}

/// `E^W = E / reference_mean_weight` for a caller-supplied reference.
pub fn normalized_efficiency(
    net: &TradeNetwork,
    reference_mean_weight: f64,
) -> Result<EfficiencyResult, EfficiencyError> {
    if !reference_mean_weight.is_finite() || reference_mean_weight <= 0.0 {
        return Err(EfficiencyError::NonPositiveReference(reference_mean_weight));
    }
    let mut res = raw_result(net);
    res.reference_mean_weight = reference_mean_weight;
    res.normalized_efficiency = res.raw_efficiency / reference_mean_weight;
    Ok(res)
}

fn raw_result(net: &TradeNetwork) -> EfficiencyResult {
    let n = net.node_count();
    let degenerate = n < 2;
    let pairs = if degenerate { 0 } else { n * (n - 1) };
    let raw = if degenerate {
        0.0
    } else {
        efficiency_sum(net) / pairs as f64
    };
    EfficiencyResult {
        raw_efficiency: raw,
        normalized_efficiency: 0.0,
        reference_mean_weight: 0.0,
        pair_count: pairs,
        degenerate,
    }
}
