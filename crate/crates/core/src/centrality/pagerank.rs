use serde::Serialize;

use crate::network::TradeNetwork;

pub const DAMPING: f64 = 0.85;
pub const TOLERANCE: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PageRankResult {
    pub scores: Vec<f64>,
    pub iterations: usize,
    /// False when the iteration cap was hit before the L1 change fell below tolerance.
    pub converged: bool,
}

/// Weighted PageRank.
///
/// A walker at `i` follows edge `i→j` with probability `w_ij / s_out(i)`.
/// Nodes without active out-edges spread their mass uniformly.
pub fn pagerank(net: &TradeNetwork) -> PageRankResult {
    let n = net.node_count();
    if n == 0 {
        return PageRankResult {
            scores: Vec::new(),
            iterations: 0,
            converged: true,
        };
    }
    let out_strength = super::strength(net, super::Direction::Out);
    let links: Vec<(usize, usize, f64)> = net
        .active_edges()
        .map(|(_, e)| (e.source.0, e.target.0, e.weight / out_strength[e.source.0]))
        .collect();
    let nf = n as f64;
    let mut rank = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let dangling: f64 = rank
            .iter()
            .zip(&out_strength)
            .filter(|(_, &s)| s == 0.0)
            .map(|(r, _)| r)
            .sum();
        let base = (1.0 - DAMPING) / nf + DAMPING * dangling / nf;
        next.fill(base);
        for &(s, t, p) in &links {
            next[t] += DAMPING * rank[s] * p;
        }
        let change: f64 = next.iter().zip(&rank).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if change < TOLERANCE {
            converged = true;
            break;
        }
    }
    PageRankResult {
        scores: rank,
        iterations,
        converged,
    }
}
