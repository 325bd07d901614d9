use rayon::prelude::*;

use crate::network::TradeNetwork;
use crate::paths::{CsrView, Dijkstra, Direction};

/// Harmonic closeness on `1/w` distances.
///
/// `score(i) = (1/(N-1)) Σ_{j≠i} 1/d(i,j)` with unreachable terms dropped.
/// `Direction::In` uses distances from every `j` to `i`.
pub fn closeness(net: &TradeNetwork, dir: Direction) -> Vec<f64> {
    let n = net.node_count();
    if n < 2 {
        return vec![0.0; n];
    }
    let g = CsrView::new(net, dir);
    let denom = (n - 1) as f64;
    (0..n)
        .into_par_iter()
        .map_init(
            || Dijkstra::new(n),
            |dij, i| {
                dij.run(&g, i);
                dij.reciprocal_sum(i) / denom
            },
        )
        .collect()
}
