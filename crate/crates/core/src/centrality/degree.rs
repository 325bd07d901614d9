use crate::network::TradeNetwork;
use crate::paths::Direction;

/// Number of active edges leaving (`Out`) or entering (`In`) each node.
pub fn degree(net: &TradeNetwork, dir: Direction) -> Vec<f64> {
    let mut d = vec![0.0; net.node_count()];
    for (_, e) in net.active_edges() {
        let n = match dir {
            Direction::Out => e.source,
            Direction::In => e.target,
        };
        d[n.0] += 1.0;
    }
    d
}

/// Sum of active edge weights leaving or entering each node.
pub fn strength(net: &TradeNetwork, dir: Direction) -> Vec<f64> {
    let mut s = vec![0.0; net.node_count()];
    for (_, e) in net.active_edges() {
        let n = match dir {
            Direction::Out => e.source,
            Direction::In => e.target,
        };
        s[n.0] += e.weight;
    }
    s
}

/// In-strength plus out-strength; the ranking tie-breaker.
pub fn total_strength(net: &TradeNetwork) -> Vec<f64> {
    strength(net, Direction::Out)
        .into_iter()
        .zip(strength(net, Direction::In))
        .map(|(a, b)| a + b)
        .collect()
}
