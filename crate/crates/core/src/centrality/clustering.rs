use super::undirected_neighbors;
use crate::network::TradeNetwork;

/// Local clustering coefficient on the binarized undirected projection.
///
/// `C_i = triangles_i / (k_i (k_i - 1) / 2)`, zero when `k_i < 2`.
pub fn clustering(net: &TradeNetwork) -> Vec<f64> {
    let nb = undirected_neighbors(net);
    nb.iter()
        .map(|list| {
            let k = list.len();
            if k < 2 {
                return 0.0;
            }
            let mut links = 0usize;
            for (a, &u) in list.iter().enumerate() {
                for &v in &list[a + 1..] {
                    if nb[u].binary_search(&v).is_ok() {
                        links += 1;
                    }
                }
            }
            links as f64 / (k * (k - 1) / 2) as f64
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_is_fully_clustered() {
        let net = TradeNetwork::build(0, vec![("A", "B", 1.0), ("B", "C", 2.0), ("C", "A", 3.0)])
            .unwrap();
        assert_eq!(clustering(&net), vec![1.0; 3]);
    }

    #[test]
    fn star_has_no_triangles() {
        let net = TradeNetwork::build(
            0,
            vec![("C", "A", 1.0), ("B", "C", 1.0), ("C", "D", 1.0), ("E", "C", 1.0)],
        )
        .unwrap();
        assert!(clustering(&net).iter().all(|&c| c == 0.0));
    }

    #[test]
    fn reciprocal_edges_count_once() {
        let net = TradeNetwork::build(
            0,
            vec![("A", "B", 1.0), ("B", "A", 1.0), ("B", "C", 1.0), ("A", "C", 1.0), ("C", "D", 1.0)],
        )
        .unwrap();
        // C has neighbours A, B, D with one link (A-B) among them
        assert_eq!(clustering(&net), vec![1.0, 1.0, 1.0 / 3.0, 0.0]);
    }
}
