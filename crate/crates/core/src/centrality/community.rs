//! Seeded Louvain modularity optimisation and module-role indicators.
//!
//! Communities are found on the undirected projection where the weight
//! between `i` and `j` is `w_ij + w_ji`. The seed fixes the node visit order
//! of every local-moving pass; with the same seed and network the assignment
//! is identical across runs and thread counts.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::undirected_neighbors;
use crate::network::TradeNetwork;

// Relative modularity gain below which a move is not worth making. Keeps
// near-ties from flipping under rounding when all weights are rescaled.
const GAIN_EPS: f64 = 1e-12;

/// Module id per node, renumbered `0..k` in order of first appearance.
pub fn detect_communities(net: &TradeNetwork, seed: u64) -> Vec<usize> {
    let n = net.node_count();
    let mut adj: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n];
    for (_, e) in net.active_edges() {
        let (s, t) = (e.source.0, e.target.0);
        *adj[s].entry(t).or_insert(0.0) += e.weight;
        *adj[t].entry(s).or_insert(0.0) += e.weight;
    }
    let graph = LevelGraph {
        adj: adj.into_iter().map(|m| m.into_iter().collect()).collect(),
        self_loops: vec![0.0; n],
    };
    louvain(graph, seed)
}

struct LevelGraph {
    adj: Vec<Vec<(usize, f64)>>,
    /// Weight of internal links collapsed into each super-node (counted once).
    self_loops: Vec<f64>,
}

impl LevelGraph {
    fn len(&self) -> usize {
        self.adj.len()
    }

    fn degree(&self, i: usize) -> f64 {
        self.adj[i].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self.self_loops[i]
    }
}

fn louvain(mut graph: LevelGraph, seed: u64) -> Vec<usize> {
    let n = graph.len();
    let mut membership: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let (community, moved) = local_moving(&graph, &mut rng);
        if !moved {
            break;
        }
        let (relabel, count) = renumber(&community);
        for m in membership.iter_mut() {
            *m = relabel[community[*m]];
        }
        if count == graph.len() {
            break;
        }
        graph = aggregate(&graph, &community, &relabel, count);
    }
    final_labels(&membership)
}

fn final_labels(membership: &[usize]) -> Vec<usize> {
    let (relabel, _) = renumber(membership);
    membership.iter().map(|&m| relabel[m]).collect()
}

/// Maps community ids to `0..k` in order of first appearance by node index.
fn renumber(community: &[usize]) -> (Vec<usize>, usize) {
    let max = community.iter().copied().max().map_or(0, |m| m + 1);
    let mut relabel = vec![usize::MAX; max];
    let mut next = 0;
    for &c in community {
        if relabel[c] == usize::MAX {
            relabel[c] = next;
            next += 1;
        }
    }
    (relabel, next)
}

fn local_moving(graph: &LevelGraph, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
    let n = graph.len();
    let degree: Vec<f64> = (0..n).map(|i| graph.degree(i)).collect();
    let m2: f64 = degree.iter().sum();
    let mut community: Vec<usize> = (0..n).collect();
    if m2 <= 0.0 {
        return (community, false);
    }
    let mut total = degree.clone();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut moved_any = false;
    let mut links_to: BTreeMap<usize, f64> = BTreeMap::new();
    loop {
        let mut moved = false;
        for &i in &order {
            let own = community[i];
            links_to.clear();
            for &(j, w) in &graph.adj[i] {
                *links_to.entry(community[j]).or_insert(0.0) += w;
            }
            total[own] -= degree[i];
            let gain = |c: usize, k_in: f64| (k_in - total[c] * degree[i] / m2) / m2;
            let mut best = own;
            let mut best_gain = gain(own, links_to.get(&own).copied().unwrap_or(0.0));
            for (&c, &k_in) in &links_to {
                let g = gain(c, k_in);
                if g > best_gain + GAIN_EPS {
                    best = c;
                    best_gain = g;
                }
            }
            total[best] += degree[i];
            if best != own {
                community[i] = best;
                moved = true;
                moved_any = true;
            }
        }
        if !moved {
            break;
        }
    }
    (community, moved_any)
}

fn aggregate(graph: &LevelGraph, community: &[usize], relabel: &[usize], count: usize) -> LevelGraph {
    let mut adj: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); count];
    let mut self_loops = vec![0.0; count];
    for i in 0..graph.len() {
        let ci = relabel[community[i]];
        self_loops[ci] += graph.self_loops[i];
        for &(j, w) in &graph.adj[i] {
            let cj = relabel[community[j]];
            if ci == cj {
                // each internal link is visited from both ends
                self_loops[ci] += w / 2.0;
            } else {
                *adj[ci].entry(cj).or_insert(0.0) += w;
            }
        }
    }
    LevelGraph {
        adj: adj.into_iter().map(|m| m.into_iter().collect()).collect(),
        self_loops,
    }
}

/// Newman modularity of an assignment on the undirected weight-summed projection.
pub fn modularity(net: &TradeNetwork, modules: &[usize]) -> f64 {
    let n = net.node_count();
    let mut degree = vec![0.0; n];
    let mut internal = 0.0;
    let mut m = 0.0;
    for (_, e) in net.active_edges() {
        degree[e.source.0] += e.weight;
        degree[e.target.0] += e.weight;
        m += e.weight;
        if modules[e.source.0] == modules[e.target.0] {
            internal += e.weight;
        }
    }
    if m == 0.0 {
        return 0.0;
    }
    let k = modules.iter().copied().max().map_or(0, |x| x + 1);
    let mut tot = vec![0.0; k];
    for (i, &c) in modules.iter().enumerate() {
        tot[c] += degree[i];
    }
    internal / m - tot.iter().map(|t| (t / (2.0 * m)).powi(2)).sum::<f64>()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModuleIndicators {
    /// Within-module degree z-score.
    pub within_module: Vec<f64>,
    /// Links to nodes in other modules.
    pub outside_module: Vec<f64>,
    /// Participation coefficient `1 - Σ_s (κ_is / k_i)^2`.
    pub participation: Vec<f64>,
}

/// Module-role indicators on the binarized undirected projection.
pub fn module_indicators(net: &TradeNetwork, modules: &[usize]) -> ModuleIndicators {
    let n = net.node_count();
    let nb = undirected_neighbors(net);
    let mut inside = vec![0.0; n];
    let mut outside = vec![0.0; n];
    let mut participation = vec![0.0; n];
    let mut per_module: BTreeMap<usize, f64> = BTreeMap::new();
    for i in 0..n {
        per_module.clear();
        for &j in &nb[i] {
            *per_module.entry(modules[j]).or_insert(0.0) += 1.0;
        }
        let k = nb[i].len() as f64;
        inside[i] = per_module.get(&modules[i]).copied().unwrap_or(0.0);
        outside[i] = k - inside[i];
        if k > 0.0 {
            participation[i] = 1.0 - per_module.values().map(|&c| (c / k).powi(2)).sum::<f64>();
        }
    }

    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &c) in modules.iter().enumerate() {
        members.entry(c).or_default().push(i);
    }
    let mut within = vec![0.0; n];
    for nodes in members.values() {
        let len = nodes.len() as f64;
        let mean = nodes.iter().map(|&i| inside[i]).sum::<f64>() / len;
        let var = nodes.iter().map(|&i| (inside[i] - mean).powi(2)).sum::<f64>() / len;
        let std = var.sqrt();
        if std > 0.0 {
            for &i in nodes {
                within[i] = (inside[i] - mean) / std;
            }
        }
    }
    ModuleIndicators {
        within_module: within,
        outside_module: outside,
        participation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clique(prefix: &str, k: usize, w: f64, recs: &mut Vec<(String, String, f64)>) {
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    recs.push((format!("{prefix}{i}"), format!("{prefix}{j}"), w));
                }
            }
        }
    }

    fn two_cliques() -> TradeNetwork {
        let mut recs = Vec::new();
        clique("A", 5, 10.0, &mut recs);
        clique("B", 5, 10.0, &mut recs);
        recs.push(("A0".into(), "B0".into(), 0.5));
        TradeNetwork::build(0, recs).unwrap()
    }

    #[test]
    fn two_cliques_split() {
        let net = two_cliques();
        for seed in [0, 1, 7, 42] {
            let m = detect_communities(&net, seed);
            let a = m[net.node_by_code("A0").unwrap().0];
            let b = m[net.node_by_code("B0").unwrap().0];
            assert_ne!(a, b);
            for i in 0..5 {
                assert_eq!(m[net.node_by_code(&format!("A{i}")).unwrap().0], a);
                assert_eq!(m[net.node_by_code(&format!("B{i}")).unwrap().0], b);
            }
            // the split beats lumping everything together
            assert!(modularity(&net, &m) > modularity(&net, &[0; 10]));
        }
    }

    #[test]
    fn single_clique_is_one_module() {
        let mut recs = Vec::new();
        clique("A", 6, 1.0, &mut recs);
        let net = TradeNetwork::build(0, recs).unwrap();
        let m = detect_communities(&net, 3);
        assert!(m.iter().all(|&c| c == 0));
    }

    #[test]
    fn same_seed_same_assignment() {
        let net = crate::synthetic::hub_dominated(&crate::synthetic::HubNetworkSpec {
            nodes: 60,
            ..Default::default()
        });
        assert_eq!(detect_communities(&net, 9), detect_communities(&net, 9));
    }

    #[test]
    fn edgeless_nodes_are_singletons() {
        let net = TradeNetwork::build(0, vec![("A", "A", 1.0), ("B", "B", 1.0)]).unwrap();
        assert_eq!(detect_communities(&net, 0), vec![0, 1]);
    }

    #[test]
    fn participation_values() {
        // X links to A (module 0) and B (module 1); A and B link inside their modules
        let net = TradeNetwork::build(
            0,
            vec![("X", "A", 1.0), ("X", "B", 1.0), ("A", "C", 1.0), ("B", "D", 1.0)],
        )
        .unwrap();
        let idx = |c: &str| net.node_by_code(c).unwrap().0;
        let mut modules = vec![0; 5];
        modules[idx("B")] = 1;
        modules[idx("D")] = 1;
        modules[idx("X")] = 0;
        let ind = module_indicators(&net, &modules);
        assert_eq!(ind.participation[idx("X")], 0.5);
        assert_eq!(ind.outside_module[idx("X")], 1.0);
        assert_eq!(ind.participation[idx("C")], 0.0);
        assert_eq!(ind.participation[idx("D")], 0.0);
    }

    #[test]
    fn singleton_module_has_zero_z() {
        let net = TradeNetwork::build(0, vec![("A", "B", 1.0), ("B", "C", 1.0)]).unwrap();
        let ind = module_indicators(&net, &[0, 0, 1]);
        assert_eq!(ind.within_module[2], 0.0);
        // A has 1 inside link, B has 1 (A) -> equal -> std 0
        assert_eq!(ind.within_module[0], 0.0);
    }

    #[test]
    fn z_score_of_uneven_module() {
        // star inside one module: centre 3 links, leaves 1 each
        let net = TradeNetwork::build(0, vec![("C", "A", 1.0), ("C", "B", 1.0), ("C", "D", 1.0)])
            .unwrap();
        let ind = module_indicators(&net, &[0; 4]);
        let c = net.node_by_code("C").unwrap().0;
        // mean 1.5, std sqrt(0.75)
        assert!((ind.within_module[c] - 1.5 / 0.75f64.sqrt()).abs() < 1e-15);
    }
}
