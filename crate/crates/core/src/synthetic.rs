//! Seeded synthetic trade networks for tests, benchmarks and demos.
//!
//! [`hub_dominated`] grows an undirected preferential-attachment skeleton,
//! orients each link (sometimes both ways) and assigns heavy-tailed volumes
//! that grow with the endpoint degrees. The result has a few hubs carrying
//! most links and most volume, like real commodity trade networks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal};

use crate::network::{FlowRecord, TradeNetwork};

#[derive(Debug, Clone)]
pub struct HubNetworkSpec {
    pub nodes: usize,
    /// Links each newcomer attaches to existing nodes.
    pub links_per_node: usize,
    /// Probability that a link carries trade in both directions.
    pub reciprocity: f64,
    /// Exponent on `k_u k_v` in the edge volume.
    pub volume_exponent: f64,
    pub seed: u64,
    pub year: i32,
}

impl Default for HubNetworkSpec {
    fn default() -> Self {
        Self {
            nodes: 200,
            links_per_node: 2,
            reciprocity: 0.4,
            volume_exponent: 0.8,
            seed: 2020,
            year: 2020,
        }
    }
}

pub fn hub_dominated_records(spec: &HubNetworkSpec) -> Vec<FlowRecord> {
    let n = spec.nodes;
    let m = spec.links_per_node.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut links: Vec<(usize, usize)> = Vec::new();
    // every endpoint occurrence, so uniform picks are degree-proportional
    let mut ends: Vec<usize> = Vec::new();
    let core = (m + 1).min(n);
    for u in 0..core {
        for v in u + 1..core {
            links.push((u, v));
            ends.extend([u, v]);
        }
    }
    for t in core..n {
        let mut chosen: Vec<usize> = Vec::with_capacity(m);
        while chosen.len() < m.min(t) {
            let v = ends[rng.random_range(0..ends.len())];
            if !chosen.contains(&v) {
                chosen.push(v);
            }
        }
        for v in chosen {
            links.push((v, t));
            ends.extend([v, t]);
        }
    }

    let mut degree = vec![0usize; n];
    for &(u, v) in &links {
        degree[u] += 1;
        degree[v] += 1;
    }
    let noise = LogNormal::new(0.0, 1.0).expect("valid lognormal");
    let code = |i: usize| format!("E{i:04}");
    let mut records = Vec::new();
    for (u, v) in links {
        let base = ((degree[u] * degree[v]) as f64).powf(spec.volume_exponent) * 1e6;
        let both = rng.random_bool(spec.reciprocity);
        let forward = rng.random_bool(0.5);
        if both || forward {
            records.push(FlowRecord::new(code(u), code(v), base * noise.sample(&mut rng)));
        }
        if both || !forward {
            records.push(FlowRecord::new(code(v), code(u), base * noise.sample(&mut rng)));
        }
    }
    records
}

pub fn hub_dominated(spec: &HubNetworkSpec) -> TradeNetwork {
    TradeNetwork::build(spec.year, hub_dominated_records(spec))
        .expect("generated volumes are positive and finite")
}
