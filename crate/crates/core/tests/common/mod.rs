//! Brute-force oracles and random fixtures shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tradenet::network::{FlowRecord, NodeId, TradeNetwork};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn code(i: usize) -> String {
    format!("N{i:02}")
}

/// Random digraph on exactly `n` nodes (self-loops keep isolated nodes in
/// the node set). Each ordered pair is linked with probability `p`.
pub fn random_digraph(
    rng: &mut ChaCha8Rng,
    n: usize,
    p: f64,
    mut weight: impl FnMut(&mut ChaCha8Rng) -> f64,
) -> TradeNetwork {
    let mut recs: Vec<FlowRecord> = (0..n).map(|i| FlowRecord::new(code(i), code(i), 1.0)).collect();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random_bool(p) {
                let w = weight(rng);
                recs.push(FlowRecord::new(code(i), code(j), w));
            }
        }
    }
    TradeNetwork::build(2000, recs).unwrap()
}

/// Uniform in (0, 10].
pub fn uniform_weight(rng: &mut ChaCha8Rng) -> f64 {
    10.0 - rng.random_range(0.0..10.0)
}

/// Powers of two in [1/4, 4], so `1/w` and all path sums are exact.
pub fn dyadic_weight(rng: &mut ChaCha8Rng) -> f64 {
    [0.25, 0.5, 1.0, 2.0, 4.0][rng.random_range(0..5)]
}

pub fn complete_uniform(n: usize, w: f64) -> TradeNetwork {
    let mut recs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                recs.push(FlowRecord::new(code(i), code(j), w));
            }
        }
    }
    TradeNetwork::build(2000, recs).unwrap()
}

/// Active adjacency: `adj[u]` lists `(v, 1/w)`.
pub fn active_adjacency(net: &TradeNetwork) -> Vec<Vec<(usize, f64)>> {
    let mut adj = vec![Vec::new(); net.node_count()];
    for (_, e) in net.active_edges() {
        adj[e.source.0].push((e.target.0, 1.0 / e.weight));
    }
    adj
}

/// Every simple path from `s` to `t` as (length, nodes).
pub fn simple_paths(adj: &[Vec<(usize, f64)>], s: usize, t: usize) -> Vec<(f64, Vec<usize>)> {
    fn walk(
        adj: &[Vec<(usize, f64)>],
        u: usize,
        t: usize,
        len: f64,
        path: &mut Vec<usize>,
        on: &mut [bool],
        out: &mut Vec<(f64, Vec<usize>)>,
    ) {
        if u == t {
            out.push((len, path.clone()));
            return;
        }
        for &(v, l) in &adj[u] {
            if !on[v] {
                on[v] = true;
                path.push(v);
                walk(adj, v, t, len + l, path, on, out);
                path.pop();
                on[v] = false;
            }
        }
    }
    let mut on = vec![false; adj.len()];
    on[s] = true;
    let mut out = Vec::new();
    walk(adj, s, t, 0.0, &mut vec![s], &mut on, &mut out);
    out
}

/// Shortest distance by exhaustive path enumeration; infinity if unreachable.
pub fn brute_distance(adj: &[Vec<(usize, f64)>], s: usize, t: usize) -> f64 {
    simple_paths(adj, s, t)
        .into_iter()
        .map(|(l, _)| l)
        .fold(f64::INFINITY, f64::min)
}

/// `E = Σ_{i≠j} 1/d_ij / (N(N-1))`, inactive nodes contributing nothing.
pub fn brute_efficiency(net: &TradeNetwork) -> f64 {
    let n = net.node_count();
    if n < 2 {
        return 0.0;
    }
    let adj = active_adjacency(net);
    let mut total = 0.0;
    for i in 0..n {
        if !net.is_node_active(NodeId(i)) {
            continue;
        }
        for j in 0..n {
            if i != j {
                let d = brute_distance(&adj, i, j);
                if d.is_finite() {
                    total += 1.0 / d;
                }
            }
        }
    }
    total / (n * (n - 1)) as f64
}

/// Harmonic closeness, summing `1/d` in target index order like the library.
pub fn brute_closeness(net: &TradeNetwork, incoming: bool) -> Vec<f64> {
    let n = net.node_count();
    let adj = active_adjacency(net);
    (0..n)
        .map(|i| {
            let mut sum = 0.0;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let d = if incoming {
                    brute_distance(&adj, j, i)
                } else {
                    brute_distance(&adj, i, j)
                };
                if d.is_finite() {
                    sum += 1.0 / d;
                }
            }
            if n < 2 { 0.0 } else { sum / (n - 1) as f64 }
        })
        .collect()
}

/// Directed betweenness from the full list of shortest paths of every
/// ordered pair. Needs exact path lengths (dyadic weights) for ties.
pub fn brute_betweenness(net: &TradeNetwork) -> Vec<f64> {
    let n = net.node_count();
    let adj = active_adjacency(net);
    let mut b = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            if s == t {
                continue;
            }
            let paths = simple_paths(&adj, s, t);
            let best = paths.iter().map(|(l, _)| *l).fold(f64::INFINITY, f64::min);
            let shortest: Vec<&Vec<usize>> =
                paths.iter().filter(|(l, _)| *l == best).map(|(_, p)| p).collect();
            if shortest.is_empty() {
                continue;
            }
            let mut through = vec![0usize; n];
            for p in &shortest {
                for &v in &p[1..p.len() - 1] {
                    through[v] += 1;
                }
            }
            for v in 0..n {
                if through[v] > 0 {
                    b[v] += through[v] as f64 / shortest.len() as f64;
                }
            }
        }
    }
    b
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
