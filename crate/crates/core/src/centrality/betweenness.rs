//! Weighted shortest-path betweenness (dependency accumulation).
//!
//! Unnormalized and directed: `b(v) = Σ_{s≠v≠t} σ_st(v) / σ_st` over ordered
//! pairs, with lengths `1/w`. Shortest paths of equal length share credit
//! evenly. Two paths tie only when their lengths compare equal as floats.

use rayon::prelude::*;

use crate::network::TradeNetwork;
use crate::paths::{CsrView, Direction};

// Sources are processed in parallel chunks; chunk results are summed in
// source order so scores do not depend on the thread schedule.
const CHUNK: usize = 64;

struct Workspace {
    dist: Vec<f64>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    preds: Vec<Vec<usize>>,
    order: Vec<usize>,
    heap: std::collections::BinaryHeap<HeapItem>,
}

#[derive(PartialEq)]
struct HeapItem(f64, usize);
impl Eq for HeapItem {}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl Workspace {
    fn new(n: usize) -> Self {
        Self {
            dist: vec![f64::INFINITY; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            preds: vec![Vec::new(); n],
            order: Vec::with_capacity(n),
            heap: Default::default(),
        }
    }

    /// Dependencies `δ_s(v)` of one source, left in `self.delta`.
    fn single_source(&mut self, g: &CsrView, s: usize) {
        self.dist.fill(f64::INFINITY);
        self.sigma.fill(0.0);
        self.delta.fill(0.0);
        for p in &mut self.preds {
            p.clear();
        }
        self.order.clear();
        self.heap.clear();

        self.dist[s] = 0.0;
        self.sigma[s] = 1.0;
        self.heap.push(HeapItem(0.0, s));
        while let Some(HeapItem(d, u)) = self.heap.pop() {
            if d > self.dist[u] {
                continue;
            }
            self.order.push(u);
            for (v, len) in g.neighbors(u) {
                let nd = d + len;
                if nd < self.dist[v] {
                    self.dist[v] = nd;
                    self.sigma[v] = self.sigma[u];
                    self.preds[v].clear();
                    self.preds[v].push(u);
                    self.heap.push(HeapItem(nd, v));
                } else if nd == self.dist[v] {
                    self.sigma[v] += self.sigma[u];
                    self.preds[v].push(u);
                }
            }
        }
        while let Some(w) = self.order.pop() {
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            for i in 0..self.preds[w].len() {
                let v = self.preds[w][i];
                self.delta[v] += self.sigma[v] * coeff;
            }
        }
        self.delta[s] = 0.0;
    }
}

pub fn betweenness(net: &TradeNetwork) -> Vec<f64> {
    let n = net.node_count();
    let g = CsrView::new(net, Direction::Out);
    let mut scores = vec![0.0; n];
    let sources: Vec<usize> = (0..n).collect();
    for chunk in sources.chunks(CHUNK) {
        let deltas: Vec<Vec<f64>> = chunk
            .par_iter()
            .map_init(
                || Workspace::new(n),
                |ws, &s| {
                    ws.single_source(&g, s);
                    ws.delta.clone()
                },
            )
            .collect();
        for d in deltas {
            for (acc, x) in scores.iter_mut().zip(d) {
                *acc += x;
            }
        }
    }
    scores
}
