//! Shortest paths over reciprocal-weight edge lengths.
//!
//! Every active edge of weight `w` has length `1/w`, so heavy trade routes are
//! short. [`CsrView`] snapshots the active edges of a network into compressed
//! rows; [`Dijkstra`] holds the reusable per-thread buffers.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::network::TradeNetwork;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Out,
    In,
}

/// Compressed adjacency of the active edges in one direction.
#[derive(Debug, Clone)]
pub struct CsrView {
    offsets: Vec<usize>,
    heads: Vec<usize>,
    lengths: Vec<f64>,
}

impl CsrView {
    /// `Direction::In` reverses every edge, so a search from `i` yields
    /// distances *to* `i`.
    pub fn new(net: &TradeNetwork, dir: Direction) -> Self {
        let n = net.node_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut heads = Vec::new();
        let mut lengths = Vec::new();
        offsets.push(0);
        for u in net.nodes() {
            let it: Box<dyn Iterator<Item = _>> = match dir {
                Direction::Out => Box::new(net.out_edges(u)),
                Direction::In => Box::new(net.in_edges(u)),
            };
            for e in it {
                if !net.is_edge_active(e) {
                    continue;
                }
                let edge = net.edge(e);
                let head = match dir {
                    Direction::Out => edge.target,
                    Direction::In => edge.source,
                };
                heads.push(head.0);
                lengths.push(1.0 / edge.weight);
            }
            offsets.push(heads.len());
        }
        Self {
            offsets,
            heads,
            lengths,
        }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (a, b) = (self.offsets[u], self.offsets[u + 1]);
        self.heads[a..b]
            .iter()
            .copied()
            .zip(self.lengths[a..b].iter().copied())
    }
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    dist: f64,
    node: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    // min-heap on distance, then node index
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Reusable single-source search state.
///
/// After [`Dijkstra::run`], `dist` holds the shortest distances (infinity when
/// unreachable) and `order` the settled nodes by nondecreasing distance.
#[derive(Debug, Default)]
pub struct Dijkstra {
    pub dist: Vec<f64>,
    pub order: Vec<usize>,
    heap: BinaryHeap<Entry>,
}

impl Dijkstra {
    pub fn new(n: usize) -> Self {
        Self {
            dist: vec![f64::INFINITY; n],
            order: Vec::with_capacity(n),
            heap: BinaryHeap::with_capacity(n),
        }
    }

    fn reset(&mut self, n: usize) {
        self.dist.clear();
        self.dist.resize(n, f64::INFINITY);
        self.order.clear();
        self.heap.clear();
    }

    pub fn run(&mut self, g: &CsrView, source: usize) {
        self.reset(g.node_count());
        self.dist[source] = 0.0;
        self.heap.push(Entry {
            dist: 0.0,
            node: source,
        });
        while let Some(Entry { dist, node }) = self.heap.pop() {
            if dist > self.dist[node] {
                continue;
            }
            self.order.push(node);
            for (v, len) in g.neighbors(node) {
                let nd = dist + len;
                if nd < self.dist[v] {
                    self.dist[v] = nd;
                    self.heap.push(Entry { dist: nd, node: v });
                }
            }
        }
    }

    /// Sum of `1/d(source, j)` over reachable `j != source`, in index order.
    pub fn reciprocal_sum(&self, source: usize) -> f64 {
        self.dist
            .iter()
            .enumerate()
            .filter(|&(j, d)| j != source && d.is_finite())
            .map(|(_, d)| 1.0 / d)
            .sum()
    }
}
