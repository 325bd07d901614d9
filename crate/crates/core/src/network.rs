//! Weighted directed trade graph with mask-based shocks.
//!
//! A [`TradeNetwork`] pairs an immutable baseline (codes, aggregated edges,
//! adjacency) with a private activity mask. Shocking a node or edge flips mask
//! bits only; the baseline weights are never touched, so restoring every masked
//! element reproduces the baseline bit for bit.
//!
//! Edges point exporter -> importer. Self-loops are dropped and parallel
//! records are summed when the network is built.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error("record {index} ({source_code} -> {target}): weight {weight} is not finite")]
    NonFiniteWeight {
        index: usize,
        source_code: String,
        target: String,
        weight: f64,
    },
    #[error("record {index} ({source_code} -> {target}): weight {weight} must be positive")]
    NonPositiveWeight {
        index: usize,
        source_code: String,
        target: String,
        weight: f64,
    },
    #[error("record {index}: empty economy code")]
    EmptyCode { index: usize },
    #[error("node {0} is already shocked")]
    NodeAlreadyInactive(usize),
    #[error("edge {0} is already shocked")]
    EdgeAlreadyInactive(usize),
    #[error("node {0} is not shocked")]
    NodeAlreadyActive(usize),
    #[error("edge {0} is not shocked")]
    EdgeAlreadyActive(usize),
    #[error("node index {0} out of range")]
    NodeOutOfRange(usize),
    #[error("edge index {0} out of range")]
    EdgeOutOfRange(usize),
}

/// Dense node handle, valid for one network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub usize);

/// Dense edge handle into the baseline edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

/// A shockable element: an economy or a trade relationship.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Element {
    Node(NodeId),
    Edge(EdgeId),
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TradeEdge {
    pub source: NodeId,
    pub target: NodeId,
    pub weight: f64,
}

/// One raw flow: `(exporter code, importer code, value)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowRecord {
    pub source: String,
    pub target: String,
    pub weight: f64,
}

impl FlowRecord {
    pub fn new(source: impl Into<String>, target: impl Into<String>, weight: f64) -> Self {
        Self {
            source: source.into(),
            target: target.into(),
            weight,
        }
    }
}

impl<S: Into<String>, T: Into<String>> From<(S, T, f64)> for FlowRecord {
    fn from((s, t, w): (S, T, f64)) -> Self {
        FlowRecord::new(s, t, w)
    }
}

#[derive(Debug)]
struct Baseline {
    year: i32,
    codes: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<TradeEdge>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
    mean_weight: f64,
}

/// Yearly trade network: shared immutable baseline plus an owned mask.
///
/// Cloning is cheap on the baseline (reference counted) and copies the mask,
/// which is how concurrent scenarios get private state.
#[derive(Debug, Clone)]
pub struct TradeNetwork {
    base: Arc<Baseline>,
    node_active: Vec<bool>,
    edge_removed: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetworkStats {
    pub nodes: usize,
    pub active_nodes: usize,
    pub edges: usize,
    pub density: f64,
    pub total_volume: f64,
    /// `None` when no edge is active.
    pub mean_edge_weight: Option<f64>,
}

impl TradeNetwork {
    /// Builds a network from flow records.
    ///
    /// Nodes are indexed in lexicographic code order and edges sorted by
    /// `(source, target)`, so the result does not depend on record order.
    pub fn build<I, R>(year: i32, records: I) -> Result<Self, NetworkError>
    where
        I: IntoIterator<Item = R>,
        R: Into<FlowRecord>,
    {
        let mut agg: BTreeMap<(String, String), Vec<f64>> = BTreeMap::new();
        let mut codes: BTreeSet<String> = BTreeSet::new();
        for (i, rec) in records.into_iter().enumerate() {
            let rec: FlowRecord = rec.into();
            if rec.source.is_empty() || rec.target.is_empty() {
                return Err(NetworkError::EmptyCode { index: i });
            }
            if !rec.weight.is_finite() {
                return Err(NetworkError::NonFiniteWeight {
                    index: i,
                    source_code: rec.source,
                    target: rec.target,
                    weight: rec.weight,
                });
            }
            if rec.weight <= 0.0 {
                return Err(NetworkError::NonPositiveWeight {
                    index: i,
                    source_code: rec.source,
                    target: rec.target,
                    weight: rec.weight,
                });
            }
            codes.insert(rec.source.clone());
            codes.insert(rec.target.clone());
            if rec.source == rec.target {
                continue;
            }
            agg.entry((rec.source, rec.target)).or_default().push(rec.weight);
        }

        let codes: Vec<String> = codes.into_iter().collect();
        let index: HashMap<String, usize> = codes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        let n = codes.len();
        let mut edges = Vec::with_capacity(agg.len());
        for ((s, t), mut parts) in agg {
            // summed in sorted order so record order cannot change the bits
            parts.sort_by(f64::total_cmp);
            edges.push(TradeEdge {
                source: NodeId(index[&s]),
                target: NodeId(index[&t]),
                weight: parts.iter().sum(),
            });
        }
        // BTreeMap ordering over codes equals ordering over indices.
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (e, edge) in edges.iter().enumerate() {
            out_edges[edge.source.0].push(e);
            in_edges[edge.target.0].push(e);
        }
        let mean_weight = if edges.is_empty() {
            0.0
        } else {
            edges.iter().map(|e| e.weight).sum::<f64>() / edges.len() as f64
        };
        let m = edges.len();
        Ok(Self {
            base: Arc::new(Baseline {
                year,
                codes,
                index,
                edges,
                out_edges,
                in_edges,
                mean_weight,
            }),
            node_active: vec![true; n],
            edge_removed: vec![false; m],
        })
    }

    pub fn year(&self) -> i32 {
        self.base.year
    }

    /// Fixed node count N of the yearly network, shocked nodes included.
    pub fn node_count(&self) -> usize {
        self.base.codes.len()
    }

    /// Number of edges in the baseline, active or not.
    pub fn edge_count(&self) -> usize {
        self.base.edges.len()
    }

    pub fn active_edge_count(&self) -> usize {
        (0..self.edge_count())
            .filter(|&e| self.is_edge_active(EdgeId(e)))
            .count()
    }

    pub fn active_node_count(&self) -> usize {
        self.node_active.iter().filter(|&&a| a).count()
    }

    pub fn code(&self, node: NodeId) -> &str {
        &self.base.codes[node.0]
    }

    pub fn codes(&self) -> &[String] {
        &self.base.codes
    }

    pub fn node_by_code(&self, code: &str) -> Option<NodeId> {
        self.base.index.get(code).copied().map(NodeId)
    }

    pub fn edge(&self, e: EdgeId) -> &TradeEdge {
        &self.base.edges[e.0]
    }

    /// Baseline edges, including currently inactive ones.
    pub fn edges(&self) -> &[TradeEdge] {
        &self.base.edges
    }

    pub fn find_edge(&self, source: NodeId, target: NodeId) -> Option<EdgeId> {
        self.base.out_edges[source.0]
            .iter()
            .copied()
            .find(|&e| self.base.edges[e].target == target)
            .map(EdgeId)
    }

    pub fn out_edges(&self, node: NodeId) -> impl Iterator<Item = EdgeId> + '_ {
        self.base.out_edges[node.0].iter().map(|&e| EdgeId(e))
    }

    pub fn in_edges(&self, node: NodeId) -> impl Iterator<Item = EdgeId> + '_ {
        self.base.in_edges[node.0].iter().map(|&e| EdgeId(e))
    }

    /// Active edges as `(id, edge)` pairs.
    pub fn active_edges(&self) -> impl Iterator<Item = (EdgeId, &TradeEdge)> + '_ {
        self.base
            .edges
            .iter()
            .enumerate()
            .filter(move |(e, _)| self.is_edge_active(EdgeId(*e)))
            .map(|(e, edge)| (EdgeId(e), edge))
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.node_count()).map(NodeId)
    }

    pub fn is_node_active(&self, node: NodeId) -> bool {
        self.node_active[node.0]
    }

    /// An edge is active when it was not shocked itself and both endpoints are active.
    pub fn is_edge_active(&self, e: EdgeId) -> bool {
        let edge = &self.base.edges[e.0];
        !self.edge_removed[e.0]
            && self.node_active[edge.source.0]
            && self.node_active[edge.target.0]
    }

    pub fn is_active(&self, el: Element) -> bool {
        match el {
            Element::Node(n) => self.is_node_active(n),
            Element::Edge(e) => self.is_edge_active(e),
        }
    }

    /// Mean edge weight ⟨w⟩ of the unshocked baseline (0 when edgeless).
    pub fn baseline_mean_weight(&self) -> f64 {
        self.base.mean_weight
    }

    /// Whether no element is masked.
    pub fn is_pristine(&self) -> bool {
        self.node_active.iter().all(|&a| a) && self.edge_removed.iter().all(|&r| !r)
    }

    /// Same baseline, all masks cleared.
    pub fn pristine(&self) -> Self {
        Self {
            base: Arc::clone(&self.base),
            node_active: vec![true; self.node_count()],
            edge_removed: vec![false; self.edge_count()],
        }
    }

    pub fn stats(&self) -> NetworkStats {
        let active_nodes = self.active_node_count();
        let mut edges = 0usize;
        let mut total = 0.0;
        for (_, edge) in self.active_edges() {
            edges += 1;
            total += edge.weight;
        }
        let density = if active_nodes < 2 {
            0.0
        } else {
            edges as f64 / (active_nodes as f64 * (active_nodes as f64 - 1.0))
        };
        NetworkStats {
            nodes: self.node_count(),
            active_nodes,
            edges,
            density,
            total_volume: total,
            mean_edge_weight: (edges > 0).then(|| total / edges as f64),
        }
    }

    fn check_node(&self, n: NodeId) -> Result<(), NetworkError> {
        if n.0 >= self.node_count() {
            return Err(NetworkError::NodeOutOfRange(n.0));
        }
        Ok(())
    }

    fn check_edge(&self, e: EdgeId) -> Result<(), NetworkError> {
        if e.0 >= self.edge_count() {
            return Err(NetworkError::EdgeOutOfRange(e.0));
        }
        Ok(())
    }

    /// Masks nodes together with every incident edge (row and column zeroing).
    ///
    /// Validation runs before any mutation, so on error the mask is unchanged.
    pub fn shock_nodes(&mut self, targets: &[NodeId]) -> Result<(), NetworkError> {
        for &n in targets {
            self.check_node(n)?;
            if !self.node_active[n.0] {
                return Err(NetworkError::NodeAlreadyInactive(n.0));
            }
        }
        // a repeated target would be shocked twice
        if let Some(dup) = first_duplicate(targets) {
            return Err(NetworkError::NodeAlreadyInactive(dup.0));
        }
        for &n in targets {
            self.node_active[n.0] = false;
        }
        Ok(())
    }

    /// Masks individual edges; endpoints stay active even if isolated.
    pub fn shock_edges(&mut self, targets: &[EdgeId]) -> Result<(), NetworkError> {
        for &e in targets {
            self.check_edge(e)?;
            if !self.is_edge_active(e) {
                return Err(NetworkError::EdgeAlreadyInactive(e.0));
            }
        }
        if let Some(dup) = first_duplicate(targets) {
            return Err(NetworkError::EdgeAlreadyInactive(dup.0));
        }
        for &e in targets {
            self.edge_removed[e.0] = true;
        }
        Ok(())
    }

    pub fn shock(&mut self, elements: &[Element]) -> Result<(), NetworkError> {
        let (nodes, edges) = split_elements(elements);
        // validate both kinds before mutating either
        for &e in &edges {
            self.check_edge(e)?;
            if !self.is_edge_active(e) {
                return Err(NetworkError::EdgeAlreadyInactive(e.0));
            }
        }
        self.shock_nodes(&nodes)?;
        if let Some(dup) = first_duplicate(&edges) {
            return Err(NetworkError::EdgeAlreadyInactive(dup.0));
        }
        for &e in &edges {
            self.edge_removed[e.0] = true;
        }
        Ok(())
    }

    /// Reactivates masked elements in order, at their baseline weights.
    ///
    /// A restored node brings back an incident edge only when the other
    /// endpoint is active (and the edge itself was not shocked separately).
    pub fn restore(&mut self, elements: &[Element]) -> Result<(), NetworkError> {
        let mut node_state = self.node_active.clone();
        let mut edge_state = self.edge_removed.clone();
        for &el in elements {
            match el {
                Element::Node(n) => {
                    self.check_node(n)?;
                    if node_state[n.0] {
                        return Err(NetworkError::NodeAlreadyActive(n.0));
                    }
                    node_state[n.0] = true;
                }
                Element::Edge(e) => {
                    self.check_edge(e)?;
                    if !edge_state[e.0] {
                        return Err(NetworkError::EdgeAlreadyActive(e.0));
                    }
                    edge_state[e.0] = false;
                }
            }
        }
        self.node_active = node_state;
        self.edge_removed = edge_state;
        Ok(())
    }
}

fn split_elements(elements: &[Element]) -> (Vec<NodeId>, Vec<EdgeId>) {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for el in elements {
        match *el {
            Element::Node(n) => nodes.push(n),
            Element::Edge(e) => edges.push(e),
        }
    }
    (nodes, edges)
}

fn first_duplicate<T: Ord + Copy>(items: &[T]) -> Option<T> {
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).find(|w| w[0] == w[1]).map(|w| w[0])
}
