//! Deterministic influence rankings.
//!
//! Node rankings sort by score descending, then total strength descending,
//! then code ascending. Edge rankings sort by score descending, then weight
//! descending, then `(source code, target code)` ascending. The random
//! indicator is a seeded uniform shuffle. Only active elements are ranked.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{node_scores, total_strength, CentralityError, IndicatorKind};
use crate::network::{EdgeId, Element, NodeId, TradeNetwork};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfluenceRanking {
    pub indicator: IndicatorKind,
    pub items: Vec<Element>,
    /// Aligned with `items`. For the random indicator these are the
    /// descending positions `M, M-1, ..., 1`.
    pub scores: Vec<f64>,
    pub seed: Option<u64>,
}

impl InfluenceRanking {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn top(&self, k: usize) -> impl Iterator<Item = (Element, f64)> + '_ {
        self.items
            .iter()
            .copied()
            .zip(self.scores.iter().copied())
            .take(k)
    }
}

fn shuffled(mut items: Vec<Element>, indicator: IndicatorKind, seed: u64) -> InfluenceRanking {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    items.shuffle(&mut rng);
    let m = items.len();
    InfluenceRanking {
        indicator,
        scores: (0..m).map(|p| (m - p) as f64).collect(),
        items,
        seed: Some(seed),
    }
}

pub fn rank_nodes(
    net: &TradeNetwork,
    indicator: IndicatorKind,
    seed: u64,
) -> Result<InfluenceRanking, CentralityError> {
    let active: Vec<NodeId> = net.nodes().filter(|&n| net.is_node_active(n)).collect();
    if indicator == IndicatorKind::Random {
        return Ok(shuffled(
            active.into_iter().map(Element::Node).collect(),
            indicator,
            seed,
        ));
    }
    let scores = node_scores(net, indicator, seed)?;
    let strength = total_strength(net);
    let mut order = active;
    order.sort_by(|a, b| {
        desc(scores[a.0], scores[b.0])
            .then_with(|| desc(strength[a.0], strength[b.0]))
            .then_with(|| net.code(*a).cmp(net.code(*b)))
    });
    Ok(InfluenceRanking {
        indicator,
        scores: order.iter().map(|n| scores[n.0]).collect(),
        items: order.into_iter().map(Element::Node).collect(),
        seed: indicator.uses_modules().then_some(seed),
    })
}

/// Active edges by trade volume.
pub fn rank_edges(net: &TradeNetwork) -> InfluenceRanking {
    let weights: Vec<f64> = net.edges().iter().map(|e| e.weight).collect();
    sort_edges(net, IndicatorKind::EdgeWeight, &weights, None)
}

/// Edge ranking under any indicator.
///
/// Node indicators score an edge by the sum of its endpoint scores.
pub fn rank_edges_by(
    net: &TradeNetwork,
    indicator: IndicatorKind,
    seed: u64,
) -> Result<InfluenceRanking, CentralityError> {
    match indicator {
        IndicatorKind::EdgeWeight => Ok(rank_edges(net)),
        IndicatorKind::Random => Ok(shuffled(
            net.active_edges().map(|(e, _)| Element::Edge(e)).collect(),
            indicator,
            seed,
        )),
        _ => {
            let node = node_scores(net, indicator, seed)?;
            let scores: Vec<f64> = net
                .edges()
                .iter()
                .map(|e| node[e.source.0] + node[e.target.0])
                .collect();
            Ok(sort_edges(
                net,
                indicator,
                &scores,
                indicator.uses_modules().then_some(seed),
            ))
        }
    }
}

fn sort_edges(
    net: &TradeNetwork,
    indicator: IndicatorKind,
    scores: &[f64],
    seed: Option<u64>,
) -> InfluenceRanking {
    let mut order: Vec<EdgeId> = net.active_edges().map(|(e, _)| e).collect();
    order.sort_by(|a, b| {
        let (ea, eb) = (net.edge(*a), net.edge(*b));
        desc(scores[a.0], scores[b.0])
            .then_with(|| desc(ea.weight, eb.weight))
            .then_with(|| net.code(ea.source).cmp(net.code(eb.source)))
            .then_with(|| net.code(ea.target).cmp(net.code(eb.target)))
    });
    InfluenceRanking {
        indicator,
        scores: order.iter().map(|e| scores[e.0]).collect(),
        items: order.into_iter().map(Element::Edge).collect(),
        seed,
    }
}

fn desc(a: f64, b: f64) -> Ordering {
    b.total_cmp(&a)
}
