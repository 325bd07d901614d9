//! Node influence indicators and the rankings that drive targeted shocks.
//!
//! All indicators read only active edges. Shortest-path based indicators use
//! the same `1/w` edge lengths as the efficiency measure.

mod betweenness;
mod closeness;
mod clustering;
mod community;
mod degree;
mod hits;
mod pagerank;
mod ranking;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use betweenness::betweenness;
pub use closeness::closeness;
pub use clustering::clustering;
pub use community::{detect_communities, modularity, module_indicators, ModuleIndicators};
pub use degree::{degree, strength, total_strength};
pub use hits::{hits, HitsResult};
pub use pagerank::{pagerank, PageRankResult, DAMPING};
pub use ranking::{rank_edges, rank_edges_by, rank_nodes, InfluenceRanking};

pub use crate::paths::Direction;
use crate::network::TradeNetwork;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CentralityError {
    #[error("HITS needs at least one active edge")]
    EmptyEdgeSet,
    #[error("indicator `{0}` does not score nodes")]
    NotANodeIndicator(IndicatorKind),
    #[error("unknown indicator `{0}`")]
    UnknownIndicator(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndicatorKind {
    OutDegree,
    InDegree,
    OutStrength,
    InStrength,
    OutCloseness,
    InCloseness,
    Betweenness,
    #[serde(rename = "pagerank")]
    PageRank,
    Hubs,
    Authorities,
    Clustering,
    WithinModule,
    OutsideModule,
    Participation,
    EdgeWeight,
    Random,
}

impl IndicatorKind {
    pub const ALL: [IndicatorKind; 16] = [
        IndicatorKind::OutDegree,
        IndicatorKind::InDegree,
        IndicatorKind::OutStrength,
        IndicatorKind::InStrength,
        IndicatorKind::OutCloseness,
        IndicatorKind::InCloseness,
        IndicatorKind::Betweenness,
        IndicatorKind::PageRank,
        IndicatorKind::Hubs,
        IndicatorKind::Authorities,
        IndicatorKind::Clustering,
        IndicatorKind::WithinModule,
        IndicatorKind::OutsideModule,
        IndicatorKind::Participation,
        IndicatorKind::EdgeWeight,
        IndicatorKind::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IndicatorKind::OutDegree => "out_degree",
            IndicatorKind::InDegree => "in_degree",
            IndicatorKind::OutStrength => "out_strength",
            IndicatorKind::InStrength => "in_strength",
            IndicatorKind::OutCloseness => "out_closeness",
            IndicatorKind::InCloseness => "in_closeness",
            IndicatorKind::Betweenness => "betweenness",
            IndicatorKind::PageRank => "pagerank",
            IndicatorKind::Hubs => "hubs",
            IndicatorKind::Authorities => "authorities",
            IndicatorKind::Clustering => "clustering",
            IndicatorKind::WithinModule => "within_module",
            IndicatorKind::OutsideModule => "outside_module",
            IndicatorKind::Participation => "participation",
            IndicatorKind::EdgeWeight => "edge_weight",
            IndicatorKind::Random => "random",
        }
    }

    /// Indicators that produce one score per node.
    pub fn is_node_indicator(self) -> bool {
        !matches!(self, IndicatorKind::EdgeWeight | IndicatorKind::Random)
    }

    /// Whether the indicator depends on community detection (and hence the seed).
    pub fn uses_modules(self) -> bool {
        matches!(
            self,
            IndicatorKind::WithinModule | IndicatorKind::OutsideModule | IndicatorKind::Participation
        )
    }
}

impl fmt::Display for IndicatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IndicatorKind {
    type Err = CentralityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let alias = match key.as_str() {
            "page_rank" => "pagerank",
            "degree" => "out_degree",
            "strength" => "out_strength",
            "closeness" => "out_closeness",
            "weight" => "edge_weight",
            other => other,
        };
        IndicatorKind::ALL
            .into_iter()
            .find(|k| k.name() == alias)
            .ok_or_else(|| CentralityError::UnknownIndicator(s.to_string()))
    }
}

/// Scores every node (active or not) under a node indicator.
///
/// `seed` only matters for the module-based indicators.
pub fn node_scores(
    net: &TradeNetwork,
    kind: IndicatorKind,
    seed: u64,
) -> Result<Vec<f64>, CentralityError> {
    use IndicatorKind::*;
    Ok(match kind {
        OutDegree => degree(net, Direction::Out),
        InDegree => degree(net, Direction::In),
        OutStrength => strength(net, Direction::Out),
        InStrength => strength(net, Direction::In),
        OutCloseness => closeness(net, Direction::Out),
        InCloseness => closeness(net, Direction::In),
        Betweenness => betweenness(net),
        PageRank => pagerank(net).scores,
        Hubs => hits(net)?.hubs,
        Authorities => hits(net)?.authorities,
        Clustering => clustering(net),
        WithinModule | OutsideModule | Participation => {
            let modules = detect_communities(net, seed);
            let ind = module_indicators(net, &modules);
            match kind {
                WithinModule => ind.within_module,
                OutsideModule => ind.outside_module,
                _ => ind.participation,
            }
        }
        EdgeWeight | Random => return Err(CentralityError::NotANodeIndicator(kind)),
    })
}

/// Undirected binarized neighbour lists over active edges, sorted.
pub(crate) fn undirected_neighbors(net: &TradeNetwork) -> Vec<Vec<usize>> {
    let mut nb = vec![Vec::new(); net.node_count()];
    for (_, e) in net.active_edges() {
        nb[e.source.0].push(e.target.0);
        nb[e.target.0].push(e.source.0);
    }
    for list in &mut nb {
        list.sort_unstable();
        list.dedup();
    }
    nb
}
