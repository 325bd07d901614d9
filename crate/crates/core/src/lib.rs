//! Shock-recovery resilience analysis for weighted directed trade networks.
//!
//! Yearly trade flows become a [`network::TradeNetwork`]; performance is the
//! normalized weighted efficiency from [`efficiency`]; [`centrality`] ranks
//! economies and trade relationships; [`simulation`] removes the top-ranked
//! elements batch by batch and restores them; [`resilience`] turns the
//! resulting efficiency trajectory into loss indices.

pub mod centrality;
pub mod cli;
pub mod efficiency;
pub mod ingest;
pub mod network;
pub mod paths;
pub mod resilience;
pub mod simulation;
pub mod synthetic;

pub use centrality::{IndicatorKind, InfluenceRanking};
pub use efficiency::{network_efficiency, normalized_efficiency, path_efficiency, EfficiencyResult};
pub use network::{EdgeId, Element, NodeId, TradeNetwork};
pub use resilience::{summarize, ResilienceReport};
pub use simulation::{
    rank_by_impact, run_random_control, run_shock_recovery, single_element_impact, ScenarioConfig,
    TargetKind, Trajectory,
};
