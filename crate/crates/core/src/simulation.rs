//! Shock-recovery scenarios and single-element impact scans.
//!
//! A scenario ranks the elements of a pristine network once, masks them in
//! batches of `ceil(batch_fraction * M)` until `ceil(shock_depth * M)` are
//! down, then restores them in batches of the same size. Normalized
//! efficiency is recorded after every batch against the baseline's frozen
//! mean edge weight, one step per batch.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::centrality::{
    rank_edges_by, rank_nodes, total_strength, CentralityError, IndicatorKind,
};
use crate::efficiency::{efficiency_sum, normalized_efficiency, EfficiencyError};
use crate::network::{Element, NetworkError, TradeNetwork};

#[derive(Debug, Error)]
pub enum SimulationError {
    #[error("invalid scenario: {0}")]
    InvalidConfig(String),
    #[error("network needs at least 2 nodes, has {0}")]
    TooFewNodes(usize),
    #[error("network has no edges; efficiency cannot be normalized")]
    NoEdges,
    #[error("shock depth {depth} of {available} elements leaves nothing to shock")]
    NothingToShock { depth: f64, available: usize },
    #[error("element {0:?} is not active")]
    InactiveElement(Element),
    #[error(transparent)]
    Centrality(#[from] CentralityError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Efficiency(#[from] EfficiencyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    Nodes,
    Edges,
}

impl TargetKind {
    pub fn name(self) -> &'static str {
        match self {
            TargetKind::Nodes => "nodes",
            TargetKind::Edges => "edges",
        }
    }
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TargetKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "nodes" | "node" | "economies" => Ok(TargetKind::Nodes),
            "edges" | "edge" | "relationships" => Ok(TargetKind::Edges),
            other => Err(format!("unknown target kind `{other}` (expected nodes|edges)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RecoveryOrder {
    /// First shocked, first restored.
    #[default]
    ShockOrder,
    ReverseShockOrder,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioConfig {
    #[serde(rename = "target")]
    pub target_kind: TargetKind,
    pub indicator: IndicatorKind,
    pub batch_fraction: f64,
    pub shock_depth: f64,
    pub recovery_order: RecoveryOrder,
    /// Random-control replicate count.
    pub replicates: usize,
    pub master_seed: u64,
    /// Re-rank the residual network before every shock batch.
    pub recompute_rankings: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            target_kind: TargetKind::Nodes,
            indicator: IndicatorKind::OutDegree,
            batch_fraction: 0.01,
            shock_depth: 0.5,
            recovery_order: RecoveryOrder::ShockOrder,
            replicates: 20,
            master_seed: 0,
            recompute_rankings: false,
        }
    }
}

impl ScenarioConfig {
    pub fn new(target_kind: TargetKind, indicator: IndicatorKind) -> Self {
        Self {
            target_kind,
            indicator,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), SimulationError> {
        let (b, d) = (self.batch_fraction, self.shock_depth);
        if !(b > 0.0 && b <= d && d <= 1.0) {
            return Err(SimulationError::InvalidConfig(format!(
                "need 0 < batch_fraction ({b}) <= shock_depth ({d}) <= 1"
            )));
        }
        if self.replicates == 0 {
            return Err(SimulationError::InvalidConfig("replicates must be >= 1".into()));
        }
        Ok(())
    }
}

/// `ceil(fraction * m)`, ignoring float noise just above an integer.
pub fn fraction_count(fraction: f64, m: usize) -> usize {
    let x = fraction * m as f64;
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.max(1.0) {
        r as usize
    } else {
        x.ceil() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Baseline,
    Shock,
    Recovery,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Baseline => "baseline",
            Phase::Shock => "shock",
            Phase::Recovery => "recovery",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Step {
    pub t: usize,
    pub ne: f64,
    pub phase: Phase,
    /// Elements masked (shock) or restored (recovery) at this step.
    pub batch: Vec<Element>,
}

/// Stage boundaries on the step axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Markers {
    pub t0: usize,
    /// Last undisturbed step; shocks start right after it.
    pub td: usize,
    /// Last shock step, the bottom of the trajectory.
    pub tr: usize,
    /// Step at which everything has been restored.
    pub trs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub steps: Vec<Step>,
    pub markers: Markers,
}

impl Trajectory {
    /// Builds a trajectory directly from NE samples: baseline `ne0`, then one
    /// step per shock value, then one per recovery value.
    pub fn from_series(ne0: f64, shock: &[f64], recovery: &[f64]) -> Self {
        let mut steps = vec![Step {
            t: 0,
            ne: ne0,
            phase: Phase::Baseline,
            batch: Vec::new(),
        }];
        for (phase, values) in [(Phase::Shock, shock), (Phase::Recovery, recovery)] {
            for &ne in values {
                steps.push(Step {
                    t: steps.len(),
                    ne,
                    phase,
                    batch: Vec::new(),
                });
            }
        }
        let tr = shock.len();
        Trajectory {
            steps,
            markers: Markers {
                t0: 0,
                td: 0,
                tr,
                trs: tr + recovery.len(),
            },
        }
    }

    pub fn ne0(&self) -> f64 {
        self.steps[self.markers.t0].ne
    }

    pub fn ne(&self) -> impl Iterator<Item = f64> + '_ {
        self.steps.iter().map(|s| s.ne)
    }

    pub fn shock_steps(&self) -> usize {
        self.markers.tr - self.markers.td
    }

    pub fn recovery_steps(&self) -> usize {
        self.markers.trs - self.markers.tr
    }

    pub fn final_ne(&self) -> f64 {
        self.steps[self.markers.trs].ne
    }
}

fn active_elements(net: &TradeNetwork, kind: TargetKind) -> Vec<Element> {
    match kind {
        TargetKind::Nodes => net
            .nodes()
            .filter(|&n| net.is_node_active(n))
            .map(Element::Node)
            .collect(),
        TargetKind::Edges => net.active_edges().map(|(e, _)| Element::Edge(e)).collect(),
    }
}

fn ranking(
    net: &TradeNetwork,
    kind: TargetKind,
    indicator: IndicatorKind,
    seed: u64,
) -> Result<Vec<Element>, SimulationError> {
    let r = match kind {
        TargetKind::Nodes => rank_nodes(net, indicator, seed)?,
        TargetKind::Edges => rank_edges_by(net, indicator, seed)?,
    };
    Ok(r.items)
}

/// Normalized efficiency against a frozen reference weight.
fn ne(net: &TradeNetwork, reference: f64) -> Result<f64, SimulationError> {
    Ok(normalized_efficiency(net, reference)?.normalized_efficiency)
}

/// Runs one shock-recovery scenario on a pristine copy of `net`.
pub fn run_shock_recovery(
    net: &TradeNetwork,
    config: &ScenarioConfig,
) -> Result<Trajectory, SimulationError> {
    config.validate()?;
    let n = net.node_count();
    if n < 2 {
        return Err(SimulationError::TooFewNodes(n));
    }
    let mut work = net.pristine();
    let reference = work.baseline_mean_weight();
    if reference <= 0.0 {
        return Err(SimulationError::NoEdges);
    }
    let kind = config.target_kind;
    let m = active_elements(&work, kind).len();
    let total = fraction_count(config.shock_depth, m);
    if total == 0 {
        return Err(SimulationError::NothingToShock {
            depth: config.shock_depth,
            available: m,
        });
    }
    let batch = fraction_count(config.batch_fraction, m).max(1);
    let seed = config.master_seed;
    let static_order = if config.recompute_rankings && config.indicator != IndicatorKind::Random {
        None
    } else {
        Some(ranking(&work, kind, config.indicator, seed)?)
    };

    let mut steps = vec![Step {
        t: 0,
        ne: ne(&work, reference)?,
        phase: Phase::Baseline,
        batch: Vec::new(),
    }];
    let mut shocked: Vec<Element> = Vec::with_capacity(total);
    while shocked.len() < total {
        let take = batch.min(total - shocked.len());
        let next: Vec<Element> = match &static_order {
            Some(order) => order[shocked.len()..shocked.len() + take].to_vec(),
            None => ranking(&work, kind, config.indicator, seed)?
                .into_iter()
                .take(take)
                .collect(),
        };
        work.shock(&next)?;
        shocked.extend_from_slice(&next);
        steps.push(Step {
            t: steps.len(),
            ne: ne(&work, reference)?,
            phase: Phase::Shock,
            batch: next,
        });
    }
    let tr = steps.len() - 1;

    let restore_seq: Vec<Element> = match config.recovery_order {
        RecoveryOrder::ShockOrder => shocked,
        RecoveryOrder::ReverseShockOrder => shocked.into_iter().rev().collect(),
    };
    for chunk in restore_seq.chunks(batch) {
        work.restore(chunk)?;
        steps.push(Step {
            t: steps.len(),
            ne: ne(&work, reference)?,
            phase: Phase::Recovery,
            batch: chunk.to_vec(),
        });
    }
    debug_assert!(work.is_pristine());
    let trs = steps.len() - 1;
    Ok(Trajectory {
        steps,
        markers: Markers {
            t0: 0,
            td: 0,
            tr,
            trs,
        },
    })
}

/// Seed of random-control replicate `r` (splitmix64 of the pair).
pub fn replicate_seed(master_seed: u64, r: usize) -> u64 {
    let mut z = master_seed ^ (r as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomControl {
    /// Per-step mean NE; batches are left empty since they differ per replicate.
    pub mean: Trajectory,
    /// Per-step sample standard deviation of NE.
    pub std: Vec<f64>,
    pub replicates: Vec<Trajectory>,
}

/// Random-order control group: `config.replicates` seeded random scenarios.
pub fn run_random_control(
    net: &TradeNetwork,
    config: &ScenarioConfig,
) -> Result<RandomControl, SimulationError> {
    if config.replicates < 2 {
        return Err(SimulationError::InvalidConfig(
            "random control needs at least 2 replicates".into(),
        ));
    }
    let runs: Vec<Trajectory> = (0..config.replicates)
        .into_par_iter()
        .map(|r| {
            let cfg = ScenarioConfig {
                indicator: IndicatorKind::Random,
                master_seed: replicate_seed(config.master_seed, r),
                ..config.clone()
            };
            run_shock_recovery(net, &cfg)
        })
        .collect::<Result<_, _>>()?;

    let reps = runs.len() as f64;
    let first = &runs[0];
    let mut mean_steps = Vec::with_capacity(first.steps.len());
    let mut std = Vec::with_capacity(first.steps.len());
    for (i, step) in first.steps.iter().enumerate() {
        let first_ne = step.ne;
        let (mean, var) = if runs.iter().all(|r| r.steps[i].ne == first_ne) {
            // shared endpoints: keep them exact
            (first_ne, 0.0)
        } else {
            let mean = runs.iter().map(|r| r.steps[i].ne).sum::<f64>() / reps;
            let var =
                runs.iter().map(|r| (r.steps[i].ne - mean).powi(2)).sum::<f64>() / (reps - 1.0);
            (mean, var)
        };
        mean_steps.push(Step {
            t: step.t,
            ne: mean,
            phase: step.phase,
            batch: Vec::new(),
        });
        std.push(var.sqrt());
    }
    Ok(RandomControl {
        mean: Trajectory {
            steps: mean_steps,
            markers: first.markers,
        },
        std,
        replicates: runs,
    })
}

/// Drop in normalized efficiency when only `element` is masked.
///
/// Normalization uses the baseline mean edge weight; `net` is left untouched.
pub fn single_element_impact(net: &TradeNetwork, element: Element) -> Result<f64, SimulationError> {
    if !net.is_active(element) {
        return Err(SimulationError::InactiveElement(element));
    }
    let before = efficiency_sum(net);
    impact_against(net, element, before)
}

fn impact_against(net: &TradeNetwork, element: Element, before: f64) -> Result<f64, SimulationError> {
    let reference = net.baseline_mean_weight();
    let n = net.node_count();
    if reference <= 0.0 || n < 2 {
        return Ok(0.0);
    }
    let mut work = net.clone();
    work.shock(&[element])?;
    let after = efficiency_sum(&work);
    let pairs = (n * (n - 1)) as f64;
    Ok((before / pairs) / reference - (after / pairs) / reference)
}

/// Exact impact scan over every active element, largest drop first.
///
/// Ties follow the ranking tie-break: total strength (nodes) or weight
/// (edges) descending, then codes.
pub fn rank_by_impact(
    net: &TradeNetwork,
    kind: TargetKind,
    top_k: usize,
) -> Result<Vec<(Element, f64)>, SimulationError> {
    if top_k == 0 {
        return Err(SimulationError::InvalidConfig("top_k must be >= 1".into()));
    }
    let elements = active_elements(net, kind);
    let before = efficiency_sum(net);
    let impacts: Vec<f64> = elements
        .par_iter()
        .map(|&el| impact_against(net, el, before))
        .collect::<Result<_, _>>()?;
    let strength = total_strength(net);
    let mut scored: Vec<(Element, f64)> = elements.into_iter().zip(impacts).collect();
    scored.sort_by(|(a, ia), (b, ib)| {
        ib.total_cmp(ia).then_with(|| match (a, b) {
            (Element::Node(x), Element::Node(y)) => strength[y.0]
                .total_cmp(&strength[x.0])
                .then_with(|| net.code(*x).cmp(net.code(*y))),
            (Element::Edge(x), Element::Edge(y)) => {
                let (ex, ey) = (net.edge(*x), net.edge(*y));
                ey.weight
                    .total_cmp(&ex.weight)
                    .then_with(|| net.code(ex.source).cmp(net.code(ey.source)))
                    .then_with(|| net.code(ex.target).cmp(net.code(ey.target)))
            }
            _ => a.cmp(b),
        })
    });
    scored.truncate(top_k);
    Ok(scored)
}
