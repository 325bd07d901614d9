//! Declarative run manifests for `tradenet simulate`.
//!
//! ```toml
//! input = "oil_imports.csv"     # relative to the manifest file
//! output_dir = "runs/2020"
//! years = "1988-2022"           # or [2008, 2020], or "all"
//! master_seed = 42
//! flow = "import"
//! jobs = 8
//! json = true
//!
//! [[scenarios]]
//! target = "nodes"
//! indicator = "out_degree"
//!
//! [[scenarios]]
//! target = "nodes"
//! indicator = "random"
//! replicates = 20
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::centrality::IndicatorKind;
use crate::ingest::Flow;
use crate::simulation::{RecoveryOrder, ScenarioConfig, TargetKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum YearSelection {
    List(Vec<i32>),
    Spec(String),
}

impl Default for YearSelection {
    fn default() -> Self {
        YearSelection::Spec("all".into())
    }
}

impl FromStr for YearSelection {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let sel = YearSelection::Spec(s.to_string());
        sel.resolve(&[])?;
        Ok(sel)
    }
}

impl YearSelection {
    /// Expands the selection against the years present in the data.
    ///
    /// Accepts `all`, `1988-2022`, `1988..2022` (inclusive) and `2008,2020`.
    pub fn resolve(&self, available: &[i32]) -> Result<Vec<i32>, String> {
        let mut years = match self {
            YearSelection::List(v) => v.clone(),
            YearSelection::Spec(s) => {
                let s = s.trim();
                if s.eq_ignore_ascii_case("all") {
                    available.to_vec()
                } else if let Some((a, b)) = s.split_once("..").or_else(|| s.split_once('-')) {
                    let a: i32 = a.trim().parse().map_err(|_| format!("bad year range `{s}`"))?;
                    let b: i32 = b
                        .trim()
                        .trim_start_matches('=')
                        .parse()
                        .map_err(|_| format!("bad year range `{s}`"))?;
                    if a > b {
                        return Err(format!("empty year range `{s}`"));
                    }
                    (a..=b).collect()
                } else {
                    s.split(',')
                        .map(|y| y.trim().parse().map_err(|_| format!("bad year `{y}`")))
                        .collect::<Result<_, _>>()?
                }
            }
        };
        years.sort_unstable();
        years.dedup();
        Ok(years)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub target: TargetKind,
    pub indicator: IndicatorKind,
    pub batch_fraction: Option<f64>,
    pub shock_depth: Option<f64>,
    pub recovery_order: Option<RecoveryOrder>,
    pub replicates: Option<usize>,
    pub recompute_rankings: Option<bool>,
}

impl ScenarioSpec {
    pub fn new(target: TargetKind, indicator: IndicatorKind) -> Self {
        Self {
            target,
            indicator,
            batch_fraction: None,
            shock_depth: None,
            recovery_order: None,
            replicates: None,
            recompute_rankings: None,
        }
    }

    pub fn to_config(&self, master_seed: u64) -> ScenarioConfig {
        let d = ScenarioConfig::default();
        ScenarioConfig {
            target_kind: self.target,
            indicator: self.indicator,
            batch_fraction: self.batch_fraction.unwrap_or(d.batch_fraction),
            shock_depth: self.shock_depth.unwrap_or(d.shock_depth),
            recovery_order: self.recovery_order.unwrap_or(d.recovery_order),
            replicates: self.replicates.unwrap_or(d.replicates),
            master_seed,
            recompute_rankings: self.recompute_rankings.unwrap_or(d.recompute_rankings),
        }
    }
}

fn default_jobs() -> usize {
    0
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub input: PathBuf,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub years: YearSelection,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_flow")]
    pub flow: Flow,
    /// Worker threads; 0 uses all cores.
    #[serde(default = "default_jobs")]
    pub jobs: usize,
    /// Also write `summary.json`.
    #[serde(default = "default_true")]
    pub json: bool,
    pub scenarios: Vec<ScenarioSpec>,
}

fn default_flow() -> Flow {
    Flow::Import
}

impl RunManifest {
    /// Reads a TOML manifest; relative paths are taken relative to its directory.
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read manifest {}: {e}", path.display()))?;
        let mut m: RunManifest =
            toml::from_str(&text).map_err(|e| format!("invalid manifest {}: {e}", path.display()))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        if m.input.is_relative() {
            m.input = base.join(&m.input);
        }
        if m.output_dir.is_relative() {
            m.output_dir = base.join(&m.output_dir);
        }
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.scenarios.is_empty() {
            return Err("manifest lists no scenarios".into());
        }
        for (i, s) in self.scenarios.iter().enumerate() {
            s.to_config(self.master_seed)
                .validate()
                .map_err(|e| format!("scenario {i}: {e}"))?;
            if s.indicator == IndicatorKind::Random && s.replicates == Some(0) {
                return Err(format!("scenario {i}: replicates must be >= 1"));
            }
        }
        Ok(())
    }

    /// Scenario configs keyed by their position in the manifest.
    pub fn configs(&self) -> BTreeMap<usize, ScenarioConfig> {
        self.scenarios
            .iter()
            .enumerate()
            .map(|(i, s)| (i, s.to_config(self.master_seed)))
            .collect()
    }
}
