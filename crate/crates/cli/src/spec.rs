//! Declarative experiment specifications, loadable from JSON config files.

use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// What an experiment runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    #[serde(rename = "table-1")]
    Table1,
    #[serde(rename = "table-2")]
    Table2,
    #[serde(rename = "table-3")]
    Table3,
    Protocol,
    Attack,
}

impl ExperimentKind {
    pub fn table_number(self) -> Option<u8> {
        match self {
            ExperimentKind::Table1 => Some(1),
            ExperimentKind::Table2 => Some(2),
            ExperimentKind::Table3 => Some(3),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    #[default]
    Json,
}

/// Protocol-experiment details carried by a spec of kind `protocol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolSection {
    pub mode: qudit_veto::protocol::Mode,
    pub votes: Vec<bool>,
    /// Untrusted mode: total runs to execute.
    #[serde(default)]
    pub runs: Option<usize>,
    #[serde(default)]
    pub disclose_count: bool,
    #[serde(default)]
    pub lying_receiver: bool,
    #[serde(default)]
    pub sender_shift: Option<usize>,
}

/// Attack-experiment details carried by a spec of kind `attack`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackSection {
    pub spec: qudit_veto::adversary::AttackSpec,
    /// Honest veto flags for cancellation attacks; absent means uniform counts.
    #[serde(default)]
    pub honest_vetoes: Option<Vec<bool>>,
    /// All-zero-trit check runs per trial for lying-endpoint attacks.
    #[serde(default = "default_zero_runs")]
    pub zero_runs: usize,
    #[serde(default)]
    pub disable_single_veto_limit: bool,
}

fn default_zero_runs() -> usize {
    1
}

/// A complete, reproducible experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default = "default_voters")]
    pub n_voters: usize,
    #[serde(default = "default_visibility")]
    pub visibility: f64,
    #[serde(default)]
    pub background: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub protocol: Option<ProtocolSection>,
    #[serde(default)]
    pub attack: Option<AttackSection>,
}

fn default_dim() -> usize {
    4
}

fn default_voters() -> usize {
    3
}

/// Calibrated against the mean voting-round peak; reproduces all published
/// peaks within +/-0.03.
fn default_visibility() -> f64 {
    0.94
}

fn default_trials() -> usize {
    100_000
}

impl ExperimentSpec {
    pub fn table(number: u8) -> Self {
        let kind = match number {
            1 => ExperimentKind::Table1,
            2 => ExperimentKind::Table2,
            _ => ExperimentKind::Table3,
        };
        Self {
            kind,
            dim: 4,
            n_voters: 3,
            visibility: default_visibility(),
            background: 0.0,
            trials: default_trials(),
            master_seed: 0,
            format: OutputFormat::default(),
            out: None,
            protocol: None,
            attack: None,
        }
    }

    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
