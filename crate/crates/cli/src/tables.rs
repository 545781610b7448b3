//! Detector-table reproduction: run each manifest row's pipeline under the
//! visibility model and report empirical detector frequencies.

use anyhow::{Context, Result};

use crate::invalid_input;
use serde::{Deserialize, Serialize};

use qudit_veto::mub::{build_mub_family, u_generator, v_generator, StateId};
use qudit_veto::physical::{apply_visibility, VisibilityModel};
use qudit_veto::qudit::DiagonalUnitary;
use qudit_veto::rng::derive_seed;
use qudit_veto::SeededRng;

use crate::report::round_sig;
use crate::spec::ExperimentSpec;

/// The manifest shipped with the binary; rows are data, not code.
pub const BUILTIN_MANIFEST: &str = include_str!("../data/table_rows.json");

/// One measurement configuration of the published tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowSpec {
    pub sender: String,
    pub actions: Vec<String>,
    pub basis: String,
    pub table: u8,
}

/// Mapping from outcome vector index to detector label, per basis.
///
/// Detectors D1..D4 watch the states with column indices 1, 3, 4, 2 of the
/// measured basis, identically for both bases.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorMap {
    per_basis: Vec<[usize; 4]>,
}

impl DetectorMap {
    pub fn standard() -> Self {
        // outcome index -> detector index (0-based): cols 1,2,3,4 feed
        // detectors D1, D4, D2, D3.
        Self {
            per_basis: vec![[0, 3, 1, 2]; 2],
        }
    }

    pub fn new(per_basis: Vec<[usize; 4]>) -> Result<Self> {
        for map in &per_basis {
            let mut seen = [false; 4];
            for &d in map {
                if d > 3 || seen[d] {
                    return Err(invalid_input("detector map must be a bijection on the four detectors"));
                }
                seen[d] = true;
            }
        }
        Ok(Self { per_basis })
    }

    pub fn detector_for(&self, basis: usize, outcome: usize) -> usize {
        self.per_basis[basis][outcome]
    }
}

/// A reproduced table row: per-detector frequencies and standard errors,
/// rounded to four significant digits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub sender: String,
    pub actions: Vec<String>,
    pub basis: String,
    pub detectors: [f64; 4],
    pub errors: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub table: u8,
    pub visibility: f64,
    pub trials: usize,
    pub seed: u64,
    pub rows: Vec<TableRow>,
}

pub fn parse_state_name(name: &str) -> Result<StateId> {
    let parts: Vec<&str> = name.split('_').collect();
    if parts.len() == 3 && parts[0] == "S" {
        let basis: usize = parts[1].parse().context("state basis index")?;
        let vector: usize = parts[2].parse().context("state vector index")?;
        if (1..=2).contains(&basis) && (1..=4).contains(&vector) {
            return Ok(StateId::new(basis - 1, vector - 1));
        }
    }
    Err(invalid_input(format!("unrecognized state name {name:?} (expected S_<basis>_<vector>)")))
}

pub fn parse_basis_name(name: &str) -> Result<usize> {
    match name {
        "B1" => Ok(0),
        "B2" => Ok(1),
        other => Err(invalid_input(format!("unrecognized basis name {other:?} (expected B1 or B2)"))),
    }
}

fn parse_action(label: &str, u: &DiagonalUnitary, v: &DiagonalUnitary) -> Result<DiagonalUnitary> {
    Ok(match label {
        "1" => DiagonalUnitary::identity(u.dim()),
        "U" => u.clone(),
        "V" => v.clone(),
        "UV" => u.compose(v)?,
        other => return Err(invalid_input(format!("unrecognized action label {other:?}"))),
    })
}

pub fn load_manifest(text: &str) -> Result<Vec<RowSpec>> {
    let rows: Vec<RowSpec> = serde_json::from_str(text).context("parsing row manifest")?;
    if rows.is_empty() {
        return Err(invalid_input("row manifest is empty"));
    }
    Ok(rows)
}

/// Reproduce one table under the spec's visibility, trial count, and seed.
///
/// Row seeds are derived from the master seed and the row's position in the
/// full manifest, so a row's counts do not depend on which table is run.
pub fn reproduce_table(spec: &ExperimentSpec, manifest: &[RowSpec]) -> Result<TableReport> {
    let table = spec
        .kind
        .table_number()
        .context("experiment kind is not a table")?;
    if spec.trials == 0 {
        return Err(invalid_input("trials must be at least 1"));
    }
    let family = build_mub_family(4)?;
    let u = u_generator(4)?;
    let v = v_generator(4)?;
    let model = VisibilityModel::new(spec.visibility, spec.background)?;
    let map = DetectorMap::standard();

    let mut rows = Vec::new();
    for (index, row) in manifest.iter().enumerate() {
        if row.table != table {
            continue;
        }
        let sent = parse_state_name(&row.sender)?;
        let receiver_basis = parse_basis_name(&row.basis)?;
        let mut state = family.state(sent).clone();
        for label in &row.actions {
            state = parse_action(label, &u, &v)?.apply(&state)?;
        }
        let ideal = family.basis(receiver_basis).born_probabilities(&state)?;
        let noisy = apply_visibility(&ideal, &model);

        let mut rng = SeededRng::new(derive_seed(spec.master_seed, index as u64));
        let mut counts = [0usize; 4];
        for _ in 0..spec.trials {
            counts[noisy.sample(&mut rng)] += 1;
        }

        let mut detectors = [0.0f64; 4];
        let mut errors = [0.0f64; 4];
        for (outcome, &count) in counts.iter().enumerate() {
            let freq = count as f64 / spec.trials as f64;
            let d = map.detector_for(receiver_basis, outcome);
            detectors[d] = round_sig(freq, 4);
            errors[d] = round_sig((freq * (1.0 - freq) / spec.trials as f64).sqrt(), 4);
        }
        rows.push(TableRow {
            sender: row.sender.clone(),
            actions: row.actions.clone(),
            basis: row.basis.clone(),
            detectors,
            errors,
        });
    }
    if rows.is_empty() {
        return Err(invalid_input(format!("manifest has no rows for table {table}")));
    }
    Ok(TableReport {
        table,
        visibility: spec.visibility,
        trials: spec.trials,
        seed: spec.master_seed,
        rows,
    })
}
