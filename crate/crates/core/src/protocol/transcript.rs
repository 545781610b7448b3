//! Run records and the append-only protocol transcript.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::mub::StateId;
use crate::protocol::{ProtocolConfig, VoterAction};

/// Which stage of the protocol a run belongs to.
///
/// In untrusted mode the label is assigned after the trits are announced;
/// runs whose trits disagree are labeled `Mixed` and carry no weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunPhase {
    Infrastructure,
    Voting,
    HonestyTest,
    Mixed,
}

impl RunPhase {
    fn as_str(&self) -> &'static str {
        match self {
            RunPhase::Infrastructure => "infrastructure",
            RunPhase::Voting => "voting",
            RunPhase::HonestyTest => "honesty-test",
            RunPhase::Mixed => "mixed",
        }
    }
}

/// One item of the reliable ordered classical broadcast.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Announcement {
    SenderBasis(usize),
    SenderState(StateId),
    ReceiverBasis(usize),
    ReceiverOutcome(StateId),
    Trits(Vec<u8>),
}

/// Everything publicly known about a single run, plus the applied actions.
///
/// `sent` and `measured` are the announced ids; with honest parties these
/// coincide with the physical preparation and detection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_index: usize,
    pub phase: RunPhase,
    pub sent: StateId,
    pub receiver_basis: usize,
    pub measured: StateId,
    pub actions: Vec<VoterAction>,
    pub announcements: Vec<Announcement>,
    pub trits: Option<Vec<u8>>,
    pub sifted: bool,
}

impl RunRecord {
    /// The sender's basis announcement for this run.
    pub fn announced_sender_basis(&self) -> usize {
        self.sent.basis
    }

    /// Announced measurement matches the announced preparation.
    pub fn matches(&self) -> bool {
        self.sifted && self.measured == self.sent
    }
}

/// Ordered record of a complete protocol execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub config: ProtocolConfig,
    pub runs: Vec<RunRecord>,
    /// Infrastructure attempts consumed before acceptance (trusted mode).
    pub infra_attempts: usize,
}

impl Transcript {
    pub fn new(config: ProtocolConfig) -> Self {
        Self {
            config,
            runs: Vec::new(),
            infra_attempts: 0,
        }
    }

    pub fn push(&mut self, record: RunRecord) {
        debug_assert!(self
            .runs
            .last()
            .is_none_or(|last| record.run_index > last.run_index));
        self.runs.push(record);
    }

    /// Serialize as JSON-lines, one object per run with a fixed field order:
    /// run_index, phase, sent, receiver_basis, measured, actions, trits, sifted.
    pub fn to_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        for run in &self.runs {
            let row = JsonlRow {
                run_index: run.run_index,
                phase: run.phase.as_str(),
                sent: IdFields {
                    basis: run.sent.basis,
                    vector: run.sent.vector,
                },
                receiver_basis: run.receiver_basis,
                measured: IdFields {
                    basis: run.measured.basis,
                    vector: run.measured.vector,
                },
                actions: run.actions.iter().map(VoterAction::label).collect(),
                trits: run.trits.clone(),
                sifted: run.sifted,
            };
            let line = serde_json::to_string(&row)
                .map_err(|e| crate::error::Error::InvalidValue(format!("serialization: {e}")))?;
            out.push_str(&line);
            out.push('\n');
        }
        Ok(out)
    }
}

#[derive(Serialize)]
struct IdFields {
    basis: usize,
    vector: usize,
}

#[derive(Serialize)]
struct JsonlRow {
    run_index: usize,
    phase: &'static str,
    sent: IdFields,
    receiver_basis: usize,
    measured: IdFields,
    actions: Vec<String>,
    trits: Option<Vec<u8>>,
    sifted: bool,
}

/// Runs whose announced sender basis equals the receiver's basis, in order.
pub fn sift(transcript: &Transcript) -> Vec<&RunRecord> {
    transcript
        .runs
        .iter()
        .filter(|r| r.announced_sender_basis() == r.receiver_basis)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::Mode;

    fn record(run_index: usize, sender_basis: usize, receiver_basis: usize) -> RunRecord {
        RunRecord {
            run_index,
            phase: RunPhase::Infrastructure,
            sent: StateId::new(sender_basis, 0),
            receiver_basis,
            measured: StateId::new(receiver_basis, 0),
            actions: vec![VoterAction::IDLE; 3],
            announcements: vec![
                Announcement::SenderBasis(sender_basis),
                Announcement::SenderState(StateId::new(sender_basis, 0)),
                Announcement::ReceiverBasis(receiver_basis),
                Announcement::ReceiverOutcome(StateId::new(receiver_basis, 0)),
            ],
            trits: None,
            sifted: sender_basis == receiver_basis,
        }
    }

    #[test]
    fn sift_retains_matching_bases_in_order() {
        let mut t = Transcript::new(ProtocolConfig::new(4, 3, Mode::Trusted).unwrap());
        t.push(record(0, 0, 1));
        t.push(record(1, 1, 1));
        t.push(record(2, 0, 0));
        let kept = sift(&t);
        assert_eq!(kept.iter().map(|r| r.run_index).collect::<Vec<_>>(), vec![1, 2]);

        let empty = Transcript::new(ProtocolConfig::new(4, 3, Mode::Trusted).unwrap());
        assert!(sift(&empty).is_empty());
    }

    #[test]
    fn jsonl_fields_are_ordered_and_complete() {
        let mut t = Transcript::new(ProtocolConfig::new(4, 3, Mode::Trusted).unwrap());
        t.push(record(0, 1, 1));
        let line = t.to_jsonl().unwrap();
        assert_eq!(
            line,
            "{\"run_index\":0,\"phase\":\"infrastructure\",\"sent\":{\"basis\":1,\"vector\":0},\
             \"receiver_basis\":1,\"measured\":{\"basis\":1,\"vector\":0},\
             \"actions\":[\"1\",\"1\",\"1\"],\"trits\":null,\"sifted\":true}\n"
        );
    }
}
