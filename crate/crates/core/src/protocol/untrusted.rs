//! Untrusted sender/receiver variant with the per-run trit mechanism.
//!
//! Every voter holds a secret trit per run: 0 means do nothing (these runs
//! test the endpoints), 1 means apply the secret exponent only (these verify
//! the infrastructure), 2 means perform everything intended (these decide the
//! vote). Runs where the trits disagree are discarded after announcement.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mub::StateId;
use crate::protocol::{
    Announcement, Mode, RunPhase, RunRecord, Transcript, VetoProtocol, VoterAction, VoterPlan,
    VotingOutcome,
};
use crate::qudit::OutcomeDistribution;
use crate::rng::SeededRng;

/// What the sender physically prepares relative to what it announces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SenderBehavior {
    Honest,
    /// Prepare the state `shift` positions further along the announced basis.
    ShiftPrepared { shift: usize },
}

/// What the receiver announces relative to what it measured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ReceiverBehavior {
    Honest,
    /// Ignore the detector and announce a draw from this distribution.
    AnnounceFrom(OutcomeDistribution),
}

impl ReceiverBehavior {
    pub fn uniform_lie(dim: usize) -> Self {
        ReceiverBehavior::AnnounceFrom(OutcomeDistribution::uniform(dim))
    }
}

/// Endpoint behaviors for an untrusted execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointBehavior {
    pub sender: SenderBehavior,
    pub receiver: ReceiverBehavior,
}

impl EndpointBehavior {
    pub fn honest() -> Self {
        Self {
            sender: SenderBehavior::Honest,
            receiver: ReceiverBehavior::Honest,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Honest,
    Dishonest,
}

/// Summary of the trit-based checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HonestyReport {
    pub verdict: Verdict,
    /// Sifted all-zero runs examined and how many matched.
    pub zero_runs: usize,
    pub zero_matches: usize,
    /// Sifted all-one runs examined and how many matched.
    pub one_runs: usize,
    pub one_matches: usize,
    /// Sifted all-two runs available for the decision.
    pub two_runs: usize,
    pub infrastructure_ok: bool,
}

/// Resolution of an untrusted execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum UntrustedResult {
    Decided(VotingOutcome),
    /// An all-zero sifted run mismatched: the endpoints lied.
    AbortedDishonest,
    /// All-one sifted runs mismatched: the exponents do not cancel.
    InfrastructureRedo,
}

impl VetoProtocol {
    /// Execute `n_runs` untrusted-mode runs and evaluate the trit checks.
    ///
    /// Errors with [`Error::Inconclusive`] when the endpoints pass every
    /// check but no sifted all-two run exists to decide the vote.
    pub fn run_untrusted(
        &self,
        plans: &[VoterPlan],
        behavior: &EndpointBehavior,
        n_runs: usize,
        rng: &mut SeededRng,
    ) -> Result<(HonestyReport, UntrustedResult, Transcript)> {
        let config = self.config();
        if config.mode != Mode::Untrusted {
            return Err(Error::InvalidInput(
                "run_untrusted requires untrusted mode".into(),
            ));
        }
        if plans.len() != config.n_voters {
            return Err(Error::InvalidInput(format!(
                "expected {} voter plans, got {}",
                config.n_voters,
                plans.len()
            )));
        }
        for plan in plans {
            plan.validate(config, n_runs)?;
        }

        let mut transcript = Transcript::new(config.clone());
        for run_index in 0..n_runs {
            transcript.push(self.untrusted_run(plans, behavior, run_index, rng));
        }

        let report = self.evaluate_trit_checks(&transcript);
        if report.verdict == Verdict::Dishonest {
            return Ok((report, UntrustedResult::AbortedDishonest, transcript));
        }
        if !report.infrastructure_ok {
            return Ok((report, UntrustedResult::InfrastructureRedo, transcript));
        }
        let decided = transcript
            .runs
            .iter()
            .find(|r| r.sifted && r.phase == RunPhase::Voting)
            .map(|r| self.tally_vetoes(r.sent, r.measured, r.run_index))
            .transpose()?;
        match decided {
            Some(outcome) => Ok((report, UntrustedResult::Decided(outcome), transcript)),
            None => Err(Error::Inconclusive { runs: n_runs }),
        }
    }

    fn untrusted_run(
        &self,
        plans: &[VoterPlan],
        behavior: &EndpointBehavior,
        run_index: usize,
        rng: &mut SeededRng,
    ) -> RunRecord {
        let config = self.config();
        let dim = config.dim;

        let announced_basis = rng.index(self.basis_count());
        let announced_vector = rng.index(dim);
        let announced = StateId::new(announced_basis, announced_vector);
        let prepared = match &behavior.sender {
            SenderBehavior::Honest => announced,
            SenderBehavior::ShiftPrepared { shift } => {
                StateId::new(announced_basis, (announced_vector + shift) % dim)
            }
        };

        let trits: Vec<u8> = plans
            .iter()
            .map(|p| p.trits.as_ref().expect("validated")[run_index])
            .collect();
        let actions: Vec<VoterAction> = plans
            .iter()
            .zip(&trits)
            .map(|(plan, &trit)| match trit {
                0 => VoterAction::IDLE,
                1 => VoterAction {
                    u_power: plan.secret_exponent,
                    veto: false,
                },
                _ => VoterAction {
                    u_power: plan.secret_exponent,
                    veto: plan.veto,
                },
            })
            .collect();

        let state = self.apply_actions(self.family().state(prepared), &actions);
        let receiver_basis = rng.index(self.basis_count());
        let detected = self.measure(&state, receiver_basis, rng);
        let announced_outcome = match &behavior.receiver {
            ReceiverBehavior::Honest => detected,
            ReceiverBehavior::AnnounceFrom(dist) => dist.sample(rng),
        };
        let measured = StateId::new(receiver_basis, announced_outcome);

        let phase = match trits.iter().min().zip(trits.iter().max()) {
            Some((lo, hi)) if lo == hi => match lo {
                0 => RunPhase::HonestyTest,
                1 => RunPhase::Infrastructure,
                _ => RunPhase::Voting,
            },
            _ => RunPhase::Mixed,
        };

        RunRecord {
            run_index,
            phase,
            sent: announced,
            receiver_basis,
            measured,
            actions,
            announcements: vec![
                Announcement::SenderBasis(announced_basis),
                Announcement::SenderState(announced),
                Announcement::ReceiverBasis(receiver_basis),
                Announcement::ReceiverOutcome(measured),
                Announcement::Trits(trits.clone()),
            ],
            trits: Some(trits),
            sifted: announced_basis == receiver_basis,
        }
    }

    /// Evaluate the all-zero and all-one sifted runs.
    ///
    /// Mixed-trit runs never enter the counts, and unsifted runs were never
    /// comparable in the first place.
    fn evaluate_trit_checks(&self, transcript: &Transcript) -> HonestyReport {
        let mut report = HonestyReport {
            verdict: Verdict::Honest,
            zero_runs: 0,
            zero_matches: 0,
            one_runs: 0,
            one_matches: 0,
            two_runs: 0,
            infrastructure_ok: true,
        };
        for run in transcript.runs.iter().filter(|r| r.sifted) {
            match run.phase {
                RunPhase::HonestyTest => {
                    report.zero_runs += 1;
                    if run.matches() {
                        report.zero_matches += 1;
                    }
                }
                RunPhase::Infrastructure => {
                    report.one_runs += 1;
                    if run.matches() {
                        report.one_matches += 1;
                    }
                }
                RunPhase::Voting => report.two_runs += 1,
                RunPhase::Mixed => {}
            }
        }
        if report.zero_matches < report.zero_runs {
            report.verdict = Verdict::Dishonest;
        }
        if report.one_matches < report.one_runs {
            report.infrastructure_ok = false;
        }
        report
    }
}
