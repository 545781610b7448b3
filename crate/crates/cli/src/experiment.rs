//! Protocol and attack experiments driven by declarative specs.

use anyhow::{Context, Result};

use crate::invalid_input;
use serde::{Deserialize, Serialize};

use qudit_veto::adversary::{AttackReport, AttackSimulator, AttackSpec, VetoSampling};
use qudit_veto::physical::VisibilityModel;
use qudit_veto::protocol::{
    Disclosure, EndpointBehavior, HonestyReport, Mode, ProtocolConfig, ReceiverBehavior,
    RunPhase, SenderBehavior, Transcript, UntrustedResult, VetoProtocol, VoterPlan, VotingOutcome,
};
use qudit_veto::SeededRng;

use crate::spec::{ExperimentSpec, ProtocolSection};

/// Per-phase run totals of one transcript.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunCounts {
    pub infrastructure: usize,
    pub voting: usize,
    pub honesty_test: usize,
    pub mixed: usize,
    pub sifted: usize,
}

impl RunCounts {
    fn from_transcript(transcript: &Transcript) -> Self {
        let mut counts = RunCounts {
            infrastructure: 0,
            voting: 0,
            honesty_test: 0,
            mixed: 0,
            sifted: 0,
        };
        for run in &transcript.runs {
            match run.phase {
                RunPhase::Infrastructure => counts.infrastructure += 1,
                RunPhase::Voting => counts.voting += 1,
                RunPhase::HonestyTest => counts.honesty_test += 1,
                RunPhase::Mixed => counts.mixed += 1,
            }
            if run.sifted {
                counts.sifted += 1;
            }
        }
        counts
    }
}

/// Summary emitted after a protocol experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolReport {
    pub mode: Mode,
    pub dim: usize,
    pub n_voters: usize,
    pub seed: u64,
    pub outcome: Option<VotingOutcome>,
    pub honesty: Option<HonestyReport>,
    pub aborted: Option<String>,
    pub infra_attempts: usize,
    pub run_counts: RunCounts,
}

fn build_config(spec: &ExperimentSpec, section: &ProtocolSection) -> Result<ProtocolConfig> {
    let mut config = ProtocolConfig::new(spec.dim, spec.n_voters, section.mode)?;
    if section.disclose_count {
        config.disclosure = Disclosure::VetoCount;
    }
    if spec.visibility < 1.0 || spec.background > 0.0 {
        config = config.with_visibility(VisibilityModel::new(spec.visibility, spec.background)?);
    }
    Ok(config)
}

/// Run a trusted, untrusted, or qubit protocol experiment; returns the
/// summary report and the full transcript.
pub fn run_protocol_experiment(spec: &ExperimentSpec) -> Result<(ProtocolReport, Transcript)> {
    let section = spec
        .protocol
        .as_ref()
        .context("protocol experiment needs a protocol section")?;
    if section.votes.len() != spec.n_voters {
        return Err(invalid_input(format!(
            "expected {} votes, got {}",
            spec.n_voters,
            section.votes.len()
        )));
    }
    let config = build_config(spec, section)?;
    let protocol = VetoProtocol::new(config.clone())?;
    let mut rng = SeededRng::new(spec.master_seed);

    match section.mode {
        Mode::Trusted | Mode::QubitSimple => {
            let (outcome, transcript) = protocol.run_trusted(&section.votes, &mut rng)?;
            let report = ProtocolReport {
                mode: section.mode,
                dim: spec.dim,
                n_voters: spec.n_voters,
                seed: spec.master_seed,
                outcome: Some(outcome),
                honesty: None,
                aborted: None,
                infra_attempts: transcript.infra_attempts,
                run_counts: RunCounts::from_transcript(&transcript),
            };
            Ok((report, transcript))
        }
        Mode::Untrusted => {
            let n_runs = section.runs.unwrap_or(200);
            let plans = draw_untrusted_plans(&protocol, &section.votes, n_runs, &mut rng);
            let behavior = EndpointBehavior {
                sender: match section.sender_shift {
                    Some(shift) => SenderBehavior::ShiftPrepared { shift },
                    None => SenderBehavior::Honest,
                },
                receiver: if section.lying_receiver {
                    ReceiverBehavior::uniform_lie(spec.dim)
                } else {
                    ReceiverBehavior::Honest
                },
            };
            let (honesty, result, transcript) =
                protocol.run_untrusted(&plans, &behavior, n_runs, &mut rng)?;
            let (outcome, aborted) = match result {
                UntrustedResult::Decided(outcome) => (Some(outcome), None),
                UntrustedResult::AbortedDishonest => (None, Some("dishonest-endpoints".into())),
                UntrustedResult::InfrastructureRedo => (None, Some("infrastructure-redo".into())),
            };
            let report = ProtocolReport {
                mode: section.mode,
                dim: spec.dim,
                n_voters: spec.n_voters,
                seed: spec.master_seed,
                outcome,
                honesty: Some(honesty),
                aborted,
                infra_attempts: 0,
                run_counts: RunCounts::from_transcript(&transcript),
            };
            Ok((report, transcript))
        }
    }
}

/// Voter plans for untrusted mode: exponents drawn with a null total (the
/// voters pre-agreed through establishment), fresh uniform trits per run.
fn draw_untrusted_plans(
    protocol: &VetoProtocol,
    votes: &[bool],
    n_runs: usize,
    rng: &mut SeededRng,
) -> Vec<VoterPlan> {
    let modulus = protocol.config().exponent_modulus;
    let mut exponents: Vec<usize> = (0..votes.len() - 1).map(|_| rng.index(modulus)).collect();
    let sum: usize = exponents.iter().sum();
    exponents.push((modulus - sum % modulus) % modulus);
    votes
        .iter()
        .zip(exponents)
        .map(|(&veto, secret_exponent)| VoterPlan {
            secret_exponent,
            veto,
            trits: Some((0..n_runs).map(|_| rng.index(3) as u8).collect()),
        })
        .collect()
}

/// Run an attack experiment and return the adversary report.
pub fn run_attack_experiment(spec: &ExperimentSpec) -> Result<AttackReport> {
    let section = spec
        .attack
        .as_ref()
        .context("attack experiment needs an attack section")?;
    let mut config = ProtocolConfig::new(spec.dim, spec.n_voters, Mode::Trusted)?;
    if section.disable_single_veto_limit {
        config.single_veto_limit = false;
    }
    let simulator = AttackSimulator::new(config)?;
    let mut rng = SeededRng::new(spec.master_seed);
    let report = match &section.spec {
        attack @ AttackSpec::InterceptResend { .. } => {
            simulator.simulate_intercept_resend(attack, spec.trials, &mut rng)?
        }
        attack @ AttackSpec::VoterCancel { .. } => {
            let sampling = match &section.honest_vetoes {
                Some(flags) => VetoSampling::Fixed(flags.clone()),
                None => VetoSampling::UniformCount,
            };
            simulator.simulate_voter_cancellation(&sampling, attack, spec.trials, &mut rng)?
        }
        AttackSpec::SenderLie { shift } => {
            let behavior = EndpointBehavior {
                sender: SenderBehavior::ShiftPrepared { shift: *shift },
                receiver: ReceiverBehavior::Honest,
            };
            simulator.simulate_dishonest_endpoints(
                &behavior,
                section.zero_runs,
                spec.trials,
                &mut rng,
            )?
        }
        AttackSpec::ReceiverLie => {
            let behavior = EndpointBehavior {
                sender: SenderBehavior::Honest,
                receiver: ReceiverBehavior::uniform_lie(spec.dim),
            };
            simulator.simulate_dishonest_endpoints(
                &behavior,
                section.zero_runs,
                spec.trials,
                &mut rng,
            )?
        }
    };
    Ok(report)
}
