//! Protocol execution: infrastructure establishment, voting, and tallying.

use crate::error::{Error, Result};
use crate::mub::{build_mub_family, u_generator, v_generator, MubFamily, StateId};
use crate::physical::apply_visibility;
use crate::protocol::{
    Announcement, Disclosure, Mode, ProtocolConfig, RunPhase, RunRecord, Transcript, VoterAction,
    VotingOutcome,
};
use crate::qudit::{DiagonalUnitary, QuditState};
use crate::rng::SeededRng;

/// Verdict of one infrastructure verification attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfraDecision {
    Accepted { matched: usize, total: usize },
    Rejected { matched: usize, total: usize },
}

impl InfraDecision {
    pub fn accepted(&self) -> bool {
        matches!(self, InfraDecision::Accepted { .. })
    }
}

/// A configured protocol instance: the MUB family and both generators,
/// ready to execute runs.
pub struct VetoProtocol {
    config: ProtocolConfig,
    family: MubFamily,
    u: DiagonalUnitary,
    v: DiagonalUnitary,
}

impl VetoProtocol {
    pub fn new(config: ProtocolConfig) -> Result<Self> {
        config.validate()?;
        let family = build_mub_family(config.dim)?;
        let u = u_generator(config.dim)?;
        let v = v_generator(config.dim)?;
        Ok(Self { config, family, u, v })
    }

    pub fn config(&self) -> &ProtocolConfig {
        &self.config
    }

    pub fn family(&self) -> &MubFamily {
        &self.family
    }

    pub fn u(&self) -> &DiagonalUnitary {
        &self.u
    }

    pub fn v(&self) -> &DiagonalUnitary {
        &self.v
    }

    /// Bases the protocol draws from: the ones cycled by the U generator.
    pub fn basis_count(&self) -> usize {
        self.family.cycled_basis_count()
    }

    /// The transform for one voter action: `U^power`, then `V` if vetoing.
    pub fn action_unitary(&self, action: VoterAction) -> DiagonalUnitary {
        let mut t = self.u.pow(action.u_power);
        if action.veto {
            t = t.compose(&self.v).expect("equal dims by construction");
        }
        t
    }

    /// Pipe a prepared state through a list of voter actions.
    pub fn apply_actions(&self, prepared: &QuditState, actions: &[VoterAction]) -> QuditState {
        let mut state = prepared.clone();
        for action in actions {
            state = self
                .action_unitary(*action)
                .apply(&state)
                .expect("equal dims by construction");
        }
        state
    }

    /// Measure `state` in family basis `basis`, through the noise model if
    /// one is configured, and return the sampled outcome index.
    pub fn measure(&self, state: &QuditState, basis: usize, rng: &mut SeededRng) -> usize {
        let mut dist = self
            .family
            .basis(basis)
            .born_probabilities(state)
            .expect("equal dims by construction");
        if let Some(model) = &self.config.visibility {
            dist = apply_visibility(&dist, model);
        }
        dist.sample(rng)
    }

    /// Draw one uniform secret exponent per voter.
    pub fn draw_secret_exponents(&self, rng: &mut SeededRng) -> Vec<usize> {
        (0..self.config.n_voters)
            .map(|_| rng.index(self.config.exponent_modulus))
            .collect()
    }

    /// One infrastructure verification run: random state in, exponents
    /// applied, random-basis measurement out.
    pub fn infrastructure_round(
        &self,
        exponents: &[usize],
        run_index: usize,
        rng: &mut SeededRng,
    ) -> RunRecord {
        let sender_basis = rng.index(self.basis_count());
        let sender_vector = rng.index(self.config.dim);
        let sent = StateId::new(sender_basis, sender_vector);
        let actions: Vec<VoterAction> = exponents
            .iter()
            .map(|&x| VoterAction { u_power: x, veto: false })
            .collect();
        let state = self.apply_actions(self.family.state(sent), &actions);
        let receiver_basis = rng.index(self.basis_count());
        let outcome = self.measure(&state, receiver_basis, rng);
        let measured = StateId::new(receiver_basis, outcome);
        RunRecord {
            run_index,
            phase: RunPhase::Infrastructure,
            sent,
            receiver_basis,
            measured,
            actions,
            announcements: vec![
                Announcement::SenderBasis(sender_basis),
                Announcement::SenderState(sent),
                Announcement::ReceiverBasis(receiver_basis),
                Announcement::ReceiverOutcome(measured),
            ],
            trits: None,
            sifted: sender_basis == receiver_basis,
        }
    }

    /// Decide whether a set of sifted verification runs validates the
    /// exponent choice: at least `infra_runs` runs, match fraction at or
    /// above the threshold.
    pub fn accept_infrastructure(&self, sifted: &[&RunRecord]) -> Result<InfraDecision> {
        if let Some(bad) = sifted.iter().find(|r| !r.sifted) {
            return Err(Error::NotSifted {
                sent: bad.announced_sender_basis(),
                received: bad.receiver_basis,
            });
        }
        if sifted.len() < self.config.infra_runs {
            return Err(Error::InsufficientData {
                required: self.config.infra_runs,
                available: sifted.len(),
            });
        }
        let matched = sifted.iter().filter(|r| r.matches()).count();
        let total = sifted.len();
        let required = self.config.match_threshold * total as f64 - 1e-9;
        if matched as f64 >= required {
            Ok(InfraDecision::Accepted { matched, total })
        } else {
            Ok(InfraDecision::Rejected { matched, total })
        }
    }

    /// Loop draw-and-verify until an exponent choice is accepted.
    ///
    /// Returns the accepted exponents, the full run history across all
    /// attempts (run indices starting at 0), and the number of attempts.
    pub fn establish_infrastructure(
        &self,
        rng: &mut SeededRng,
    ) -> Result<(Vec<usize>, Vec<RunRecord>, usize)> {
        let mut history: Vec<RunRecord> = Vec::new();
        for attempt in 1..=self.config.max_attempts {
            let exponents = self.draw_secret_exponents(rng);
            let start = history.len();
            let mut sifted_count = 0;
            while sifted_count < self.config.infra_runs {
                let record = self.infrastructure_round(&exponents, history.len(), rng);
                if record.sifted {
                    sifted_count += 1;
                }
                history.push(record);
            }
            let sifted: Vec<&RunRecord> = history[start..].iter().filter(|r| r.sifted).collect();
            if self.accept_infrastructure(&sifted)?.accepted() {
                return Ok((exponents, history, attempt));
            }
        }
        Err(Error::MaxAttemptsExceeded {
            attempts: self.config.max_attempts,
        })
    }

    /// The voting stage: the two vector-0 states of bases 0 and 1 are sent
    /// in random order, the receiver measures both in one random basis, and
    /// exactly one of the two runs sifts.
    pub fn voting_round(
        &self,
        exponents: &[usize],
        vetoes: &[bool],
        start_index: usize,
        rng: &mut SeededRng,
    ) -> Result<(RunRecord, RunRecord)> {
        if exponents.len() != self.config.n_voters || vetoes.len() != self.config.n_voters {
            return Err(Error::InvalidInput(format!(
                "expected {} exponents and vetoes",
                self.config.n_voters
            )));
        }
        let actions: Vec<VoterAction> = exponents
            .iter()
            .zip(vetoes)
            .map(|(&x, &veto)| VoterAction { u_power: x, veto })
            .collect();
        let first = if rng.flip() { 0 } else { 1 };
        let receiver_basis = rng.index(2);
        let emit = |sender_basis: usize, run_index: usize, rng: &mut SeededRng| {
            let sent = StateId::new(sender_basis, 0);
            let state = self.apply_actions(self.family.state(sent), &actions);
            let outcome = self.measure(&state, receiver_basis, rng);
            let measured = StateId::new(receiver_basis, outcome);
            RunRecord {
                run_index,
                phase: RunPhase::Voting,
                sent,
                receiver_basis,
                measured,
                actions: actions.clone(),
                announcements: vec![
                    Announcement::SenderBasis(sender_basis),
                    Announcement::SenderState(sent),
                    Announcement::ReceiverBasis(receiver_basis),
                    Announcement::ReceiverOutcome(measured),
                ],
                trits: None,
                sifted: sender_basis == receiver_basis,
            }
        };
        let a = emit(first, start_index, rng);
        let b = emit(1 - first, start_index + 1, rng);
        debug_assert_eq!(a.sifted as usize + b.sifted as usize, 1);
        Ok((a, b))
    }

    /// Read the veto count off the matched run: the cyclic shift from sent to
    /// measured vector index, modulo the dimension.
    pub fn tally_vetoes(
        &self,
        sent: StateId,
        measured: StateId,
        matched_run: usize,
    ) -> Result<VotingOutcome> {
        if sent.basis != measured.basis {
            return Err(Error::NotSifted {
                sent: sent.basis,
                received: measured.basis,
            });
        }
        let d = self.config.dim;
        let shift = (measured.vector + d - sent.vector) % d;
        Ok(VotingOutcome {
            veto_present: shift != 0,
            veto_count: match self.config.disclosure {
                Disclosure::VetoCount => Some(shift),
                Disclosure::VetoBoolean => None,
            },
            matched_run,
        })
    }

    /// Full trusted execution: establish, vote, tally.
    pub fn run_trusted(
        &self,
        vetoes: &[bool],
        rng: &mut SeededRng,
    ) -> Result<(VotingOutcome, Transcript)> {
        if vetoes.len() != self.config.n_voters {
            return Err(Error::InvalidInput(format!(
                "expected {} veto flags, got {}",
                self.config.n_voters,
                vetoes.len()
            )));
        }
        let (exponents, history, attempts) = self.establish_infrastructure(rng)?;
        let mut transcript = Transcript::new(self.config.clone());
        transcript.infra_attempts = attempts;
        let next_index = history.len();
        for record in history {
            transcript.push(record);
        }
        let (a, b) = self.voting_round(&exponents, vetoes, next_index, rng)?;
        let matched = if a.sifted { a.clone() } else { b.clone() };
        transcript.push(a);
        transcript.push(b);
        let outcome = self.tally_vetoes(matched.sent, matched.measured, matched.run_index)?;
        Ok((outcome, transcript))
    }
}

/// Execute the trusted protocol for a veto pattern under the given config.
pub fn run_trusted_protocol(
    config: &ProtocolConfig,
    vetoes: &[bool],
    rng: &mut SeededRng,
) -> Result<(VotingOutcome, Transcript)> {
    if config.mode == Mode::Untrusted {
        return Err(Error::InvalidInput(
            "run_trusted_protocol requires trusted or qubit-simple mode".into(),
        ));
    }
    VetoProtocol::new(config.clone())?.run_trusted(vetoes, rng)
}

/// The collision-prone single-qubit scheme: reports only the parity of the
/// veto count, since the veto transform squares to the identity.
pub fn run_qubit_protocol(
    n_voters: usize,
    vetoes: &[bool],
    rng: &mut SeededRng,
) -> Result<VotingOutcome> {
    let config = ProtocolConfig::new(2, n_voters, Mode::QubitSimple)?;
    let (outcome, _) = VetoProtocol::new(config)?.run_trusted(vetoes, rng)?;
    Ok(outcome)
}
