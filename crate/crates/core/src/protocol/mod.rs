//! The flying-particle veto protocol: infrastructure establishment, voting,
//! and outcome, in trusted, untrusted, and collision-prone qubit variants.
//!
//! A single particle visits the voters in order; each applies a diagonal
//! transform. Nobody measures mid-flight, so one protocol instance is
//! strictly sequential. Transcripts are append-only records of every run.

mod runner;
mod transcript;
mod untrusted;

pub use runner::{run_qubit_protocol, run_trusted_protocol, InfraDecision, VetoProtocol};
pub use transcript::{sift, Announcement, RunPhase, RunRecord, Transcript};
pub use untrusted::{
    EndpointBehavior, HonestyReport, ReceiverBehavior, SenderBehavior, UntrustedResult, Verdict,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mub::{is_odd_prime, u_order};
use crate::physical::VisibilityModel;

/// Protocol execution variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Sender and receiver are trusted; infrastructure then a two-run vote.
    Trusted,
    /// Sender and receiver are verified through per-run secret trits.
    Untrusted,
    /// The collision-prone qubit scheme: parity of the veto count only.
    QubitSimple,
}

/// How much of the tally is revealed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Disclosure {
    /// Reveal only whether any veto was cast.
    VetoBoolean,
    /// Reveal the full shift, i.e. the veto count modulo the dimension.
    VetoCount,
}

/// Static parameters of one protocol instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub dim: usize,
    pub n_voters: usize,
    pub mode: Mode,
    /// Sifted verification runs required per infrastructure attempt.
    pub infra_runs: usize,
    pub disclosure: Disclosure,
    /// Order of the basis-cycling generator; secret exponents live mod this.
    pub exponent_modulus: usize,
    /// Fraction of sifted verification runs that must match to accept.
    pub match_threshold: f64,
    /// Cap on infrastructure establishment attempts before aborting.
    pub max_attempts: usize,
    /// Channel noise; `None` is the ideal channel.
    pub visibility: Option<VisibilityModel>,
    /// Voters may cast at most a single veto per run (anti-cancellation).
    pub single_veto_limit: bool,
}

impl ProtocolConfig {
    /// Defaults: ten verification runs, boolean disclosure, ideal channel,
    /// exact-match acceptance, a 1000-attempt cap, and the single-veto limit.
    pub fn new(dim: usize, n_voters: usize, mode: Mode) -> Result<Self> {
        let config = Self {
            dim,
            n_voters,
            mode,
            infra_runs: 10,
            disclosure: Disclosure::VetoBoolean,
            exponent_modulus: u_order(dim)?,
            match_threshold: 1.0,
            max_attempts: 1000,
            visibility: None,
            single_veto_limit: true,
        };
        config.validate()?;
        Ok(config)
    }

    /// Attach a noise model and relax the acceptance threshold accordingly.
    ///
    /// A matching sifted run passes with probability `q = v + (1-v)/d`; the
    /// threshold backs off three binomial standard errors from that.
    pub fn with_visibility(mut self, model: VisibilityModel) -> Self {
        let q = model.visibility + (1.0 - model.visibility) / self.dim as f64;
        let sigma = (q * (1.0 - q) / self.infra_runs as f64).sqrt();
        self.match_threshold = (q - 3.0 * sigma).clamp(0.0, 1.0);
        self.visibility = Some(model);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.exponent_modulus != u_order(self.dim)? {
            return Err(Error::InvalidInput(format!(
                "exponent modulus {} does not match the generator order for dimension {}",
                self.exponent_modulus, self.dim
            )));
        }
        if self.n_voters == 0 {
            return Err(Error::InvalidInput("at least one voter required".into()));
        }
        if self.infra_runs == 0 || self.max_attempts == 0 {
            return Err(Error::InvalidInput(
                "infra_runs and max_attempts must be positive".into(),
            ));
        }
        match self.mode {
            Mode::QubitSimple => {
                if self.dim != 2 {
                    return Err(Error::InvalidInput(
                        "qubit-simple mode requires dimension 2".into(),
                    ));
                }
                if self.n_voters <= 2 {
                    return Err(Error::InvalidInput(
                        "qubit-simple mode requires more than two voters".into(),
                    ));
                }
            }
            Mode::Trusted | Mode::Untrusted => {
                if self.dim != 4 && !is_odd_prime(self.dim) {
                    return Err(Error::UnsupportedDimension {
                        dim: self.dim,
                        supported: "4 or an odd prime <= 13",
                    });
                }
                // Collision freedom: the tally counts modulo dim, so the
                // number of voters must stay below it.
                if self.n_voters >= self.dim {
                    return Err(Error::InvalidInput(format!(
                        "{} voters need dimension > {}, got {}",
                        self.n_voters, self.n_voters, self.dim
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One voter's private choices for a protocol instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoterPlan {
    /// Secret exponent of the basis-cycling generator, in `[0, modulus)`.
    pub secret_exponent: usize,
    pub veto: bool,
    /// Per-run trits (untrusted mode only): 0 = idle, 1 = exponent only,
    /// 2 = all intended operations.
    pub trits: Option<Vec<u8>>,
}

impl VoterPlan {
    pub fn validate(&self, config: &ProtocolConfig, n_runs: usize) -> Result<()> {
        if self.secret_exponent >= config.exponent_modulus {
            return Err(Error::InvalidInput(format!(
                "secret exponent {} outside [0, {})",
                self.secret_exponent, config.exponent_modulus
            )));
        }
        match (&self.trits, config.mode) {
            (Some(trits), Mode::Untrusted) => {
                if trits.len() != n_runs {
                    return Err(Error::InvalidInput(format!(
                        "expected {} trits, got {}",
                        n_runs,
                        trits.len()
                    )));
                }
                if trits.iter().any(|&t| t > 2) {
                    return Err(Error::InvalidInput("trits must be 0, 1, or 2".into()));
                }
                Ok(())
            }
            (None, Mode::Untrusted) => Err(Error::InvalidInput(
                "untrusted mode requires per-run trits".into(),
            )),
            (Some(_), _) => Err(Error::InvalidInput(
                "trits are only meaningful in untrusted mode".into(),
            )),
            (None, _) => Ok(()),
        }
    }
}

/// The transform one voter applied in one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoterAction {
    pub u_power: usize,
    pub veto: bool,
}

impl VoterAction {
    pub const IDLE: VoterAction = VoterAction {
        u_power: 0,
        veto: false,
    };

    /// Broadcast label: "1", "U", "V", "UV", or "Ux"/"UxV" for higher powers.
    pub fn label(&self) -> String {
        match (self.u_power, self.veto) {
            (0, false) => "1".into(),
            (1, false) => "U".into(),
            (0, true) => "V".into(),
            (1, true) => "UV".into(),
            (_, false) => "Ux".into(),
            (_, true) => "UxV".into(),
        }
    }
}

/// The decision extracted from the matched voting run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VotingOutcome {
    pub veto_present: bool,
    /// The shift (veto count mod dim); withheld under boolean disclosure.
    pub veto_count: Option<usize>,
    /// Index of the transcript run the decision came from.
    pub matched_run: usize,
}
