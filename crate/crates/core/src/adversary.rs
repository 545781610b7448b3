//! Attack injection and quantification: intercept-resend eavesdropping,
//! veto-cancelling voters, and lying endpoints.
//!
//! Every simulation is a seeded Monte Carlo over independent protocol runs
//! and reports detection and success rates with binomial standard errors.
//! Information leakage is the plug-in mutual information between the
//! adversary's observables and the targeted secret, with a bootstrap error
//! bar.

use rand::distributions::Distribution;
use rand_distr::Binomial;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mub::StateId;
use crate::protocol::{ProtocolConfig, VetoProtocol, VoterAction};
use crate::rng::SeededRng;

/// Bootstrap resamples used for leakage error bars.
pub const BOOTSTRAP_RESAMPLES: usize = 200;

/// How the eavesdropper picks her measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisStrategy {
    /// Always measure this family basis.
    Fixed(usize),
    /// Fresh uniform guess per run.
    UniformRandom,
    /// Genie aid: always guess the true basis. Calibration only; a real
    /// eavesdropper has no access to it.
    TrueBasis,
}

/// How the cancelling voter chooses the power to counteract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CancelPower {
    /// Guess that exactly this many honest vetoes will be cast.
    Fixed(usize),
    /// Fresh uniform guess per run.
    UniformRandom,
}

/// One attack to inject into protocol runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AttackSpec {
    /// Measure the flying state at link `position` (0 = before the first
    /// voter, N = after the last) and resend the collapsed state.
    InterceptResend {
        position: usize,
        basis_strategy: BasisStrategy,
    },
    /// Voter `dishonest_party` applies `V^{-t_guess}` instead of following
    /// the single-veto rule.
    VoterCancel {
        dishonest_party: usize,
        cancel_power: CancelPower,
    },
    /// Sender announces one state but prepares another, shifted within the
    /// announced basis.
    SenderLie { shift: usize },
    /// Receiver announces outcomes drawn uniformly instead of its detections.
    ReceiverLie,
}

/// How the honest voters' vetoes are chosen across cancellation trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VetoSampling {
    /// One flag per honest voter, fixed across trials.
    Fixed(Vec<bool>),
    /// Per trial, a total honest veto count uniform on `[0, dim)`, applied
    /// as the honest voters' aggregate shift (diagonal transforms commute,
    /// so the split across voters is immaterial).
    UniformCount,
}

/// Aggregated result of an attack simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackReport {
    pub spec: AttackSpec,
    pub master_seed: u64,
    pub trials: usize,
    pub detection_probability: f64,
    pub detection_std_error: f64,
    pub attack_success_probability: f64,
    pub attack_success_std_error: f64,
    pub leakage_bits: Option<f64>,
    pub leakage_std_error: Option<f64>,
}

/// Plug-in leakage estimate in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeakageEstimate {
    pub bits: f64,
    pub std_error: f64,
}

fn binomial_std_error(p: f64, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        (p * (1.0 - p) / n as f64).sqrt()
    }
}

/// Joint histogram of a discrete observable against a discrete secret.
#[derive(Debug, Clone)]
pub struct JointCounts {
    nx: usize,
    ny: usize,
    counts: Vec<usize>,
    total: usize,
}

impl JointCounts {
    pub fn new(nx: usize, ny: usize) -> Self {
        Self {
            nx,
            ny,
            counts: vec![0; nx * ny],
            total: 0,
        }
    }

    pub fn record(&mut self, x: usize, y: usize) {
        debug_assert!(x < self.nx && y < self.ny);
        self.counts[x * self.ny + y] += 1;
        self.total += 1;
    }

    pub fn total(&self) -> usize {
        self.total
    }

    /// Plug-in mutual information of the empirical joint, in bits.
    pub fn mutual_information_bits(&self) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let n = self.total as f64;
        let mut px = vec![0.0; self.nx];
        let mut py = vec![0.0; self.ny];
        for (cell, &c) in self.counts.iter().enumerate() {
            px[cell / self.ny] += c as f64 / n;
            py[cell % self.ny] += c as f64 / n;
        }
        let mut mi = 0.0;
        for (cell, &c) in self.counts.iter().enumerate() {
            let pxy = c as f64 / n;
            if pxy > 0.0 {
                mi += pxy * (pxy / (px[cell / self.ny] * py[cell % self.ny])).log2();
            }
        }
        mi.max(0.0)
    }

    /// Bootstrap standard error of the plug-in estimate, via multinomial
    /// resampling of the cell counts.
    pub fn bootstrap_std_error(&self, resamples: usize, rng: &mut SeededRng) -> f64 {
        if self.total == 0 || resamples < 2 {
            return 0.0;
        }
        let mut estimates = Vec::with_capacity(resamples);
        for _ in 0..resamples {
            let mut resampled = Self::new(self.nx, self.ny);
            let mut remaining = self.total;
            let mut mass_left = self.total;
            for (cell, &c) in self.counts.iter().enumerate() {
                if remaining == 0 {
                    break;
                }
                if mass_left == c {
                    resampled.counts[cell] = remaining;
                    resampled.total += remaining;
                    break;
                }
                let p = c as f64 / mass_left as f64;
                let draw = if p <= 0.0 {
                    0
                } else {
                    Binomial::new(remaining as u64, p.min(1.0))
                        .expect("valid binomial")
                        .sample(rng) as usize
                };
                resampled.counts[cell] = draw;
                resampled.total += draw;
                remaining -= draw;
                mass_left -= c;
            }
            estimates.push(resampled.mutual_information_bits());
        }
        let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
        let var = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>()
            / (estimates.len() - 1) as f64;
        var.sqrt()
    }
}

/// One intercept-resend trial on a sifted voting run.
struct InterceptTrial {
    /// Basis the flying state occupied at the interception point.
    true_basis: usize,
    guess: usize,
    eve_outcome: usize,
    /// Receiver saw the outcome an unattacked run would have produced.
    passed: bool,
    target_veto: bool,
}

/// Simulation wrapper around a protocol instance.
pub struct AttackSimulator {
    protocol: VetoProtocol,
}

impl AttackSimulator {
    pub fn new(config: ProtocolConfig) -> Result<Self> {
        Ok(Self {
            protocol: VetoProtocol::new(config)?,
        })
    }

    fn config(&self) -> &ProtocolConfig {
        self.protocol.config()
    }

    /// Exponents distributed as the accepted infrastructure leaves them:
    /// first N-1 uniform, the last fixed by the null-sum constraint.
    fn constrained_exponents(&self, rng: &mut SeededRng) -> Vec<usize> {
        let n = self.config().n_voters;
        let modulus = self.config().exponent_modulus;
        let mut exponents: Vec<usize> = (0..n - 1).map(|_| rng.index(modulus)).collect();
        let sum: usize = exponents.iter().sum();
        exponents.push((modulus - sum % modulus) % modulus);
        exponents
    }

    fn intercept_trial(
        &self,
        position: usize,
        strategy: BasisStrategy,
        target_voter: usize,
        rng: &mut SeededRng,
    ) -> InterceptTrial {
        let p = &self.protocol;
        let dim = self.config().dim;
        let n = self.config().n_voters;
        let exponents = self.constrained_exponents(rng);
        let vetoes: Vec<bool> = (0..n).map(|_| rng.flip()).collect();
        let actions: Vec<VoterAction> = exponents
            .iter()
            .zip(&vetoes)
            .map(|(&x, &veto)| VoterAction { u_power: x, veto })
            .collect();

        // Sifted voting run: receiver will measure the sender's basis.
        let sender_basis = rng.index(2);
        let sent = StateId::new(sender_basis, 0);

        let mut state = p.apply_actions(p.family().state(sent), &actions[..position]);
        let true_basis = p
            .family()
            .identify(&state, 1e-6)
            .expect("dims match")
            .expect("flying state is always a family member")
            .basis;
        let guess = match strategy {
            BasisStrategy::Fixed(b) => b,
            BasisStrategy::UniformRandom => rng.index(p.basis_count()),
            BasisStrategy::TrueBasis => true_basis,
        };
        let eve_outcome = p.measure(&state, guess, rng);
        state = p.family().state(StateId::new(guess, eve_outcome)).clone();
        state = p.apply_actions(&state, &actions[position..]);

        let receiver_outcome = p.measure(&state, sender_basis, rng);
        let expected = vetoes.iter().filter(|&&v| v).count() % dim;
        InterceptTrial {
            true_basis,
            guess,
            eve_outcome,
            passed: receiver_outcome == expected,
            target_veto: vetoes[target_voter],
        }
    }

    fn intercept_trials(
        &self,
        position: usize,
        strategy: BasisStrategy,
        trials: usize,
        rng: &mut SeededRng,
    ) -> Result<(Vec<InterceptTrial>, usize)> {
        let n = self.config().n_voters;
        if position > n {
            return Err(Error::InvalidInput(format!(
                "intercept position {position} outside link range 0..={n}"
            )));
        }
        if let BasisStrategy::Fixed(b) = strategy {
            if b >= self.protocol.basis_count() {
                return Err(Error::InvalidInput(format!(
                    "fixed basis {b} outside family range"
                )));
            }
        }
        // The voter just passed; before the first voter the next one is the
        // causally independent reference.
        let target_voter = position.saturating_sub(1);
        let records = (0..trials)
            .map(|_| self.intercept_trial(position, strategy, target_voter, rng))
            .collect();
        Ok((records, target_voter))
    }

    fn leakage_counts(&self, records: &[InterceptTrial]) -> JointCounts {
        let dim = self.config().dim;
        // Observable: (was the basis guess correct, Eve's outcome index).
        let mut joint = JointCounts::new(2 * dim, 2);
        for r in records {
            let correct = (r.guess == r.true_basis) as usize;
            joint.record(correct * dim + r.eve_outcome, r.target_veto as usize);
        }
        joint
    }

    /// Intercept-resend against sifted voting runs: detection rate (failed
    /// end-to-end correlation), evasion rate, and leakage about the veto of
    /// the voter just crossed.
    pub fn simulate_intercept_resend(
        &self,
        spec: &AttackSpec,
        trials: usize,
        rng: &mut SeededRng,
    ) -> Result<AttackReport> {
        let AttackSpec::InterceptResend { position, basis_strategy } = spec else {
            return Err(Error::InvalidInput("expected an intercept-resend spec".into()));
        };
        let master_seed = rng.seed();
        let (records, _) = self.intercept_trials(*position, *basis_strategy, trials, rng)?;
        let passed = records.iter().filter(|r| r.passed).count();
        let pass_rate = passed as f64 / trials.max(1) as f64;
        let detection = 1.0 - pass_rate;
        let joint = self.leakage_counts(&records);
        let leakage = joint.mutual_information_bits();
        let leakage_se = joint.bootstrap_std_error(BOOTSTRAP_RESAMPLES, rng);
        Ok(AttackReport {
            spec: spec.clone(),
            master_seed,
            trials,
            detection_probability: detection,
            detection_std_error: binomial_std_error(detection, trials),
            attack_success_probability: pass_rate,
            attack_success_std_error: binomial_std_error(pass_rate, trials),
            leakage_bits: Some(leakage),
            leakage_std_error: Some(leakage_se),
        })
    }

    /// Leakage about the targeted voter's veto bit, from the adversary's
    /// (basis-guess correctness, outcome) pair. Requires at least 1000 trials.
    pub fn estimate_vote_leakage(
        &self,
        spec: &AttackSpec,
        trials: usize,
        rng: &mut SeededRng,
    ) -> Result<LeakageEstimate> {
        let AttackSpec::InterceptResend { position, basis_strategy } = spec else {
            return Err(Error::InvalidInput("expected an intercept-resend spec".into()));
        };
        if trials < 1000 {
            return Err(Error::InvalidInput(format!(
                "leakage estimation needs at least 1000 trials, got {trials}"
            )));
        }
        let (records, _) = self.intercept_trials(*position, *basis_strategy, trials, rng)?;
        let joint = self.leakage_counts(&records);
        Ok(LeakageEstimate {
            bits: joint.mutual_information_bits(),
            std_error: joint.bootstrap_std_error(BOOTSTRAP_RESAMPLES, rng),
        })
    }

    /// A dishonest voter applying `V^{-t_guess}`: success is a zero tally in
    /// runs that carried at least one honest veto.
    pub fn simulate_voter_cancellation(
        &self,
        honest_vetoes: &VetoSampling,
        spec: &AttackSpec,
        trials: usize,
        rng: &mut SeededRng,
    ) -> Result<AttackReport> {
        let AttackSpec::VoterCancel { dishonest_party, cancel_power } = spec else {
            return Err(Error::InvalidInput("expected a voter-cancel spec".into()));
        };
        let config = self.config();
        let dim = config.dim;
        let n = config.n_voters;
        if *dishonest_party >= n {
            return Err(Error::InvalidInput(format!(
                "dishonest party {dishonest_party} outside voter range"
            )));
        }
        if config.single_veto_limit {
            // Powers above one are physically unavailable under the
            // hardware limitation; a guess of zero or one slips through.
            let blocked = match cancel_power {
                CancelPower::Fixed(t) => (dim - t % dim) % dim > 1,
                CancelPower::UniformRandom => dim > 2,
            };
            if blocked {
                return Err(Error::InvalidInput(
                    "single-veto hardware limit forbids cancel powers above one".into(),
                ));
            }
        }
        if let VetoSampling::Fixed(flags) = honest_vetoes {
            if flags.len() != n - 1 {
                return Err(Error::InvalidInput(format!(
                    "expected {} honest veto flags, got {}",
                    n - 1,
                    flags.len()
                )));
            }
        }

        let master_seed = rng.seed();
        let p = &self.protocol;
        let mut qualifying = 0usize;
        let mut successes = 0usize;
        for _ in 0..trials {
            let true_count = match honest_vetoes {
                VetoSampling::Fixed(flags) => flags.iter().filter(|&&v| v).count(),
                VetoSampling::UniformCount => rng.index(dim),
            };
            let t_guess = match cancel_power {
                CancelPower::Fixed(t) => *t % dim,
                CancelPower::UniformRandom => rng.index(dim),
            };
            let cancel = (dim - t_guess) % dim;

            let exponents = self.constrained_exponents(rng);
            let sender_basis = rng.index(2);
            let sent = StateId::new(sender_basis, 0);
            let mut state = p.family().state(sent).clone();
            // Everyone's exponents, the honest voters' total veto shift, and
            // the dishonest cancellation power; all transforms commute.
            for &x in &exponents {
                state = p.u().pow(x).apply(&state)?;
            }
            state = p.v().pow(true_count).apply(&state)?;
            state = p.v().pow(cancel).apply(&state)?;

            let outcome = p.measure(&state, sender_basis, rng);
            if true_count >= 1 {
                qualifying += 1;
                if outcome == 0 {
                    successes += 1;
                }
            }
        }
        let success = if qualifying == 0 {
            0.0
        } else {
            successes as f64 / qualifying as f64
        };
        Ok(AttackReport {
            spec: spec.clone(),
            master_seed,
            trials,
            // Cancellation leaves the correlation checks untouched.
            detection_probability: 0.0,
            detection_std_error: 0.0,
            attack_success_probability: success,
            attack_success_std_error: binomial_std_error(success, qualifying),
            leakage_bits: None,
            leakage_std_error: None,
        })
    }

    /// Lying sender or receiver against `zero_runs` sifted all-zero-trit
    /// checks per execution.
    pub fn simulate_dishonest_endpoints(
        &self,
        behavior: &crate::protocol::EndpointBehavior,
        zero_runs: usize,
        trials: usize,
        rng: &mut SeededRng,
    ) -> Result<AttackReport> {
        use crate::protocol::{ReceiverBehavior, SenderBehavior};
        if zero_runs == 0 {
            return Err(Error::InvalidInput(
                "at least one all-zero check run required".into(),
            ));
        }
        let p = &self.protocol;
        let dim = self.config().dim;
        let master_seed = rng.seed();
        let mut detected_count = 0usize;
        for _ in 0..trials {
            let mut exposed = false;
            for _ in 0..zero_runs {
                let basis = rng.index(p.basis_count());
                let vector = rng.index(dim);
                let prepared = match &behavior.sender {
                    SenderBehavior::Honest => vector,
                    SenderBehavior::ShiftPrepared { shift } => (vector + shift) % dim,
                };
                // All-zero trits: nobody touches the state; the receiver
                // measures the announced basis (the run is sifted).
                let detected = p.measure(p.family().state(StateId::new(basis, prepared)), basis, rng);
                let announced = match &behavior.receiver {
                    ReceiverBehavior::Honest => detected,
                    ReceiverBehavior::AnnounceFrom(dist) => dist.sample(rng),
                };
                if announced != vector {
                    exposed = true;
                }
            }
            if exposed {
                detected_count += 1;
            }
        }
        let detection = detected_count as f64 / trials.max(1) as f64;
        let spec = match behavior.sender {
            SenderBehavior::ShiftPrepared { shift } => AttackSpec::SenderLie { shift },
            SenderBehavior::Honest => AttackSpec::ReceiverLie,
        };
        Ok(AttackReport {
            spec,
            master_seed,
            trials,
            detection_probability: detection,
            detection_std_error: binomial_std_error(detection, trials),
            attack_success_probability: 1.0 - detection,
            attack_success_std_error: binomial_std_error(detection, trials),
            leakage_bits: None,
            leakage_std_error: None,
        })
    }
}
