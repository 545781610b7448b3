//! Seeded statistical checks on infrastructure establishment, sifting, and
//! voter privacy. Tolerances are four binomial standard errors unless the
//! quantity is exact.

use qudit_veto::protocol::{Mode, ProtocolConfig, RunRecord, VetoProtocol, VoterAction};
use qudit_veto::{build_mub_family, SeededRng};

fn acceptance_rate(config: ProtocolConfig, attempts: usize, seed: u64) -> f64 {
    let protocol = VetoProtocol::new(config).unwrap();
    let mut rng = SeededRng::new(seed);
    let mut accepted = 0usize;
    for _ in 0..attempts {
        let exponents = protocol.draw_secret_exponents(&mut rng);
        let mut sifted: Vec<RunRecord> = Vec::new();
        let mut index = 0;
        while sifted.len() < protocol.config().infra_runs {
            let record = protocol.infrastructure_round(&exponents, index, &mut rng);
            index += 1;
            if record.sifted {
                sifted.push(record);
            }
        }
        let refs: Vec<&RunRecord> = sifted.iter().collect();
        if protocol.accept_infrastructure(&refs).unwrap().accepted() {
            accepted += 1;
        }
    }
    accepted as f64 / attempts as f64
}

#[test]
fn acceptance_probability_is_half_for_three_ququart_voters() {
    // Sum of three uniform bits is even with probability 1/2.
    let config = ProtocolConfig::new(4, 3, Mode::Trusted).unwrap();
    let rate = acceptance_rate(config, 10_000, 310);
    let sigma = (0.5f64 * 0.5 / 10_000.0).sqrt();
    assert!((rate - 0.5).abs() < 4.0 * sigma, "rate {rate}");
}

#[test]
fn acceptance_probability_is_quarter_for_three_qubit_voters() {
    // Sum of three uniform draws from 0..4 is 0 mod 4 with probability 1/4.
    let config = ProtocolConfig::new(2, 3, Mode::QubitSimple).unwrap();
    let rate = acceptance_rate(config, 10_000, 311);
    let sigma = (0.25f64 * 0.75 / 10_000.0).sqrt();
    assert!((rate - 0.25).abs() < 4.0 * sigma, "rate {rate}");
}

#[test]
fn bad_exponents_match_at_one_quarter_per_sifted_run() {
    // With an odd exponent sum at d=4 the flying state ends in the other
    // basis, so a sifted measurement matches with probability 1/d.
    let protocol = VetoProtocol::new(ProtocolConfig::new(4, 3, Mode::Trusted).unwrap()).unwrap();
    let mut rng = SeededRng::new(312);
    let exponents = vec![1, 0, 0];
    let mut sifted = 0usize;
    let mut matched = 0usize;
    let mut index = 0;
    while sifted < 10_000 {
        let record = protocol.infrastructure_round(&exponents, index, &mut rng);
        index += 1;
        if record.sifted {
            sifted += 1;
            if record.matches() {
                matched += 1;
            }
        }
    }
    let rate = matched as f64 / sifted as f64;
    let sigma = (0.25f64 * 0.75 / 10_000.0).sqrt();
    assert!((rate - 0.25).abs() < 4.0 * sigma, "match rate {rate}");
}

#[test]
fn sift_retains_about_half_the_runs_with_two_bases() {
    let protocol = VetoProtocol::new(ProtocolConfig::new(4, 3, Mode::Trusted).unwrap()).unwrap();
    let mut rng = SeededRng::new(313);
    let exponents = vec![0, 1, 1];
    let total = 10_000;
    let mut kept = 0usize;
    for index in 0..total {
        if protocol.infrastructure_round(&exponents, index, &mut rng).sifted {
            kept += 1;
        }
    }
    let fraction = kept as f64 / total as f64;
    assert!((fraction - 0.5).abs() < 0.02, "sift fraction {fraction}");
}

/// Basis of the flying state after the first k voters, with exponents drawn
/// uniformly (no null-sum filter), must be uniform over the cycled bases.
fn partial_basis_frequencies(dim: usize, n_voters: usize, k: usize, trials: usize, seed: u64) -> Vec<f64> {
    let config = ProtocolConfig::new(dim, n_voters, Mode::Trusted).unwrap();
    let protocol = VetoProtocol::new(config).unwrap();
    let family = build_mub_family(dim).unwrap();
    let bases = family.cycled_basis_count();
    let mut rng = SeededRng::new(seed);
    let mut counts = vec![0usize; bases];
    for _ in 0..trials {
        let exponents = protocol.draw_secret_exponents(&mut rng);
        let sender_basis = rng.index(bases);
        let sender_vector = rng.index(dim);
        let actions: Vec<VoterAction> = exponents[..k]
            .iter()
            .map(|&x| VoterAction { u_power: x, veto: false })
            .collect();
        let state = protocol.apply_actions(
            family.state(qudit_veto::StateId::new(sender_basis, sender_vector)),
            &actions,
        );
        let id = family.identify(&state, 1e-6).unwrap().expect("family member");
        counts[id.basis] += 1;
    }
    counts.iter().map(|&c| c as f64 / trials as f64).collect()
}

#[test]
fn flying_state_basis_is_uniform_mid_protocol() {
    let trials = 100_000;
    for k in [1, 2] {
        let freqs = partial_basis_frequencies(4, 3, k, trials, 314 + k as u64);
        let sigma = (0.5f64 * 0.5 / trials as f64).sqrt();
        for (basis, &f) in freqs.iter().enumerate() {
            assert!(
                (f - 0.5).abs() < 4.0 * sigma,
                "d=4 k={k} basis {basis} frequency {f}"
            );
        }
    }

    let freqs = partial_basis_frequencies(5, 4, 2, 100_000, 317);
    let sigma = (0.2f64 * 0.8 / 100_000.0).sqrt();
    for (basis, &f) in freqs.iter().enumerate() {
        assert!(
            (f - 0.2).abs() < 4.0 * sigma,
            "d=5 basis {basis} frequency {f}"
        );
    }
}

#[test]
fn wrong_basis_outcomes_are_exactly_uniform_for_d4() {
    // Ideal pipeline, no sampling: every cross-basis probability is exactly
    // 1/4 because all amplitudes involved are dyadic.
    let family = build_mub_family(4).unwrap();
    let protocol = VetoProtocol::new(ProtocolConfig::new(4, 3, Mode::Trusted).unwrap()).unwrap();
    for sender_basis in 0..2usize {
        let receiver_basis = 1 - sender_basis;
        for vector in 0..4 {
            for veto_mask in 0..8u32 {
                for u_mask in 0..8u32 {
                    let actions: Vec<VoterAction> = (0..3)
                        .map(|i| VoterAction {
                            u_power: ((u_mask >> i) & 1) as usize,
                            veto: (veto_mask >> i) & 1 == 1,
                        })
                        .collect();
                    let state = protocol.apply_actions(
                        family.state(qudit_veto::StateId::new(sender_basis, vector)),
                        &actions,
                    );
                    let parity = (u_mask.count_ones() % 2) as usize;
                    let final_basis = sender_basis ^ parity;
                    if final_basis == receiver_basis {
                        continue; // not a wrong-basis situation
                    }
                    let dist = family.basis(receiver_basis).born_probabilities(&state).unwrap();
                    for &p in dist.probs() {
                        assert_eq!(p, 0.25, "exact uniformity violated");
                    }
                }
            }
        }
    }
}
