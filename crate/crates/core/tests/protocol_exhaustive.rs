//! Exhaustive end-to-end checks of the trusted and qubit protocols on the
//! ideal channel: the disclosed count must equal the true veto count modulo
//! the dimension for every pattern.

use qudit_veto::protocol::{run_qubit_protocol, Disclosure, Mode, ProtocolConfig, VetoProtocol};
use qudit_veto::SeededRng;

fn veto_patterns(n: usize) -> Vec<Vec<bool>> {
    (0..1u32 << n)
        .map(|mask| (0..n).map(|i| (mask >> i) & 1 == 1).collect())
        .collect()
}

#[test]
fn trusted_tally_equals_true_count_for_all_patterns() {
    for (dim, n_voters, seed) in [(4usize, 3usize, 400u64), (5, 4, 401), (7, 4, 402)] {
        let mut config = ProtocolConfig::new(dim, n_voters, Mode::Trusted).unwrap();
        config.disclosure = Disclosure::VetoCount;
        let protocol = VetoProtocol::new(config).unwrap();
        let mut rng = SeededRng::new(seed);
        for pattern in veto_patterns(n_voters) {
            let true_count = pattern.iter().filter(|&&v| v).count();
            let (outcome, transcript) = protocol.run_trusted(&pattern, &mut rng).unwrap();
            assert_eq!(
                outcome.veto_count,
                Some(true_count % dim),
                "d={dim} pattern {pattern:?}"
            );
            assert_eq!(outcome.veto_present, true_count % dim != 0);
            // The decision run is a sifted voting run in the transcript.
            let decision = &transcript.runs[outcome.matched_run];
            assert!(decision.sifted);
        }
    }
}

#[test]
fn qubit_mode_reports_parity_for_all_patterns() {
    let mut rng = SeededRng::new(410);
    for n_voters in [3usize, 4] {
        for pattern in veto_patterns(n_voters) {
            let true_count = pattern.iter().filter(|&&v| v).count();
            let outcome = run_qubit_protocol(n_voters, &pattern, &mut rng).unwrap();
            assert_eq!(
                outcome.veto_present,
                true_count % 2 != 0,
                "N={n_voters} pattern {pattern:?}"
            );
        }
    }
}

#[test]
fn single_veto_actions_cannot_cancel_below_the_dimension() {
    // With at most one veto per voter and fewer voters than the dimension,
    // no admissible action pattern brings a nonzero count back to zero.
    for (dim, n_voters) in [(4usize, 3usize), (5, 4), (7, 6)] {
        for count in 1..=n_voters {
            assert_ne!(count % dim, 0, "d={dim} count {count}");
        }
    }
}
