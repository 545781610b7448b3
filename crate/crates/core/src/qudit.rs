//! Exact small-dimension state-vector algebra.
//!
//! States, diagonal unitaries, orthonormal bases, Born-rule outcome
//! distributions, and seeded outcome sampling. Everything here is plain
//! double-precision complex arithmetic; dimensions stay at or below 13, so
//! conditioning is never a concern and the default comparison tolerance is
//! 1e-10.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Default tolerance for algebraic comparisons.
pub const TOL: f64 = 1e-10;

/// Tolerance for construction-time invariants (norms, phase moduli).
pub const CONSTRUCTION_TOL: f64 = 1e-12;

/// The d-th root of unity raised to the k-th power, `e^{2πi k / d}`.
///
/// The exponent is reduced mod `d` before evaluation, and quarter-turn
/// angles return the exact values 1, i, -1, -i (trigonometric evaluation
/// would leave them an ulp off, breaking the exact dyadic algebra of the
/// dimension-4 bases).
pub fn root_of_unity(dim: usize, power: i64) -> Complex64 {
    let k = power.rem_euclid(dim as i64) as usize;
    if (4 * k).is_multiple_of(dim) {
        match (4 * k / dim) % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, TAU * k as f64 / dim as f64)
    }
}

fn check_dims(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

/// A pure state of a d-level system: a unit-norm complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditState {
    amplitudes: Vec<Complex64>,
}

impl QuditState {
    /// Wrap an amplitude vector, requiring unit norm within 1e-12.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidValue("state must have dimension >= 1".into()));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidValue("state amplitudes must be finite".into()));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(Error::InvalidValue(format!(
                "state squared norm {norm_sq} differs from 1 by more than {CONSTRUCTION_TOL}"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Normalize an arbitrary nonzero amplitude vector into a state.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidValue("state amplitudes must be finite".into()));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(Error::InvalidValue(
                "cannot normalize an all-zero amplitude vector".into(),
            ));
        }
        let inv = 1.0 / norm_sq.sqrt();
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|a| a * inv).collect(),
        })
    }

    /// Computational basis state `|k⟩`.
    pub fn basis_vector(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Inner product `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Whether two states coincide up to an overall phase: `|⟨a|b⟩| ≥ 1 − tol`.
    pub fn equal_up_to_global_phase(&self, other: &Self, tol: f64) -> Result<bool> {
        let overlap = self.inner(other)?;
        Ok(overlap.norm() >= 1.0 - tol)
    }
}

/// A diagonal unitary, stored as its d unit-modulus diagonal entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalUnitary {
    phases: Vec<Complex64>,
}

impl DiagonalUnitary {
    /// Wrap a phase vector, requiring each entry to have modulus 1 within 1e-12.
    pub fn new(phases: Vec<Complex64>) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::InvalidValue("unitary must have dimension >= 1".into()));
        }
        for (k, p) in phases.iter().enumerate() {
            if !p.re.is_finite() || !p.im.is_finite() || (p.norm() - 1.0).abs() > CONSTRUCTION_TOL {
                return Err(Error::InvalidValue(format!(
                    "diagonal entry {k} has modulus {} (must be 1 within {CONSTRUCTION_TOL})",
                    p.norm()
                )));
            }
        }
        Ok(Self { phases })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            phases: vec![Complex64::new(1.0, 0.0); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.phases.len()
    }

    pub fn phases(&self) -> &[Complex64] {
        &self.phases
    }

    /// Apply to a state: component k of the result is `phases[k] * amplitudes[k]`.
    pub fn apply(&self, state: &QuditState) -> Result<QuditState> {
        check_dims(self.dim(), state.dim())?;
        let amplitudes = self
            .phases
            .iter()
            .zip(state.amplitudes())
            .map(|(p, a)| p * a)
            .collect();
        // Unit-modulus phases preserve the norm; skip revalidation.
        Ok(QuditState { amplitudes })
    }

    /// Componentwise product; diagonal unitaries commute, so order is irrelevant.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self {
            phases: self
                .phases
                .iter()
                .zip(&other.phases)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// Componentwise n-th power; power 0 is the identity.
    pub fn pow(&self, n: usize) -> Self {
        Self {
            phases: self.phases.iter().map(|p| p.powu(n as u32)).collect(),
        }
    }

    /// Maximum componentwise distance to another diagonal unitary.
    pub fn max_phase_distance(&self, other: &Self) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self
            .phases
            .iter()
            .zip(&other.phases)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// An ordered orthonormal basis of d states.
#[derive(Debug, Clone)]
pub struct BasisSet {
    states: Vec<QuditState>,
}

impl BasisSet {
    /// Wrap d states of dimension d, checking orthonormality.
    pub fn new(states: Vec<QuditState>) -> Result<Self> {
        let dim = states.first().map(QuditState::dim).unwrap_or(0);
        if dim == 0 || states.len() != dim {
            return Err(Error::InvalidValue(format!(
                "a basis of dimension {dim} needs exactly {dim} states, got {}",
                states.len()
            )));
        }
        for (i, a) in states.iter().enumerate() {
            check_dims(dim, a.dim())?;
            for b in states.iter().skip(i + 1) {
                let overlap = a.inner(b)?.norm();
                if overlap >= TOL {
                    return Err(Error::InvalidValue(format!(
                        "basis states are not orthogonal (overlap modulus {overlap})"
                    )));
                }
            }
        }
        Ok(Self { states })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[QuditState] {
        &self.states
    }

    pub fn state(&self, l: usize) -> &QuditState {
        &self.states[l]
    }

    /// The computational basis `{|0⟩, ..., |d-1⟩}`.
    pub fn computational(dim: usize) -> Self {
        Self {
            states: (0..dim).map(|k| QuditState::basis_vector(dim, k)).collect(),
        }
    }

    /// Born-rule outcome distribution for measuring `state` in this basis.
    pub fn born_probabilities(&self, state: &QuditState) -> Result<OutcomeDistribution> {
        check_dims(self.dim(), state.dim())?;
        let probs: Vec<f64> = self
            .states
            .iter()
            .map(|b| b.inner(state).map(|ip| ip.norm_sqr()))
            .collect::<Result<_>>()?;
        OutcomeDistribution::new(probs)
    }
}

/// A probability distribution over measurement outcomes.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct OutcomeDistribution {
    probs: Vec<f64>,
}

impl TryFrom<Vec<f64>> for OutcomeDistribution {
    type Error = Error;

    fn try_from(probs: Vec<f64>) -> Result<Self> {
        Self::new(probs)
    }
}

impl From<OutcomeDistribution> for Vec<f64> {
    fn from(dist: OutcomeDistribution) -> Self {
        dist.probs
    }
}

impl OutcomeDistribution {
    /// Wrap a probability vector, requiring non-negative entries summing to 1
    /// within 1e-10.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.iter().any(|&p| p < -TOL || !p.is_finite()) {
            return Err(Error::InvalidValue(
                "outcome probabilities must be finite and non-negative".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > TOL {
            return Err(Error::InvalidValue(format!(
                "outcome probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self {
            probs: probs.into_iter().map(|p| p.max(0.0)).collect(),
        })
    }

    pub fn uniform(dim: usize) -> Self {
        Self {
            probs: vec![1.0 / dim as f64; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Draw one outcome index by inverse CDF over the stored ordering.
    ///
    /// Consumes exactly one 64-bit step of the generator regardless of the
    /// outcome, so sampling never desynchronizes parallel reconstructions of
    /// the same stream.
    pub fn sample(&self, rng: &mut SeededRng) -> usize {
        let u = rng.next_unit_f64();
        let mut cumulative = 0.0;
        for (l, p) in self.probs.iter().enumerate() {
            cumulative += p;
            if u < cumulative {
                return l;
            }
        }
        // Rounding can leave the final cumulative sum marginally below 1.
        self.probs.len() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn plus_state() -> QuditState {
        QuditState::new(vec![c(SQRT_HALF, 0.0), c(SQRT_HALF, 0.0)]).unwrap()
    }

    /// B1 of the d=4 pair, columns as states.
    fn b1_column(l: usize) -> QuditState {
        let cols = [
            [c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)],
            [c(0.5, 0.0), c(0.0, 0.5), c(-0.5, 0.0), c(0.0, -0.5)],
            [c(0.5, 0.0), c(-0.5, 0.0), c(0.5, 0.0), c(-0.5, 0.0)],
            [c(0.5, 0.0), c(0.0, -0.5), c(-0.5, 0.0), c(0.0, 0.5)],
        ];
        QuditState::new(cols[l].to_vec()).unwrap()
    }

    fn b2_column(l: usize) -> QuditState {
        let cols = [
            [c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(-0.5, 0.0)],
            [c(0.5, 0.0), c(0.0, 0.5), c(-0.5, 0.0), c(0.0, 0.5)],
            [c(0.5, 0.0), c(-0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)],
            [c(-0.5, 0.0), c(0.0, 0.5), c(0.5, 0.0), c(0.0, 0.5)],
        ];
        QuditState::new(cols[l].to_vec()).unwrap()
    }

    #[test]
    fn apply_diagonal_matches_componentwise_product() {
        // Diag(1,-1) on (1,1)/√2 flips the second amplitude.
        let v2 = DiagonalUnitary::new(vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let out = v2.apply(&plus_state()).unwrap();
        assert_abs_diff_eq!(out.amplitudes()[0].re, SQRT_HALF, epsilon = 1e-15);
        assert_abs_diff_eq!(out.amplitudes()[1].re, -SQRT_HALF, epsilon = 1e-15);

        // Identity phases leave any state untouched.
        let id = DiagonalUnitary::identity(2);
        assert_eq!(id.apply(&plus_state()).unwrap(), plus_state());

        // Diag(1,i,-1,-i) advances column 1 of B1 to column 2.
        let v = DiagonalUnitary::new(vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)])
            .unwrap();
        let shifted = v.apply(&b1_column(0)).unwrap();
        for (a, b) in shifted.amplitudes().iter().zip(b1_column(1).amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn apply_diagonal_rejects_dimension_mismatch() {
        let v2 = DiagonalUnitary::new(vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let s4 = b1_column(0);
        assert!(matches!(
            v2.apply(&s4),
            Err(Error::DimensionMismatch { expected: 2, actual: 4 })
        ));
    }

    #[test]
    fn compose_squares_u2_into_v2() {
        let u2 = DiagonalUnitary::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let v2 = DiagonalUnitary::new(vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert!(u2.compose(&u2).unwrap().max_phase_distance(&v2).unwrap() < 1e-15);

        let id = DiagonalUnitary::identity(2);
        assert_eq!(u2.compose(&id).unwrap(), u2);
    }

    #[test]
    fn compose_reproduces_uv_plate_product() {
        let u = DiagonalUnitary::new(vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)])
            .unwrap();
        let v = DiagonalUnitary::new(vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)])
            .unwrap();
        let uv = u.compose(&v).unwrap();
        let expected =
            DiagonalUnitary::new(vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, 1.0)])
                .unwrap();
        assert!(uv.max_phase_distance(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn powers_cycle_back_to_identity() {
        let v4 = DiagonalUnitary::new(vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)])
            .unwrap();
        assert!(v4.pow(4).max_phase_distance(&DiagonalUnitary::identity(4)).unwrap() < 1e-12);
        assert!(v4.pow(0).max_phase_distance(&DiagonalUnitary::identity(4)).unwrap() == 0.0);

        let u2 = DiagonalUnitary::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let v2 = DiagonalUnitary::new(vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert!(u2.pow(2).max_phase_distance(&v2).unwrap() < 1e-15);

        let omega5 = DiagonalUnitary::new((0..5).map(|k| root_of_unity(5, k)).collect()).unwrap();
        assert!(omega5.pow(5).max_phase_distance(&DiagonalUnitary::identity(5)).unwrap() < 1e-12);
    }

    #[test]
    fn inner_product_examples() {
        let s = b1_column(0);
        assert_abs_diff_eq!(s.inner(&s).unwrap().re, 1.0, epsilon = 1e-12);

        // Cross-basis overlap modulus 1/2, squared 1/4.
        let overlap = b1_column(0).inner(&b2_column(0)).unwrap();
        assert_abs_diff_eq!(overlap.norm(), 0.5, epsilon = 1e-12);

        // Orthogonal within a basis.
        assert_abs_diff_eq!(b1_column(0).inner(&b1_column(2)).unwrap().norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn born_probabilities_own_basis_and_unbiased_basis() {
        let b1 = BasisSet::new((0..4).map(b1_column).collect()).unwrap();
        let b2 = BasisSet::new((0..4).map(b2_column).collect()).unwrap();

        let own = b1.born_probabilities(&b1_column(0)).unwrap();
        assert_abs_diff_eq!(own.probs()[0], 1.0, epsilon = 1e-12);
        for &p in &own.probs()[1..] {
            assert_abs_diff_eq!(p, 0.0, epsilon = 1e-12);
        }

        let cross = b2.born_probabilities(&b1_column(0)).unwrap();
        for &p in cross.probs() {
            assert_abs_diff_eq!(p, 0.25, epsilon = 1e-12);
        }

        // (1,1)/√2 measured in the circular basis splits evenly.
        let circular = BasisSet::new(vec![
            QuditState::new(vec![c(SQRT_HALF, 0.0), c(0.0, SQRT_HALF)]).unwrap(),
            QuditState::new(vec![c(SQRT_HALF, 0.0), c(0.0, -SQRT_HALF)]).unwrap(),
        ])
        .unwrap();
        let split = circular.born_probabilities(&plus_state()).unwrap();
        assert_abs_diff_eq!(split.probs()[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(split.probs()[1], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn sampling_degenerate_distribution_is_constant() {
        let dist = OutcomeDistribution::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        for seed in 0..50 {
            let mut rng = SeededRng::new(seed);
            assert_eq!(dist.sample(&mut rng), 0);
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let dist = OutcomeDistribution::uniform(4);
        let draw = |seed| {
            let mut rng = SeededRng::new(seed);
            (0..64).map(|_| dist.sample(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(99), draw(99));
    }

    #[test]
    fn sampling_frequencies_converge_within_four_standard_errors() {
        let n = 100_000;
        for (seed, probs) in [
            (2024u64, vec![0.25, 0.25, 0.25, 0.25]),
            (2025, vec![0.7, 0.1, 0.15, 0.05]),
        ] {
            let dist = OutcomeDistribution::new(probs.clone()).unwrap();
            let mut rng = SeededRng::new(seed);
            let mut counts = vec![0usize; probs.len()];
            for _ in 0..n {
                counts[dist.sample(&mut rng)] += 1;
            }
            for (l, &count) in counts.iter().enumerate() {
                let freq = count as f64 / n as f64;
                let sigma = (probs[l] * (1.0 - probs[l]) / n as f64).sqrt();
                assert!(
                    (freq - probs[l]).abs() < 4.0 * sigma,
                    "index {l}: frequency {freq} vs {}",
                    probs[l]
                );
            }
        }
    }

    #[test]
    fn global_phase_comparison() {
        let s = b1_column(0);
        let neg = QuditState::new(s.amplitudes().iter().map(|a| -a).collect()).unwrap();
        assert!(s.equal_up_to_global_phase(&neg, 1e-10).unwrap());
        assert!(!b1_column(0).equal_up_to_global_phase(&b1_column(1), 1e-10).unwrap());

        // U maps B1 column 4 onto -1 times B2 column 4.
        let u = DiagonalUnitary::new(vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)])
            .unwrap();
        let mapped = u.apply(&b1_column(3)).unwrap();
        assert!(mapped.equal_up_to_global_phase(&b2_column(3), 1e-10).unwrap());
    }

    #[test]
    fn invalid_constructions_are_rejected() {
        assert!(QuditState::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(QuditState::normalized(vec![c(0.0, 0.0), c(0.0, 0.0)]).is_err());
        assert!(DiagonalUnitary::new(vec![c(0.5, 0.0)]).is_err());
        assert!(OutcomeDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(OutcomeDistribution::new(vec![-0.1, 1.1]).is_err());
        // Non-orthogonal states do not form a basis.
        assert!(BasisSet::new(vec![plus_state(), plus_state()]).is_err());
        // NaN never satisfies a unit-modulus or unit-norm invariant.
        assert!(QuditState::new(vec![c(f64::NAN, 0.0), c(0.0, 0.0)]).is_err());
        assert!(QuditState::normalized(vec![c(f64::NAN, 0.0), c(1.0, 0.0)]).is_err());
        assert!(DiagonalUnitary::new(vec![c(f64::NAN, 0.0), c(1.0, 0.0)]).is_err());
        assert!(OutcomeDistribution::new(vec![f64::NAN, 1.0]).is_err());
    }

    prop_compose! {
        fn arb_state(dim: usize)
            (parts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
                .prop_filter("nonzero", |v| v.iter().any(|(re, im)| re.abs() + im.abs() > 1e-3)))
            -> QuditState
        {
            QuditState::normalized(parts.into_iter().map(|(re, im)| c(re, im)).collect()).unwrap()
        }
    }

    prop_compose! {
        fn arb_diagonal(dim: usize)
            (angles in prop::collection::vec(0.0f64..std::f64::consts::TAU, dim))
            -> DiagonalUnitary
        {
            DiagonalUnitary::new(angles.into_iter().map(|t| Complex64::from_polar(1.0, t)).collect())
                .unwrap()
        }
    }

    proptest! {
        #[test]
        fn apply_preserves_norm(s in arb_state(5), u in arb_diagonal(5)) {
            let out = u.apply(&s).unwrap();
            let norm_sq: f64 = out.amplitudes().iter().map(|a| a.norm_sqr()).sum();
            prop_assert!((norm_sq - 1.0).abs() < 1e-12);
        }

        #[test]
        fn compose_commutative_and_pow_is_iterated_compose(
            a in arb_diagonal(4),
            b in arb_diagonal(4),
            n in 0usize..6,
        ) {
            let ab = a.compose(&b).unwrap();
            let ba = b.compose(&a).unwrap();
            prop_assert!(ab.max_phase_distance(&ba).unwrap() < 1e-12);

            let mut iterated = DiagonalUnitary::identity(4);
            for _ in 0..n {
                iterated = iterated.compose(&a).unwrap();
            }
            prop_assert!(a.pow(n).max_phase_distance(&iterated).unwrap() < 1e-12);
        }

        #[test]
        fn compose_associative(
            a in arb_diagonal(3),
            b in arb_diagonal(3),
            d in arb_diagonal(3),
        ) {
            let left = a.compose(&b).unwrap().compose(&d).unwrap();
            let right = a.compose(&b.compose(&d).unwrap()).unwrap();
            prop_assert!(left.max_phase_distance(&right).unwrap() < 1e-12);
        }

        #[test]
        fn global_phase_equality_reflexive_symmetric(a in arb_state(4), b in arb_state(4)) {
            prop_assert!(a.equal_up_to_global_phase(&a, 1e-12).unwrap());
            prop_assert_eq!(
                a.equal_up_to_global_phase(&b, 0.3).unwrap(),
                b.equal_up_to_global_phase(&a, 0.3).unwrap()
            );
        }

        #[test]
        fn born_probabilities_sum_to_one(s in arb_state(4)) {
            let basis = BasisSet::computational(4);
            let dist = basis.born_probabilities(&s).unwrap();
            let total: f64 = dist.probs().iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-10);
        }
    }
}
