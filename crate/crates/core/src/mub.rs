//! Mutually unbiased basis families and their cycling generators.
//!
//! For odd prime dimensions the d non-computational bases come from the
//! quadratic Gauss-sum construction, with the computational basis appended
//! last. Dimension 2 uses its own explicit pair of bases (the generic formula
//! fails there), and dimension 4 is the fixed two-basis pair used by the
//! ququart experiment; no computational basis is attached in that case.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qudit::{root_of_unity, BasisSet, DiagonalUnitary, QuditState, TOL};

const SUPPORTED_FAMILIES: &str = "2, 4, or an odd prime <= 13";
const SUPPORTED_U: &str = "2, 4, 9, or an odd prime <= 13";
const SUPPORTED_V: &str = "2, 4, or an odd prime <= 13";

/// Whether `dim` is one of the supported odd primes.
pub fn is_odd_prime(dim: usize) -> bool {
    matches!(dim, 3 | 5 | 7 | 11 | 13)
}

/// Multiplicative order of the basis-cycling generator for `dim`.
///
/// Secret exponents in the protocol are drawn modulo this value.
pub fn u_order(dim: usize) -> Result<usize> {
    match dim {
        2 => Ok(4),
        4 => Ok(2),
        d if is_odd_prime(d) => Ok(d),
        d => Err(Error::UnsupportedDimension {
            dim: d,
            supported: SUPPORTED_U,
        }),
    }
}

/// Location of a state inside a [`MubFamily`]: basis index and vector index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateId {
    pub basis: usize,
    pub vector: usize,
}

impl StateId {
    pub fn new(basis: usize, vector: usize) -> Self {
        Self { basis, vector }
    }
}

/// An indexed collection of pairwise unbiased orthonormal bases.
#[derive(Debug, Clone)]
pub struct MubFamily {
    dim: usize,
    bases: Vec<BasisSet>,
    includes_computational: bool,
}

impl MubFamily {
    /// Wrap a list of bases, verifying pairwise unbiasedness.
    pub fn new(bases: Vec<BasisSet>, includes_computational: bool) -> Result<Self> {
        let dim = bases
            .first()
            .map(BasisSet::dim)
            .ok_or_else(|| Error::InvalidValue("a family needs at least one basis".into()))?;
        let target = 1.0 / dim as f64;
        for (i, a) in bases.iter().enumerate() {
            if a.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: a.dim(),
                });
            }
            for b in bases.iter().skip(i + 1) {
                for sa in a.states() {
                    for sb in b.states() {
                        let overlap_sq = sa.inner(sb)?.norm_sqr();
                        if (overlap_sq - target).abs() > TOL {
                            return Err(Error::InvalidValue(format!(
                                "bases are not unbiased: squared overlap {overlap_sq}, want {target}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(Self {
            dim,
            bases,
            includes_computational,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bases(&self) -> &[BasisSet] {
        &self.bases
    }

    pub fn basis(&self, j: usize) -> &BasisSet {
        &self.bases[j]
    }

    pub fn includes_computational(&self) -> bool {
        self.includes_computational
    }

    /// Number of bases cycled by the U generator (excludes the computational
    /// basis when present). Protocol state and measurement choices draw from
    /// these.
    pub fn cycled_basis_count(&self) -> usize {
        if self.includes_computational {
            self.bases.len() - 1
        } else {
            self.bases.len()
        }
    }

    pub fn state(&self, id: StateId) -> &QuditState {
        self.bases[id.basis].state(id.vector)
    }

    /// Find the unique family member equal to `s` up to global phase.
    ///
    /// Returns `None` when nothing matches. Errors if the tolerance is loose
    /// enough that two distinct members match, which cannot happen below
    /// `1 - 1/sqrt(dim)`.
    pub fn identify(&self, s: &QuditState, tol: f64) -> Result<Option<StateId>> {
        if s.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: s.dim(),
            });
        }
        let mut found: Option<StateId> = None;
        for (j, basis) in self.bases.iter().enumerate() {
            for (l, member) in basis.states().iter().enumerate() {
                if member.equal_up_to_global_phase(s, tol)? {
                    if let Some(first) = found {
                        return Err(Error::AmbiguousMatch {
                            tol,
                            first: (first.basis, first.vector),
                            second: (j, l),
                        });
                    }
                    found = Some(StateId::new(j, l));
                }
            }
        }
        Ok(found)
    }
}

/// State `|j,l⟩` of the odd-prime construction: amplitudes `ω^{kl + jk²}/√d`.
fn prime_state(dim: usize, j: usize, l: usize) -> QuditState {
    let scale = 1.0 / (dim as f64).sqrt();
    let amplitudes = (0..dim)
        .map(|k| {
            let exponent = (k * l + j * k * k) as i64;
            root_of_unity(dim, exponent) * scale
        })
        .collect();
    QuditState::new(amplitudes).expect("roots of unity over sqrt(d) are unit norm")
}

fn dim2_family() -> Vec<BasisSet> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    let state = |a: Complex64, b: Complex64| QuditState::new(vec![a, b]).unwrap();
    vec![
        BasisSet::new(vec![state(re(h), re(h)), state(re(h), re(-h))]).unwrap(),
        BasisSet::new(vec![state(re(h), im(h)), state(re(h), im(-h))]).unwrap(),
        BasisSet::computational(2),
    ]
}

/// The two ququart bases, columns exactly as used by the experiment.
fn dim4_family() -> Vec<BasisSet> {
    let b1: [[Complex64; 4]; 4] = [
        [
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
        ],
        [
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, -0.5),
        ],
        [
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.5, 0.0),
        ],
        [
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, -0.5),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, 0.5),
        ],
    ];
    let b2: [[Complex64; 4]; 4] = [
        [
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.5, 0.0),
        ],
        [
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, 0.5),
        ],
        [
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
        ],
        [
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.5),
        ],
    ];
    // The matrices above are row-major; states are columns.
    let column = |m: &[[Complex64; 4]; 4], l: usize| {
        QuditState::new((0..4).map(|k| m[k][l]).collect()).unwrap()
    };
    vec![
        BasisSet::new((0..4).map(|l| column(&b1, l)).collect()).unwrap(),
        BasisSet::new((0..4).map(|l| column(&b2, l)).collect()).unwrap(),
    ]
}

/// Build the MUB family for a supported dimension.
///
/// Odd primes give the d cycled bases plus the computational basis last;
/// d = 2 gives its two explicit bases plus computational; d = 4 gives the
/// fixed ququart pair only.
pub fn build_mub_family(dim: usize) -> Result<MubFamily> {
    let (bases, includes_computational) = match dim {
        2 => (dim2_family(), true),
        4 => (dim4_family(), false),
        d if is_odd_prime(d) => {
            let mut bases: Vec<BasisSet> = (0..d)
                .map(|j| BasisSet::new((0..d).map(|l| prime_state(d, j, l)).collect()))
                .collect::<Result<_>>()?;
            bases.push(BasisSet::computational(d));
            (bases, true)
        }
        d => {
            return Err(Error::UnsupportedDimension {
                dim: d,
                supported: SUPPORTED_FAMILIES,
            })
        }
    };
    MubFamily::new(bases, includes_computational)
}

/// The basis-cycling generator: `Diag(ω^{k²})` for odd primes, with the
/// special-cased forms for d = 2, 4, and 9.
pub fn u_generator(dim: usize) -> Result<DiagonalUnitary> {
    let phases: Vec<Complex64> = match dim {
        2 => vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)],
        4 => vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
        ],
        9 => [0i64, 0, 0, 0, 3, 6, 0, 6, 3]
            .iter()
            .map(|&e| root_of_unity(9, e))
            .collect(),
        d if is_odd_prime(d) => (0..d).map(|k| root_of_unity(d, (k * k) as i64)).collect(),
        d => {
            return Err(Error::UnsupportedDimension {
                dim: d,
                supported: SUPPORTED_U,
            })
        }
    };
    DiagonalUnitary::new(phases)
}

/// The vector-cycling (veto) generator: `Diag(ω^k)`.
pub fn v_generator(dim: usize) -> Result<DiagonalUnitary> {
    match dim {
        2 | 4 => {}
        d if is_odd_prime(d) => {}
        d => {
            return Err(Error::UnsupportedDimension {
                dim: d,
                supported: SUPPORTED_V,
            })
        }
    }
    DiagonalUnitary::new((0..dim).map(|k| root_of_unity(dim, k as i64)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn max_component_distance(a: &QuditState, b: &QuditState) -> f64 {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn dim2_family_contents() {
        let fam = build_mub_family(2).unwrap();
        assert_eq!(fam.bases().len(), 3);
        assert!(fam.includes_computational());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let b0 = fam.basis(0);
        assert_abs_diff_eq!(b0.state(0).amplitudes()[1].re, h, epsilon = 1e-15);
        assert_abs_diff_eq!(b0.state(1).amplitudes()[1].re, -h, epsilon = 1e-15);
        let b1 = fam.basis(1);
        assert_abs_diff_eq!(b1.state(0).amplitudes()[1].im, h, epsilon = 1e-15);
        assert_abs_diff_eq!(b1.state(1).amplitudes()[1].im, -h, epsilon = 1e-15);
    }

    #[test]
    fn dim4_family_contents() {
        let fam = build_mub_family(4).unwrap();
        assert_eq!(fam.bases().len(), 2);
        assert!(!fam.includes_computational());
        let s11 = fam.state(StateId::new(0, 0));
        for a in s11.amplitudes() {
            assert_abs_diff_eq!(a.re, 0.5, epsilon = 1e-15);
        }
        let s21 = fam.state(StateId::new(1, 0));
        assert_abs_diff_eq!(s21.amplitudes()[3].re, -0.5, epsilon = 1e-15);
    }

    #[test]
    fn dim5_family_is_fully_unbiased() {
        // Six bases; every one of the 15 basis pairs has all squared cross
        // overlaps equal to 1/5. MubFamily::new verifies this, so the
        // assertion here is explicit and exhaustive on purpose.
        let fam = build_mub_family(5).unwrap();
        assert_eq!(fam.bases().len(), 6);
        for i in 0..6 {
            for j in (i + 1)..6 {
                for a in fam.basis(i).states() {
                    for b in fam.basis(j).states() {
                        assert_abs_diff_eq!(a.inner(b).unwrap().norm_sqr(), 0.2, epsilon = 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn unsupported_dimensions_are_rejected() {
        assert!(matches!(
            build_mub_family(6),
            Err(Error::UnsupportedDimension { dim: 6, .. })
        ));
        assert!(build_mub_family(9).is_err());
        assert!(u_generator(6).is_err());
        assert!(v_generator(9).is_err());
        assert!(u_generator(9).is_ok());
    }

    #[test]
    fn generator_values() {
        let u2 = u_generator(2).unwrap();
        assert!((u2.phases()[1] - Complex64::new(0.0, 1.0)).norm() < 1e-15);

        let u4 = u_generator(4).unwrap();
        assert!((u4.phases()[3] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);

        // d=3: Diag(1, ω, ω) since ω⁴ = ω.
        let u3 = u_generator(3).unwrap();
        let omega = root_of_unity(3, 1);
        assert!((u3.phases()[1] - omega).norm() < 1e-12);
        assert!((u3.phases()[2] - omega).norm() < 1e-12);

        let v2 = v_generator(2).unwrap();
        assert!((v2.phases()[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);

        let v4 = v_generator(4).unwrap();
        assert!((v4.phases()[1] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((v4.phases()[3] - Complex64::new(0.0, -1.0)).norm() < 1e-15);

        let v5 = v_generator(5).unwrap();
        for k in 0..5 {
            assert!((v5.phases()[k] - root_of_unity(5, k as i64)).norm() < 1e-12);
        }

        let u9 = u_generator(9).unwrap();
        assert!((u9.phases()[4] - root_of_unity(9, 3)).norm() < 1e-12);
        assert!((u9.phases()[5] - root_of_unity(9, 6)).norm() < 1e-12);
        assert!((u9.phases()[6] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn v_cycles_vectors_within_prime_bases_exactly() {
        for dim in [3, 5, 7] {
            let fam = build_mub_family(dim).unwrap();
            let v = v_generator(dim).unwrap();
            for j in 0..dim {
                for l in 0..dim {
                    let shifted = v.apply(fam.state(StateId::new(j, l))).unwrap();
                    let target = fam.state(StateId::new(j, (l + 1) % dim));
                    assert!(
                        max_component_distance(&shifted, target) < 1e-12,
                        "V cycling failed at d={dim}, j={j}, l={l}"
                    );
                }
            }
        }
    }

    #[test]
    fn u_cycles_bases_for_primes_and_pairs_for_dim4() {
        for dim in [3, 5, 7] {
            let fam = build_mub_family(dim).unwrap();
            let u = u_generator(dim).unwrap();
            for j in 0..dim {
                for l in 0..dim {
                    let moved = u.apply(fam.state(StateId::new(j, l))).unwrap();
                    let target = fam.state(StateId::new((j + 1) % dim, l));
                    assert!(
                        max_component_distance(&moved, target) < 1e-12,
                        "U cycling failed at d={dim}, j={j}, l={l}"
                    );
                }
            }
        }

        let fam = build_mub_family(4).unwrap();
        let u = u_generator(4).unwrap();
        for l in 0..4 {
            let moved = u.apply(fam.state(StateId::new(0, l))).unwrap();
            assert!(moved
                .equal_up_to_global_phase(fam.state(StateId::new(1, l)), 1e-10)
                .unwrap());
        }
        assert!(u.pow(2).max_phase_distance(&DiagonalUnitary::identity(4)).unwrap() < 1e-12);
    }

    #[test]
    fn computational_basis_is_stable_under_u_and_v() {
        for dim in [3, 5] {
            let fam = build_mub_family(dim).unwrap();
            let comp = dim; // computational basis is last
            let u = u_generator(dim).unwrap();
            let v = v_generator(dim).unwrap();
            for l in 0..dim {
                let s = fam.state(StateId::new(comp, l));
                assert!(u.apply(s).unwrap().equal_up_to_global_phase(s, 1e-12).unwrap());
                assert!(v.apply(s).unwrap().equal_up_to_global_phase(s, 1e-12).unwrap());
            }
        }
    }

    #[test]
    fn identify_examples() {
        let fam = build_mub_family(4).unwrap();

        // (1,i,-1,-i)/2 is column 2 of the first basis.
        let s = QuditState::new(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, -0.5),
        ])
        .unwrap();
        assert_eq!(fam.identify(&s, 1e-6).unwrap(), Some(StateId::new(0, 1)));

        // Global phase does not change the id.
        let s11 = fam.state(StateId::new(0, 0)).clone();
        let negated = QuditState::new(s11.amplitudes().iter().map(|a| -a).collect()).unwrap();
        assert_eq!(fam.identify(&negated, 1e-6).unwrap(), Some(StateId::new(0, 0)));

        // A computational vector overlaps every member at 1/2, below threshold.
        let e0 = QuditState::basis_vector(4, 0);
        assert_eq!(fam.identify(&e0, 1e-6).unwrap(), None);

        // Excessive tolerance matches several members.
        assert!(matches!(
            fam.identify(&s11, 0.9),
            Err(Error::AmbiguousMatch { .. })
        ));
    }

    #[test]
    fn identify_inverts_lookup_across_dims() {
        for dim in [2, 4, 5] {
            let fam = build_mub_family(dim).unwrap();
            for j in 0..fam.bases().len() {
                for l in 0..dim {
                    let id = StateId::new(j, l);
                    assert_eq!(fam.identify(fam.state(id), 1e-6).unwrap(), Some(id));
                }
            }
        }
    }
}
