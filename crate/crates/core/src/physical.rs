//! Bridge between apparatus parameters and the abstract algebra.
//!
//! Maps wave-plate/phase-plate settings to diagonal unitaries over the fixed
//! mode ordering (H,1), (V,1), (H,2), (V,2), builds preparation states from
//! plate angles, and folds detector imperfections into a single
//! visibility-mixing transform on outcome distributions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qudit::{DiagonalUnitary, OutcomeDistribution, QuditState};

/// Phase-plate settings for one voter station, in radians.
///
/// `theta1` and `theta2` set the polarization phase in paths 1 and 2,
/// `phi2` the relative phase between the paths (applied to path 2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateSettings {
    pub theta1: f64,
    pub theta2: f64,
    pub phi2: f64,
}

impl PlateSettings {
    pub fn new(theta1: f64, theta2: f64, phi2: f64) -> Self {
        Self { theta1, theta2, phi2 }
    }
}

/// The diagonal transform realized by a plate setting:
/// `Diag(1, e^{iθ1}, e^{iφ2}, e^{i(θ2+φ2)})`.
pub fn settings_to_unitary(s: PlateSettings) -> DiagonalUnitary {
    let phase = |t: f64| Complex64::from_polar(1.0, t);
    DiagonalUnitary::new(vec![
        Complex64::new(1.0, 0.0),
        phase(s.theta1),
        phase(s.phi2),
        phase(s.theta2 + s.phi2),
    ])
    .expect("unit-modulus by construction")
}

/// The three published settings and the idle position.
impl PlateSettings {
    pub const IDENTITY: PlateSettings = PlateSettings {
        theta1: 0.0,
        theta2: 0.0,
        phi2: 0.0,
    };
    pub const U: PlateSettings = PlateSettings {
        theta1: 0.0,
        theta2: std::f64::consts::PI,
        phi2: 0.0,
    };
    pub const V: PlateSettings = PlateSettings {
        theta1: std::f64::consts::FRAC_PI_2,
        theta2: std::f64::consts::FRAC_PI_2,
        phi2: std::f64::consts::PI,
    };
    pub const UV: PlateSettings = PlateSettings {
        theta1: std::f64::consts::FRAC_PI_2,
        theta2: -std::f64::consts::FRAC_PI_2,
        phi2: std::f64::consts::PI,
    };
}

/// Source parameters for a four-mode preparation.
///
/// Amplitudes are `(cos2α, s1·e^{iφ1}·sin2α, e^{iΦ}·cos2β, s2·e^{i(Φ+φ2)}·sin2β)`
/// prior to normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PreparationSettings {
    pub alpha: f64,
    pub beta: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub capital_phi: f64,
    pub sign1: i8,
    pub sign2: i8,
}

impl PreparationSettings {
    pub fn new(
        alpha: f64,
        beta: f64,
        phi1: f64,
        phi2: f64,
        capital_phi: f64,
        sign1: i8,
        sign2: i8,
    ) -> Result<Self> {
        if !matches!(sign1, 1 | -1) || !matches!(sign2, 1 | -1) {
            return Err(Error::InvalidInput("signs must be +1 or -1".into()));
        }
        Ok(Self {
            alpha,
            beta,
            phi1,
            phi2,
            capital_phi,
            sign1,
            sign2,
        })
    }

    /// Half-wave-plate-only preparation: both phases zero, angles `alpha`/`beta`.
    pub fn half_wave(alpha: f64, beta: f64, sign1: i8, sign2: i8) -> Result<Self> {
        Self::new(alpha, beta, 0.0, 0.0, 0.0, sign1, sign2)
    }
}

/// Build the normalized four-mode state for the given source parameters.
pub fn preparation_to_state(p: &PreparationSettings) -> Result<QuditState> {
    let phase = |t: f64| Complex64::from_polar(1.0, t);
    let path2 = phase(p.capital_phi);
    let amplitudes = vec![
        Complex64::new((2.0 * p.alpha).cos(), 0.0),
        phase(p.phi1) * (2.0 * p.alpha).sin() * p.sign1 as f64,
        path2 * (2.0 * p.beta).cos(),
        path2 * phase(p.phi2) * (2.0 * p.beta).sin() * p.sign2 as f64,
    ];
    QuditState::normalized(amplitudes)
        .map_err(|_| Error::InvalidInput("preparation amplitudes are all zero".into()))
}

/// Interferometric noise: the ideal distribution is mixed toward uniform with
/// weight `1 - v`, then an optional uniform background is admixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VisibilityModel {
    pub visibility: f64,
    pub background: f64,
}

impl VisibilityModel {
    pub fn new(visibility: f64, background: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&visibility) {
            return Err(Error::InvalidInput(format!(
                "visibility {visibility} outside [0, 1]"
            )));
        }
        if !(0.0..=1.0).contains(&background) {
            return Err(Error::InvalidInput(format!(
                "background {background} outside [0, 1]"
            )));
        }
        Ok(Self { visibility, background })
    }

    pub fn ideal() -> Self {
        Self {
            visibility: 1.0,
            background: 0.0,
        }
    }
}

/// Apply the visibility mixture to an ideal outcome distribution.
pub fn apply_visibility(dist: &OutcomeDistribution, model: &VisibilityModel) -> OutcomeDistribution {
    let d = dist.dim();
    let uniform = 1.0 / d as f64;
    let v = model.visibility;
    let b = model.background;
    let probs: Vec<f64> = dist
        .probs()
        .iter()
        .map(|&p| {
            let mixed = v * p + (1.0 - v) * uniform;
            (1.0 - b) * mixed + b * uniform
        })
        .collect();
    // Affine mixtures of distributions with uniform are already normalized.
    OutcomeDistribution::new(probs).expect("visibility mixing preserves normalization")
}

/// Infer the visibility from an observed peak probability:
/// `v = (peak - 1/d) / (1 - 1/d)`.
pub fn calibrate_visibility(observed_peak: f64, dim: usize) -> Result<f64> {
    let floor = 1.0 / dim as f64;
    if !(floor..=1.0).contains(&observed_peak) {
        return Err(Error::InvalidInput(format!(
            "observed peak {observed_peak} outside [{floor}, 1]"
        )));
    }
    Ok((observed_peak - floor) / (1.0 - floor))
}
