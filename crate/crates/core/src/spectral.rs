//! Bath spectral densities J(ω).
//!
//! Lorentzian variants are parameterised by a dimensionless coupling, a width
//! Γ and the bath-cavity resonance ω_bc:
//!
//! ```text
//! J_SL(ω) = (α_L / 2π) · Γ² / ((ω − ω_bc)² + (Γ/2)²)
//! ```
//!
//! Double and band-gap Lorentzians add or subtract two such profiles with
//! weights; the ohmic family is `α ω_cut^{1−s} ω^s e^{−ω/ω_cut}` and the flat
//! (Markovian) bath is `κ / 2π`.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

/// Absolute tolerance on the weight constraints of the two-Lorentzian models.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

/// Number of grid points used to check band-gap positivity.
pub const POSITIVITY_GRID_POINTS: usize = 10_000;

/// One Lorentzian constituent: coupling `alpha_l` and width `gamma`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lorentzian {
    pub alpha_l: f64,
    pub gamma: f64,
}

impl Lorentzian {
    pub const fn new(alpha_l: f64, gamma: f64) -> Self {
        Self { alpha_l, gamma }
    }

    /// Profile as printed, with (Γ/2)² in the denominator.
    fn profile(&self, detuning: f64) -> f64 {
        let half = 0.5 * self.gamma;
        self.alpha_l / (2.0 * PI) * self.gamma * self.gamma / (detuning * detuning + half * half)
    }

    /// Profile normalised so that its decay rate is the closed-form
    /// `α_L Γ²/(δ²+Γ²)[1 − e^{−Γt}(cos δt − (δ/Γ) sin δt)]`; differs from
    /// [`Lorentzian::profile`] by Γ/2 → Γ in the denominator.
    fn rate_consistent_profile(&self, detuning: f64) -> f64 {
        self.alpha_l / (2.0 * PI) * self.gamma * self.gamma
            / (detuning * detuning + self.gamma * self.gamma)
    }
}

/// Bath spectral density model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpectralModel {
    /// Flat spectrum `J = κ / 2π`; the Markovian bath.
    Flat { kappa: f64 },
    SingleLorentzian {
        lorentzian: Lorentzian,
        omega_bc: f64,
    },
    /// `W_D1·J_1 + W_D2·J_2` with `W_D1 + W_D2 = 1`.
    DoubleLorentzian {
        first: Lorentzian,
        second: Lorentzian,
        omega_bc: f64,
        weights: [f64; 2],
    },
    /// `W_B1·J_1 − W_B2·J_2` with `W_B1 − W_B2 = 1` and `Γ_2 < Γ_1`.
    BandGapLorentzian {
        first: Lorentzian,
        second: Lorentzian,
        omega_bc: f64,
        weights: [f64; 2],
    },
    /// `α ω_cut^{1−s} ω^s e^{−ω/ω_cut}`; s = 1/2 sub-ohmic, 1 ohmic, 3 super-ohmic.
    Ohmic { s: f64, alpha: f64, omega_cut: f64 },
}

/// Which Lorentzian normalisation to integrate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LorentzianForm {
    /// `Γ² / ((ω − ω_bc)² + (Γ/2)²)`, as evaluated by [`SpectralModel::evaluate`].
    #[default]
    AsPrinted,
    /// `Γ² / ((ω − ω_bc)² + Γ²)`, the profile behind the closed-form rates.
    RateConsistent,
}

/// A single violated model constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub constraint: &'static str,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.constraint)
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("invalid spectral model ({} violation(s), first: {})", .0.len(), .0[0])]
    Invalid(Vec<Violation>),
    #[error("spectral density evaluated at negative frequency {0}")]
    NegativeFrequency(f64),
}

impl SpectralModel {
    /// Centre of the Lorentzian profiles, if any.
    pub fn bath_frequency(&self) -> Option<f64> {
        match *self {
            Self::SingleLorentzian { omega_bc, .. }
            | Self::DoubleLorentzian { omega_bc, .. }
            | Self::BandGapLorentzian { omega_bc, .. } => Some(omega_bc),
            Self::Flat { .. } | Self::Ohmic { .. } => None,
        }
    }

    /// Same model with the Lorentzian centre moved to `omega_bc`. Other
    /// variants are returned unchanged.
    pub fn with_bath_frequency(mut self, new_center: f64) -> Self {
        match &mut self {
            Self::SingleLorentzian { omega_bc, .. }
            | Self::DoubleLorentzian { omega_bc, .. }
            | Self::BandGapLorentzian { omega_bc, .. } => *omega_bc = new_center,
            Self::Flat { .. } | Self::Ohmic { .. } => {}
        }
        self
    }

    pub fn is_lorentzian(&self) -> bool {
        self.bath_frequency().is_some()
    }

    /// Every violated constraint, each naming the offending field.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut positive = |value: f64, field: &'static str, constraint: &'static str| {
            if !(value > 0.0 && value.is_finite()) {
                out.push(Violation { field, constraint });
            }
        };
        match *self {
            Self::Flat { kappa } => positive(kappa, "kappa", "kappa > 0"),
            Self::SingleLorentzian {
                lorentzian,
                omega_bc,
            } => {
                positive(lorentzian.alpha_l, "alpha_L", "alpha_L > 0");
                positive(lorentzian.gamma, "Gamma", "Gamma > 0");
                if !omega_bc.is_finite() {
                    out.push(Violation {
                        field: "omega_bc",
                        constraint: "omega_bc finite",
                    });
                }
            }
            Self::DoubleLorentzian {
                first,
                second,
                omega_bc,
                weights,
            } => {
                positive(first.alpha_l, "alpha_L1", "alpha_L1 > 0");
                positive(second.alpha_l, "alpha_L2", "alpha_L2 > 0");
                positive(first.gamma, "Gamma1", "Gamma1 > 0");
                positive(second.gamma, "Gamma2", "Gamma2 > 0");
                positive(weights[0], "W_D1", "W_D1 > 0");
                positive(weights[1], "W_D2", "W_D2 > 0");
                if !omega_bc.is_finite() {
                    out.push(Violation {
                        field: "omega_bc",
                        constraint: "omega_bc finite",
                    });
                }
                if (weights[0] + weights[1] - 1.0).abs() > WEIGHT_TOLERANCE {
                    out.push(Violation {
                        field: "W_D1",
                        constraint: "W_D1 + W_D2 = 1",
                    });
                }
            }
            Self::BandGapLorentzian {
                first,
                second,
                omega_bc,
                weights,
            } => {
                positive(first.alpha_l, "alpha_L1", "alpha_L1 > 0");
                positive(second.alpha_l, "alpha_L2", "alpha_L2 > 0");
                positive(first.gamma, "Gamma1", "Gamma1 > 0");
                positive(second.gamma, "Gamma2", "Gamma2 > 0");
                positive(weights[0], "W_B1", "W_B1 > 0");
                positive(weights[1], "W_B2", "W_B2 > 0");
                if !omega_bc.is_finite() {
                    out.push(Violation {
                        field: "omega_bc",
                        constraint: "omega_bc finite",
                    });
                }
                if (weights[0] - weights[1] - 1.0).abs() > WEIGHT_TOLERANCE {
                    out.push(Violation {
                        field: "W_B1",
                        constraint: "W_B1 − W_B2 = 1",
                    });
                }
                if !(second.gamma < first.gamma) {
                    out.push(Violation {
                        field: "Gamma2",
                        constraint: "Gamma2 < Gamma1",
                    });
                }
                if out.is_empty() && !band_gap_positive(first, second, weights, omega_bc) {
                    out.push(Violation {
                        field: "W_B2",
                        constraint: "J(omega) >= 0 on the validation grid",
                    });
                }
            }
            Self::Ohmic {
                s,
                alpha,
                omega_cut,
            } => {
                positive(s, "s", "s > 0");
                positive(alpha, "alpha", "alpha > 0");
                positive(omega_cut, "omega_cut", "omega_cut > 0");
            }
        }
        out
    }

    /// J(ω) for ω ≥ 0.
    pub fn evaluate(&self, omega: f64) -> Result<f64, SpectralError> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(SpectralError::Invalid(violations));
        }
        if !(omega >= 0.0) {
            return Err(SpectralError::NegativeFrequency(omega));
        }
        Ok(self.density(omega, LorentzianForm::AsPrinted))
    }

    /// J(ω) without validation. Lorentzian profiles are defined on the whole
    /// real line; the ohmic density vanishes for ω ≤ 0.
    pub fn density(&self, omega: f64, form: LorentzianForm) -> f64 {
        let shape = |l: &Lorentzian, detuning: f64| match form {
            LorentzianForm::AsPrinted => l.profile(detuning),
            LorentzianForm::RateConsistent => l.rate_consistent_profile(detuning),
        };
        match *self {
            Self::Flat { kappa } => kappa / (2.0 * PI),
            Self::SingleLorentzian {
                lorentzian,
                omega_bc,
            } => shape(&lorentzian, omega - omega_bc),
            Self::DoubleLorentzian {
                first,
                second,
                omega_bc,
                weights,
            } => {
                let y = omega - omega_bc;
                weights[0] * shape(&first, y) + weights[1] * shape(&second, y)
            }
            Self::BandGapLorentzian {
                first,
                second,
                omega_bc,
                weights,
            } => {
                let y = omega - omega_bc;
                weights[0] * shape(&first, y) - weights[1] * shape(&second, y)
            }
            Self::Ohmic {
                s,
                alpha,
                omega_cut,
            } => {
                if omega <= 0.0 {
                    0.0
                } else {
                    alpha * omega_cut.powf(1.0 - s) * omega.powf(s) * (-omega / omega_cut).exp()
                }
            }
        }
    }
}

// The difference of two Lorentzians is even in the detuning, so positivity is
// checked on a half-line grid wide enough to cover both the peak and the
// validation range [0, 5 ω_bc].
fn band_gap_positive(
    first: Lorentzian,
    second: Lorentzian,
    weights: [f64; 2],
    omega_bc: f64,
) -> bool {
    let reach = (5.0 * omega_bc.abs()).max(100.0 * first.gamma).max(1.0);
    let n = POSITIVITY_GRID_POINTS;
    (0..n).all(|k| {
        let y = reach * k as f64 / (n - 1) as f64;
        weights[0] * first.profile(y) - weights[1] * second.profile(y) >= 0.0
    })
}
