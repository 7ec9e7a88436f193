//! Time-dependent master-equation coefficients.
//!
//! Every bath contributes a thermal coefficient α(t), a decay coefficient
//! β(t) and the decay rate κ(t) = 2 Re β(t). Closed forms are provided for the
//! Lorentzian and ohmic families; [`quadrature`] evaluates the defining
//! integrals directly and serves as the reference for them.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::spectral::{SpectralError, SpectralModel};
use crate::OMEGA_C;

pub mod closed_form;
pub mod quadrature;

pub use closed_form::{
    alpha_beta_finite_t_lorentzian, kappa_bandgap_lorentzian, kappa_double_lorentzian, kappa_ohmic,
    kappa_ohmic_gamma_factored, kappa_single_lorentzian,
};
pub use quadrature::{alpha_beta_quadrature, FrequencyDomain, QuadratureOptions};

/// Default number of Simpson intervals used by [`average_rate`].
pub const AVERAGE_INTERVALS: usize = 2_000;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum RatesError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("operation needs a {expected} bath")]
    WrongModel { expected: &'static str },
    #[error("closed form only valid at zero temperature")]
    RequiresZeroTemperature,
    #[error("negative time {0}")]
    NegativeTime(f64),
    #[error("mean thermal occupation must be finite and non-negative, got {0}")]
    NegativeOccupation(f64),
    #[error("detuning must be finite and is only meaningful for Lorentzian baths, got {0}")]
    Detuning(f64),
    #[error("invalid parameter: {0}")]
    Parameter(&'static str),
    #[error("quadrature did not converge after {subdivisions} subdivisions (error estimate {estimate:e})")]
    QuadratureNotConverged { estimate: f64, subdivisions: usize },
    #[error(
        "thermal integral diverges at ω → 0 for a density with J(0) > 0; set an infrared cutoff"
    )]
    ThermalDivergence,
}

/// A spectral density together with the detuning and the bath temperature.
///
/// The detuning δ = ω_c − ω_bc is the primary input: the Lorentzian centre of
/// the stored model is moved to ω_c − δ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BathContext {
    model: SpectralModel,
    delta: f64,
    nbar: f64,
}

impl BathContext {
    pub fn new(model: SpectralModel, delta: f64, nbar: f64) -> Result<Self, RatesError> {
        let violations = model.validate();
        if !violations.is_empty() {
            return Err(SpectralError::Invalid(violations).into());
        }
        if !(nbar >= 0.0) || !nbar.is_finite() {
            return Err(RatesError::NegativeOccupation(nbar));
        }
        if !delta.is_finite() || (!model.is_lorentzian() && delta != 0.0) {
            return Err(RatesError::Detuning(delta));
        }
        Ok(Self {
            model: model.with_bath_frequency(OMEGA_C - delta),
            delta,
            nbar,
        })
    }

    pub fn zero_temperature(model: SpectralModel, delta: f64) -> Result<Self, RatesError> {
        Self::new(model, delta, 0.0)
    }

    pub fn model(&self) -> SpectralModel {
        self.model
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    /// β_T = ln(1 + 1/N̄) in units of 1/ω_c, so that the Planck occupation at
    /// ω_c equals N̄. Infinite at zero temperature.
    pub fn inverse_temperature(&self) -> f64 {
        if self.nbar == 0.0 {
            f64::INFINITY
        } else {
            (1.0 / self.nbar).ln_1p() / OMEGA_C
        }
    }

    /// Planck occupation `1/(e^{β_T ω} − 1)`.
    pub fn planck(&self, omega: f64) -> f64 {
        if self.nbar == 0.0 {
            return 0.0;
        }
        1.0 / (self.inverse_temperature() * omega).exp_m1()
    }
}

/// Source of the master-equation coefficients at time t.
pub trait Coefficients: Sync {
    /// (α(t), β(t)).
    fn alpha_beta(&self, t: f64) -> (Complex64, Complex64);

    /// κ(t) = 2 Re β(t).
    fn kappa(&self, t: f64) -> f64 {
        2.0 * self.alpha_beta(t).1.re
    }
}

/// Closed-form coefficients of a bath context.
///
/// Lorentzian baths at finite temperature use the low-temperature expression
/// for each constituent, combined with the model weights. Ohmic baths carry
/// only κ(t); their frequency shift is set to zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateCoefficients {
    ctx: BathContext,
}

impl RateCoefficients {
    pub fn new(ctx: BathContext) -> Result<Self, RatesError> {
        if let SpectralModel::Ohmic { s, .. } = ctx.model() {
            if ctx.nbar() != 0.0 {
                return Err(RatesError::RequiresZeroTemperature);
            }
            if !(s > 0.0) {
                return Err(RatesError::Parameter("ohmic exponent s must be positive"));
            }
        }
        Ok(Self { ctx })
    }

    pub fn context(&self) -> &BathContext {
        &self.ctx
    }
}

impl Coefficients for RateCoefficients {
    fn alpha_beta(&self, t: f64) -> (Complex64, Complex64) {
        closed_form::closed_form_alpha_beta(&self.ctx, t)
    }
}

/// Time-independent coefficients; the Markovian (Lindblad) limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantCoefficients {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl ConstantCoefficients {
    /// α = κN̄/2, β = κ(N̄+1)/2 of a flat bath with rate κ.
    pub fn markovian(kappa: f64, nbar: f64) -> Self {
        Self {
            alpha: Complex64::new(kappa * nbar / 2.0, 0.0),
            beta: Complex64::new(kappa * (nbar + 1.0) / 2.0, 0.0),
        }
    }
}

impl Coefficients for ConstantCoefficients {
    fn alpha_beta(&self, _t: f64) -> (Complex64, Complex64) {
        (self.alpha, self.beta)
    }
}

/// Coefficients sampled on a uniform grid and linearly interpolated.
///
/// A grid of half the integrator step puts every RK4 stage time on a node, so
/// interpolation is exact there. Times past the end of the grid return the
/// last node.
#[derive(Clone, Debug, PartialEq)]
pub struct RateTable {
    step: f64,
    values: Vec<(Complex64, Complex64)>,
}

impl RateTable {
    pub fn tabulate<C: Coefficients + ?Sized>(
        source: &C,
        t_end: f64,
        step: f64,
    ) -> Result<Self, RatesError> {
        if !(step > 0.0) || !(t_end >= 0.0) || !t_end.is_finite() {
            return Err(RatesError::Parameter(
                "rate table needs step > 0 and a finite end time ≥ 0",
            ));
        }
        let n = (t_end / step).ceil() as usize + 1;
        let values = (0..=n)
            .map(|k| source.alpha_beta(k as f64 * step))
            .collect();
        Ok(Self { step, values })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl Coefficients for RateTable {
    fn alpha_beta(&self, t: f64) -> (Complex64, Complex64) {
        let last = self.values.len() - 1;
        let x = (t / self.step).max(0.0);
        let k = x.floor() as usize;
        if k >= last {
            return self.values[last];
        }
        let frac = x - k as f64;
        let (a0, b0) = self.values[k];
        if frac < 1e-9 {
            return (a0, b0);
        }
        if frac > 1.0 - 1e-9 {
            return self.values[k + 1];
        }
        let (a1, b1) = self.values[k + 1];
        (a0 + (a1 - a0) * frac, b0 + (b1 - b0) * frac)
    }
}

impl<C: Coefficients + ?Sized> Coefficients for &C {
    fn alpha_beta(&self, t: f64) -> (Complex64, Complex64) {
        (**self).alpha_beta(t)
    }
}

/// Mean of `kappa` over `[start, start + width]` by composite Simpson with
/// [`AVERAGE_INTERVALS`] intervals. Panics if `width` is not positive.
pub fn average_rate(kappa: impl Fn(f64) -> f64, start: f64, width: f64) -> f64 {
    assert!(width > 0.0, "averaging window must have positive width");
    let n = AVERAGE_INTERVALS;
    let h = width / n as f64;
    let mut sum = kappa(start) + kappa(start + width);
    for k in 1..n {
        let weight = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * kappa(start + k as f64 * h);
    }
    sum * h / 3.0 / width
}
