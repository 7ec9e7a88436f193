//! Closed-form decay rates and master-equation coefficients.
//!
//! Complex coefficients use the phase convention of the defining integrals,
//! `e^{i(ω_c − ω)(t − t₁)}`. The finite-temperature Lorentzian expressions are
//! commonly written in the conjugate convention; conjugating them only flips
//! the sign of the frequency shift Im β and leaves κ(t) untouched.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{BathContext, RatesError};
use crate::spectral::{Lorentzian, SpectralModel};

/// Half-width of the two-sided evaluation used for the ohmic s → 1 limit.
pub const OHMIC_LIMIT_STEP: f64 = 1e-6;

/// `[α_L Γ²/(δ²+Γ²)]·[1 − e^{−Γt}(cos δt − (δ/Γ) sin δt)]`.
pub fn lorentzian_kappa(lorentzian: Lorentzian, delta: f64, t: f64) -> f64 {
    let Lorentzian { alpha_l, gamma } = lorentzian;
    let prefactor = alpha_l * gamma * gamma / (delta * delta + gamma * gamma);
    let (s, c) = (delta * t).sin_cos();
    prefactor * (1.0 - (-gamma * t).exp() * (c - delta / gamma * s))
}

/// Complex (α(t), β(t)) of one Lorentzian constituent at mean thermal
/// occupation `nbar` and inverse temperature `beta_t`.
///
/// At `nbar = 0` this is `α = 0`, `β = (α_L Γ/2)(1 − e^{−(Γ − iδ)t})/(Γ − iδ)`,
/// whose doubled real part is [`lorentzian_kappa`].
pub fn lorentzian_alpha_beta(
    lorentzian: Lorentzian,
    delta: f64,
    nbar: f64,
    beta_t: f64,
    t: f64,
) -> (Complex64, Complex64) {
    let Lorentzian { alpha_l, gamma } = lorentzian;
    let i = Complex64::i();
    let g = Complex64::new(gamma, -delta);
    // 1 − e^{−Γt} e^{iδt}
    let memory = Complex64::new(1.0, 0.0) - (-g * t).exp();
    let zero_t = alpha_l * gamma / 2.0 * memory / g;
    if nbar == 0.0 {
        return (Complex64::new(0.0, 0.0), zero_t);
    }
    let oscillating = alpha_l * gamma * gamma * nbar / (2.0 * (delta * delta + gamma * gamma))
        * ((-i * delta * t).exp() - 1.0);
    let thermal_phase = (i * beta_t * gamma).exp();
    let pole = alpha_l * gamma * gamma * nbar * thermal_phase / (2.0 * gamma * g) * memory;
    let alpha = oscillating + pole;
    (alpha, alpha + zero_t)
}

fn two_lorentzians(
    ctx: &BathContext,
) -> Result<(Lorentzian, Lorentzian, [f64; 2], f64), RatesError> {
    match ctx.model() {
        SpectralModel::DoubleLorentzian {
            first,
            second,
            weights,
            ..
        } => Ok((first, second, weights, 1.0)),
        SpectralModel::BandGapLorentzian {
            first,
            second,
            weights,
            ..
        } => Ok((first, second, weights, -1.0)),
        _ => Err(RatesError::WrongModel {
            expected: "double or band-gap Lorentzian",
        }),
    }
}

fn require_zero_temperature(ctx: &BathContext) -> Result<(), RatesError> {
    if ctx.nbar() != 0.0 {
        return Err(RatesError::RequiresZeroTemperature);
    }
    Ok(())
}

fn require_time(t: f64) -> Result<(), RatesError> {
    if !(t >= 0.0) {
        return Err(RatesError::NegativeTime(t));
    }
    Ok(())
}

/// κ(t) of a single-Lorentzian bath at zero temperature.
pub fn kappa_single_lorentzian(ctx: &BathContext, t: f64) -> Result<f64, RatesError> {
    require_time(t)?;
    require_zero_temperature(ctx)?;
    match ctx.model() {
        SpectralModel::SingleLorentzian { lorentzian, .. } => {
            Ok(lorentzian_kappa(lorentzian, ctx.delta(), t))
        }
        _ => Err(RatesError::WrongModel {
            expected: "single Lorentzian",
        }),
    }
}

/// `W_D1 κ^{SL1}(t) + W_D2 κ^{SL2}(t)`.
pub fn kappa_double_lorentzian(ctx: &BathContext, t: f64) -> Result<f64, RatesError> {
    require_time(t)?;
    require_zero_temperature(ctx)?;
    match ctx.model() {
        SpectralModel::DoubleLorentzian { .. } => {
            let (a, b, w, _) = two_lorentzians(ctx)?;
            Ok(w[0] * lorentzian_kappa(a, ctx.delta(), t)
                + w[1] * lorentzian_kappa(b, ctx.delta(), t))
        }
        _ => Err(RatesError::WrongModel {
            expected: "double Lorentzian",
        }),
    }
}

/// `W_B1 κ^{SL1}(t) − W_B2 κ^{SL2}(t)`.
pub fn kappa_bandgap_lorentzian(ctx: &BathContext, t: f64) -> Result<f64, RatesError> {
    require_time(t)?;
    require_zero_temperature(ctx)?;
    match ctx.model() {
        SpectralModel::BandGapLorentzian { .. } => {
            let (a, b, w, _) = two_lorentzians(ctx)?;
            Ok(w[0] * lorentzian_kappa(a, ctx.delta(), t)
                - w[1] * lorentzian_kappa(b, ctx.delta(), t))
        }
        _ => Err(RatesError::WrongModel {
            expected: "band-gap Lorentzian",
        }),
    }
}

/// Ohmic-family rate, with the Euler gamma factor multiplying the cosine term:
///
/// `κ(t) = (α/2)[1 − cos((s−1) arctan(ω_cut t)) Γ(s−1) (1 + ω_cut² t²)^{−(s−1)/2}]`.
///
/// At s = 1 the gamma factor has a pole; the rate is then the mean of the
/// expression at `s = 1 ± 1e-6`, in which the pole cancels and leaves
/// `(α/2)[1 + γ_E + ½ ln(1 + ω_cut² t²)]`. This reading does not vanish at
/// t = 0 for s ≠ 2.
pub fn kappa_ohmic(s: f64, alpha: f64, omega_cut: f64, t: f64) -> Result<f64, RatesError> {
    require_time(t)?;
    if !(s > 0.0) {
        return Err(RatesError::Parameter("ohmic exponent s must be positive"));
    }
    if (s - 1.0).abs() < OHMIC_LIMIT_STEP {
        let lo = ohmic_printed(-OHMIC_LIMIT_STEP, alpha, omega_cut, t);
        let hi = ohmic_printed(OHMIC_LIMIT_STEP, alpha, omega_cut, t);
        return Ok(0.5 * (lo + hi));
    }
    Ok(ohmic_printed(s - 1.0, alpha, omega_cut, t))
}

// Arguments take the offset z = s − 1 so the two sides of the pole are
// exactly symmetric.
fn ohmic_printed(z: f64, alpha: f64, omega_cut: f64, t: f64) -> f64 {
    let x = omega_cut * t;
    let phase = (z * x.atan()).cos();
    let envelope = (1.0 + x * x).powf(-z / 2.0);
    alpha / 2.0 * (1.0 - phase * gamma_shifted(z) * envelope)
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
// ζ(2), ζ(3), ... ζ(8)
const ZETA: [f64; 7] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_3,
    1.082_323_233_711_138_2,
    1.036_927_755_143_369_9,
    1.017_343_061_984_449_1,
    1.008_349_277_381_922_8,
    1.004_077_356_197_944_3,
];

// Γ(z) as Γ(1 + z)/z, with Γ(1 + z) from its log series for small z.
fn gamma_shifted(z: f64) -> f64 {
    if z.abs() < 1e-2 {
        let mut ln_gamma = -EULER_GAMMA * z;
        let mut power = -z;
        for (k, zeta) in ZETA.iter().enumerate() {
            power *= -z;
            ln_gamma += zeta * power / (k + 2) as f64;
        }
        return ln_gamma.exp() / z;
    }
    libm::tgamma(1.0 + z) / z
}

/// The other grouping of the ohmic expression, with Γ(s−1) factored out of
/// the bracket: `(α/2) Γ(s−1) [1 − cos(...) (1 + ω_cut² t²)^{−(s−1)/2}]`.
/// It vanishes at t = 0; kept for comparison against quadrature.
pub fn kappa_ohmic_gamma_factored(
    s: f64,
    alpha: f64,
    omega_cut: f64,
    t: f64,
) -> Result<f64, RatesError> {
    require_time(t)?;
    if !(s > 0.0) {
        return Err(RatesError::Parameter("ohmic exponent s must be positive"));
    }
    let eval = |z: f64| {
        let x = omega_cut * t;
        alpha / 2.0 * gamma_shifted(z) * (1.0 - (z * x.atan()).cos() * (1.0 + x * x).powf(-z / 2.0))
    };
    if (s - 1.0).abs() < OHMIC_LIMIT_STEP {
        return Ok(0.5 * (eval(-OHMIC_LIMIT_STEP) + eval(OHMIC_LIMIT_STEP)));
    }
    Ok(eval(s - 1.0))
}

/// Finite-temperature (α(t), β(t)) of a single-Lorentzian bath in the
/// low-temperature regime.
pub fn alpha_beta_finite_t_lorentzian(
    ctx: &BathContext,
    t: f64,
) -> Result<(Complex64, Complex64), RatesError> {
    require_time(t)?;
    match ctx.model() {
        SpectralModel::SingleLorentzian { lorentzian, .. } => Ok(lorentzian_alpha_beta(
            lorentzian,
            ctx.delta(),
            ctx.nbar(),
            ctx.inverse_temperature(),
            t,
        )),
        _ => Err(RatesError::WrongModel {
            expected: "single Lorentzian",
        }),
    }
}

/// Closed-form (α(t), β(t)) for any supported context.
pub(crate) fn closed_form_alpha_beta(ctx: &BathContext, t: f64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let nbar = ctx.nbar();
    let beta_t = ctx.inverse_temperature();
    let delta = ctx.delta();
    match ctx.model() {
        SpectralModel::Flat { kappa } => (
            Complex64::new(kappa * nbar / 2.0, 0.0),
            Complex64::new(kappa * (nbar + 1.0) / 2.0, 0.0),
        ),
        SpectralModel::SingleLorentzian { lorentzian, .. } => {
            lorentzian_alpha_beta(lorentzian, delta, nbar, beta_t, t)
        }
        SpectralModel::DoubleLorentzian {
            first,
            second,
            weights,
            ..
        }
        | SpectralModel::BandGapLorentzian {
            first,
            second,
            weights,
            ..
        } => {
            let sign = if matches!(ctx.model(), SpectralModel::BandGapLorentzian { .. }) {
                -1.0
            } else {
                1.0
            };
            let (a1, b1) = lorentzian_alpha_beta(first, delta, nbar, beta_t, t);
            let (a2, b2) = lorentzian_alpha_beta(second, delta, nbar, beta_t, t);
            (
                a1 * weights[0] + a2 * (sign * weights[1]),
                b1 * weights[0] + b2 * (sign * weights[1]),
            )
        }
        SpectralModel::Ohmic {
            s,
            alpha,
            omega_cut,
        } => {
            // Only κ is known in closed form; the frequency shift is taken as zero.
            let kappa = kappa_ohmic(s, alpha, omega_cut, t).unwrap_or(f64::NAN);
            (zero, Complex64::new(kappa / 2.0, 0.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectralModel;
    use approx::assert_relative_eq;

    fn single(alpha_l: f64, gamma: f64, delta: f64, nbar: f64) -> BathContext {
        let model = SpectralModel::SingleLorentzian {
            lorentzian: Lorentzian::new(alpha_l, gamma),
            omega_bc: 1.0 - delta,
        };
        BathContext::new(model, delta, nbar).unwrap()
    }

    fn pair(kind: &str, alpha: f64, delta: f64) -> BathContext {
        let (first, second) = (Lorentzian::new(alpha, 0.1), Lorentzian::new(alpha, 0.01));
        let model = match kind {
            "double" => SpectralModel::DoubleLorentzian {
                first,
                second,
                omega_bc: 1.0 - delta,
                weights: [0.5, 0.5],
            },
            _ => SpectralModel::BandGapLorentzian {
                first,
                second,
                omega_bc: 1.0 - delta,
                weights: [2.0, 1.0],
            },
        };
        BathContext::new(model, delta, 0.0).unwrap()
    }

    #[test]
    fn kappa_vanishes_at_zero_time() {
        for (a, g, d) in [(2.0, 0.1, 0.0), (6.0, 0.1, 1.0), (6.0, 0.01, 5.0)] {
            assert_eq!(
                kappa_single_lorentzian(&single(a, g, d, 0.0), 0.0).unwrap(),
                0.0
            );
        }
        assert_eq!(
            kappa_double_lorentzian(&pair("double", 2.0, 1.0), 0.0).unwrap(),
            0.0
        );
        assert_eq!(
            kappa_bandgap_lorentzian(&pair("band", 2.0, 1.0), 0.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn resonant_single_lorentzian_value() {
        let k = kappa_single_lorentzian(&single(2.0, 0.1, 0.0, 0.0), 10.0).unwrap();
        assert_relative_eq!(k, 2.0 * (1.0 - (-1.0f64).exp()), max_relative = 1e-14);
        assert_relative_eq!(k, 1.264_241_117_657_115, max_relative = 1e-14);
    }

    #[test]
    fn detuned_single_lorentzian_extrema() {
        let ctx = single(6.0, 0.1, 1.0, 0.0);
        let (mut lo, mut hi) = (f64::MAX, f64::MIN);
        for k in 0..=200_000 {
            let v = kappa_single_lorentzian(&ctx, k as f64 * 1e-4).unwrap();
            lo = lo.min(v);
            hi = hi.max(v);
        }
        assert!((0.52..=0.64).contains(&hi), "max {hi}");
        assert!((-0.34..=-0.22).contains(&lo), "min {lo}");
    }

    #[test]
    fn degenerate_double_matches_single() {
        let l = Lorentzian::new(2.0, 0.1);
        let model = SpectralModel::DoubleLorentzian {
            first: l,
            second: l,
            omega_bc: 0.0,
            weights: [0.5, 0.5],
        };
        let dl = BathContext::new(model, 1.0, 0.0).unwrap();
        let sl = single(2.0, 0.1, 1.0, 0.0);
        for k in 0..400 {
            let t = k as f64 * 0.05;
            assert_relative_eq!(
                kappa_double_lorentzian(&dl, t).unwrap(),
                kappa_single_lorentzian(&sl, t).unwrap(),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn complex_beta_reproduces_closed_form_kappa() {
        for (a, g, d) in [
            (2.0, 0.1, 0.0),
            (6.0, 0.1, 1.0),
            (6.0, 0.01, 5.0),
            (2.0, 0.01, -2.0),
        ] {
            let l = Lorentzian::new(a, g);
            for k in 0..100 {
                let t = k as f64 * 0.2;
                let (alpha, beta) = lorentzian_alpha_beta(l, d, 0.0, 0.0, t);
                assert_eq!(alpha, Complex64::new(0.0, 0.0));
                assert_relative_eq!(2.0 * beta.re, lorentzian_kappa(l, d, t), epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn ohmic_face_value_at_zero_time() {
        // Γ(2) = 1 so the super-ohmic rate starts at zero; other exponents do not.
        assert_relative_eq!(libm::tgamma(2.0), 1.0, epsilon = 1e-15);
        assert_eq!(kappa_ohmic(3.0, 1.0, 15.0, 0.0).unwrap(), 0.0);
        let sub = kappa_ohmic(0.5, 0.1, 2.0, 0.0).unwrap();
        assert_relative_eq!(
            sub,
            0.05 * (1.0 + 2.0 * core::f64::consts::PI.sqrt()),
            max_relative = 1e-12
        );
    }

    #[test]
    fn ohmic_long_time_limit() {
        let k = kappa_ohmic(3.0, 1.0, 15.0, 1e4).unwrap();
        assert_relative_eq!(k, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn ohmic_limit_cancels_the_pole() {
        const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
        for t in [0.0, 0.1, 1.0, 3.0] {
            let k = kappa_ohmic(1.0, 0.6, 10.0, t).unwrap();
            let expected = 0.3 * (1.0 + EULER_GAMMA + 0.5 * (1.0 + 100.0 * t * t).ln());
            assert_relative_eq!(k, expected, epsilon = 1e-6);
        }
        let factored = kappa_ohmic_gamma_factored(1.0, 0.6, 10.0, 2.0).unwrap();
        assert_relative_eq!(factored, 0.15 * 401.0f64.ln(), epsilon = 1e-6);
    }

    #[test]
    fn ohmic_rejects_nonpositive_exponent() {
        assert!(matches!(
            kappa_ohmic(0.0, 1.0, 1.0, 1.0),
            Err(RatesError::Parameter(_))
        ));
        assert!(matches!(
            kappa_ohmic(-1.0, 1.0, 1.0, 1.0),
            Err(RatesError::Parameter(_))
        ));
    }

    #[test]
    fn zero_temperature_has_no_alpha() {
        let ctx = single(2.0, 0.1, 0.3, 0.0);
        for k in 0..50 {
            let (alpha, _) = alpha_beta_finite_t_lorentzian(&ctx, k as f64 * 0.4).unwrap();
            assert_eq!(alpha, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn resonant_finite_temperature_rate() {
        // κ(t) = α_L (1 − e^{−Γt}) (N̄ cos(β_T Γ) + 1) at zero detuning.
        for nbar in [0.05, 0.1, 0.3] {
            let ctx = single(2.0, 0.1, 0.0, nbar);
            let beta_t = ctx.inverse_temperature();
            for k in 0..100 {
                let t = k as f64 * 0.2;
                let (_, beta) = alpha_beta_finite_t_lorentzian(&ctx, t).unwrap();
                let expected = 2.0 * (1.0 - (-0.1 * t).exp()) * (nbar * (beta_t * 0.1).cos() + 1.0);
                assert_relative_eq!(2.0 * beta.re, expected, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn closed_forms_reject_wrong_context() {
        let ctx = single(2.0, 0.1, 0.0, 0.0);
        assert!(matches!(
            kappa_double_lorentzian(&ctx, 1.0),
            Err(RatesError::WrongModel { .. })
        ));
        assert!(matches!(
            kappa_single_lorentzian(&single(2.0, 0.1, 0.0, 0.1), 1.0),
            Err(RatesError::RequiresZeroTemperature)
        ));
        assert!(matches!(
            kappa_single_lorentzian(&ctx, -1.0),
            Err(RatesError::NegativeTime(_))
        ));
    }
}
