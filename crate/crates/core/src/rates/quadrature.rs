//! Direct numerical evaluation of the coefficient integrals
//!
//! ```text
//! α(t) = ∫₀ᵗ dt₁ ∫ dω J(ω) N̄(ω)       e^{i(ω_c − ω)(t − t₁)}
//! β(t) = ∫₀ᵗ dt₁ ∫ dω J(ω) (N̄(ω) + 1) e^{i(ω_c − ω)(t − t₁)}
//! ```
//!
//! The time integral is done analytically, which leaves the kernel
//! `(e^{ixt} − 1)/(ix)` with `x = ω_c − ω`. The frequency integral uses
//! adaptive Gauss–Kronrod (7/15) with a global error budget.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{BathContext, RatesError};
use crate::spectral::{LorentzianForm, SpectralModel};
use crate::OMEGA_C;

/// Frequency range of the ω integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FrequencyDomain {
    /// ω ∈ [0, ∞), the physical range of the integrals.
    #[default]
    PositiveAxis,
    /// ω ∈ (−∞, ∞). Lorentzian closed forms are full-line integrals, so this
    /// is the domain on which they can be checked exactly.
    FullLine,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureOptions {
    pub domain: FrequencyDomain,
    pub form: LorentzianForm,
    /// Target absolute error of each of Re/Im α and β.
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Lower frequency bound for the thermal part. The Planck occupation
    /// grows like 1/ω, so any density with J(0) > 0 makes the thermal
    /// integral diverge logarithmically unless it is cut off.
    pub infrared_cutoff: Option<f64>,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            domain: FrequencyDomain::PositiveAxis,
            form: LorentzianForm::AsPrinted,
            abs_tol: 1e-8,
            max_subdivisions: 200_000,
            infrared_cutoff: None,
        }
    }
}

impl QuadratureOptions {
    /// Full-line integration of the rate-consistent Lorentzian profile; the
    /// setting under which the closed-form Lorentzian rates are exact.
    pub fn closed_form_convention() -> Self {
        Self {
            domain: FrequencyDomain::FullLine,
            form: LorentzianForm::RateConsistent,
            ..Self::default()
        }
    }
}

/// `(e^{ixt} − 1)/(ix)`, stable through x = 0.
pub fn kernel(x: f64, t: f64) -> Complex64 {
    let half = 0.5 * x * t;
    let sinc = |z: f64| {
        if z.abs() < 1e-8 {
            1.0 - z * z / 6.0
        } else {
            z.sin() / z
        }
    };
    let s = sinc(half);
    // Re = sin(xt)/x = t sinc(xt), Im = (1 − cos xt)/x = (x t²/2) sinc²(xt/2)
    Complex64::new(t * sinc(x * t), 0.5 * x * t * t * s * s)
}

/// (α(t), β(t)) by direct quadrature.
pub fn alpha_beta_quadrature(
    ctx: &BathContext,
    t: f64,
    options: &QuadratureOptions,
) -> Result<(Complex64, Complex64), RatesError> {
    if !(t >= 0.0) {
        return Err(RatesError::NegativeTime(t));
    }
    let zero = Complex64::new(0.0, 0.0);
    if t == 0.0 {
        return Ok((zero, zero));
    }
    let model = ctx.model();
    let nbar = ctx.nbar();
    let thermal = nbar > 0.0;
    if thermal && density_at_origin(&model, options) > 0.0 && options.infrared_cutoff.is_none() {
        return Err(RatesError::ThermalDivergence);
    }

    let vacuum = match model {
        SpectralModel::Flat { kappa } => flat_vacuum(kappa, t, options)?,
        _ => {
            let (lo, hi, breaks) = integration_range(ctx, t, options);
            let f = |w: f64| {
                let k = kernel(OMEGA_C - w, t) * model.density(w, options.form);
                [k.re, k.im]
            };
            let [re, im] = integrate(&f, &breaks_within(lo, hi, &breaks, t), options)?;
            Complex64::new(re, im)
        }
    };
    if !thermal {
        return Ok((zero, vacuum));
    }

    let cutoff = options.infrared_cutoff.unwrap_or(0.0).max(0.0);
    let beta_t = ctx.inverse_temperature();
    let (_, hi, breaks) = integration_range(ctx, t, options);
    // The Planck weight cuts the thermal part off at a few thermal energies.
    let hi = hi.min(cutoff + 60.0 / beta_t).max(cutoff + 1.0);
    let f = |w: f64| {
        let occupation = 1.0 / (beta_t * w).exp_m1();
        let k = kernel(OMEGA_C - w, t) * (model.density(w, options.form) * occupation);
        [k.re, k.im]
    };
    let mut points = breaks;
    let mut scale = cutoff.max(1e-12);
    while scale < hi {
        points.push(scale);
        scale *= 4.0;
    }
    let [re, im] = integrate(&f, &breaks_within(cutoff, hi, &points, t), options)?;
    let alpha = Complex64::new(re, im);
    Ok((alpha, alpha + vacuum))
}

fn density_at_origin(model: &SpectralModel, options: &QuadratureOptions) -> f64 {
    match model {
        SpectralModel::Ohmic { .. } => 0.0,
        _ => model.density(0.0, options.form),
    }
}

// Flat bath: the real part is κ/2π ∫ sin(xt)/x, which is κ/2 on the full line
// and κ/2π (π/2 + Si(t)) on the positive axis. The imaginary part diverges
// logarithmically and is dropped as a constant frequency shift.
fn flat_vacuum(kappa: f64, t: f64, options: &QuadratureOptions) -> Result<Complex64, RatesError> {
    let re = match options.domain {
        FrequencyDomain::FullLine => kappa / 2.0,
        FrequencyDomain::PositiveAxis => {
            kappa / (2.0 * PI) * (PI / 2.0 + sine_integral(OMEGA_C * t, options)?)
        }
    };
    Ok(Complex64::new(re, 0.0))
}

/// Si(x) = ∫₀ˣ sin(u)/u du.
pub fn sine_integral(x: f64, options: &QuadratureOptions) -> Result<f64, RatesError> {
    let f = |u: f64| [kernel(u, 1.0).re];
    let [v] = integrate(&f, &breaks_within(0.0, x.abs(), &[], 1.0), options)?;
    Ok(v.copysign(x))
}

// Returns the range and a set of breakpoints graded around the features of J.
fn integration_range(
    ctx: &BathContext,
    t: f64,
    options: &QuadratureOptions,
) -> (f64, f64, Vec<f64>) {
    let mut breaks = Vec::new();
    breaks.push(OMEGA_C);
    match ctx.model() {
        SpectralModel::Ohmic { s, omega_cut, .. } => {
            let hi = omega_cut * (s + 60.0);
            let mut w = omega_cut / 64.0;
            while w < hi {
                breaks.push(w);
                w *= 2.0;
            }
            (0.0, hi, breaks)
        }
        model => {
            let (amplitude, widest, narrowest) = lorentzian_scales(&model);
            let centre = model.bath_frequency().unwrap_or(OMEGA_C);
            let offset = (OMEGA_C - centre).abs();
            // Truncating symmetrically about the centre leaves a tail of order
            // A (1/t + |offset| + 1) / Ω³, the odd leading terms cancelling.
            let tail_budget = 0.1 * options.abs_tol;
            let from_tail = (amplitude * (1.0 / t + offset + 1.0) / tail_budget).cbrt();
            let reach = from_tail.max(200.0 * widest).max(20.0 * (offset + 1.0));
            let mut width = narrowest;
            breaks.push(centre);
            while width < reach {
                breaks.push(centre - width);
                breaks.push(centre + width);
                width *= 2.0;
            }
            let lo = match options.domain {
                FrequencyDomain::FullLine => centre - reach,
                FrequencyDomain::PositiveAxis => 0.0,
            };
            (lo, centre + reach, breaks)
        }
    }
}

// (Σ |w| α_L Γ²/2π, widest Γ, narrowest Γ)
fn lorentzian_scales(model: &SpectralModel) -> (f64, f64, f64) {
    let amp = |l: &crate::spectral::Lorentzian, w: f64| {
        w.abs() * l.alpha_l.abs() * l.gamma * l.gamma / (2.0 * PI)
    };
    match model {
        SpectralModel::SingleLorentzian { lorentzian, .. } => {
            (amp(lorentzian, 1.0), lorentzian.gamma, lorentzian.gamma)
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
        } => (
            amp(first, weights[0]) + amp(second, weights[1]),
            first.gamma.max(second.gamma),
            first.gamma.min(second.gamma),
        ),
        _ => (0.0, 1.0, 1.0),
    }
}

// Sorted panel edges within [lo, hi], no panel wider than the kernel's half
// period so that the Kronrod error estimate sees every oscillation.
fn breaks_within(lo: f64, hi: f64, breaks: &[f64], t: f64) -> Vec<f64> {
    let mut edges: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&b| b > lo && b < hi)
        .collect();
    edges.push(lo);
    edges.push(hi);
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    edges.dedup();
    let max_width = PI / t.max(1e-3);
    let mut out = Vec::with_capacity(edges.len());
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let pieces = ((b - a) / max_width).ceil().max(1.0) as usize;
        for k in 0..pieces {
            out.push(a + (b - a) * k as f64 / pieces as f64);
        }
    }
    out.push(*edges.last().unwrap_or(&hi));
    out
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639,
    0.949_107_912_342_758_525,
    0.864_864_423_359_769_073,
    0.741_531_185_599_394_440,
    0.586_087_235_467_691_130,
    0.405_845_151_377_397_167,
    0.207_784_955_007_898_468,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_553,
    0.104_790_010_322_250_184,
    0.140_653_259_715_525_919,
    0.169_004_726_639_267_903,
    0.190_350_578_064_785_410,
    0.204_432_940_075_298_892,
    0.209_482_141_084_727_828,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693,
    0.279_705_391_489_276_668,
    0.381_830_050_505_118_945,
    0.417_959_183_673_469_388,
];

struct Panel<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: f64,
}

impl<const N: usize> PartialEq for Panel<N> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<const N: usize> Eq for Panel<N> {}
impl<const N: usize> PartialOrd for Panel<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Panel<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

fn kronrod<const N: usize>(f: &impl Fn(f64) -> [f64; N], a: f64, b: f64) -> Panel<N> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut k = [0.0; N];
    let mut g = [0.0; N];
    let fc = f(centre);
    for n in 0..N {
        k[n] = WGK[7] * fc[n];
        g[n] = WG[3] * fc[n];
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        let (l, r) = (f(centre - dx), f(centre + dx));
        for n in 0..N {
            let pair = l[n] + r[n];
            k[n] += WGK[j] * pair;
            if j % 2 == 1 {
                g[n] += WG[j / 2] * pair;
            }
        }
    }
    let mut error: f64 = 0.0;
    for n in 0..N {
        k[n] *= half;
        g[n] *= half;
        error = error.max((k[n] - g[n]).abs());
    }
    Panel {
        a,
        b,
        value: k,
        error,
    }
}

/// Adaptive Gauss–Kronrod over consecutive panels `edges[i]..edges[i+1]`,
/// bisecting the panel with the largest error until the summed error drops
/// below `abs_tol`.
pub(crate) fn integrate<const N: usize>(
    f: &impl Fn(f64) -> [f64; N],
    edges: &[f64],
    options: &QuadratureOptions,
) -> Result<[f64; N], RatesError> {
    let mut heap: BinaryHeap<Panel<N>> = edges.windows(2).map(|p| kronrod(f, p[0], p[1])).collect();
    let mut subdivisions = 0usize;
    loop {
        let total_error: f64 = heap.iter().map(|p| p.error).sum();
        if total_error <= options.abs_tol {
            break;
        }
        if subdivisions >= options.max_subdivisions {
            return Err(RatesError::QuadratureNotConverged {
                estimate: total_error,
                subdivisions,
            });
        }
        // Re-summing the heap each pass is quadratic; batch the refinement.
        let batch = (heap.len() / 8).max(1);
        for _ in 0..batch {
            let Some(worst) = heap.pop() else { break };
            let mid = 0.5 * (worst.a + worst.b);
            if !(mid > worst.a && mid < worst.b) {
                // Panel at floating-point resolution; nothing more to gain.
                return Err(RatesError::QuadratureNotConverged {
                    estimate: total_error,
                    subdivisions,
                });
            }
            heap.push(kronrod(f, worst.a, mid));
            heap.push(kronrod(f, mid, worst.b));
            subdivisions += 1;
        }
    }
    let mut sum = [0.0; N];
    for panel in heap.iter() {
        for n in 0..N {
            sum[n] += panel.value[n];
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::closed_form::{kappa_ohmic, lorentzian_kappa};
    use crate::spectral::Lorentzian;
    use approx::assert_relative_eq;

    fn single(alpha_l: f64, gamma: f64, delta: f64, nbar: f64) -> BathContext {
        let model = SpectralModel::SingleLorentzian {
            lorentzian: Lorentzian::new(alpha_l, gamma),
            omega_bc: 0.0,
        };
        BathContext::new(model, delta, nbar).unwrap()
    }

    #[test]
    fn kernel_limits() {
        assert_eq!(kernel(0.0, 2.5), Complex64::new(2.5, 0.0));
        let direct =
            |x: f64, t: f64| (Complex64::new(0.0, x * t).exp() - 1.0) / Complex64::new(0.0, x);
        for (x, t) in [(0.3, 2.0), (-4.0, 0.7), (10.0, 10.0)] {
            let k = kernel(x, t);
            let d = direct(x, t);
            assert_relative_eq!(k.re, d.re, epsilon = 1e-12);
            assert_relative_eq!(k.im, d.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn integrates_polynomials_and_oscillations() {
        let opts = QuadratureOptions::default();
        let [v] = integrate(&|x: f64| [x.powi(5) - 3.0 * x], &[0.0, 2.0], &opts).unwrap();
        assert_relative_eq!(v, 64.0 / 6.0 - 6.0, epsilon = 1e-12);
        let [v] = integrate(
            &|x: f64| [(40.0 * x).cos()],
            &breaks_within(0.0, 3.0, &[], 40.0),
            &opts,
        )
        .unwrap();
        assert_relative_eq!(v, (120.0f64).sin() / 40.0, epsilon = 1e-10);
    }

    #[test]
    fn sine_integral_values() {
        let opts = QuadratureOptions {
            abs_tol: 1e-12,
            ..QuadratureOptions::default()
        };
        assert_relative_eq!(
            sine_integral(1.0, &opts).unwrap(),
            0.946_083_070_367_183_0,
            epsilon = 1e-11
        );
        assert_relative_eq!(
            sine_integral(10.0, &opts).unwrap(),
            1.658_347_594_218_874_0,
            epsilon = 1e-11
        );
        assert_relative_eq!(
            sine_integral(-2.0, &opts).unwrap(),
            -1.605_412_976_802_694_8,
            epsilon = 1e-11
        );
    }

    #[test]
    fn empty_time_interval() {
        let (a, b) = alpha_beta_quadrature(
            &single(2.0, 0.1, 0.0, 0.0),
            0.0,
            &QuadratureOptions::default(),
        )
        .unwrap();
        assert_eq!((a, b), (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn resonant_lorentzian_matches_closed_form() {
        let ctx = single(2.0, 0.1, 0.0, 0.0);
        let opts = QuadratureOptions::closed_form_convention();
        for t in [0.5, 1.0, 5.0, 10.0] {
            let (alpha, beta) = alpha_beta_quadrature(&ctx, t, &opts).unwrap();
            assert_eq!(alpha, Complex64::new(0.0, 0.0));
            let exact = lorentzian_kappa(Lorentzian::new(2.0, 0.1), 0.0, t);
            assert!(
                (2.0 * beta.re - exact).abs() < 1e-6,
                "t={t}: {} vs {exact}",
                2.0 * beta.re
            );
        }
    }

    #[test]
    fn printed_profile_is_closed_form_with_rescaled_parameters() {
        // Γ² / (y² + (Γ/2)²) = 4 · (Γ/2)² / (y² + (Γ/2)²)
        let ctx = single(2.0, 0.1, 1.0, 0.0);
        let opts = QuadratureOptions {
            domain: FrequencyDomain::FullLine,
            form: LorentzianForm::AsPrinted,
            ..Default::default()
        };
        for t in [1.0, 7.0] {
            let (_, beta) = alpha_beta_quadrature(&ctx, t, &opts).unwrap();
            let rescaled = lorentzian_kappa(Lorentzian::new(8.0, 0.05), 1.0, t);
            assert!((2.0 * beta.re - rescaled).abs() < 1e-6);
        }
    }

    #[test]
    fn flat_bath_reaches_markov_rate() {
        let ctx = BathContext::new(SpectralModel::Flat { kappa: 0.3 }, 0.0, 0.0).unwrap();
        let opts = QuadratureOptions::default();
        let (_, beta) = alpha_beta_quadrature(&ctx, 400.0, &opts).unwrap();
        assert!((2.0 * beta.re - 0.3).abs() < 1e-3);
        let (_, beta) =
            alpha_beta_quadrature(&ctx, 3.0, &QuadratureOptions::closed_form_convention()).unwrap();
        assert_eq!(2.0 * beta.re, 0.3);
    }

    #[test]
    fn ohmic_long_time_rate() {
        let model = SpectralModel::Ohmic {
            s: 3.0,
            alpha: 1.0,
            omega_cut: 15.0,
        };
        let ctx = BathContext::new(model, 0.0, 0.0).unwrap();
        let (_, beta) = alpha_beta_quadrature(&ctx, 20.0, &QuadratureOptions::default()).unwrap();
        // Long times select the resonant value πJ(ω_c).
        let resonant = PI * model.density(1.0, LorentzianForm::AsPrinted);
        assert!(
            (2.0 * beta.re - 2.0 * resonant).abs() < 0.02,
            "{} vs {}",
            2.0 * beta.re,
            2.0 * resonant
        );
        // The printed closed form instead tends to α/2.
        assert_relative_eq!(
            kappa_ohmic(3.0, 1.0, 15.0, 1e4).unwrap(),
            0.5,
            epsilon = 1e-9
        );
    }

    #[test]
    fn thermal_lorentzian_needs_a_cutoff() {
        let ctx = single(2.0, 0.1, 0.0, 0.1);
        let err = alpha_beta_quadrature(&ctx, 10.0, &QuadratureOptions::default()).unwrap_err();
        assert_eq!(err, RatesError::ThermalDivergence);
        // With a cutoff ε the thermal part grows like ln(1/ε).
        let at = |eps: f64| {
            let opts = QuadratureOptions {
                infrared_cutoff: Some(eps),
                abs_tol: 1e-9,
                ..Default::default()
            };
            alpha_beta_quadrature(&ctx, 10.0, &opts).unwrap().0.re
        };
        let (a, b, c) = (at(1e-3), at(1e-5), at(1e-7));
        assert!((b - a).abs() > 1e-3);
        assert_relative_eq!(c - b, b - a, max_relative = 1e-2);
    }

    #[test]
    fn reports_non_convergence() {
        let model = SpectralModel::Ohmic {
            s: 0.5,
            alpha: 0.1,
            omega_cut: 2.0,
        };
        let ctx = BathContext::new(model, 0.0, 0.0).unwrap();
        let opts = QuadratureOptions {
            abs_tol: 1e-18,
            max_subdivisions: 10,
            ..Default::default()
        };
        let err = alpha_beta_quadrature(&ctx, 5.0, &opts).unwrap_err();
        assert!(
            matches!(err, RatesError::QuadratureNotConverged { estimate, .. } if estimate > 1e-18)
        );
    }
}
