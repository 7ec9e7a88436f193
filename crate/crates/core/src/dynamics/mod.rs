//! Deterministic propagation of the exact master equation
//!
//! ```text
//! ρ′ = Σᵢ α (aᵢ†ρaᵢ − ρaᵢaᵢ†) + α* (aᵢ†ρaᵢ − aᵢaᵢ†ρ)
//!        + β (aᵢρaᵢ† − aᵢ†aᵢρ) + β* (aᵢρaᵢ† − ρaᵢ†aᵢ)
//!      − i [ξ₁₂(a₁†a₂ + a₂†a₁) + ξ₂₃(a₂†a₃ + a₃†a₂), ρ]
//! ```
//!
//! in the interaction picture, with the three baths sharing α(t) and β(t).

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::hilbert::{
    annihilation, initial_state, negativity_report, occupation, DensityMatrix, InitialState,
    Operator, DIM, LOWER,
};
use crate::rates::{Coefficients, RateTable, RatesError};

mod elementwise;
pub use elementwise::rhs_elementwise;

/// Largest trace correction applied at a sample before integration is
/// declared unstable.
pub const TRACE_TOLERANCE: f64 = 1e-6;
/// Largest Hermiticity defect tolerated at a sample.
pub const HERMITICITY_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_THRESHOLD: f64 = 1e-2;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error("invalid evolution config: {0}")]
    Config(&'static str),
    #[error(
        "integration unstable at t = {t} (trace drift {trace_drift:e}, Hermiticity defect {hermiticity:e}); use a smaller dt"
    )]
    Unstable {
        t: f64,
        trace_drift: f64,
        hermiticity: f64,
    },
    #[error(transparent)]
    Rates(#[from] RatesError),
}

/// Starting point of an evolution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Initial {
    State(InitialState),
    Matrix(DensityMatrix),
}

impl Initial {
    pub fn density_matrix(&self) -> DensityMatrix {
        match self {
            Self::State(kind) => initial_state(*kind),
            Self::Matrix(rho) => *rho,
        }
    }
}

impl From<InitialState> for Initial {
    fn from(kind: InitialState) -> Self {
        Self::State(kind)
    }
}

/// Photon hopping strengths between neighbouring cavities.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Hopping {
    pub xi12: f64,
    pub xi23: f64,
}

impl Hopping {
    pub fn is_zero(&self) -> bool {
        self.xi12 == 0.0 && self.xi23 == 0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolutionConfig {
    pub initial: Initial,
    pub hopping: Hopping,
    pub t_end: f64,
    pub dt: f64,
    /// Keep every n-th step.
    pub sample_every: usize,
    pub negativity_threshold: f64,
}

impl EvolutionConfig {
    pub fn new(initial: impl Into<Initial>, t_end: f64) -> Self {
        Self {
            initial: initial.into(),
            hopping: Hopping::default(),
            t_end,
            dt: DEFAULT_DT,
            sample_every: 10,
            negativity_threshold: DEFAULT_THRESHOLD,
        }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_sample_every(mut self, n: usize) -> Self {
        self.sample_every = n;
        self
    }

    pub fn with_hopping(mut self, xi12: f64, xi23: f64) -> Self {
        self.hopping = Hopping { xi12, xi23 };
        self
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.negativity_threshold = threshold;
        self
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(DynamicsError::Config("dt must be positive"));
        }
        if !(self.t_end >= self.dt) || !self.t_end.is_finite() {
            return Err(DynamicsError::Config(
                "t_end must be finite and at least dt",
            ));
        }
        if self.sample_every == 0 {
            return Err(DynamicsError::Config("sample_every must be at least 1"));
        }
        if !self.hopping.xi12.is_finite() || !self.hopping.xi23.is_finite() {
            return Err(DynamicsError::Config("hopping strengths must be finite"));
        }
        if !(self.negativity_threshold >= 0.0) {
            return Err(DynamicsError::Config(
                "negativity threshold must be non-negative",
            ));
        }
        Ok(())
    }

    /// Number of integrator steps.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    /// Coefficients tabulated at half the step, covering the whole run.
    pub fn rate_table<C: Coefficients + ?Sized>(
        &self,
        source: &C,
    ) -> Result<RateTable, DynamicsError> {
        Ok(RateTable::tabulate(
            source,
            self.steps() as f64 * self.dt,
            0.5 * self.dt,
        )?)
    }
}

/// Derivative of ρ for coefficients (α, β) shared by all baths.
pub fn rhs_superoperator(
    rho: &Operator,
    alpha: Complex64,
    beta: Complex64,
    xi12: f64,
    xi23: f64,
) -> Operator {
    let mut out = Operator::zero();
    let m = &rho.0;
    let two_re_a = 2.0 * alpha.re;
    let two_re_b = 2.0 * beta.re;
    for c in 0..3 {
        let lower = &LOWER[c];
        for j in 0..DIM {
            let (nj, lj) = (occupation(c, j), lower[j]);
            for k in 0..DIM {
                let (nk, lk) = (occupation(c, k), lower[k]);
                let mut v = m[j][k]
                    * -(alpha * (1.0 - nk)
                        + alpha.conj() * (1.0 - nj)
                        + beta * nj
                        + beta.conj() * nk);
                // a†ρa: both states raised from their lowered partners
                if let (Some(lj), Some(lk)) = (lj, lk) {
                    v += m[lj][lk] * two_re_a;
                    // aρa†: this element feeds the lowered pair
                    out.0[lj][lk] += m[j][k] * two_re_b;
                }
                out.0[j][k] += v;
            }
        }
    }
    if xi12 != 0.0 || xi23 != 0.0 {
        let h = hopping_hamiltonian(xi12, xi23);
        let i = Complex64::i();
        for j in 0..DIM {
            for k in 0..DIM {
                let mut acc = Complex64::new(0.0, 0.0);
                for l in 0..DIM {
                    if h[j][l] != 0.0 {
                        acc += m[l][k] * h[j][l];
                    }
                    if h[l][k] != 0.0 {
                        acc -= m[j][l] * h[l][k];
                    }
                }
                out.0[j][k] -= i * acc;
            }
        }
    }
    out
}

/// Real hopping Hamiltonian `ξ₁₂(a₁†a₂ + h.c.) + ξ₂₃(a₂†a₃ + h.c.)`.
pub fn hopping_hamiltonian(xi12: f64, xi23: f64) -> [[f64; DIM]; DIM] {
    let mut h = [[0.0; DIM]; DIM];
    // a_p† a_q |n⟩: move the photon of cavity q into an empty cavity p.
    for (p, q, xi) in [(0, 1, xi12), (1, 0, xi12), (1, 2, xi23), (2, 1, xi23)] {
        for n in 0..DIM {
            if let Some(m) = LOWER[q][n] {
                if occupation(p, m) == 0.0 {
                    let target = (0..DIM)
                        .find(|&t| LOWER[p][t] == Some(m))
                        .expect("raised state exists");
                    h[target][n] += xi;
                }
            }
        }
    }
    h
}

/// Lindblad form of the flat-bath limit, built from dense operator products:
/// `Σᵢ κ(N̄+1) D[aᵢ]ρ + κN̄ D[aᵢ†]ρ` with `D[L]ρ = LρL† − ½{L†L, ρ}`.
pub fn lindblad_markovian_rhs(rho: &Operator, kappa: f64, nbar: f64) -> Operator {
    let dissipator = |l: &Operator| {
        let ld = l.dagger();
        let ldl = ld * *l;
        *l * *rho * ld - (ldl * *rho + *rho * ldl).scale(Complex64::new(0.5, 0.0))
    };
    let mut out = Operator::zero();
    for c in 1..=3 {
        let a = annihilation(c).expect("valid cavity");
        out = out + dissipator(&a).scale(Complex64::new(kappa * (nbar + 1.0), 0.0));
        out = out + dissipator(&a.dagger()).scale(Complex64::new(kappa * nbar, 0.0));
    }
    out
}

/// Sampled solution of an evolution.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

fn axpy(base: &Operator, k: &Operator, h: f64) -> Operator {
    Operator::from_fn(|i, j| base.0[i][j] + k.0[i][j] * h)
}

/// Fixed-step RK4. The coefficient source is sampled at t, t + dt/2 and
/// t + dt of every step.
pub fn integrate<C: Coefficients + ?Sized>(
    config: &EvolutionConfig,
    coefficients: &C,
) -> Result<Trajectory, DynamicsError> {
    let Hopping { xi12, xi23 } = config.hopping;
    integrate_rhs(config, |rho, t| {
        let (a, b) = coefficients.alpha_beta(t);
        rhs_superoperator(rho, a, b, xi12, xi23)
    })
}

/// RK4 on the Lindblad equation of a flat bath with decay rate `kappa`, plus
/// the configured hopping.
pub fn integrate_lindblad(
    config: &EvolutionConfig,
    kappa: f64,
    nbar: f64,
) -> Result<Trajectory, DynamicsError> {
    if !(kappa >= 0.0) || !(nbar >= 0.0) {
        return Err(DynamicsError::Config(
            "Lindblad rate and occupation must be non-negative",
        ));
    }
    let Hopping { xi12, xi23 } = config.hopping;
    let zero = Complex64::new(0.0, 0.0);
    integrate_rhs(config, |rho, _| {
        let hopping = rhs_superoperator(rho, zero, zero, xi12, xi23);
        lindblad_markovian_rhs(rho, kappa, nbar) + hopping
    })
}

fn integrate_rhs(
    config: &EvolutionConfig,
    rhs: impl Fn(&Operator, f64) -> Operator,
) -> Result<Trajectory, DynamicsError> {
    config.validate()?;
    let dt = config.dt;
    let steps = config.steps();
    let mut rho = config.initial.density_matrix().0;
    let mut out = Trajectory::default();
    out.times.push(0.0);
    out.states.push(DensityMatrix(rho));
    for step in 0..steps {
        let t = step as f64 * dt;
        let k1 = rhs(&rho, t);
        let k2 = rhs(&axpy(&rho, &k1, 0.5 * dt), t + 0.5 * dt);
        let k3 = rhs(&axpy(&rho, &k2, 0.5 * dt), t + 0.5 * dt);
        let k4 = rhs(&axpy(&rho, &k3, dt), t + dt);
        rho = Operator::from_fn(|i, j| {
            rho.0[i][j]
                + (k1.0[i][j] + 2.0 * k2.0[i][j] + 2.0 * k3.0[i][j] + k4.0[i][j]) * (dt / 6.0)
        });
        if (step + 1) % config.sample_every == 0 || step + 1 == steps {
            let t_next = (step + 1) as f64 * dt;
            let trace = rho.trace();
            let trace_drift = (trace - 1.0).norm();
            let hermiticity = rho.hermiticity_defect();
            if trace_drift > TRACE_TOLERANCE
                || hermiticity > HERMITICITY_TOLERANCE
                || !trace.re.is_finite()
            {
                return Err(DynamicsError::Unstable {
                    t: t_next,
                    trace_drift,
                    hermiticity,
                });
            }
            rho = rho.scale(Complex64::new(1.0 / trace.re, 0.0));
            out.times.push(t_next);
            out.states.push(DensityMatrix(rho));
        }
    }
    Ok(out)
}

/// Negativity and driving rate at every sample of an evolution.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct NegativitySeries {
    pub times: Vec<f64>,
    pub negativity: Vec<f64>,
    pub kappa: Vec<f64>,
    /// Diagonal of ρ at each sample.
    pub populations: Vec<[f64; DIM]>,
    /// First sample time with negativity below the threshold.
    pub death_time: Option<f64>,
    /// Largest number of negative eigenvalues of ρ^{T₁} seen.
    pub max_negative_eigenvalues: usize,
}

impl NegativitySeries {
    pub fn from_trajectory<C: Coefficients + ?Sized>(
        trajectory: &Trajectory,
        coefficients: &C,
        threshold: f64,
    ) -> Self {
        let mut series = Self::default();
        for (&t, rho) in trajectory.times.iter().zip(&trajectory.states) {
            let report = negativity_report(rho);
            if series.death_time.is_none() && report.negativity < threshold {
                series.death_time = Some(t);
            }
            series.max_negative_eigenvalues =
                series.max_negative_eigenvalues.max(report.negative_count);
            series.times.push(t);
            series.negativity.push(report.negativity);
            series.kappa.push(coefficients.kappa(t));
            series
                .populations
                .push(core::array::from_fn(|n| rho.population(n)));
        }
        if series.max_negative_eigenvalues > 1 {
            log::warn!(
                "partial transpose had up to {} negative eigenvalues",
                series.max_negative_eigenvalues
            );
        }
        series
    }

    /// Negativity at the sample closest to `t`.
    pub fn at(&self, t: f64) -> Option<f64> {
        let idx = self
            .times
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))?
            .0;
        Some(self.negativity[idx])
    }
}

/// Integrates and evaluates the negativity at every sample.
pub fn negativity_series<C: Coefficients + ?Sized>(
    config: &EvolutionConfig,
    coefficients: &C,
) -> Result<NegativitySeries, DynamicsError> {
    let trajectory = integrate(config, coefficients)?;
    Ok(NegativitySeries::from_trajectory(
        &trajectory,
        coefficients,
        config.negativity_threshold,
    ))
}
