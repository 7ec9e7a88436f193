//! Executes scenarios and shapes their results into CSV rows.

use cavneg_core::dynamics::{integrate, integrate_lindblad, NegativitySeries, Trajectory};
use cavneg_core::hilbert::{negativity, DIM};
use cavneg_core::nmqj::run_ensemble;
use cavneg_core::rates::{
    alpha_beta_quadrature, average_rate, Coefficients, ConstantCoefficients, QuadratureOptions,
    RateCoefficients,
};
use rayon::prelude::*;

use crate::config::{ModelConfig, ScenarioConfig, SolverConfig};
use crate::error::CliError;

pub fn dynamics_header() -> Vec<String> {
    let mut h = vec!["t".to_owned(), "negativity".to_owned(), "kappa".to_owned()];
    h.extend((1..=DIM).map(|n| format!("rho{n}{n}")));
    h
}

pub const RATES_HEADER: [&str; 6] = ["t", "kappa", "re_alpha", "im_alpha", "re_beta", "im_beta"];

pub const COMPARISON_HEADER: [&str; 6] = [
    "t",
    "trace_distance_to_eme",
    "negativity_nmqj",
    "negativity_eme",
    "n_negative_jumps",
    "n_positive_jumps",
];

/// A finished dynamics run.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub series: NegativitySeries,
    /// Mean κ over the whole run.
    pub average_kappa: f64,
}

impl Outcome {
    pub fn rows(&self) -> Vec<Vec<f64>> {
        let s = &self.series;
        (0..s.times.len())
            .map(|i| {
                let mut row = vec![s.times[i], s.negativity[i], s.kappa[i]];
                row.extend_from_slice(&s.populations[i]);
                row
            })
            .collect()
    }
}

fn finish(
    config: &ScenarioConfig,
    trajectory: &Trajectory,
    coefficients: &dyn Coefficients,
) -> Outcome {
    let series =
        NegativitySeries::from_trajectory(trajectory, coefficients, config.outputs.threshold);
    let t_end = trajectory.times.last().copied().unwrap_or(0.0);
    let average_kappa = if t_end > 0.0 {
        average_rate(|t| coefficients.kappa(t), 0.0, t_end)
    } else {
        0.0
    };
    Outcome {
        series,
        average_kappa,
    }
}

/// Runs the configured solver.
pub fn simulate(config: &ScenarioConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let evolution = config.evolution();
    match config.solver {
        SolverConfig::Eme => {
            let c = RateCoefficients::new(config.bath_context()?)?;
            Ok(finish(config, &integrate(&evolution, &c)?, &c))
        }
        SolverConfig::Lindblad => {
            let ModelConfig::Flat { kappa } = config.bath.model else {
                return Err(CliError::Config(
                    "solver lindblad requires a flat bath".into(),
                ));
            };
            let trajectory = integrate_lindblad(&evolution, kappa, config.bath.nbar)?;
            Ok(finish(
                config,
                &trajectory,
                &ConstantCoefficients::markovian(kappa, config.bath.nbar),
            ))
        }
        SolverConfig::Nmqj { n_traj, seed } => {
            let c = RateCoefficients::new(config.bath_context()?)?;
            let run = run_ensemble(&evolution, &c, n_traj, seed)?;
            if run.max_probability > 0.1 {
                log::warn!(
                    "{}: jump probability reached {} per step",
                    config.name,
                    run.max_probability
                );
            }
            Ok(finish(
                config,
                &Trajectory {
                    times: run.times,
                    states: run.states,
                },
                &c,
            ))
        }
    }
}

/// Sample times of the configured grid.
pub fn sample_times(config: &ScenarioConfig) -> Vec<f64> {
    let evolution = config.evolution();
    let steps = evolution.steps();
    let every = evolution.sample_every;
    let mut times: Vec<f64> = (0..=steps)
        .step_by(every)
        .map(|k| k as f64 * evolution.dt)
        .collect();
    if steps % every != 0 {
        times.push(steps as f64 * evolution.dt);
    }
    times
}

/// Tabulates κ, α and β on the sample grid, either from the closed forms the
/// solver uses or by direct quadrature over the spectral density.
pub fn rates_rows(config: &ScenarioConfig, quadrature: bool) -> Result<Vec<Vec<f64>>, CliError> {
    config.validate()?;
    let ctx = config.bath_context()?;
    let times = sample_times(config);
    let row = |t: f64, alpha: cavneg_core::Complex64, beta: cavneg_core::Complex64| {
        vec![t, 2.0 * beta.re, alpha.re, alpha.im, beta.re, beta.im]
    };
    if quadrature {
        let options = if ctx.model().is_lorentzian() {
            QuadratureOptions::closed_form_convention()
        } else {
            QuadratureOptions::default()
        };
        times
            .par_iter()
            .map(|&t| {
                let (a, b) = alpha_beta_quadrature(&ctx, t, &options)?;
                Ok(row(t, a, b))
            })
            .collect()
    } else {
        let c = RateCoefficients::new(ctx)?;
        Ok(times
            .iter()
            .map(|&t| {
                let (a, b) = c.alpha_beta(t);
                row(t, a, b)
            })
            .collect())
    }
}

/// Jump ensemble against the master equation on the same grid.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub rows: Vec<Vec<f64>>,
    pub max_trace_distance: f64,
    pub n_traj: usize,
}

pub fn compare_nmqj(
    config: &ScenarioConfig,
    n_traj: usize,
    seed: u64,
) -> Result<Comparison, CliError> {
    let mut checked = config.clone();
    checked.solver = SolverConfig::Nmqj { n_traj, seed };
    checked.validate()?;
    let evolution = checked.evolution();
    let c = RateCoefficients::new(checked.bath_context()?)?;
    let run = run_ensemble(&evolution, &c, n_traj, seed)?;
    let exact = integrate(&evolution, &c)?;
    let mut max_trace_distance = 0.0f64;
    let rows = (0..run.times.len())
        .map(|i| {
            let d = run.states[i].trace_distance(&exact.states[i]);
            max_trace_distance = max_trace_distance.max(d);
            vec![
                run.times[i],
                d,
                negativity(&run.states[i]),
                negativity(&exact.states[i]),
                run.negative_jumps[i] as f64,
                run.positive_jumps[i] as f64,
            ]
        })
        .collect();
    Ok(Comparison {
        rows,
        max_trace_distance,
        n_traj,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config_str;
    use crate::preset::expand;

    fn config(model: &str, extra: &str) -> ScenarioConfig {
        parse_config_str(&format!(
            r#"{{"initial_state": "W", "bath": {{"model": {model}{extra}}}, "grid": {{"t_end": 2, "sample_every": 100}}}}"#
        ))
        .unwrap()
    }

    #[test]
    fn lindblad_and_eme_agree_on_a_flat_bath() {
        let mut c = config(r#"{"kind": "flat", "kappa": 1}"#, r#", "nbar": 0.3"#);
        let eme = simulate(&c).unwrap();
        c.solver = SolverConfig::Lindblad;
        let lindblad = simulate(&c).unwrap();
        for (a, b) in eme.rows().iter().zip(lindblad.rows()) {
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-10);
            }
        }
        assert!((eme.average_kappa - 1.3).abs() < 1e-12);
    }

    #[test]
    fn rows_have_the_declared_width() {
        let out = simulate(&config(
            r#"{"kind": "single_lorentzian", "alpha_l": 2, "gamma": 0.1}"#,
            "",
        ))
        .unwrap();
        assert_eq!(out.rows().len(), 21);
        assert!(out
            .rows()
            .iter()
            .all(|r| r.len() == dynamics_header().len()));
        assert_eq!(dynamics_header()[3], "rho11");
        assert_eq!(dynamics_header()[10], "rho88");
    }

    #[test]
    fn quadrature_table_tracks_closed_forms() {
        let c = config(
            r#"{"kind": "single_lorentzian", "alpha_l": 6, "gamma": 0.1}"#,
            r#", "delta": 1"#,
        );
        let closed = rates_rows(&c, false).unwrap();
        let numeric = rates_rows(&c, true).unwrap();
        for (a, b) in closed.iter().zip(&numeric) {
            assert!((a[1] - b[1]).abs() < 1e-6, "{a:?} {b:?}");
        }
    }

    #[test]
    fn sample_grid_includes_the_end() {
        let mut c = config(r#"{"kind": "flat", "kappa": 1}"#, "");
        c.grid.sample_every = 300;
        let times = sample_times(&c);
        assert_eq!(times.len(), 8);
        assert_eq!(*times.last().unwrap(), 2.0);
        assert_eq!(simulate(&c).unwrap().series.times, times);
    }

    #[test]
    fn small_comparison_runs() {
        let mut c = expand("fig4").unwrap().remove(0);
        c.grid.t_end = 1.0;
        let cmp = compare_nmqj(&c, 200, 1).unwrap();
        assert_eq!(cmp.rows.len(), 101);
        assert!(cmp.max_trace_distance < 0.3);
        let mut thermal = expand("fig8").unwrap().remove(1);
        thermal.grid.t_end = 1.0;
        assert_eq!(compare_nmqj(&thermal, 10, 1).unwrap_err().exit_code(), 2);
    }
}
