//! Named figure presets. Each expands to one scenario per plotted curve.
//!
//! Times are in units of the inverse cavity frequency, except `fig2*` whose
//! flat bath has κ = 1 so that time is in units of 1/κ.

use serde::Serialize;

use crate::config::{
    BathConfig, GridConfig, HoppingConfig, LorentzianConfig, ModelConfig, OutputConfig,
    ScenarioConfig, SolverConfig, StateName, DEFAULT_SAMPLE_EVERY,
};
use crate::error::CliError;
use cavneg_core::dynamics::DEFAULT_DT;

pub const PRESET_IDS: [&str; 9] = [
    "fig2a", "fig2b", "fig2c", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8",
];

/// Thermal occupations of the flat-bath curves in fig2a and fig2b.
pub const FIG2_OCCUPATIONS: [f64; 4] = [0.0, 0.1, 0.5, 1.0];

/// The checked-in expansion of every preset.
pub const MANIFEST: &str = include_str!("../presets/manifest.json");

const NARROW: f64 = 0.1;
const WIDE: f64 = 0.01;

fn scenario(
    name: String,
    state: StateName,
    model: ModelConfig,
    delta: f64,
    nbar: f64,
    t_end: f64,
) -> ScenarioConfig {
    let solver = match model {
        ModelConfig::Flat { .. } => SolverConfig::Lindblad,
        _ => SolverConfig::Eme,
    };
    ScenarioConfig {
        name,
        initial_state: state,
        bath: BathConfig { model, delta, nbar },
        solver,
        hopping: HoppingConfig::default(),
        grid: GridConfig {
            t_end,
            dt: DEFAULT_DT,
            sample_every: DEFAULT_SAMPLE_EVERY,
        },
        outputs: OutputConfig::default(),
    }
}

fn lorentzians(alpha_l: f64) -> [(&'static str, ModelConfig); 3] {
    let first = LorentzianConfig {
        alpha_l,
        gamma: NARROW,
    };
    let second = LorentzianConfig {
        alpha_l,
        gamma: WIDE,
    };
    [
        (
            "single",
            ModelConfig::SingleLorentzian {
                alpha_l,
                gamma: NARROW,
            },
        ),
        (
            "double",
            ModelConfig::DoubleLorentzian {
                first,
                second,
                weights: [0.5, 0.5],
            },
        ),
        (
            "band-gap",
            ModelConfig::BandGapLorentzian {
                first,
                second,
                weights: [2.0, 1.0],
            },
        ),
    ]
}

fn lorentzian_curves(
    id: &str,
    alpha_l: f64,
    delta: f64,
    nbar: f64,
    t_end: f64,
) -> Vec<ScenarioConfig> {
    lorentzians(alpha_l)
        .into_iter()
        .map(|(label, model)| {
            scenario(
                format!("{id}-{label}"),
                StateName::W,
                model,
                delta,
                nbar,
                t_end,
            )
        })
        .collect()
}

fn flat(id: &str, label: &str, state: StateName, nbar: f64, t_end: f64) -> ScenarioConfig {
    scenario(
        format!("{id}-{label}"),
        state,
        ModelConfig::Flat { kappa: 1.0 },
        0.0,
        nbar,
        t_end,
    )
}

/// Expands a preset id into its curves.
pub fn expand(id: &str) -> Result<Vec<ScenarioConfig>, CliError> {
    let curves = match id {
        "fig2a" | "fig2b" => {
            let state = if id == "fig2a" {
                StateName::W
            } else {
                StateName::Ghz
            };
            FIG2_OCCUPATIONS
                .iter()
                .map(|&n| flat(id, &format!("nbar{n}"), state, n, 5.0))
                .collect()
        }
        "fig2c" => {
            let mut c = flat(id, "hopping", StateName::W, 0.0, 5.0);
            c.hopping = HoppingConfig {
                xi12: 5.0,
                xi23: 5.0,
            };
            vec![c]
        }
        "fig3" | "fig8" => {
            let nbar = if id == "fig8" { 0.1 } else { 0.0 };
            let mut curves = vec![flat(id, "markovian", StateName::W, nbar, 10.0)];
            curves.extend(lorentzian_curves(id, 2.0, 0.0, nbar, 10.0));
            curves
        }
        "fig4" => lorentzian_curves(id, 6.0, 1.0, 0.0, 20.0),
        "fig5" => lorentzian_curves(id, 2.0, 1.0, 0.0, 20.0),
        "fig6" => lorentzian_curves(id, 6.0, 5.0, 0.0, 20.0),
        "fig7" => [
            ("sub-ohmic", 0.5, 0.1, 2.0),
            ("ohmic", 1.0, 0.6, 10.0),
            ("super-ohmic", 3.0, 1.0, 15.0),
        ]
        .into_iter()
        .map(|(label, s, alpha, omega_cut)| {
            scenario(
                format!("{id}-{label}"),
                StateName::W,
                ModelConfig::Ohmic {
                    s,
                    alpha,
                    omega_cut,
                },
                0.0,
                0.0,
                12.0,
            )
        })
        .collect(),
        _ => {
            return Err(CliError::Config(format!(
                "unknown preset `{id}`; expected one of {}",
                PRESET_IDS.join(", ")
            )));
        }
    };
    Ok(curves)
}

#[derive(Serialize)]
struct Entry {
    preset: &'static str,
    curves: Vec<ScenarioConfig>,
}

/// Pretty JSON of every expansion, in the layout of [`MANIFEST`].
pub fn render_manifest() -> String {
    let entries: Vec<Entry> = PRESET_IDS
        .iter()
        .map(|&preset| Entry {
            preset,
            curves: expand(preset).expect("known preset"),
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&entries).expect("serialisable");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config_str;

    #[test]
    fn expansion_matches_checked_in_manifest() {
        assert_eq!(render_manifest(), MANIFEST);
    }

    #[test]
    fn every_curve_is_a_valid_config() {
        for id in PRESET_IDS {
            for c in expand(id).unwrap() {
                c.validate().unwrap();
                let again = parse_config_str(&serde_json::to_string(&c).unwrap()).unwrap();
                assert_eq!(again, c);
            }
        }
    }

    #[test]
    fn names_are_unique() {
        let mut names: Vec<String> = PRESET_IDS
            .iter()
            .flat_map(|id| expand(id).unwrap())
            .map(|c| c.name)
            .collect();
        let total = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), total);
    }

    #[test]
    fn unknown_preset_is_a_config_error() {
        assert_eq!(expand("fig9").unwrap_err().exit_code(), 2);
    }
}
