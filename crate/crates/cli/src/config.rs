//! JSON scenario configuration.
//!
//! A minimal document names the initial state, the bath and the time grid:
//!
//! ```json
//! {
//!   "initial_state": "W",
//!   "bath": { "model": { "kind": "single_lorentzian", "alpha_l": 2, "gamma": 0.1 } },
//!   "grid": { "t_end": 10 }
//! }
//! ```
//!
//! Every other field has a default, listed in [`DEFAULTS_HELP`]. Unknown keys
//! are rejected.

use std::fs;
use std::path::{Path, PathBuf};

use cavneg_core::dynamics::{EvolutionConfig, DEFAULT_DT, DEFAULT_THRESHOLD};
use cavneg_core::hilbert::InitialState;
use cavneg_core::rates::BathContext;
use cavneg_core::spectral::{Lorentzian, SpectralModel};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_NAME: &str = "scenario";
pub const DEFAULT_SAMPLE_EVERY: usize = 10;
pub const DEFAULT_TRAJECTORIES: usize = 10_000;

/// Shown under `--help`.
pub const DEFAULTS_HELP: &str = "\
Configuration defaults:
  name                 \"scenario\"
  bath.delta           0 (detuning ω_c − ω_bc, Lorentzian baths only)
  bath.nbar            0 (mean thermal photon number)
  solver               {\"kind\": \"eme\"}; also \"lindblad\" (flat bath only) and
                       {\"kind\": \"nmqj\", \"n_traj\": 10000, \"seed\": 0} (zero temperature, no hopping)
  hopping              {\"xi12\": 0, \"xi23\": 0}
  grid.dt              0.001
  grid.sample_every    10
  outputs.csv_path     <name>.csv, relative paths resolve against the output directory
  outputs.svg_path     none
  outputs.threshold    0.01 (death-time negativity threshold)

Bath models (bath.model.kind): flat {kappa}; single_lorentzian {alpha_l, gamma};
double_lorentzian and band_gap_lorentzian {first, second, weights}, where first
and second are {alpha_l, gamma}; ohmic {s, alpha, omega_cut}.
Units: ħ = 1, frequencies in units of the cavity frequency.

Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O error.
Environment: CAVNEG_OUT_DIR sets the output directory.";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum StateName {
    #[value(name = "W", alias = "w")]
    W,
    #[serde(rename = "GHZ")]
    #[value(name = "GHZ", alias = "ghz")]
    Ghz,
}

impl StateName {
    pub fn label(self) -> &'static str {
        match self {
            StateName::W => "W",
            StateName::Ghz => "GHZ",
        }
    }
}

impl From<StateName> for InitialState {
    fn from(s: StateName) -> Self {
        match s {
            StateName::W => InitialState::W,
            StateName::Ghz => InitialState::Ghz,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LorentzianConfig {
    pub alpha_l: f64,
    pub gamma: f64,
}

impl From<LorentzianConfig> for Lorentzian {
    fn from(l: LorentzianConfig) -> Self {
        Lorentzian::new(l.alpha_l, l.gamma)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    Flat {
        kappa: f64,
    },
    SingleLorentzian {
        alpha_l: f64,
        gamma: f64,
    },
    DoubleLorentzian {
        first: LorentzianConfig,
        second: LorentzianConfig,
        weights: [f64; 2],
    },
    BandGapLorentzian {
        first: LorentzianConfig,
        second: LorentzianConfig,
        weights: [f64; 2],
    },
    Ohmic {
        s: f64,
        alpha: f64,
        omega_cut: f64,
    },
}

impl ModelConfig {
    /// The spectral model with its centre placed according to `delta`.
    pub fn spectral_model(&self, delta: f64) -> SpectralModel {
        let omega_bc = 1.0 - delta;
        match *self {
            ModelConfig::Flat { kappa } => SpectralModel::Flat { kappa },
            ModelConfig::SingleLorentzian { alpha_l, gamma } => SpectralModel::SingleLorentzian {
                lorentzian: Lorentzian::new(alpha_l, gamma),
                omega_bc,
            },
            ModelConfig::DoubleLorentzian {
                first,
                second,
                weights,
            } => SpectralModel::DoubleLorentzian {
                first: first.into(),
                second: second.into(),
                omega_bc,
                weights,
            },
            ModelConfig::BandGapLorentzian {
                first,
                second,
                weights,
            } => SpectralModel::BandGapLorentzian {
                first: first.into(),
                second: second.into(),
                omega_bc,
                weights,
            },
            ModelConfig::Ohmic {
                s,
                alpha,
                omega_cut,
            } => SpectralModel::Ohmic {
                s,
                alpha,
                omega_cut,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathConfig {
    pub model: ModelConfig,
    #[serde(default)]
    pub delta: f64,
    #[serde(default)]
    pub nbar: f64,
}

fn default_trajectories() -> usize {
    DEFAULT_TRAJECTORIES
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SolverConfig {
    #[default]
    Eme,
    Nmqj {
        #[serde(default = "default_trajectories")]
        n_traj: usize,
        #[serde(default)]
        seed: u64,
    },
    Lindblad,
}

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HoppingConfig {
    #[serde(default)]
    pub xi12: f64,
    #[serde(default)]
    pub xi23: f64,
}

fn default_dt() -> f64 {
    DEFAULT_DT
}

fn default_sample_every() -> usize {
    DEFAULT_SAMPLE_EVERY
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub t_end: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_sample_every")]
    pub sample_every: usize,
}

fn default_threshold() -> f64 {
    DEFAULT_THRESHOLD
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg_path: Option<PathBuf>,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            csv_path: None,
            svg_path: None,
            threshold: DEFAULT_THRESHOLD,
        }
    }
}

fn default_name() -> String {
    DEFAULT_NAME.to_owned()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub initial_state: StateName,
    pub bath: BathConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub hopping: HoppingConfig,
    pub grid: GridConfig,
    #[serde(default)]
    pub outputs: OutputConfig,
}

impl ScenarioConfig {
    /// Cross-field checks, including the bath model's own constraints.
    pub fn validate(&self) -> Result<(), CliError> {
        self.bath_context()?;
        self.evolution().validate()?;
        let hopping = self.hopping.xi12 != 0.0 || self.hopping.xi23 != 0.0;
        match self.solver {
            SolverConfig::Eme => {}
            SolverConfig::Nmqj { n_traj, .. } => {
                if self.bath.nbar != 0.0 {
                    return Err(CliError::Config(
                        "solver nmqj requires bath.nbar = 0".into(),
                    ));
                }
                if hopping {
                    return Err(CliError::Config(
                        "solver nmqj does not support hopping".into(),
                    ));
                }
                if n_traj == 0 {
                    return Err(CliError::Config("solver.n_traj must be at least 1".into()));
                }
            }
            SolverConfig::Lindblad => {
                if !matches!(self.bath.model, ModelConfig::Flat { .. }) {
                    return Err(CliError::Config(
                        "solver lindblad requires a flat bath".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn bath_context(&self) -> Result<BathContext, CliError> {
        let model = self.bath.model.spectral_model(self.bath.delta);
        Ok(BathContext::new(model, self.bath.delta, self.bath.nbar)?)
    }

    pub fn evolution(&self) -> EvolutionConfig {
        EvolutionConfig::new(InitialState::from(self.initial_state), self.grid.t_end)
            .with_dt(self.grid.dt)
            .with_sample_every(self.grid.sample_every)
            .with_hopping(self.hopping.xi12, self.hopping.xi23)
            .with_threshold(self.outputs.threshold)
    }

    /// CSV destination under `out_dir`.
    pub fn csv_path(&self, out_dir: &Path) -> PathBuf {
        let file = self
            .outputs
            .csv_path
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("{}.csv", self.name)));
        out_dir.join(file)
    }

    pub fn svg_path(&self, out_dir: &Path) -> Option<PathBuf> {
        self.outputs.svg_path.as_ref().map(|p| out_dir.join(p))
    }
}

/// Parses and validates a configuration document.
pub fn parse_config_str(text: &str) -> Result<ScenarioConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let config: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Config(format!("at `{path}`: {}", e.inner()))
    })?;
    config.validate()?;
    Ok(config)
}

pub fn parse_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "initial_state": "W",
        "bath": { "model": { "kind": "single_lorentzian", "alpha_l": 2, "gamma": 0.1 } },
        "grid": { "t_end": 10 }
    }"#;

    #[test]
    fn minimal_document_takes_defaults() {
        let c = parse_config_str(MINIMAL).unwrap();
        assert_eq!(c.name, DEFAULT_NAME);
        assert_eq!(c.solver, SolverConfig::Eme);
        assert_eq!(c.hopping, HoppingConfig::default());
        assert_eq!(c.grid.dt, DEFAULT_DT);
        assert_eq!(c.grid.sample_every, DEFAULT_SAMPLE_EVERY);
        assert_eq!(c.outputs, OutputConfig::default());
        assert_eq!((c.bath.delta, c.bath.nbar), (0.0, 0.0));
        assert_eq!(
            c.csv_path(Path::new("out")),
            PathBuf::from("out/scenario.csv")
        );
    }

    #[test]
    fn unknown_keys_are_named() {
        let doc = MINIMAL.replace("\"gamma\"", "\"gama\"");
        let err = parse_config_str(&doc).unwrap_err().to_string();
        assert!(err.contains("gama"), "{err}");
        assert!(err.contains("bath.model"), "{err}");

        let doc = MINIMAL.replace("\"t_end\": 10", "\"t_end\": 10, \"step\": 1");
        let err = parse_config_str(&doc).unwrap_err().to_string();
        assert!(err.contains("step") && err.contains("grid"), "{err}");
    }

    #[test]
    fn nmqj_needs_zero_temperature() {
        let doc = MINIMAL
            .replace("\"gamma\": 0.1 }", "\"gamma\": 0.1 }, \"nbar\": 0.1")
            .replace("\"grid\"", "\"solver\": {\"kind\": \"nmqj\"}, \"grid\"");
        let err = parse_config_str(&doc).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("nbar"));
    }

    #[test]
    fn nmqj_defaults() {
        let doc = MINIMAL.replace("\"grid\"", "\"solver\": {\"kind\": \"nmqj\"}, \"grid\"");
        let c = parse_config_str(&doc).unwrap();
        assert_eq!(
            c.solver,
            SolverConfig::Nmqj {
                n_traj: DEFAULT_TRAJECTORIES,
                seed: 0
            }
        );
    }

    #[test]
    fn lindblad_needs_flat_bath() {
        let doc = MINIMAL.replace("\"grid\"", "\"solver\": {\"kind\": \"lindblad\"}, \"grid\"");
        assert!(parse_config_str(&doc).is_err());
    }

    #[test]
    fn invalid_models_and_grids_are_config_errors() {
        let bad_gamma = MINIMAL.replace("\"gamma\": 0.1", "\"gamma\": -1");
        assert_eq!(parse_config_str(&bad_gamma).unwrap_err().exit_code(), 2);
        let bad_grid = MINIMAL.replace("\"t_end\": 10", "\"t_end\": 10, \"dt\": 0");
        assert_eq!(parse_config_str(&bad_grid).unwrap_err().exit_code(), 2);
        let ohmic_detuned = r#"{"initial_state": "GHZ", "grid": {"t_end": 1},
            "bath": {"model": {"kind": "ohmic", "s": 1, "alpha": 0.6, "omega_cut": 10}, "delta": 1}}"#;
        assert!(parse_config_str(ohmic_detuned).is_err());
        assert!(parse_config_str("{").is_err());
    }

    #[test]
    fn round_trips_through_json() {
        let c = parse_config_str(MINIMAL).unwrap();
        let again = parse_config_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(c, again);
    }
}
