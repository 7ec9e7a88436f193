//! Scenario runner behind the `cavneg` command: JSON configuration, figure
//! presets, and CSV/SVG output.

pub mod config;
pub mod error;
pub mod output;
pub mod preset;
pub mod runner;

pub use config::{parse_config, ScenarioConfig};
pub use error::CliError;
