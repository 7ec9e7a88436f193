use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cavneg::config::{
    parse_config, ScenarioConfig, SolverConfig, StateName, DEFAULTS_HELP, DEFAULT_TRAJECTORIES,
};
use cavneg::output::{write_csv, write_svg, Series};
use cavneg::preset::{expand, PRESET_IDS};
use cavneg::runner::{self, Outcome, COMPARISON_HEADER, RATES_HEADER};
use cavneg::CliError;
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "cavneg", version, about = "Entanglement dynamics of three leaky cavities", after_help = DEFAULTS_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory for CSV and SVG files.
    #[arg(long, global = true, env = "CAVNEG_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
    /// Worker threads for trajectory ensembles and multi-curve presets
    /// (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Log more (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one scenario and write t, negativity, kappa and the populations.
    Simulate {
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        config: PathBuf,
    },
    /// Tabulate kappa, alpha and beta on the scenario's sample grid.
    Rates {
        #[command(flatten)]
        source: Source,
        /// Integrate the spectral density numerically instead of using the
        /// closed forms.
        #[arg(long)]
        quadrature: bool,
    },
    /// Run every curve of a figure preset and plot the negativities.
    #[command(visible_alias = "run")]
    Figure {
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(PRESET_IDS))]
        preset: String,
    },
    /// Compare a jump-trajectory ensemble against the master equation.
    CompareNmqj {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        overrides: Overrides,
        /// Ensemble size (default: the config's n_traj, else 10000).
        #[arg(long)]
        n_traj: Option<usize>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(PRESET_IDS))]
    preset: Option<String>,
}

#[derive(Args)]
struct Overrides {
    /// Initial state, replacing the configured one.
    #[arg(long, value_enum)]
    state: Option<StateName>,
    /// Ensemble seed, replacing the configured one.
    #[arg(long)]
    seed: Option<u64>,
    /// Death-time negativity threshold, replacing the configured one.
    #[arg(long)]
    threshold: Option<f64>,
}

impl Overrides {
    fn apply(&self, config: &mut ScenarioConfig) -> Result<(), CliError> {
        if let Some(state) = self.state {
            config.initial_state = state;
        }
        if let Some(threshold) = self.threshold {
            config.outputs.threshold = threshold;
        }
        if let Some(new_seed) = self.seed {
            if let SolverConfig::Nmqj { seed, .. } = &mut config.solver {
                *seed = new_seed;
            }
        }
        config.validate()
    }
}

fn load(source: &Source) -> Result<Vec<ScenarioConfig>, CliError> {
    match (&source.config, &source.preset) {
        (Some(path), _) => Ok(vec![parse_config(path)?]),
        (None, Some(id)) => expand(id),
        (None, None) => Err(CliError::Config("pass --config or --preset".into())),
    }
}

fn format_death(outcome: &Outcome) -> String {
    outcome
        .series
        .death_time
        .map_or_else(|| "none".to_owned(), |t| format!("{t}"))
}

fn plot_dynamics(path: &Path, title: &str, outcome: &Outcome) -> Result<(), CliError> {
    let s = &outcome.series;
    write_svg(
        path,
        title,
        "t",
        "negativity / kappa",
        &[
            Series {
                label: "negativity",
                x: &s.times,
                y: &s.negativity,
            },
            Series {
                label: "kappa",
                x: &s.times,
                y: &s.kappa,
            },
        ],
    )
}

fn simulate(out_dir: &Path, path: &Path, overrides: &Overrides) -> Result<(), CliError> {
    let mut config = parse_config(path)?;
    overrides.apply(&mut config)?;
    let outcome = runner::simulate(&config)?;
    let csv = config.csv_path(out_dir);
    write_csv(&csv, &runner::dynamics_header(), &outcome.rows())?;
    if let Some(svg) = config.svg_path(out_dir) {
        plot_dynamics(&svg, &config.name, &outcome)?;
    }
    println!("scenario: {}", config.name);
    println!("csv: {}", csv.display());
    println!("death_time: {}", format_death(&outcome));
    println!("average_kappa: {}", outcome.average_kappa);
    Ok(())
}

fn rates(out_dir: &Path, source: &Source, quadrature: bool) -> Result<(), CliError> {
    let header: Vec<String> = RATES_HEADER.iter().map(|s| s.to_string()).collect();
    for config in load(source)? {
        let rows = runner::rates_rows(&config, quadrature)?;
        let path = out_dir.join(format!("{}-rates.csv", config.name));
        write_csv(&path, &header, &rows)?;
        let (lo, hi) = rows.iter().fold((f64::MAX, f64::MIN), |(lo, hi), r| {
            (lo.min(r[1]), hi.max(r[1]))
        });
        println!(
            "{}: kappa in [{lo}, {hi}] -> {}",
            config.name,
            path.display()
        );
    }
    Ok(())
}

fn figure(out_dir: &Path, preset: &str, overrides: &Overrides) -> Result<(), CliError> {
    let mut curves = expand(preset)?;
    for c in &mut curves {
        overrides.apply(c)?;
    }
    let state = curves[0].initial_state.label();
    let outcomes: Vec<Outcome> = curves
        .par_iter()
        .map(runner::simulate)
        .collect::<Result<_, _>>()?;
    for (config, outcome) in curves.iter().zip(&outcomes) {
        let path = out_dir.join(format!("{}-{state}.csv", config.name));
        write_csv(&path, &runner::dynamics_header(), &outcome.rows())?;
        println!(
            "{} {state}: death_time {} average_kappa {} -> {}",
            config.name,
            format_death(outcome),
            outcome.average_kappa,
            path.display()
        );
    }
    let series: Vec<Series<'_>> = curves
        .iter()
        .zip(&outcomes)
        .map(|(c, o)| Series {
            label: &c.name,
            x: &o.series.times,
            y: &o.series.negativity,
        })
        .collect();
    let svg = out_dir.join(format!("{preset}-{state}.svg"));
    write_svg(
        &svg,
        &format!("{preset} ({state})"),
        "t",
        "negativity",
        &series,
    )?;
    println!("plot: {}", svg.display());
    Ok(())
}

fn compare(
    out_dir: &Path,
    source: &Source,
    overrides: &Overrides,
    n_traj: Option<usize>,
) -> Result<(), CliError> {
    let header: Vec<String> = COMPARISON_HEADER.iter().map(|s| s.to_string()).collect();
    let from_preset = source.preset.is_some();
    for mut config in load(source)? {
        if from_preset
            && (config.bath.nbar != 0.0 || config.hopping.xi12 != 0.0 || config.hopping.xi23 != 0.0)
        {
            eprintln!(
                "skipping {}: jump unravelling needs zero temperature and no hopping",
                config.name
            );
            continue;
        }
        if let Some(state) = overrides.state {
            config.initial_state = state;
        }
        let (configured_n, configured_seed) = match config.solver {
            SolverConfig::Nmqj { n_traj, seed } => (n_traj, seed),
            _ => (DEFAULT_TRAJECTORIES, 0),
        };
        let n = n_traj.unwrap_or(configured_n);
        let seed = overrides.seed.unwrap_or(configured_seed);
        let cmp = runner::compare_nmqj(&config, n, seed)?;
        let path = out_dir.join(format!("{}-nmqj.csv", config.name));
        write_csv(&path, &header, &cmp.rows)?;
        println!(
            "{}: max trace distance {} with {} trajectories (3/sqrt(n) = {}) -> {}",
            config.name,
            cmp.max_trace_distance,
            cmp.n_traj,
            3.0 / (cmp.n_traj as f64).sqrt(),
            path.display()
        );
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let out = cli.out_dir.as_path();
    match &cli.command {
        Command::Simulate { overrides, config } => simulate(out, config, overrides),
        Command::Rates { source, quadrature } => rates(out, source, *quadrature),
        Command::Figure { overrides, preset } => figure(out, preset, overrides),
        Command::CompareNmqj {
            source,
            overrides,
            n_traj,
        } => compare(out, source, overrides, *n_traj),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
