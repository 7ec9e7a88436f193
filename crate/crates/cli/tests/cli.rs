use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn cavneg(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cavneg"))
        .args(args)
        .env("CAVNEG_OUT_DIR", out)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_owned)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

// "<name> <state>: death_time <t> ..." lines of the figure command.
fn death_time(out: &str, curve: &str) -> f64 {
    let line = out
        .lines()
        .find(|l| l.starts_with(&format!("{curve} ")))
        .unwrap();
    line.split_whitespace()
        .skip_while(|w| *w != "death_time")
        .nth(1)
        .unwrap()
        .parse()
        .unwrap()
}

const SINGLE: &str = r#"{
    "name": "single",
    "initial_state": "W",
    "bath": { "model": { "kind": "single_lorentzian", "alpha_l": 2, "gamma": 0.1 } },
    "grid": { "t_end": 8 },
    "outputs": { "svg_path": "single.svg" }
}"#;

#[test]
fn help_documents_defaults_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    let o = cavneg(dir.path(), &["--help"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for needle in [
        "simulate",
        "rates",
        "figure",
        "compare-nmqj",
        "grid.dt",
        "0.001",
        "Exit codes",
        "CAVNEG_OUT_DIR",
    ] {
        assert!(text.contains(needle), "missing {needle}");
    }
}

#[test]
fn simulate_writes_csv_svg_and_reports_death_time() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "single.json", SINGLE);
    let o = cavneg(dir.path(), &["simulate", "--config", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("death_time: 4.8"), "{text}");
    assert!(text.contains("average_kappa: "));
    let (header, rows) = read_csv(&dir.path().join("single.csv"));
    assert_eq!(
        header.join(","),
        "t,negativity,kappa,rho11,rho22,rho33,rho44,rho55,rho66,rho77,rho88"
    );
    assert_eq!(rows.len(), 801);
    assert_eq!(rows[0][1], 0.942809041582);
    let svg = fs::read_to_string(dir.path().join("single.svg")).unwrap();
    assert!(svg.contains("<polyline") && svg.contains("single"));
}

#[test]
fn overrides_replace_state_and_threshold() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "single.json", SINGLE);
    let o = cavneg(
        dir.path(),
        &[
            "simulate",
            "--config",
            &cfg,
            "--state",
            "GHZ",
            "--threshold",
            "0.5",
        ],
    );
    assert!(o.status.success());
    let (_, rows) = read_csv(&dir.path().join("single.csv"));
    assert_eq!(rows[0][1], 1.0);
    assert_eq!((rows[0][3], rows[0][10]), (0.5, 0.5));
    let death: f64 = stdout(&o)
        .lines()
        .find_map(|l| l.strip_prefix("death_time: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(death < 4.8);
}

#[test]
fn exit_codes_follow_the_failure_class() {
    let dir = TempDir::new().unwrap();
    let typo = write_config(&dir, "typo.json", &SINGLE.replace("\"gamma\"", "\"gama\""));
    let o = cavneg(dir.path(), &["simulate", "--config", &typo]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("gama"));

    let thermal_jumps = write_config(
        &dir,
        "thermal.json",
        &SINGLE
            .replace("\"grid\"", "\"solver\": {\"kind\": \"nmqj\"}, \"grid\"")
            .replace("0.1 } }", "0.1 }, \"nbar\": 0.1 }"),
    );
    assert_eq!(
        cavneg(dir.path(), &["simulate", "--config", &thermal_jumps])
            .status
            .code(),
        Some(2)
    );

    let o = cavneg(
        dir.path(),
        &[
            "simulate",
            "--config",
            &dir.path().join("missing.json").to_string_lossy(),
        ],
    );
    assert_eq!(o.status.code(), Some(4));

    let unstable = write_config(
        &dir,
        "unstable.json",
        r#"{"initial_state": "W", "bath": {"model": {"kind": "flat", "kappa": 1000}}, "grid": {"t_end": 1, "dt": 0.1, "sample_every": 1}}"#,
    );
    let o = cavneg(dir.path(), &["simulate", "--config", &unstable]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));

    let blocker = dir.path().join("blocker");
    fs::write(&blocker, "").unwrap();
    let cfg = write_config(&dir, "single.json", SINGLE);
    assert_eq!(
        cavneg(&blocker, &["simulate", "--config", &cfg])
            .status
            .code(),
        Some(4)
    );

    assert_eq!(
        cavneg(dir.path(), &["figure", "--preset", "fig9"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn fig3_preset_writes_four_curves_in_the_expected_order() {
    let dir = TempDir::new().unwrap();
    let o = cavneg(dir.path(), &["run", "--preset", "fig3", "--state", "W"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let deaths: Vec<f64> = [
        "fig3-double",
        "fig3-single",
        "fig3-band-gap",
        "fig3-markovian",
    ]
    .iter()
    .map(|c| death_time(&text, c))
    .collect();
    assert!(deaths.windows(2).all(|w| w[0] > w[1]), "{deaths:?}");
    for curve in ["markovian", "single", "double", "band-gap"] {
        assert!(dir.path().join(format!("fig3-{curve}-W.csv")).exists());
    }
    let svg = fs::read_to_string(dir.path().join("fig3-W.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 4);
}

#[test]
fn fig7_ohmic_curve_dies_near_two() {
    let dir = TempDir::new().unwrap();
    let o = cavneg(
        dir.path(),
        &["figure", "--preset", "fig7", "--state", "GHZ"],
    );
    assert!(o.status.success());
    let ohmic = death_time(&stdout(&o), "fig7-ohmic");
    assert!((ohmic - 2.0).abs() <= 0.6, "{ohmic}");
    assert!(dir.path().join("fig7-sub-ohmic-GHZ.csv").exists());
}

#[test]
fn rates_table_shows_the_detuned_oscillation() {
    let dir = TempDir::new().unwrap();
    let o = cavneg(dir.path(), &["rates", "--preset", "fig4"]);
    assert!(o.status.success());
    let (header, rows) = read_csv(&dir.path().join("fig4-single-rates.csv"));
    assert_eq!(
        header.join(","),
        "t,kappa,re_alpha,im_alpha,re_beta,im_beta"
    );
    let kappa = rows.iter().map(|r| r[1]);
    let (lo, hi) = kappa.fold((f64::MAX, f64::MIN), |(lo, hi), k| (lo.min(k), hi.max(k)));
    assert!(
        (0.52..=0.64).contains(&hi) && (-0.34..=-0.22).contains(&lo),
        "[{lo}, {hi}]"
    );
    assert!(rows.iter().all(|r| r[2] == 0.0 && r[3] == 0.0));
}

#[test]
fn quadrature_rates_agree_with_closed_forms() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "single.json",
        &SINGLE.replace("\"t_end\": 8", "\"t_end\": 4, \"sample_every\": 500"),
    );
    assert!(cavneg(dir.path(), &["rates", "--config", &cfg])
        .status
        .success());
    let (_, closed) = read_csv(&dir.path().join("single-rates.csv"));
    assert!(
        cavneg(dir.path(), &["rates", "--config", &cfg, "--quadrature"])
            .status
            .success()
    );
    let (_, numeric) = read_csv(&dir.path().join("single-rates.csv"));
    for (a, b) in closed.iter().zip(&numeric) {
        assert!((a[1] - b[1]).abs() < 1e-6);
    }
}

const JUMPS: &str = r#"{
    "name": "jumps",
    "initial_state": "GHZ",
    "bath": { "model": { "kind": "single_lorentzian", "alpha_l": 6, "gamma": 0.1 }, "delta": 1 },
    "solver": { "kind": "nmqj", "n_traj": 300, "seed": 5 },
    "grid": { "t_end": 6, "sample_every": 50 }
}"#;

#[test]
fn identical_seed_gives_identical_bytes() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "jumps.json", JUMPS);
    let read = || fs::read(dir.path().join("jumps.csv")).unwrap();
    assert!(cavneg(dir.path(), &["simulate", "--config", &cfg])
        .status
        .success());
    let first = read();
    assert!(
        cavneg(dir.path(), &["simulate", "--config", &cfg, "--jobs", "1"])
            .status
            .success()
    );
    assert_eq!(read(), first);
    assert!(
        cavneg(dir.path(), &["simulate", "--config", &cfg, "--seed", "6"])
            .status
            .success()
    );
    assert_ne!(read(), first);
}

fn max_distance(dir: &Path, cfg: &str, n: &str, seed: &str) -> f64 {
    let o = cavneg(
        dir,
        &[
            "compare-nmqj",
            "--config",
            cfg,
            "--n-traj",
            n,
            "--seed",
            seed,
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let (_, rows) = read_csv(&dir.join("jumps-nmqj.csv"));
    rows.iter().map(|r| r[1]).fold(0.0, f64::max)
}

#[test]
fn comparison_distance_shrinks_with_ensemble_size() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "jumps.json", JUMPS);
    let seeds = ["1", "2", "3"];
    let small: f64 = seeds
        .iter()
        .map(|s| max_distance(dir.path(), &cfg, "1", s))
        .sum::<f64>()
        / 3.0;
    let large: f64 = seeds
        .iter()
        .map(|s| max_distance(dir.path(), &cfg, "10000", s))
        .sum::<f64>()
        / 3.0;
    assert!(large < small, "{large} vs {small}");
    assert!(large < 0.03);
    let (header, _) = read_csv(&dir.path().join("jumps-nmqj.csv"));
    assert_eq!(
        header.join(","),
        "t,trace_distance_to_eme,negativity_nmqj,negativity_eme,n_negative_jumps,n_positive_jumps"
    );
}

#[test]
fn detuned_comparison_stays_within_the_statistical_bound() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "jumps.json",
        &JUMPS
            .replace("\"GHZ\"", "\"W\"")
            .replace("\"t_end\": 6", "\"t_end\": 20")
            .replace("300", "10000"),
    );
    let o = cavneg(dir.path(), &["compare-nmqj", "--config", &cfg]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("10000 trajectories"));
    let (_, rows) = read_csv(&dir.path().join("jumps-nmqj.csv"));
    assert!(rows.iter().all(|r| r[1] < 0.03));
    assert!(rows.iter().map(|r| r[4]).sum::<f64>() > 0.0);
}

#[test]
fn markovian_preset_comparison_skips_thermal_curves() {
    let dir = TempDir::new().unwrap();
    let o = cavneg(
        dir.path(),
        &["compare-nmqj", "--preset", "fig2a", "--n-traj", "10000"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stderr(&o).matches("skipping").count(), 3);
    let (_, rows) = read_csv(&dir.path().join("fig2a-nbar0-nmqj.csv"));
    assert!(rows.iter().all(|r| r[1] < 0.03 && r[4] == 0.0));
}
