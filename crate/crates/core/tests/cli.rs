use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use mjls::cli::{
    main_with, run, tau_sweep, Args, TauSweep, EXIT_CONFIG, EXIT_FAIL, EXIT_IO, EXIT_PASS,
};
use mjls::config::{
    load_config, three_mode_example, ConfigDocument, LoadedConfig, THREE_MODE_EXAMPLE,
};
use mjls::Error;

fn config_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/three_mode.toml")
}

fn args(extra: &[&str]) -> Args {
    Args::try_parse_from(std::iter::once("mjls").chain(extra.iter().copied())).unwrap()
}

fn run_capture(a: &Args) -> (i32, String) {
    let mut out = Vec::new();
    let code = run(a, &mut out).unwrap();
    (code, String::from_utf8(out).unwrap())
}

fn edited(find: &str, replace: &str) -> String {
    assert!(THREE_MODE_EXAMPLE.contains(find), "{find}");
    THREE_MODE_EXAMPLE.replacen(find, replace, 1)
}

fn config_error(text: &str) -> (String, String) {
    match LoadedConfig::from_str(text) {
        Err(Error::Config { path, message }) => (path, message),
        other => panic!("expected a config error, got {other:?}"),
    }
}

#[test]
fn bundled_config_loads() {
    let cfg = load_config(&config_path()).unwrap();
    assert_eq!(cfg.scenario, three_mode_example().scenario);
    let sc = &cfg.scenario;
    assert_eq!(sc.systems.len(), 3);
    assert_eq!(sc.protocol.levels, 10);
    assert_eq!(sc.protocol.tau, 0.1);
    assert_eq!(sc.x0, vec![-5.0, 8.9]);
    assert_eq!(sc.initial_mode, 0);
    assert_eq!(cfg.runs, 20);
}

#[test]
fn single_level_is_a_config_error() {
    let text = edited("N = 10", "N = 1");
    assert!(LoadedConfig::from_str(&text).is_err());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    fs::write(&path, text).unwrap();
    let code = main_with(["mjls", "rate", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_CONFIG);
}

#[test]
fn errors_name_the_offending_field() {
    let (path, _) = config_error(&edited("[0.075, -0.15, 0.075]", "[0.075, -0.15, 0.5]"));
    assert_eq!(path, "law.generator[2]");
    let (path, _) = config_error(&edited("x0 = [-5.0, 8.9]", "x0 = [-5.0]"));
    assert!(path.starts_with("experiment"), "{path}");
    let (path, _) = config_error(&edited("tau = 0.1", "tau = -0.1"));
    assert!(path.starts_with("protocol"), "{path}");
    let (path, _) = config_error(&edited("initial_mode = 1", "initial_mode = 4"));
    assert!(path.starts_with("experiment"), "{path}");
    assert!(matches!(
        LoadedConfig::from_str("[[modes]]\nbogus = 1\n"),
        Err(Error::Parse(_))
    ));
}

#[test]
fn toml_round_trip_rebuilds_the_same_scenario() {
    let doc = ConfigDocument::parse(THREE_MODE_EXAMPLE).unwrap();
    let text = doc.to_toml().unwrap();
    let again = ConfigDocument::parse(&text).unwrap();
    assert_eq!(doc, again);
    assert_eq!(
        doc.build().unwrap().scenario,
        again.build().unwrap().scenario
    );
}

#[test]
fn overrides_reach_the_scenario() {
    let a = args(&[
        "simulate",
        "x.toml",
        "--horizon",
        "3.5",
        "--seed",
        "9",
        "--runs",
        "4",
    ]);
    let cfg = three_mode_example()
        .with_overrides(a.horizon, a.seed, a.runs)
        .unwrap();
    assert_eq!(
        (cfg.scenario.horizon, cfg.scenario.seed, cfg.runs),
        (3.5, 9, 4)
    );
    assert!(three_mode_example()
        .with_overrides(Some(-1.0), None, None)
        .is_err());
}

#[test]
fn rate_reports_bits() {
    let (code, text) = run_capture(&args(&["rate", config_path().to_str().unwrap()]));
    assert_eq!(code, EXIT_PASS);
    assert!(text.contains("data_rate_bits_per_second = 82.43"), "{text}");
    assert!(text.contains("box_bits = 7"));
    assert!(text.contains("mode_bits = 2"));
    assert!(text.contains("bits_per_sample = 9"));
}

#[test]
fn exit_codes() {
    let cfg = config_path();
    let cfg = cfg.to_str().unwrap();
    assert_eq!(main_with(["mjls", "rate", cfg]), EXIT_PASS);
    assert_eq!(
        main_with(["mjls", "rate", "/nonexistent/file.toml"]),
        EXIT_IO
    );
    assert_eq!(main_with(["mjls", "teleport", cfg]), EXIT_CONFIG);
    assert_eq!(
        main_with(["mjls", "simulate", cfg, "--runs", "many"]),
        EXIT_CONFIG
    );
    assert_eq!(main_with(["mjls", "certificate", cfg]), EXIT_FAIL);
    assert_eq!(
        main_with(["mjls", "simulate", cfg, "--horizon", "5"]),
        EXIT_PASS
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("broken.toml");
    fs::write(&bad, "this is = = not toml").unwrap();
    assert_eq!(
        main_with(["mjls", "rate", bad.to_str().unwrap()]),
        EXIT_CONFIG
    );

    // An output directory that cannot be created.
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = blocker.join("sub");
    assert_eq!(
        main_with(["mjls", "rate", cfg, "--out", out.to_str().unwrap()]),
        EXIT_IO
    );
}

#[test]
fn bundled_name_works_without_a_file() {
    let (code, text) = run_capture(&args(&["rate", "three_mode"]));
    assert_eq!(code, EXIT_PASS);
    assert!(text.contains("bits_per_sample = 9"));
}

#[test]
fn simulate_writes_csvs_and_svg_is_additive() {
    let cfg = config_path();
    let cfg = cfg.to_str().unwrap();
    let plain = tempfile::tempdir().unwrap();
    let fancy = tempfile::tempdir().unwrap();
    let p = plain.path().to_str().unwrap();
    let f = fancy.path().to_str().unwrap();
    let (c1, t1) = run_capture(&args(&["simulate", cfg, "--out", p]));
    let (c2, t2) = run_capture(&args(&["simulate", cfg, "--out", f, "--svg"]));
    assert_eq!((c1, c2), (EXIT_PASS, EXIT_PASS));
    assert_eq!(t1, t2);
    for name in ["trajectory.csv", "quantizer.csv", "simulate.txt"] {
        assert_eq!(
            fs::read(plain.path().join(name)).unwrap(),
            fs::read(fancy.path().join(name)).unwrap(),
            "{name}"
        );
    }
    for name in ["norm.svg", "states.svg", "radius.svg"] {
        assert!(!plain.path().join(name).exists());
        let svg = fs::read_to_string(fancy.path().join(name)).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
    let csv = fs::read_to_string(plain.path().join("quantizer.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 101);
}

#[test]
fn montecarlo_command_honors_runs_and_seed() {
    let cfg = config_path();
    let cfg = cfg.to_str().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, text) = run_capture(&args(&[
        "montecarlo",
        cfg,
        "--runs",
        "3",
        "--seed",
        "5",
        "--out",
        d,
        "--svg",
    ]));
    let passes = text.contains("passes = true");
    assert_eq!(code, if passes { EXIT_PASS } else { EXIT_FAIL });
    let csv = fs::read_to_string(dir.path().join("montecarlo.csv")).unwrap();
    let seeds: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(seeds, ["5", "6", "7"]);
    assert!(dir.path().join("exponents.svg").exists());
}

#[test]
fn sampling_period_sweep() {
    let sweep = TauSweep {
        lo: 0.05,
        hi: 0.2,
        steps: 4,
    };
    let rows = tau_sweep(&three_mode_example(), sweep).unwrap();
    assert_eq!(rows.len(), 4);
    assert!((rows[0].tau - 0.05).abs() < 1e-15 && (rows[3].tau - 0.2).abs() < 1e-15);
    for r in &rows {
        assert_eq!(r.passes, r.condition_value.is_some_and(|v| v < 0.0));
    }
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (_, text) = run_capture(&args(&[
        "certificate",
        "three_mode",
        "--tau-sweep",
        "0.05:0.2:4",
        "--out",
        d,
    ]));
    assert!(text.starts_with("tau,condition_value,passes\n"));
    assert!(text.contains("passing_tau"));
    assert_eq!(
        fs::read_to_string(dir.path().join("tau_sweep.csv"))
            .unwrap()
            .lines()
            .count(),
        5
    );
    assert!(
        main_with([
            "mjls",
            "certificate",
            "three_mode",
            "--tau-sweep",
            "0.2:0.1:3"
        ]) == EXIT_CONFIG
    );
}
