use std::process::Command;

use nodallab::{list_experiments, run_experiment, write_outputs, Check, Config, HarnessError, OUTPUT_FILES};

#[test]
fn registry_lists_nine_sorted_anchored_experiments() {
    let rows = list_experiments();
    let ids: Vec<&str> = rows.iter().map(|r| r.0).collect();
    assert_eq!(ids, ["E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8", "E9"]);
    assert!(rows.iter().all(|r| !r.1.is_empty() && !r.2.is_empty()));
    for spec in nodallab::registry() {
        assert!(!spec.expectations.is_empty(), "{}", spec.id);
        for e in &spec.expectations {
            if let Check::Within(lo, hi) = e.check {
                assert!(lo < hi);
            }
        }
    }
}

#[test]
fn checks_compare_metric_values() {
    use serde_json::json;
    assert!(Check::IsTrue.holds(Some(&json!(true))));
    assert!(!Check::IsTrue.holds(Some(&json!(1))));
    assert!(Check::Within(0.8, 1.2).holds(Some(&json!(1.0))));
    assert!(!Check::Below(0.3).holds(Some(&json!(0.3))));
    assert!(Check::AtMost(2.0).holds(Some(&json!(2))));
    assert!(!Check::Equals(4.0).holds(None));
    assert!(!Check::AtLeast(1.0).holds(Some(&serde_json::Value::Null)));
}

#[test]
fn unknown_ids_and_bad_configs_are_usage_errors() {
    let err = run_experiment("E99", &Config::default(), None).unwrap_err();
    assert!(matches!(err, HarnessError::UnknownExperiment(_)));
    assert_eq!(err.exit_code(), 2);

    let cfg = Config::from_toml("[grid]\nresolution = 100\n").unwrap();
    let err = run_experiment("E2", &cfg, None).unwrap_err();
    assert!(matches!(err, HarnessError::Config(_)), "{err}");
    assert_eq!(err.exit_code(), 2);

    let cfg = Config::from_toml("[grid]\nresolution = 64\nlevels = 2\n").unwrap();
    assert_eq!(run_experiment("E2", &cfg, None).unwrap_err().exit_code(), 2);

    let cfg = Config::from_toml("[zero]\nthreshold = -1.0\n").unwrap();
    assert_eq!(run_experiment("E7", &cfg, None).unwrap_err().exit_code(), 2);

    assert!(Config::from_toml("[grid]\nresolutoin = 64\n").is_err());
    assert!(Config::from_toml("seed = \"seven\"\n").is_err());
}

#[test]
fn config_values_fill_parameters() {
    let cfg = Config::from_toml("seed = 9\n[grid]\nresolution = 128\nlevels = 4\n[suite]\ninstances = 5\n").unwrap();
    let spec = nodallab::find("e2").unwrap();
    let p = cfg.resolve(&spec.defaults, spec.min_levels).unwrap();
    assert_eq!((p.seed, p.resolution, p.levels, p.instances), (9, 128, 4, 5));
    assert_eq!(p.resolutions(), vec![16, 32, 64, 128]);
    assert_eq!(p.trials, spec.defaults.trials);
}

#[test]
fn symbolic_runs_are_reproducible() {
    let cfg = Config::from_toml("[suite]\ninstances = 5\n").unwrap();
    let a = run_experiment("E9", &cfg, Some(3)).unwrap();
    let b = run_experiment("E9", &cfg, Some(3)).unwrap();
    assert_eq!(a.summary.to_json(), b.summary.to_json());
    assert_eq!(a.summary.params.seed, 3);
    // Five instances are fewer than the criteria demand.
    assert!(!a.summary.pass);
    assert_eq!(a.summary.metrics["weierstrass_failed"], 0);
}

#[test]
fn outputs_are_written_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = run_experiment("E7", &Config::default(), None).unwrap();
    assert!(run.summary.pass, "{}", run.summary.to_json());
    write_outputs(dir.path(), &run).unwrap();
    for f in OUTPUT_FILES {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
    let singular = std::fs::read_to_string(dir.path().join("singular_points.csv")).unwrap();
    assert_eq!(singular.lines().count(), 5);
    let svg = std::fs::read_to_string(dir.path().join("plot.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));

    let again = run_experiment("E7", &Config::default(), None).unwrap();
    let dir2 = tempfile::tempdir().unwrap();
    write_outputs(dir2.path(), &again).unwrap();
    for f in OUTPUT_FILES {
        assert_eq!(std::fs::read(dir.path().join(f)).unwrap(), std::fs::read(dir2.path().join(f)).unwrap(), "{f}");
    }
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nodallab")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn cli_exit_codes() {
    let (code, stdout) = cli(&["list"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().count(), 9);
    assert!(stdout.lines().next().unwrap().starts_with("E1\t"));

    assert_eq!(cli(&["run", "E99"]).0, 2);
    assert_eq!(cli(&["frobnicate"]).0, 2);
    assert_eq!(cli(&["run", "E2", "--resolution", "100"]).0, 2);
    assert_eq!(cli(&["run", "E2", "--config", "/nonexistent/config.toml"]).0, 2);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, stdout) = cli(&["run", "E9", "--out", out, "--seed", "4"]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("E9: PASS"));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["params"]["seed"], 4);
    assert_eq!(summary["pass"], true);

    let cfg = dir.path().join("few.toml");
    std::fs::write(&cfg, "[suite]\ninstances = 3\n").unwrap();
    let (code, _) = cli(&["run", "E9", "--out", out, "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 1);
}
