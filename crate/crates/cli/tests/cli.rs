use std::path::Path;
use std::process::{Command, Output};

fn hbf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hbf"))
        .args(args)
        .output()
        .expect("run hbf")
}

fn data_rows(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

const SMALL: [&str; 6] = [
    "--set",
    "n_antennas=64",
    "--set",
    "grid_size=256",
    "--users",
    "4",
];

#[test]
fn power_table_matches_reference_values() {
    let out = hbf(&["power-table", "--n", "256", "--n-rf", "16"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for expected in ["69120", "134720", "32320"] {
        assert!(text.contains(expected), "{text}");
    }
}

#[test]
fn simulate_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig4.csv");
    let mut args = vec![
        "simulate", "fig4", "--trials", "2", "--snr", "0,20", "--csi", "both",
    ];
    args.extend(SMALL);
    args.extend(["--out", path.to_str().unwrap()]);
    let out = hbf(&args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = data_rows(&path);
    assert_eq!(
        rows[0],
        "scheme,estimator,sweep_name,sweep_value,metric,mean,std_error,trials"
    );
    assert_eq!(rows.len(), 1 + 3 * 2 * 2);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let from_file = dir.path().join("from_file.csv");
    let config = dir.path().join("run.conf");
    std::fs::write(
        &config,
        format!(
            "# small run\ntrials = 5\nsnr = 10\ncsi = perfect\nn_antennas = 64\ngrid_size = 256\nusers = 4\nout = {}\n",
            from_file.display()
        ),
    )
    .unwrap();
    let out = hbf(&[
        "simulate",
        "fig4",
        "--config",
        config.to_str().unwrap(),
        "--trials",
        "1",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&from_file).unwrap();
    assert!(text.contains("# config.trials: 1"));
    assert!(data_rows(&from_file)
        .iter()
        .skip(1)
        .all(|r| r.ends_with(",1")));
}

#[test]
fn runs_are_reproducible() {
    let run = || {
        let mut args = vec!["simulate", "fig6", "--trials", "2", "--snr", "0:20:10"];
        args.extend(SMALL);
        hbf(&args).stdout
    };
    let first = run();
    assert!(!first.is_empty());
    assert_eq!(first, run());
}

#[test]
fn bad_input_is_reported() {
    assert!(!hbf(&["simulate", "fig9"]).status.success());
    let out = hbf(&["simulate", "fig4", "--set", "warp=9"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warp"));
    let out = hbf(&["simulate", "fig4", "--csi", "psychic"]);
    assert!(!out.status.success());
    let out = hbf(&["simulate", "fig4", "--config", "/nonexistent/run.conf"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/run.conf"));
}
