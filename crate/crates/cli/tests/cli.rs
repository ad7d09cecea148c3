use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_cavdd");

fn cavdd(args: &[&str], dir: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .env_remove("CAVDD_WORKERS")
        .output()
        .unwrap()
}

const PAIR: &str = r#"
[geometry]
lx = 1.0
ly = 1.0
lz = 1.0

[[dipole]]
position = [0.5, 0.5, 0.5]
levels = "frequencies"
values = [0.0, OMEGA]
moments = [[[0, 0, 0], [0, 0, 1]], [[0, 0, 1], [0, 0, 0]]]

[[dipole]]
position = [X2, 0.5, 0.5]
levels = "frequencies"
values = [0.0, OMEGA]
moments = [[[0, 0, 0], [0, 0, 1]], [[0, 0, 1], [0, 0, 0]]]
"#;

fn pair_config(omega: f64, x2: f64) -> String {
    PAIR.replace("OMEGA", &format!("{omega:?}")).replace("X2", &format!("{x2:?}"))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn single_writes_full_table_and_is_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "pair.toml", &pair_config(20.0, 0.6));
    let a = cavdd(&["single", "--config", &cfg, "--out", "a.csv"], dir.path());
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = cavdd(&["single", "--config", &cfg, "--out", "b.csv", "--workers", "2"], dir.path());
    assert!(b.status.success());
    let (ta, tb) = (fs::read(dir.path().join("a.csv")).unwrap(), fs::read(dir.path().join("b.csv")).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert!(text.starts_with("# cavdd "));
    assert_eq!(data_rows(&text).len(), 16);
}

#[test]
fn stdout_when_no_output_given() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "pair.toml", &pair_config(20.0, 0.6));
    let out = cavdd(&["single", "--config", &cfg], dir.path());
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("u,v,a,b,class"));
}

#[test]
fn config_errors_exit_2_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", &pair_config(20.0, 0.6).replace("lz = 1.0", "lz = -1.0"));
    let out = cavdd(&["single", "--config", &bad], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("geometry"));

    let missing = cavdd(&["single", "--config", "does-not-exist.toml"], dir.path());
    assert_eq!(missing.status.code(), Some(2));

    let outside = write(dir.path(), "outside.toml", &pair_config(20.0, 1.6));
    let out = cavdd(&["single", "--config", &outside], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dipole[1].position"));
}

#[test]
fn sweep_and_single_check_for_a_sweep_section() {
    let dir = tempfile::tempdir().unwrap();
    let plain = write(dir.path(), "plain.toml", &pair_config(20.0, 0.6));
    assert_eq!(cavdd(&["sweep", "--config", &plain], dir.path()).status.code(), Some(2));

    let swept = pair_config(20.0, 0.6).replace("position = [0.6, 0.5, 0.5]\n", "")
        + "\n[sweep]\nvariable = \"separation\"\naxis = \"x\"\nfrom = 0.05\nto = 0.25\nsamples = 5\n";
    let swept = write(dir.path(), "swept.toml", &swept);
    assert_eq!(cavdd(&["single", "--config", &swept], dir.path()).status.code(), Some(2));
    let out = cavdd(&["sweep", "--config", &swept, "--out", "s.csv"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 5 * 16);
    let firsts: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(firsts.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn sweep_sample_outside_aborts_with_index() {
    let dir = tempfile::tempdir().unwrap();
    let swept = pair_config(20.0, 0.6).replace("position = [0.6, 0.5, 0.5]\n", "")
        + "\n[sweep]\nvariable = \"separation\"\naxis = \"x\"\nfrom = 0.1\nto = 0.7\nsamples = 7\n";
    let swept = write(dir.path(), "swept.toml", &swept);
    let out = cavdd(&["sweep", "--config", &swept, "--out", "s.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("5"));
    assert!(!dir.path().join("s.csv").exists());
}

#[test]
fn resonance_guard_flags_row_but_succeeds() {
    // k_110 of the unit cube
    let omega = std::f64::consts::PI * 2f64.sqrt();
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "res.toml", &pair_config(omega, 0.6));
    let out = cavdd(&["single", "--config", &cfg, "--out", "r.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    let statuses: Vec<String> = data_rows(&text).iter().map(|r| r.last().unwrap().clone()).collect();
    assert!(statuses.iter().any(|s| s == "resonance-guard"), "{statuses:?}");
    assert!(statuses.iter().any(|s| s == "ok"));
}

#[test]
fn all_terms_guarded_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "same.toml", &pair_config(20.0, 0.5));
    let out = cavdd(&["single", "--config", &cfg, "--out", "x.csv"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let text = fs::read_to_string(dir.path().join("x.csv")).unwrap();
    assert!(text.trim_end().ends_with("degenerate-separation"));
}

#[test]
fn worker_flag_overrides_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "pair.toml", &pair_config(20.0, 0.6));
    let run = |args: &[&str]| {
        Command::new(BIN)
            .args(args)
            .current_dir(dir.path())
            .env("CAVDD_WORKERS", "zero")
            .output()
            .unwrap()
    };
    assert_eq!(run(&["single", "--config", &cfg]).status.code(), Some(2));
    assert!(run(&["single", "--config", &cfg, "--workers", "2"]).status.success());
    assert_eq!(run(&["single", "--config", &cfg, "--workers", "0"]).status.code(), Some(2));
}

#[test]
fn modes_lists_sorted_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = cavdd(&["modes", "--cutoff", "5", "--lx", "1", "--ly", "1", "--lz", "1"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "m,n,p,k");
    // k = pi sqrt(2) is the lowest shell, three-fold degenerate
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("0,1,1,"));

    let cfg = write(dir.path(), "pair.toml", &pair_config(20.0, 0.6));
    let via_config = cavdd(&["modes", "--cutoff", "5", "--config", &cfg], dir.path());
    assert_eq!(via_config.stdout, text.as_bytes());
    assert_eq!(cavdd(&["modes", "--cutoff", "5", "--lx", "1"], dir.path()).status.code(), Some(2));
}

#[test]
fn selftest_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = cavdd(&["selftest", "--seed", "7"], dir.path());
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let stdout = String::from_utf8_lossy(&ok.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("PASS")).count(), 7);

    let flipped = cavdd(&["selftest", "--flip-spectral-sign"], dir.path());
    assert_eq!(flipped.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&flipped.stdout).contains("FAIL free-space-limit"));

    let frozen = cavdd(&["selftest", "--kc-scale", "100"], dir.path());
    assert_eq!(frozen.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&frozen.stdout).contains("FAIL kc-invariance"));
}

#[test]
fn presets_dump_and_unknown_name() {
    let dir = tempfile::tempdir().unwrap();
    let dump = cavdd(&["preset", "fig2c", "--dump"], dir.path());
    assert!(dump.status.success());
    assert!(String::from_utf8_lossy(&dump.stdout).contains("0.01"));
    assert_eq!(cavdd(&["preset", "fig9z"], dir.path()).status.code(), Some(2));
}

#[test]
fn preset_writes_its_default_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = cavdd(&["preset", "fig2f"], dir.path());
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("fig2f.csv")).unwrap();
    let rows = data_rows(&text);
    // one resonant row per direction and sample
    assert_eq!(rows.len(), 2 * 199);
    assert!(text.contains("\noffset,"));
}
