use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use outflow_core::io::Table;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_outflow"));
    c.env_remove("OUTPUT_DIR");
    c
}

fn shipped(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(args: &[&str], config: &Path) -> Output {
    bin().args(args).arg("--config").arg(config).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn read_table(path: &Path) -> Table {
    Table::read_from(fs::read(path).unwrap().as_slice()).unwrap()
}

const SMALL_RUN: &str = r#"
[endstates]
rho_plus = 1.0
u_plus = 0.2
theta_plus = 1.0
theta_minus = 0.9

[grid]
L = 60.0
N = 300

[time]
t_end = 4.0
snapshot_every = 2.0

[perturbation]
shape = "gaussian-bump"
amplitude = [0.05, 0.0, 0.0]
center = 10.0
width = 2.0
"#;

#[test]
fn construct_constant_when_states_coincide() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "c.toml",
        "[endstates]\nrho_plus = 1.0\nu_plus = -0.2\ntheta_plus = 1.0\ntheta_minus = 1.0\n[grid]\nL = 10.0\nN = 50\n",
    );
    let out = dir.path().join("r.csv");
    for kind in ["rarefaction", "smoothed"] {
        let o = run(&["construct", kind, "--t", "3", "--out", out.to_str().unwrap()], &cfg);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let t = read_table(&out);
        assert_eq!(t.rows.len(), 51);
        for (col, v) in [("rho", 1.0), ("u", -0.2), ("theta", 1.0)] {
            assert!(t.column(col).unwrap().iter().all(|&x| (x - v).abs() < 1e-14), "{kind} {col}");
        }
    }
}

#[test]
fn smoothed_profile_widens_and_stays_monotone() {
    let dir = TempDir::new().unwrap();
    let cfg = shipped("rarefaction.toml");
    let width = |t: &str| {
        let out = dir.path().join(format!("s{t}.csv"));
        let o = run(&["construct", "smoothed", "--t", t, "--out", out.to_str().unwrap()], &cfg);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let tab = read_table(&out);
        let x = tab.column("x").unwrap();
        let theta = tab.column("theta").unwrap();
        assert!(theta.windows(2).all(|w| w[1] >= w[0] - 1e-14));
        let (lo, hi) = (theta[0], theta[theta.len() - 1]);
        let inside: Vec<f64> = x
            .iter()
            .zip(&theta)
            .filter(|(_, &th)| th > lo + 0.05 * (hi - lo) && th < hi - 0.05 * (hi - lo))
            .map(|(&x, _)| x)
            .collect();
        inside.last().unwrap() - inside.first().unwrap()
    };
    let (w0, w1) = (width("0"), width("100"));
    assert!(w1 > 2.0 * w0, "{w0} -> {w1}");
}

#[test]
fn stationary_construct_starts_at_boundary_data() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("st.csv");
    let o = run(
        &["construct", "stationary", "--out", out.to_str().unwrap()],
        &shipped("stationary.toml"),
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = read_table(&out);
    let m: f64 = t.meta("mass_flux").unwrap().parse().unwrap();
    let u_minus: f64 = t.meta("u_minus").unwrap().parse().unwrap();
    let theta_minus: f64 = t.meta("theta_minus").unwrap().parse().unwrap();
    let row = &t.rows[0];
    assert_eq!(row[0], 0.0);
    assert!((row[1] - m / u_minus).abs() < 1e-12);
    assert!((row[2] - u_minus).abs() < 1e-14);
    assert!((row[3] - theta_minus).abs() < 1e-14);
    assert_eq!(t.meta("regime"), Some("supersonic"));
}

#[test]
fn demo_run_approaches_the_wave() {
    let dir = TempDir::new().unwrap();
    let o = run(&["simulate", "--quiet", "--out", dir.path().to_str().unwrap()], &shipped("rarefaction.toml"));
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    let sup: Vec<f64> = summary["summary"]["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["sup_distance"].as_f64().unwrap())
        .collect();
    assert_eq!(sup.len(), 5);
    assert!(sup.windows(2).all(|w| w[1] < w[0]), "{sup:?}");
    assert!(dir.path().join("snapshot_004.csv").exists());
}

#[test]
fn inflow_boundary_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "in.toml",
        "[endstates]\nrho_plus = 1.0\ntheta_plus = 1.0\nu_minus = 0.2\ntheta_minus = 0.9\n",
    );
    let o = run(&["simulate", "--out", dir.path().join("o").to_str().unwrap()], &cfg);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("inflow"), "{}", stderr(&o));
}

#[test]
fn supersonic_boundary_condition_is_named() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "sup.toml",
        "[endstates]\nrho_plus = 1.0\ntheta_plus = 1.0\nu_minus = -2.0\ntheta_minus = 0.9\n",
    );
    let o = run(&["simulate", "--out", dir.path().join("o").to_str().unwrap()], &cfg);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("√(Rγθ_−)"), "{}", stderr(&o));
}

#[test]
fn exhausted_step_budget_is_a_runtime_abort() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "b.toml", &SMALL_RUN.replace("snapshot_every = 2.0", "max_steps = 3"));
    let o = run(&["simulate", "--out", dir.path().join("o").to_str().unwrap()], &cfg);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn unknown_key_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "u.toml", &format!("{SMALL_RUN}\n[scenario]\nflavour = 1\n"));
    let o = run(&["simulate"], &cfg);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("flavour"), "{}", stderr(&o));
}

#[test]
fn burgers_suite_passes() {
    let o = run(&["verify", "burgers"], &shipped("rarefaction.toml"));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.lines().count() > 5);
    assert!(stdout.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn subsonic_divergence_counts_as_expected() {
    let o = run(&["verify"], &shipped("subsonic.toml"));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn supersonic_stationary_suite_passes() {
    let o = run(&["verify"], &shipped("stationary.toml"));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn decay_suite_reports_all_rates() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("decay.json");
    let o = run(&["verify", "decay", "--out", report.to_str().unwrap()], &shipped("decay.toml"));
    // the second-derivative slope misses its tolerance, see the README
    assert_eq!(code(&o), 3);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    let checks = v["checks"].as_array().unwrap();
    for norm in ["L1", "L2", "Linf"] {
        let c = checks
            .iter()
            .find(|c| c["name"].as_str().unwrap().starts_with(&format!("||u_x||_{norm} ")))
            .unwrap_or_else(|| panic!("no {norm} check"));
        assert!(c["pass"].as_bool().unwrap(), "{c}");
    }
    let failed: Vec<_> = checks.iter().filter(|c| !c["pass"].as_bool().unwrap()).collect();
    assert_eq!(failed.len(), 1, "{failed:?}");
    assert!(failed[0]["name"].as_str().unwrap().contains("u_xx"));
}

#[test]
fn runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "d.toml", SMALL_RUN);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let o = run(&["simulate", "--quiet", "--out", d.to_str().unwrap()], &cfg);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 3);
    for n in names {
        assert_eq!(fs::read(a.join(&n)).unwrap(), fs::read(b.join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn every_output_carries_the_config_hash() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "h.toml", SMALL_RUN);
    let hash = outflow_cli::config::LoadedConfig::from_file(&cfg).unwrap().hash;
    let out = dir.path().join("sim");
    assert_eq!(code(&run(&["simulate", "--quiet", "--out", out.to_str().unwrap()], &cfg)), 0);
    let construct = dir.path().join("c.csv");
    assert_eq!(code(&run(&["construct", "smoothed", "--out", construct.to_str().unwrap()], &cfg)), 0);
    let report = dir.path().join("v.json");
    assert_eq!(code(&run(&["verify", "entropy", "--out", report.to_str().unwrap()], &cfg)), 0);

    for e in fs::read_dir(&out).unwrap() {
        let p = e.unwrap().path();
        let text = fs::read_to_string(&p).unwrap();
        if p.extension().unwrap() == "csv" {
            assert_eq!(read_table(&p).meta("config_hash"), Some(hash.as_str()));
        } else {
            assert!(text.contains(&hash), "{p:?}");
        }
    }
    assert_eq!(read_table(&construct).meta("config_hash"), Some(hash.as_str()));
    assert!(fs::read_to_string(&report).unwrap().contains(&hash));
}

#[test]
fn output_dir_is_the_fallback_location() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "o.toml", SMALL_RUN);
    let o = bin()
        .args(["construct", "smoothed", "--config"])
        .arg(&cfg)
        .env("OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(dir.path().join("smoothed.csv").exists());

    let o = bin()
        .args(["simulate", "--quiet", "--config"])
        .arg(&cfg)
        .env("OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(dir.path().join("out/summary.json").exists());
}

#[test]
fn missing_config_flag_is_a_config_error() {
    let o = bin().arg("simulate").output().unwrap();
    assert_eq!(code(&o), 1);
}
