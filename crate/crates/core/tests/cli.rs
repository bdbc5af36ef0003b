use std::path::Path;
use std::process::{Command, Output};

use static_vacua::csv::parse_csv;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_static-vacua"));
    cmd.env_remove("STATIC_VACUA_OUT_DIR");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn figure1_endpoints() {
    let out = run(&["figure1", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = parse_csv(&stdout(&out)).unwrap();
    assert_eq!(header, ["m", "k_plus", "k_minus"]);
    assert_eq!(rows.len(), 200);
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[0][1], 1.0);
    assert_eq!(rows[0][2], f64::INFINITY);
    let sqrt3 = 3f64.sqrt();
    let last = &rows[199];
    assert!((last[0] - 1.0 / (3.0 * sqrt3)).abs() < 1e-15);
    assert!((last[1] - sqrt3).abs() < 1e-12 && (last[2] - sqrt3).abs() < 1e-12);
}

#[test]
fn csv_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("f{i}.csv"));
        let out = run(&["figure1", "--output", path.to_str().unwrap()]);
        assert!(out.status.success());
        texts.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
    assert!(!texts[0].contains(&b'\r'));
}

#[test]
fn virtual_mass_at_de_sitter_value() {
    let out = run(&["virtual-mass", "--n", "3", "--kappas", "1.0"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["result"]["mass"], 0.0);
    assert_eq!(doc["result"]["region_kind"], "outer");
    assert_eq!(doc["tool"], "static-vacua");
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["config"]["kappas"][0], 1.0);
}

#[test]
fn classify_reports_each_kappa() {
    let out = run(&["classify", "--kappas", "1.2,1.7320508075688772,3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let types: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(types, ["cosmological", "cylindrical", "black_hole"]);
}

#[test]
fn verify_passes_on_the_catalog() {
    let out = run(&["verify", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["result"]["passed"], true);
    assert_eq!(doc["result"]["reports"].as_array().unwrap().len(), 10);
}

#[test]
fn shoot_breach_exits_one() {
    let out = run(&["shoot", "--masses", "0.1", "--step", "0.05", "--tolerance", "1e-12"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn shoot_writes_report_and_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("traj.csv");
    let out = bin()
        .args(["shoot", "--masses", "0.1", "--trajectory", traj.to_str().unwrap()])
        .env("STATIC_VACUA_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let report = std::fs::read_to_string(dir.path().join("shoot.csv")).unwrap();
    assert_eq!(report.lines().count(), 3);
    let (header, rows) = parse_csv(&std::fs::read_to_string(&traj).unwrap()).unwrap();
    assert_eq!(header, ["s", "u", "u_dot", "phi", "phi_dot", "constraint"]);
    let last = rows.last().unwrap();
    assert!(last[2].abs() < 1e-9);
    assert!((last[3] - 0.1f64.powf(1.0 / 3.0)).abs() < 1e-6);
}

#[test]
fn out_dir_flag_names_files_by_command() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    for (cmd, file) in [("models", "models.csv"), ("hawking", "hawking.csv")] {
        let out = run(&["--out-dir", d, cmd]);
        assert!(out.status.success());
        assert!(Path::new(d).join(file).exists());
    }
    let out = run(&["--out-dir", d, "models", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("models.json")).unwrap())
            .unwrap();
    assert_eq!(doc["result"].as_array().unwrap().len(), 10);
}

#[test]
fn hawking_mass_is_flat() {
    let out = run(&["hawking", "--mass", "-0.1", "--genus", "2"]);
    assert!(out.status.success());
    let (_, rows) = parse_csv(&stdout(&out)).unwrap();
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().all(|r| (r[1] + 0.1).abs() < 1e-8));
}

#[test]
fn argument_errors_exit_two() {
    for args in [
        &["figure1", "--bogus"][..],
        &["classify"],
        &["virtual-mass", "--kappas", "0.5"],
        &["virtual-mass", "--kappas", "-1"],
        &["figure1", "--points", "1"],
        &["hawking", "--kind", "de-sitter"],
        &["hawking", "--kind", "warp-drive"],
        &["shoot", "--masses", "0.5"],
        &["models", "--n", "2"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}
