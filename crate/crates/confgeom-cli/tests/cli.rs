use std::path::{Path, PathBuf};
use std::process::Command;

use confgeom_cli::CliError;
use serde_json::{json, Value};
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn confgeom(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_confgeom")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write_config(dir: &TempDir, name: &str, cfg: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_vec_pretty(cfg).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn flat_torus(nu: usize, affine: bool) -> Value {
    let mut cfg = json!({
        "surface": {"kind": "flat_torus", "params": [0.6]},
        "grid": {"nu": nu, "nv": nu},
    });
    if affine {
        cfg["lambda"] = json!({"kind": "affine", "params": [1.4, 0.3, -0.2, 0.25, 0.1]});
    }
    cfg
}

fn invariant(record: &Value, name: &str) -> f64 {
    record["invariants"].as_array().unwrap().iter().find(|i| i["name"] == name).unwrap()["value"].as_f64().unwrap()
}

#[test]
fn catalog_lists_orders() {
    let r = confgeom(&["catalog"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    for needle in ["willmore: order 3", "dlap_willmore: order 5", "clifford", "flat_torus", "mobius_image"] {
        assert!(r.stdout.contains(needle), "missing {needle}");
    }
    let lines: Vec<&str> = r.stdout.lines().collect();
    let mut sorted = lines.clone();
    sorted.sort();
    assert_eq!(lines, sorted);

    let j = confgeom(&["catalog", "--format", "json"]);
    let entries: Value = serde_json::from_str(&j.stdout).unwrap();
    assert!(entries.as_array().unwrap().iter().any(|e| e["name"] == "willmore"));
}

#[test]
fn compute_clifford_is_willmore() {
    let dir = TempDir::new().unwrap();
    let cfg = json!({"surface": {"kind": "clifford"}, "grid": {"nu": 8, "nv": 8}, "invariants": ["willmore"]});
    let path = write_config(&dir, "c.json", &cfg);
    let r = confgeom(&["compute", "--config", s(&path)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let out: Value = serde_json::from_str(&r.stdout).unwrap();
    let records = out["records"].as_array().unwrap();
    assert_eq!(records.len(), 64);
    for rec in records {
        assert!(invariant(rec, "willmore").abs() < 1e-9);
    }
}

#[test]
fn compute_flat_torus_norm() {
    let dir = TempDir::new().unwrap();
    let mut cfg = flat_torus(8, false);
    cfg["invariants"] = json!(["normII2"]);
    let path = write_config(&dir, "t.json", &cfg);
    let r = confgeom(&["compute", "--config", s(&path)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let out: Value = serde_json::from_str(&r.stdout).unwrap();
    for rec in out["records"].as_array().unwrap() {
        assert!((invariant(rec, "normII2") - 625.0 / 288.0).abs() < 1e-10);
    }
}

#[test]
fn compute_is_byte_stable() {
    let dir = TempDir::new().unwrap();
    let mut cfg = flat_torus(8, true);
    cfg["invariants"] = json!(["willmore", "normII2", "htilde"]);
    let path = write_config(&dir, "t.json", &cfg);
    let a = confgeom(&["--jobs", "1", "compute", "--config", s(&path)]);
    let b = confgeom(&["--jobs", "4", "compute", "--config", s(&path)]);
    let c = confgeom(&["compute", "--config", s(&path)]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let csv = confgeom(&["compute", "--config", s(&path), "--format", "csv"]);
    let header = csv.stdout.lines().next().unwrap();
    assert!(header.starts_with("fingerprint,i,j,u1,u2"));
    assert!(header.contains("inv_willmore"));
    assert_eq!(csv.stdout.lines().count(), 65);
}

#[test]
fn compute_writes_to_out() {
    let dir = TempDir::new().unwrap();
    let mut cfg = flat_torus(8, false);
    cfg["invariants"] = json!(["willmore"]);
    let path = write_config(&dir, "t.json", &cfg);
    let out = dir.path().join("res.json");
    let r = confgeom(&["compute", "--config", s(&path), "--out", s(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(v["surface"], "flat_torus(0.6)");
}

#[test]
fn config_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = [
        json!({"surface": {"kind": "clifford"}, "grid": {"nu": 4, "nv": 8}}),
        json!({"surface": {"kind": "clifford"}, "grid": {"nu": 8, "nv": 8}, "colour": 1}),
        json!({"surface": {"kind": "clifford"}, "grid": {"nu": 8, "nv": 8}, "invariants": ["nope"]}),
        json!({"surface": {"kind": "clifford"}, "grid": {"nu": 8, "nv": 8}, "jet_order": 9}),
        json!({"surface": {"kind": "clifford"}, "grid": {"nu": 8, "nv": 8}, "jet_order": 5, "invariants": ["dlap_willmore"]}),
        json!({"surface": {"kind": "flat_torus", "params": [1.5]}, "grid": {"nu": 8, "nv": 8}}),
    ];
    for (k, cfg) in bad.iter().enumerate() {
        let path = write_config(&dir, &format!("bad{k}.json"), cfg);
        let r = confgeom(&["compute", "--config", s(&path)]);
        assert_eq!(r.code, 2, "config {k}: {}", r.stderr);
        assert!(r.stderr.starts_with("confgeom: "));
    }
    assert_eq!(confgeom(&["compute", "--config", "/nonexistent/cfg.json"]).code, 2);
}

#[test]
fn degenerate_ambient_point_exits_4() {
    let dir = TempDir::new().unwrap();
    let mut cfg = flat_torus(8, false);
    cfg["invariants"] = json!(["htilde"]);
    // root of det G at the grid origin, from the degeneracy quadratic
    cfg["points"] = json!([[1.0, 1.1815384615384612]]);
    let path = write_config(&dir, "deg.json", &cfg);
    let r = confgeom(&["compute", "--config", s(&path)]);
    assert_eq!(r.code, 4, "{}", r.stderr);
    assert!(r.stderr.contains("grid point (0, 0)"));
}

#[test]
fn exit_codes_follow_the_error_kind() {
    use confgeom::Error;
    let code = |e: Error| CliError::Core(e).exit_code();
    assert_eq!(code(Error::Umbilic(0.0)), 3);
    assert_eq!(CliError::at([1, 2], [0.1, 0.2])(Error::Umbilic(1e-14)).exit_code(), 3);
    assert_eq!(code(Error::GramDrift(1e-3, 1e-4)), 6);
    assert_eq!(code(Error::NonPositiveTime(-1.0)), 6);
    assert_eq!(CliError::CheckFailed { failed: 1, total: 3 }.exit_code(), 1);
    assert_eq!(CliError::Config("x".into()).exit_code(), 2);
}

#[test]
fn every_suite_passes_on_the_affine_torus() {
    let dir = TempDir::new().unwrap();
    let path = write_config(&dir, "t.json", &flat_torus(8, true));
    for suite in ["frame", "integrability", "appendixA", "appendixB", "conformal-scaling", "equivariance", "willmore"] {
        let r = confgeom(&["check", "--suite", suite, "--config", s(&path)]);
        assert_eq!(r.code, 0, "{suite}: {}{}", r.stdout, r.stderr);
        let report: Value = serde_json::from_str(&r.stdout).unwrap();
        assert_eq!(report["failed"], 0);
        for row in report["rows"].as_array().unwrap() {
            assert!(!row["anchor"].as_str().unwrap().is_empty());
        }
    }
}

#[test]
fn check_willmore_on_clifford() {
    let dir = TempDir::new().unwrap();
    let cfg = json!({"surface": {"kind": "clifford"}, "grid": {"nu": 8, "nv": 8}});
    let path = write_config(&dir, "c.json", &cfg);
    let r = confgeom(&["check", "--suite", "willmore", "--config", s(&path)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let report: Value = serde_json::from_str(&r.stdout).unwrap();
    let rows = report["rows"].as_array().unwrap();
    for name in ["conformal_gauss_map_minimal", "associate_surface_minimal", "ruled_surface_minimal"] {
        let row = rows.iter().find(|row| row["identity"] == name).unwrap();
        assert_eq!(row["counted"], true);
        assert!(row["residual"].as_f64().unwrap() < 1e-8);
    }
}

#[test]
fn conformal_scaling_exponents() {
    let dir = TempDir::new().unwrap();
    let path = write_config(&dir, "t.json", &flat_torus(8, true));
    let r = confgeom(&["check", "--suite", "conformal-scaling", "--config", s(&path), "--format", "csv"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    for name in ["normII2", "willmore", "norm_grad", "dlap_willmore"] {
        let line = r.stdout.lines().find(|l| l.contains(&format!(",exponent_{name},"))).unwrap();
        assert!(line.ends_with(",true,true"), "{line}");
    }
}

#[test]
fn corrupted_data_fails_integrability() {
    let dir = TempDir::new().unwrap();
    let data = dir.path().join("t.data.json");
    // 4th-order differences on tabulated data need a fine grid and a mild factor
    let mut cfg = flat_torus(64, false);
    cfg["lambda"] = json!({"kind": "affine", "params": [1.3, 0.2, 0.0, 0.0, 0.0]});
    cfg["output"] = json!({"data": s(&data)});
    let path = write_config(&dir, "t.json", &cfg);
    assert_eq!(confgeom(&["reconstruct", "--config", s(&path), "--out", s(&dir.path().join("r.json"))]).code, 0);

    let clean = confgeom(&["check", "--suite", "integrability", "--data", s(&data)]);
    assert_eq!(clean.code, 0, "{}{}", clean.stdout, clean.stderr);

    let mut v: Value = serde_json::from_slice(&std::fs::read(&data).unwrap()).unwrap();
    let entry = &mut v["omega_star"][1200][0][1];
    *entry = json!(entry.as_f64().unwrap() + 1e-3);
    let bad = dir.path().join("bad.data.json");
    std::fs::write(&bad, serde_json::to_vec(&v).unwrap()).unwrap();

    let r = confgeom(&["check", "--suite", "integrability", "--data", s(&bad)]);
    assert_eq!(r.code, 1);
    let report: Value = serde_json::from_str(&r.stdout).unwrap();
    let star = report["rows"].as_array().unwrap().iter().find(|row| row["identity"] == "codazzi_ystar_1").unwrap();
    assert!(star["residual"].as_f64().unwrap() > 1e-6);
    assert_eq!(star["pass"], false);

    let rec = confgeom(&["reconstruct", "--data", s(&bad)]);
    assert_eq!(rec.code, 5, "{}", rec.stderr);
}

#[test]
fn reconstruct_clifford_round_trip() {
    let dir = TempDir::new().unwrap();
    let cfg = json!({"surface": {"kind": "clifford"}, "grid": {"nu": 48, "nv": 48}});
    let path = write_config(&dir, "c.json", &cfg);
    let plain = confgeom(&["reconstruct", "--config", s(&path)]);
    assert_eq!(plain.code, 0, "{}", plain.stderr);
    let a: Value = serde_json::from_str(&plain.stdout).unwrap();
    assert!(a["deviation"]["m"].as_f64().unwrap() <= 1e-5, "{}", a["deviation"]);
    assert_eq!(a["points"].as_array().unwrap().len(), 48 * 48);

    let boosted = confgeom(&["reconstruct", "--config", s(&path), "--seed-transform", "boost:0.6,0,0.8,0,0.5"]);
    assert_eq!(boosted.code, 0, "{}", boosted.stderr);
    let b: Value = serde_json::from_str(&boosted.stdout).unwrap();
    for key in ["m", "norm_ii", "willmore"] {
        let (x, y) = (a["deviation"][key].as_f64().unwrap(), b["deviation"][key].as_f64().unwrap());
        assert!((x - y).abs() < 1e-9, "{key}: {x} vs {y}");
    }
    // the boosted surface is a different point set
    assert_ne!(a["points"][5]["x"], b["points"][5]["x"]);
}

#[test]
fn reconstruct_csv_lists_points() {
    let dir = TempDir::new().unwrap();
    let cfg = json!({"surface": {"kind": "clifford"}, "grid": {"nu": 32, "nv": 32}});
    let path = write_config(&dir, "c.json", &cfg);
    let r = confgeom(&["reconstruct", "--config", s(&path), "--format", "csv"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.lines().next().unwrap(), "fingerprint,i,j,u1,u2,x1,x2,x3,x4,lambda");
    assert_eq!(r.stdout.lines().count(), 1 + 32 * 32);
    assert!(r.stderr.contains("gram"));
}

#[test]
fn coarse_grid_exits_6() {
    let dir = TempDir::new().unwrap();
    let path = write_config(&dir, "t.json", &flat_torus(8, true));
    let r = confgeom(&["reconstruct", "--config", s(&path)]);
    assert_eq!(r.code, 6, "{}", r.stderr);
}

#[test]
fn bad_seed_transform_exits_2() {
    let dir = TempDir::new().unwrap();
    let path = write_config(&dir, "t.json", &flat_torus(8, false));
    for spec in ["bogus:1", "boost:0,0,0,0,1", "rotation:0,0,1", "boost:1,2"] {
        let r = confgeom(&["check", "--suite", "equivariance", "--config", s(&path), "--seed-transform", spec]);
        assert_eq!(r.code, 2, "{spec}: {}", r.stderr);
    }
}
