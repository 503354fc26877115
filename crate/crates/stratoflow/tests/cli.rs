//! End-to-end runs of the `stratoflow` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use stratocore::resonance::{a3_root_scan, RootOptions};
use stratoflow::manifest::parse_manifest;
use stratoflow::output::{read_columns, Summary};
use stratoflow::snapshot::load_snapshot;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stratoflow"))
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn launch(kind: &str, manifest: &Path, out: &Path, workers: usize) -> Output {
    bin()
        .args([kind, "--manifest"])
        .arg(manifest)
        .arg("--out")
        .arg(out)
        .args(["--workers", &workers.to_string()])
        .output()
        .unwrap()
}

fn summary(dir: &Path) -> Summary {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

fn assert_run_dir(dir: &Path) {
    assert!(
        dir.join("manifest.toml").is_file(),
        "no echoed manifest in {}",
        dir.display()
    );
    assert!(
        dir.join("summary.json").is_file(),
        "no summary in {}",
        dir.display()
    );
}

const SMALL_RUN: &str = "[torus]\na = [1.0, 1.3, 0.8]\nn = [8, 8, 6]\n[run]\ndt = 0.01\nt_final = 0.5\nsamples = 5\n[initial]\nrecipe = \"random_solenoidal\"\namplitude = 0.1\nmax_mode = 2\n";

#[test]
fn certify_unit_cube_writes_a_certificate() {
    let d = tempfile::tempdir().unwrap();
    let m = write(
        d.path(),
        "m.toml",
        "kind = \"certify\"\n[torus]\na = [1.0, 1.0, 1.0]\nn = [8, 8, 8]\n",
    );
    let out = d.path().join("out");
    let o = launch("certify", &m, &out, 1);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_run_dir(&out);
    let c: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("certificate.json")).unwrap()).unwrap();
    assert_eq!(c["N"], 4);
    assert_eq!(c["method"], "floating");
    assert_eq!(c["torus"], serde_json::json!([1.0, 1.0, 1.0]));
    assert!(c["margin"].as_f64().unwrap() > 0.0);
}

#[test]
fn echoed_manifest_has_defaults_and_reparses() {
    let d = tempfile::tempdir().unwrap();
    let m = write(d.path(), "m.toml", "kind = \"certify\"\n[torus]\na = [1.0, 1.0, 1.0]\nn = [8, 8, 8]\n[resonance]\ncutoff = 2\n");
    let out = d.path().join("out");
    assert_eq!(launch("certify", &m, &out, 1).status.code(), Some(0));
    let echo = fs::read_to_string(out.join("manifest.toml")).unwrap();
    assert!(echo.contains("nu_prime") && echo.contains("stability_constant"));
    let mut original = parse_manifest(&m).unwrap();
    original.output.dir = out.clone();
    assert_eq!(
        parse_manifest(&out.join("manifest.toml")).unwrap(),
        original
    );
}

#[test]
fn validation_errors_exit_2_with_the_field() {
    let d = tempfile::tempdir().unwrap();
    let m = write(
        d.path(),
        "m.toml",
        "kind = \"simulate\"\n[torus]\na = [1.0, 1.0, 1.0]\nn = [8, 8, 8]\n[run]\nnu = -1.0\n",
    );
    let o = launch("simulate", &m, &d.path().join("out"), 1);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("run.nu") && err.contains("line 6"), "{}", err);

    let m = write(
        d.path(),
        "k.toml",
        "kind = \"certify\"\n[torus]\na = [1.0, 1.0, 1.0]\nn = [8, 8, 8]\n",
    );
    assert_eq!(
        launch("simulate", &m, &d.path().join("out2"), 1)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        launch("certify", &m, &d.path().join("out3"), 0)
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn blowup_is_a_runtime_error_and_still_leaves_a_summary() {
    let d = tempfile::tempdir().unwrap();
    let m = write(
        d.path(),
        "m.toml",
        "kind = \"simulate\"\n[torus]\na = [1.0, 1.3, 0.8]\nn = [8, 8, 6]\n[run]\ndt = 0.01\nt_final = 0.5\nsamples = 5\nblowup_guard = 1e-6\n",
    );
    let out = d.path().join("out");
    let o = launch("simulate", &m, &out, 1);
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_run_dir(&out);
    let s = summary(&out);
    assert_eq!(s.exit_code, 3);
    assert!(s.error.unwrap().contains("blow-up"));
}

#[test]
fn resonant_torus_fails_certification_with_exit_4() {
    let roots = a3_root_scan(2, [1.0, 1.0], RootOptions::default()).unwrap();
    let r = roots
        .iter()
        .find(|r| (0.5..2.0).contains(&r.a3) && !r.warned)
        .expect("a resonant a3 near 1");
    let d = tempfile::tempdir().unwrap();
    let m = write(
        d.path(),
        "m.toml",
        &format!("kind = \"certify\"\n[torus]\na = [1.0, 1.0, {:?}]\nn = [8, 8, 8]\n[resonance]\ncutoff = 2\n", r.a3),
    );
    let out = d.path().join("out");
    let o = launch("certify", &m, &out, 1);
    assert_eq!(
        o.status.code(),
        Some(4),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_run_dir(&out);
    let s = summary(&out);
    assert!(
        s.error.as_deref().unwrap().contains("k = ("),
        "{:?}",
        s.error
    );
}

#[test]
fn propcheck_reports_every_check() {
    let d = tempfile::tempdir().unwrap();
    let m = write(d.path(), "m.toml", "kind = \"propcheck\"\n[torus]\na = [1.0, 1.0, 1.0]\nn = [8, 8, 8]\n[propcheck]\nsamples = 20\n");
    let out = d.path().join("out");
    let o = launch("propcheck", &m, &out, 1);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let s = summary(&out);
    let names: Vec<&str> = s.invariants.iter().map(|i| i.name.as_str()).collect();
    for n in ["bernstein", "gagliardo_nirenberg", "ordering", "poincare"] {
        assert!(names.contains(&n), "{:?}", names);
    }
    assert!(out.join("propcheck.csv").is_file());
}

#[test]
fn converge_writes_four_decreasing_rows_independent_of_workers() {
    let d = tempfile::tempdir().unwrap();
    let m = write(
        d.path(),
        "m.toml",
        &format!(
            "kind = \"converge\"\n{}[converge]\nepsilons = [0.1, 0.03, 0.01, 0.003]\n",
            SMALL_RUN
        ),
    );
    let (a, b) = (d.path().join("a"), d.path().join("b"));
    let o = launch("converge", &m, &a, 1);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(launch("converge", &m, &b, 3).status.code(), Some(0));
    let cols = read_columns(&a.join("converge.csv")).unwrap();
    let sup = &cols.iter().find(|c| c.0 == "sup_Hs").unwrap().1;
    assert_eq!(sup.len(), 4);
    assert!(sup.windows(2).all(|w| w[1] < w[0]), "{:?}", sup);
    assert_eq!(
        fs::read(a.join("converge.csv")).unwrap(),
        fs::read(b.join("converge.csv")).unwrap()
    );
    let report = bin().arg("summarize").arg(&a).output().unwrap();
    let text = String::from_utf8_lossy(&report.stdout);
    assert!(
        text.contains("ratio") && text.contains("strictly decreasing"),
        "{}",
        text
    );
}

#[test]
fn simulate_is_deterministic_and_snapshots_restart() {
    let d = tempfile::tempdir().unwrap();
    let m = write(
        d.path(),
        "m.toml",
        &format!(
            "kind = \"simulate\"\nseed = 9\n{}[output]\nsnapshot_every = 2\n",
            SMALL_RUN
        ),
    );
    let (a, b) = (d.path().join("a"), d.path().join("b"));
    assert_eq!(launch("simulate", &m, &a, 1).status.code(), Some(0));
    assert_eq!(launch("simulate", &m, &b, 1).status.code(), Some(0));
    assert_eq!(
        fs::read(a.join("trajectory.csv")).unwrap(),
        fs::read(b.join("trajectory.csv")).unwrap()
    );
    let snap = a.join("snapshots/snap_00004.bin");
    let s = load_snapshot(&snap).unwrap();
    assert!((s.time - 0.4).abs() < 1e-12);

    let restart = write(
        d.path(),
        "r.toml",
        &format!(
            "kind = \"simulate\"\n[torus]\na = [1.0, 1.3, 0.8]\nn = [8, 8, 6]\n[run]\ndt = 0.01\nt_final = 0.1\nsamples = 1\n[initial]\nrecipe = \"snapshot\"\npath = {:?}\n",
            snap.to_str().unwrap()
        ),
    );
    let c = d.path().join("c");
    assert_eq!(launch("simulate", &restart, &c, 1).status.code(), Some(0));
    let first = read_columns(&a.join("trajectory.csv")).unwrap();
    let again = read_columns(&c.join("trajectory.csv")).unwrap();
    let l2 = |cols: &[(String, Vec<f64>)]| cols.iter().find(|c| c.0 == "L2").unwrap().1.clone();
    assert_eq!(l2(&again)[0].to_bits(), l2(&first)[4].to_bits());
}

#[test]
fn limit_with_corrector_passes_its_invariants() {
    let d = tempfile::tempdir().unwrap();
    let m = write(
        d.path(),
        "m.toml",
        &format!(
            "kind = \"limit\"\n{}[limit]\ncorrector = true\ncorrector_n = 2\n",
            SMALL_RUN
        ),
    );
    let out = d.path().join("out");
    let o = launch("limit", &m, &out, 1);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    for f in ["limit.csv", "corrector.csv", "certificate.json"] {
        assert!(out.join(f).is_file(), "{}", f);
    }
    let s = summary(&out);
    assert!(s
        .invariants
        .iter()
        .any(|i| i.name == "corrector_identity" && i.passed));
}

#[test]
fn resonance_scan_lists_triads() {
    let d = tempfile::tempdir().unwrap();
    let m = write(d.path(), "m.toml", "kind = \"resonance-scan\"\n[torus]\na = [1.0, 1.0, 1.0]\nn = [8, 8, 8]\n[resonance]\ncutoff = 1\nlabels = \"osc\"\n");
    let out = d.path().join("out");
    assert_eq!(launch("resonance-scan", &m, &out, 1).status.code(), Some(0));
    let text = fs::read_to_string(out.join("resonant_triads.csv")).unwrap();
    assert!(text.starts_with("k1,k2,k3,m1,m2,m3,a,b,c,omega_sum,set_class\n"));
}

#[test]
fn summarize_rejects_an_empty_directory_and_frame_dumps_json() {
    let d = tempfile::tempdir().unwrap();
    let o = bin().arg("summarize").arg(d.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("summary.json"));

    let m = write(
        d.path(),
        "m.toml",
        "kind = \"certify\"\n[torus]\na = [1.0, 1.0, 1.0]\nn = [8, 8, 8]\n",
    );
    let o = bin()
        .args(["frame", "--manifest"])
        .arg(&m)
        .args(["--at", "1,-1,2"])
        .output()
        .unwrap();
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n"], serde_json::json!([1, -1, 2]));
    assert!((v["omega"].as_f64().unwrap() - (2.0f64 / 6.0).sqrt()).abs() < 1e-15);
}
