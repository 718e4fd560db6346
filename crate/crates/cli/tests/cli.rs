use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subradiance"))
}

fn run(sub: &str, config: &str, out: &Path, extra: &[&str]) -> Output {
    let cfg = out.with_extension("json");
    fs::write(&cfg, config).unwrap();
    bin().arg(sub).arg("--config").arg(&cfg).arg("--out").arg(out).args(extra).output().unwrap()
}

fn ok(sub: &str, config: &str, out: &Path, extra: &[&str]) {
    let o = run(sub, config, out, extra);
    assert!(o.status.success(), "{sub} failed: {}", String::from_utf8_lossy(&o.stderr));
}

fn svgs(dir: &Path) -> Vec<PathBuf> {
    fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).filter(|p| p.extension().is_some_and(|e| e == "svg")).collect()
}

fn check_csv(path: &Path) -> Vec<csv::StringRecord> {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let header = rdr.headers().unwrap().clone();
    let rows: Vec<_> = rdr.records().map(|r| r.unwrap()).collect();
    assert!(!rows.is_empty(), "{} is empty", path.display());
    for r in &rows {
        assert_eq!(r.len(), header.len());
    }
    rows
}

fn check_sweep_csv(path: &Path) {
    let text = fs::read_to_string(path).unwrap();
    assert!(text.starts_with("schema,experiment,n,kd_over_pi,sector,label,re,im,decay,solver,residual,wall_time_s,seed,sample,note\n"));
    for r in check_csv(path) {
        assert_eq!(&r[0], "sweep-v1");
        let im: f64 = r[7].parse().unwrap();
        let decay: f64 = r[8].parse().unwrap();
        assert!((decay + 2.0 * im).abs() <= 1e-12 * decay.abs().max(1.0));
        assert!(decay >= -1e-12);
    }
}

fn svg_named(dir: &Path, experiment: &str) {
    let files = svgs(dir);
    assert!(!files.is_empty());
    for f in files {
        let name = f.file_stem().unwrap().to_str().unwrap().to_string();
        let hash = name.strip_prefix(&format!("{experiment}-")).unwrap();
        assert_eq!(hash.len(), 12);
        assert!(hash.chars().all(|c| c.is_ascii_hexdigit()));
    }
}

#[test]
fn spectrum_with_vector_dump() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("spectrum");
    ok("spectrum", r#"{"n":[12],"kd":[0.25],"dump_vectors":true}"#, &out, &["--solver", "dense"]);
    check_sweep_csv(&out.join("spectrum.csv"));
    svg_named(&out, "spectrum");
    let dump: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("spectrum-N12-kd0.2500pi-vectors.json")).unwrap()).unwrap();
    let text = dump.to_string();
    assert!(text.contains("[["), "vectors should be nested [re,im] arrays");
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("spectrum-summary.json")).unwrap()).unwrap();
    assert_eq!(summary[0]["eigenvalues"], 66);
}

#[test]
fn reruns_are_identical_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"n":[16],"kd":[0.2],"disorder":{"amplitudes":[0.02],"samples":2}}"#;
    let read = |p: PathBuf| {
        let mut rdr = csv::Reader::from_path(p).unwrap();
        rdr.records().map(|r| r.unwrap().iter().enumerate().filter(|(i, _)| *i != 11).map(|(_, f)| f.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()
    };
    ok("disorder", cfg, &dir.path().join("a"), &["--seed", "5"]);
    ok("disorder", cfg, &dir.path().join("b"), &["--seed", "5"]);
    ok("disorder", cfg, &dir.path().join("c"), &["--seed", "6"]);
    let a = read(dir.path().join("a/disorder.csv"));
    assert_eq!(a, read(dir.path().join("b/disorder.csv")));
    assert_ne!(a, read(dir.path().join("c/disorder.csv")));
    check_sweep_csv(&dir.path().join("a/disorder.csv"));
    svg_named(&dir.path().join("a"), "disorder");
}

#[test]
fn disorder_requires_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let o = run("disorder", r#"{"n":[16],"kd":[0.2]}"#, &dir.path().join("x"), &[]);
    assert!(!o.status.success());
}

#[test]
fn unknown_keys_and_bad_solver_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = run("spectrum", r#"{"n":[12],"kd":[0.25],"colour":"red"}"#, &dir.path().join("x"), &[]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));
    let o = run("spectrum", r#"{"n":[12]}"#, &dir.path().join("y"), &["--solver", "lanczos"]);
    assert!(!o.status.success());
}

#[test]
fn phase_scaling_and_defect_write_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("phase");
    ok("phase-diagram", r#"{"n":[14,16],"kd":[0.16,0.17]}"#, &out, &["--jobs", "1"]);
    check_sweep_csv(&out.join("phase-diagram.csv"));
    check_csv(&out.join("phase-diagram-grid.csv"));
    svg_named(&out, "phase-diagram");

    let out = dir.path().join("scaling");
    ok("scaling", r#"{"n":{"start":14,"end":22,"step":2},"kd":[0.25],"fit_min_n":14}"#, &out, &[]);
    check_sweep_csv(&out.join("scaling.csv"));
    svg_named(&out, "scaling");

    let out = dir.path().join("defect");
    ok("defect", r#"{"n":[11],"kd":[0.25],"defect_sites":"scan"}"#, &out, &[]);
    check_sweep_csv(&out.join("defect.csv"));
    let s: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("defect-summary.json")).unwrap()).unwrap();
    assert!(s["scans"][0]["max_asymmetry"].as_f64().unwrap() < 1e-10);
}

#[test]
fn freespace_and_map_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("free");
    ok("freespace", r#"{"n":[30,40],"separation":[0.35],"kernel":["transverse"]}"#, &out, &[]);
    check_sweep_csv(&out.join("freespace.csv"));
    svg_named(&out, "freespace");

    let out = dir.path().join("map");
    ok("map-check", r#"{"n":[20],"kd":[0.25]}"#, &out, &[]);
    check_csv(&out.join("map-check.csv"));
    check_sweep_csv(&out.join("map-check-cross.csv"));
    let s: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("map-check-summary.json")).unwrap()).unwrap();
    assert!(s["max_residual"].as_f64().unwrap() <= 1e-12);
    assert!(s["max_gauge"].as_f64().unwrap() <= 1e-14);
}
