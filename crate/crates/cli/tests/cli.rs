use std::path::Path;
use std::process::{Command, Output};

use effham::effective::{EffectiveTable, PGrid, Provenance};
use effham_cli::table_io::{load_table, save_table, TableFile};

fn effham(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_effham"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("EFFHAM_THREADS", t),
        None => cmd.env_remove("EFFHAM_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const EIKONAL_1D: &str = r#"
scales = [1.0]
pipelines = ["direct", "diagnostics"]

[hamiltonian]
kind = "radial"
profile = "eikonal"
dim = 1

[potential]
kind = "triangle"
c0 = 1.0
apex = 0.3333333333333333

[grid]
points = 64

[pgrid]
radius = 1.0
samples = 9

[solver]
window = 2.0
t_max = 40.0
"#;

const CRATER_1D: &str = r#"
scales = [0.5]
pipelines = ["direct", "composed", "duality"]

[hamiltonian]
kind = "radial"
profile = "crater"
dim = 1

[potential]
kind = "triangle"
c0 = 1.0
apex = 0.5

[grid]
points = 48

[pgrid]
radius = 1.5
samples = 7

[solver]
window = 2.0
t_max = 40.0
"#;

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn sweep_writes_tables_and_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", EIKONAL_1D);
    let out = dir.path().join("out");
    let o = effham(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()], None);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let table = load_table(&out.join("direct_S1.csv")).unwrap();
    assert_eq!(table.table.len(), 9);
    assert_eq!(table.metadata["pipeline"], "direct");
    assert_eq!(table.metadata["config_hash"].len(), 64);
    // H(p) = max{0, |p| - 1/2}
    let p = table.table.pgrid.node(8)[0];
    assert!((table.table.values[8] - (p - 0.5)).abs() < 3e-2);
    for name in ["summary.json", "diagnostics.json"] {
        let text = std::fs::read_to_string(out.join(name)).unwrap();
        serde_json::from_str::<serde_json::Value>(&text).unwrap();
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", EIKONAL_1D);
    let mut bytes = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(format!("out{threads}"));
        let o = effham(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()], Some(threads));
        assert_eq!(code(&o), 0);
        bytes.push(std::fs::read(out.join("direct_S1.csv")).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
}

#[test]
fn composed_and_piece_tables_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", CRATER_1D);
    let out = dir.path().join("out");
    let o = effham(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()], None);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let direct = load_table(&out.join("direct_S0.5.csv")).unwrap().table;
    let composed = load_table(&out.join("composed_S0.5.csv")).unwrap().table;
    assert_eq!(composed.provenance, Provenance::Composed);
    assert!(direct.max_abs_diff(&composed).unwrap().0 < 5e-2);
    let dual = load_table(&out.join("piece1_S0.5.csv")).unwrap().table;
    assert_eq!(dual.provenance, Provenance::Duality);
}

#[test]
fn decompose_reports_refusals_with_exit_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write(dir.path(), "crater.toml", CRATER_1D);
    let o = effham(&["decompose", "--config", &ok], None);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["plan"]["m"], 1);
    let ring = write(dir.path(), "ring.toml", &CRATER_1D.replace("\"crater\"", "\"ring_well\""));
    let o = effham(&["decompose", "--config", &ring], None);
    assert_eq!(code(&o), 2);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["plan"]["error"].as_str().unwrap().contains("hypothesis"));
}

fn saved(dir: &Path, name: &str, dim: usize, f: impl Fn(&[f64]) -> f64) -> String {
    let pg = PGrid::new(dim, 2.0, 21).unwrap();
    let t = EffectiveTable::from_fn(pg, Provenance::Direct, f);
    let path = dir.join(name);
    save_table(&path, &TableFile::new(t).with("scale", 1.0)).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn diagnose_flags_a_double_well_table() {
    let dir = tempfile::tempdir().unwrap();
    let well = saved(dir.path(), "well.csv", 2, |p| ((p[0] - 1.0).hypot(p[1])).min((p[0] + 1.0).hypot(p[1])));
    let bowl = saved(dir.path(), "bowl.csv", 2, |p| p[0].hypot(p[1]));
    let o = effham(&["diagnose", "--table", &well, "--check", "quasiconvexity"], None);
    assert_eq!(code(&o), 2);
    let o = effham(&["diagnose", "--table", &bowl, "--check", "evenness", "--check", "quasiconvexity"], None);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
    let o = effham(&["diagnose", "--table", &well, "--check", "levelset", "--levels", "1.5,2.3"], None);
    assert_eq!(code(&o), 2);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let passes: Vec<bool> = v["checks"].as_array().unwrap().iter().map(|c| c["report"]["pass"].as_bool().unwrap()).collect();
    assert_eq!(passes, vec![false, true]);
}

#[test]
fn contour_emits_json_polylines() {
    let dir = tempfile::tempdir().unwrap();
    let plane = saved(dir.path(), "plane.csv", 2, |p| p[0]);
    let out = dir.path().join("c.json");
    let o = effham(&["contour", "--table", &plane, "--levels", "0,9", "--out", out.to_str().unwrap()], None);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v[0]["level"], 0.0);
    assert_eq!(v[0]["polylines"].as_array().unwrap().len(), 1);
    assert!(v[1]["polylines"].as_array().unwrap().is_empty());
}

#[test]
fn discount_without_potential_passes() {
    let dir = tempfile::tempdir().unwrap();
    let text = EIKONAL_1D.replace("kind = \"triangle\"\nc0 = 1.0\napex = 0.3333333333333333", "kind = \"zero\"");
    let cfg = write(dir.path(), "run.toml", &text);
    let o = effham(&["discount", "--config", &cfg, "--lambda", "0.2,0.1"], None);
    assert_eq!(code(&o), 0, "{}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr));
}

#[test]
fn errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let typo = write(dir.path(), "bad.toml", &EIKONAL_1D.replace("window", "windw"));
    let o = effham(&["sweep", "--config", &typo], None);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("windw"));
    let missing = dir.path().join("nope.toml");
    assert_eq!(code(&effham(&["decompose", "--config", missing.to_str().unwrap()], None)), 1);
    let cfg = write(dir.path(), "run.toml", EIKONAL_1D);
    assert_eq!(code(&effham(&["decompose", "--config", &cfg], Some("zero"))), 1);
    let bad_list = effham(&["discount", "--config", &cfg, "--lambda", "0.1,x"], None);
    assert_eq!(code(&bad_list), 1);
}
