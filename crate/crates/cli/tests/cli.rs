use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_systole")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn field<'a>(out: &'a str, key: &str) -> &'a str {
    out.split_whitespace().find_map(|t| t.strip_prefix(key)).unwrap_or_else(|| panic!("no `{key}` in {out}"))
}

#[test]
fn validate_reports_topology() {
    let q = run(&["--input", &data("torus_schema.surf"), "validate"]);
    assert!(q.status.success());
    assert!(stdout(&q).contains("g=1 b=0"));
    let p = run(&["--input", &data("pants.surf"), "validate"]);
    assert!(stdout(&p).contains("g=0 b=3"));
}

#[test]
fn malformed_surface_reports_line() {
    let path = std::env::temp_dir().join(format!("systole-cli-bad-{}.surf", std::process::id()));
    std::fs::write(&path, "surface 1 2\nrot 0 0 2 1\nw 0 1\nw 1 1\n").unwrap();
    let o = run(&["--input", path.to_str().unwrap(), "validate"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line "));
}

#[test]
fn systole_lengths() {
    let q = data("torus_schema.surf");
    let lens: Vec<String> = (1..=3)
        .map(|k| field(&stdout(&run(&["--input", &q, "systole", "--k", &k.to_string()])), "length=").to_string())
        .collect();
    assert_eq!(lens, ["1/1", "1/1", "2/1"]);
    assert_eq!(field(&stdout(&run(&["--input", &data("grid3x3.surf"), "systole", "--k", "1"])), "length="), "3/1");
    assert_eq!(field(&stdout(&run(&["--input", &data("pants.surf"), "systole"])), "length="), "3/1");
}

#[test]
fn arcs_on_pants_and_annulus() {
    let p = data("pants.surf");
    let o = run(&["--input", &p, "arc", "--boundary", "1", "--pair", "0", "1"]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "length="), "3/1");
    let all = stdout(&run(&["--input", &p, "arcs-all", "--boundary", "1"]));
    assert!(all.contains("length=3/1"));
    let a = run(&["--input", &data("annulus.surf"), "arc", "--boundary", "0", "--pair", "0", "1"]);
    assert_eq!(a.status.code(), Some(3));
    assert!(stdout(&a).contains("none"));
}

#[test]
fn vertex_off_boundary_is_an_input_error() {
    let o = run(&["--input", &data("grid3x4_perforated.surf"), "arc", "--boundary", "0", "--pair", "0", "11"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn spectrum_and_cap() {
    let o = run(&["--input", &data("torus_schema.surf"), "spectrum", "--bound", "2"]);
    assert!(stdout(&o).contains("values 1/1 1/1 2/1"));
    let cap = run(&["--input", &data("grid3x4_perforated.surf"), "spectrum", "--bound", "30", "--max-states", "20000"]);
    assert_eq!(cap.status.code(), Some(4));
    let g2 = run(&["--input", &data("genus2.surf"), "spectrum"]);
    assert_eq!(g2.status.code(), Some(2));
}

#[test]
fn cut_grid_along_row() {
    let o = run(&["--input", &data("grid3x3.surf"), "cut", "--curves", &data("grid3x3_row0.curves")]);
    let out = stdout(&o);
    assert!(out.contains("pieces=1"));
    assert!(out.contains("g=0 b=2"));
}

#[test]
fn reports_are_deterministic_and_thread_independent() {
    let t = data("grid3x3.surf");
    let a = run(&["--input", &t, "--format", "json", "systole", "--k", "3"]);
    let b = run(&["--input", &t, "--format", "json", "--threads", "1", "systole", "--k", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).expect("valid json");
    assert_eq!(v["outputs"]["length"], "6/1");
    assert_eq!(v["command"], "systole");
    assert_eq!(v["input_sha256"].as_str().map(str::len), Some(64));
}
