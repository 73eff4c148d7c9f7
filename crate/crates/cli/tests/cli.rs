use std::collections::BTreeMap;
use std::io::Write;
use std::process::{Command, Output};

use jwphase::pauli::DEFAULT_STABILIZER_CAP;
use jwphase::phasespace::{lambda_membership, make_theorem2_operator, vertex_check, Theorem2Label};
use tempfile::NamedTempFile;

const INJECTION: &str = "qubits 2\nstate H 0\nstate + 1\ngate CX 0 1\nmeasure IZ -> s\ngate SX 0 if s\nmeasure XI -> out\n";

fn jwphase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jwphase"))
        .args(args)
        .env_remove("JWPHASE_SEED")
        .env_remove("JWPHASE_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

/// Notes of the TSV output, `# key<TAB>value`.
fn notes(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .filter_map(|l| l.strip_prefix("# "))
        .filter_map(|l| l.split_once('\t'))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// Rows of a records output as key/value maps.
fn records(text: &str) -> Vec<BTreeMap<String, String>> {
    text.lines()
        .map(|l| {
            l.split(' ')
                .filter_map(|f| f.split_once('='))
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect()
        })
        .collect()
}

#[test]
fn table_fnm_reproduces_counts() {
    let o = jwphase(&["table-fnm", "5"]);
    assert!(o.status.success());
    let rows: Vec<String> = stdout(&o).lines().filter(|l| !l.starts_with('#')).map(String::from).collect();
    assert_eq!(rows[0], "n\tm=1\tm=2\tm=3\tm=4\tm=5\t2^n-1");
    assert_eq!(rows[3], "3\t15\t9\t15\t\t\t7");
    assert_eq!(rows[4], "4\t105\t45\t45\t105\t\t15");
    assert_eq!(rows[5], "5\t945\t315\t225\t315\t945\t31");
    assert_eq!(jwphase(&["table-fnm", "13"]).status.code(), Some(1));
}

#[test]
fn verify_vertices_one_qubit() {
    let o = jwphase(&["verify-vertices", "--n", "1", "--format", "records"]);
    assert!(o.status.success());
    let recs = records(&stdout(&o));
    let rows: Vec<_> = recs.iter().filter(|r| r.contains_key("eta")).collect();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r["vertex"] == "true" && r["rank"] == "3" && r["min_overlap"] == "0"));
}

#[test]
fn tampered_signs_are_reported_as_computed() {
    let o = jwphase(&["verify-vertices", "--n", "2"]);
    let first = stdout(&o)
        .lines()
        .find(|l| l.ends_with("\ttrue") && !l.starts_with('#'))
        .unwrap()
        .split('\t')
        .next()
        .unwrap()
        .to_string();
    let mut eta: Vec<bool> = first.chars().map(|c| c == '1').collect();
    eta[3] = !eta[3];
    let flipped: String = eta.iter().map(|b| if *b { '1' } else { '0' }).collect();
    let o = jwphase(&["verify-vertices", "--n", "2", "--eta", &flipped]);
    let op = make_theorem2_operator(&Theorem2Label::jordan_wigner(2, eta)).unwrap();
    let expected = lambda_membership(&op, DEFAULT_STABILIZER_CAP).unwrap().member
        && vertex_check(&op, DEFAULT_STABILIZER_CAP).unwrap().is_vertex;
    assert_eq!(notes(&stdout(&o))["vertices"], if expected { "1" } else { "0" });
    assert_eq!(o.status.code(), Some(if expected { 0 } else { 2 }));
}

#[test]
fn simulate_is_deterministic_and_close_to_oracle() {
    let c = file(INJECTION);
    let args = ["simulate", path(&c), "--shots", "20000", "--seed", "5", "--compare"];
    let a = jwphase(&args);
    let b = jwphase(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let tv: f64 = notes(&stdout(&a))["total_variation"].parse().unwrap();
    assert!(tv < 0.02);
    let oracle = stdout(&jwphase(&["simulate", path(&c), "--oracle"]));
    assert!(oracle.contains("00\t0.426776695297"));
}

#[test]
fn environment_seed_is_overridden_by_flag() {
    let c = file(INJECTION);
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_jwphase"));
        cmd.args(["simulate", path(&c), "--shots", "10"]);
        if let Some(f) = flag {
            cmd.args(["--seed", f]);
        }
        match env {
            Some(e) => cmd.env("JWPHASE_SEED", e),
            None => cmd.env_remove("JWPHASE_SEED"),
        };
        notes(&String::from_utf8(cmd.output().unwrap().stdout).unwrap())["seed"].clone()
    };
    assert_eq!(run(None, None), "0");
    assert_eq!(run(Some("9"), None), "9");
    assert_eq!(run(Some("9"), Some("4")), "4");
}

#[test]
fn simulate_errors_have_exit_codes() {
    let c = file(INJECTION);
    let o = jwphase(&["simulate", path(&c), "--set", "stabilizer", "--shots", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--quasi"));
    let bad = file("qubits 1\nstate H 0\nmeasure Q -> a\n");
    let o = jwphase(&["simulate", path(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(jwphase(&["simulate", "/nonexistent/circuit"]).status.code(), Some(1));
}

#[test]
fn quasi_mode_reports_error_bars() {
    let c = file(INJECTION);
    let o = jwphase(&["simulate", path(&c), "--quasi", "--set", "stabilizer", "--shots", "4000", "--format", "records"]);
    assert!(o.status.success());
    let recs = records(&stdout(&o));
    assert!(recs.iter().any(|r| r.get("one_norm").is_some_and(|v| v.starts_with("1.414213"))));
    assert_eq!(recs.iter().filter(|r| r.contains_key("stderr")).count(), 4);
}

#[test]
fn robustness_of_h_state() {
    let h = file("qubits 1\nstate H 0\n");
    let o = jwphase(&["robustness", path(&h), "--set", "linegraph,cnc,stabilizer"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: BTreeMap<&str, f64> = out
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("set"))
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f[0], f[2].parse().unwrap())
        })
        .collect();
    assert!((rows["linegraph"] - 1.0).abs() < 1e-9);
    assert!((rows["stabilizer"] - std::f64::consts::SQRT_2).abs() < 1e-6);
    assert_eq!(notes(&out)["ordering_linegraph_le_cnc_le_stabilizer"], "true");
    assert!(notes(&out).contains_key("stabilizer.dual"));
}

#[test]
fn exact_robustness_uses_denominators() {
    let s = file("qubits 1\nstate X=1/2,Y=1/2,Z=1/2 0\n");
    let o = jwphase(&["robustness", path(&s), "--set", "stabilizer", "--exact"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("stabilizer\t6\t3/2\t1/2\t0e0"), "{}", stdout(&o));
    let h = file("qubits 1\nstate H 0\n");
    assert_eq!(jwphase(&["robustness", path(&h), "--exact"]).status.code(), Some(1));
}

#[test]
fn decompose_reports_separating_vector() {
    let h = file("qubits 1\nstate H 0\n");
    let o = jwphase(&["decompose", path(&h), "--set", "stabilizer"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(notes(&stdout(&o))["feasible"], "false");
    let o = jwphase(&["decompose", path(&h), "--set", "linegraph"]);
    assert!(o.status.success());
    assert_eq!(notes(&stdout(&o))["weight_sum"], "1.000000000");
}

#[test]
fn operator_file_sets() {
    let ops = NamedTempFile::new().unwrap();
    let o = jwphase(&["build-phase-space", "--n", "1", "--out", path(&ops)]);
    assert!(o.status.success());
    assert_eq!(notes(&stdout(&o))["size"], "14");
    let h = file("qubits 1\nstate H 0\n");
    let selector = format!("file:{}", path(&ops));
    let o = jwphase(&["robustness", path(&h), "--set", &selector]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\t14\t1.000000000\t"));
}

#[test]
fn line_graph_recognition() {
    let claw = file("c a\nc b\nc d\n");
    assert_eq!(jwphase(&["line-graph", path(&claw)]).status.code(), Some(2));
    let o = jwphase(&["line-graph", path(&claw), "--twins"]);
    assert!(o.status.success());
    assert_eq!(notes(&stdout(&o))["classes"], "2");
    let triangle = file("a b\nb c\nc a\n");
    assert!(jwphase(&["line-graph", path(&triangle)]).status.success());
}

#[test]
fn bound_and_vertex_magic_commands() {
    let o = jwphase(&["stirling-bound"]);
    assert!(o.status.success());
    assert_eq!(notes(&stdout(&o))["all_hold"], "true");
    assert_eq!(stdout(&o).lines().filter(|l| !l.starts_with('#')).count(), 1 + (6..=60).sum::<usize>());
    let o = jwphase(&["vertex-magic", "--format", "records"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("quantity=robustness_of_magic value=3"));
    assert!(out.contains("quantity=bound value=5/2"));
    assert!(out.contains("quantity=comparison value=above"));
}
