use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares against a stored golden file; `UPDATE_GOLDEN=1` rewrites it.
fn assert_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

struct Sandbox {
    dir: TempDir,
}

impl Sandbox {
    fn new() -> Self {
        Sandbox {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_string_lossy().into_owned()
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_incidence"))
            .args(args)
            .current_dir(self.dir.path())
            .output()
            .unwrap()
    }

    fn code(&self, args: &[&str]) -> i32 {
        let out = self.run(args);
        out.status.code().unwrap()
    }

    fn read(&self, name: &str) -> String {
        std::fs::read_to_string(self.path(name)).unwrap()
    }

    fn json(&self, name: &str) -> Value {
        serde_json::from_str(&self.read(name)).unwrap()
    }

    fn write(&self, name: &str, text: &str) {
        std::fs::write(self.path(name), text).unwrap();
    }
}

fn keys(v: &Value) -> Vec<String> {
    v.as_object().unwrap().keys().cloned().collect()
}

#[test]
fn generate_grid_lines_four() {
    let s = Sandbox::new();
    assert_eq!(s.code(&["generate", "--family", "grid-lines", "--n", "4", "--out", "g.json"]), 0);
    let c = s.json("g.json");
    assert_eq!(c["schema"], "incidence-config/1");
    assert_eq!(c["points"].as_array().unwrap().len(), 128);
    assert_eq!(c["curves"].as_array().unwrap().len(), 64);
    assert!(Path::new(&s.path("g.json.manifest.json")).is_file());
}

#[test]
fn generate_leaf_family_carries_hypersurface() {
    let s = Sandbox::new();
    assert_eq!(s.code(&["generate", "--family", "leaf", "--g", "z1^2", "--count", "5", "--out", "l.json"]), 0);
    let c = s.json("l.json");
    assert_eq!(c["ground_field"], "C2");
    assert_eq!(c["curves"].as_array().unwrap().len(), 5);
    assert_eq!(c["hypersurface"]["vars"], 4);
}

#[test]
fn generate_from_spec_file_matches_flags() {
    let s = Sandbox::new();
    s.write("spec.json", r#"{"family": "complex-product", "a": 3, "b": 4, "seed": 2}"#);
    assert_eq!(s.code(&["generate", "--spec", "spec.json", "--out", "a.json"]), 0);
    let flags = ["--seed", "2", "generate", "--family", "complex-product", "--a", "3", "--b", "4", "--out", "b.json"];
    assert_eq!(s.code(&flags), 0);
    assert_eq!(s.read("a.json"), s.read("b.json"));
}

#[test]
fn usage_and_input_errors_exit_two() {
    let s = Sandbox::new();
    assert_eq!(s.code(&["generate", "--out", "x.json"]), 2);
    assert_eq!(s.code(&["generate", "--family", "grid-lines", "--out", "x.json"]), 2);
    assert_eq!(s.code(&["generate", "--family", "grid-lines", "--n", "0", "--out", "x.json"]), 2);
    assert_eq!(s.code(&["frobnicate"]), 2);
    assert_eq!(s.code(&["certify", "missing.json", "--k", "2", "--s", "1", "--out", "c.json"]), 2);
    s.write("bad.json", "{\"schema\": \"incidence-config/1\", \"points\": 3}");
    assert_eq!(s.code(&["count", "bad.json", "--out", "c.json"]), 2);
    s.write("other.json", "{\"schema\": \"other/9\", \"ground_field\": \"R2\", \"metadata\": {\"generator\": \"x\"}, \"points\": [], \"curves\": []}");
    assert_eq!(s.code(&["count", "other.json", "--out", "c.json"]), 2);
    s.write("spec.json", r#"{"family": "grid-lines", "n": 2, "extra": 1}"#);
    assert_eq!(s.code(&["generate", "--spec", "spec.json", "--out", "x.json"]), 2);
    assert!(!Path::new(&s.path("c.json.manifest.json")).exists());
}

#[test]
fn count_grid_lines_three() {
    let s = Sandbox::new();
    s.code(&["generate", "--family", "grid-lines", "--n", "3", "--out", "g.json"]);
    assert_eq!(s.code(&["count", "g.json", "--out", "c.json", "--matrix", "m.csv"]), 0);
    assert_golden("count_grid_lines_n3.json", &s.read("c.json"));
    let matrix = s.read("m.csv");
    assert!(matrix.starts_with("point,curve\n"));
    assert_eq!(matrix.lines().count(), 82);
    assert_eq!(s.code(&["--format", "csv", "count", "g.json", "--out", "c.csv"]), 0);
    assert_eq!(s.read("c.csv"), "m,n,I\n54,27,81\n");
}

#[test]
fn count_without_curves_is_zero() {
    let s = Sandbox::new();
    s.code(&["generate", "--family", "random", "--m", "12", "--out", "r.json"]);
    assert_eq!(s.code(&["count", "r.json", "--out", "c.json"]), 0);
    let c = s.json("c.json");
    assert_eq!((c["m"].as_u64(), c["n"].as_u64(), c["I"].as_u64()), (Some(12), Some(0), Some(0)));
}

#[test]
fn count_complex_product_matches_golden_configuration() {
    let s = Sandbox::new();
    let core_golden = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden/complex_product_8x8_seed0.json");
    assert_eq!(s.code(&["count", core_golden.to_str().unwrap(), "--out", "c.json"]), 0);
    assert_eq!(s.json("c.json")["I"], 121);
    s.code(&["generate", "--family", "complex-product", "--a", "8", "--b", "8", "--out", "p.json"]);
    assert_eq!(s.read("p.json"), std::fs::read_to_string(core_golden).unwrap());
}

#[test]
fn certify_exit_codes() {
    let s = Sandbox::new();
    s.code(&["generate", "--family", "grid-lines", "--n", "3", "--out", "g.json"]);
    assert_eq!(s.code(&["certify", "g.json", "--k", "2", "--s", "1", "--out", "ok.json"]), 0);
    assert_golden("certify_grid_lines_n3.json", &s.read("ok.json"));

    let mut config = s.json("g.json");
    let first = config["curves"][0].clone();
    config["curves"].as_array_mut().unwrap().push(first);
    s.write("dup.json", &serde_json::to_string(&config).unwrap());
    let out = s.run(&["certify", "dup.json", "--k", "2", "--s", "1", "--out", "bad.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("violated"));
    assert_eq!(s.json("bad.json")["certificate"]["status"], "violated");

    assert_eq!(s.code(&["certify", "g.json", "--k", "2", "--s", "1", "--cap", "10", "--out", "cap.json"]), 3);
    assert_eq!(s.json("cap.json")["certificate"]["status"], "indeterminate");
    assert_eq!(s.code(&["certify", "g.json", "--k", "0", "--s", "1", "--out", "zero.json"]), 2);
}

#[test]
fn partition_occupancy_csv() {
    let s = Sandbox::new();
    s.code(&["generate", "--family", "random", "--m", "4096", "--out", "pts.json"]);
    let code = s.code(&["--format", "csv", "partition", "pts.json", "--r", "8", "--seed", "0", "--out", "occ.csv"]);
    assert_eq!(code, 0);
    let csv = s.read("occ.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("class,points,curves"));
    let counts: Vec<usize> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(!counts.is_empty());
    assert!(counts.iter().all(|&c| c <= 256), "{counts:?}");
}

#[test]
fn partition_report_schema() {
    let s = Sandbox::new();
    s.code(&["generate", "--family", "random", "--m", "200", "--n", "5", "--out", "pts.json"]);
    assert_eq!(s.code(&["partition", "pts.json", "--r", "4", "--out", "p.json"]), 0);
    let p = s.json("p.json");
    assert_eq!(p["schema"], "incidence-partition/1");
    assert_eq!(
        keys(&p),
        [
            "class_bound", "classes", "crossings", "delta", "dim", "m", "max_class", "max_curve_classes",
            "on_surface", "partition", "r", "schema", "seed", "stats", "within_bound"
        ]
    );
    assert_eq!(p["crossings"].as_array().unwrap().len(), 5);
    assert!(p["crossings"].as_array().unwrap().iter().all(|c| c["exact"] == true));
}

#[test]
fn foliate_levi_flat_family_passes() {
    let s = Sandbox::new();
    s.code(&["generate", "--family", "leaf", "--g", "z1^3 + i*z1", "--count", "4", "--out", "leaves.json"]);
    let mut config = s.json("leaves.json");
    s.write("P.json", &serde_json::to_string(&config["hypersurface"]).unwrap());
    config.as_object_mut().unwrap().remove("hypersurface");
    s.write("bare.json", &serde_json::to_string(&config).unwrap());
    assert_eq!(s.code(&["foliate", "--hypersurface", "P.json", "--curves", "bare.json", "--out", "f.json"]), 0);
    let f = s.json("f.json");
    assert_eq!(f["all_pass"], true);
    assert_eq!(f["curves"].as_array().unwrap().len(), 4);
    assert_eq!(s.code(&["foliate", "--curves", "bare.json", "--out", "f2.json"]), 2);
    assert_eq!(s.code(&["--format", "csv", "foliate", "--curves", "leaves.json", "--out", "f.csv"]), 0);
    let csv = s.read("f.csv");
    assert!(csv.starts_with("curve,point,status,defect,tangency\n"));
    assert_eq!(csv.lines().count(), 41);
}

#[test]
fn foliate_sphere_is_violated() {
    let s = Sandbox::new();
    s.code(&["generate", "--family", "leaf", "--g", "z1", "--count", "2", "--out", "leaves.json"]);
    let sphere = "x1^2 + y1^2 + x2^2 + y2^2 - 1";
    assert_eq!(s.code(&["foliate", "--hypersurface", sphere, "--curves", "leaves.json", "--out", "f.json"]), 1);
    assert_eq!(s.json("f.json")["all_pass"], false);
}

#[test]
fn bound_report_golden() {
    let s = Sandbox::new();
    let args = ["bound", "--m", "100", "--n", "100", "--i", "500", "--k", "2", "--s", "1", "--out", "b.json"];
    assert_eq!(s.code(&args), 0);
    assert_golden("bound_m100_n100_i500.json", &s.read("b.json"));
    assert_eq!(s.code(&["bound", "--m", "100", "--k", "2", "--s", "1", "--out", "x.json"]), 2);
    assert_eq!(s.code(&["bound", "--m", "0", "--n", "1", "--i", "0", "--k", "2", "--s", "1", "--out", "x.json"]), 2);
}

#[test]
fn fit_grid_series_within_one_percent() {
    let s = Sandbox::new();
    let mut inputs = Vec::new();
    for n in 3..=8 {
        let name = format!("g{n}.json");
        s.code(&["generate", "--family", "grid-lines", "--n", &n.to_string(), "--out", &name]);
        inputs.push(name);
    }
    let mut args: Vec<&str> = vec!["fit"];
    args.extend(inputs.iter().map(String::as_str));
    args.extend(["--out", "fit.json", "--plot", "plot.csv"]);
    assert_eq!(s.code(&args), 0);
    let fit = s.json("fit.json");
    assert!(fit["max_relative_error"].as_f64().unwrap() < 0.01);
    assert!((fit["fit"]["combined"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-9);
    let plot = s.read("plot.csv");
    assert!(plot.starts_with("log_m,log_n,log_i,log_predicted\n"));
    assert_eq!(plot.lines().count(), 7);

    s.write("series.csv", "m,n,I\n54,27,81\n128,64,256\n250,125,625\n");
    assert_eq!(s.code(&["--format", "csv", "fit", "series.csv", "--out", "fit.csv"]), 0);
    assert_eq!(s.read("fit.csv").lines().count(), 4);
    s.write("two.json", r#"[{"m": 2, "n": 1, "I": 1}, {"m": 16, "n": 8, "I": 16}]"#);
    assert_eq!(s.code(&["fit", "two.json", "--out", "x.json"]), 2);
}

#[test]
fn manifest_records_the_run() {
    let s = Sandbox::new();
    s.code(&["--seed", "9", "--threads", "2", "generate", "--family", "unit-circles", "--n", "3", "--out", "u.json"]);
    let m = s.json("u.json.manifest.json");
    assert_eq!(
        keys(&m),
        [
            "command", "exit_code", "inputs", "invocation", "outputs", "schema", "seed", "started_unix_ms",
            "threads", "version", "wall_clock_ms"
        ]
    );
    assert_eq!(m["schema"], "incidence-manifest/1");
    assert_eq!(m["command"], "generate");
    assert_eq!(m["seed"], 9);
    assert_eq!(m["threads"], 2);
    assert_eq!(m["invocation"]["command"]["n"], 3);
    assert_eq!(m["outputs"][0]["path"], s.path("u.json"));
    assert_eq!(m["outputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert!(m["version"].as_str().unwrap().starts_with("incidence-cli "));
}

#[test]
fn replay_detects_changed_inputs_and_reports_identity() {
    let s = Sandbox::new();
    s.code(&["generate", "--family", "grid-lines", "--n", "2", "--out", "g.json"]);
    s.code(&["certify", "g.json", "--k", "2", "--s", "1", "--out", "c.json"]);
    let out = s.run(&["--threads", "3", "replay", "c.json.manifest.json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["identical"], true);
    assert_eq!(report["threads"], 3);

    let mut manifest = s.json("c.json.manifest.json");
    manifest["outputs"][0]["sha256"] = Value::from("0".repeat(64));
    s.write("tampered.json", &serde_json::to_string(&manifest).unwrap());
    assert_eq!(s.code(&["replay", "tampered.json", "--out", "r.json"]), 1);
    assert_eq!(s.json("r.json")["identical"], false);

    s.code(&["generate", "--family", "grid-lines", "--n", "3", "--out", "g.json"]);
    assert_eq!(s.code(&["replay", "c.json.manifest.json"]), 2);
    assert_eq!(s.code(&["replay", "missing.json"]), 2);
}
