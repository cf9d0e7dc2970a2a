use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use susy_graph::cli::{load_graph, run, Outcome};
use susy_graph::graph::OrientedGraph;

fn bundled(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("graphs")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("susy-graph").chain(args.iter().copied()))
}

fn payload(args: &[&str]) -> Value {
    let out = cli(args);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["status"], "ok");
    v["payload"].clone()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn witten_on_c6() {
    let p = payload(&["witten", &bundled("c6.json")]);
    assert_eq!(p["schema"], "witten/1");
    assert_eq!(p["witten"], 0);
    assert_eq!(p["routes"]["kernel"], 0);
    assert_eq!(p["routes"]["trace"].as_array().unwrap().len(), 3);
    let p = payload(&["witten", &bundled("p2.json"), "--beta", "0.25,4"]);
    assert_eq!(p["witten"], 1);
    assert_eq!(p["routes"]["trace"][1]["beta"], 4.0);
}

#[test]
fn susy_spectrum_of_triangle() {
    let p = payload(&["spectrum", &bundled("triangle.json"), "--operator", "susy"]);
    let ev = floats(&p["eigenvalues"]);
    let expected = [0.0, 0.0, 3.0, 3.0, 3.0, 3.0];
    assert!(ev.iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-10));
    assert_eq!(p["kernel_dim"], 2);
    assert!((p["fiedler"].as_f64().unwrap() - 3.0).abs() < 1e-10);
    assert_eq!(p["merris"]["holds"], true);
    let p = payload(&["spectrum", &bundled("p2.json"), "--operator", "dirac"]);
    let ev = floats(&p["eigenvalues"]);
    assert!((ev[0] + 2f64.sqrt()).abs() < 1e-10 && (ev[2] - 2f64.sqrt()).abs() < 1e-10);
}

#[test]
fn k4_has_only_orientation_moves() {
    let p = payload(&["rewire", "enumerate", &bundled("k4.json")]);
    assert_eq!(p["structural_moves"], 0);
    assert_eq!(p["orientation_moves"], 6);
    assert!(p["moves"]
        .as_array()
        .unwrap()
        .iter()
        .all(|m| m["orientation_only"] == true));
    let csv = cli(&["rewire", "enumerate", &bundled("k4.json"), "--csv"]);
    assert_eq!(csv.code, 0);
    assert_eq!(csv.stdout.lines().count(), 7);
    assert!(csv.stdout.starts_with("edge,endpoint,to,orientation_only"));
}

#[test]
fn scenario_rewirings() {
    let p = payload(&[
        "rewire",
        "apply",
        &bundled("triangle_pendant.json"),
        "--edge",
        "e3",
        "--endpoint",
        "tail",
        "--to",
        "v4",
    ]);
    assert_eq!(p["before"], serde_json::json!([2, 1]));
    assert_eq!(p["after"], serde_json::json!([1, 0]));
    let p = payload(&[
        "rewire",
        "apply",
        &bundled("bottleneck.json"),
        "--edge",
        "e3",
        "--endpoint",
        "tail",
        "--to",
        "v6",
    ]);
    assert_eq!(
        (p["before"].clone(), p["after"].clone()),
        (serde_json::json!([1, 1]), serde_json::json!([2, 2]))
    );
    let p = payload(&[
        "rewire",
        "apply",
        &bundled("disjoint_triangles.json"),
        "--edge",
        "e2",
        "--endpoint",
        "head",
        "--to",
        "v4",
    ]);
    assert_eq!(
        (p["before"].clone(), p["after"].clone()),
        (serde_json::json!([2, 2]), serde_json::json!([1, 1]))
    );

    let bad = cli(&[
        "rewire",
        "apply",
        &bundled("triangle.json"),
        "--edge",
        "e1",
        "--endpoint",
        "head",
        "--to",
        "v3",
    ]);
    assert_eq!(bad.code, 1);
    let err: Value = serde_json::from_str(&bad.stderr).unwrap();
    assert_eq!(err["status"], "error");
    assert!(err["diagnostics"][0].as_str().unwrap().contains("illegal"));

    let p = payload(&["rewire", "minimize", &bundled("disjoint_triangles.json")]);
    assert_eq!(p["steps"].as_array().unwrap().len(), 1);
    assert_eq!(p["vacuum"]["n_bosonic_zero"], 1);
    assert_eq!(p["vacuum"]["n_fermionic_zero"], 1);
}

#[test]
fn vacuum_and_info() {
    let p = payload(&["vacuum", &bundled("p4.json")]);
    assert_eq!(p["kind"], "purely-bosonic");
    assert_eq!(p["witten_index"], 1);
    let p = payload(&["info", &bundled("bowtie.txt")]);
    assert_eq!(p["name"], "bowtie");
    assert_eq!(p["components"], 2);
    assert_eq!(p["cycle_rank"], 2);
    assert_eq!(p["betti"], serde_json::json!([2, 2]));
    let p = payload(&["info", &bundled("triangle_tail.json")]);
    assert_eq!(p["bridges"], serde_json::json!(["e4"]));
}

#[test]
fn operators_command() {
    let p = payload(&["operators", &bundled("p2.json"), "--operator", "incidence"]);
    assert_eq!(p["operators"][0]["matrix"]["rows"], 2);
    assert_eq!(p["operators"][0]["matrix"]["entries"], serde_json::json!([-1, 1]));
    let p = payload(&["operators", &bundled("p2.json"), "--operator", "q2"]);
    assert_eq!(p["operators"][0]["phase"], "imaginary");
    let p = payload(&["operators", &bundled("triangle.json")]);
    assert_eq!(p["operators"].as_array().unwrap().len(), 11);
    assert_eq!(cli(&["operators", &bundled("p2.json"), "--operator", "nope"]).code, 1);
}

#[test]
fn steady_and_evolve() {
    let p = payload(&["steady", &bundled("c6.json"), "--sector", "edge"]);
    assert_eq!(p["dim"], 1);
    let v = floats(&p["basis"][0]);
    assert!(v.iter().all(|x| (x.abs() - 1.0 / 6f64.sqrt()).abs() < 1e-10));

    let p = payload(&[
        "evolve",
        &bundled("triangle.json"),
        "--state",
        &bundled("triangle_state.json"),
        "--t",
        "1.5",
    ]);
    assert!((p["norm"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert_eq!(p["steady"], false);
}

#[test]
fn walk_commands() {
    let p = payload(&[
        "walksum",
        &bundled("triangle.json"),
        "--from",
        "v1",
        "--to",
        "v2",
        "--t",
        "0.5",
        "--tol",
        "1e-12",
        "--oracle",
    ]);
    assert!(p["difference"].as_f64().unwrap() < 1e-11);
    assert_eq!(p["oracle"]["agrees"], true);
    let p = payload(&["oracle", &bundled("bowtie.txt"), "--k", "3"]);
    assert_eq!(p["holds"], true);
    let p = payload(&["dirac", &bundled("triangle.json"), "--simplex", "v1"]);
    assert_eq!(p["reports"][0]["first_divergent_order"], 2);
    let p = payload(&["dirac", &bundled("p2.json")]);
    assert_eq!(p["reports"].as_array().unwrap().len(), 3);
}

#[test]
fn morse_commands() {
    let p = payload(&[
        "morse",
        "check",
        &bundled("triangle.json"),
        "--function",
        &bundled("triangle_morse.json"),
    ]);
    assert_eq!(p["is_morse"], true);
    let p = payload(&[
        "morse",
        "critical",
        &bundled("triangle.json"),
        "--function",
        &bundled("triangle_morse.json"),
    ]);
    assert_eq!(p["critical_vertices"], serde_json::json!(["v1"]));
    assert_eq!(p["critical_edges"], serde_json::json!(["e3"]));
    assert_eq!(p["pairs"], serde_json::json!([["v2", "e1"], ["v3", "e2"]]));
    assert_eq!(p["holds"], true);
    let a = cli(&["morse", "random", &bundled("k4.json"), "--seed", "3"]);
    let b = cli(&["morse", "random", &bundled("k4.json"), "--seed", "3"]);
    assert_eq!(a, b);
}

#[test]
fn continuum_and_cheeger() {
    let p = payload(&["continuum", "--n", "10,100", "--modes", "2"]);
    assert_eq!(p["rows"].as_array().unwrap().len(), 6);
    assert_eq!(p["monotone"], true);
    let csv = cli(&["continuum", "--n", "10,100", "--modes", "2", "--csv"]);
    assert_eq!(csv.stdout.lines().count(), 7);
    assert!(csv.stdout.starts_with("n,k,scaled"));

    let p = payload(&["cheeger", &bundled("c6.json")]);
    assert!((p["cheeger"]["h"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert_eq!(p["cheeger"]["holds"], true);
}

#[test]
fn generate_is_seeded() {
    let a = cli(&["generate", "--random", "--count", "3", "--seed", "9"]);
    assert_eq!(a, cli(&["generate", "--random", "--count", "3", "--seed", "9"]));
    assert_ne!(a, cli(&["generate", "--random", "--count", "3", "--seed", "10"]));
    let p = payload(&["generate", "--family", "star", "--n", "4"]);
    assert_eq!(p["graphs"][0]["edges"].as_array().unwrap().len(), 3);
}

#[test]
fn usage_and_io_errors() {
    let out = cli(&["frobnicate"]);
    assert_eq!(out.code, 2);
    assert!(out.stdout.is_empty());
    let out = cli(&["witten", "/definitely/missing.json"]);
    assert_eq!(out.code, 1);
    let err: Value = serde_json::from_str(&out.stderr).unwrap();
    assert!(err["diagnostics"][0].as_str().unwrap().contains("missing.json"));
    assert_eq!(cli(&["witten", &bundled("c6.json"), "--csv"]).code, 1);
    assert_eq!(cli(&["--help"]).code, 0);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("loop.json");
    std::fs::write(
        &bad,
        r#"{"vertices": ["a"], "edges": [{"id": "x", "tail": "a", "head": "a"}]}"#,
    )
    .unwrap();
    let out = cli(&["info", bad.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("x"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["spectrum", "graphs/c6.json", "--operator", "odd"],
        vec!["rewire", "enumerate", "graphs/bottleneck.json"],
        vec!["witten", "graphs/disjoint_triangles.json"],
    ] {
        let args: Vec<String> = args
            .iter()
            .map(|a| a.strip_prefix("graphs/").map_or_else(|| a.to_string(), bundled))
            .collect();
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(cli(&refs), cli(&refs));
    }
}

#[test]
fn bundled_graphs_round_trip() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("graphs");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy();
        if name.ends_with("_morse.json") || name.ends_with("_state.json") {
            continue;
        }
        let g = load_graph(&path).unwrap();
        let back = OrientedGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g, "{name}");
        seen += 1;
    }
    assert!(seen >= 10);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_susy-graph");
    let ok = Command::new(bin)
        .args(["witten", &bundled("c6.json")])
        .output()
        .unwrap();
    assert!(ok.status.success());
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["payload"]["witten"], 0);
    let bad = Command::new(bin).args(["witten", "nope.json"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(bad.stdout.is_empty());
}
