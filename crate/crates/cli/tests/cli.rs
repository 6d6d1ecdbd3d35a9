use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn conedist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conedist"))
        .args(args)
        .output()
        .expect("run conedist")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const GOLDEN: &str = r#"{"n": 3, "target": [1, 1, 0],
 "points": [[1,1,2],[0,2,3],[2,1,3],[3,0,2],[0,0,2]]}"#;

#[test]
fn golden_solve_document() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("golden.json");
    let out = dir.path().join("result.json");
    let history = dir.path().join("history.csv");
    std::fs::write(&input, GOLDEN).unwrap();

    let run = conedist(&[
        "solve",
        p(&input),
        "--out",
        p(&out),
        "--history-out",
        p(&history),
    ]);
    assert_eq!(run.status.code(), Some(0));
    assert!(run.stdout.is_empty(), "stdout should stay quiet");

    let text = std::fs::read_to_string(&out).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["status"], "Converged");
    assert_eq!(doc["iterations"], 2);
    assert!((doc["distance_sq"].as_f64().unwrap() - 1044.0 / 841.0).abs() < 1e-12);
    assert_eq!(doc["rho"].as_f64().unwrap(), 3.25);
    assert_eq!(doc["diam_sq_bound"].as_f64().unwrap(), 26.0);

    let keys: Vec<&str> = [
        "status",
        "distance",
        "distance_sq",
        "iterations",
        "final_gap",
        "rho",
    ]
    .into_iter()
    .collect();
    let positions: Vec<usize> = keys
        .iter()
        .map(|k| text.find(&format!("\"{k}\"")).unwrap())
        .collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "field order");

    let csv = std::fs::read_to_string(&history).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("k,objective,gap,lmo_index,step"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn quiet_false_prints_summary() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("golden.json");
    std::fs::write(&input, GOLDEN).unwrap();
    let out = dir.path().join("r.json");
    let run = conedist(&["--quiet=false", "solve", p(&input), "--out", p(&out)]);
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.starts_with("status=Converged"), "{stdout}");
}

#[test]
fn negative_coordinate_is_rejected_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("neg.json");
    std::fs::write(
        &input,
        r#"{"n": 3, "target": [1, 1, 0],
 "points": [[1,1,2],[0,2,3],[2,1,3],[3,0,2],[0,0,-2]]}"#,
    )
    .unwrap();
    let run = conedist(&["solve", p(&input), "--out", "-"]);
    assert_eq!(run.status.code(), Some(1));
    assert!(run.stdout.is_empty());
    let stderr = String::from_utf8(run.stderr).unwrap();
    assert!(stderr.contains("points[4][2]"), "{stderr}");
}

#[test]
fn malformed_document_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.json");
    std::fs::write(
        &input,
        "{\"n\": 2,\n\"target\": [1, 1],\n\"points\": [[1, 0],, [0, 1]]}",
    )
    .unwrap();
    let run = conedist(&["solve", p(&input), "--out", "-"]);
    assert_eq!(run.status.code(), Some(1));
    let stderr = String::from_utf8(run.stderr).unwrap();
    assert!(stderr.contains("line 3"), "{stderr}");
}

#[test]
fn budget_exhaustion_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("slow.json");
    // Target strictly inside a face: plain Frank-Wolfe needs many steps.
    std::fs::write(
        &input,
        r#"{"n": 3, "target": [1, 1, 1], "points": [[1,0,0],[0,1,0],[0,0,1],[1,1,0]]}"#,
    )
    .unwrap();
    let run = conedist(&[
        "solve",
        p(&input),
        "--out",
        "-",
        "--max-iterations",
        "1",
        "--gap-tolerance",
        "1e-15",
    ]);
    assert_eq!(run.status.code(), Some(2));
    let doc: Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(doc["status"], "MaxIterations");
}

#[test]
fn unreachable_target_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("unreachable.json");
    std::fs::write(&input, r#"{"n": 2, "target": [3, 0], "points": [[0, 1]]}"#).unwrap();
    let run = conedist(&["solve", p(&input), "--out", "-"]);
    assert_eq!(run.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(doc["status"], "TargetUnreachable");
    assert_eq!(doc["distance"].as_f64(), Some(3.0));
    assert!(doc["rho"].is_null());
    assert!(doc.get("z_slice").is_none());
}

#[test]
fn blp_document_solves_over_enumerated_points() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("blp.json");
    std::fs::write(
        &input,
        r#"{"n": 2, "target": [1, 1],
 "blp": {"n": 2, "rows": [{"coeffs": [1, 1], "sense": "<=", "rhs": 1}]}}"#,
    )
    .unwrap();
    let run = conedist(&["solve", p(&input), "--out", "-"]);
    assert_eq!(run.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&run.stdout).unwrap();
    // {(0,0), (0,1), (1,0)} spans the quadrant, so the target is in the cone.
    assert_eq!(doc["distance_sq"].as_f64(), Some(0.0));
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let run = conedist(&[
            "generate",
            "--n",
            "5",
            "--m",
            "10",
            "--nc",
            "2",
            "--cf",
            "5",
            "--seed",
            "7",
            "--out",
            p(out),
        ]);
        assert_eq!(run.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let missing_seed = conedist(&["generate", "--n", "5", "--m", "10", "--out", p(&a)]);
    assert_eq!(missing_seed.status.code(), Some(1));
}

struct RoundTrip {
    label: String,
    solve_exit: Option<i32>,
    verified: bool,
}

fn round_trips() -> Vec<RoundTrip> {
    let dir = tempfile::tempdir().unwrap();
    let mut out = Vec::new();
    for seed in 1..=12u64 {
        for mode in ["random-nonneg", "in-cone", "orthogonal-mix"] {
            let instance = dir.path().join(format!("i{seed}{mode}.json"));
            let result = dir.path().join(format!("r{seed}{mode}.json"));
            let seed_arg = seed.to_string();
            let gen = conedist(&[
                "generate",
                "--n",
                "4",
                "--m",
                "6",
                "--seed",
                &seed_arg,
                "--target-mode",
                mode,
                "--out",
                p(&instance),
            ]);
            assert_eq!(gen.status.code(), Some(0));
            let solve = conedist(&["solve", p(&instance), "--out", p(&result)]);
            let solve_exit = solve.status.code();
            assert!(
                matches!(solve_exit, Some(0) | Some(2)),
                "{}",
                String::from_utf8_lossy(&solve.stderr)
            );
            let verify = conedist(&["verify", p(&instance), "--result", p(&result), "--out", "-"]);
            let report: Value = serde_json::from_slice(&verify.stdout).unwrap();
            let verified = report["result"] == "pass";
            assert_eq!(verify.status.code(), Some(if verified { 0 } else { 3 }));
            out.push(RoundTrip {
                label: format!("seed {seed} {mode}"),
                solve_exit,
                verified,
            });
        }
    }
    out
}

#[test]
fn converged_solves_verify() {
    for rt in round_trips().iter().filter(|rt| rt.solve_exit == Some(0)) {
        assert!(
            rt.verified,
            "{} converged but failed verification",
            rt.label
        );
    }
}

#[test]
fn generate_solve_verify_round_trip() {
    let failed: Vec<String> = round_trips()
        .into_iter()
        .filter(|rt| !rt.verified)
        .map(|rt| format!("{} (solve exit {:?})", rt.label, rt.solve_exit))
        .collect();
    assert!(failed.is_empty(), "round trip failed for {failed:#?}");
}

#[test]
fn verify_rejects_a_wrong_answer() {
    let dir = tempfile::tempdir().unwrap();
    let instance = dir.path().join("golden.json");
    let result = dir.path().join("r.json");
    std::fs::write(&instance, GOLDEN).unwrap();
    let solve = conedist(&["solve", p(&instance), "--out", p(&result)]);
    assert_eq!(solve.status.code(), Some(0));
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&result).unwrap()).unwrap();
    doc["distance_sq"] = Value::from(1.0);
    doc["z_star"] = serde_json::json!([0.5, 0.2, 0.6]);
    std::fs::write(&result, doc.to_string()).unwrap();

    let verify = conedist(&[
        "--quiet=false",
        "verify",
        p(&instance),
        "--result",
        p(&result),
    ]);
    assert_eq!(verify.status.code(), Some(3));
    assert_eq!(String::from_utf8(verify.stdout).unwrap().trim(), "fail");
}

#[test]
fn geometry_lists_vertices_and_rays() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("golden.json");
    std::fs::write(&input, GOLDEN).unwrap();
    let run = conedist(&["geometry", p(&input), "--out", "-"]);
    assert_eq!(run.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&run.stdout).unwrap();
    let vertices: Vec<Vec<f64>> = doc["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| serde_json::from_value(v["point"].clone()).unwrap())
        .collect();
    assert_eq!(vertices, vec![vec![2.0, 0.0, 0.0], vec![0.0, 2.0, 0.0]]);
    assert_eq!(doc["rays"][0]["index"], 2);
    assert_eq!(
        doc["rays"][0]["direction"],
        serde_json::json!([0.0, 0.0, 1.0])
    );
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.csv");
    let run = conedist(&[
        "bench",
        "--n",
        "5,10",
        "--m",
        "20",
        "--nc",
        "1,2",
        "--cf",
        "0,5",
        "--trials",
        "2",
        "--seed",
        "3",
        "--jobs",
        "2",
        "--out",
        p(&out),
    ]);
    assert_eq!(
        run.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "n,m,nc,cf,trials,mean_iterations,mean_distance,mean_wall_time_s,failures"
    );
    assert_eq!(lines.len(), 1 + 8);
    assert!(lines[1].starts_with("5,20,1,0,2,"), "{}", lines[1]);
}
