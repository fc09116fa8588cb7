//! End-to-end tests of the command-line binary: every subcommand is driven
//! through a real process, and every artifact it writes is read back and
//! cross-checked.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cnp"))
}

fn write_file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Ring of 30 nodes plus skip-5 chords: connected, small, and rich enough
/// that solver runs exercise real search.
fn ring30() -> String {
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for i in 0..30u32 {
        edges.push((i, (i + 1) % 30));
        if i % 2 == 0 {
            edges.push((i, (i + 5) % 30));
        }
    }
    let mut text = format!("30 {}\n", edges.len());
    for (a, b) in edges {
        text.push_str(&format!("{a} {b}\n"));
    }
    text
}

/// Two triangles joined through the cut node 6; its removal is the unique
/// one-node optimum with pairwise connectivity 3 + 3 = 6.
fn barbell() -> &'static str {
    "7 8\n0 1\n0 2\n1 2\n3 4\n3 5\n4 5\n2 6\n6 3\n"
}

fn path5() -> &'static str {
    "5 4\n0 1\n1 2\n2 3\n3 4\n"
}

#[test]
fn solve_writes_report_csv_and_validated_solution() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write_file(dir.path(), "ring30.txt", &ring30());
    let out_json = dir.path().join("report.json");
    let out_csv = dir.path().join("report.csv");
    let out_sol = dir.path().join("best.sol");

    let run = bin()
        .args(["solve", "--instance"])
        .arg(&instance)
        .args([
            "--k",
            "4",
            "--generations",
            "40",
            "--seed",
            "3",
            "--trials",
            "2",
        ])
        .arg("--out")
        .arg(&out_json)
        .arg("--csv")
        .arg(&out_csv)
        .arg("--solution-out")
        .arg(&out_sol)
        .output()
        .unwrap();
    assert!(run.status.success(), "solve failed: {}", stderr(&run));
    assert!(
        stdout(&run).contains("f_best="),
        "summary missing: {}",
        stdout(&run)
    );

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_json).unwrap()).unwrap();
    assert_eq!(report["mode"], "cnp");
    assert_eq!(report["instance"], "ring30");
    assert_eq!(report["k"], 4);
    assert_eq!(report["trials"], 2);
    assert_eq!(report["trial_reports"].as_array().unwrap().len(), 2);
    assert!(report["summary"]["f_best"].is_u64());

    let csv = std::fs::read_to_string(&out_csv).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2, "expected header plus one row: {csv}");
    assert!(lines[0].starts_with("instance,mode,"));
    assert!(lines[1].starts_with("ring30,cnp,30,"));

    // The solution file must survive independent re-validation.
    let check = bin()
        .args(["validate", "--instance"])
        .arg(&instance)
        .arg("--solution")
        .arg(&out_sol)
        .args(["--k", "4"])
        .output()
        .unwrap();
    assert!(
        check.status.success(),
        "validate failed: {}",
        stderr(&check)
    );
    assert!(
        stdout(&check).starts_with("ok:"),
        "unexpected output: {}",
        stdout(&check)
    );
}

#[test]
fn validate_rejects_a_tampered_objective() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write_file(dir.path(), "ring30.txt", &ring30());
    let sol = dir.path().join("best.sol");
    let run = bin()
        .args(["solve", "--instance"])
        .arg(&instance)
        .args(["--k", "3", "--generations", "10", "--seed", "1"])
        .arg("--solution-out")
        .arg(&sol)
        .output()
        .unwrap();
    assert!(run.status.success(), "solve failed: {}", stderr(&run));

    // Bump the claimed objective in the header; the ids stay valid.
    let text = std::fs::read_to_string(&sol).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    let mut head: Vec<String> = lines[0].split_whitespace().map(str::to_owned).collect();
    let claimed: u64 = head[1].parse().unwrap();
    head[1] = (claimed + 1).to_string();
    lines[0] = head.join(" ");
    std::fs::write(&sol, lines.join("\n")).unwrap();

    let check = bin()
        .args(["validate", "--instance"])
        .arg(&instance)
        .arg("--solution")
        .arg(&sol)
        .output()
        .unwrap();
    assert!(!check.status.success(), "tampered file passed validation");
    assert!(
        stderr(&check).contains("mismatch"),
        "unexpected error: {}",
        stderr(&check)
    );
}

#[test]
fn validate_rejects_the_wrong_cardinality() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write_file(dir.path(), "barbell.txt", barbell());
    let sol = write_file(dir.path(), "one.sol", "1 6\n6\n");

    let ok = bin()
        .args(["validate", "--instance"])
        .arg(&instance)
        .arg("--solution")
        .arg(&sol)
        .output()
        .unwrap();
    assert!(ok.status.success(), "valid file rejected: {}", stderr(&ok));

    let bad = bin()
        .args(["validate", "--instance"])
        .arg(&instance)
        .arg("--solution")
        .arg(&sol)
        .args(["--k", "2"])
        .output()
        .unwrap();
    assert!(!bad.status.success(), "cardinality mismatch passed");
    assert!(
        stderr(&bad).contains("expected 2"),
        "unexpected error: {}",
        stderr(&bad)
    );
}

#[test]
fn oracle_reports_the_known_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write_file(dir.path(), "barbell.txt", barbell());
    let sol = dir.path().join("opt.sol");
    let run = bin()
        .args(["oracle", "--instance"])
        .arg(&instance)
        .args(["--k", "1"])
        .arg("--solution-out")
        .arg(&sol)
        .output()
        .unwrap();
    assert!(run.status.success(), "oracle failed: {}", stderr(&run));
    let text = stdout(&run);
    assert!(
        text.contains("optimum pairwise connectivity=6"),
        "got: {text}"
    );
    assert!(text.contains("nodes: 6"), "got: {text}");

    let check = bin()
        .args(["validate", "--instance"])
        .arg(&instance)
        .arg("--solution")
        .arg(&sol)
        .args(["--k", "1"])
        .output()
        .unwrap();
    assert!(
        check.status.success(),
        "oracle solution failed validation: {}",
        stderr(&check)
    );
}

#[test]
fn oracle_handles_the_capped_objective() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write_file(dir.path(), "path5.txt", path5());
    let run = bin()
        .args(["oracle", "--instance"])
        .arg(&instance)
        .args(["--k", "1", "--w", "2"])
        .output()
        .unwrap();
    assert!(run.status.success(), "oracle failed: {}", stderr(&run));
    let text = stdout(&run);
    // Removing the middle node leaves two pairs, both within the cap.
    assert!(text.contains("optimum component overflow=0"), "got: {text}");
    assert!(text.contains("nodes: 2"), "got: {text}");
}

#[test]
fn cccnp_solve_writes_a_feasible_solution() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write_file(dir.path(), "ring30.txt", &ring30());
    let out_json = dir.path().join("cc.json");
    let out_sol = dir.path().join("cc.sol");
    let run = bin()
        .args(["solve", "--instance"])
        .arg(&instance)
        .args([
            "--mode",
            "cccnp",
            "--w",
            "4",
            "--generations",
            "12",
            "--seed",
            "5",
        ])
        .arg("--out")
        .arg(&out_json)
        .arg("--solution-out")
        .arg(&out_sol)
        .output()
        .unwrap();
    assert!(run.status.success(), "solve failed: {}", stderr(&run));
    assert!(
        stdout(&run).contains("k_best="),
        "summary missing: {}",
        stdout(&run)
    );

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_json).unwrap()).unwrap();
    assert_eq!(report["mode"], "cccnp");
    assert_eq!(report["cap"], 4);
    assert!(report["summary"]["k_best"].is_u64());
    assert!(!report["cc_trial_reports"].as_array().unwrap().is_empty());

    // The written set must be feasible: overflow zero under the same cap.
    let check = bin()
        .args(["validate", "--instance"])
        .arg(&instance)
        .arg("--solution")
        .arg(&out_sol)
        .args(["--w", "4"])
        .output()
        .unwrap();
    assert!(
        check.status.success(),
        "cc solution failed validation: {}",
        stderr(&check)
    );
    assert!(
        stdout(&check).contains("component overflow=0"),
        "got: {}",
        stdout(&check)
    );
}

#[test]
fn compare_runs_a_paired_sign_test() {
    let dir = tempfile::tempdir().unwrap();
    let ring = write_file(dir.path(), "ring30.txt", &ring30());
    let bar = write_file(dir.path(), "barbell.txt", barbell());

    let mut reports: Vec<(PathBuf, PathBuf)> = Vec::new();
    for (instance, k) in [(&ring, "4"), (&bar, "1")] {
        let name = instance.file_stem().unwrap().to_string_lossy().into_owned();
        let a = dir.path().join(format!("{name}_a.json"));
        let b = dir.path().join(format!("{name}_b.json"));
        for (path, seed) in [(&a, "1"), (&b, "2")] {
            let run = bin()
                .args(["solve", "--instance"])
                .arg(instance)
                .args(["--k", k, "--generations", "8", "--seed", seed])
                .arg("--out")
                .arg(path)
                .output()
                .unwrap();
            assert!(run.status.success(), "solve failed: {}", stderr(&run));
        }
        reports.push((a, b));
    }

    let run = bin()
        .arg("compare")
        .arg("--a")
        .args(reports.iter().map(|(a, _)| a))
        .arg("--b")
        .args(reports.iter().map(|(_, b)| b))
        .output()
        .unwrap();
    assert!(run.status.success(), "compare failed: {}", stderr(&run));
    let text = stdout(&run);
    assert!(text.contains("pairs=2"), "got: {text}");
    assert!(text.contains("verdict:"), "got: {text}");

    // Mismatched pairing is an error, not a silent comparison.
    let bad = bin()
        .arg("compare")
        .arg("--a")
        .arg(&reports[0].0)
        .arg("--b")
        .arg(&reports[1].1)
        .output()
        .unwrap();
    assert!(!bad.status.success(), "mismatched instances were compared");
    assert!(
        stderr(&bad).contains("disagree on the instance"),
        "unexpected error: {}",
        stderr(&bad)
    );
}

#[test]
fn one_indexed_instances_load() {
    let dir = tempfile::tempdir().unwrap();
    // The same 5-node path written with 1-based ids.
    let instance = write_file(dir.path(), "path5_one.txt", "5 4\n1 2\n2 3\n3 4\n4 5\n");
    let run = bin()
        .args(["oracle", "--instance"])
        .arg(&instance)
        .arg("--one-indexed")
        .args(["--k", "1"])
        .output()
        .unwrap();
    assert!(run.status.success(), "oracle failed: {}", stderr(&run));
    // Output ids are always 0-based: the middle of the path is node 2.
    let text = stdout(&run);
    assert!(
        text.contains("optimum pairwise connectivity=2"),
        "got: {text}"
    );
    assert!(text.contains("nodes: 2"), "got: {text}");
}

#[test]
fn malformed_instances_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out_of_range = write_file(dir.path(), "bad.txt", "3 1\n0 7\n");
    let run = bin()
        .args(["solve", "--instance"])
        .arg(&out_of_range)
        .args(["--k", "1", "--generations", "1"])
        .output()
        .unwrap();
    assert!(!run.status.success(), "out-of-range edge accepted");
    assert!(
        stderr(&run).contains("loading"),
        "unexpected error: {}",
        stderr(&run)
    );

    let with_self_loop = write_file(dir.path(), "loop.txt", "3 2\n0 1\n2 2\n");
    let strict = bin()
        .args(["oracle", "--instance"])
        .arg(&with_self_loop)
        .arg("--strict")
        .args(["--k", "1"])
        .output()
        .unwrap();
    assert!(!strict.status.success(), "--strict accepted a self-loop");

    let lenient = bin()
        .args(["oracle", "--instance"])
        .arg(&with_self_loop)
        .args(["--k", "1"])
        .output()
        .unwrap();
    assert!(
        lenient.status.success(),
        "lenient mode failed: {}",
        stderr(&lenient)
    );
    assert!(
        stderr(&lenient).contains("dropped 1 self-loop"),
        "got: {}",
        stderr(&lenient)
    );
}
