use std::process::{Command, Output};

use hyplab::cli::{run_verify, EXIT_VIOLATION};
use hyplab::group::{Caps, GroupTable};
use serde_json::Value;

fn hyplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyplab"))
        .args(args)
        .env_remove("HYPLAB_CAPS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = hyplab(&full);
    let text = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&text)
        .unwrap_or_else(|e| panic!("{e}: {text} / {}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), value)
}

fn keys(v: &Value) -> Vec<&str> {
    v.as_object().unwrap().keys().map(String::as_str).collect()
}

#[test]
fn analyze_examples() {
    let (code, v) = json(&["analyze", "S(3)"]);
    assert_eq!(code, 0);
    assert_eq!(keys(&v), ["command", "results", "summary", "version"]);
    let a = &v["results"][0];
    assert_eq!(a["zl"], 0);
    assert_eq!(a["hypercenter_order"], 1);
    assert_eq!(a["residual_order"], 3);

    let (_, v) = json(&["analyze", "C(8)"]);
    let a = &v["results"][0];
    assert_eq!(
        (a["nilpotent"].clone(), a["class"].clone()),
        (true.into(), 1.into())
    );
    assert_eq!(a["residual_order"], 1);

    let (_, v) = json(&["analyze", "SL23()"]);
    let a = &v["results"][0];
    assert_eq!(
        (a["center_order"].as_u64(), a["residual_order"].as_u64()),
        (Some(2), Some(8))
    );

    let out = hyplab(&["analyze", "perm(3; (1 2), (1 2 3))"]);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("order              6"));
}

#[test]
fn exit_codes() {
    assert_eq!(hyplab(&["analyze", "C(2"]).status.code(), Some(2));
    assert_eq!(hyplab(&["analyze", "Q(8)"]).status.code(), Some(2));
    assert_eq!(hyplab(&["analyze", "S(6) x S(4)"]).status.code(), Some(3));
    assert_eq!(
        hyplab(&["--cap-order", "10", "analyze", "D(6)"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        hyplab(&["verify", "--checks", "theorem-b,bogus"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        hyplab(&["verify", "--catalog", "/nonexistent"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(hyplab(&[]).status.code(), Some(2));
    assert_eq!(hyplab(&["--help"]).status.code(), Some(0));
}

#[test]
fn caps_from_environment_and_flags() {
    let run = |env: &str, args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_hyplab"))
            .args(args)
            .env("HYPLAB_CAPS", env)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run("max_order=10", &["analyze", "D(6)"]), Some(3));
    assert_eq!(
        run("max_order=10", &["--cap-order", "12", "analyze", "D(6)"]),
        Some(0)
    );
    assert_eq!(run("nonsense", &["analyze", "C(2)"]), Some(2));
}

#[test]
fn verify_envelope_and_summary() {
    let (code, v) = json(&["verify", "--checks", "theorem-b,schur-wiegold"]);
    assert_eq!(code, 0);
    assert_eq!(keys(&v), ["command", "results", "summary", "version"]);
    assert_eq!(v["command"], "verify");
    assert_eq!(v["version"], "1");
    assert_eq!(
        keys(&v["summary"]),
        ["holds", "marginal", "skipped", "total", "violated"]
    );
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 64);
    for r in results {
        assert_eq!(
            keys(r),
            [
                "check",
                "group",
                "measured",
                "notes",
                "verdict",
                "witnesses"
            ]
        );
    }
    assert_eq!(v["summary"]["total"], 64);
    assert_eq!(v["summary"]["violated"], 0);
}

#[test]
fn verify_user_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("groups.txt");
    std::fs::write(&path, "# one abelian group\nC(10)\n").unwrap();
    let (code, v) = json(&[
        "verify",
        "--catalog",
        path.to_str().unwrap(),
        "--checks",
        "theorem-b",
    ]);
    assert_eq!(code, 0);
    let r = &v["results"][0];
    assert_eq!(r["verdict"], "holds");
    assert_eq!(r["measured"]["t"], 1);

    std::fs::write(&path, "C(10)\nC(3) x\n").unwrap();
    let out = hyplab(&["verify", "--catalog", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn corrupted_table_is_a_violation() {
    // A Latin square with identity 0 that is not associative.
    let rows = vec![
        vec![0, 1, 2, 3, 4],
        vec![1, 0, 3, 4, 2],
        vec![2, 4, 0, 1, 3],
        vec![3, 2, 4, 0, 1],
        vec![4, 3, 1, 2, 0],
    ];
    let g = GroupTable::from_raw_unchecked(&rows, 0, vec![0, 1, 2, 3, 4], "loop");
    let out = run_verify(&[g], &[], &[], &Caps::default(), 1).unwrap();
    assert!(out.summary.violated > 0);
    assert_eq!(out.exit_code(), EXIT_VIOLATION);
    assert!(out
        .reports
        .iter()
        .filter(|r| r.verdict == hyplab::theorems::Verdict::Violated)
        .all(|r| !r.witnesses.is_empty()));
}

#[test]
fn module_check() {
    let (code, v) = json(&["module-check"]);
    assert_eq!(code, 0);
    let results = v["results"].as_array().unwrap();
    let z4 = results
        .iter()
        .find(|r| r["group"] == "Z4 negation")
        .unwrap();
    assert_eq!(
        (
            z4["measured"]["z_order"].as_u64(),
            z4["measured"]["e_order"].as_u64()
        ),
        (Some(4), Some(1))
    );
    for r in results {
        if r["measured"]["acting_nilpotent"] == true {
            assert_eq!(r["measured"]["decomposes"], true, "{r}");
        }
    }

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(
        &path,
        r#"{"name": "trivial", "invariants": [2, 3], "action": [[[1, 0], [0, 1]]]}"#,
    )
    .unwrap();
    let (code, v) = json(&["module-check", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let m = &v["results"][0]["measured"];
    assert_eq!(
        (m["z_order"].as_u64(), m["e_order"].as_u64()),
        (Some(6), Some(1))
    );

    std::fs::write(
        &path,
        r#"{"invariants": [2, 2], "action": [[[1, 1], [1, 1]]]}"#,
    )
    .unwrap();
    assert_eq!(
        hyplab(&["module-check", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::write(&path, "not json").unwrap();
    assert_eq!(
        hyplab(&["module-check", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn search_small_sweep_is_pinned() {
    let (code, v) = json(&["search", "--max-module-order", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"], Value::Array(vec![]));
    let s = &v["summary"];
    assert_eq!(
        (
            s["invariant_vectors"].as_u64(),
            s["acting_groups"].as_u64(),
            s["nilpotent"].as_u64(),
            s["decomposed"].as_u64()
        ),
        (Some(5), Some(12), Some(11), Some(1))
    );

    let (code, v) = json(&["search", "--max-module-order", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"], Value::Array(vec![]));

    let (code, v) = json(&["search", "--max-module-order", "8", "--include-nilpotent"]);
    assert_eq!(code, 0);
    assert_eq!(v["summary"]["violations"], 0);
}

#[test]
fn out_flag_writes_file_and_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, jobs) in [(&a, "1"), (&b, "4")] {
        let out = hyplab(&[
            "verify",
            "--format",
            "json",
            "--jobs",
            jobs,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
