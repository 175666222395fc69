use std::process::{Command, Output};

fn copies(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_copies"))
        .args(args)
        .env_remove("COPIES_STRUCTURE")
        .env_remove("COPIES_DEPTH")
        .env_remove("COPIES_FORMAT")
        .env_remove("COPIES_OUT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn structures_lists_all_nine() {
    let o = copies(&["structures"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 10);
    let zorder = text.lines().find(|l| l.starts_with("zorder")).unwrap();
    let cols: Vec<&str> = zorder.split_whitespace().collect();
    assert_eq!(cols[5], "yes", "single-copy column: {zorder}");
    let dlo = text.lines().find(|l| l.starts_with("dlo")).unwrap();
    assert_eq!(dlo.split_whitespace().nth(3), Some("yes"));
}

#[test]
fn structures_jsonl_flags() {
    let o = copies(&["structures", "--format", "jsonl"]);
    let rows: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 9);
    let z = rows.iter().find(|r| r["id"] == "zorder").unwrap();
    assert_eq!(z["capabilities"]["single-copy"], true);
}

#[test]
fn closure_ac_of_two_rationals() {
    let o = copies(&["closure", "--structure", "dlo", "ac", "0,1", "--depth", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "{0, 1} (exact)");
}

#[test]
fn closure_ac_pairs_has_six_members() {
    let o = copies(&["closure", "--structure", "pairs", "ac", "{0,1},{2,3}", "--depth", "12"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "{{0,1}, {0,2}, {1,2}, {0,3}, {1,3}, {2,3}} (exact)");
}

#[test]
fn exit_0_embed_powerset_certified() {
    let o = copies(&[
        "embed-powerset",
        "--structure",
        "dlo",
        "--set",
        "0,2",
        "--depth",
        "10",
        "--certify",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("copy-check [dlo]: pass"));
}

#[test]
fn exit_1_planted_non_copy() {
    let o = copies(&[
        "certify",
        "--structure",
        "dlo",
        "--depth",
        "8",
        "--sockel-cap",
        "1",
        "copy",
        "planted",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains(r#"fail {"F":["-1"],"x":"-2"}"#));
}

#[test]
fn exit_1_inclusion_counterexample() {
    let o = copies(&[
        "certify",
        "--structure",
        "dlo",
        "--format",
        "jsonl",
        "inclusion",
        "powerset:0",
        "powerset:1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let cert: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(cert["verdict"]["counterexample"]["point"], "1/2");
}

#[test]
fn exit_2_rank_not_within() {
    let o = copies(&["certify", "--structure", "zeta2", "rank", "-", "(0,0)", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exit_3_disjoint_on_single_copy_structure() {
    let o = copies(&["disjoint", "--structure", "zorder", "--depth", "8"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn exit_64_usage() {
    assert_eq!(copies(&["bogus"]).status.code(), Some(64));
    assert_eq!(
        copies(&["closure", "--structure", "nope", "ac", "0"]).status.code(),
        Some(64)
    );
    assert_eq!(copies(&["closure", "ac", "0"]).status.code(), Some(64));
    assert_eq!(
        copies(&["closure", "--structure", "dlo", "ac", "zero"]).status.code(),
        Some(64)
    );
    assert_eq!(
        copies(&["verify", "--structure", "dlo", "--depth", "10", "--budget", "5"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(copies(&["--help"]).status.code(), Some(0));
}

#[test]
fn env_overrides_and_flags_win() {
    let base = || {
        let mut c = Command::new(env!("CARGO_BIN_EXE_copies"));
        c.env("COPIES_STRUCTURE", "pairs").env("COPIES_DEPTH", "12");
        c
    };
    let o = base().args(["closure", "ac", "{0,1}"]).output().unwrap();
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), "{{0,1}} (exact)");
    let o = base()
        .args(["closure", "--structure", "dlo", "ac", "0"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), "{0} (exact)");
}

#[test]
fn verify_jsonl_is_byte_identical() {
    for s in ["dlo", "pairs", "zorder"] {
        let a = copies(&["verify", "--structure", s, "--format", "jsonl", "--seed", "3"]);
        let b = copies(&["verify", "--structure", s, "--format", "jsonl", "--seed", "3"]);
        assert_eq!(a.status.code(), Some(0), "{s}");
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{s}");
    }
}

#[test]
fn verify_rows() {
    let o = copies(&["verify", "--structure", "zorder"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let status = |row: &str| {
        text.lines()
            .find(|l| l.starts_with(row))
            .and_then(|l| l.split_whitespace().nth(1))
            .unwrap()
            .to_string()
    };
    assert_eq!(status("single-copy"), "pass");
    assert_eq!(status("proper-copy"), "unsupported");
    assert_eq!(status("disjoint"), "unsupported");
    let o = copies(&["verify", "--structure", "pairs"]);
    assert!(stdout(&o)
        .lines()
        .any(|l| l.starts_with("exchange") && l.contains("pass")));
    let o = copies(&["verify", "--structure", "dlo"]);
    assert!(stdout(&o)
        .lines()
        .skip(1)
        .all(|l| l.split_whitespace().nth(1) == Some("pass")));
}

#[test]
fn out_file_holds_certificates() {
    let dir = std::env::temp_dir().join(format!("copies-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("certs.jsonl");
    let o = copies(&["chain", "--structure", "dlo", "0", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let body = std::fs::read_to_string(&path).unwrap();
    assert_eq!(body.lines().count(), 3);
    for line in body.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["kind"], "inclusion");
        assert_eq!(v["verdict"]["status"], "pass");
    }
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn copy_trace_is_deterministic() {
    let args = [
        "copy",
        "--structure",
        "dlo",
        "proper:0",
        "--stages",
        "3",
        "--trace",
        "--format",
        "jsonl",
    ];
    let a = copies(&args);
    assert_eq!(a.stdout, copies(&args).stdout);
    let golden = concat!(
        r#"{"checks":["extendable","fresh","lookahead"],"move":"forth","round":0,"scanned":2,"source":"1","target":"1/2"}"#,
        "\n",
        r#"{"checks":["extendable","fresh","lookahead"],"move":"back","round":0,"scanned":3,"source":"-1","target":"-1"}"#,
        "\n",
        r#"{"checks":["extendable","fresh","lookahead"],"move":"forth","round":1,"scanned":1,"source":"1/2","target":"1/3"}"#,
        "\n",
        r#"{"checks":["extendable","fresh","lookahead"],"move":"back","round":1,"scanned":5,"source":"2","target":"2"}"#,
        "\n",
        r#"{"checks":["extendable","fresh","lookahead"],"move":"forth","round":2,"scanned":1,"source":"-1/2","target":"-1/2"}"#,
        "\n",
        r#"{"checks":["extendable","fresh","lookahead"],"move":"back","round":2,"scanned":7,"source":"-2","target":"-2"}"#,
        "\n",
    );
    assert_eq!(stdout(&a), golden);
}
