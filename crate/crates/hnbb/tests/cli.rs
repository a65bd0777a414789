use std::process::{Command, Output};

use hnbb::formats::{Document, Record};

fn hnbb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hnbb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn limit_json() {
    let out = hnbb(&[
        "limit", "--genus", "3", "--degree", "1", "--hn", "1:1,2:0", "--inv", "0", "--format",
        "json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc = Document::from_json(&stdout(&out)).unwrap();
    let [Record::Outcome(o)] = doc.results.as_slice() else {
        panic!("one outcome expected");
    };
    assert_eq!(o.case, "1.3");
    assert_eq!(o.component, "t111:1,0,0");
    assert_eq!(o.graded_degrees, [1, 0, 0]);
    assert_eq!(o.feasible_set, ["I=-3", "I=-2", "I=-1", "I=0"]);
    assert_eq!(doc.meta.genus, 3);
    assert_eq!(doc.meta.paper_cases, ["1.3"]);
    assert_eq!(doc.meta.realizability, "assumed");
}

#[test]
fn limit_type12_and_flag() {
    let out = hnbb(&[
        "limit", "--genus", "3", "--hn", "1:1,2:0", "--inv", "-2", "--format", "csv",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(
        stdout(&out),
        "stratum,invariant,case,component,hnt_limit\n\"1:1,2:0\",I=-2,1.1,t12:1|0,\"1:1,2:0\"\n"
    );
    let out = hnbb(&[
        "limit",
        "--genus",
        "2",
        "--hn",
        "1:1,1:0,1:-1",
        "--inv",
        "misaligned",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("3.2"));
}

#[test]
fn strata_listing() {
    let out = hnbb(&[
        "strata", "--genus", "2", "--rank", "3", "--degree", "0", "--format", "json",
    ]);
    assert!(out.status.success());
    let doc = Document::from_json(&stdout(&out)).unwrap();
    assert_eq!(doc.results.len(), 5);
    let table = stdout(&hnbb(&[
        "strata", "--genus", "2", "--rank", "3", "--degree", "0",
    ]));
    assert_eq!(table.lines().count(), 6);
}

#[test]
fn classifier_errors_are_reported_verbatim() {
    let out = hnbb(&[
        "limit", "--genus", "2", "--degree", "0", "--hn", "1:1,2:-1", "--inv", "0",
    ]);
    assert!(!out.status.success());
    assert!(
        stderr(&out).contains("SlopeOutOfBounds"),
        "{}",
        stderr(&out)
    );

    let out = hnbb(&[
        "limit",
        "--genus",
        "3",
        "--hn",
        "1:4,1:1,1:-1",
        "--inv",
        "0",
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("InfeasibleBySpecialization"));

    let out = hnbb(&["limit", "--genus", "2", "--hn", "1:3,2:0"]);
    assert!(!out.status.success());
    assert!(
        stderr(&out).contains("Rank3BoundViolated"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn usage_errors_name_the_flag() {
    let out = hnbb(&["strata", "--genus", "1", "--rank", "3", "--degree", "0"]);
    assert!(!out.status.success());
    let err = stderr(&out);
    assert!(
        err.contains("--genus") && err.contains("at least 2"),
        "{err}"
    );

    let out = hnbb(&["strata", "--genus", "2", "--rank", "4", "--degree", "0"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("--rank"));

    let out = hnbb(&["limit", "--genus", "2", "--hn", "1:1,2:-1"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("--inv"));

    let out = hnbb(&[
        "limit", "--genus", "2", "--degree", "3", "--hn", "1:1,2:-1", "--inv", "-1",
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("--degree"));

    let out = hnbb(&[
        "strata", "--genus", "2", "--rank", "3", "--degree", "0", "--format", "dot",
    ]);
    assert!(!out.status.success());
}

#[test]
fn json_round_trips_byte_for_byte() {
    for args in [
        &[
            "incidence",
            "--genus",
            "2",
            "--rank",
            "3",
            "--degree",
            "0",
            "--format",
            "json",
        ][..],
        &[
            "incidence",
            "--genus",
            "3",
            "--rank",
            "2",
            "--degree",
            "-1",
            "--format",
            "json",
        ],
        &[
            "strata", "--genus", "4", "--rank", "3", "--degree", "2", "--format", "json",
        ],
        &[
            "fixed", "--genus", "2", "--rank", "3", "--degree", "3", "--format", "json",
        ],
    ] {
        let text = stdout(&hnbb(args));
        let doc = Document::from_json(&text).unwrap();
        assert_eq!(doc.to_json().unwrap(), text, "{args:?}");
    }
}

#[test]
fn incidence_exports() {
    let dot = stdout(&hnbb(&[
        "incidence",
        "--genus",
        "3",
        "--rank",
        "3",
        "--degree",
        "1",
        "--format",
        "dot",
    ]));
    assert!(dot.starts_with("digraph "));
    assert!(dot.trim_end().ends_with('}'));
    assert!(dot.contains("\"s 1:1,2:0\" [shape=box"));
    assert!(dot.contains("\"c t12:1|0\" [shape=ellipse"));
    assert!(dot.contains("\"s 1:1,2:0\" -> \"c t12:1|0\" [label=\"I=-3 I=-2 I=-1\"]"));
    assert!(dot.contains("\"s 1:1,2:0\" -> \"c t111:1,0,0\" [label=\"I=0\"]"));

    let csv_text = stdout(&hnbb(&[
        "incidence",
        "--genus",
        "2",
        "--rank",
        "2",
        "--degree",
        "1",
        "--format",
        "csv",
    ]));
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["stratum", "invariant", "case", "component", "hnt_limit"]
    );
    let rows: Vec<Vec<String>> = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1], ["1:1,1:0", "-", "rk2", "r2:1", "1:1,1:0"]);

    let json = stdout(&hnbb(&[
        "incidence",
        "--genus",
        "2",
        "--rank",
        "3",
        "--degree",
        "0",
        "--format",
        "json",
    ]));
    let doc = Document::from_json(&json).unwrap();
    let index = doc.meta.bb_index.unwrap();
    assert_eq!(index["t111:2,0,-2"], ["1:2,1:0,1:-2"]);
    assert_eq!(index["min"], ["3:0"]);
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("hnbb-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fixed.csv");
    let out = hnbb(&[
        "fixed",
        "--genus",
        "2",
        "--rank",
        "3",
        "--degree",
        "0",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        text,
        "component,kind\nmin,min\n\"t111:1,0,-1\",type111\n\"t111:2,0,-2\",type111\n"
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_exit_status() {
    let out = hnbb(&[
        "verify",
        "--max-genus",
        "3",
        "--min-degree",
        "-2",
        "--max-degree",
        "2",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 9);
    assert!(text.ends_with("9/9 criteria passed\n"));

    let out = hnbb(&["verify", "--min-genus", "1"]);
    assert!(!out.status.success());
}
