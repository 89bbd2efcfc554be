use std::process::{Command, Output};

fn gapsets(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gapsets"))
        .args(args)
        .env_remove("GAPSETS_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn count_totals_through_15() {
    let out = gapsets(&["count", "--max-genus", "15"]);
    assert_eq!(out.status.code(), Some(0));
    let totals: Vec<u64> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(
        totals,
        [1, 1, 2, 4, 7, 12, 23, 39, 67, 118, 204, 343, 592, 1001, 1693, 2857]
    );
}

#[test]
fn genus_six_breakdown_sums_to_catalog() {
    let out = gapsets(&[
        "count",
        "--max-genus",
        "6",
        "--breakdown",
        "multiplicity",
        "--format",
        "csv",
    ]);
    let text = stdout(&out);
    let last = text.lines().last().unwrap();
    let cells: Vec<u64> = last.split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(cells[0], 6);
    assert_eq!(cells[1], 23);
    assert_eq!(cells[2..].iter().sum::<u64>(), 23);
}

#[test]
fn verifications_pass_at_genus_20() {
    for check in ["sandwich", "families", "fibonacci", "graph", "alpha"] {
        let max = if check == "graph" || check == "alpha" {
            "12"
        } else {
            "20"
        };
        let out = gapsets(&["verify", check, "--max-genus", max]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{check}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(stdout(&out).contains("PASS"), "{check}");
    }
}

#[test]
fn root_row() {
    let out = gapsets(&[
        "enumerate",
        "--max-genus",
        "6",
        "--depth-eq",
        "0",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "0;0;1;;;<1>\n");
}

#[test]
fn json_keys_are_ordered() {
    let out = gapsets(&["enumerate", "--max-genus", "1", "--format", "json"]);
    let lines: Vec<String> = stdout(&out).lines().map(String::from).collect();
    assert_eq!(
        lines[1],
        r#"{"genus":1,"depth":1,"multiplicity":2,"gaps":[1],"filtration":"(1)","generators":[2,3]}"#
    );
}

#[test]
fn sorted_output_is_identical_across_worker_counts() {
    let run = |workers: &str| {
        let out = gapsets(&[
            "enumerate",
            "--max-genus",
            "16",
            "--format",
            "csv",
            "--sort",
            "--workers",
            workers,
        ]);
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    let one = run("1");
    assert_eq!(one, run("3"));
    assert_eq!(one, run("8"));
    assert_eq!(String::from_utf8(one).unwrap().lines().count(), 6964 + 4806);
}

#[test]
fn workers_default_comes_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_gapsets"))
        .args(["count", "--max-genus", "3"])
        .env("GAPSETS_WORKERS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_gapsets"))
        .args(["count", "--max-genus", "3", "--workers", "2"])
        .env("GAPSETS_WORKERS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2_and_name_the_flag() {
    let cases: &[(&[&str], &str)] = &[
        (
            &["count", "--max-genus", "5", "--workers", "0"],
            "--workers",
        ),
        (
            &["count", "--max-genus", "5", "--format", "dot"],
            "--format",
        ),
        (
            &[
                "count",
                "--max-genus",
                "5",
                "--depth-le",
                "2",
                "--depth-eq",
                "1",
            ],
            "--depth",
        ),
        (&["count", "--max-genus", "60"], "max genus"),
        (&["verify", "sandwich", "--max-genus", "2"], "--max-genus"),
        (
            &["verify", "alpha", "--max-genus", "5", "--multiplicity", "3"],
            "--multiplicity",
        ),
        (&["subtree", "--root", "2", "--max-genus", "5"], "--root"),
        (&["count", "--bogus"], "--bogus"),
    ];
    for (args, flag) in cases {
        let out = gapsets(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(flag), "{args:?}: {err}");
    }
}

#[test]
fn output_file_receives_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("edges.csv");
    let out = gapsets(&[
        "graph-export",
        "--max-genus",
        "4",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("src_filtration,dst_filtration,is_tree_edge\n"));
    assert_eq!(text.lines().filter(|l| l.ends_with(",false")).count(), 5);
}

#[test]
fn rejected_runs_leave_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = gapsets(&[
        "verify",
        "sandwich",
        "--max-genus",
        "2",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!path.exists());
}

#[test]
fn ratios_report_minimum() {
    let out = gapsets(&["ratios", "--max-genus", "19"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("minimum at g = 18: 1.3806341\n"));
}

#[test]
fn subtree_levels_csv() {
    let out = gapsets(&[
        "subtree",
        "--root",
        "1,2",
        "--max-genus",
        "5",
        "--format",
        "csv",
    ]);
    assert_eq!(
        stdout(&out),
        "level,count,nondecreasing\n2,1,true\n3,3,true\n4,6,true\n5,11,true\n"
    );
}
