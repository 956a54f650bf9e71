use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn convalg(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_convalg"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn workdir() -> TempDir {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("f.txt"), "2\n1 2\n").unwrap();
    std::fs::write(dir.path().join("g.txt"), "2\n3 4\n").unwrap();
    dir
}

#[test]
fn oracle_linear_and_cyclic() {
    let dir = workdir();
    let o = convalg(
        &[
            "oracle",
            "--variant",
            "linear",
            "--f",
            "f.txt",
            "--g",
            "g.txt",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "3 10 8");
    let o = convalg(
        &[
            "oracle",
            "--variant",
            "cyclic",
            "--f",
            "f.txt",
            "--g",
            "g.txt",
        ],
        dir.path(),
    );
    assert_eq!(stdout(&o).trim(), "11 10");
}

#[test]
fn gen_toom_with_nodes_has_rank_three() {
    let dir = workdir();
    let o = convalg(
        &[
            "gen", "--method", "toom", "--r", "2", "--n", "2", "--nodes", "0,1,inf", "--out",
            "k.json",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("k.json")).unwrap()).unwrap();
    assert_eq!(v["rank"], 3);
    assert_eq!(v["variant"], "linear");
    assert_eq!(v["A"]["rows"], 2);
    assert_eq!(v["C"]["entries"][3], "-1/1");

    let o = convalg(
        &["conv", "--alg", "k.json", "--f", "f.txt", "--g", "g.txt"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "3 10 8");
}

#[test]
fn cost_table_two_ranks() {
    let dir = workdir();
    let o = convalg(&["cost", "--tables", "2"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let headers = rdr.headers().unwrap().clone();
    let rank_col = headers.iter().position(|h| h == "rank").unwrap();
    let ranks: Vec<String> = rdr
        .records()
        .map(|r| r.unwrap()[rank_col].to_string())
        .collect();
    assert_eq!(ranks, ["3", "5", "7", "9", "11", "13", "15", "17"]);
}

#[test]
fn cost_writes_files_into_directory() {
    let dir = workdir();
    let o = convalg(
        &["cost", "--tables", "2,3,4", "--out", "tables"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    for t in ["table2.csv", "table3.csv", "table4.csv"] {
        let text = std::fs::read_to_string(dir.path().join("tables").join(t)).unwrap();
        assert!(text.starts_with("n,variant,generator,rank"), "{t}: {text}");
        assert!(text.contains(",match,") || text.contains(",match\n"));
    }
}

#[test]
fn gen_then_validate_round_trip() {
    let dir = workdir();
    let mut cases: Vec<Vec<String>> = Vec::new();
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    for n in 2..=9 {
        let n = n.to_string();
        cases.push(s(&["--method", "toom", "--r", &n, "--n", &n]));
        cases.push(s(&[
            "--method",
            "toom",
            "--r",
            &n,
            "--n",
            &n,
            "--scheme",
            "chebyshev",
        ]));
        cases.push(s(&["--method", "winograd", "--r", &n, "--n", &n]));
    }
    for n in 2..=6 {
        let n = n.to_string();
        cases.push(s(&["--method", "dft", "--r", &n, "--n", &n]));
        cases.push(s(&["--method", "dft", "--r", &n, "--n", &n, "--cyclic"]));
        cases.push(s(&["--method", "dct", "--r", &n, "--n", &n]));
        cases.push(s(&["--method", "direct", "--r", "3", "--n", &n]));
    }
    for nest in ["2x2", "2x3", "2x4", "2x2x2", "3x3"] {
        cases.push(s(&["--method", "toom", "--nest", nest]));
    }
    cases.push(s(&["--method", "karatsuba", "--r", "2", "--n", "2"]));
    cases.push(s(&["--method", "sparse3"]));
    cases.push(s(&[
        "--method",
        "winograd",
        "--r",
        "2",
        "--n",
        "3",
        "--divisors",
        "x; x-1; x^2+1",
    ]));
    cases.push(s(&[
        "--method",
        "toom",
        "--r",
        "3",
        "--n",
        "4",
        "--interchange",
    ]));
    for (i, case) in cases.iter().enumerate() {
        let file = format!("alg{i}.json");
        let mut args = vec!["gen".to_string()];
        args.extend(case.iter().cloned());
        args.extend(["--out".to_string(), file.clone()]);
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = convalg(&argv, dir.path());
        assert!(o.status.success(), "gen {case:?}: {}", stderr(&o));
        let o = convalg(&["validate", "--alg", &file], dir.path());
        assert!(o.status.success(), "validate {case:?}: {}", stderr(&o));
    }
}

#[test]
fn exit_codes_and_error_lines() {
    let dir = workdir();
    let o = convalg(&["gen", "--method", "nope"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[usage]: "));
    assert_eq!(stderr(&o).lines().count(), 1);

    let o = convalg(
        &[
            "gen",
            "--method",
            "winograd",
            "--r",
            "2",
            "--n",
            "2",
            "--divisors",
            "x; x^2",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("error[generation]: "));

    let o = convalg(
        &[
            "gen", "--method", "dft", "--r", "3", "--n", "3", "--out", "d.json",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let o = convalg(&["validate", "--alg", "d.json", "--tol", "0"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[validation]: "));

    let o = convalg(
        &[
            "conv",
            "--alg",
            "missing.json",
            "--f",
            "f.txt",
            "--g",
            "g.txt",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));

    let o = convalg(&["--help"], dir.path());
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn tampered_algorithm_fails_validation() {
    let dir = workdir();
    let o = convalg(
        &[
            "gen",
            "--method",
            "karatsuba",
            "--r",
            "2",
            "--n",
            "2",
            "--out",
            "k.json",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let path = dir.path().join("k.json");
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["C"]["entries"][0] = "2/1".into();
    std::fs::write(&path, v.to_string()).unwrap();
    let o = convalg(&["validate", "--alg", "k.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn two_dimensional_conv_matches_oracle() {
    let dir = workdir();
    std::fs::write(dir.path().join("f2.txt"), "2 2\n1 2\n3 4\n").unwrap();
    std::fs::write(dir.path().join("g2.txt"), "2 2\n1 0\n0 1\n").unwrap();
    let o = convalg(
        &[
            "gen",
            "--method",
            "karatsuba",
            "--r",
            "2",
            "--n",
            "2",
            "--out",
            "k.json",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let o = convalg(
        &[
            "conv", "--alg", "k.json", "--f", "f2.txt", "--g", "g2.txt", "--dims", "2", "--out",
            "y.txt",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "1 2 0\n3 5 2\n0 3 4\n");
    let y = std::fs::read_to_string(dir.path().join("y.txt")).unwrap();
    assert!(y.starts_with("3 3\n"));
}

#[test]
fn bench_accuracy_writes_both_csvs() {
    let dir = workdir();
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{"generators": ["toom-integer", "winograd"], "dims": [1, 2], "sizes": [2, 3], "trials": 2, "base_seed": 7}"#,
    )
    .unwrap();
    let run = |workers: &str, out: &str| {
        let o = convalg(
            &[
                "bench-accuracy",
                "--config",
                "cfg.json",
                "--out",
                out,
                "--workers",
                workers,
            ],
            dir.path(),
        );
        assert!(o.status.success(), "{}", stderr(&o));
        std::fs::read_to_string(dir.path().join(out)).unwrap()
    };
    let seq = run("1", "seq.csv");
    let par = run("3", "par.csv");
    assert_eq!(seq, par);
    assert!(seq.starts_with("generator,d,n,trial,seed,rel_err\n"));
    assert_eq!(seq.lines().count(), 1 + 2 * 2 * 2 * 2);
    let agg = std::fs::read_to_string(dir.path().join("seq_aggregate.csv")).unwrap();
    assert!(agg.starts_with("generator,d,n,mean_rel_err\n"));
    assert_eq!(agg.lines().count(), 1 + 2 * 2 * 2);

    std::fs::write(dir.path().join("bad.json"), r#"{"trails": 3}"#).unwrap();
    let o = convalg(
        &["bench-accuracy", "--config", "bad.json", "--out", "x.csv"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
}
