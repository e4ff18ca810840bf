use std::ffi::OsString;
use std::process::Command;

use census::cli;

fn run(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<OsString> = std::iter::once("census")
        .chain(args.iter().copied())
        .map(Into::into)
        .collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

/// CSV body without the `#` metadata lines.
fn body(out: &str) -> Vec<&str> {
    out.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn rivin_columns_agree() {
    let (code, out, _) = run(&["rivin", "--k", "2", "--n-max", "12"]);
    assert_eq!(code, 0);
    let rows = body(&out);
    assert_eq!(rows[0], "n,formula,brute_force,equal");
    assert_eq!(rows.len(), 13);
    assert!(rows[1..].iter().all(|r| r.ends_with(",true")));
}

#[test]
fn orbit_census_row() {
    let (code, out, _) = run(&["orbits", "--k", "2", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(
        body(&out),
        [
            "n,gamma_cr,orbit_count,ratio_numerator,ratio_denominator",
            "3,28,2,24,7"
        ]
    );
    let (_, canon, _) = run(&["orbits", "--n-max", "6", "--method", "canonicalize"]);
    let (_, burn, _) = run(&["orbits", "--n-max", "6", "--method", "burnside"]);
    assert_eq!(body(&canon), body(&burn));
}

#[test]
fn metadata_header_comes_first() {
    let (_, out, _) = run(&[
        "generic-fraction",
        "--n",
        "20,30",
        "--samples",
        "500",
        "--seed",
        "3",
        "--predicate",
        "cprime",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("# census "));
    assert_eq!(lines[1], "# command: generic-fraction");
    assert!(lines[2].starts_with("# flags: {") && lines[2].contains("\"samples\":500"));
    assert_eq!(lines[3], "# seed: 3");
    assert_eq!(lines[4], "n,samples,hits,density,ci_halfwidth,exact");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "generic-fraction",
        "--n",
        "40",
        "--samples",
        "2000",
        "--seed",
        "11",
        "--predicate",
        "e-set",
        "--complement",
    ];
    assert_eq!(run(&args).1, run(&args).1);
    let args = [
        "kolmogorov",
        "--n",
        "100",
        "--samples",
        "300",
        "--seed",
        "5",
        "--json",
    ];
    assert_eq!(run(&args).1, run(&args).1);
}

#[test]
fn encode_the_commutator() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("comm.txt");
    std::fs::write(&path, "gens: 2\nrel: abAB\n").unwrap();
    let (code, out, _) = run(&["encode", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(body(&out).contains(&"six_letter,10|b1b10-b1-b10"));
    let (_, json, _) = run(&["encode", "--input", path.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["result"]["six_letter"], "10|b1b10-b1-b10");
    assert_eq!(v["meta"]["command"], "encode");
}

#[test]
fn tietze_and_dehn() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    std::fs::write(&path, "gens: 2\nrel: ab\n").unwrap();
    let (code, out, _) = run(&["tietze", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(body(&out).contains(&"gens,1"));
    std::fs::write(&path, "gens: 1\nrel: aa\n").unwrap();
    assert_eq!(run(&["tietze", "--input", path.to_str().unwrap()]).0, 2);
    assert_eq!(
        run(&[
            "tietze",
            "--input",
            path.to_str().unwrap(),
            "--no-two-torsion"
        ])
        .0,
        0
    );

    let (code, _, err) = run(&["dehn", "--relator", "abAB", "--word", "a"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let (code, out, _) = run(&["count", "--n-max", "3", "--output", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l == "3,36,28,53,45"), "{text}");
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# defaults\nn = 2\nmethod = canonicalize\njson = true\n",
    )
    .unwrap();
    let (code, out, err) = run(&["--config", cfg.to_str().unwrap(), "orbits"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"][0]["orbit_count"], "2");
    assert_eq!(
        v["meta"]["flags"]["command"]["orbits"]["method"],
        "canonicalize"
    );
    let (code, out, _) = run(&["orbits", "--config", cfg.to_str().unwrap(), "--n", "1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"][0]["n"], "1");
    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    assert_eq!(
        run(&["--config", cfg.to_str().unwrap(), "orbits", "--n", "2"]).0,
        2
    );
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["orbits", "--k", "1", "--n", "2"]).0, 2);
    assert_eq!(run(&["no-such-command"]).0, 2);
    assert_eq!(run(&["kolmogorov", "--n", "10"]).0, 2);
    assert_eq!(
        run(&["count", "--n-max", "12", "--enumerate", "--cap", "100"]).0,
        3
    );
    assert_eq!(
        run(&[
            "orbits",
            "--n",
            "9",
            "--method",
            "canonicalize",
            "--cap",
            "100"
        ])
        .0,
        3
    );
    let (code, out, _) = run(&["verify", "--criterion", "10"]);
    assert_eq!(code, 0);
    assert!(body(&out)[1].starts_with("10,tietze-cleanup,true,"));
}

#[test]
fn recover_and_search_outcomes() {
    let (code, out, _) = run(&["recover", "--candidate", "aabab", "--prefix", "a"]);
    assert_eq!(code, 0);
    assert!(body(&out)[1].starts_with("status,ambiguous"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trivial.txt");
    std::fs::write(&path, "gens: 1\nrel: a\n").unwrap();
    let (code, out, _) = run(&[
        "search",
        "--input",
        path.to_str().unwrap(),
        "--max-len",
        "12",
    ]);
    assert_eq!(code, 0);
    assert_eq!(body(&out)[1], "found,false");
}

#[test]
fn binary_process_exit_status() {
    let bin = env!("CARGO_BIN_EXE_census");
    let ok = Command::new(bin)
        .args(["orbits", "--n", "2"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("2,12,2,"));
    let bad = Command::new(bin).args(["orbits"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
