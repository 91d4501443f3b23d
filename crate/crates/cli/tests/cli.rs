//! End-to-end tests of the binary: every subcommand through real files,
//! exit-code contract, and byte-identical reruns.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_flagspan"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("flagspan-cli-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).unwrap();
        TempDir(dir)
    }

    fn path(&self, name: &str) -> String {
        self.0.join(name).to_string_lossy().into_owned()
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

#[test]
fn mu_prints_formula_values() {
    for (m, d, expected) in [(3, 3, "5"), (1, 9, "9"), (6, 4, "12"), (5, 4, "10"), (2, 7, "7")] {
        let out = run(&["mu", "--m", &m.to_string(), "--d", &d.to_string()]);
        assert!(out.status.success());
        assert_eq!(stdout(&out).trim(), expected);
    }
}

#[test]
fn gen_standard_writes_identity_basis() {
    let tmp = TempDir::new("std");
    let path = tmp.path("std.json");
    let out = run(&["gen", "standard", "--d", "4", "--out", &path]);
    assert!(out.status.success());
    let text = fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["d"], 4);
    assert_eq!(v["flags"][0][0][0], "1");
    assert_eq!(v["flags"][0][1][0], "0");
    assert_eq!(v["flags"][0][1][1], "1");
}

#[test]
fn identical_seeds_give_byte_identical_files() {
    let tmp = TempDir::new("det");
    let (a, b) = (tmp.path("a.json"), tmp.path("b.json"));
    for path in [&a, &b] {
        let out = run(&[
            "gen", "random", "--m", "3", "--d", "4", "--seed", "99", "--out", path,
        ]);
        assert!(out.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    // Re-serialization of a parsed file is canonical: directsum of the
    // same inputs twice is also byte-identical.
    let (s1, s2) = (tmp.path("s1.json"), tmp.path("s2.json"));
    for path in [&s1, &s2] {
        let out = run(&["gen", "directsum", &a, &b, "--out", path]);
        assert!(out.status.success());
    }
    assert_eq!(fs::read(&s1).unwrap(), fs::read(&s2).unwrap());
}

#[test]
fn transverse_generation_reports_attempts() {
    let tmp = TempDir::new("trans");
    let path = tmp.path("t.json");
    let out = run(&[
        "gen", "transverse", "--m", "3", "--d", "3", "--seed", "7", "--out", &path,
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("attempt(s)"));
}

#[test]
fn synth_pipeline_on_a_generic_triple() {
    let tmp = TempDir::new("synth");
    let flags = tmp.path("t.json");
    let gens = tmp.path("g.json");
    assert!(run(&[
        "gen", "transverse", "--m", "3", "--d", "3", "--seed", "7", "--out", &flags,
    ])
    .status
    .success());

    let out = run(&["synth", &flags, "--out", &gens, "--debug-asserts"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("m=3 d=3 size=5 bound=5"));

    let out = run(&["verify", &flags, &gens]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verify: PASS"));

    // Identical invocations rewrite the file byte for byte.
    let gens2 = tmp.path("g2.json");
    assert!(run(&["synth", &flags, "--out", &gens2]).status.success());
    assert_eq!(fs::read(&gens).unwrap(), fs::read(&gens2).unwrap());
}

#[test]
fn synth_handles_pairs_with_size_d() {
    let tmp = TempDir::new("pair");
    let flags = tmp.path("p.json");
    assert!(run(&[
        "gen", "random", "--m", "2", "--d", "6", "--seed", "3", "--out", &flags,
    ])
    .status
    .success());
    let out = run(&["synth", &flags]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("m=2 d=6 size=6 bound=6"));
}

#[test]
fn analyze_matches_the_known_block_structure() {
    let tmp = TempDir::new("analyze");
    let flags = tmp.path("t.json");
    let analysis = tmp.path("a.json");
    let svg = tmp.path("d.svg");
    assert!(run(&[
        "gen", "transverse", "--m", "3", "--d", "3", "--seed", "7", "--out", &flags,
    ])
    .status
    .success());

    let out = run(&["analyze", &flags, "--out", &analysis, "--svg", &svg]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("sigma_uv=[3, 2, 1]"));
    assert!(text.contains("cycles=[3, 6]"));
    assert!(text.contains("|A|=6 |B|=0 |C|=3"));
    assert!(text.contains("equality-candidate: true"));
    assert!(text.contains("0.5*|A| + 0.333...*|B| >= d : PASS"));

    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&analysis).unwrap()).unwrap();
    assert_eq!(v["certificate"]["total_cost"], 3);
    assert_eq!(v["classification"]["a"], 6);
    assert_eq!(v["equality_candidate"]["candidate"], true);
    // Transverse pairings reverse order.
    assert_eq!(v["sigma_uv"], serde_json::json!([3, 2, 1]));

    let svg_text = fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<svg"));
    assert!(svg_text.contains("stroke-dasharray"));
}

#[test]
fn analyze_rejects_non_triples() {
    let tmp = TempDir::new("reject");
    let flags = tmp.path("p.json");
    assert!(run(&[
        "gen", "random", "--m", "2", "--d", "3", "--seed", "5", "--out", &flags,
    ])
    .status
    .success());
    let out = run(&["analyze", &flags]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_agrees_with_known_values() {
    let tmp = TempDir::new("oracle");
    let pair = tmp.path("p.json");
    assert!(run(&[
        "gen", "random", "--m", "2", "--d", "5", "--seed", "11", "--out", &pair,
    ])
    .status
    .success());
    let out = run(&["oracle", &pair]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "5");

    let triple = tmp.path("t.json");
    let cover = tmp.path("c.json");
    assert!(run(&[
        "gen", "transverse", "--m", "3", "--d", "4", "--seed", "13", "--out", &triple,
    ])
    .status
    .success());
    let out = run(&["oracle", &triple, "--out", &cover]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "6");
    let out = run(&["verify", &triple, &cover]);
    assert!(out.status.success());
}

#[test]
fn oracle_rejects_oversize_instances() {
    let tmp = TempDir::new("oversize");
    let flags = tmp.path("big.json");
    assert!(run(&[
        "gen", "random", "--m", "3", "--d", "9", "--seed", "1", "--out", &flags,
    ])
    .status
    .success());
    let out = run(&["oracle", &flags]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn bad_parameters_exit_with_two() {
    let tmp = TempDir::new("bad");
    let out = run(&["gen", "random", "--m", "2", "--d", "0", "--seed", "1", "--out", &tmp.path("x.json")]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["gen", "random", "--m", "2", "--d", "3", "--seed", "1", "--field", "fp:6", "--out", &tmp.path("x.json")]);
    assert_eq!(out.status.code(), Some(2));
    // Missing required seed is a clap error, also 2.
    let out = run(&["gen", "random", "--m", "2", "--d", "3", "--out", &tmp.path("x.json")]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["mu", "--m", "0", "--d", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_flags_broken_covers() {
    let tmp = TempDir::new("badcover");
    let flags = tmp.path("t.json");
    let gens = tmp.path("g.json");
    assert!(run(&[
        "gen", "standard", "--m", "3", "--d", "2", "--out", &flags,
    ])
    .status
    .success());
    fs::write(
        &gens,
        r#"{"size":1,"sets":[{"layers":[{"flag":"U","level":1}],"witness":["1","0"]}]}"#,
    )
    .unwrap();
    let out = run(&["verify", &flags, &gens]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).contains("verify: FAIL"));
    assert!(stdout(&out).contains("missing"));
}

#[test]
fn f5_pipeline_works_end_to_end() {
    let tmp = TempDir::new("f5");
    let flags = tmp.path("t.json");
    assert!(run(&[
        "gen", "random", "--m", "3", "--d", "4", "--seed", "21", "--field", "fp:5", "--out",
        &flags,
    ])
    .status
    .success());
    let out = run(&["synth", &flags]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("m=3 d=4"));
    assert!(stdout(&out).contains("bound=6"));
    let out = run(&["analyze", &flags]);
    assert!(out.status.success());
}

/// The randomized regression sweep: synth must exit 0 and stay within the
/// bound across a mix of m, d, and both fields.
#[test]
fn synth_regression_sweep() {
    let tmp = TempDir::new("sweep");
    let mut case = 0u64;
    for field in ["rational", "fp:5"] {
        for m in 1..=5usize {
            for d in 2..=6usize {
                for rep in 0..4u64 {
                    case += 1;
                    let flags = tmp.path(&format!("case{case}.json"));
                    let seed = (1000 + case * 37 + rep).to_string();
                    let out = run(&[
                        "gen", "random", "--m", &m.to_string(), "--d", &d.to_string(),
                        "--seed", &seed, "--field", field, "--out", &flags,
                    ]);
                    assert!(out.status.success(), "gen failed: m={m} d={d} {field}");
                    let out = run(&["synth", &flags]);
                    assert!(
                        out.status.success(),
                        "synth failed: m={m} d={d} {field} seed={seed}: {}",
                        String::from_utf8_lossy(&out.stderr)
                    );
                }
            }
        }
    }
    assert_eq!(case, 200);
}
