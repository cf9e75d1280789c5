use std::path::PathBuf;
use std::process::Command;

use falg_cli::{run, EXIT_BOUND, EXIT_FALSE, EXIT_INPUT, EXIT_OK};
use serde_json::Value;

fn example(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("examples");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn falg(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("falg").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn falg_json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let (code, out, _) = falg(&all);
    (
        code,
        serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")),
    )
}

#[test]
fn word_on_p1() {
    let p1 = example("p1.falg");
    let (code, out, _) = falg(&["word", &p1, "f(f(f(f(a))))", "a"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "equal\n"));
    let (code, out, _) = falg(&["word", &p1, "f(f(f(a)))", "a"]);
    assert_eq!((code, out.as_str()), (EXIT_FALSE, "not equal\n"));
}

#[test]
fn saturate_p1_prints_two_element_table() {
    let (code, out, _) = falg(&["saturate", &example("p1.falg"), "--max-classes", "100"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        out,
        "finite quotient with 2 elements\n0 = a\n1 = f(a)\nalgebra quotient\n  carrier 0 1\n  op f: (0)->1 (1)->0\n"
    );
}

#[test]
fn saturate_reports_exhausted_budget() {
    let (code, doc) = falg_json(&["saturate", &example("z3.falg"), "--max-classes", "2"]);
    assert_eq!(code, EXIT_BOUND);
    assert_eq!(doc["status"], "inconclusive");
}

#[test]
fn powerset_monoid_is_conjunction() {
    let (code, out, _) = falg(&["monoid", &example("powerset.falg")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("0 = {}\n1 = {*}\n"), "{out}");
    assert!(
        out.ends_with("  carrier 0 1\n  unit 1\n  mult (0,0)->0 (0,1)->0 (1,0)->0 (1,1)->1\n"),
        "{out}"
    );
    let (_, doc) = falg_json(&["monoid", &example("powerset.falg")]);
    assert_eq!(doc["unit"], "1");
    assert_eq!(doc["table"], serde_json::json!([[0, 0], [0, 1]]));
}

#[test]
fn bounded_monoid_is_partial() {
    let (code, doc) = falg_json(&["monoid", &example("unary_monoid.falg"), "--depth", "3"]);
    assert_eq!(code, EXIT_BOUND);
    assert_eq!(doc["status"], "partial");
    assert_eq!(doc["elements"].as_array().unwrap().len(), 4);
    // f^i · f^j = f^(i+j) where defined.
    assert_eq!(doc["table"][1][2], 3);
    assert!(doc["table"][2][2].is_null());
}

#[test]
fn equations_give_unknown_rather_than_false() {
    let file = example("monoid.falg");
    let (code, out, _) = falg(&["word", &file, "m(e, e)", "e", "--inst-depth", "1"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "equal\n"));
    let (code, doc) = falg_json(&[
        "word",
        &file,
        "m(e, m(e, e))",
        "m(m(e, e), e)",
        "--inst-depth",
        "0",
    ]);
    assert_eq!(code, EXIT_BOUND);
    assert_eq!(doc["verdict"], "unknown");
}

#[test]
fn classes_partition_p1() {
    let (code, doc) = falg_json(&["classes", &example("p1.falg"), "--depth", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(doc["terms"], 4);
    assert_eq!(doc["classes"].as_array().unwrap().len(), 2);
    assert_eq!(
        doc["classes"][0]["members"],
        serde_json::json!(["a", "f(f(a))"])
    );
}

#[test]
fn laws_hold_for_finite_monads() {
    for file in ["powerset.falg", "free_z2.falg"] {
        let (code, doc) = falg_json(&["laws", &example(file), "--size", "2"]);
        assert_eq!(code, EXIT_OK, "{file}");
        assert_eq!(doc["passed"], true);
        assert_eq!(doc["unit_isomorphism"], true);
    }
}

#[test]
fn laws_need_a_monad() {
    let (code, _, err) = falg(&["laws", &example("p1.falg")]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("no `monad` block"));
}

#[test]
fn chain_counts_binary_trees() {
    let dir = std::env::temp_dir().join(format!("falg-cli-chain-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.falg");
    std::fs::write(&path, "signature\n  op g 2\ngenerators x\n").unwrap();
    let (code, doc) = falg_json(&["chain", path.to_str().unwrap(), "--depth", "4"]);
    assert_eq!(code, EXIT_OK);
    let sizes: Vec<u64> = doc["stages"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["size"].as_u64().unwrap())
        .collect();
    assert_eq!(sizes, [1, 2, 5, 26, 677]);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn chain_colimit_matches_saturation() {
    let (code, doc) = falg_json(&["chain", &example("z3.falg")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(doc["truncations"]["colimit_size"], 3);
    assert_eq!(doc["truncations"]["births"], serde_json::json!([0, 1, 2]));
}

#[test]
fn witness_subsets() {
    let file = example("monoid.falg");
    let (code, doc) = falg_json(&["witness", &file, "--algebra", "Z3", "--subset", "2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(doc["algebras"][0]["generates"], true);
    let (code, doc) = falg_json(&["witness", &file, "--algebra", "Z3", "--subset", "0"]);
    assert_eq!(code, EXIT_FALSE);
    assert_eq!(doc["algebras"][0]["generates"], false);
    let (code, _, _) = falg(&["witness", &file, "--algebra", "Z3", "--subset", "7"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn witness_finds_relations_for_the_quotient() {
    let (code, doc) = falg_json(&["witness", &example("p1.falg")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(doc["relations"]["status"], "found");
    assert_eq!(
        doc["relations"]["relations"],
        serde_json::json!([["a", "f(f(a))"]])
    );
}

#[test]
fn check_reports_model_membership() {
    let (code, doc) = falg_json(&["check", &example("monoid.falg")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(doc["algebras"]["Bool"]["satisfies_equations"], true);
    assert_eq!(doc["monad"], "presented");
}

#[test]
fn input_errors_exit_3_with_position() {
    let dir = std::env::temp_dir().join(format!("falg-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.falg");
    std::fs::write(
        &path,
        "signature\n  op g 2\ngenerators a\nrelations\n  g(a) = a\n",
    )
    .unwrap();
    let (code, _, err) = falg(&["check", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("line 5, column 3"), "{err}");
    let (code, doc) = falg_json(&["check", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert_eq!(doc["status"], "error");
    std::fs::remove_dir_all(dir).unwrap();

    assert_eq!(falg(&["check", "/nonexistent/file.falg"]).0, EXIT_INPUT);
    assert_eq!(
        falg(&["word", &example("p1.falg"), "g(a)", "a"]).0,
        EXIT_INPUT
    );
    assert_eq!(falg(&["frobnicate"]).0, EXIT_INPUT);
    assert_eq!(
        falg(&["saturate", &example("p1.falg"), "--max-classes", "lots"]).0,
        EXIT_INPUT
    );
}

#[test]
fn help_exits_cleanly() {
    let (code, out, _) = falg(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("saturate"));
}

#[test]
fn binary_exit_codes_and_node_cap() {
    let bin = env!("CARGO_BIN_EXE_falg");
    let p1 = example("p1.falg");
    let out = Command::new(bin)
        .args(["word", &p1, "f(a)", "a"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_FALSE));
    assert_eq!(out.stdout, b"not equal\n");

    let out = Command::new(bin)
        .args(["classes", &p1, "--depth", "6"])
        .env("FALG_NODE_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_BOUND));

    let out = Command::new(bin)
        .args(["check", &p1])
        .env("FALG_NODE_CAP", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let cases: Vec<Vec<String>> = vec![
        vec!["saturate".into(), example("z3.falg"), "--json".into()],
        vec![
            "classes".into(),
            example("monoid.falg"),
            "--depth".into(),
            "2".into(),
            "--inst-depth".into(),
            "1".into(),
        ],
        vec![
            "laws".into(),
            example("powerset.falg"),
            "--size".into(),
            "2".into(),
        ],
        vec!["witness".into(), example("swap.falg")],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = falg(&args);
        for _ in 0..3 {
            assert_eq!(falg(&args), first, "{args:?}");
        }
    }
}
