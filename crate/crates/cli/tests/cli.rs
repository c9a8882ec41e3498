use std::path::PathBuf;
use std::process::Command;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn lambdac(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_lambdac"))
        .args(args)
        .env_remove("LAMBDAC_FUEL")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Compares with a stored report; `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, actual: &str) {
    let path = fixture(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {path}"));
    assert_eq!(actual, expected, "output differs from {name}");
}

#[test]
fn corpus_normal_forms_match_the_golden_report() {
    let corpus = fixture("corpus.lc");
    let check = lambdac(&["check", &corpus]);
    assert_eq!(check.code, 0, "{}", check.stdout);
    assert!(check.stdout.ends_with("50 definitions checked\n"));

    let norm = lambdac(&["norm", &corpus, "--beta", "off"]);
    assert_eq!(norm.code, 0, "{}", norm.stderr);
    assert_eq!(norm.stdout.lines().count(), 50);
    golden("corpus.norm", &norm.stdout);
}

#[test]
fn normal_forms_reparse_to_the_same_normal_form() {
    let norm = lambdac(&["norm", &fixture("corpus.lc"), "--beta", "off"]);
    let header = "func c/0\nfunc f/2\nproc p/1\nproc q/2\n";
    let defs: String = norm
        .stdout
        .lines()
        .map(|l| l.split("  #").next().unwrap().to_string() + "\n")
        .collect();
    let dir = std::env::temp_dir().join(format!("lambdac-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("normal.lc");
    std::fs::write(&path, format!("{header}{defs}")).unwrap();
    let again = lambdac(&["norm", path.to_str().unwrap(), "--beta", "off"]);
    assert_eq!(again.code, 0, "{}", again.stderr);
    for line in again.stdout.lines() {
        assert!(line.ends_with("# 0 steps"), "not normal: {line}");
    }
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn unit_rule_instance_normalizes_to_its_right_side() {
    let file = fixture("theory.lc");
    let run = lambdac(&["norm", &file, "--def", "unit_lhs"]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout, "def unit_lhs ctx(v) = p(v)  # 1 step\n");
    let eq = lambdac(&["eq", &file, "unit_lhs", "unit_rhs"]);
    assert_eq!((eq.code, eq.stdout.as_str()), (0, "proved\n"));
    let eq = lambdac(&["eq", &file, "assoc_lhs", "assoc_rhs"]);
    assert_eq!(eq.code, 0);
}

#[test]
fn omega_exhausts_fuel_only_with_beta() {
    let file = fixture("theory.lc");
    let run = lambdac(&["norm", &file, "--def", "omega", "--fuel", "40"]);
    assert_eq!(run.code, 2);
    assert!(run.stdout.contains("fuel exhausted after 40 steps"));

    let run = lambdac(&["--format", "json", "norm", &file, "--def", "omega", "--fuel", "40"]);
    let record: serde_json::Value = serde_json::from_str(run.stdout.trim()).unwrap();
    assert_eq!(record["exhausted"], true);

    let run = lambdac(&["norm", &file, "--def", "omega", "--beta", "off"]);
    assert_eq!(run.code, 0);
}

#[test]
fn fuel_can_come_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_lambdac"))
        .args(["norm", &fixture("theory.lc"), "--def", "omega"])
        .env("LAMBDAC_FUEL", "7")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("after 7 steps"));
}

#[test]
fn effect_order_is_refuted_by_the_writer_model() {
    let file = fixture("theory.lc");
    let run = lambdac(&["eq", &file, "k1", "k2"]);
    assert_eq!(run.code, 1, "{}{}", run.stdout, run.stderr);
    assert!(run.stdout.starts_with("refuted by writer2"), "{}", run.stdout);

    // Commutative effects alone cannot separate them.
    let run = lambdac(&["eq", &file, "k1", "k2", "--models", "maybe2,powerset2"]);
    assert_eq!(run.code, 2);
    assert!(run.stdout.starts_with("unknown"));
}

#[test]
fn broken_bind_table_fails_the_monad_laws_with_a_witness() {
    let run = lambdac(&["laws", "model", "--model", &fixture("broken_bind.json")]);
    assert_eq!(run.code, 1);
    assert!(run.stdout.starts_with("FAIL monad laws"));
    assert!(run.stdout.contains("m = none"), "{}", run.stdout);

    let run = lambdac(&["--format", "json", "laws", "model", "--model", &fixture("broken_bind.json")]);
    let record: serde_json::Value = serde_json::from_str(run.stdout.trim()).unwrap();
    assert_eq!(record["failed"], 1);
    assert!(!record["failures"][0]["detail"].as_str().unwrap().is_empty());
}

#[test]
fn builtin_models_pass_their_law_suites() {
    let run = lambdac(&["laws", "model", "--model", "maybe2"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert_eq!(run.stdout.lines().filter(|l| l.starts_with("PASS")).count(), 2);

    let run = lambdac(&["laws", "adjunction", "--model", "powerset2"]);
    assert_eq!(run.code, 0, "{}", run.stdout);

    let run = lambdac(&["laws", "term-model", "--samples", "30"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
}

#[test]
fn interpretation_tables_and_single_rows() {
    let dir = std::env::temp_dir().join(format!("lambdac-interp-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let model = dir.join("model.json");
    std::fs::write(
        &model,
        r#"{"atoms":["0","1"],"effect":{"kind":"maybe"},
            "procs":{"p":{"arity":1,"table":["1","none"]},"q":{"arity":1,"table":["0","0"]}}}"#,
    )
    .unwrap();
    let model = model.to_str().unwrap();
    let file = fixture("theory.lc");
    let run = lambdac(&["interp", &file, "assoc_lhs", "--model", model]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(run.stdout, "assoc_lhs = <1; none>/1\n  0 -> 1\n  1 -> none\n");
    let run = lambdac(&["interp", &file, "assoc_lhs", "--model", model, "--args", "1"]);
    assert_eq!(run.stdout, "assoc_lhs = <1; none>/1\n  1 -> none\n");

    let run = lambdac(&["interp", &file, "unit_lhs", "--model", "term"]);
    assert_eq!(run.stdout, "unit_lhs = [x1] p(x1)\n");

    // Unassigned symbols are an input error.
    let run = lambdac(&["interp", &file, "k1", "--model", "maybe2"]);
    assert_eq!(run.code, 3);
    assert!(run.stderr.contains("no assignment for symbol"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn example_words_normalize() {
    let run = lambdac(&["word", "norm", &fixture("diag.word")]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(
        run.stdout,
        "word 3 -> 1 over maybe2\nren (3):3\nsub 2 | <0; none>/1 | 0\n# 1 rewrite: naturality\n"
    );

    // Two nested substitutions merge into one; h's log comes before g's.
    let run = lambdac(&["word", "norm", &fixture("example.word")]);
    assert_eq!(
        run.stdout,
        "word 3 -> 2 over writer2\nsub 1 | <(bb,1); (bb,0); (aa,0); (aa,1)>/2 | 0\nren (2 1 3):3\n# 1 rewrite: associate\n"
    );

    let run = lambdac(&["word", "norm", &fixture("swaps.word")]);
    assert!(run.stdout.starts_with("word 2 -> 2 over values2\nsub 0 | <1; 0>/1 | 1\n"));
    let run = lambdac(&["word", "eq", &fixture("swaps.word"), &fixture("negate.word")]);
    assert_eq!((run.code, run.stdout.as_str()), (0, "proved\n"));
    let run = lambdac(&["word", "eq", &fixture("empty.word"), &fixture("negate.word")]);
    assert_eq!(run.code, 1, "{}", run.stdout);
    assert!(run.stdout.starts_with("refuted"));

    let run = lambdac(&["word", "roundtrip", &fixture("diag.word")]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.ends_with("# round trip proved\n"));
}

#[test]
fn empty_word_is_its_own_normal_form() {
    let run = lambdac(&["word", "norm", &fixture("empty.word")]);
    assert_eq!((run.code, run.stdout.as_str()), (0, "word 2 -> 2 over values2\n"));
    let run = lambdac(&["word", "eq", &fixture("empty.word"), &fixture("empty.word")]);
    assert_eq!(run.code, 0);
}

#[test]
fn computations_reject_cartesian_mode() {
    let run = lambdac(&["word", "norm", &fixture("diag.word"), "--mode", "cartesian"]);
    assert_eq!(run.code, 3);
    assert!(run.stderr.contains("cartesian"));
}

#[test]
fn json_output_is_deterministic() {
    let args = ["--format", "json", "eq", &fixture("theory.lc"), "k1", "k2", "--seed", "3"];
    let (a, b) = (lambdac(&args), lambdac(&args));
    assert_eq!(a.stdout, b.stdout);
    let record: serde_json::Value = serde_json::from_str(a.stdout.trim()).unwrap();
    assert_eq!(record["verdict"], "refuted");

    let args = ["--format", "json", "norm", &fixture("corpus.lc")];
    let (a, b) = (lambdac(&args), lambdac(&args));
    assert_eq!(a.stdout, b.stdout);
    for line in a.stdout.lines() {
        let _: serde_json::Value = serde_json::from_str(line).unwrap();
    }
}

#[test]
fn exit_codes_separate_outcomes() {
    let file = fixture("theory.lc");
    assert_eq!(lambdac(&["check", &file]).code, 0);
    assert_eq!(lambdac(&["--help"]).code, 0);
    assert_eq!(lambdac(&["frobnicate"]).code, 3);
    assert_eq!(lambdac(&["check", "/no/such/file.lc"]).code, 3);
    assert_eq!(lambdac(&["eq", &file, "k1", "missing"]).code, 3);
    assert_eq!(lambdac(&["eq", &file, "k1", "omega"]).code, 3);

    let dir = std::env::temp_dir().join(format!("lambdac-exit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.lc");
    std::fs::write(&bad, "proc p/1\ndef ok ctx(x) = p(x)\ndef bad ctx(x) = p(y)\n").unwrap();
    let run = lambdac(&["check", bad.to_str().unwrap()]);
    assert_eq!(run.code, 1);
    assert!(run.stdout.contains(":3:"), "{}", run.stdout);
    std::fs::remove_dir_all(dir).ok();
}
