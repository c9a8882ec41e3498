use lambdac_web::{interpret, normalize_terms, rewrite_word};

const SOURCE: &str = "proc p/1\nproc q/1\n\
def unit ctx(v) = let x = ret v in p(x)\n\
def omega = (\\x. x x) (\\x. x x)\n\
def pair ctx(x) = let y = p(x) in let z = q(x) in ret y\n";

#[test]
fn normalizes_every_definition() {
    let out = normalize_terms(SOURCE, true, 30).unwrap();
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines[0], "def unit ctx(v) = p(v)  # 1 step");
    assert!(lines[1].ends_with("fuel exhausted after 30 steps"));
    assert_eq!(lines.len(), 3);
}

#[test]
fn interprets_in_json_and_term_models() {
    let model = r#"{"atoms":["0","1"],"effect":{"kind":"writer","generators":["a","b"],"max_len":2},
        "procs":{"p":{"arity":1,"table":["(a,0)","(a,1)"]},"q":{"arity":1,"table":["(b,0)","(b,1)"]}}}"#;
    let out = interpret(SOURCE, "pair", model).unwrap();
    assert_eq!(out, "pair = <(ab,0); (ab,1)>/1\n  0 -> (ab,0)\n  1 -> (ab,1)\n");
    assert_eq!(interpret(SOURCE, "unit", "term").unwrap(), "unit = [x1] p(x1)\n");
    assert!(interpret(SOURCE, "pair", "maybe2").unwrap_err().contains("no assignment"));
    assert!(interpret(SOURCE, "nothing", "maybe2").is_err());
}

#[test]
fn rewrites_words() {
    let word = "word 2 -> 2 over values2\nren (2 1):2\nren (2 1):2\n";
    assert_eq!(rewrite_word(word).unwrap(), "word 2 -> 2 over values2\n# merge-renamings, unit-renaming\n");
    let word = "word 3 -> 1 over maybe2\nsub 0 | <0; 1; 1; none>/2 | 0\nren (3 3):3\n";
    assert!(rewrite_word(word).unwrap().contains("sub 2 | <0; none>/1 | 0"));
    assert!(rewrite_word("word 1 -> 1 over nowhere\n").is_err());
}

#[test]
fn parse_errors_carry_positions() {
    let err = normalize_terms("def broken = let x = in ret x", false, 10).unwrap_err();
    assert!(err.contains("1:"), "{err}");
}
