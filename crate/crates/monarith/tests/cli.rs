use monarith::cli::run;

fn cli(args: &[&str]) -> (i32, String) {
    run(std::iter::once("monarith").chain(args.iter().copied()))
}

fn first_line(out: &str) -> &str {
    out.lines().next().unwrap_or("")
}

#[test]
fn eval_reports_truth_values() {
    let (code, out) = cli(&["eval", "E y. x = y.y", "--let", "x=x1.x1"]);
    assert_eq!(code, 0);
    assert_eq!(first_line(&out), "true");
    let (code, out) = cli(&["eval", "E y. x = y.y", "--let", "x=x1.x2"]);
    assert_eq!(code, 0);
    assert_eq!(first_line(&out), "false");
}

#[test]
fn eval_on_other_models() {
    let (_, out) = cli(&["--monoid", "bs:1,2", "eval", "'a'.'b' = 'b'.'b'.'a'"]);
    assert_eq!(first_line(&out), "true");
    let (_, out) = cli(&["--monoid", "bs:1,2", "eval", "'a'.'b' = 'b'.'a'"]);
    assert_eq!(first_line(&out), "false");
    let (_, out) = cli(&[
        "--monoid",
        "trace:v1,v2;edges=v1-v2",
        "eval",
        "'v1'.'v2' = 'v2'.'v1'",
    ]);
    assert_eq!(first_line(&out), "true");
    let (_, out) = cli(&[
        "--monoid",
        "nat",
        "--bound",
        "5",
        "eval",
        "E y. x = y + y",
        "--let",
        "x=4",
    ]);
    assert_eq!(first_line(&out), "true");
}

#[test]
fn eval_witness_mode() {
    let (code, out) = cli(&[
        "--mode",
        "witness",
        "eval",
        "E y. x = y.y",
        "--let",
        "x=x1.x1",
        "--witness",
        "y=x1",
    ]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(first_line(&out), "true");
    let (code, _) = cli(&[
        "--mode",
        "witness",
        "eval",
        "E y. x = y.y",
        "--let",
        "x=x1.x1",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn malformed_formula_exits_with_a_column() {
    let (code, out) = cli(&["eval", "E y. (x = y.y"]);
    assert_eq!(code, 2);
    assert!(out.contains("column 14"), "{out}");
}

#[test]
fn unbound_variable_is_an_error() {
    let (code, out) = cli(&["eval", "x = x"]);
    assert_eq!(code, 2);
    assert!(out.contains("x"), "{out}");
}

#[test]
fn gadget_words() {
    let (code, out) = cli(&["gadget", "mult", "2", "1"]);
    assert_eq!(code, 0);
    assert!(
        out.contains("word: x2^2.x1^3.x2.x1^2.x2^2.x1^2.x2.x1^3.x2^2"),
        "{out}"
    );
    assert!(out.contains("witness bound: 18"), "{out}");
    let (_, out) = cli(&["--format", "machine", "gadget", "mult", "2", "1"]);
    assert!(
        out.starts_with("gadget=mult word=x2.x2.x1.x1.x1.x2."),
        "{out}"
    );
    assert!(out.contains("witness_bound=18"));
    let (code, out) = cli(&["gadget", "a-word", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("witness bound: 5"), "{out}");
}

#[test]
fn gadget_parameter_errors() {
    assert_eq!(cli(&["gadget", "mult", "-1", "0"]).0, 2);
    assert_eq!(cli(&["gadget", "mult", "1"]).0, 2);
    assert_eq!(cli(&["gadget", "trans", "0"]).0, 2);
    assert_eq!(cli(&["gadget", "no-such"]).0, 2);
    assert_eq!(cli(&["--monoid", "free:x1", "gadget", "basis"]).0, 2);
}

#[test]
fn verify_suites() {
    let (code, out) = cli(&["verify", "mult", "--max", "3"]);
    assert_eq!((code, out.as_str()), (0, "OK, 16 instances\n"));
    let (code, out) = cli(&["verify", "trans", "--max", "3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("OK, "));
    for suite in ["tuple", "concat", "b-pairs", "orbit"] {
        let (code, out) = cli(&["verify", suite, "--max", "1"]);
        assert_eq!(code, 0, "{suite}: {out}");
    }
    let (code, out) = cli(&["--format", "machine", "verify", "mult", "--max", "1"]);
    assert_eq!(
        (code, out.as_str()),
        (0, "suite=mult instances=4 failures=0\n")
    );
    assert_eq!(cli(&["verify", "nope"]).0, 2);
}

#[test]
fn translate_reports_levels() {
    let (code, out) = cli(&["translate", "nat-in-free", "0 = 0"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("formula: 1 = 1\n"), "{out}");
    assert!(out.contains("level gain: 0"));
    let (code, out) = cli(&["translate", "monoid-in-nat", "0 = 0"]);
    assert_eq!(code, 2);
    assert!(out.contains("sort"), "{out}");
    assert_eq!(cli(&["translate", "unknown", "0 = 0"]).0, 2);
}

#[test]
fn membership() {
    let (code, out) = cli(&["member", "a.b.a.b", "ab"]);
    assert_eq!((code, out.as_str()), (0, "yes, (ab)(ab)\n"));
    let (_, out) = cli(&["--format", "machine", "member", "abab", "ab"]);
    assert_eq!(out, "member=true witness=1,1\n");
    let (code, out) = cli(&["member", "aba", "ab"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("no"), "{out}");
}

#[test]
fn classify_levels() {
    assert_eq!(
        cli(&["classify", "A x. E y. x = y"]),
        (0, "Pi2\n".to_string())
    );
    assert_eq!(cli(&["classify", "x = x"]).1, "QF\n");
    assert_eq!(
        cli(&["--format", "machine", "classify", "E x. x = x"]).1,
        "level=Sigma1\n"
    );
}

#[test]
fn code_decode_round_trip() {
    let (code, out) = cli(&["code", "x1.x3.x2"]);
    assert_eq!((code, out.as_str()), (0, "62477\n"));
    let (code, out) = cli(&["decode", "62477"]);
    assert_eq!(code, 0);
    assert!(out.contains("(1,3,2)") && out.contains("x1.x3.x2"), "{out}");
    assert_eq!(cli(&["code", "(1,0)"]).1, "7\n");
    assert_eq!(cli(&["decode", "7"]).1.lines().next(), Some("(1,0)"));
}

#[test]
fn config_file_supplies_defaults() {
    let path = std::env::temp_dir().join(format!("monarith-cli-{}.toml", std::process::id()));
    std::fs::write(&path, "format = \"machine\"\n").unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(cli(&["--config", p, "classify", "x = x"]).1, "level=QF\n");
    assert_eq!(
        cli(&["--config", p, "--format", "text", "classify", "x = x"]).1,
        "QF\n"
    );
    std::fs::write(&path, "colour = \"red\"\n").unwrap();
    assert_eq!(cli(&["--config", p, "classify", "x = x"]).0, 2);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn usage_errors() {
    assert_eq!(cli(&[]).0, 2);
    assert_eq!(cli(&["frobnicate"]).0, 2);
    assert_eq!(cli(&["--help"]).0, 0);
}
