use std::io::Write;
use std::process::Command;

use pointderiv::exprio::{decode_reports, decode_series};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn pointderiv(args: &[&str]) -> Run {
    let output = Command::new(env!("CARGO_BIN_EXE_pointderiv"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: output.status.code().expect("exit code"),
        stdout: String::from_utf8(output.stdout).unwrap(),
        stderr: String::from_utf8(output.stderr).unwrap(),
    }
}

fn ok(args: &[&str]) -> String {
    let run = pointderiv(args);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    run.stdout.trim_end().to_string()
}

#[test]
fn derive_at_a_constant_point() {
    let out = ok(&["derive", "-e", "const a; var x; f = x^2; b = a;", "--var", "x", "--beta", "b"]);
    assert_eq!(out, "a x + x a");
}

#[test]
fn derive_at_one() {
    let out = ok(&["derive", "-e", "var x; f = x^2; b = 1;", "--var", "x", "--beta", "b"]);
    assert_eq!(out, "2 x");
}

#[test]
fn derive_truncated_input() {
    let out = ok(&["--order", "3", "derive", "-e", "var x; f = inv1m(x);", "--var", "x"]);
    assert_eq!(out, "1 + 2 x + 3 x^2 + O(deg>2)");
}

#[test]
fn derive_errors() {
    let run = pointderiv(&["derive", "-e", "var x; f = x^2;", "--var", "z"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains('z'), "{}", run.stderr);
    let run = pointderiv(&["derive", "-e", "const a; var x; f = x;", "--var", "a"]);
    assert_eq!(run.code, 2);
    let run = pointderiv(&["derive", "-e", "var x; f = x;", "--var", "x", "--series", "g"]);
    assert_eq!(run.code, 2);
    let run = pointderiv(&["derive", "-e", "var x; f = x y;", "--var", "x"]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("1:14"), "{}", run.stderr);
    assert!(run.stdout.is_empty());
}

#[test]
fn second_partials() {
    let program = "var x y; f = x y; one = 1;";
    for (outer, inner) in [("y", "x"), ("x", "y")] {
        let out = ok(&[
            "second", "-e", program, "--outer-var", outer, "--outer-beta", "one", "--inner-var",
            inner, "--inner-beta", "one",
        ]);
        assert_eq!(out, "1");
    }
    let out = ok(&["second", "-e", "const a; var x y; f = 3 a;", "--outer-var", "x", "--inner-var", "y"]);
    assert_eq!(out, "0");
    let run = pointderiv(&[
        "second", "-e", program, "--outer-var", "x", "--outer-beta", "nope", "--inner-var", "y",
    ]);
    assert_eq!(run.code, 2);
}

#[test]
fn substitution() {
    let program = "var x y; f = x^2; g = x + y;";
    assert_eq!(ok(&["subst", "-e", program, "--assign", "x=g"]), "x^2 + x y + y x + y^2");
    assert_eq!(ok(&["subst", "-e", program, "--assign", "x=x", "--assign", "y=y"]), "x^2");
    let run = pointderiv(&["subst", "-e", "const a; var x; f = x;", "--assign", "a=x"]);
    assert_eq!(run.code, 2);
    let run = pointderiv(&["subst", "-e", "const a; var x; f = inv1m(x);", "--assign", "x=a"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("non-convergent"), "{}", run.stderr);
    let run = pointderiv(&["subst", "-e", program, "--assign", "x"]);
    assert_eq!(run.code, 2);
}

#[test]
fn file_input() {
    let dir = std::env::temp_dir().join(format!("pointderiv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("prog.txt");
    let mut file = std::fs::File::create(&path).unwrap();
    writeln!(file, "# derivative of a commutator\nvar x y;\nf = x y - y x;").unwrap();
    let out = ok(&["derive", path.to_str().unwrap(), "--var", "x"]);
    assert_eq!(out, "0");
    let missing = dir.join("missing.txt");
    assert_eq!(pointderiv(&["derive", missing.to_str().unwrap(), "--var", "x"]).code, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn structured_series_output_decodes() {
    let out = ok(&["--format", "structured", "derive", "-e", "const a; var x; f = x^2;", "--var", "x", "--beta", "a"]);
    let d = decode_series(&out).unwrap();
    assert_eq!(d.to_string(), "a x + x a");
}

#[test]
fn check_with_no_trials() {
    let out = ok(&["check", "chain", "--trials", "0"]);
    assert!(out.starts_with("chain: PASS (0 trials, 0 failures"), "{out}");
}

#[test]
fn structured_reports_decode_and_are_deterministic() {
    let args = ["check", "clairaut", "--trials", "5", "--order", "3", "--seed", "7", "--format", "structured"];
    let first = decode_reports(&ok(&args)).unwrap();
    let second = decode_reports(&ok(&args)).unwrap();
    assert_eq!(first.len(), 1);
    assert!(first[0].passed());
    let strip = |mut r: Vec<pointderiv_core::identities::CheckReport>| {
        r.iter_mut().for_each(|r| r.elapsed = Default::default());
        r
    };
    assert_eq!(strip(first), strip(second));
}

#[test]
fn mutants_fail_with_exit_code_three() {
    for mutant in ["drop-last-insertion", "forget-prefix", "swap-leibniz-operands"] {
        let run = pointderiv(&["check", "all", "--trials", "10", "--order", "3", "--mutant", mutant]);
        assert_eq!(run.code, 3, "{mutant}: {}", run.stdout);
        assert!(run.stdout.contains("at word"), "{mutant}: {}", run.stdout);
    }
}

#[test]
fn usage_errors() {
    assert_eq!(pointderiv(&["check", "everything"]).code, 2);
    assert_eq!(pointderiv(&["check", "axioms", "--mutant", "reference"]).code, 2);
    assert_eq!(pointderiv(&["--order", "-1", "check", "axioms"]).code, 2);
    assert_eq!(pointderiv(&[]).code, 2);
}
