use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_teamlogic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn eval_coin_team() {
    let (s, coin, minus, empty) = (data("two.txt"), data("coin.txt"), data("coin_minus.txt"), data("empty.txt"));
    let o = run(&["eval", "ind(x ;; y)", "--structure", &s, "--team", &coin]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, "SAT (lax)"));
    let o = run(&["eval", "ind(x ;; y)", "--structure", &s, "--team", &minus]);
    assert_eq!((code(&o), stdout(&o).trim()), (1, "UNSAT (lax)"));
    let o = run(&["eval", "ind(x ;; y) and not x = x", "--structure", &s, "--team", &empty, "--semantics", "strict"]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, "SAT (strict)"));
}

#[test]
fn eval_errors_exit_2_with_position() {
    let o = run(&["eval", "ind(x ;; ", "--size", "2"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1, column"));
    let o = run(&["eval", "x = y", "--size", "2"]);
    assert_eq!(code(&o), 2);
    let o = run(&["eval", "x = x", "--structure", "/nonexistent/file", "--team", "/nonexistent"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn entail_examples() {
    let o = run(&["entail", &data("constancy.txt"), "--goal", "ind(y ;; x)"]);
    let out = stdout(&o);
    assert_eq!(code(&o), 0);
    assert!(out.contains("DERIVED") && out.contains("Constancy") && out.contains("ENTAILED"));

    let o = run(&["entail", &data("transitive.txt"), "--goal", "dep(y ; x)"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("DERIVED"));

    let o = run(&["entail", &data("none.txt"), "--goal", "ind(x ;; y)"]);
    let out = stdout(&o);
    assert_eq!(code(&o), 1);
    assert!(out.starts_with("NOT DERIVED") && out.contains("NOT ENTAILED") && out.contains("vars: x y"));
}

#[test]
fn entail_unsupported_fragment() {
    let o = run(&["entail", &data("constancy.txt"), "--goal", "dep(x ; y)", "--engine", "armstrong"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn counterexample_and_closure() {
    let o = run(&["counterexample", &data("none.txt"), "--goal", "ind(x ;; y)"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("COUNTERMODEL"));
    let o = run(&["counterexample", &data("constancy.txt"), "--goal", "ind(y ;; x)"]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, "NONE (derivable)"));

    let o = run(&["closure", &data("transitive.txt"), "--goal", "dep(y ; x)"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("DERIVED dep(y ; x)"));
}

#[test]
fn validity_examples() {
    let o = run(&["validity", "forall x. forall y. exists z. (ind(z;;x) and z=y)", "--max-size", "4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("VALID-UP-TO-4"));
    let o = run(&["validity", "forall x. exists y. exists z. (ind(z;;x) and z=x)", "--max-size", "4"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("COUNTERMODEL size 2"));
}

#[test]
fn translate_and_desugar() {
    let o = run(&["translate", "ind(x1;x2;x3)", "--scope", "x1", "x2", "x3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o).trim(),
        "forall y1. forall y2. forall y3. forall z1. forall z2. forall z3. (S(y1, y2, y3) and S(z1, z2, z3) \
         and y2 = z2 -> exists u1. exists u2. exists u3. (S(u1, u2, u3) and u2 = y2 and u1 = y1 and u3 = z3))"
    );
    let o = run(&["desugar", "forall x. exists y. exists z/{x}. z = x"]);
    assert_eq!(stdout(&o).trim(), "forall x. exists y. exists z. (ind(x ; y ; z) and z = x)");
}

#[test]
fn eso_check_and_branch() {
    let o = run(&["eso-check", "ind(x ;; y)", "--size", "2", "--team", &data("coin.txt")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("AGREE\n"));
    let o = run(&["branch", "branch{forall x exists y; forall u exists v}. v = x", "--size", "2"]);
    let out = stdout(&o);
    assert_eq!(code(&o), 0);
    assert!(out.contains("Skolem functions: FALSE") && out.contains("independence form (lax): FALSE"));
    let o = run(&["branch", "branch{forall x exists y; forall u exists v}. v = w", "--size", "2", "--assign", "w=1"]);
    assert!(stdout(&o).contains("Skolem functions: TRUE"));
}

#[test]
fn identical_inputs_give_identical_output() {
    let args = [
        "entail",
        &data("none.txt"),
        "--goal",
        "ind(x ; y ; z)",
        "--domain-sizes",
        "3",
        "--exhaustive-limit",
        "0",
        "--samples",
        "20",
        "--seed",
        "11",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&a), code(&b));
}
