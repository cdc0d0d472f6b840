use teamlogic::syntax::{desugar, desugar_henkin, desugar_slash, parse_atom};
use teamlogic::{parse, Atom, Formula, Var, VarTuple};

fn names(vs: &[Var]) -> Vec<&str> {
    vs.iter().map(Var::as_str).collect()
}

#[test]
fn parses_the_valid_sentence() {
    let f = parse("forall x. forall y. exists z. (ind(z ;; x) and z = y)").unwrap();
    let expected = Formula::forall(
        "x",
        Formula::forall(
            "y",
            Formula::exists("z", Formula::and(Formula::ind(&["z"], &[], &["x"]), Formula::eq("z", "y"))),
        ),
    );
    assert_eq!(f, expected);
    assert!(f.is_sentence());
}

#[test]
fn parses_atoms_and_slashes() {
    assert_eq!(parse("dep(x y ; z)").unwrap(), Formula::dep(&["x", "y"], &["z"]));
    match parse("exists z/{x}. z = x").unwrap() {
        Formula::SlashedExists { var, slashed, body } => {
            assert_eq!(var, Var::new("z"));
            assert_eq!(slashed, VarTuple::from_names(&["x"]));
            assert_eq!(*body, Formula::eq("z", "x"));
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(parse_atom("ind(u ;; v)").unwrap(), Atom::Ind { .. }));
}

#[test]
fn parse_errors_have_positions() {
    let e = parse("forall x.\n  (x = ").unwrap_err();
    assert_eq!(e.line, 2);
    assert!(e.col > 1);
    assert!(parse("not (x = y and y = x)").is_err());
    assert!(parse("branch{forall x exists y; forall x exists v}. x = v").is_err());
}

#[test]
fn free_variables() {
    assert_eq!(names(&parse("dep(x ; y)").unwrap().free_vars()), ["x", "y"]);
    assert_eq!(names(&parse("forall x. ind(z ;; x)").unwrap().free_vars()), ["z"]);
    let h = parse("branch{forall x exists y; forall u exists v}. R(x, y, u, v, w)").unwrap();
    assert_eq!(names(&h.free_vars()), ["w"]);
}

#[test]
fn slash_desugaring() {
    let f = parse("forall x. exists y. exists z/{x}. z = x").unwrap();
    let want = parse("forall x. exists y. exists z. (ind(x ; y ; z) and z = x)").unwrap();
    assert_eq!(desugar_slash(&f).unwrap(), want);

    let g = parse("forall x. exists z/{x}. z = z").unwrap();
    assert_eq!(desugar_slash(&g).unwrap(), parse("forall x. exists z. (ind(x ;; z) and z = z)").unwrap());

    let plain = parse("forall x. exists y. x = y").unwrap();
    assert_eq!(desugar(&plain).unwrap(), plain);
}

#[test]
fn henkin_desugaring() {
    let h = parse("branch{forall x exists y; forall u exists v}. R(x, y, u, v)").unwrap();
    let d = desugar_henkin(&h).unwrap();
    assert_eq!(
        d,
        parse("forall x. exists y. forall u. exists v. (ind(v ; u ; x) and R(x, y, u, v))").unwrap()
    );
    let w = parse("branch{forall x exists y; forall u exists v}. R(x, y, u, v, w)").unwrap();
    assert_eq!(
        desugar_henkin(&w).unwrap(),
        parse("forall x. exists y. forall u. exists v. (ind(v ; u w ; x) and R(x, y, u, v, w))").unwrap()
    );
}

#[test]
fn printing_round_trips() {
    for text in [
        "forall x. forall y. exists z. (ind(z ;; x) and z = y)",
        "dep(x y ; z) or not x = y",
        "exists z/{x y}. (R(x, z) and dep( ; z))",
        "branch{forall x exists y; forall u exists v}. (y = x or v = u)",
        "(x = y or y = z) and ind(x ; y ; z)",
    ] {
        let f = parse(text).unwrap();
        assert_eq!(parse(&f.to_string()).unwrap(), f, "{text}");
    }
}
