use teamlogic::teamsem::{validity_search, EvalOptions, Evaluator, Validity};
use teamlogic::{evaluate, parse, sentence_sat, EvalError, Semantics, Structure, Team};

const MODES: [Semantics; 2] = [Semantics::Lax, Semantics::Strict];
const VALID: &str = "forall x. forall y. exists z. (ind(z ;; x) and z = y)";
const INVALID: &str = "forall x. exists y. exists z. (ind(z ;; x) and z = x)";

fn team(rows: &[&[u32]]) -> Team {
    Team::from_ids(&["x", "y"], rows).unwrap()
}

fn sat(t: &Team, f: &str) -> bool {
    let m = Structure::of_size(3);
    let f = parse(f).unwrap();
    let lax = evaluate(&m, t, &f, Semantics::Lax).unwrap();
    assert_eq!(lax, evaluate(&m, t, &f, Semantics::Strict).unwrap(), "{f}");
    lax
}

#[test]
fn atom_examples() {
    let coin = team(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
    assert!(sat(&coin, "ind(x ;; y)"));
    let constant_x = team(&[&[2, 0], &[2, 1]]);
    assert!(sat(&constant_x, "ind(x ;; y)"));
    assert!(sat(&constant_x, "ind(x ;; x)"));
    assert!(!sat(&team(&[&[0, 0], &[0, 1]]), "dep(x ; y)"));
    assert!(sat(&team(&[]), "dep(x ; y)"));
    assert!(sat(&team(&[&[1, 2]]), "dep(x ; y)"));
    assert!(!sat(&team(&[&[0, 0], &[1, 1]]), "ind(x ;; y)"));
}

#[test]
fn independence_is_not_downward_closed() {
    let coin = team(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
    let smaller = team(&[&[0, 0], &[0, 1], &[1, 0]]);
    assert!(smaller.is_subteam_of(&coin));
    assert!(sat(&coin, "ind(x ;; y)") && !sat(&smaller, "ind(x ;; y)"));
}

#[test]
fn the_two_sentences() {
    let valid = parse(VALID).unwrap();
    let invalid = parse(INVALID).unwrap();
    for mode in MODES {
        for n in 1..=3 {
            assert!(sentence_sat(&Structure::of_size(n), &valid, mode).unwrap());
        }
        assert!(sentence_sat(&Structure::of_size(1), &invalid, mode).unwrap());
        assert!(!sentence_sat(&Structure::of_size(2), &invalid, mode).unwrap());
    }
}

#[test]
fn validity_search_examples() {
    for mode in MODES {
        let v = validity_search(&parse(VALID).unwrap(), 4, mode).unwrap();
        assert!(matches!(v, Validity::ValidUpTo { max_size: 4, .. }));
        match validity_search(&parse(INVALID).unwrap(), 4, mode).unwrap() {
            Validity::Countermodel(m) => assert_eq!(m.size(), 2),
            other => panic!("expected a countermodel, got {other:?}"),
        }
        let trivial = validity_search(&parse("exists x. x = x").unwrap(), 3, mode).unwrap();
        assert!(matches!(trivial, Validity::ValidUpTo { max_size: 3, .. }));
    }
}

#[test]
fn validity_enumerates_relations() {
    let f = parse("forall x. (P(x) or not P(x))").unwrap();
    assert!(matches!(
        validity_search(&f, 3, Semantics::Lax).unwrap(),
        Validity::ValidUpTo { max_size: 3, structures_checked: 14 }
    ));
    let g = parse("exists x. P(x)").unwrap();
    assert!(matches!(validity_search(&g, 2, Semantics::Lax).unwrap(), Validity::Countermodel(_)));
}

#[test]
fn errors() {
    let m = Structure::of_size(2);
    let t = team(&[&[0, 1]]);
    let unknown = evaluate(&m, &t, &parse("R(x)").unwrap(), Semantics::Lax);
    assert!(matches!(unknown, Err(EvalError::UnknownRelation(_))));
    let unbound = evaluate(&m, &t, &parse("x = z").unwrap(), Semantics::Lax);
    assert!(matches!(unbound, Err(EvalError::UnboundVariable(_))));
    let open = sentence_sat(&m, &parse("x = x").unwrap(), Semantics::Lax);
    assert!(matches!(open, Err(EvalError::NotASentence(_))));
}

#[test]
fn budget_and_shortcuts() {
    let m = Structure::of_size(2);
    let f = parse("forall x. exists z. exists w. (ind(z w ;; x) and (z = x or w = x))").unwrap();
    let t = Team::unit();
    let fast = Evaluator::new(&m, EvalOptions::default()).evaluate(&t, &f).unwrap();
    let plain = Evaluator::new(&m, EvalOptions::default().without_shortcuts());
    assert_eq!(plain.evaluate(&t, &f).unwrap(), fast);

    let mut tiny = EvalOptions::new(Semantics::Strict).without_shortcuts();
    tiny.budget = 5;
    let r = Evaluator::new(&m, tiny).evaluate(&t, &f);
    assert!(matches!(r, Err(EvalError::SearchExhausted(5))));
}
