mod oracle;

use oracle::Rows;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use teamlogic::atoms::{
    armstrong_closure, armstrong_derives, counterexample_armstrong, counterexample_independence,
    independence_derives, parse_atom_set, rule_closure, semantic_entails, AtomError, AtomStatement, Rule,
    SemanticConfig, Universe, DEFAULT_MAX_STEPS,
};
use teamlogic::{Var, VarTuple};

fn set(text: &str) -> Vec<AtomStatement> {
    parse_atom_set(text).unwrap()
}

fn atom(text: &str) -> AtomStatement {
    AtomStatement::parse(text).unwrap()
}

fn names(vs: &[Var]) -> Vec<&str> {
    vs.iter().map(Var::as_str).collect()
}

#[test]
fn closure_examples() {
    let t = set("dep(y ; z)\ndep(z ; x)");
    assert_eq!(names(&armstrong_closure(&t, &VarTuple::from_names(&["y"])).unwrap()), ["y", "z", "x"]);
    assert_eq!(names(&armstrong_closure(&[], &VarTuple::from_names(&["x"])).unwrap()), ["x"]);
    let t = set("dep(x ; y)");
    assert_eq!(names(&armstrong_closure(&t, &VarTuple::from_names(&["z"])).unwrap()), ["z"]);
}

#[test]
fn armstrong_examples() {
    let t = set("dep(y ; z)\ndep(z ; x)");
    let d = armstrong_derives(&t, &atom("dep(y ; x)")).unwrap();
    assert!(d.derivable);
    d.trace.unwrap().verify(&t).unwrap();

    let d = armstrong_derives(&[], &atom("dep(x y ; x)")).unwrap();
    assert!(d.derivable);
    d.trace.unwrap().verify(&[]).unwrap();

    assert!(!armstrong_derives(&set("dep(x ; y)"), &atom("dep(y ; x)")).unwrap().derivable);
    assert!(matches!(
        armstrong_derives(&set("ind(x ;; y)"), &atom("dep(y ; x)")),
        Err(AtomError::Unsupported { .. })
    ));
}

#[test]
fn armstrong_counterexamples() {
    let t = set("dep(x ; y)");
    let goal = atom("dep(y ; x)");
    let team = counterexample_armstrong(&t, &goal).unwrap().unwrap();
    let o = Rows::of_team(&team);
    assert_eq!(team.len(), 2);
    assert!(o.holds(&t[0]) && !o.holds(&goal));

    let team = counterexample_armstrong(&[], &goal).unwrap().unwrap();
    assert!(!Rows::of_team(&team).holds(&goal));

    assert!(counterexample_armstrong(&set("dep(y ; x)"), &goal).unwrap().is_none());
}

#[test]
fn independence_examples() {
    let sym = independence_derives(&set("ind(x ;; y)"), &atom("ind(y ;; x)")).unwrap();
    assert!(sym.derivable);
    let trace = sym.trace.unwrap();
    assert_eq!(trace.steps().last().unwrap().rule, Rule::Symmetry);

    let constancy = independence_derives(&set("ind(x ;; x)"), &atom("ind(y ;; x)")).unwrap();
    assert!(constancy.derivable);
    constancy.trace.unwrap().verify(&set("ind(x ;; x)")).unwrap();

    let t = set("ind(x ;; y)\nind(u ;; v)");
    let goal = atom("ind(x ;; u)");
    assert!(!independence_derives(&t, &goal).unwrap().derivable);
    let (_, team) = counterexample_independence(&t, &goal).unwrap().unwrap();
    let o = Rows::of_team(&team);
    assert!(t.iter().all(|a| o.holds(a)) && !o.holds(&goal));

    assert!(counterexample_independence(&set("ind(x ;; x)"), &atom("ind(y ;; x)")).unwrap().is_none());
}

#[test]
fn empty_premises_counterexample_has_no_mixed_row() {
    let goal = atom("ind(y ;; x)");
    let (_, team) = counterexample_independence(&[], &goal).unwrap().unwrap();
    let o = Rows::of_team(&team);
    let (ix, iy) = (o.scope.iter().position(|s| s == "x").unwrap(), o.scope.iter().position(|s| s == "y").unwrap());
    assert!(o.rows.iter().all(|r| r[ix] == r[iy]));
    assert!(!o.holds(&goal));
}

#[test]
fn rule_closure_examples() {
    let u = Universe::from_names(&["x", "y", "z"]).unwrap();
    let t = set("ind(y ; z ; y)\nind(x ; y ; x)");
    let c = rule_closure(&t, &u, DEFAULT_MAX_STEPS).unwrap();
    assert!(!c.is_truncated());
    let goal = atom("ind(x ; z ; x)");
    assert!(c.contains(&goal));
    c.derivation(&goal).unwrap().verify(&t).unwrap();

    let c = rule_closure(&set("ind(z ; x ; y)"), &u, DEFAULT_MAX_STEPS).unwrap();
    assert!(c.contains(&atom("ind(y ; x ; z)")));

    let c = rule_closure(&[], &u, DEFAULT_MAX_STEPS).unwrap();
    assert!(c.contains(&atom("ind(x y ; x y ; z)")));
    assert!(!c.contains(&atom("ind(x ;; y)")));
}

#[test]
fn rule_closure_is_sound() {
    // every closure member holds on random teams satisfying the premises
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let u = Universe::from_names(&["x", "y", "z"]).unwrap();
    let pool = ["x", "y", "z"];
    let cfg = SemanticConfig::default().with_domain_sizes(vec![2]);
    for _ in 0..15 {
        let k = rng.random_range(1..=2);
        let t: Vec<AtomStatement> = (0..k)
            .map(|_| {
                let pick = |rng: &mut ChaCha8Rng, lo: usize| -> Vec<&str> {
                    let n = rng.random_range(lo..=2);
                    pool.choose_multiple(rng, n).copied().collect()
                };
                if rng.random_bool(0.3) {
                    AtomStatement::dep(&pick(&mut rng, 0), &pick(&mut rng, 1))
                } else {
                    AtomStatement::ind(&pick(&mut rng, 1), &pick(&mut rng, 0), &pick(&mut rng, 1))
                }
            })
            .collect();
        let c = rule_closure(&t, &u, DEFAULT_MAX_STEPS).unwrap();
        for a in c.atoms().step_by(7) {
            let v = semantic_entails(&t, &a, &cfg).unwrap();
            assert!(v.entailed, "{a} derived from {t:?} but refuted by {:?}", v.countermodel());
        }
    }
}

#[test]
fn semantic_examples() {
    let cfg = SemanticConfig::default();
    let v = semantic_entails(&set("dep(y ; z)\ndep(z ; x)"), &atom("dep(y ; x)"), &cfg).unwrap();
    assert!(v.entailed && v.exact);

    let goal = atom("ind(x ;; z)");
    let v = semantic_entails(&set("ind(x ;; y)"), &goal, &cfg.clone().with_domain_sizes(vec![2])).unwrap();
    assert!(!v.entailed);
    let team = v.countermodel().unwrap();
    let o = Rows::of_team(team);
    assert!(o.holds(&atom("ind(x ;; y)")) && !o.holds(&goal));
}

#[test]
fn semantic_search_is_seeded() {
    let t = set("ind(x ; y ; z)\nind(y ;; w)");
    let goal = atom("ind(x ; w ; z)");
    let cfg = SemanticConfig {
        exhaustive_limit: 0,
        samples: 50,
        ..SemanticConfig::default().with_domain_sizes(vec![3])
    };
    let a = semantic_entails(&t, &goal, &cfg).unwrap();
    let b = semantic_entails(&t, &goal, &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn atom_set_format() {
    let t = set("# premises\ndep(x y ; z)\n\nind(u ; ; v)\n");
    assert_eq!(t.len(), 2);
    assert!(matches!(parse_atom_set("x = y"), Err(AtomError::NotDependencyAtom { line: 1 })));
    assert!(matches!(parse_atom_set("dep(x ;\n"), Err(AtomError::Parse { line: 1, .. })));
}
