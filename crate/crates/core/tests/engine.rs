mod common;

use common::*;
use strata::engine::{Engine, ExecState, StepClass};
use strata::ext;

fn run(module: &str, t: &str, s: &str) -> Vec<String> {
    let m = module_named(module);
    let e = Engine::new(m.clone());
    show(&m, &e.srewrite(&term(&m, t), &strat(&m, s), false).unwrap())
}

fn module_named(name: &str) -> std::sync::Arc<strata::ModuleDef> {
    module(name)
}

#[test]
fn rule_applications() {
    assert_eq!(run("LLIST", "a b c", "top(pop) ; top(put[L <- d])"), ["a b d"]);
    assert_eq!(sorted(run("LLIST", "a b c", "pop")), ["a b", "a c", "b c"]);
    assert_eq!(run("LLIST", "nil", "seq(a b)"), ["a b"]);
    assert_eq!(run("LLIST", "a b", "fail"), Vec::<String>::new());
    assert_eq!(run("LLIST", "a b", "idle"), ["a b"]);
}

#[test]
fn combinators() {
    assert_eq!(run("LLIST", "a b c", "pop !"), ["nil"]);
    assert_eq!(sorted(run("LLIST", "a b", "pop *")), ["a", "a b", "b", "nil"]);
    assert_eq!(run("LLIST", "a b", "one(pop)").len(), 1);
    assert_eq!(run("LLIST", "a", "pop ? fail : idle"), Vec::<String>::new());
    assert_eq!(run("LLIST", "nil", "pop ? fail : idle"), ["nil"]);
    assert_eq!(run("LLIST", "a", "try(pop)"), ["nil"]);
    assert_eq!(run("LLIST", "nil", "not(pop)"), ["nil"]);
    assert_eq!(run("LLIST", "a", "test(pop)"), ["a"]);
    assert_eq!(run("LLIST", "a b", "match a L:Letter s.t. L:Letter == b ; top(pop)"), ["a"]);
    assert_eq!(run("LLIST", "a b c", "amatch b"), ["a b c"]);
    assert_eq!(run("LLIST", "a b c", "match b"), Vec::<String>::new());
    assert_eq!(
        sorted(run("LLIST", "a b c d", "matchrew A:List B:List s.t. length(A:List) == 2 /\\ length(B:List) == 2 by A:List using top(pop), B:List using top(pop)")),
        ["a c"]
    );
}

#[test]
fn depth_first_finds_the_same_set() {
    let m = module("LLIST");
    let e = Engine::new(m.clone());
    for (t, s) in [("a b c", "pop *"), ("nil", "seq(a b c)"), ("a b c d", "pop ; pop | top(pop) !")] {
        let bfs = sorted(show(&m, &e.srewrite(&term(&m, t), &strat(&m, s), false).unwrap()));
        let dfs = sorted(show(&m, &e.srewrite(&term(&m, t), &strat(&m, s), true).unwrap()));
        assert_eq!(bfs, dfs, "{s}");
    }
}

#[test]
fn step_classification() {
    let m = module("LLIST");
    let e = Engine::new(m.clone());
    let env = Default::default();
    let st = ExecState::new(term(&m, "a b"), &strat(&m, "top(pop)"), &env);
    let steps = e.step(&st).unwrap();
    assert_eq!(steps.len(), 1);
    assert_eq!(steps[0].class, StepClass::System);
    assert_eq!(show(&m, &[steps[0].state.term.clone()]), ["a"]);
    assert!(steps[0].state.is_solution());

    let st = ExecState::new(term(&m, "a b"), &strat(&m, "pop | top(pop)"), &env);
    let steps = e.step(&st).unwrap();
    assert_eq!(steps.len(), 2);
    assert!(steps.iter().all(|s| s.class == StepClass::Control));

    let st = ExecState::new(term(&m, "a b"), &strat(&m, "pop *"), &env);
    let steps = e.step(&st).unwrap();
    assert_eq!(steps.len(), 2);
    assert!(steps.iter().all(|s| s.class == StepClass::Control && s.state.term == st.term));
}

#[test]
fn extended_operators() {
    assert_eq!(run("FOO", "f(f(a, b), f(a, a))", "f(swap, gt-all(next))"), ["f(f(b, a), f(b, b))"]);
    assert_eq!(run("FOO", "f(a, a)", "gt-one(next)"), ["f(b, a)"]);
    assert_eq!(run("FOO", "b", "gt-all(next)"), ["b"]);
    assert_eq!(run("FOO", "b", "gt-one(next)"), Vec::<String>::new());
    assert_eq!(run("FOO", "f(a, b)", "gt-some(next)"), ["f(b, b)"]);
}

#[test]
fn translation_agrees_with_native() {
    let m = module("FOO");
    for (t, s) in [
        ("f(f(a, b), f(a, a))", "f(swap, gt-all(next))"),
        ("f(a, a)", "gt-one(next)"),
        ("f(a, b)", "gt-some(next)"),
        ("b", "gt-one(next)"),
        ("f(f(a, a), a)", "gt-all(gt-all(next) | swap)"),
    ] {
        let s = strat(&m, s);
        let t = term(&m, t);
        let native = sorted(show(&m, &ext::eval_native(&t, &s, &m).unwrap()));
        let translated = sorted(show(&m, &ext::eval_translated(&t, &s, &m).unwrap()));
        assert_eq!(native, translated);
        assert!(!ext::translate(&s, &m.sig).unwrap().is_extended());
    }
}

#[test]
fn lazy_list_strategy() {
    let m = module("LAZY-LIST-STRAT");
    let e = Engine::new(m.clone());
    let t = term(&m, "take(3, natsFrom(0))");
    let s = strat(&m, "norm-via-munorm");
    assert_eq!(show(&m, &e.srewrite(&t, &s, false).unwrap()), ["0 : 1 : 2 : nil"]);
    let translated = ext::eval_translated(&t, &s, &m).unwrap();
    assert_eq!(show(&m, &translated), ["0 : 1 : 2 : nil"]);
}
