mod common;

use common::*;
use strata::engine::Engine;
use strata::frontend::ltl_parser::parse_ltl;
use strata::ltl::{check, eval_prop, replay, CheckResult, MsCheckResult, MsKripke, DEFAULT_STATE_LIMIT};
use strata::multistrat::{Global, Multi};

fn verdict(formula: &str, strats: &[&str]) -> MsCheckResult {
    let m = module("TICTACTOE-CHECK");
    let e = Engine::new(m.clone());
    let multi = Multi::new(&e, Global::Turns);
    let ss: Vec<_> = strats.iter().map(|s| strat(&m, s)).collect();
    let f = parse_ltl(formula, &m).unwrap();
    let t = term(&m, "initial");
    let r = check(&multi, &f, &t, &ss, DEFAULT_STATE_LIMIT).unwrap();
    if let CheckResult::Fails { prefix, cycle } = &r {
        let k = MsKripke::new(&multi, &t, &ss).unwrap();
        assert!(replay(&k, prefix, cycle).unwrap(), "counterexample does not replay");
    }
    r
}

fn last_board(r: &MsCheckResult) -> String {
    let m = module("TICTACTOE-CHECK");
    let CheckResult::Fails { cycle, .. } = r else { panic!("expected a counterexample") };
    show(&m, &[cycle.last().unwrap().state.term.clone()]).remove(0)
}

#[test]
fn propositions() {
    let m = module("TICTACTOE-CHECK");
    let e = Engine::new(m.clone());
    let rw = e.rewriter();
    assert!(!eval_prop(rw, "Xwins", &term(&m, "initial")).unwrap());
    let g = term(&m, "[1, 2, O] [2, 2, O] [3, 2, O] [1, 1, X] [1, 3, X]");
    assert!(eval_prop(rw, "Owins", &g).unwrap());
    assert!(!eval_prop(rw, "Xwins", &g).unwrap());
    assert!(eval_prop(rw, "nope", &g).is_err());
}

#[test]
fn perfect_never_loses() {
    assert!(verdict("[] ~ Owins", &["perfectX", "randomO"]).holds());
    assert!(verdict("[] ~ Owins", &["randomO", "perfectX"]).holds());
}

#[test]
fn better_can_lose() {
    let r = verdict("[] ~ Owins", &["betterX", "randomO"]);
    let CheckResult::Fails { cycle, .. } = &r else { panic!("expected a counterexample") };
    // the game ends in a deadlock with O's row on the board
    assert_eq!(cycle.len(), 1);
    assert!(cycle[0].label.is_none());
    let m = module("TICTACTOE-CHECK");
    let e = Engine::new(m.clone());
    assert!(eval_prop(e.rewriter(), "Owins", &cycle[0].state.term).unwrap());
}

#[test]
fn perfect_does_not_always_win() {
    let r = verdict("<> Xwins", &["perfectX", "randomO"]);
    let board = last_board(&r);
    assert!(!board.contains('-'), "{board}");
}

#[test]
fn perfect_against_perfect_draws() {
    assert!(verdict("[] (~ Owins /\\ ~ Xwins)", &["perfectX", "perfectO"]).holds());
}
