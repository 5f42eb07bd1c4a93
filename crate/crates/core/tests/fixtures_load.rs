use std::collections::HashMap;
use strata::frontend::{ModuleStore, TermCtx};
use strata::{fixtures, Rewriter};

fn reduce(store: &ModuleStore, module: &str, term: &str) -> String {
    let m = store.get(module).unwrap();
    let vars = HashMap::new();
    let toks = strata::frontend::lexer::tokenize(term);
    let t = TermCtx::new(&m.sig, &vars).parse(&toks).unwrap();
    let rw = Rewriter::new(m.clone());
    let n = rw.normalize(&t).unwrap();
    strata::frontend::printer::term(&m.sig, &n)
}

#[test]
fn every_fixture_parses() {
    for (name, src) in fixtures::ALL {
        let mut store = ModuleStore::new();
        let ms = store.load_str(src).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(!ms.is_empty());
    }
}

#[test]
fn equational_results() {
    let mut store = ModuleStore::new();
    store.load_str(fixtures::LLIST).unwrap();
    store.load_str(fixtures::LAZY_LIST).unwrap();
    store.load_str(fixtures::TICTACTOE).unwrap();
    assert_eq!(reduce(&store, "LLIST", "length(a b c)"), "3");
    assert_eq!(reduce(&store, "LAZY-LIST", "take(3, natsFrom(0))"), "0 : take(2, natsFrom(0 + 1))");
    assert_eq!(reduce(&store, "TICTACTOE", "hasHRow(X, empty)"), "false");
    assert_eq!(reduce(&store, "TICTACTOE", "hasWon(X, initial)"), "false");
    assert_eq!(reduce(&store, "TICTACTOE", "hasWon(O, [1, 2, O] [2, 2, O] [3, 2, O] [1, 1, -])"), "true");
    assert_eq!(
        reduce(&store, "TICTACTOE", "size(winningPos(X, [1, 1, X] [2, 2, X] [3, 3, -] [1, 3, X] [1, 2, -]))"),
        "2"
    );
    assert_eq!(reduce(&store, "TICTACTOE-STRAT", "opponent(X)"), "O");
}
