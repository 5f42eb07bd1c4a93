#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use strata::frontend::lexer::tokenize;
use strata::frontend::strategy_parser::parse_strategy_str;
use strata::frontend::{printer, ModuleStore, TermCtx};
use strata::{fixtures, ModuleDef, StratRef, Term};

pub fn store() -> ModuleStore {
    let mut s = ModuleStore::new();
    for (_, src) in fixtures::ALL {
        s.load_str(src).unwrap();
    }
    s
}

pub fn module(name: &str) -> Arc<ModuleDef> {
    store().get(name).unwrap_or_else(|| panic!("no module {name}"))
}

pub fn term(m: &ModuleDef, src: &str) -> Term {
    let vars = HashMap::new();
    TermCtx::new(&m.sig, &vars).parse(&tokenize(src)).unwrap_or_else(|e| panic!("{src}: {e}"))
}

pub fn strat(m: &ModuleDef, src: &str) -> StratRef {
    parse_strategy_str(src, m, true).unwrap_or_else(|e| panic!("{src}: {e}"))
}

pub fn show(m: &ModuleDef, ts: &[Term]) -> Vec<String> {
    ts.iter().map(|t| printer::term(&m.sig, t)).collect()
}

pub fn sorted(mut v: Vec<String>) -> Vec<String> {
    v.sort();
    v
}
