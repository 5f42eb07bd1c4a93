//! Algebraic laws of the strategy combinators, and agreement of the
//! extended operators with their translations.

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use strata::engine::Engine;
use strata::ext::{eval_native, eval_translated};
use strata::frontend::ModuleStore;
use strata::strategy::{choice, cond, fail, idle, or_else, seq};
use strata::Strategy as S;
use strata::{sym, ModuleDef, StratRef, Term};

const SRC: &str = "mod LAWS is
  sort T .
  ops a b c : -> T [ctor] .
  op f : T T -> T [ctor] .
  op g : T -> T [ctor] .
  vars X Y : T .
  rl [ab] : a => b .
  rl [bc] : b => c .
  rl [ba] : b => a .
  rl [swap] : f(X, Y) => f(Y, X) .
  rl [unf] : g(X) => X .
  rl [dup] : g(X) => f(X, X) .
endm";

const LABELS: [&str; 6] = ["ab", "bc", "ba", "swap", "unf", "dup"];

fn module() -> Arc<ModuleDef> {
    let mut s = ModuleStore::new();
    s.load_str(SRC).unwrap();
    s.get("LAWS").unwrap()
}

fn term() -> BoxedStrategy<Term> {
    let leaf = prop_oneof![Just("a"), Just("b"), Just("c")].prop_map(Term::constant);
    leaf.prop_recursive(3, 5, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Term::app(sym("f"), vec![x, y])),
            inner.prop_map(|x| Term::app(sym("g"), vec![x])),
        ]
    })
    .boxed()
}

fn apply(label: &str) -> StratRef {
    Arc::new(S::Apply { label: sym(label), init: vec![], top: false })
}

fn strategy(extended: bool) -> BoxedStrategy<StratRef> {
    let leaf = prop_oneof![
        4 => (0..LABELS.len()).prop_map(|i| apply(LABELS[i])),
        1 => Just(idle()),
        1 => Just(fail()),
        1 => Just(Arc::new(S::All)),
    ];
    leaf.prop_recursive(3, 8, 3, move |inner| {
        let core = prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| seq(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| choice(a, b)),
            (inner.clone(), inner.clone(), inner.clone()).prop_map(|(a, b, c)| cond(a, b, c)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| or_else(a, b)),
            inner.clone().prop_map(|a| Arc::new(S::One(a))),
            inner.clone().prop_map(|a| Arc::new(S::Star(a))),
            inner.clone().prop_map(|a| Arc::new(S::Bang(a))),
            inner.clone().prop_map(|a| Arc::new(S::Not(a))),
            inner.clone().prop_map(|a| Arc::new(S::Try(a))),
            inner.clone().prop_map(|a| Arc::new(S::Test(a))),
        ];
        if !extended {
            return core.boxed();
        }
        let ext = prop_oneof![
            inner.clone().prop_map(|a| Arc::new(S::GtAll(a))),
            inner.clone().prop_map(|a| Arc::new(S::GtOne(a))),
            inner.clone().prop_map(|a| Arc::new(S::GtSome(a))),
            inner.clone().prop_map(|a| Arc::new(S::Congruence { op: sym("g"), args: vec![a] })),
            (inner.clone(), inner).prop_map(|(a, b)| Arc::new(S::Congruence { op: sym("f"), args: vec![a, b] })),
        ];
        prop_oneof![2 => core, 1 => ext].boxed()
    })
    .boxed()
}

struct Laws {
    e: Engine,
}

impl Laws {
    fn new() -> Laws {
        Laws { e: Engine::new(module()) }
    }

    fn run(&self, t: &Term, s: &StratRef) -> BTreeSet<Term> {
        self.e.srewrite(t, s, false).unwrap().into_iter().collect()
    }

    // Results of `b` started from every result of `a`.
    fn then(&self, t: &Term, a: &StratRef, b: &StratRef) -> BTreeSet<Term> {
        self.run(t, a).iter().flat_map(|u| self.run(u, b)).collect()
    }
}

fn union(a: BTreeSet<Term>, b: BTreeSet<Term>) -> BTreeSet<Term> {
    a.into_iter().chain(b).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sequence(t in term(), a in strategy(true), b in strategy(true), c in strategy(true)) {
        let l = Laws::new();
        prop_assert_eq!(l.run(&t, &seq(a.clone(), b.clone())), l.then(&t, &a, &b));
        prop_assert_eq!(l.run(&t, &seq(seq(a.clone(), b.clone()), c.clone())), l.run(&t, &seq(a.clone(), seq(b.clone(), c.clone()))));
        prop_assert_eq!(l.run(&t, &seq(idle(), a.clone())), l.run(&t, &a));
        prop_assert_eq!(l.run(&t, &seq(a.clone(), idle())), l.run(&t, &a));
        prop_assert!(l.run(&t, &seq(a.clone(), fail())).is_empty());
    }

    #[test]
    fn union_of_choices(t in term(), a in strategy(true), b in strategy(true), c in strategy(true)) {
        let l = Laws::new();
        prop_assert_eq!(l.run(&t, &choice(a.clone(), b.clone())), union(l.run(&t, &a), l.run(&t, &b)));
        prop_assert_eq!(l.run(&t, &choice(a.clone(), fail())), l.run(&t, &a));
        let left = seq(choice(a.clone(), b.clone()), c.clone());
        prop_assert_eq!(l.run(&t, &left), union(l.then(&t, &a, &c), l.then(&t, &b, &c)));
        let right = seq(a.clone(), choice(b.clone(), c.clone()));
        prop_assert_eq!(l.run(&t, &right), union(l.then(&t, &a, &b), l.then(&t, &a, &c)));
    }

    #[test]
    fn conditional(t in term(), a in strategy(true), b in strategy(true), c in strategy(true)) {
        let l = Laws::new();
        let want = if l.run(&t, &a).is_empty() { l.run(&t, &c) } else { l.then(&t, &a, &b) };
        prop_assert_eq!(l.run(&t, &cond(a.clone(), b.clone(), c.clone())), want);
        prop_assert_eq!(l.run(&t, &or_else(a.clone(), b.clone())), l.run(&t, &cond(a.clone(), idle(), b.clone())));
        let single: BTreeSet<Term> = [t.clone()].into();
        let ok = !l.run(&t, &a).is_empty();
        prop_assert_eq!(l.run(&t, &Arc::new(S::Not(a.clone()))), if ok { BTreeSet::new() } else { single.clone() });
        prop_assert_eq!(l.run(&t, &Arc::new(S::Test(a.clone()))), if ok { single.clone() } else { BTreeSet::new() });
        let tried = l.run(&t, &Arc::new(S::Try(a.clone())));
        prop_assert_eq!(tried, if ok { l.run(&t, &a) } else { single });
    }

    #[test]
    fn one_picks_a_result(t in term(), a in strategy(true)) {
        let l = Laws::new();
        let all = l.run(&t, &a);
        let one = l.run(&t, &Arc::new(S::One(a)));
        prop_assert_eq!(one.len(), usize::from(!all.is_empty()));
        prop_assert!(one.is_subset(&all));
    }

    #[test]
    fn iteration(t in term(), a in strategy(true)) {
        let l = Laws::new();
        let star = Arc::new(S::Star(a.clone()));
        // reflexive transitive closure by saturation
        let mut closure: BTreeSet<Term> = [t.clone()].into();
        let mut todo = vec![t.clone()];
        while let Some(u) = todo.pop() {
            for v in l.run(&u, &a) {
                if closure.insert(v.clone()) {
                    todo.push(v);
                }
            }
        }
        prop_assert_eq!(l.run(&t, &star), closure.clone());
        let normal: BTreeSet<Term> = closure.into_iter().filter(|u| l.run(u, &a).is_empty()).collect();
        prop_assert_eq!(l.run(&t, &Arc::new(S::Bang(a))), normal);
    }

    #[test]
    fn depth_first_finds_the_same_results(t in term(), a in strategy(true)) {
        let l = Laws::new();
        let dfs: BTreeSet<Term> = l.e.srewrite(&t, &a, true).unwrap().into_iter().collect();
        prop_assert_eq!(dfs, l.run(&t, &a));
    }

    #[test]
    fn translation_agrees_with_native(t in term(), a in strategy(true)) {
        let m = module();
        let native: BTreeSet<Term> = eval_native(&t, &a, &m).unwrap().into_iter().collect();
        let translated: BTreeSet<Term> = eval_translated(&t, &a, &m).unwrap().into_iter().collect();
        prop_assert_eq!(native, translated);
    }
}

/// Properties of this file, for the acceptance summary.
#[allow(dead_code)]
pub fn suites() -> Vec<(&'static str, fn())> {
    vec![
        ("seq laws", sequence),
        ("choice laws", union_of_choices),
        ("conditional laws", conditional),
        ("one", one_picks_a_result),
        ("star and bang", iteration),
        ("depth-first search", depth_first_finds_the_same_results),
        ("native vs translated", translation_agrees_with_native),
    ]
}
