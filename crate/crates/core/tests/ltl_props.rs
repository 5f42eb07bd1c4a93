use std::sync::Arc;

use proptest::prelude::*;
use strata::error::Result;
use strata::kernel::{sym, Sym};
use strata::ltl::{check_kripke, replay, CheckResult, Kripke, Ltl};

const PROPS: [&str; 2] = ["p", "q"];

#[derive(Debug, Clone)]
struct Model {
    succ: Vec<Vec<usize>>,
    labels: Vec<[bool; 2]>,
}

impl Kripke for Model {
    type State = usize;
    type Label = usize;

    fn initial(&self) -> Result<usize> {
        Ok(0)
    }

    fn successors(&self, s: &usize) -> Result<Vec<(usize, usize)>> {
        Ok(self.succ[*s].iter().map(|&t| (t, t)).collect())
    }

    fn holds(&self, s: &usize, p: &Sym) -> Result<bool> {
        Ok(self.labels[*s][PROPS.iter().position(|q| **q == **p).unwrap()])
    }
}

impl Model {
    fn next(&self, s: usize) -> Vec<usize> {
        if self.succ[s].is_empty() {
            vec![s]
        } else {
            self.succ[s].clone()
        }
    }
}

// Truth of `f` at every position of the lasso `path[..]` whose last
// position is followed by `path[back]`.
fn eval(f: &Ltl, m: &Model, path: &[usize], back: usize) -> Vec<bool> {
    let n = path.len();
    let succ = |i: usize| if i + 1 == n { back } else { i + 1 };
    let fix = |a: &[bool], b: &[bool], least: bool| {
        // least: b or (a and X u); greatest: b and (a or X r)
        let mut v = vec![!least; n];
        for _ in 0..=n {
            v = (0..n)
                .map(|i| if least { b[i] || (a[i] && v[succ(i)]) } else { b[i] && (a[i] || v[succ(i)]) })
                .collect();
        }
        v
    };
    match f {
        Ltl::True => vec![true; n],
        Ltl::False => vec![false; n],
        Ltl::Prop(p) => {
            let k = PROPS.iter().position(|q| **q == **p).unwrap();
            path.iter().map(|&s| m.labels[s][k]).collect()
        }
        Ltl::Not(a) => eval(a, m, path, back).into_iter().map(|x| !x).collect(),
        Ltl::And(a, b) => eval(a, m, path, back).into_iter().zip(eval(b, m, path, back)).map(|(x, y)| x && y).collect(),
        Ltl::Or(a, b) => eval(a, m, path, back).into_iter().zip(eval(b, m, path, back)).map(|(x, y)| x || y).collect(),
        Ltl::Implies(a, b) => {
            eval(a, m, path, back).into_iter().zip(eval(b, m, path, back)).map(|(x, y)| !x || y).collect()
        }
        Ltl::Next(a) => {
            let v = eval(a, m, path, back);
            (0..n).map(|i| v[succ(i)]).collect()
        }
        Ltl::Always(a) => fix(&vec![false; n], &eval(a, m, path, back), false),
        Ltl::Eventually(a) => fix(&vec![true; n], &eval(a, m, path, back), true),
        Ltl::Until(a, b) => fix(&eval(a, m, path, back), &eval(b, m, path, back), true),
        Ltl::Release(a, b) => fix(&eval(a, m, path, back), &eval(b, m, path, back), false),
    }
}

// Some lasso from the initial state of at most `bound` positions violates `f`?
fn oracle_violation(f: &Ltl, m: &Model, bound: usize) -> bool {
    fn go(f: &Ltl, m: &Model, path: &mut Vec<usize>, bound: usize) -> bool {
        let last = *path.last().unwrap();
        for t in m.next(last) {
            for back in 0..path.len() {
                if path[back] == t && !eval(f, m, path, back)[0] {
                    return true;
                }
            }
            if path.len() < bound {
                path.push(t);
                if go(f, m, path, bound) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    go(f, m, &mut vec![0], bound)
}

fn model() -> impl Strategy<Value = Model> {
    (1usize..=6).prop_flat_map(|n| {
        (
            proptest::collection::vec(proptest::collection::vec(0..n, 0..=2), n),
            proptest::collection::vec(any::<[bool; 2]>(), n),
        )
            .prop_map(|(succ, labels)| Model { succ, labels })
    })
}

fn formula() -> impl Strategy<Value = Ltl> {
    let leaf = prop_oneof![Just(Ltl::True), Just(Ltl::False), Just(Ltl::Prop(sym("p"))), Just(Ltl::Prop(sym("q"))),];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Ltl::Not(Arc::new(a))),
            inner.clone().prop_map(|a| Ltl::Next(Arc::new(a))),
            inner.clone().prop_map(|a| Ltl::Always(Arc::new(a))),
            inner.clone().prop_map(|a| Ltl::Eventually(Arc::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Ltl::And(Arc::new(a), Arc::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Ltl::Or(Arc::new(a), Arc::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Ltl::Implies(Arc::new(a), Arc::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Ltl::Until(Arc::new(a), Arc::new(b))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn verdict_matches_lasso_oracle(m in model(), f in formula()) {
        let r = check_kripke(&m, &f, 1000).unwrap();
        let bound = 2 * m.succ.len() + 2;
        match r {
            CheckResult::Holds => prop_assert!(!oracle_violation(&f, &m, bound), "missed violation of {}", f),
            CheckResult::Fails { prefix, cycle } => {
                prop_assert!(replay(&m, &prefix, &cycle).unwrap());
                let path: Vec<usize> = prefix.iter().chain(&cycle).map(|s| s.state).collect();
                prop_assert!(!eval(&f, &m, &path, prefix.len())[0], "counterexample satisfies {}", f);
            }
        }
    }

    #[test]
    fn deadlock_satisfies_always_iff_it_holds(p in any::<bool>()) {
        let m = Model { succ: vec![vec![]], labels: vec![[p, false]] };
        let r = check_kripke(&m, &Ltl::always(Ltl::prop("p")), 10).unwrap();
        prop_assert_eq!(r.holds(), p);
    }
}

#[test]
fn state_limit_is_reported() {
    let m = Model { succ: vec![vec![1], vec![2], vec![0]], labels: vec![[true, false]; 3] };
    assert!(check_kripke(&m, &Ltl::always(Ltl::prop("p")), 2).is_err());
}

/// Properties of this file, for the acceptance summary.
#[allow(dead_code)]
pub fn suites() -> Vec<(&'static str, fn())> {
    vec![
        ("LTL verdicts and replay vs lasso oracle", verdict_matches_lasso_oracle),
        ("deadlocks", deadlock_satisfies_always_iff_it_holds),
    ]
}
