mod common;

use common::*;
use strata::engine::Engine;
use strata::multistrat::{GExpr, Global, Multi};

fn run(name: &str, t: &str, strats: &[&str], g: Global) -> Vec<String> {
    let m = module(name);
    let e = Engine::new(m.clone());
    let ss: Vec<_> = strats.iter().map(|s| strat(&m, s)).collect();
    let r = Multi::new(&e, g).run(&term(&m, t), &ss).unwrap();
    show(&m, &r)
}

#[test]
fn llist_interleavings() {
    assert_eq!(run("LLIST", "nil", &["seq(a b)", "seq(c d)"], Global::Turns), ["a c b d"]);
    let all = sorted(run("LLIST", "nil", &["seq(a b)", "seq(c d)"], Global::Freec));
    assert_eq!(all, ["a b c d", "a c b d", "a c d b", "c a b d", "c a d b", "c d a b"]);
    assert_eq!(run("LLIST", "nil", &["seq(a b)", "seq(c d)"], Global::Bounded(0)), ["nil"]);
    assert_eq!(sorted(run("LLIST", "nil", &["seq(a b)", "seq(c d)"], Global::Bounded(1))), ["a", "c"]);
}

#[test]
fn single_thread_turns_is_srewrite() {
    assert_eq!(run("LLIST", "nil", &["seq(a b c)"], Global::Turns), ["a b c"]);
}

#[test]
fn custom_global_strategies() {
    let g = |src: &str| Global::Custom(GExpr::parse(&strata::frontend::lexer::tokenize(src)).unwrap());
    assert_eq!(run("LLIST", "nil", &["seq(a b)", "seq(c d)"], g("step(1) ; step(0) ; turns")), ["c a b d"]);
    assert_eq!(sorted(run("LLIST", "nil", &["seq(a b)", "seq(c d)"], g("(step(0) | step(1)) !"))).len(), 6);
    assert_eq!(run("LLIST", "nil", &["seq(a b)", "seq(c d)"], g("turns")), ["a c b d"]);
}

type Board = [u8; 9];

const LINES: [[usize; 3]; 8] = [[0, 1, 2], [3, 4, 5], [6, 7, 8], [0, 3, 6], [1, 4, 7], [2, 5, 8], [0, 4, 8], [2, 4, 6]];

fn cell(i: usize, j: usize) -> usize {
    (i - 1) * 3 + (j - 1)
}

fn won(b: &Board, p: u8) -> bool {
    LINES.iter().any(|l| l.iter().all(|&c| b[c] == p))
}

// Empty cells completing a line, once per line.
fn threats(b: &Board, p: u8) -> Vec<usize> {
    let mut out = Vec::new();
    for l in LINES {
        let mine = l.iter().filter(|&&c| b[c] == p).count();
        let free: Vec<usize> = l.iter().copied().filter(|&c| b[c] == b'-').collect();
        if mine == 2 && free.len() == 1 {
            out.push(free[0]);
        }
    }
    out
}

fn put(b: &Board, c: usize, p: u8) -> Board {
    let mut n = *b;
    n[c] = p;
    n
}

fn free(b: &Board) -> Vec<usize> {
    (0..9).filter(|&c| b[c] == b'-').collect()
}

fn fork(b: &Board, p: u8) -> bool {
    threats(b, p).len() >= 2
}

// The perfect player written directly over boards.
fn perfect(b: &Board, p: u8) -> Vec<Board> {
    let o = if p == b'X' { b'O' } else { b'X' };
    let nonempty = |v: Vec<Board>| if v.is_empty() { None } else { Some(v) };
    if let Some(v) = nonempty(threats(b, p).into_iter().map(|c| put(b, c, p)).collect()) {
        return v;
    }
    if let Some(v) = nonempty(threats(b, o).into_iter().map(|c| put(b, c, p)).collect()) {
        return v;
    }
    if let Some(v) = nonempty(free(b).into_iter().map(|c| put(b, c, p)).filter(|n| fork(n, p)).collect()) {
        return v;
    }
    if free(b).into_iter().any(|c| fork(&put(b, c, o), o)) {
        let v: Vec<Board> = free(b)
            .into_iter()
            .map(|c| put(b, c, p))
            .filter(|n| {
                !free(n).into_iter().any(|d| fork(&put(n, d, o), o))
                    || threats(n, p).into_iter().any(|d| !fork(&put(n, d, o), o))
            })
            .collect();
        if let Some(v) = nonempty(v) {
            return v;
        }
    }
    if b[4] == b'-' {
        return vec![put(b, 4, p)];
    }
    let mut v = Vec::new();
    for i in 1..=3 {
        for j in 1..=3 {
            if b[cell(i, j)] != o || i == 2 {
                continue;
            }
            if i == j && b[cell(4 - i, 4 - i)] == b'-' {
                v.push(put(b, cell(4 - i, 4 - i), p));
            }
            if j != 2 && b[cell(j, i)] == b'-' {
                v.push(put(b, cell(j, i), p));
            }
        }
    }
    if let Some(v) = nonempty(v) {
        return v;
    }
    let corners = [cell(1, 1), cell(3, 3), cell(1, 3), cell(3, 1)];
    if let Some(v) = nonempty(corners.into_iter().filter(|&c| b[c] == b'-').map(|c| put(b, c, p)).collect()) {
        return v;
    }
    free(b).into_iter().filter(|&c| c / 3 == 1 || c % 3 == 1).map(|c| put(b, c, p)).collect()
}

fn final_boards() -> std::collections::BTreeSet<Board> {
    let mut finals = std::collections::BTreeSet::new();
    let mut seen = std::collections::HashSet::new();
    let mut todo = vec![([b'-'; 9], true)];
    while let Some((b, x_turn)) = todo.pop() {
        if !seen.insert((b, x_turn)) {
            continue;
        }
        let next = if x_turn {
            if won(&b, b'O') {
                vec![]
            } else {
                perfect(&b, b'X')
            }
        } else if won(&b, b'X') {
            vec![]
        } else {
            free(&b).into_iter().map(|c| put(&b, c, b'O')).collect()
        };
        if next.is_empty() {
            finals.insert(b);
        }
        todo.extend(next.into_iter().map(|n| (n, !x_turn)));
    }
    finals
}

fn parse_board(s: &str) -> Board {
    let mut b = [b'?'; 9];
    for part in s.split('[').skip(1) {
        let f: Vec<&str> = part.trim_end().trim_end_matches(']').split(',').map(str::trim).collect();
        let (i, j): (usize, usize) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        b[cell(i, j)] = f[2].as_bytes()[0];
    }
    b
}

#[test]
fn tictactoe_final_boards_match_direct_enumeration() {
    let r = run("TICTACTOE-STRAT", "initial", &["perfectX", "randomO"], Global::Turns);
    let got: std::collections::BTreeSet<Board> = r.iter().map(|s| parse_board(s)).collect();
    assert_eq!(got.len(), r.len());
    assert_eq!(got, final_boards());
    assert!(got.iter().all(|b| !won(b, b'O')));
}

#[test]
fn step_labels_name_the_strategy() {
    let labels = |strats: &[&str]| {
        let m = module("TICTACTOE-STRAT");
        let e = Engine::new(m.clone());
        let ss: Vec<_> = strats.iter().map(|s| strat(&m, s)).collect();
        let multi = Multi::new(&e, Global::Turns);
        let c = multi.initial(&term(&m, "initial"), &ss).unwrap();
        let mut out: Vec<String> = multi.successors(&c).unwrap().iter().map(|(l, _)| l.to_string()).collect();
        out.dedup();
        out
    };
    assert_eq!(labels(&["perfectX", "randomO"]), ["0 does perfect-step"]);
    assert_eq!(labels(&["betterX", "randomO"]), ["0 does putX"]);
    assert_eq!(labels(&["randomO", "perfectX"]), ["0 does putO"]);
}
