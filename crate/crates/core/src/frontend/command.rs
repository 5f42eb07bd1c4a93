//! Session commands. Terms and strategies are kept as tokens because they
//! can only be read once the current module is known.

use crate::error::{Error, Result};
use crate::frontend::lexer::{err_at, find_top, rfind_top, split_top, tokenize, Token};

/// How the threads of a multistrategy are scheduled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GlobalSpec {
    Turns,
    Concurrent,
    Steps(u64),
    Custom(Vec<Token>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    /// Module definitions given inline.
    Modules(Vec<Token>),
    Load(String),
    Select(String),
    Reduce(Vec<Token>),
    Rewrite {
        limit: Option<u64>,
        term: Vec<Token>,
    },
    SRewrite {
        depth_first: bool,
        term: Vec<Token>,
        strategy: Vec<Token>,
    },
    MultiRewrite {
        term: Vec<Token>,
        strategies: Vec<Vec<Token>>,
        global: GlobalSpec,
    },
    Check {
        formula: Vec<Token>,
        term: Vec<Token>,
        strategies: Vec<Vec<Token>>,
        global: GlobalSpec,
    },
    TransformCsr(String),
    ShowModule(Option<String>),
    Quit,
}

/// Splits a script into commands. Module blocks run to their closing
/// keyword; every other command ends at a ` .` token.
pub fn parse_script(src: &str) -> Result<Vec<Command>> {
    script_commands(src).into_iter().collect()
}

/// Like [`parse_script`], but a malformed command only spoils itself: the
/// following commands are still read. An unterminated command ends the
/// list.
pub fn script_commands(src: &str) -> Vec<Result<Command>> {
    let toks = tokenize(src);
    let mut out = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        if matches!(toks[i].text.as_str(), "fmod" | "mod" | "smod") {
            let Some(end) = (i..toks.len()).find(|&j| matches!(toks[j].text.as_str(), "endfm" | "endm" | "endsm"))
            else {
                out.push(Err(toks[i].error("module is not closed")));
                break;
            };
            out.push(Ok(Command::Modules(toks[i..=end].to_vec())));
            i = end + 1;
            continue;
        }
        let Some(end) = find_top(&toks[i..], |t| t.is(".")).map(|k| k + i) else {
            out.push(Err(toks[i].error("command is missing its terminating ` .`")));
            break;
        };
        out.push(parse_command_tokens(&toks[i..end]));
        i = end + 1;
    }
    out
}

/// Parses one command; the trailing ` .` is optional.
pub fn parse_command(src: &str) -> Result<Command> {
    let mut toks = tokenize(src);
    if toks.first().is_some_and(|t| matches!(t.text.as_str(), "fmod" | "mod" | "smod")) {
        return Ok(Command::Modules(toks));
    }
    if toks.last().is_some_and(|t| t.is(".")) {
        toks.pop();
    }
    parse_command_tokens(&toks)
}

fn name_arg(toks: &[Token], what: &str) -> Result<String> {
    match toks {
        [_, n] => Ok(n.text.clone()),
        _ => Err(err_at(toks, format!("expected `{what} <name> .`"))),
    }
}

fn nonempty(toks: &[Token], at: &Token, what: &str) -> Result<Vec<Token>> {
    if toks.is_empty() {
        Err(at.error(format!("missing {what}")))
    } else {
        Ok(toks.to_vec())
    }
}

fn parse_command_tokens(toks: &[Token]) -> Result<Command> {
    let Some(head) = toks.first() else {
        return Err(Error::Syntax { line: 0, col: 0, msg: "empty command".into() });
    };
    match head.text.as_str() {
        "quit" | "q" => Ok(Command::Quit),
        "load" => {
            let path: String = toks[1..].iter().map(|t| t.text.as_str()).collect();
            if path.is_empty() {
                return Err(head.error("expected `load <file> .`"));
            }
            Ok(Command::Load(path))
        }
        "select" => Ok(Command::Select(name_arg(toks, "select")?)),
        "show" => match toks {
            [_, m] if m.is("module") => Ok(Command::ShowModule(None)),
            [_, m, n] if m.is("module") => Ok(Command::ShowModule(Some(n.text.clone()))),
            _ => Err(head.error("expected `show module [<name>] .`")),
        },
        "transform" => match toks {
            [_, c, n] if c.is("csr") => Ok(Command::TransformCsr(n.text.clone())),
            _ => Err(head.error("expected `transform csr <module> .`")),
        },
        "red" | "reduce" => Ok(Command::Reduce(nonempty(&toks[1..], head, "term")?)),
        "rew" | "rewrite" => {
            let mut rest = &toks[1..];
            let mut limit = None;
            if rest.first().is_some_and(|t| t.is("[")) {
                match rest {
                    [_, n, close, ..] if close.is("]") => {
                        limit = Some(n.text.parse().map_err(|_| n.error("expected a rewrite bound"))?);
                        rest = &rest[3..];
                    }
                    _ => return Err(head.error("expected `rew [n] <term> .`")),
                }
            }
            Ok(Command::Rewrite { limit, term: nonempty(rest, head, "term")? })
        }
        "srew" | "srewrite" | "dsrew" | "dsrewrite" => {
            let depth_first = head.text.starts_with('d');
            let rest = &toks[1..];
            let using = find_top(rest, |t| t.is("using")).ok_or_else(|| head.error("expected `using`"))?;
            let term = nonempty(&rest[..using], head, "term")?;
            let (strats, global) = split_global(&rest[using + 1..])?;
            let strategies = split_strategies(strats);
            if global.is_none() && strategies.len() == 1 {
                return Ok(Command::SRewrite { depth_first, term, strategy: nonempty(strats, head, "strategy")? });
            }
            if depth_first {
                return Err(head.error("multistrategies use `srew`"));
            }
            let global = global.unwrap_or(GlobalSpec::Concurrent);
            Ok(Command::MultiRewrite { term, strategies, global })
        }
        "check" => {
            let rest = &toks[1..];
            let from = find_top(rest, |t| t.is("from")).ok_or_else(|| head.error("expected `from`"))?;
            let formula = nonempty(&rest[..from], head, "formula")?;
            let after = &rest[from + 1..];
            let using = find_top(after, |t| t.is("using")).ok_or_else(|| head.error("expected `using`"))?;
            let term = nonempty(&after[..using], head, "term")?;
            let (strats, global) = split_global(&after[using + 1..])?;
            let strategies = split_strategies(strats);
            Ok(Command::Check { formula, term, strategies, global: global.unwrap_or(GlobalSpec::Turns) })
        }
        other => Err(head.error(format!("unknown command `{other}`"))),
    }
}

fn is_global_kw(t: &Token) -> bool {
    matches!(t.text.as_str(), "turns" | "concurrent" | "freec" | "steps" | "custom")
}

/// Separates a trailing `by <global strategy>` from the strategy list.
fn split_global(toks: &[Token]) -> Result<(&[Token], Option<GlobalSpec>)> {
    let Some(by) = rfind_top(toks, |t| t.is("by")) else { return Ok((toks, None)) };
    let Some(kw) = toks.get(by + 1).filter(|t| is_global_kw(t)) else { return Ok((toks, None)) };
    let tail = &toks[by + 2..];
    let g = match (kw.text.as_str(), tail) {
        ("turns", []) => GlobalSpec::Turns,
        ("concurrent" | "freec", []) => GlobalSpec::Concurrent,
        ("steps", [n]) => GlobalSpec::Steps(n.text.parse().map_err(|_| n.error("expected a step count"))?),
        ("freec", [o, n, c]) if o.is("(") && c.is(")") => {
            GlobalSpec::Steps(n.text.parse().map_err(|_| n.error("expected a step count"))?)
        }
        ("custom", rest) if !rest.is_empty() => GlobalSpec::Custom(rest.to_vec()),
        _ => return Err(kw.error(format!("malformed global strategy `{}`", kw.text))),
    };
    Ok((&toks[..by], Some(g)))
}

/// Splits a comma-separated strategy list, keeping `X using α` slots of a
/// matchrew with the strategy they belong to.
fn split_strategies(toks: &[Token]) -> Vec<Vec<Token>> {
    let mut out: Vec<Vec<Token>> = Vec::new();
    for part in split_top(toks, |t| t.is(",")) {
        let slot = part.len() >= 2 && part[1].is("using");
        match out.last_mut() {
            Some(prev) if slot => {
                prev.push(Token { text: ",".into(), line: part[0].line, col: 0 });
                prev.extend(part.iter().cloned());
            }
            _ => out.push(part.to_vec()),
        }
    }
    out
}
