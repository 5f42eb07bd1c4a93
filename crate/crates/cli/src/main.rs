//! `strata`: interactive and batch front end.

mod session;

use std::io::{BufRead, IsTerminal, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use session::{check_code, render, Options, Outcome, Session};
use strata::frontend::lexer::tokenize;
use strata::Result;

#[derive(Parser, Debug)]
#[command(name = "strata", version, about = "Rewriting with strategies, multistrategies and LTL model checking")]
struct Args {
    /// Script files to run, in order.
    #[arg(short = 'f', long = "file")]
    files: Vec<String>,
    /// Commands to run after the scripts.
    #[arg(short = 'c', long = "command")]
    commands: Vec<String>,
    /// Accept congruence and traversal operators in strategies (default).
    #[arg(long, overrides_with = "no_extended")]
    extended: bool,
    #[arg(long = "no-extended")]
    no_extended: bool,
    /// Bound on equational rewrites per reduction.
    #[arg(long)]
    step_limit: Option<u64>,
    /// Bound on explored states in searches and model checking.
    #[arg(long)]
    state_limit: Option<u64>,
    /// One JSON object per command instead of transcript text.
    #[arg(long)]
    json: bool,
}

struct Printer {
    json: bool,
    failed: bool,
    code: Option<i32>,
    quit: bool,
}

impl Printer {
    fn emit(&mut self, r: Result<Outcome>) {
        let mut stdout = std::io::stdout().lock();
        match r {
            Ok(o) => {
                if let Some(c) = check_code(&o) {
                    self.code = Some(c);
                }
                self.quit |= matches!(o, Outcome::Quit);
                let text = if self.json { serde_json::to_string(&o).expect("outcome serializes") } else { render(&o) };
                let _ = writeln!(stdout, "{text}");
            }
            Err(e) => {
                self.failed = true;
                if self.json {
                    let _ = writeln!(stdout, "{}", serde_json::json!({ "kind": "error", "message": e.to_string() }));
                } else {
                    let _ = stdout.flush();
                    eprintln!("Error: {e}");
                }
            }
        }
    }

    fn exit(&self) -> ExitCode {
        if self.failed {
            ExitCode::from(1)
        } else {
            ExitCode::from(self.code.unwrap_or(0) as u8)
        }
    }
}

/// Whether `buf` holds whole commands: every module block is closed and
/// the input ends with a command terminator.
fn complete(buf: &str) -> bool {
    let toks = tokenize(buf);
    let opened = toks.iter().filter(|t| matches!(t.text.as_str(), "fmod" | "mod" | "smod")).count();
    let closed = toks.iter().filter(|t| matches!(t.text.as_str(), "endfm" | "endm" | "endsm")).count();
    match toks.last() {
        None => false,
        Some(t) => opened <= closed && (t.is(".") || matches!(t.text.as_str(), "endfm" | "endm" | "endsm")),
    }
}

fn repl(session: &mut Session, printer: &mut Printer) {
    let stdin = std::io::stdin();
    let interactive = stdin.is_terminal();
    let mut buf = String::new();
    let prompt = |cont: bool| {
        if interactive {
            print!("{}", if cont { "> " } else { "Strata> " });
            let _ = std::io::stdout().flush();
        }
    };
    prompt(false);
    for line in stdin.lock().lines() {
        let Ok(line) = line else { break };
        buf.push_str(&line);
        buf.push('\n');
        if !complete(&buf) {
            prompt(!buf.trim().is_empty());
            continue;
        }
        let src = std::mem::take(&mut buf);
        session.run_script(&src, &mut |r| printer.emit(r));
        if printer.quit {
            return;
        }
        prompt(false);
    }
    if !buf.trim().is_empty() {
        session.run_script(&buf, &mut |r| printer.emit(r));
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let opts = Options { extended: !args.no_extended, step_limit: args.step_limit, state_limit: args.state_limit };
    let mut session = Session::new(opts);
    let mut printer = Printer { json: args.json, failed: false, code: None, quit: false };
    for f in &args.files {
        let src = match std::fs::read_to_string(f) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("Error: cannot read {f}: {e}");
                return ExitCode::from(1);
            }
        };
        session.set_base(Path::new(f).parent().unwrap_or(Path::new(".")));
        session.run_script(&src, &mut |r| printer.emit(r));
        if printer.quit {
            return printer.exit();
        }
    }
    session.set_base(Path::new("."));
    for c in &args.commands {
        // the terminating ` .` may be left out
        let c = if complete(c) { c.clone() } else { format!("{c} .") };
        session.run_script(&c, &mut |r| printer.emit(r));
        if printer.quit {
            return printer.exit();
        }
    }
    if args.files.is_empty() && args.commands.is_empty() {
        repl(&mut session, &mut printer);
    }
    printer.exit()
}

#[cfg(test)]
mod tests {
    use super::complete;

    #[test]
    fn input_completeness() {
        assert!(complete("red a ."));
        assert!(!complete("red a"));
        assert!(!complete("fmod M is sort S ."));
        assert!(complete("fmod M is sort S . endfm"));
    }
}
