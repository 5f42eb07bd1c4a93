use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub line: usize,
    pub col: usize,
}

impl Token {
    pub fn is(&self, s: &str) -> bool {
        self.text == s
    }

    pub fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { line: self.line, col: self.col, msg: msg.into() }
    }
}

fn is_special(c: char) -> bool {
    matches!(c, '(' | ')' | '[' | ']' | '{' | '}' | ',')
}

/// Splits source text into whitespace-separated tokens; parentheses,
/// brackets, braces and commas always stand alone. `***` and `---` start
/// line comments.
pub fn tokenize(src: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let rest: String = chars[i..].iter().take(3).collect();
            if rest == "***" || rest == "---" {
                break;
            }
            if is_special(c) {
                out.push(Token { text: c.to_string(), line: ln + 1, col: i + 1 });
                i += 1;
                continue;
            }
            let start = i;
            while i < chars.len() && !chars[i].is_whitespace() && !is_special(chars[i]) {
                i += 1;
            }
            out.push(Token { text: chars[start..i].iter().collect(), line: ln + 1, col: start + 1 });
        }
    }
    out
}

/// Index of the first token at bracket depth zero satisfying `pred`.
pub fn find_top(toks: &[Token], pred: impl Fn(&Token) -> bool) -> Option<usize> {
    let mut depth: i32 = 0;
    for (i, t) in toks.iter().enumerate() {
        if depth == 0 && pred(t) {
            return Some(i);
        }
        match t.text.as_str() {
            "(" | "[" | "{" => depth += 1,
            ")" | "]" | "}" => depth -= 1,
            _ => {}
        }
    }
    None
}

/// Index of the last token at bracket depth zero satisfying `pred`.
pub fn rfind_top(toks: &[Token], pred: impl Fn(&Token) -> bool) -> Option<usize> {
    let mut depth: i32 = 0;
    let mut found = None;
    for (i, t) in toks.iter().enumerate() {
        if depth == 0 && pred(t) {
            found = Some(i);
        }
        match t.text.as_str() {
            "(" | "[" | "{" => depth += 1,
            ")" | "]" | "}" => depth -= 1,
            _ => {}
        }
    }
    found
}

/// Splits at depth-zero tokens satisfying `pred`.
pub fn split_top(toks: &[Token], pred: impl Fn(&Token) -> bool) -> Vec<&[Token]> {
    let mut parts = Vec::new();
    let mut depth: i32 = 0;
    let mut start = 0;
    for (i, t) in toks.iter().enumerate() {
        if depth == 0 && pred(t) {
            parts.push(&toks[start..i]);
            start = i + 1;
            continue;
        }
        match t.text.as_str() {
            "(" | "[" | "{" => depth += 1,
            ")" | "]" | "}" => depth -= 1,
            _ => {}
        }
    }
    parts.push(&toks[start..]);
    parts
}

/// Index of the bracket closing the one opened at `open`.
pub fn matching_close(toks: &[Token], open: usize) -> Result<usize> {
    let mut depth = 0;
    for (i, t) in toks.iter().enumerate().skip(open) {
        match t.text.as_str() {
            "(" | "[" | "{" => depth += 1,
            ")" | "]" | "}" => {
                depth -= 1;
                if depth == 0 {
                    return Ok(i);
                }
            }
            _ => {}
        }
    }
    Err(toks[open].error(format!("unbalanced `{}`", toks[open].text)))
}

/// Error located at the first token, or at the end of input.
pub fn err_at(toks: &[Token], msg: impl Into<String>) -> Error {
    match toks.first() {
        Some(t) => t.error(msg),
        None => Error::Syntax { line: 0, col: 0, msg: msg.into() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(s: &str) -> Vec<String> {
        tokenize(s).into_iter().map(|t| t.text).collect()
    }

    #[test]
    fn separates_brackets_and_commas() {
        assert_eq!(texts("[I, J, -] G"), vec!["[", "I", ",", "J", ",", "-", "]", "G"]);
        assert_eq!(texts("top(put[L <- d])"), vec!["top", "(", "put", "[", "L", "<-", "d", "]", ")"]);
    }

    #[test]
    fn skips_comments() {
        assert_eq!(texts("a *** note\nb --- other"), vec!["a", "b"]);
    }

    #[test]
    fn depth_aware_split() {
        let toks = tokenize("f(a, b), c");
        let parts = split_top(&toks, |t| t.is(","));
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].len(), 6);
    }
}
