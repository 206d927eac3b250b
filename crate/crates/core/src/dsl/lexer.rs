use num_bigint::BigUint;

use super::ast::Pos;
use super::Diagnostic;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(BigUint),
    Partial(String),
    Punct(char),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Partial(s) => format!("`d/d{s}`"),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub at: Pos,
}

const PUNCT: &str = ";,=(){}+-*/^:";

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn lex(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let ident_at = |start: usize| {
        let mut j = start;
        while j < chars.len() && ident_char(chars[j]) {
            j += 1;
        }
        j
    };
    while i < chars.len() {
        let c = chars[i];
        let at = Pos::new(line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (tok, len) = if ident_start(c) {
            let end = ident_at(i);
            let word: String = chars[i..end].iter().collect();
            // `d/dx`
            if word == "d"
                && chars.get(end) == Some(&'/')
                && chars.get(end + 1) == Some(&'d')
                && chars.get(end + 2).is_some_and(|c| ident_start(*c))
            {
                let e2 = ident_at(end + 2);
                (Tok::Partial(chars[end + 2..e2].iter().collect()), e2 - i)
            } else {
                (Tok::Ident(word), end - i)
            }
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let digits: String = chars[i..j].iter().collect();
            let n = digits.parse::<BigUint>().expect("ascii digits");
            (Tok::Int(n), j - i)
        } else if PUNCT.contains(c) {
            (Tok::Punct(c), 1)
        } else {
            return Err(Diagnostic::new(line, col, format!("unexpected character {c:?}")));
        };
        out.push(Token { tok, at });
        i += len;
        col += len;
    }
    out.push(Token {
        tok: Tok::Eof,
        at: Pos::new(line, col),
    });
    Ok(out)
}
