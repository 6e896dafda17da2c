use std::fmt;

use super::ParseError;

/// Source position, 1-based.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u64),
    Sym(String),
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
    /// Byte offsets into the source.
    pub start: usize,
    pub end: usize,
}

const MULTI: &[&str] = &["->", ":=", "==", "@[", "<-", "/="];

fn is_ident_start(c: char) -> bool {
    (c.is_alphabetic() && !matches!(c, 'λ' | 'Π' | 'Σ' | 'ℕ')) || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    is_ident_start(c) || c.is_ascii_digit() || matches!(c, '\'' | '.' | '₀'..='₉' | '!' | '?')
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    let (mut line, mut col) = (1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize| {
        if chars[*i].1 == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        *i += 1;
    };
    let offset = |i: usize| chars.get(i).map_or(src.len(), |c| c.0);
    while i < chars.len() {
        let c = chars[i].1;
        let pos = Pos { line, col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col);
            continue;
        }
        if c == '-' && chars.get(i + 1).map(|c| c.1) == Some('-') {
            while i < chars.len() && chars[i].1 != '\n' {
                advance(&mut i, &mut line, &mut col);
            }
            continue;
        }
        if c == '/' && chars.get(i + 1).map(|c| c.1) == Some('-') {
            let mut depth = 0usize;
            loop {
                if i >= chars.len() {
                    return Err(ParseError::new(pos, "unterminated comment"));
                }
                let (a, b) = (chars[i].1, chars.get(i + 1).map(|c| c.1));
                if a == '/' && b == Some('-') {
                    depth += 1;
                    advance(&mut i, &mut line, &mut col);
                } else if a == '-' && b == Some('/') {
                    depth -= 1;
                    advance(&mut i, &mut line, &mut col);
                    if depth == 0 {
                        advance(&mut i, &mut line, &mut col);
                        break;
                    }
                }
                advance(&mut i, &mut line, &mut col);
            }
            continue;
        }
        let start = i;
        let tok = if is_ident_start(c) {
            while i < chars.len() && is_ident_continue(chars[i].1) {
                advance(&mut i, &mut line, &mut col);
            }
            // A trailing dot belongs to the surrounding text, not the name.
            while i > start + 1 && chars[i - 1].1 == '.' {
                i -= 1;
                col -= 1;
            }
            Tok::Ident(src[offset(start)..offset(i)].to_string())
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                advance(&mut i, &mut line, &mut col);
            }
            let text = &src[offset(start)..offset(i)];
            Tok::Num(text.parse().map_err(|_| ParseError::new(pos, "numeral too large"))?)
        } else {
            let rest = &src[offset(i)..];
            let sym = MULTI
                .iter()
                .find(|m| rest.starts_with(**m))
                .map(|m| m.to_string())
                .unwrap_or_else(|| c.to_string());
            for _ in 0..sym.chars().count() {
                advance(&mut i, &mut line, &mut col);
            }
            Tok::Sym(sym)
        };
        out.push(Token { tok, pos, start: offset(start), end: offset(i) });
    }
    let end = Pos { line, col };
    out.push(Token { tok: Tok::Eof, pos: end, start: src.len(), end: src.len() });
    Ok(out)
}
