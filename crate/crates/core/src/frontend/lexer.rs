//! Tokens with positions. Newlines are insignificant; `#` starts a comment
//! running to the end of the line.

use super::{Diagnostic, Span};

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Ident(String),
    Int(u64),
    Float(f64),
    Str(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    Equals,
    Arrow,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("'{s}'"),
            TokenKind::Int(n) => format!("number {n}"),
            TokenKind::Float(x) => format!("number {x}"),
            TokenKind::Str(s) => format!("string \"{s}\""),
            TokenKind::LBrace => "'{'".into(),
            TokenKind::RBrace => "'}'".into(),
            TokenKind::LBracket => "'['".into(),
            TokenKind::RBracket => "']'".into(),
            TokenKind::LParen => "'('".into(),
            TokenKind::RParen => "')'".into(),
            TokenKind::Comma => "','".into(),
            TokenKind::Semi => "';'".into(),
            TokenKind::Colon => "':'".into(),
            TokenKind::Equals => "'='".into(),
            TokenKind::Arrow => "'->'".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<(usize, char)> {
        let next = self.chars.next();
        if let Some((_, c)) = next {
            if c == '\n' {
                self.line += 1;
                self.column = 1;
            } else {
                self.column += 1;
            }
        }
        next
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut cur = Cursor { chars: text.char_indices().peekable(), line: 1, column: 1 };
    let mut tokens = Vec::new();
    loop {
        while let Some(c) = cur.peek() {
            if c == '#' {
                while let Some(c) = cur.peek() {
                    if c == '\n' {
                        break;
                    }
                    cur.bump();
                }
            } else if c.is_whitespace() {
                cur.bump();
            } else {
                break;
            }
        }
        let (line, column) = (cur.line, cur.column);
        let Some((start, c)) = cur.bump() else {
            tokens.push(Token { kind: TokenKind::Eof, span: Span::new(line, column, text.len(), 0) });
            return Ok(tokens);
        };
        let single = |kind| Some(kind);
        let mut kind = match c {
            '{' => single(TokenKind::LBrace),
            '}' => single(TokenKind::RBrace),
            '[' => single(TokenKind::LBracket),
            ']' => single(TokenKind::RBracket),
            '(' => single(TokenKind::LParen),
            ')' => single(TokenKind::RParen),
            ',' => single(TokenKind::Comma),
            ';' => single(TokenKind::Semi),
            ':' => single(TokenKind::Colon),
            '=' => single(TokenKind::Equals),
            _ => None,
        };
        if kind.is_none() {
            kind = Some(if c == '-' && cur.peek() == Some('>') {
                cur.bump();
                TokenKind::Arrow
            } else if c == '"' {
                let mut s = String::new();
                loop {
                    match cur.bump() {
                        Some((_, '"')) => break,
                        Some((_, '\n')) | None => {
                            return Err(Diagnostic::error("unterminated string", Span::new(line, column, start, 1), text));
                        }
                        Some((_, ch)) => s.push(ch),
                    }
                }
                TokenKind::Str(s)
            } else if c.is_ascii_digit() || (c == '-' && cur.peek().is_some_and(|d| d.is_ascii_digit() || d == '.')) {
                let mut s = String::from(c);
                let mut is_float = false;
                while let Some(d) = cur.peek() {
                    let after_exp = s.ends_with(['e', 'E']);
                    if d.is_ascii_digit() || d == '.' || d == 'e' || d == 'E' || (after_exp && (d == '+' || d == '-')) {
                        is_float |= !d.is_ascii_digit();
                        s.push(d);
                        cur.bump();
                    } else {
                        break;
                    }
                }
                let span = Span::new(line, column, start, s.len());
                if !is_float && !s.starts_with('-') {
                    match s.parse::<u64>() {
                        Ok(n) => TokenKind::Int(n),
                        Err(_) => return Err(Diagnostic::error(format!("number {s} is out of range"), span, text)),
                    }
                } else {
                    match s.parse::<f64>() {
                        Ok(x) => TokenKind::Float(x),
                        Err(_) => return Err(Diagnostic::error(format!("malformed number {s}"), span, text)),
                    }
                }
            } else if is_ident_start(c) {
                let mut s = String::from(c);
                while let Some(d) = cur.peek() {
                    if is_ident_continue(d) && !(d == '-' && s.ends_with('-')) {
                        s.push(d);
                        cur.bump();
                    } else {
                        break;
                    }
                }
                TokenKind::Ident(s)
            } else {
                return Err(Diagnostic::error(
                    format!("unexpected character '{c}'"),
                    Span::new(line, column, start, c.len_utf8()),
                    text,
                ));
            });
        }
        let end = cur.chars.peek().map_or(text.len(), |&(i, _)| i);
        tokens.push(Token { kind: kind.unwrap(), span: Span::new(line, column, start, end - start) });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<TokenKind> {
        tokenize(text).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn basic_tokens() {
        assert_eq!(
            kinds("a -> \"ab\"; # note\n cover-of Zn(3) -1.5 2e3 7"),
            vec![
                TokenKind::Ident("a".into()),
                TokenKind::Arrow,
                TokenKind::Str("ab".into()),
                TokenKind::Semi,
                TokenKind::Ident("cover-of".into()),
                TokenKind::Ident("Zn".into()),
                TokenKind::LParen,
                TokenKind::Int(3),
                TokenKind::RParen,
                TokenKind::Float(-1.5),
                TokenKind::Float(2000.0),
                TokenKind::Int(7),
                TokenKind::Eof,
            ]
        );
    }

    #[test]
    fn positions() {
        let t = tokenize("x\n  \"é\" y").unwrap();
        assert_eq!((t[1].span.line, t[1].span.column), (2, 3));
        assert_eq!((t[2].span.line, t[2].span.column), (2, 7));
    }

    #[test]
    fn errors() {
        let e = tokenize("a\n  \"open").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = tokenize("a $").unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));
    }
}
