//! Tokenizer for the Python-style declaration dialect.
//!
//! Produces logical lines with INDENT/DEDENT tokens. Newlines inside
//! brackets and after a trailing backslash are joined. Recoverable oddities
//! (a string cut off at the end of its line, an indentation that matches no
//! enclosing level) become diagnostics; only an unterminated triple-quoted
//! string is fatal.

use super::SourceError;
use crate::diagnostic::Diagnostic;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Name(String),
    Number(String),
    Str { value: String, formatted: bool },
    Op(String),
    Newline,
    Indent,
    Dedent,
    Eof,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
}

const OPS3: &[&str] = &["**=", "//=", ">>=", "<<=", "..."];
const OPS2: &[&str] = &[
    "->", "**", "//", "==", "!=", "<=", ">=", ":=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=", "<<", ">>",
];

struct Lexer<'a> {
    chars: Vec<char>,
    i: usize,
    line: usize,
    depth: usize,
    indents: Vec<usize>,
    out: Vec<Token>,
    diags: &'a mut Vec<Diagnostic>,
    file: &'a str,
}

pub(crate) fn tokenize(text: &str, file: &str, diags: &mut Vec<Diagnostic>) -> Result<Vec<Token>, SourceError> {
    let mut lx = Lexer {
        chars: text.chars().collect(),
        i: 0,
        line: 1,
        depth: 0,
        indents: vec![0],
        out: Vec::new(),
        diags,
        file,
    };
    lx.run()?;
    Ok(lx.out)
}

fn is_name_start(c: char) -> bool {
    c == '_' || c.is_alphabetic()
}

fn is_name_char(c: char) -> bool {
    c == '_' || c.is_alphanumeric()
}

impl Lexer<'_> {
    fn peek(&self, k: usize) -> Option<char> {
        self.chars.get(self.i + k).copied()
    }

    fn push(&mut self, tok: Tok) {
        self.out.push(Token { tok, line: self.line });
    }

    fn info(&mut self, code: &str, message: &str) {
        let at = format!("{}:{}", self.file, self.line);
        self.diags.push(Diagnostic::info(code, at, message));
    }

    fn last_is_line_end(&self) -> bool {
        matches!(
            self.out.last().map(|t| &t.tok),
            None | Some(Tok::Newline) | Some(Tok::Indent) | Some(Tok::Dedent)
        )
    }

    fn run(&mut self) -> Result<(), SourceError> {
        let mut line_start = true;
        while self.i < self.chars.len() {
            if std::mem::take(&mut line_start) && self.depth == 0 && self.indentation() {
                line_start = true;
                continue;
            }
            let c = self.chars[self.i];
            match c {
                '\n' => {
                    if self.depth == 0 && !self.last_is_line_end() {
                        self.push(Tok::Newline);
                    }
                    self.i += 1;
                    self.line += 1;
                    line_start = true;
                }
                ' ' | '\t' | '\r' | '\x0c' => self.i += 1,
                '#' => {
                    while self.i < self.chars.len() && self.chars[self.i] != '\n' {
                        self.i += 1;
                    }
                }
                '\\' if self.peek(1) == Some('\n') || (self.peek(1) == Some('\r') && self.peek(2) == Some('\n')) => {
                    self.i += if self.peek(1) == Some('\n') { 2 } else { 3 };
                    self.line += 1;
                }
                '"' | '\'' => self.string(false, false)?,
                c if is_name_start(c) => {
                    let start = self.i;
                    while self.i < self.chars.len() && is_name_char(self.chars[self.i]) {
                        self.i += 1;
                    }
                    let word: String = self.chars[start..self.i].iter().collect();
                    let lower = word.to_ascii_lowercase();
                    let is_prefix = matches!(lower.as_str(), "r" | "u" | "b" | "f" | "rb" | "br" | "fr" | "rf");
                    if is_prefix && matches!(self.peek(0), Some('"' | '\'')) {
                        self.string(lower.contains('r'), lower.contains('f'))?;
                    } else {
                        self.push(Tok::Name(word));
                    }
                }
                c if c.is_ascii_digit() || (c == '.' && self.peek(1).is_some_and(|d| d.is_ascii_digit())) => {
                    self.number()
                }
                _ => self.operator(),
            }
        }
        if !self.last_is_line_end() {
            self.push(Tok::Newline);
        }
        while self.indents.len() > 1 {
            self.indents.pop();
            self.push(Tok::Dedent);
        }
        self.push(Tok::Eof);
        Ok(())
    }

    /// Handles leading whitespace. Returns true when the line is blank or a
    /// comment and has been consumed.
    fn indentation(&mut self) -> bool {
        let mut col = 0;
        while let Some(c) = self.peek(0) {
            match c {
                ' ' => col += 1,
                '\t' => col = (col / 8 + 1) * 8,
                '\x0c' | '\r' => {}
                _ => break,
            }
            self.i += 1;
        }
        match self.peek(0) {
            None => return true,
            Some('\n') => {
                self.i += 1;
                self.line += 1;
                return true;
            }
            Some('#') => {
                while self.peek(0).is_some_and(|c| c != '\n') {
                    self.i += 1;
                }
                return true;
            }
            _ => {}
        }
        let top = *self.indents.last().unwrap_or(&0);
        if col > top {
            self.indents.push(col);
            self.push(Tok::Indent);
        } else if col < top {
            while col < *self.indents.last().unwrap_or(&0) {
                self.indents.pop();
                self.push(Tok::Dedent);
            }
            if col != *self.indents.last().unwrap_or(&0) {
                self.info(
                    "inconsistent-indentation",
                    "dedent does not match any outer indentation level",
                );
                self.indents.push(col);
                self.push(Tok::Indent);
            }
        }
        false
    }

    fn number(&mut self) {
        let start = self.i;
        let hex = self.peek(0) == Some('0') && matches!(self.peek(1), Some('x' | 'X'));
        while let Some(c) = self.peek(0) {
            let exponent_sign =
                !hex && matches!(c, '+' | '-') && matches!(self.chars.get(self.i.wrapping_sub(1)), Some('e' | 'E'));
            if c.is_ascii_alphanumeric() || c == '_' || c == '.' || exponent_sign {
                self.i += 1;
            } else {
                break;
            }
        }
        let text: String = self.chars[start..self.i].iter().collect();
        self.push(Tok::Number(text));
    }

    fn operator(&mut self) {
        let rest: String = self.chars[self.i..(self.i + 3).min(self.chars.len())].iter().collect();
        let op = OPS3
            .iter()
            .chain(OPS2)
            .find(|op| rest.starts_with(**op))
            .map(|s| s.to_string())
            .unwrap_or_else(|| self.chars[self.i].to_string());
        match op.as_str() {
            "(" | "[" | "{" => self.depth += 1,
            ")" | "]" | "}" => self.depth = self.depth.saturating_sub(1),
            _ => {}
        }
        self.i += op.chars().count();
        self.push(Tok::Op(op));
    }

    fn string(&mut self, raw: bool, formatted: bool) -> Result<(), SourceError> {
        let q = self.chars[self.i];
        let start_line = self.line;
        let triple = self.peek(1) == Some(q) && self.peek(2) == Some(q);
        self.i += if triple { 3 } else { 1 };
        let mut value = String::new();
        loop {
            let Some(c) = self.peek(0) else {
                if triple {
                    return Err(SourceError::Syntax {
                        line: start_line,
                        message: "unterminated triple-quoted string".into(),
                    });
                }
                self.info("unterminated-string", "string runs to the end of the file");
                break;
            };
            if c == q && (!triple || (self.peek(1) == Some(q) && self.peek(2) == Some(q))) {
                self.i += if triple { 3 } else { 1 };
                break;
            }
            if c == '\n' {
                if !triple {
                    self.info("unterminated-string", "string runs to the end of its line");
                    break;
                }
                self.line += 1;
                value.push(c);
                self.i += 1;
                continue;
            }
            if c == '\\' {
                let Some(next) = self.peek(1) else {
                    value.push(c);
                    self.i += 1;
                    continue;
                };
                self.i += 2;
                if next == '\n' {
                    self.line += 1;
                    if raw {
                        value.push_str("\\\n");
                    }
                    continue;
                }
                if raw {
                    value.push('\\');
                    value.push(next);
                } else {
                    self.escape(next, &mut value);
                }
                continue;
            }
            value.push(c);
            self.i += 1;
        }
        self.out.push(Token {
            tok: Tok::Str { value, formatted },
            line: start_line,
        });
        Ok(())
    }

    fn escape(&mut self, c: char, out: &mut String) {
        let simple = match c {
            '\\' => Some('\\'),
            '\'' => Some('\''),
            '"' => Some('"'),
            'n' => Some('\n'),
            't' => Some('\t'),
            'r' => Some('\r'),
            '0' => Some('\0'),
            'a' => Some('\x07'),
            'b' => Some('\x08'),
            'f' => Some('\x0c'),
            'v' => Some('\x0b'),
            _ => None,
        };
        if let Some(s) = simple {
            out.push(s);
            return;
        }
        let width = match c {
            'x' => 2,
            'u' => 4,
            'U' => 8,
            _ => 0,
        };
        if width > 0 {
            let digits: String = self.chars[self.i..(self.i + width).min(self.chars.len())]
                .iter()
                .collect();
            if digits.len() == width {
                if let Some(ch) = u32::from_str_radix(&digits, 16).ok().and_then(char::from_u32) {
                    out.push(ch);
                    self.i += width;
                    return;
                }
            }
        }
        out.push('\\');
        out.push(c);
    }
}
