//! Declaration parser: classes, annotated attributes, `def` signatures,
//! decorators and docstrings. Statement bodies are skipped, never
//! evaluated.

use super::lexer::{Tok, Token};
use crate::diagnostic::Diagnostic;

/// Nesting deeper than this is skipped rather than recursed into.
const MAX_DEPTH: usize = 64;

/// A literal value as written in source.
#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Int(i64),
    Float(f64),
    Str(String),
    Bool(bool),
    None,
    List(Vec<Literal>),
    Dict(Vec<(Literal, Literal)>),
}

/// A default value or decorator argument: a literal, or source text that
/// would need evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Literal(Literal),
    Dynamic(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decorator {
    pub name: String,
    pub line: usize,
    pub args: Vec<Expr>,
    pub kwargs: Vec<(String, Expr)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Normal,
    VarArgs,
    KwArgs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamNode {
    pub name: String,
    pub line: usize,
    pub kind: ParamKind,
    pub hint: Option<String>,
    pub default: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttributeNode {
    pub name: String,
    pub line: usize,
    pub hint: Option<String>,
    pub default: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionNode {
    pub name: String,
    pub line: usize,
    pub docstring: Option<String>,
    pub decorators: Vec<Decorator>,
    pub params: Vec<ParamNode>,
    pub return_hint: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassNode {
    pub name: String,
    /// Dotted path through enclosing classes (`Outer.Inner`).
    pub qualified_name: String,
    pub line: usize,
    pub docstring: Option<String>,
    pub decorators: Vec<Decorator>,
    pub attributes: Vec<AttributeNode>,
    pub methods: Vec<FunctionNode>,
    pub classes: Vec<ClassNode>,
}

/// Everything declared in one source file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnnotatedInterfaceTree {
    pub file: String,
    /// File stem; names the class that collects module-level functions.
    pub module: String,
    pub classes: Vec<ClassNode>,
    pub functions: Vec<FunctionNode>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Scope {
    Module,
    Class,
    Function,
}

enum Member {
    Docstring(String),
    Class(ClassNode),
    Function(FunctionNode),
    Attribute(AttributeNode),
    Other,
}

pub(crate) struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    depth: usize,
    file: &'a str,
    diags: &'a mut Vec<Diagnostic>,
}

fn is_op(t: &Tok, s: &str) -> bool {
    matches!(t, Tok::Op(o) if o == s)
}

fn is_name(t: &Tok, s: &str) -> bool {
    matches!(t, Tok::Name(n) if n == s)
}

impl<'a> Parser<'a> {
    pub fn new(toks: &'a [Token], file: &'a str, diags: &'a mut Vec<Diagnostic>) -> Self {
        Parser {
            toks,
            pos: 0,
            depth: 0,
            file,
            diags,
        }
    }

    fn tok(&self) -> &Tok {
        self.toks.get(self.pos).map(|t| &t.tok).unwrap_or(&Tok::Eof)
    }

    fn tok_at(&self, k: usize) -> &Tok {
        self.toks.get(self.pos + k).map(|t| &t.tok).unwrap_or(&Tok::Eof)
    }

    fn line(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.line).unwrap_or(0)
    }

    fn bump(&mut self) {
        if self.pos < self.toks.len() {
            self.pos += 1;
        }
    }

    fn note(&mut self, code: &str, line: usize, message: impl Into<String>) {
        self.diags
            .push(Diagnostic::info(code, format!("{}:{line}", self.file), message));
    }

    fn warn(&mut self, code: &str, line: usize, message: impl Into<String>) {
        self.diags
            .push(Diagnostic::warning(code, format!("{}:{line}", self.file), message));
    }

    pub fn module(mut self) -> (Vec<ClassNode>, Vec<FunctionNode>) {
        let mut classes = Vec::new();
        let mut functions = Vec::new();
        while *self.tok() != Tok::Eof {
            match self.statement(Scope::Module, "") {
                Member::Class(c) => classes.push(c),
                Member::Function(f) => functions.push(f),
                _ => {}
            }
        }
        (classes, functions)
    }

    /// Skips to the end of the logical line and over any block that follows.
    fn skip_statement(&mut self) {
        while !matches!(self.tok(), Tok::Newline | Tok::Eof) {
            self.bump();
        }
        if *self.tok() == Tok::Newline {
            self.bump();
        }
        if *self.tok() == Tok::Indent {
            self.skip_block();
        }
    }

    fn skip_block(&mut self) {
        let mut level = 0usize;
        loop {
            match self.tok() {
                Tok::Indent => level += 1,
                Tok::Dedent => {
                    level -= 1;
                    if level == 0 {
                        self.bump();
                        return;
                    }
                }
                Tok::Eof => return,
                _ => {}
            }
            self.bump();
        }
    }

    fn expect_newline(&mut self) {
        if !matches!(self.tok(), Tok::Newline | Tok::Eof) {
            let line = self.line();
            self.note(
                "skipped-construct",
                line,
                "unexpected tokens at the end of a declaration; skipped",
            );
            while !matches!(self.tok(), Tok::Newline | Tok::Eof) {
                self.bump();
            }
        }
        if *self.tok() == Tok::Newline {
            self.bump();
        }
    }

    fn statement(&mut self, scope: Scope, prefix: &str) -> Member {
        while matches!(self.tok(), Tok::Indent | Tok::Dedent | Tok::Newline) {
            if *self.tok() == Tok::Indent {
                let line = self.line();
                self.note(
                    "unexpected-indent",
                    line,
                    "indented block without an opening statement; skipped",
                );
                self.skip_block();
            } else {
                self.bump();
            }
        }
        if *self.tok() == Tok::Eof {
            return Member::Other;
        }
        let mut decorators = Vec::new();
        while is_op(self.tok(), "@") {
            decorators.push(self.decorator());
        }
        let line = self.line();
        let member = match self.tok().clone() {
            Tok::Name(kw) if kw == "class" => self.class_def(decorators.split_off(0), prefix),
            Tok::Name(kw) if kw == "def" => self.func_def(decorators.split_off(0)),
            Tok::Name(kw) if kw == "async" && is_name(self.tok_at(1), "def") => {
                self.bump();
                self.func_def(decorators.split_off(0))
            }
            _ if scope == Scope::Function => {
                if let Some(doc) = self.lone_string() {
                    Member::Docstring(doc)
                } else {
                    self.skip_statement();
                    Member::Other
                }
            }
            Tok::Name(n) if is_op(self.tok_at(1), ":") && scope == Scope::Class => {
                self.bump();
                self.bump();
                Member::Attribute(self.attribute(n, line))
            }
            Tok::Name(kw)
                if matches!(
                    kw.as_str(),
                    "if" | "for" | "while" | "try" | "with" | "match" | "elif" | "else" | "except" | "finally"
                ) =>
            {
                self.note(
                    "skipped-construct",
                    line,
                    format!("`{kw}` block is outside the declaration subset; skipped"),
                );
                self.skip_statement();
                Member::Other
            }
            _ => {
                if let Some(doc) = self.lone_string() {
                    Member::Docstring(doc)
                } else {
                    self.skip_statement();
                    Member::Other
                }
            }
        };
        if !decorators.is_empty() {
            self.note(
                "skipped-construct",
                line,
                "decorator is not followed by a class or def; ignored",
            );
        }
        member
    }

    /// A statement consisting of string literals only.
    fn lone_string(&mut self) -> Option<String> {
        let mut k = 0;
        let mut text = String::new();
        while let Tok::Str { value, .. } = self.tok_at(k) {
            text.push_str(value);
            k += 1;
        }
        if k > 0 && matches!(self.tok_at(k), Tok::Newline | Tok::Eof) {
            self.pos += k;
            self.expect_newline();
            Some(text)
        } else {
            None
        }
    }

    fn decorator(&mut self) -> Decorator {
        let line = self.line();
        self.bump();
        let mut name = String::new();
        while let Tok::Name(n) = self.tok().clone() {
            name.push_str(&n);
            self.bump();
            if is_op(self.tok(), ".") {
                name.push('.');
                self.bump();
            } else {
                break;
            }
        }
        let mut args = Vec::new();
        let mut kwargs = Vec::new();
        if is_op(self.tok(), "(") {
            self.bump();
            while !is_op(self.tok(), ")") && !matches!(self.tok(), Tok::Newline | Tok::Eof) {
                if let (Tok::Name(k), true) = (self.tok().clone(), is_op(self.tok_at(1), "=")) {
                    self.bump();
                    self.bump();
                    let value = self.collect(&[",", ")"]);
                    kwargs.push((k, expr_of(&value)));
                } else {
                    let value = self.collect(&[",", ")"]);
                    if value.is_empty() {
                        self.bump();
                        continue;
                    }
                    args.push(expr_of(&value));
                }
                if is_op(self.tok(), ",") {
                    self.bump();
                }
            }
            if is_op(self.tok(), ")") {
                self.bump();
            }
        }
        if name.is_empty() {
            self.note("skipped-construct", line, "decorator without a name; ignored");
        }
        self.expect_newline();
        Decorator {
            name,
            line,
            args,
            kwargs,
        }
    }

    /// Collects one expression: tokens up to a terminator at bracket depth 0.
    fn collect(&mut self, terminators: &[&str]) -> Vec<Tok> {
        let mut out = Vec::new();
        let mut depth = 0usize;
        loop {
            let t = self.tok().clone();
            match &t {
                Tok::Newline | Tok::Eof | Tok::Indent | Tok::Dedent => break,
                Tok::Op(o) if depth == 0 && terminators.contains(&o.as_str()) => break,
                Tok::Op(o) if matches!(o.as_str(), "(" | "[" | "{") => depth += 1,
                Tok::Op(o) if matches!(o.as_str(), ")" | "]" | "}") => {
                    if depth == 0 {
                        break;
                    }
                    depth -= 1;
                }
                _ => {}
            }
            out.push(t);
            self.bump();
        }
        out
    }

    fn attribute(&mut self, name: String, line: usize) -> AttributeNode {
        let hint = self.collect(&["="]);
        let default = if is_op(self.tok(), "=") {
            self.bump();
            Some(expr_of(&self.collect(&[])))
        } else {
            None
        };
        self.expect_newline();
        AttributeNode {
            name,
            line,
            hint: hint_text(&hint),
            default,
        }
    }

    /// The body after `:`. Returns the members it declares.
    fn suite(&mut self, scope: Scope, prefix: &str) -> Vec<Member> {
        let mut members = Vec::new();
        if *self.tok() != Tok::Newline {
            members.push(self.statement(scope, prefix));
            return members;
        }
        self.bump();
        if *self.tok() != Tok::Indent {
            let line = self.line();
            self.note("skipped-construct", line, "expected an indented block");
            return members;
        }
        self.bump();
        if self.depth >= MAX_DEPTH {
            let line = self.line();
            self.note("skipped-construct", line, "nesting too deep; block skipped");
            self.pos -= 1;
            self.skip_block();
            return members;
        }
        self.depth += 1;
        loop {
            match self.tok() {
                Tok::Dedent => {
                    self.bump();
                    break;
                }
                Tok::Eof => break,
                _ => members.push(self.statement(scope, prefix)),
            }
        }
        self.depth -= 1;
        members
    }

    fn class_def(&mut self, decorators: Vec<Decorator>, prefix: &str) -> Member {
        let line = self.line();
        self.bump();
        let Tok::Name(name) = self.tok().clone() else {
            self.note("skipped-construct", line, "class statement without a name; skipped");
            self.skip_statement();
            return Member::Other;
        };
        self.bump();
        if is_op(self.tok(), "(") {
            self.bump();
            self.collect(&[]);
            if is_op(self.tok(), ")") {
                self.bump();
            }
        }
        if !is_op(self.tok(), ":") {
            self.note(
                "skipped-construct",
                line,
                format!("malformed class statement `{name}`; skipped"),
            );
            self.skip_statement();
            return Member::Other;
        }
        self.bump();
        let qualified_name = if prefix.is_empty() {
            name.clone()
        } else {
            format!("{prefix}.{name}")
        };
        let body = self.suite(Scope::Class, &qualified_name);
        let mut class = ClassNode {
            name,
            qualified_name,
            line,
            docstring: None,
            decorators,
            attributes: Vec::new(),
            methods: Vec::new(),
            classes: Vec::new(),
        };
        for (i, m) in body.into_iter().enumerate() {
            match m {
                Member::Docstring(d) if i == 0 => class.docstring = Some(d),
                Member::Attribute(a) => {
                    if let Some(pos) = class.attributes.iter().position(|x| x.name == a.name) {
                        self.warn(
                            "duplicate-member",
                            a.line,
                            format!("`{}` is declared again; the later declaration wins", a.name),
                        );
                        class.attributes.remove(pos);
                    }
                    class.attributes.push(a);
                }
                Member::Function(f) => {
                    if let Some(pos) = class.methods.iter().position(|x| x.name == f.name) {
                        self.warn(
                            "duplicate-member",
                            f.line,
                            format!("`{}` is defined again; the later definition wins", f.name),
                        );
                        class.methods.remove(pos);
                    }
                    class.methods.push(f);
                }
                Member::Class(c) => class.classes.push(c),
                _ => {}
            }
        }
        Member::Class(class)
    }

    fn func_def(&mut self, decorators: Vec<Decorator>) -> Member {
        let line = self.line();
        self.bump();
        let Tok::Name(name) = self.tok().clone() else {
            self.note("skipped-construct", line, "def statement without a name; skipped");
            self.skip_statement();
            return Member::Other;
        };
        self.bump();
        if !is_op(self.tok(), "(") {
            self.note(
                "skipped-construct",
                line,
                format!("malformed def statement `{name}`; skipped"),
            );
            self.skip_statement();
            return Member::Other;
        }
        self.bump();
        let params = self.params();
        let mut return_hint = None;
        if is_op(self.tok(), "->") {
            self.bump();
            return_hint = hint_text(&self.collect(&[":"]));
        }
        if !is_op(self.tok(), ":") {
            self.note(
                "skipped-construct",
                line,
                format!("malformed def statement `{name}`; skipped"),
            );
            self.skip_statement();
            return Member::Other;
        }
        self.bump();
        let body = self.suite(Scope::Function, "");
        let docstring = match body.into_iter().next() {
            Some(Member::Docstring(d)) => Some(d),
            _ => None,
        };
        Member::Function(FunctionNode {
            name,
            line,
            docstring,
            decorators,
            params,
            return_hint,
        })
    }

    fn params(&mut self) -> Vec<ParamNode> {
        let mut params: Vec<ParamNode> = Vec::new();
        loop {
            let line = self.line();
            let kind = match self.tok() {
                Tok::Op(o) if o == ")" => {
                    self.bump();
                    break;
                }
                Tok::Newline | Tok::Eof | Tok::Indent | Tok::Dedent => break,
                Tok::Op(o) if o == "," => {
                    self.bump();
                    continue;
                }
                Tok::Op(o) if o == "/" => {
                    self.bump();
                    continue;
                }
                Tok::Op(o) if o == "*" => {
                    self.bump();
                    ParamKind::VarArgs
                }
                Tok::Op(o) if o == "**" => {
                    self.bump();
                    ParamKind::KwArgs
                }
                _ => ParamKind::Normal,
            };
            let Tok::Name(name) = self.tok().clone() else {
                if kind != ParamKind::VarArgs {
                    self.note("skipped-construct", line, "unreadable parameter; skipped");
                    let skipped = self.collect(&[",", ")"]);
                    if skipped.is_empty() && !is_op(self.tok(), ",") && !is_op(self.tok(), ")") {
                        self.bump();
                    }
                }
                continue;
            };
            self.bump();
            let hint = if is_op(self.tok(), ":") {
                self.bump();
                hint_text(&self.collect(&[",", ")", "="]))
            } else {
                None
            };
            let default = if is_op(self.tok(), "=") {
                self.bump();
                Some(expr_of(&self.collect(&[",", ")"])))
            } else {
                None
            };
            if !matches!(self.tok(), Tok::Op(o) if o == "," || o == ")") {
                self.note(
                    "skipped-construct",
                    line,
                    format!("unexpected tokens after parameter `{name}`"),
                );
                self.collect(&[",", ")"]);
            }
            if let Some(pos) = params.iter().position(|p| p.name == name) {
                self.warn(
                    "duplicate-member",
                    line,
                    format!("parameter `{name}` repeats; the later one wins"),
                );
                params.remove(pos);
            }
            params.push(ParamNode {
                name,
                line,
                kind,
                hint,
                default,
            });
        }
        params
    }
}

/// Renders a token run as compact source text.
fn source_text(toks: &[Tok]) -> String {
    let mut s = String::new();
    for t in toks {
        match t {
            Tok::Name(n) | Tok::Number(n) => {
                if s.ends_with(|c: char| c.is_alphanumeric() || c == '_') {
                    s.push(' ');
                }
                s.push_str(n);
            }
            Tok::Str { value, formatted } => {
                if *formatted {
                    s.push('f');
                }
                s.push('"');
                s.push_str(&value.replace('\\', "\\\\").replace('"', "\\\""));
                s.push('"');
            }
            Tok::Op(o) if o == "," => s.push_str(", "),
            Tok::Op(o) if o == "|" => s.push_str(" | "),
            Tok::Op(o) => s.push_str(o),
            _ => {}
        }
    }
    s
}

/// Type-hint text; string forward references lose their quotes.
pub(crate) fn hint_text(toks: &[Tok]) -> Option<String> {
    if toks.is_empty() {
        return None;
    }
    let unquoted: Vec<Tok> = toks
        .iter()
        .map(|t| match t {
            Tok::Str { value, .. } => Tok::Name(value.trim().to_owned()),
            other => other.clone(),
        })
        .collect();
    Some(source_text(&unquoted))
}

pub(crate) fn expr_of(toks: &[Tok]) -> Expr {
    let mut i = 0;
    match literal(toks, &mut i, 0) {
        Some(l) if i == toks.len() => Expr::Literal(l),
        _ => Expr::Dynamic(source_text(toks)),
    }
}

fn number(text: &str) -> Option<Literal> {
    let t = text.replace('_', "");
    let lower = t.to_ascii_lowercase();
    for (prefix, radix) in [("0x", 16), ("0o", 8), ("0b", 2)] {
        if let Some(digits) = lower.strip_prefix(prefix) {
            return i64::from_str_radix(digits, radix).ok().map(Literal::Int);
        }
    }
    if lower.ends_with('j') {
        return None;
    }
    if lower.contains(['.', 'e']) {
        return lower.parse::<f64>().ok().map(Literal::Float);
    }
    if lower.len() > 1 && lower.starts_with('0') && lower.bytes().any(|b| b != b'0') {
        return None;
    }
    lower.parse::<i64>().ok().map(Literal::Int)
}

fn literal(toks: &[Tok], i: &mut usize, depth: usize) -> Option<Literal> {
    if depth > MAX_DEPTH {
        return None;
    }
    let t = toks.get(*i)?;
    match t {
        Tok::Number(n) => {
            *i += 1;
            number(n)
        }
        Tok::Op(o) if (o == "-" || o == "+") && matches!(toks.get(*i + 1), Some(Tok::Number(_))) => {
            let Some(Tok::Number(n)) = toks.get(*i + 1) else {
                return None;
            };
            *i += 2;
            match (number(n)?, o.as_str()) {
                (Literal::Int(v), "-") => v.checked_neg().map(Literal::Int),
                (Literal::Float(v), "-") => Some(Literal::Float(-v)),
                (l, _) => Some(l),
            }
        }
        Tok::Str { .. } => {
            let mut s = String::new();
            while let Some(Tok::Str { value, formatted }) = toks.get(*i) {
                if *formatted {
                    return None;
                }
                s.push_str(value);
                *i += 1;
            }
            Some(Literal::Str(s))
        }
        Tok::Name(n) => {
            *i += 1;
            match n.as_str() {
                "True" => Some(Literal::Bool(true)),
                "False" => Some(Literal::Bool(false)),
                "None" => Some(Literal::None),
                _ => None,
            }
        }
        Tok::Op(o) if o == "[" || o == "(" => {
            let close = if o == "[" { "]" } else { ")" };
            *i += 1;
            let mut items = Vec::new();
            let mut saw_comma = false;
            loop {
                if is_op(toks.get(*i)?, close) {
                    *i += 1;
                    break;
                }
                items.push(literal(toks, i, depth + 1)?);
                match toks.get(*i)? {
                    t if is_op(t, ",") => {
                        saw_comma = true;
                        *i += 1;
                    }
                    t if is_op(t, close) => {
                        *i += 1;
                        break;
                    }
                    _ => return None,
                }
            }
            if close == ")" && items.len() == 1 && !saw_comma {
                return items.pop();
            }
            Some(Literal::List(items))
        }
        Tok::Op(o) if o == "{" => {
            *i += 1;
            let mut entries = Vec::new();
            loop {
                if is_op(toks.get(*i)?, "}") {
                    *i += 1;
                    break;
                }
                let k = literal(toks, i, depth + 1)?;
                if !is_op(toks.get(*i)?, ":") {
                    return None;
                }
                *i += 1;
                let v = literal(toks, i, depth + 1)?;
                entries.push((k, v));
                match toks.get(*i)? {
                    t if is_op(t, ",") => *i += 1,
                    t if is_op(t, "}") => {
                        *i += 1;
                        break;
                    }
                    _ => return None,
                }
            }
            Some(Literal::Dict(entries))
        }
        _ => None,
    }
}
