//! Lexer and parser for the session language.
//!
//! ```text
//! ring shift Q(x)
//! eq E: y(x+1) = ((x+1)/x) * y(x)
//! module M = [[0, -1], [1, 0]]
//! group E
//! ```

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at line {}, column {}: {msg}", pos.line, pos.col)]
pub struct SyntaxError {
    pub pos: Pos,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::Sym(c) => write!(f, "'{c}'"),
            Tok::Newline => write!(f, "end of line"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = Pos { line: li + 1, col: i + 1 };
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && chars[i] == '.' {
                    return Err(SyntaxError { pos: Pos { line: li + 1, col: i + 1 }, msg: "decimal numbers are not supported; write a fraction".into() });
                }
                let s: String = chars[start..i].iter().collect();
                out.push((Tok::Int(s.parse().expect("digits")), pos));
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            } else if "()[],+-*/^=:".contains(c) {
                out.push((Tok::Sym(c), pos));
                i += 1;
            } else {
                return Err(SyntaxError { pos, msg: format!("unexpected character '{c}'") });
            }
        }
        out.push((Tok::Newline, Pos { line: li + 1, col: chars.len() + 1 }));
    }
    let end = out.last().map(|(_, p)| *p).unwrap_or(Pos { line: 1, col: 1 });
    out.push((Tok::Eof, end));
    Ok(out)
}

/// Element expressions; `Y` is the unknown `y(x)` on an equation's right
/// hand side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(String, Pos),
    Y,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Tuple(Vec<Expr>),
}

/// A constants field: `Q`, `Q(i)`, `Q(zeta5)` or `Q(s: s^2 - 2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Named(String),
    Defined(String, Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    Shift(FieldSpec),
    QDil(FieldSpec, Expr),
    Poly(FieldSpec),
    Cyclic(FieldSpec, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Ring(RingSpec),
    Module { name: String, rows: Vec<Vec<Expr>> },
    /// `y(arg) = rhs`, with `arg` the text of the shifted argument.
    Eq { name: String, arg: Expr, rhs: Expr },
    Constants,
    Fractions,
    Simple,
    Solve(String),
    Group(String),
    Pv(String),
    Verify(String),
    Split(String),
    Print(String),
    Descend { name: String, chi: Vec<i64> },
    Universal(Vec<String>),
    Iso(String, String),
    Basechange(FieldSpec),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub command: Command,
    pub pos: Pos,
    /// The source line, echoed in reports.
    pub source: String,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].1
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if t != Tok::Eof {
            self.i += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError { pos: self.pos(), msg: msg.into() })
    }

    fn expect_sym(&mut self, c: char) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Sym(c) {
            self.next();
            Ok(())
        } else {
            self.err(format!("expected '{c}', found {}", self.peek()))
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            t => self.err(format!("expected {what}, found {t}")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.next();
                Ok(())
            }
            t => self.err(format!("expected '{kw}', found {t}")),
        }
    }

    fn int(&mut self) -> Result<i64, SyntaxError> {
        let neg = self.eat_sym('-');
        match self.peek().clone() {
            Tok::Int(n) => {
                let v: i64 = match i64::try_from(&n) {
                    Ok(v) => v,
                    Err(_) => return self.err("integer out of range"),
                };
                self.next();
                Ok(if neg { -v } else { v })
            }
            t => self.err(format!("expected an integer, found {t}")),
        }
    }

    fn end_of_statement(&mut self) -> Result<(), SyntaxError> {
        match self.peek() {
            Tok::Newline | Tok::Eof => {
                self.next();
                Ok(())
            }
            t => self.err(format!("unexpected {t} after the command")),
        }
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut e = self.term()?;
        loop {
            if self.eat_sym('+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat_sym('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    // term := unary (('*' | '/') unary)*
    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut e = self.unary()?;
        loop {
            if self.eat_sym('*') {
                e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
            } else if self.eat_sym('/') {
                e = Expr::Div(Box::new(e), Box::new(self.unary()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        if self.eat_sym('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat_sym('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat_sym('^') {
            let e = self.int()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(Expr::Int(n))
            }
            Tok::Ident(s) => {
                self.next();
                if s == "y" && *self.peek() == Tok::Sym('(') {
                    self.next();
                    self.keyword("x")?;
                    self.expect_sym(')')?;
                    return Ok(Expr::Y);
                }
                Ok(Expr::Var(s, pos))
            }
            Tok::Sym('(') => {
                self.next();
                let first = self.expr()?;
                if self.eat_sym(',') {
                    let mut items = vec![first];
                    loop {
                        items.push(self.expr()?);
                        if !self.eat_sym(',') {
                            break;
                        }
                    }
                    self.expect_sym(')')?;
                    return Ok(Expr::Tuple(items));
                }
                self.expect_sym(')')?;
                Ok(first)
            }
            t => self.err(format!("expected an expression, found {t}")),
        }
    }

    fn field(&mut self) -> Result<FieldSpec, SyntaxError> {
        self.keyword("Q")?;
        self.field_suffix()
    }

    /// Optional `(name)` or `(name: poly)` after `Q`; leaves a following
    /// `(x)` alone.
    fn field_suffix(&mut self) -> Result<FieldSpec, SyntaxError> {
        if *self.peek() != Tok::Sym('(') {
            return Ok(FieldSpec::Rationals);
        }
        let ahead = |k: usize| self.toks.get(self.i + k).map(|t| &t.0);
        if let (Some(Tok::Ident(s)), Some(Tok::Sym(')'))) = (ahead(1), ahead(2)) {
            if s == "x" {
                return Ok(FieldSpec::Rationals);
            }
        }
        self.next();
        let name = self.ident("a field generator")?;
        let spec = if self.eat_sym(':') {
            FieldSpec::Defined(name, self.expr()?)
        } else {
            FieldSpec::Named(name)
        };
        self.expect_sym(')')?;
        Ok(spec)
    }

    fn function_marker(&mut self, open: char, close: char) -> Result<(), SyntaxError> {
        self.expect_sym(open)?;
        self.keyword("x")?;
        self.expect_sym(close)
    }

    fn name_list(&mut self) -> Result<Vec<String>, SyntaxError> {
        let mut names = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            names.push(self.ident("a name")?);
        }
        Ok(names)
    }

    fn statement(&mut self) -> Result<Command, SyntaxError> {
        let start = self.pos();
        let word = self.ident("a command")?;
        let cmd = match word.as_str() {
            "ring" => {
                let kind_pos = self.pos();
                let kind = self.ident("a ring kind (shift, qdil, poly, cyclic)")?;
                match kind.as_str() {
                    "shift" => {
                        let f = self.field()?;
                        self.function_marker('(', ')')?;
                        Command::Ring(RingSpec::Shift(f))
                    }
                    "qdil" => {
                        let f = self.field()?;
                        self.function_marker('(', ')')?;
                        self.keyword("q")?;
                        self.expect_sym('=')?;
                        Command::Ring(RingSpec::QDil(f, self.expr()?))
                    }
                    "poly" => {
                        let f = self.field()?;
                        self.function_marker('[', ']')?;
                        Command::Ring(RingSpec::Poly(f))
                    }
                    "cyclic" => {
                        let f = self.field()?;
                        let n = self.int()?;
                        if n < 1 {
                            return self.err("the number of factors must be positive");
                        }
                        Command::Ring(RingSpec::Cyclic(f, n as usize))
                    }
                    other => {
                        return Err(SyntaxError { pos: kind_pos, msg: format!("unknown ring kind '{other}'") })
                    }
                }
            }
            "module" => {
                let name = self.ident("a module name")?;
                self.expect_sym('=')?;
                self.expect_sym('[')?;
                let mut rows = Vec::new();
                loop {
                    self.expect_sym('[')?;
                    let mut row = vec![self.expr()?];
                    while self.eat_sym(',') {
                        row.push(self.expr()?);
                    }
                    self.expect_sym(']')?;
                    rows.push(row);
                    if !self.eat_sym(',') {
                        break;
                    }
                }
                self.expect_sym(']')?;
                Command::Module { name, rows }
            }
            "eq" => {
                let name = self.ident("an equation name")?;
                self.expect_sym(':')?;
                self.keyword("y")?;
                self.expect_sym('(')?;
                let arg = self.expr()?;
                self.expect_sym(')')?;
                self.expect_sym('=')?;
                Command::Eq { name, arg, rhs: self.expr()? }
            }
            "constants" => Command::Constants,
            "fractions" => Command::Fractions,
            "simple" => Command::Simple,
            "solve" => Command::Solve(self.ident("a module name")?),
            "group" => Command::Group(self.ident("a module name")?),
            "pv" => Command::Pv(self.ident("a module name")?),
            "verify" => Command::Verify(self.ident("a module name")?),
            "split" => Command::Split(self.ident("a module name")?),
            "print" => Command::Print(self.ident("a module name")?),
            "descend" => {
                let name = self.ident("a module name")?;
                self.keyword("chi")?;
                self.expect_sym('=')?;
                self.expect_sym('(')?;
                let mut chi = vec![self.int()?];
                while self.eat_sym(',') {
                    chi.push(self.int()?);
                }
                self.expect_sym(')')?;
                Command::Descend { name, chi }
            }
            "universal" => {
                let names = self.name_list()?;
                if names.is_empty() {
                    return self.err("universal needs at least one module");
                }
                Command::Universal(names)
            }
            "iso" => {
                let a = self.ident("a module name")?;
                let b = self.ident("a module name")?;
                Command::Iso(a, b)
            }
            "basechange" => Command::Basechange(self.field()?),
            other => return Err(SyntaxError { pos: start, msg: format!("unknown command '{other}'") }),
        };
        Ok(cmd)
    }
}

/// Parse a whole program into statements.
pub fn parse_program(text: &str) -> Result<Vec<Statement>, SyntaxError> {
    let lines: Vec<&str> = text.lines().collect();
    let mut p = Parser { toks: lex(text)?, i: 0 };
    let mut out = Vec::new();
    loop {
        match p.peek() {
            Tok::Eof => break,
            Tok::Newline => {
                p.next();
                continue;
            }
            _ => {}
        }
        let pos = p.pos();
        let command = p.statement()?;
        p.end_of_statement()?;
        let source = lines.get(pos.line - 1).map(|l| l.split('#').next().unwrap_or("").trim().to_string()).unwrap_or_default();
        out.push(Statement { command, pos, source });
    }
    Ok(out)
}

/// Parse a single element expression (used for round trips).
pub fn parse_expr(text: &str) -> Result<Expr, SyntaxError> {
    let mut p = Parser { toks: lex(text)?, i: 0 };
    let e = p.expr()?;
    while *p.peek() == Tok::Newline {
        p.next();
    }
    if *p.peek() != Tok::Eof {
        return p.err(format!("unexpected {}", p.peek()));
    }
    Ok(e)
}
