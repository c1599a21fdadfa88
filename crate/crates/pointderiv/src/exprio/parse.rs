//! Recursive-descent parser for series programs.
//!
//! ```text
//! program   := { decl | defn } ;
//! decl      := ("const" | "var") ident { ident } ";" ;
//! defn      := ident "=" expr ";" ;
//! expr      := [ "-" ] term { ("+" | "-") term } ;
//! term      := factor { factor } ;                 juxtaposition is the product
//! factor    := primary { "^" natural } ;
//! primary   := rational | ident | "(" expr ")" | "inv1m" "(" expr ")"
//!            | "O" "(" "deg" ">" natural ")" ;
//! rational  := integer [ "/" positive-integer ] ;
//! ```
//!
//! Identifiers in expressions are declared symbols or earlier definitions.
//! `O(deg>n)` is the zero series known up to degree `n`, which is how the
//! printer writes truncation. `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use pointderiv_core::alphabet::RESERVED_PREFIX;
use pointderiv_core::{geometric_inverse, Coeff, Context, Series, SymbolKind};

/// Truncation order used for `inv1m` unless the caller picks one.
pub const DEFAULT_ORDER: u32 = 6;

const KEYWORDS: [&str; 3] = ["const", "var", "inv1m"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UndeclaredIdentifier(String),
    ReservedIdentifier(String),
    Redeclaration(String),
    /// The expression is well formed but the algebra rejected it.
    Algebra(pointderiv_core::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::UndeclaredIdentifier(name) => write!(f, "undeclared identifier `{name}`"),
            ParseErrorKind::ReservedIdentifier(name) => {
                write!(f, "`{name}` is in the reserved `{RESERVED_PREFIX}` namespace")
            }
            ParseErrorKind::Redeclaration(name) => write!(f, "`{name}` is already declared or defined"),
            ParseErrorKind::Algebra(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ParseError {}

/// A parsed program: the final alphabet and the definitions in source order.
#[derive(Debug, Clone)]
pub struct Program {
    context: Arc<Context>,
    definitions: Vec<(String, Series)>,
}

impl Program {
    pub fn context(&self) -> &Arc<Context> {
        &self.context
    }

    pub fn get(&self, name: &str) -> Option<&Series> {
        self.definitions
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
    }

    pub fn definitions(&self) -> impl Iterator<Item = (&str, &Series)> {
        self.definitions.iter().map(|(n, s)| (n.as_str(), s))
    }
}

pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    parse_program_with_order(text, DEFAULT_ORDER)
}

/// Parses with `order` as the truncation for `inv1m`.
pub fn parse_program_with_order(text: &str, order: u32) -> Result<Program, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        ctx: Arc::new(Context::new()),
        defs: BTreeMap::new(),
        order: Vec::new(),
        inv_order: order,
    };
    parser.program()?;
    let ctx = parser.ctx;
    let mut definitions = Vec::new();
    for name in parser.order {
        let series = parser.defs.remove(&name).expect("recorded definition");
        let series = series.rehome(&ctx).expect("contexts only grow");
        definitions.push((name, series));
    }
    Ok(Program {
        context: ctx,
        definitions,
    })
}

/// Source text declaring `ctx`, in order, and defining each series. Parsing it
/// gives back the same context and series.
pub fn format_program(ctx: &Context, definitions: &[(&str, &Series)]) -> String {
    let mut out = String::new();
    let mut run: Option<SymbolKind> = None;
    for (_, symbol) in ctx.symbols() {
        if run != Some(symbol.kind()) {
            if run.is_some() {
                out.push_str(";\n");
            }
            out.push_str(match symbol.kind() {
                SymbolKind::Constant => "const",
                SymbolKind::Variable => "var",
            });
            run = Some(symbol.kind());
        }
        out.push(' ');
        out.push_str(symbol.name());
    }
    if run.is_some() {
        out.push_str(";\n");
    }
    for (name, series) in definitions {
        out.push_str(&format!("{name} = {series};\n"));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(BigInt),
    Semi,
    Eq,
    Plus,
    Minus,
    LParen,
    RParen,
    Caret,
    Slash,
    Gt,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(n) => write!(f, "`{n}`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Gt => f.write_str("`>`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while chars.peek().is_some_and(|&c| c.is_ascii_alphanumeric() || c == '_') {
                s.push(bump(&mut chars).unwrap());
            }
            if s.starts_with('_') {
                return Err(ParseError {
                    kind: ParseErrorKind::ReservedIdentifier(s),
                    line: l,
                    column: col,
                });
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                s.push(bump(&mut chars).unwrap());
            }
            Tok::Number(BigInt::from_str(&s).expect("digits"))
        } else {
            bump(&mut chars);
            match c {
                ';' => Tok::Semi,
                '=' => Tok::Eq,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '^' => Tok::Caret,
                '/' => Tok::Slash,
                '>' => Tok::Gt,
                other => {
                    return Err(ParseError {
                        kind: ParseErrorKind::Syntax(format!("unexpected character `{other}`")),
                        line: l,
                        column: col,
                    })
                }
            }
        };
        tokens.push(Token {
            tok,
            line: l,
            column: col,
        });
    }
    tokens.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    ctx: Arc<Context>,
    defs: BTreeMap<String, Series>,
    order: Vec<String>,
    inv_order: u32,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, token: &Token, kind: ParseErrorKind) -> ParseError {
        ParseError {
            kind,
            line: token.line,
            column: token.column,
        }
    }

    fn error_here(&self, kind: ParseErrorKind) -> ParseError {
        self.error_at(&self.tokens[self.pos], kind)
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        if *self.peek() == tok {
            Ok(self.next())
        } else {
            let found = self.peek().clone();
            Err(self.error_here(ParseErrorKind::Syntax(format!("expected {tok}, found {found}"))))
        }
    }

    fn algebra<T>(&self, at: &Token, r: pointderiv_core::Result<T>) -> Result<T, ParseError> {
        r.map_err(|e| self.error_at(at, ParseErrorKind::Algebra(e)))
    }

    fn program(&mut self) -> Result<(), ParseError> {
        loop {
            let token = self.next();
            match &token.tok {
                Tok::Eof => return Ok(()),
                Tok::Ident(kw) if kw == "const" || kw == "var" => {
                    let kind = if kw == "const" { SymbolKind::Constant } else { SymbolKind::Variable };
                    self.declaration(kind)?;
                }
                Tok::Ident(name) => {
                    let name = name.clone();
                    self.check_fresh(&token, &name)?;
                    self.expect(Tok::Eq)?;
                    let series = self.expr()?;
                    self.expect(Tok::Semi)?;
                    self.defs.insert(name.clone(), series);
                    self.order.push(name);
                }
                other => {
                    let msg = format!("expected a declaration or definition, found {other}");
                    return Err(self.error_at(&token, ParseErrorKind::Syntax(msg)));
                }
            }
        }
    }

    fn check_fresh(&self, at: &Token, name: &str) -> Result<(), ParseError> {
        if KEYWORDS.contains(&name) {
            return Err(self.error_at(at, ParseErrorKind::Syntax(format!("`{name}` is a keyword"))));
        }
        if self.ctx.lookup(name).is_some() || self.defs.contains_key(name) {
            return Err(self.error_at(at, ParseErrorKind::Redeclaration(name.into())));
        }
        Ok(())
    }

    fn declaration(&mut self, kind: SymbolKind) -> Result<(), ParseError> {
        let mut count = 0;
        loop {
            let token = self.next();
            match &token.tok {
                Tok::Ident(name) => {
                    let name = name.clone();
                    self.check_fresh(&token, &name)?;
                    let extended = self.ctx.extend(&name, kind).map(|(ctx, _)| ctx);
                    self.ctx = self.algebra(&token, extended)?;
                    count += 1;
                }
                Tok::Semi if count > 0 => return Ok(()),
                other => {
                    let msg = format!("expected a symbol name, found {other}");
                    return Err(self.error_at(&token, ParseErrorKind::Syntax(msg)));
                }
            }
        }
    }

    fn expr(&mut self) -> Result<Series, ParseError> {
        let start = self.tokens[self.pos].clone();
        let mut acc = if *self.peek() == Tok::Minus {
            self.next();
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            let op = match self.peek() {
                Tok::Plus | Tok::Minus => self.next(),
                _ => return Ok(acc),
            };
            let rhs = self.term()?;
            let r = if op.tok == Tok::Plus { acc.add(&rhs) } else { acc.sub(&rhs) };
            acc = self.algebra(&start, r)?;
        }
    }

    fn starts_factor(&self) -> bool {
        match self.peek() {
            Tok::Number(_) | Tok::LParen => true,
            Tok::Ident(s) => s != "const" && s != "var",
            _ => false,
        }
    }

    fn term(&mut self) -> Result<Series, ParseError> {
        let start = self.tokens[self.pos].clone();
        let mut acc = self.factor()?;
        while self.starts_factor() {
            let rhs = self.factor()?;
            let r = acc.mul(&rhs);
            acc = self.algebra(&start, r)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Series, ParseError> {
        let start = self.tokens[self.pos].clone();
        let mut base = self.primary()?;
        while *self.peek() == Tok::Caret {
            self.next();
            let k = self.natural()?;
            let r = base.pow(k);
            base = self.algebra(&start, r)?;
        }
        Ok(base)
    }

    fn natural(&mut self) -> Result<u32, ParseError> {
        let token = self.next();
        match &token.tok {
            Tok::Number(n) => u32::try_from(n)
                .map_err(|_| self.error_at(&token, ParseErrorKind::Syntax(format!("`{n}` is too large")))),
            other => {
                let msg = format!("expected a natural number, found {other}");
                Err(self.error_at(&token, ParseErrorKind::Syntax(msg)))
            }
        }
    }

    fn primary(&mut self) -> Result<Series, ParseError> {
        let token = self.next();
        match token.tok.clone() {
            Tok::Number(num) => {
                let mut value = Coeff::from_integer(num);
                if *self.peek() == Tok::Slash {
                    self.next();
                    let den_token = self.next();
                    match &den_token.tok {
                        Tok::Number(d) if !d.is_zero() => value /= Coeff::from_integer(d.clone()),
                        other => {
                            let msg = format!("expected a positive denominator, found {other}");
                            return Err(self.error_at(&den_token, ParseErrorKind::Syntax(msg)));
                        }
                    }
                }
                Ok(Series::scalar(&self.ctx, value))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) if name == "inv1m" => {
                self.expect(Tok::LParen)?;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                let r = geometric_inverse(&inner, self.inv_order);
                self.algebra(&token, r)
            }
            Tok::Ident(name)
                if name == "O"
                    && *self.peek() == Tok::LParen
                    && *self.peek_at(1) == Tok::Ident("deg".into())
                    && *self.peek_at(2) == Tok::Gt =>
            {
                self.next();
                self.next();
                self.next();
                let n = self.natural()?;
                self.expect(Tok::RParen)?;
                Ok(Series::zero(&self.ctx).truncate(n))
            }
            Tok::Ident(name) => {
                if let Some(id) = self.ctx.lookup(&name) {
                    let r = Series::letter(&self.ctx, id);
                    self.algebra(&token, r)
                } else if let Some(s) = self.defs.get(&name) {
                    Ok(s.clone())
                } else if KEYWORDS.contains(&name.as_str()) {
                    Err(self.error_at(&token, ParseErrorKind::Syntax(format!("unexpected keyword `{name}`"))))
                } else {
                    Err(self.error_at(&token, ParseErrorKind::UndeclaredIdentifier(name)))
                }
            }
            other => {
                let msg = format!("expected an expression, found {other}");
                Err(self.error_at(&token, ParseErrorKind::Syntax(msg)))
            }
        }
    }
}
