//! Text format: parser and canonical serializer.
//!
//! One statement per period, `%` starts a line comment, whitespace is
//! insignificant between tokens:
//!
//! ```text
//! #atoms a, b, c.                  % optional atom declarations
//! h.                               % fact
//! h :- a, not b.                   % basic rule
//! h :- 2 { a, b, not c }.         % constraint rule (count ≥ 2)
//! { h1, h2 } :- a, not b.          % choice rule
//! h :- [ a = 2, not b = 3 ] >= 4.  % weight rule (weighted sum ≥ 4)
//! ```
//!
//! Atom names match `[A-Za-z_][A-Za-z0-9_]*`; `not` is reserved by the
//! grammar and cannot name an atom. Numbers are non-negative — a minus
//! sign where a weight or bound is expected is reported as a
//! negative-weight error, not a syntax error. The `#atoms` header exists
//! so atoms outside any rule (and the atom-table order) survive a
//! round-trip; declaring the same atom twice is an error.
//!
//! [`serialize_program`] emits canonical text — full `#atoms` header,
//! bodies in their normalized order — such that parsing it back yields a
//! structurally identical program.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::program::{AtomId, BuildError, Literal, Program, ProgramBuilder, Rule};

/// What went wrong, independent of position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Token-level or grammar-level violation.
    Syntax,
    /// A weight or bound written with a minus sign.
    NegativeWeight,
    /// The same atom declared twice under `#atoms`.
    DuplicateAtomDecl,
    /// A number too large for 64 bits, or weights whose sum overflows.
    Overflow,
}

/// Parse failure with its position (1-based line and column).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub column: u32,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl ParseError {
    fn new(kind: ParseErrorKind, at: (u32, u32), message: impl Into<String>) -> ParseError {
        ParseError {
            line: at.0,
            column: at.1,
            kind,
            message: message.into(),
        }
    }
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(u64),
    If,       // :-
    Dot,
    Comma,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Eq,
    Ge,       // >=
    Minus,
    AtomsHeader, // #atoms
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Number(n) => format!("'{n}'"),
            Tok::If => "':-'".into(),
            Tok::Dot => "'.'".into(),
            Tok::Comma => "','".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Eq => "'='".into(),
            Tok::Ge => "'>='".into(),
            Tok::Minus => "'-'".into(),
            Tok::AtomsHeader => "'#atoms'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    column: u32,
}

impl<'a> Lexer<'a> {
    fn new(input: &'a str) -> Lexer<'a> {
        Lexer {
            chars: input.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn tokenize(mut self) -> Result<Vec<(Tok, (u32, u32))>, ParseError> {
        let mut out = Vec::new();
        loop {
            // skip whitespace and comments
            while let Some(&c) = self.chars.peek() {
                if c.is_whitespace() {
                    self.bump();
                } else if c == '%' {
                    while let Some(&c) = self.chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                } else {
                    break;
                }
            }
            let at = (self.line, self.column);
            let Some(&c) = self.chars.peek() else {
                out.push((Tok::Eof, at));
                return Ok(out);
            };
            let tok = match c {
                '.' => {
                    self.bump();
                    Tok::Dot
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '{' => {
                    self.bump();
                    Tok::LBrace
                }
                '}' => {
                    self.bump();
                    Tok::RBrace
                }
                '[' => {
                    self.bump();
                    Tok::LBracket
                }
                ']' => {
                    self.bump();
                    Tok::RBracket
                }
                '=' => {
                    self.bump();
                    Tok::Eq
                }
                '-' => {
                    self.bump();
                    Tok::Minus
                }
                ':' => {
                    self.bump();
                    if self.chars.peek() == Some(&'-') {
                        self.bump();
                        Tok::If
                    } else {
                        return Err(ParseError::new(
                            ParseErrorKind::Syntax,
                            at,
                            "expected '-' after ':'",
                        ));
                    }
                }
                '>' => {
                    self.bump();
                    if self.chars.peek() == Some(&'=') {
                        self.bump();
                        Tok::Ge
                    } else {
                        return Err(ParseError::new(
                            ParseErrorKind::Syntax,
                            at,
                            "expected '=' after '>'",
                        ));
                    }
                }
                '#' => {
                    self.bump();
                    let word = self.take_ident();
                    if word == "atoms" {
                        Tok::AtomsHeader
                    } else {
                        return Err(ParseError::new(
                            ParseErrorKind::Syntax,
                            at,
                            format!("unknown directive '#{word}'"),
                        ));
                    }
                }
                c if c.is_ascii_digit() => {
                    let mut value: u64 = 0;
                    while let Some(&d) = self.chars.peek() {
                        if !d.is_ascii_digit() {
                            break;
                        }
                        self.bump();
                        value = value
                            .checked_mul(10)
                            .and_then(|v| v.checked_add(d as u64 - '0' as u64))
                            .ok_or_else(|| {
                                ParseError::new(
                                    ParseErrorKind::Overflow,
                                    at,
                                    "integer literal does not fit in 64 bits",
                                )
                            })?;
                    }
                    Tok::Number(value)
                }
                c if c.is_ascii_alphabetic() || c == '_' => Tok::Ident(self.take_ident()),
                other => {
                    return Err(ParseError::new(
                        ParseErrorKind::Syntax,
                        at,
                        format!("unexpected character '{other}'"),
                    ));
                }
            };
            out.push((tok, at));
        }
    }

    fn take_ident(&mut self) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser {
    tokens: Vec<(Tok, (u32, u32))>,
    pos: usize,
    builder: ProgramBuilder,
    declared: HashSet<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn at(&self) -> (u32, u32) {
        self.tokens[self.pos].1
    }

    fn advance(&mut self) -> Tok {
        let t = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(ParseErrorKind::Syntax, self.at(), message)
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.advance();
            Ok(())
        } else {
            Err(self.syntax(format!(
                "expected {}, found {}",
                want.describe(),
                self.peek().describe()
            )))
        }
    }

    /// An atom name: any identifier except the reserved word `not`.
    fn atom_name(&mut self) -> Result<AtomId, ParseError> {
        match self.peek() {
            Tok::Ident(name) if name == "not" => {
                Err(self.syntax("'not' is reserved and cannot name an atom"))
            }
            Tok::Ident(name) => {
                let name = name.clone();
                self.advance();
                Ok(self.builder.intern(&name))
            }
            other => Err(self.syntax(format!("expected atom name, found {}", other.describe()))),
        }
    }

    /// `a` or `not a`.
    fn literal(&mut self) -> Result<Literal, ParseError> {
        if matches!(self.peek(), Tok::Ident(name) if name == "not") {
            self.advance();
            Ok(Literal::negative(self.atom_name()?))
        } else {
            Ok(Literal::positive(self.atom_name()?))
        }
    }

    /// A non-negative number; a minus sign here is a negative-weight error.
    fn number(&mut self, what: &str) -> Result<u64, ParseError> {
        match self.peek() {
            Tok::Minus => Err(ParseError::new(
                ParseErrorKind::NegativeWeight,
                self.at(),
                format!("{what} must be non-negative"),
            )),
            Tok::Number(n) => {
                let n = *n;
                self.advance();
                Ok(n)
            }
            other => Err(self.syntax(format!("expected {what}, found {}", other.describe()))),
        }
    }

    fn comma_separated<T>(
        &mut self,
        end: &Tok,
        mut item: impl FnMut(&mut Self) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        let mut items = Vec::new();
        if self.peek() == end {
            return Ok(items);
        }
        loop {
            items.push(item(self)?);
            if *self.peek() == Tok::Comma {
                self.advance();
            } else {
                return Ok(items);
            }
        }
    }

    fn atoms_header(&mut self) -> Result<(), ParseError> {
        self.advance(); // #atoms
        loop {
            let at = self.at();
            let name = match self.peek() {
                Tok::Ident(name) if name != "not" => name.clone(),
                _ => return Err(self.syntax("expected atom name in '#atoms' declaration")),
            };
            if !self.declared.insert(name.clone()) {
                return Err(ParseError::new(
                    ParseErrorKind::DuplicateAtomDecl,
                    at,
                    format!("atom '{name}' declared twice"),
                ));
            }
            self.advance();
            self.builder.intern(&name);
            match self.advance() {
                Tok::Comma => continue,
                Tok::Dot => return Ok(()),
                other => {
                    // advance() moved past the offender; report at the
                    // previous token's position
                    let at = self.tokens[self.pos - 1].1;
                    return Err(ParseError::new(
                        ParseErrorKind::Syntax,
                        at,
                        format!("expected ',' or '.', found {}", other.describe()),
                    ));
                }
            }
        }
    }

    /// Plain body: `literal, literal, ...` up to the closing dot.
    fn plain_body(&mut self) -> Result<Vec<Literal>, ParseError> {
        self.comma_separated(&Tok::Dot, |p| p.literal())
    }

    fn choice_rule(&mut self) -> Result<(), ParseError> {
        let at = self.at();
        self.advance(); // {
        let heads = self.comma_separated(&Tok::RBrace, |p| p.atom_name())?;
        self.expect(Tok::RBrace)?;
        let body = if *self.peek() == Tok::If {
            self.advance();
            self.plain_body()?
        } else {
            Vec::new()
        };
        self.expect(Tok::Dot)?;
        self.builder
            .add_choice(heads, body)
            .map_err(|e| build_error(e, at))
    }

    fn headed_rule(&mut self) -> Result<(), ParseError> {
        let head = self.atom_name()?;
        if *self.peek() == Tok::Dot {
            self.advance();
            self.builder.add_basic(head, Vec::new());
            return Ok(());
        }
        self.expect(Tok::If)?;
        let at = self.at();
        match self.peek() {
            // constraint: `bound { literals }`
            Tok::Number(_) | Tok::Minus => {
                let bound = self.number("constraint bound")?;
                self.expect(Tok::LBrace)?;
                let body = self.comma_separated(&Tok::RBrace, |p| p.literal())?;
                self.expect(Tok::RBrace)?;
                self.expect(Tok::Dot)?;
                self.builder.add_constraint(head, body, bound);
                Ok(())
            }
            // weight: `[ lit = w, ... ] >= bound`
            Tok::LBracket => {
                self.advance();
                let body = self.comma_separated(&Tok::RBracket, |p| {
                    let lit = p.literal()?;
                    p.expect(Tok::Eq)?;
                    let w = p.number("weight")?;
                    Ok((lit, w))
                })?;
                self.expect(Tok::RBracket)?;
                self.expect(Tok::Ge)?;
                let bound = self.number("weight bound")?;
                self.expect(Tok::Dot)?;
                self.builder
                    .add_weight(head, body, bound)
                    .map_err(|e| build_error(e, at))
            }
            // basic: plain literals
            _ => {
                let body = self.plain_body()?;
                self.expect(Tok::Dot)?;
                self.builder.add_basic(head, body);
                Ok(())
            }
        }
    }

    fn program(mut self) -> Result<Program, ParseError> {
        loop {
            match self.peek() {
                Tok::Eof => return Ok(self.builder.finish()),
                Tok::AtomsHeader => self.atoms_header()?,
                Tok::LBrace => self.choice_rule()?,
                Tok::Ident(_) => self.headed_rule()?,
                other => {
                    return Err(self.syntax(format!(
                        "expected a rule or '#atoms', found {}",
                        other.describe()
                    )))
                }
            }
        }
    }
}

fn build_error(e: BuildError, at: (u32, u32)) -> ParseError {
    let kind = match e {
        BuildError::EmptyChoice => ParseErrorKind::Syntax,
        BuildError::WeightOverflow => ParseErrorKind::Overflow,
    };
    ParseError::new(kind, at, e.to_string())
}

/// Parse a whole program from text.
pub fn parse_program(input: &str) -> Result<Program, ParseError> {
    let tokens = Lexer::new(input).tokenize()?;
    let parser = Parser {
        tokens,
        pos: 0,
        builder: ProgramBuilder::new(),
        declared: HashSet::new(),
    };
    parser.program()
}

// ---------------------------------------------------------------------------
// Serializer
// ---------------------------------------------------------------------------

/// Canonical text for a program: a full `#atoms` header (when the atom
/// table is nonempty) followed by one line per rule, bodies in their
/// stored normalized order. Parsing the output reproduces the program
/// structurally, atom table order included.
pub fn serialize_program(program: &Program) -> String {
    let mut out = String::new();
    if program.atom_count() > 0 {
        let names: Vec<&str> = program.atoms().map(|a| program.atom_name(a)).collect();
        let _ = writeln!(out, "#atoms {}.", names.join(", "));
    }
    for rule in program.rules() {
        match rule {
            Rule::Basic { head, body } => {
                if body.is_empty() {
                    let _ = writeln!(out, "{}.", program.atom_name(*head));
                } else {
                    let _ = writeln!(
                        out,
                        "{} :- {}.",
                        program.atom_name(*head),
                        body_text(program, body)
                    );
                }
            }
            Rule::Constraint { head, body, bound } => {
                let _ = writeln!(
                    out,
                    "{} :- {bound} {{ {} }}.",
                    program.atom_name(*head),
                    body_text(program, body)
                );
            }
            Rule::Choice { heads, body } => {
                let heads_text = heads
                    .iter()
                    .map(|&h| program.atom_name(h))
                    .collect::<Vec<_>>()
                    .join(", ");
                if body.is_empty() {
                    let _ = writeln!(out, "{{ {heads_text} }}.");
                } else {
                    let _ = writeln!(out, "{{ {heads_text} }} :- {}.", body_text(program, body));
                }
            }
            Rule::Weight { head, body, bound } => {
                let items = body
                    .iter()
                    .map(|&(l, w)| format!("{} = {w}", program.literal_name(l)))
                    .collect::<Vec<_>>()
                    .join(", ");
                let _ = writeln!(
                    out,
                    "{} :- [ {items} ] >= {bound}.",
                    program.atom_name(*head)
                );
            }
        }
    }
    out
}

fn body_text(program: &Program, body: &[Literal]) -> String {
    body.iter()
        .map(|&l| program.literal_name(l))
        .collect::<Vec<_>>()
        .join(", ")
}
