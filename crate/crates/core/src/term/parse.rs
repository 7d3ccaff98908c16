//! Parser for the term input language.
//!
//! Grammar (whitespace insensitive, `#` comments to end of line):
//!
//! ```text
//! term      := "sum" varlist ":" product
//! varlist   := ident ("," ident)*            # summation variables; "n" reserved
//! product   := atom (("*" | "/") atom)*
//! atom      := const "^" expo | factorial
//!            | "binom" "(" form "," form ")" ["^" int]
//! factorial := "(" form ")" "!" ["^" int] | ident "!" ["^" int]
//! form      := ["+" | "-"] fterm (("+" | "-") fterm)*
//! fterm     := int ["*" ident] | ident
//! const     := rational literal, e.g. "3/2", "-1"
//! expo      := int | "n" | summation variable
//! ```
//!
//! `X!^e` is sugar for `|e|` repeated factors of sign `sgn(e)`;
//! `binom(B, D)` desugars to `B! / (D! (B-D)!)`.  A constant raised to `n`
//! multiplies `C0`, one raised to a summation variable multiplies that
//! variable's `C_i`; a constant raised to a literal integer has no slot in
//! the term model and is accepted only when its value is 1.  `1 / ...` is
//! the idiomatic way to start a reciprocal-only product.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use super::{BalancedTerm, LinearForm, Sign, TermError};
use crate::exact::rational::{Int, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownVariable(String),
    /// `/` inside a linear form: only integer coefficients are allowed.
    NonIntegerCoefficient,
    /// A constant base (or a `0^...` atom) that is zero.
    ZeroConstant,
    /// A standalone constant factor with value other than 1.
    ConstantFactor,
    DuplicateVariable(String),
    ReservedVariable(String),
    /// The product contains no factorial factors at all.
    EmptyTerm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.col)?;
        match &self.kind {
            ParseErrorKind::Syntax(msg) => write!(f, "{msg}"),
            ParseErrorKind::UnknownVariable(name) => write!(f, "unknown variable `{name}`"),
            ParseErrorKind::NonIntegerCoefficient => {
                write!(f, "non-integer coefficient in linear form")
            }
            ParseErrorKind::ZeroConstant => write!(f, "constant base must be nonzero"),
            ParseErrorKind::ConstantFactor => {
                write!(f, "standalone constant factor must equal 1")
            }
            ParseErrorKind::DuplicateVariable(name) => {
                write!(f, "duplicate summation variable `{name}`")
            }
            ParseErrorKind::ReservedVariable(name) => {
                write!(f, "`{name}` cannot be a summation variable")
            }
            ParseErrorKind::EmptyTerm => write!(f, "term has no factorial factors"),
        }
    }
}

impl core::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Bang,
    Colon,
    Plus,
    Minus,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(s) => format!("`{s}`"),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

struct Scanner {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Scanner {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> char {
        let c = self.chars[self.pos];
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut s = Scanner {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        col: 1,
    };
    while let Some(c) = s.peek() {
        let (line, col) = (s.line, s.col);
        if c.is_whitespace() {
            s.bump();
            continue;
        }
        if c == '#' {
            while s.peek().is_some_and(|c| c != '\n') {
                s.bump();
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut digits = String::new();
            while s.peek().is_some_and(|c| c.is_ascii_digit()) {
                digits.push(s.bump());
            }
            out.push(Token {
                tok: Tok::Int(digits),
                line,
                col,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut name = String::new();
            while s.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
                name.push(s.bump());
            }
            out.push(Token {
                tok: Tok::Ident(name),
                line,
                col,
            });
            continue;
        }
        let tok = match c {
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '!' => Tok::Bang,
            ':' => Tok::Colon,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            other => {
                return Err(ParseError {
                    line,
                    col,
                    kind: ParseErrorKind::Syntax(format!("unexpected character `{other}`")),
                })
            }
        };
        s.bump();
        out.push(Token { tok, line, col });
    }
    out.push(Token {
        tok: Tok::Eof,
        line: s.line,
        col: s.col,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    vars: Vec<String>,
    c0: Rat,
    c: Vec<Rat>,
    factors: Vec<(LinearForm, Sign)>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek2(&self) -> &Tok {
        let i = (self.pos + 1).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, kind: ParseErrorKind) -> ParseError {
        let t = self.peek();
        ParseError {
            line: t.line,
            col: t.col,
            kind,
        }
    }

    fn syntax_here(&self, expected: &str) -> ParseError {
        let t = self.peek();
        ParseError {
            line: t.line,
            col: t.col,
            kind: ParseErrorKind::Syntax(format!(
                "expected {expected}, found {}",
                t.tok.describe()
            )),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.next())
        } else {
            Err(self.syntax_here(expected))
        }
    }

    fn expect_ident(&mut self, expected: &str) -> Result<(String, usize, usize), ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(name) => {
                self.next();
                Ok((name, t.line, t.col))
            }
            _ => Err(self.syntax_here(expected)),
        }
    }

    /// `int` token to i64.
    fn parse_uint(&mut self) -> Result<i64, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(digits) => {
                let value: i64 = digits.parse().map_err(|_| ParseError {
                    line: t.line,
                    col: t.col,
                    kind: ParseErrorKind::Syntax("integer literal too large".to_string()),
                })?;
                self.next();
                Ok(value)
            }
            _ => Err(self.syntax_here("an integer")),
        }
    }

    /// `["+"|"-"] int`.
    fn parse_signed_int(&mut self) -> Result<i64, ParseError> {
        let sign = match self.peek().tok {
            Tok::Minus => {
                self.next();
                -1
            }
            Tok::Plus => {
                self.next();
                1
            }
            _ => 1,
        };
        Ok(sign * self.parse_uint()?)
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// An integer linear form in `n` and the summation variables.
    fn parse_form(&mut self) -> Result<LinearForm, ParseError> {
        let mut form = LinearForm::zero(self.vars.len());
        let mut sign = match self.peek().tok {
            Tok::Minus => {
                self.next();
                -1i64
            }
            Tok::Plus => {
                self.next();
                1
            }
            _ => 1,
        };
        loop {
            let t = self.peek().clone();
            match t.tok {
                Tok::Int(_) => {
                    let value = self.parse_uint()?;
                    if self.peek().tok == Tok::Star {
                        self.next();
                        let (name, line, col) = self.expect_ident("a variable after `*`")?;
                        self.add_var_coeff(&mut form, &name, sign * value, line, col)?;
                    } else {
                        form.constant = form
                            .constant
                            .checked_add(sign * value)
                            .ok_or_else(|| self.err_here(ParseErrorKind::Syntax(
                                "integer overflow in linear form".to_string(),
                            )))?;
                    }
                }
                Tok::Ident(name) => {
                    self.next();
                    self.add_var_coeff(&mut form, &name, sign, t.line, t.col)?;
                }
                _ => return Err(self.syntax_here("an integer or variable")),
            }
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    sign = 1;
                }
                Tok::Minus => {
                    self.next();
                    sign = -1;
                }
                Tok::Slash => return Err(self.err_here(ParseErrorKind::NonIntegerCoefficient)),
                _ => return Ok(form),
            }
        }
    }

    fn add_var_coeff(
        &self,
        form: &mut LinearForm,
        name: &str,
        delta: i64,
        line: usize,
        col: usize,
    ) -> Result<(), ParseError> {
        let slot = if name == "n" {
            &mut form.coeff_n
        } else if let Some(i) = self.var_index(name) {
            &mut form.coeff_k[i]
        } else {
            return Err(ParseError {
                line,
                col,
                kind: ParseErrorKind::UnknownVariable(name.to_string()),
            });
        };
        *slot = slot.checked_add(delta).ok_or(ParseError {
            line,
            col,
            kind: ParseErrorKind::Syntax("integer overflow in linear form".to_string()),
        })?;
        Ok(())
    }

    /// Push `form!^expo`, folding in the ambient inversion.
    fn push_factorial(&mut self, form: LinearForm, expo: i64, inverted: bool) {
        let e = if inverted { -expo } else { expo };
        let sign = if e >= 0 { Sign::Plus } else { Sign::Minus };
        for _ in 0..e.unsigned_abs() {
            self.factors.push((form.clone(), sign));
        }
    }

    /// Optional `"^" int` suffix, defaulting to 1.
    fn parse_int_expo(&mut self) -> Result<i64, ParseError> {
        if self.peek().tok == Tok::Caret {
            self.next();
            self.parse_signed_int()
        } else {
            Ok(1)
        }
    }

    fn parse_atom(&mut self, inverted: bool) -> Result<(), ParseError> {
        let t = self.peek().clone();
        match t.tok {
            // Rational literal, possibly negative: const "^" expo.
            Tok::Int(_) | Tok::Minus => self.parse_const_atom(inverted),
            Tok::LParen => {
                self.next();
                let form = self.parse_form()?;
                self.expect(Tok::RParen, "`)`")?;
                self.expect(Tok::Bang, "`!`")?;
                let expo = self.parse_int_expo()?;
                self.push_factorial(form, expo, inverted);
                Ok(())
            }
            Tok::Ident(name) if name == "binom" => {
                self.next();
                self.expect(Tok::LParen, "`(` after `binom`")?;
                let top = self.parse_form()?;
                self.expect(Tok::Comma, "`,`")?;
                let bottom = self.parse_form()?;
                self.expect(Tok::RParen, "`)`")?;
                let expo = self.parse_int_expo()?;
                let rest = top.sub(&bottom);
                let e = if inverted { -expo } else { expo };
                let (s, flip) = if e >= 0 {
                    (Sign::Plus, Sign::Minus)
                } else {
                    (Sign::Minus, Sign::Plus)
                };
                for _ in 0..e.unsigned_abs() {
                    self.factors.push((top.clone(), s));
                    self.factors.push((bottom.clone(), flip));
                    self.factors.push((rest.clone(), flip));
                }
                Ok(())
            }
            Tok::Ident(_) => {
                let (name, line, col) = self.expect_ident("a factor")?;
                let mut form = LinearForm::zero(self.vars.len());
                self.add_var_coeff(&mut form, &name, 1, line, col)?;
                self.expect(Tok::Bang, "`!`")?;
                let expo = self.parse_int_expo()?;
                self.push_factorial(form, expo, inverted);
                Ok(())
            }
            _ => Err(self.syntax_here("a factor")),
        }
    }

    /// `const "^" expo` where expo is an integer, `n`, or a summation
    /// variable; the bare-constant degenerate case must equal 1.
    fn parse_const_atom(&mut self, inverted: bool) -> Result<(), ParseError> {
        let start = self.peek().clone();
        let negative = if start.tok == Tok::Minus {
            self.next();
            true
        } else {
            false
        };
        let numer = self.parse_big_uint()?;
        // Greedy: `INT / INT` is a rational literal, not a product `/`.
        let denom = if self.peek().tok == Tok::Slash && matches!(self.peek2(), Tok::Int(_)) {
            self.next();
            let d = self.parse_big_uint()?;
            if d.is_zero() {
                return Err(ParseError {
                    line: start.line,
                    col: start.col,
                    kind: ParseErrorKind::ZeroConstant,
                });
            }
            d
        } else {
            Int::one()
        };
        let mut base = Rat::new(numer, denom);
        if negative {
            base = -base;
        }
        if base.is_zero() {
            return Err(ParseError {
                line: start.line,
                col: start.col,
                kind: ParseErrorKind::ZeroConstant,
            });
        }
        if inverted {
            base = base.recip();
        }
        if self.peek().tok != Tok::Caret {
            // Bare constant: only the trivial factor 1 has a home.
            if !base.is_one() {
                return Err(ParseError {
                    line: start.line,
                    col: start.col,
                    kind: ParseErrorKind::ConstantFactor,
                });
            }
            return Ok(());
        }
        self.next();
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(name) => {
                self.next();
                if name == "n" {
                    self.c0 *= &base;
                } else if let Some(i) = self.var_index(&name) {
                    self.c[i] *= &base;
                } else {
                    return Err(ParseError {
                        line: t.line,
                        col: t.col,
                        kind: ParseErrorKind::UnknownVariable(name),
                    });
                }
                Ok(())
            }
            Tok::Int(_) | Tok::Plus | Tok::Minus => {
                let e = self.parse_signed_int()?;
                let value = crate::exact::rational::pow_rat(&base, e);
                if !value.is_one() {
                    return Err(ParseError {
                        line: start.line,
                        col: start.col,
                        kind: ParseErrorKind::ConstantFactor,
                    });
                }
                Ok(())
            }
            _ => Err(self.syntax_here("an exponent")),
        }
    }

    fn parse_big_uint(&mut self) -> Result<Int, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(digits) => {
                self.next();
                Ok(digits.parse().expect("digit string"))
            }
            _ => Err(self.syntax_here("an integer")),
        }
    }

    fn parse_product(&mut self) -> Result<(), ParseError> {
        self.parse_atom(false)?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.next();
                    self.parse_atom(false)?;
                }
                Tok::Slash => {
                    self.next();
                    self.parse_atom(true)?;
                }
                _ => return Ok(()),
            }
        }
    }
}

/// Parse a term from its textual form.
pub fn parse_term(text: &str) -> Result<BalancedTerm, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        vars: Vec::new(),
        c0: Rat::one(),
        c: Vec::new(),
        factors: Vec::new(),
    };
    let (kw, line, col) = p.expect_ident("`sum`")?;
    if kw != "sum" {
        return Err(ParseError {
            line,
            col,
            kind: ParseErrorKind::Syntax(format!("expected `sum`, found `{kw}`")),
        });
    }
    loop {
        let (name, line, col) = p.expect_ident("a summation variable")?;
        if name == "n" || name == "sum" || name == "binom" {
            return Err(ParseError {
                line,
                col,
                kind: ParseErrorKind::ReservedVariable(name),
            });
        }
        if p.vars.contains(&name) {
            return Err(ParseError {
                line,
                col,
                kind: ParseErrorKind::DuplicateVariable(name),
            });
        }
        p.vars.push(name);
        if p.peek().tok == Tok::Comma {
            p.next();
        } else {
            break;
        }
    }
    p.expect(Tok::Colon, "`:`")?;
    p.c = alloc::vec![Rat::one(); p.vars.len()];
    p.parse_product()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.syntax_here("`*`, `/`, or end of input"));
    }
    let err_pos = (p.peek().line, p.peek().col);
    BalancedTerm::new(p.c0, p.c, p.factors, p.vars).map_err(|e| ParseError {
        line: err_pos.0,
        col: err_pos.1,
        kind: match e {
            TermError::EmptyFactorList => ParseErrorKind::EmptyTerm,
            TermError::ZeroConstant => ParseErrorKind::ZeroConstant,
            TermError::ArityMismatch => {
                ParseErrorKind::Syntax("internal arity mismatch".to_string())
            }
        },
    })
}
