//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' int)*
//! int     := '-'? digits | '(' '-'? digits ')'
//! primary := number | 'x'k | generator | '{' number (',' number)* '}'
//!          | fname '(' expr ')' | 'pow' '(' expr ',' number ')' | '(' expr ')'
//! fname   := exp | log | sin | cos | tan | sqrt | recip
//! ```
//!
//! A `-` immediately followed by a number that is not raised to a power is read
//! as a negative literal. Generator names and `{..}` literals denote constants of
//! the algebra passed to [`parse_with_algebra`].

use super::Expr;
use crate::error::{Error, Result};
use crate::weil_algebra::{Algebra, PrimitiveFn, WeilElement};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, String),
    Ident(String),
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let t = lx.next()?;
            let done = t.0 == Tok::End;
            out.push(t);
            if done {
                return Ok(out);
            }
        }
    }

    fn peek_byte(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn next(&mut self) -> Result<(Tok, usize)> {
        while self.peek_byte().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(b) = self.peek_byte() else {
            return Ok((Tok::End, start));
        };
        if b.is_ascii_digit() || b == b'.' {
            return self.number(start);
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while self
                .peek_byte()
                .is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_')
            {
                self.pos += 1;
            }
            return Ok((Tok::Ident(self.src[start..self.pos].to_string()), start));
        }
        if b"+-*/^(),{}".contains(&b) {
            self.pos += 1;
            return Ok((Tok::Op(b as char), start));
        }
        let ch = self.src[start..].chars().next().unwrap_or('?');
        Err(Error::ParseError {
            position: start,
            message: format!("unexpected character `{ch}`"),
        })
    }

    fn number(&mut self, start: usize) -> Result<(Tok, usize)> {
        let digits = |lx: &mut Self| {
            let s = lx.pos;
            while lx.peek_byte().is_some_and(|b| b.is_ascii_digit()) {
                lx.pos += 1;
            }
            lx.pos - s
        };
        let mut n = digits(self);
        if self.peek_byte() == Some(b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            return Err(Error::ParseError {
                position: start,
                message: "malformed number".into(),
            });
        }
        if matches!(self.peek_byte(), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek_byte(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
            }
        }
        let text = &self.src[start..self.pos];
        let value: f64 = text.parse().map_err(|_| Error::ParseError {
            position: start,
            message: format!("malformed number `{text}`"),
        })?;
        Ok((Tok::Num(value, text.to_string()), start))
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    n: usize,
    algebra: Option<&'a Algebra>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let message = match self.peek() {
            Tok::End => format!("{} (at end of input)", message.into()),
            _ => message.into(),
        };
        Err(Error::ParseError {
            position: self.pos(),
            message,
        })
    }

    fn expect(&mut self, op: char) -> Result<()> {
        if *self.peek() == Tok::Op(op) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{op}`"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Op('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Op('/') => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() != Tok::Op('-') {
            return self.power();
        }
        self.bump();
        if let Tok::Num(v, _) = *self.peek() {
            if *self.peek2() != Tok::Op('^') {
                self.bump();
                return Ok(Expr::ConstR(-v));
            }
        }
        Ok(Expr::Neg(Box::new(self.unary()?)))
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.primary()?;
        while *self.peek() == Tok::Op('^') {
            self.bump();
            let k = self.integer()?;
            base = Expr::Pow(Box::new(base), k);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i32> {
        let parenthesized = *self.peek() == Tok::Op('(');
        if parenthesized {
            self.bump();
        }
        let negative = *self.peek() == Tok::Op('-');
        if negative {
            self.bump();
        }
        let k = match self.peek().clone() {
            Tok::Num(_, text) if text.bytes().all(|b| b.is_ascii_digit()) => {
                let k: i32 = match text.parse() {
                    Ok(k) => k,
                    Err(_) => return self.error("exponent out of range"),
                };
                self.bump();
                if negative {
                    -k
                } else {
                    k
                }
            }
            _ => return self.error("exponent after `^` must be an integer literal; use pow(e, p) for real powers"),
        };
        if parenthesized {
            self.expect(')')?;
        }
        Ok(k)
    }

    fn signed_number(&mut self) -> Result<f64> {
        let negative = *self.peek() == Tok::Op('-');
        if negative {
            self.bump();
        }
        match *self.peek() {
            Tok::Num(v, _) => {
                self.bump();
                Ok(if negative { -v } else { v })
            }
            _ => self.error("expected a number"),
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        let start = self.pos();
        match self.peek().clone() {
            Tok::Num(v, _) => {
                self.bump();
                Ok(Expr::ConstR(v))
            }
            Tok::Op('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Op('{') => {
                self.bump();
                let Some(alg) = self.algebra else {
                    return Err(Error::ParseError {
                        position: start,
                        message: "algebra literal requires an algebra context".into(),
                    });
                };
                let mut coeffs = vec![self.signed_number()?];
                while *self.peek() == Tok::Op(',') {
                    self.bump();
                    coeffs.push(self.signed_number()?);
                }
                self.expect('}')?;
                let dim = alg.dim();
                let got = coeffs.len();
                WeilElement::new(alg, coeffs)
                    .map(Expr::ConstA)
                    .map_err(|_| Error::ParseError {
                        position: start,
                        message: format!("algebra literal has {got} coefficients, algebra has dimension {dim}"),
                    })
            }
            Tok::Ident(name) => {
                self.bump();
                self.identifier(name, start)
            }
            Tok::End => self.error("unexpected end of input"),
            Tok::Op(c) => self.error(format!("unexpected `{c}`")),
        }
    }

    fn identifier(&mut self, name: String, start: usize) -> Result<Expr> {
        if *self.peek() == Tok::Op('(') {
            if name == "pow" {
                self.bump();
                let arg = self.expr()?;
                self.expect(',')?;
                let p = self.signed_number()?;
                self.expect(')')?;
                return Ok(Expr::apply(PrimitiveFn::Pow(p), arg));
            }
            if let Some(f) = PrimitiveFn::unary_from_name(&name) {
                self.bump();
                let arg = self.expr()?;
                self.expect(')')?;
                return Ok(Expr::apply(f, arg));
            }
            return Err(Error::UnknownSymbol {
                symbol: name,
                position: start,
            });
        }
        if let Some(k) = name.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
            if name[1..].bytes().all(|b| b.is_ascii_digit()) && (1..=self.n).contains(&k) {
                return Ok(Expr::Var(k - 1));
            }
        }
        if let Some(alg) = self.algebra {
            if let Some(g) = WeilElement::generator(alg, &name) {
                return Ok(Expr::ConstA(g));
            }
            if alg.generators().contains(&name) {
                // generator killed by the ideal
                return Ok(Expr::ConstA(WeilElement::zero(alg)));
            }
        }
        Err(Error::UnknownSymbol {
            symbol: name,
            position: start,
        })
    }
}

fn run(text: &str, n: usize, algebra: Option<&Algebra>) -> Result<Expr> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        n,
        algebra,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.error("unexpected trailing input");
    }
    Ok(e)
}

/// Parses a real expression in the chart variables `x1..xn`.
pub fn parse(text: &str, n: usize) -> Result<Expr> {
    run(text, n, None)
}

/// Parses an expression that may contain constants of `algebra`, written either as
/// generator names (`eps`) or coefficient literals (`{1, 0.5}`).
pub fn parse_with_algebra(text: &str, n: usize, algebra: &Algebra) -> Result<Expr> {
    run(text, n, Some(algebra))
}
