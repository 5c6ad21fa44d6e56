//! Text front end for equations and point fields.
//!
//! Grammar:
//!
//! ```text
//! equation := expr "=" expr | expr
//! expr     := term (("+" | "-") term)*
//! term     := factor ("*" factor)*
//! factor   := base ("^" nonneg-int)?
//! base     := "x" | "y" | "y1" | "y2" | "y'" | "y''" | rational
//!           | "(" expr ")" | "-" factor
//! rational := int ("/" posint)?
//! ```
//!
//! Multiplication is always explicit. The Unicode primes `′` and `″` are
//! accepted as spellings of `'` and `''`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::exprcore::{Poly, Rat, VarId};
use crate::jet::PointField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("equation involves neither y1 nor y2")]
    Order,
    #[error("equation is constant")]
    Constant,
    #[error("field component `{component}` must not involve {var}")]
    FieldVariable { component: String, var: VarId },
}

impl ParseError {
    /// Syntax errors are input errors; order/constant errors describe a
    /// degenerate equation.
    pub fn is_degenerate(&self) -> bool {
        matches!(self, ParseError::Order | ParseError::Constant)
    }
}

fn syntax(pos: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        pos,
        msg: msg.into(),
    }
}

/// A parsed equation `f = 0` of first or second order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdeInput {
    pub f: Poly,
    pub order: u8,
}

impl OdeInput {
    /// Classifies `f` by order; rejects constants and jet-free polynomials.
    pub fn new(f: Poly) -> Result<Self, ParseError> {
        if f.is_constant() {
            return Err(ParseError::Constant);
        }
        let order = if f.contains(VarId::Y2) {
            2
        } else if f.contains(VarId::Y1) {
            1
        } else {
            return Err(ParseError::Order);
        };
        Ok(OdeInput { f, order })
    }

    /// Highest jet variable present: `y2` for order 2, `y1` for order 1.
    pub fn top_var(&self) -> VarId {
        if self.order == 2 {
            VarId::Y2
        } else {
            VarId::Y1
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(VarId),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eq,
    Comma,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        i += 1;
        let tok = match c {
            c if c.is_whitespace() => continue,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '=' => Tok::Eq,
            ',' => Tok::Comma,
            '0'..='9' => {
                let mut s = String::from(c);
                while let Some(&(_, d)) = chars.get(i).filter(|(_, d)| d.is_ascii_digit()) {
                    s.push(d);
                    i += 1;
                }
                Tok::Int(s.parse().expect("digit run"))
            }
            'x' => Tok::Var(VarId::X),
            'y' => {
                let mut primes = 0;
                let mut index = None;
                while let Some(&(_, d)) = chars.get(i) {
                    match d {
                        '\'' | '′' => primes += 1,
                        '″' => primes += 2,
                        '1' | '2' if index.is_none() && primes == 0 => {
                            index = Some(d.to_digit(10).unwrap())
                        }
                        _ => break,
                    }
                    i += 1;
                }
                if chars.get(i).is_some_and(|(_, d)| d.is_alphanumeric()) {
                    return Err(syntax(chars[i].0, "unknown identifier"));
                }
                let order = match (index, primes) {
                    (Some(n), 0) => n,
                    (None, p) => p,
                    _ => return Err(syntax(pos, "mixed derivative notation")),
                };
                match order {
                    0 => Tok::Var(VarId::Y),
                    1 => Tok::Var(VarId::Y1),
                    2 => Tok::Var(VarId::Y2),
                    _ => return Err(syntax(pos, "derivatives above order 2 are not supported")),
                }
            }
            c if c.is_alphabetic() => {
                return Err(syntax(
                    pos,
                    format!("unknown identifier starting with '{c}'"),
                ))
            }
            c => return Err(syntax(pos, format!("unexpected character '{c}'"))),
        };
        if let Tok::Var(VarId::X) = tok {
            if chars.get(i).is_some_and(|(_, d)| d.is_alphanumeric()) {
                return Err(syntax(chars[i].0, "unknown identifier"));
            }
        }
        out.push((pos, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            at: 0,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc += &self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc -= &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while self.eat(&Tok::Star) {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let base = self.base()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let pos = self.pos();
        let e = match self.toks.get(self.at) {
            Some((_, Tok::Int(n))) => n
                .to_u32()
                .ok_or_else(|| syntax(pos, "exponent too large"))?,
            _ => return Err(syntax(pos, "expected a nonnegative integer exponent")),
        };
        self.at += 1;
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * &base;
        }
        Ok(out)
    }

    fn base(&mut self) -> Result<Poly, ParseError> {
        let pos = self.pos();
        let Some((_, tok)) = self.toks.get(self.at).cloned() else {
            return Err(syntax(pos, "unexpected end of input"));
        };
        self.at += 1;
        match tok {
            Tok::Var(v) => Ok(Poly::var(v)),
            Tok::Int(n) => {
                if !self.eat(&Tok::Slash) {
                    return Ok(Poly::constant(Rat::from_integer(n)));
                }
                let dpos = self.pos();
                match self.toks.get(self.at) {
                    Some((_, Tok::Int(d))) if !d.is_zero() => {
                        let d = d.clone();
                        self.at += 1;
                        Ok(Poly::constant(Rat::new(n, d)))
                    }
                    Some((_, Tok::Int(_))) => Err(syntax(dpos, "zero denominator")),
                    _ => Err(syntax(dpos, "expected an integer denominator")),
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Minus => Ok(-self.factor()?),
            _ => Err(syntax(pos, "expected a variable, number, '(' or '-'")),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(syntax(self.pos(), "unexpected trailing input")),
        }
    }
}

/// Parses a polynomial expression (no `=`).
pub fn parse_poly(text: &str) -> Result<Poly, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parses `lhs = rhs` (or a bare `lhs`, meaning `lhs = 0`) into `f = lhs - rhs`.
pub fn parse_ode(text: &str) -> Result<OdeInput, ParseError> {
    let mut p = Parser::new(text)?;
    let mut f = p.expr()?;
    if p.eat(&Tok::Eq) {
        f -= &p.expr()?;
    }
    p.finish()?;
    OdeInput::new(f)
}

/// Parses `"xi, eta"` with both components polynomials in `x, y`.
pub fn parse_field(text: &str) -> Result<PointField, ParseError> {
    let mut p = Parser::new(text)?;
    let xi = p.expr()?;
    p.expect(&Tok::Comma, "',' between the two components")?;
    let eta = p.expr()?;
    p.finish()?;
    for (name, c) in [("xi", &xi), ("eta", &eta)] {
        if let Some(v) = c
            .vars()
            .into_iter()
            .find(|v| *v == VarId::Y1 || *v == VarId::Y2)
        {
            return Err(ParseError::FieldVariable {
                component: name.to_string(),
                var: v,
            });
        }
    }
    Ok(PointField::new(xi, eta))
}

/// Canonical text of a polynomial; inverse of [`parse_poly`].
pub fn print_canonical(p: &Poly) -> String {
    p.to_string()
}
