//! Text grammar for polynomial input.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*      // '/' only by a nonzero integer constant
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' INTEGER)?
//! atom   := INTEGER | IDENT | '(' expr ')'
//! ```
//!
//! Identifiers match `[A-Za-z][A-Za-z0-9]*`. Implicit multiplication is a
//! syntax error. U+2212 is accepted as a minus sign.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::field::Coeff;
use super::monomial::Monomial;
use super::mpoly::QPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unknown identifier `{name}` at line {line}, column {col}")]
    UnknownIdentifier { name: String, line: usize, col: usize },
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { msg: String, line: usize, col: usize },
    #[error("exponent overflow at line {line}, column {col}")]
    ExponentOverflow { line: usize, col: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, line: l0, col: c0 });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Int(s.parse().unwrap()), line: l0, col: c0 });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Ident(s), line: l0, col: c0 });
            continue;
        }
        return Err(ParseError::Syntax { msg: format!("unexpected character `{c}`"), line: l0, col: c0 });
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax(t: &Token, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { msg: msg.into(), line: t.line, col: t.col }
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<QPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.next();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.next();
                    let rhs = self.unary()?;
                    acc = self.checked_mul(&acc, &rhs)?;
                }
                Tok::Slash => {
                    let slash = self.next();
                    let rhs = self.unary()?;
                    if !rhs.is_constant() || rhs.is_zero() {
                        return Err(Self::syntax(&slash, "division only by a nonzero integer constant"));
                    }
                    acc = acc.scale(&rhs.terms()[0].1.inv());
                }
                Tok::Int(_) | Tok::Ident(_) | Tok::LParen => {
                    return Err(Self::syntax(self.peek(), "implicit multiplication is not allowed; use `*`"));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<QPoly, ParseError> {
        match self.peek().tok {
            Tok::Minus => {
                self.next();
                Ok(-&self.unary()?)
            }
            Tok::Plus => {
                self.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<QPoly, ParseError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.next();
        let t = self.next();
        let e = match &t.tok {
            Tok::Int(n) => n.clone(),
            _ => return Err(Self::syntax(&t, "exponent must be a non-negative integer literal")),
        };
        let e: u32 = e.try_into().map_err(|_| ParseError::ExponentOverflow { line: t.line, col: t.col })?;
        if self.peek().tok == Tok::Caret {
            return Err(Self::syntax(self.peek(), "chained `^` is ambiguous; use parentheses"));
        }
        if e == 0 {
            return Ok(QPoly::from_int(self.nvars(), 1));
        }
        if let Some(d) = base.total_degree() {
            if (d as u64) * (e as u64) > u32::MAX as u64 {
                return Err(ParseError::ExponentOverflow { line: t.line, col: t.col });
            }
        }
        Ok(base.pow(e))
    }

    fn checked_mul(&self, a: &QPoly, b: &QPoly) -> Result<QPoly, ParseError> {
        let da = a.total_degree().unwrap_or(0) as u64;
        let db = b.total_degree().unwrap_or(0) as u64;
        if da + db > u32::MAX as u64 {
            let t = &self.toks[self.pos.saturating_sub(1)];
            return Err(ParseError::ExponentOverflow { line: t.line, col: t.col });
        }
        Ok(a * b)
    }

    fn atom(&mut self) -> Result<QPoly, ParseError> {
        let t = self.next();
        match t.tok.clone() {
            Tok::Int(n) => Ok(QPoly::constant(self.nvars(), BigRational::from_integer(n))),
            Tok::Ident(name) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => Ok(QPoly::monomial(Monomial::var(self.nvars(), i), BigRational::one())),
                None => Err(ParseError::UnknownIdentifier { name, line: t.line, col: t.col }),
            },
            Tok::LParen => {
                let e = self.expr()?;
                let close = self.next();
                if close.tok != Tok::RParen {
                    return Err(Self::syntax(&close, "expected `)`"));
                }
                Ok(e)
            }
            Tok::End => Err(Self::syntax(&t, "unexpected end of input")),
            other => Err(Self::syntax(&t, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses `src` into the canonical expanded polynomial over the named variables.
pub fn parse_poly<S: AsRef<str>>(src: &str, vars: &[S]) -> Result<QPoly, ParseError> {
    let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, vars: &vars };
    if p.peek().tok == Tok::End {
        return Err(Parser::syntax(p.peek(), "empty expression"));
    }
    let out = p.expr()?;
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return Err(Parser::syntax(&t, format!("unexpected trailing token {:?}", t.tok)));
    }
    debug_assert!(out.terms().iter().all(|(_, c)| !Zero::is_zero(c)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::mpoly::q;
    use proptest::prelude::*;

    const XY: [&str; 2] = ["x", "y"];

    #[test]
    fn cusp_has_two_terms_degree_three() {
        let p = parse_poly("y^2 - x^3", &XY).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.total_degree(), Some(3));
    }

    #[test]
    fn expansion_identity() {
        let p = parse_poly("(x+y)^2 - x^2 - 2*x*y", &XY).unwrap();
        assert_eq!(p, parse_poly("y^2", &XY).unwrap());
    }

    #[test]
    fn discriminant_is_homogeneous_quartic() {
        let p = parse_poly("y^2*z^2 - 4*x*z^3 - 4*y^3*w + 18*x*y*z*w - 27*w^2*x^2", &["x", "y", "z", "w"]).unwrap();
        assert_eq!(p.homogeneous_degree(), Some(4));
        assert_eq!(p.len(), 5);
    }

    #[test]
    fn unicode_minus_and_division() {
        let a = parse_poly("y\u{2212}x/2", &XY).unwrap();
        let b = parse_poly("-1/2*x + y", &XY).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.terms()[0].1, BigRational::new((-1).into(), 2.into()));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_poly("x + t", &XY), Err(ParseError::UnknownIdentifier { name: "t".into(), line: 1, col: 5 }));
        assert!(matches!(parse_poly("4x", &XY), Err(ParseError::Syntax { line: 1, col: 2, .. })));
        assert!(matches!(parse_poly("x +\n (y", &XY), Err(ParseError::Syntax { line: 2, .. })));
        assert!(matches!(parse_poly("x^99999999999", &XY), Err(ParseError::ExponentOverflow { .. })));
        assert!(matches!(parse_poly("x^2^3", &XY), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_poly("x/y", &XY), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_poly("", &XY), Err(ParseError::Syntax { .. })));
        assert!(parse_poly("(x^4000000000)*(y^4000000000)*x^400000000", &XY).is_err());
    }

    fn small_poly() -> impl Strategy<Value = QPoly> {
        proptest::collection::vec((0u32..4, 0u32..4, 0u32..3, -20i64..20, 1i64..4), 0..6).prop_map(|ts| {
            QPoly::from_terms(
                3,
                ts.into_iter().map(|(a, b, c, n, d)| {
                    (
                        Monomial::new(
                            [a, b, c].as_slice().iter().copied().collect::<super::super::monomial::Exponents>(),
                        ),
                        BigRational::new(n.into(), d.into()),
                    )
                }),
            )
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(p in small_poly()) {
            let vars = ["a", "b", "c"];
            let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
            let printed = p.fmt_with(&names);
            let back = parse_poly(&printed, &vars).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            for i in 0..3 {
                let lhs = (&a * &b).derivative(i);
                let rhs = &(&a * &b.derivative(i)) + &(&b * &a.derivative(i));
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn euler_identity(a in small_poly(), d in 0u32..4) {
            let h = a.component(d);
            let mut euler = QPoly::zero(3);
            for i in 0..3 {
                euler = &euler + &(&QPoly::x(3, i) * &h.derivative(i));
            }
            prop_assert_eq!(euler, h.scale(&q(d as i64)));
        }
    }
}
