//! Recursive-descent parser.
//!
//! ```text
//! Expr    := ['-'] Term (('+' | '-') Term)*
//! Term    := Rational ['*' Product] | Product
//! Product := Factor ('.' Factor)*
//! Factor  := Gen | '[' Expr ',' Expr ']' | '<' Expr ',' Expr '>' | '(' Expr ')'
//! Gen     := ('x' | 'b' | 'xi' | 'chi') Digits
//! Rational:= Int ['/' PosInt]
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::BracketExpr;
use crate::linalg::Rational;

const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnbalancedBracket,
    UnknownToken,
    EmptyInput,
    ZeroDenominator,
    UnexpectedToken,
    MixedAliases,
    NestingTooDeep,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::UnbalancedBracket => "unbalanced bracket",
            ParseErrorKind::UnknownToken => "unknown token",
            ParseErrorKind::EmptyInput => "empty input",
            ParseErrorKind::ZeroDenominator => "zero denominator",
            ParseErrorKind::UnexpectedToken => "unexpected token",
            ParseErrorKind::MixedAliases => "generator aliases are mixed",
            ParseErrorKind::NestingTooDeep => "expression nested too deeply",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the input.
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = text[start..i].parse().expect("ascii digits");
            out.push((Tok::Int(n), start));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                i += 1;
            }
            let prefix = &text[start..i];
            let digits_start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if !matches!(prefix, "x" | "b" | "xi" | "chi") || digits_start == i {
                return Err(ParseError {
                    kind: ParseErrorKind::UnknownToken,
                    position: start,
                });
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
        } else if b"+-*/.,[]<>()".contains(&c) {
            out.push((Tok::Sym(c as char), i));
            i += 1;
        } else {
            return Err(ParseError {
                kind: ParseErrorKind::UnknownToken,
                position: i,
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            kind,
            position: self.offset(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Expects `c` as part of a bracket pair; running out of input or meeting
    /// the wrong closer is a bracket imbalance.
    fn expect_closing(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            return Ok(());
        }
        match self.peek() {
            None | Some(Tok::Sym(']' | ')' | '>' | ',')) => Err(self.err(ParseErrorKind::UnbalancedBracket)),
            _ => Err(self.err(ParseErrorKind::UnexpectedToken)),
        }
    }

    fn expr(&mut self) -> Result<BracketExpr, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.err(ParseErrorKind::NestingTooDeep));
        }
        let mut terms = Vec::new();
        let negate_first = self.eat('-');
        let t = self.term()?;
        terms.push(if negate_first { negate(t) } else { t });
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                let t = self.term()?;
                terms.push(negate(t));
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            BracketExpr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<BracketExpr, ParseError> {
        if let Some(Tok::Int(_)) = self.peek() {
            let c = self.rational()?;
            if self.eat('*') {
                let p = self.product()?;
                return Ok(if c.is_zero() {
                    BracketExpr::Scalar(c)
                } else {
                    BracketExpr::scale(c, p)
                });
            }
            return Ok(BracketExpr::Scalar(c));
        }
        self.product()
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let Some(Tok::Int(n)) = self.peek().cloned() else {
            return Err(self.err(ParseErrorKind::UnexpectedToken));
        };
        self.pos += 1;
        if self.eat('/') {
            let Some(Tok::Int(d)) = self.peek().cloned() else {
                return Err(self.err(ParseErrorKind::UnexpectedToken));
            };
            if d.is_zero() {
                return Err(self.err(ParseErrorKind::ZeroDenominator));
            }
            self.pos += 1;
            Ok(Rational::new(n, d))
        } else {
            Ok(Rational::new(n, BigInt::one()))
        }
    }

    fn product(&mut self) -> Result<BracketExpr, ParseError> {
        let mut factors = vec![self.factor()?];
        while self.eat('.') {
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            BracketExpr::Product(factors)
        })
    }

    fn factor(&mut self) -> Result<BracketExpr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(BracketExpr::Generator(name))
            }
            Some(Tok::Sym(open @ ('[' | '<'))) => {
                self.pos += 1;
                let close = if open == '[' { ']' } else { '>' };
                let l = self.expr()?;
                self.expect_closing(',')?;
                let r = self.expr()?;
                self.expect_closing(close)?;
                Ok(BracketExpr::bracket(l, r))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_closing(')')?;
                Ok(e)
            }
            None => Err(self.err(ParseErrorKind::UnexpectedToken)),
            Some(Tok::Sym(']' | ')' | '>')) => Err(self.err(ParseErrorKind::UnbalancedBracket)),
            Some(_) => Err(self.err(ParseErrorKind::UnexpectedToken)),
        }
    }
}

fn negate(e: BracketExpr) -> BracketExpr {
    match e {
        BracketExpr::Scale(c, inner) => BracketExpr::Scale(-c, inner),
        BracketExpr::Scalar(c) => BracketExpr::Scalar(-c),
        other => BracketExpr::scale(-Rational::one(), other),
    }
}

fn alias_of(name: &str) -> &str {
    name.trim_end_matches(|c: char| c.is_ascii_digit())
}

/// Parses an expression; whitespace is ignored.
pub fn parse_expr(text: &str) -> Result<BracketExpr, ParseError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(ParseError {
            kind: ParseErrorKind::EmptyInput,
            position: 0,
        });
    }
    let mut alias: Option<&str> = None;
    for (t, p) in &toks {
        if let Tok::Ident(n) = t {
            let a = alias_of(n);
            match alias {
                None => alias = Some(a),
                Some(prev) if prev != a => {
                    return Err(ParseError {
                        kind: ParseErrorKind::MixedAliases,
                        position: *p,
                    })
                }
                _ => {}
            }
        }
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        depth: 0,
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(match p.peek() {
            Some(Tok::Sym(']' | ')' | '>')) => p.err(ParseErrorKind::UnbalancedBracket),
            _ => p.err(ParseErrorKind::UnexpectedToken),
        });
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};

    fn g(n: &str) -> BracketExpr {
        BracketExpr::gen(n)
    }

    fn kind(text: &str) -> ParseErrorKind {
        parse_expr(text).unwrap_err().kind
    }

    #[test]
    fn nested_bracket() {
        assert_eq!(
            parse_expr("[x1,[x1,x2]]").unwrap(),
            BracketExpr::bracket(g("x1"), BracketExpr::bracket(g("x1"), g("x2")))
        );
    }

    #[test]
    fn scaled_sum() {
        assert_eq!(
            parse_expr("3/2*[x1,x2] + x3").unwrap(),
            BracketExpr::Sum(vec![
                BracketExpr::scale(ratio(3, 2), BracketExpr::bracket(g("x1"), g("x2"))),
                g("x3"),
            ])
        );
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(parse_expr(" [ x1 ,\tx2 ] ").unwrap(), parse_expr("[x1,x2]").unwrap());
    }

    #[test]
    fn subtraction_and_products() {
        assert_eq!(
            parse_expr("b2 - 1/2*b1.b1").unwrap(),
            BracketExpr::Sum(vec![
                g("b2"),
                BracketExpr::scale(ratio(-1, 2), BracketExpr::Product(vec![g("b1"), g("b1")])),
            ])
        );
        assert_eq!(
            parse_expr("-x1").unwrap(),
            BracketExpr::scale(rat(-1), g("x1"))
        );
        assert_eq!(parse_expr("0").unwrap(), BracketExpr::Scalar(rat(0)));
    }

    #[test]
    fn angle_brackets_are_brackets() {
        assert_eq!(parse_expr("<x1,x2>").unwrap(), parse_expr("[x1,x2]").unwrap());
    }

    #[test]
    fn error_kinds() {
        assert_eq!(kind("[x1"), ParseErrorKind::UnbalancedBracket);
        assert_eq!(kind("[x1,x2"), ParseErrorKind::UnbalancedBracket);
        assert_eq!(kind("x1]"), ParseErrorKind::UnbalancedBracket);
        assert_eq!(kind("(x1"), ParseErrorKind::UnbalancedBracket);
        assert_eq!(kind(""), ParseErrorKind::EmptyInput);
        assert_eq!(kind("   "), ParseErrorKind::EmptyInput);
        assert_eq!(kind("1/0*x1"), ParseErrorKind::ZeroDenominator);
        assert_eq!(kind("y1"), ParseErrorKind::UnknownToken);
        assert_eq!(kind("x"), ParseErrorKind::UnknownToken);
        assert_eq!(kind("x1 & x2"), ParseErrorKind::UnknownToken);
        assert_eq!(kind("x1 x2"), ParseErrorKind::UnexpectedToken);
        assert_eq!(kind("x1 +"), ParseErrorKind::UnexpectedToken);
        assert_eq!(kind("[x1,b2]"), ParseErrorKind::MixedAliases);
    }

    #[test]
    fn error_positions() {
        assert_eq!(parse_expr("[x1").unwrap_err().position, 3);
        assert_eq!(parse_expr("x1 + y2").unwrap_err().position, 5);
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let text = "[".repeat(10_000);
        assert_eq!(kind(&text), ParseErrorKind::NestingTooDeep);
    }
}
