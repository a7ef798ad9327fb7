//! Surface syntax for bracket expressions and tensor elements, plus the
//! `whitealg/1` JSON documents.

mod format;
pub mod json;
mod parse;

pub use format::{format_basis, format_lie, format_rational, format_suspended, format_tensor, Notation};
pub use json::{document_to_json, from_json, from_json_any, to_json, Document, JsonValue, SCHEMA};
pub use parse::{parse_expr, ParseError, ParseErrorKind};

use crate::linalg::Rational;

/// Parsed expression tree. `Product` (written with `.`) and bare scalars only
/// make sense in the tensor algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BracketExpr {
    Generator(String),
    Bracket(Box<BracketExpr>, Box<BracketExpr>),
    Sum(Vec<BracketExpr>),
    Scale(Rational, Box<BracketExpr>),
    Product(Vec<BracketExpr>),
    Scalar(Rational),
}

impl BracketExpr {
    pub fn gen(name: &str) -> Self {
        BracketExpr::Generator(name.to_string())
    }

    pub fn bracket(l: BracketExpr, r: BracketExpr) -> Self {
        BracketExpr::Bracket(Box::new(l), Box::new(r))
    }

    pub fn scale(c: Rational, e: BracketExpr) -> Self {
        BracketExpr::Scale(c, Box::new(e))
    }

    /// Generator names appearing in the expression, left to right.
    pub fn generators(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_generators(&mut out);
        out
    }

    fn collect_generators<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            BracketExpr::Generator(n) => out.push(n),
            BracketExpr::Bracket(l, r) => {
                l.collect_generators(out);
                r.collect_generators(out);
            }
            BracketExpr::Sum(v) | BracketExpr::Product(v) => {
                v.iter().for_each(|e| e.collect_generators(out))
            }
            BracketExpr::Scale(_, e) => e.collect_generators(out),
            BracketExpr::Scalar(_) => {}
        }
    }
}
