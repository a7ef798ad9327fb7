//! Canonical printing. Terms follow the canonical basis order (degree, then
//! length, then word), so generators precede brackets of the same degree.

use num_traits::{One, Signed};

use crate::graded_lie::LieElement;
use crate::linalg::Rational;
use crate::lyndon::standard_factorization;
use crate::schedule::GeneratorSchedule;
use crate::tensor_hopf::{SuspendedElement, TensorElement};

/// `Whitehead` prints `[a,b]`, `Samelson` prints `<a,b>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Notation {
    #[default]
    Whitehead,
    Samelson,
}

pub fn format_rational(c: &Rational) -> String {
    c.to_string()
}

/// Standard bracketing of a Lyndon word.
pub fn format_basis(schedule: &GeneratorSchedule, word: &[u32], notation: Notation) -> String {
    match standard_factorization(word) {
        None => schedule.name(word[0]).to_string(),
        Some((u, v)) => {
            let (open, close) = match notation {
                Notation::Whitehead => ('[', ']'),
                Notation::Samelson => ('<', '>'),
            };
            format!(
                "{open}{},{}{close}",
                format_basis(schedule, u, notation),
                format_basis(schedule, v, notation)
            )
        }
    }
}

fn join_terms<'a>(terms: impl Iterator<Item = (String, &'a Rational)>, unit: &str) -> String {
    let mut out = String::new();
    for (i, (text, c)) in terms.enumerate() {
        let negative = c.is_negative();
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mag = c.abs();
        if text == unit {
            out.push_str(&format_rational(&mag));
        } else if mag.is_one() {
            out.push_str(&text);
        } else {
            out.push_str(&format!("{}*{}", format_rational(&mag), text));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn format_lie(elem: &LieElement, notation: Notation) -> String {
    let s = elem.schedule();
    join_terms(
        elem.terms()
            .into_iter()
            .map(|(b, c)| (format_basis(s, &b.word, notation), c)),
        "",
    )
}

/// Words print as `b1.b2`, the unit as a bare coefficient.
pub fn format_tensor(elem: &TensorElement) -> String {
    join_terms(
        elem.terms().into_iter().map(|(w, c)| {
            let text = if w.is_empty() {
                "1".to_string()
            } else {
                w.iter().map(|i| format!("b{i}")).collect::<Vec<_>>().join(".")
            };
            (text, c)
        }),
        "1",
    )
}

/// Sphere classes print as `beta<i>`.
pub fn format_suspended(elem: &SuspendedElement) -> String {
    join_terms(
        elem.terms().iter().map(|(i, c)| (format!("beta{i}"), c)),
        "",
    )
}
