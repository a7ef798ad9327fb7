//! Free graded Lie algebra on a generator schedule, in the Lyndon basis.
//!
//! A basis element is a Lyndon word `w` read through its standard
//! factorization `w = uv ↦ [P_u, P_v]`. Its image `P_w` in the tensor algebra
//! is `w` plus lexicographically larger words of the same letter content, so
//! any Lie polynomial is recovered from its expansion by repeatedly peeling
//! off the smallest word.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expr_io::BracketExpr;
use crate::linalg::Rational;
use crate::lyndon::{is_lyndon, lyndon_words, standard_factorization};
use crate::schedule::{GeneratorSchedule, Word};
use crate::tensor_hopf::{add_term, canonical_order, commutator_terms, same_schedule, TensorElement, Terms};

/// A Lyndon word together with its grading data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HallBasisElement {
    pub word: Word,
    pub samelson_degree: u32,
}

impl HallBasisElement {
    pub fn new(schedule: &GeneratorSchedule, word: Word) -> Result<Self> {
        if let Some(&bad) = word.iter().find(|&&i| !schedule.contains(i)) {
            return Err(Error::UnknownGenerator(format!("x{bad}")));
        }
        if !is_lyndon(&word) {
            return Err(Error::NotALieElement);
        }
        Ok(Self {
            samelson_degree: schedule.word_degree(&word),
            word,
        })
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_generator(&self) -> bool {
        self.word.len() == 1
    }

    /// Left and right factors of the standard bracketing.
    pub fn factors(&self) -> Option<(Word, Word)> {
        standard_factorization(&self.word).map(|(u, v)| (Word::from(u), Word::from(v)))
    }
}

impl Ord for HallBasisElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.samelson_degree, self.word.len(), &self.word).cmp(&(
            other.samelson_degree,
            other.word.len(),
            &other.word,
        ))
    }
}

impl PartialOrd for HallBasisElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Basis of the given Samelson degree, in canonical order (length, then word).
pub fn lyndon_basis(schedule: &GeneratorSchedule, samelson_degree: u32) -> Result<Vec<HallBasisElement>> {
    let mut basis: Vec<HallBasisElement> = lyndon_words(schedule, samelson_degree)?
        .into_iter()
        .map(|word| HallBasisElement {
            word,
            samelson_degree,
        })
        .collect();
    basis.sort();
    Ok(basis)
}

pub fn rank(schedule: &GeneratorSchedule, samelson_degree: u32) -> Result<usize> {
    Ok(lyndon_words(schedule, samelson_degree)?.len())
}

/// An element of the free Lie algebra; keys are Lyndon words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieElement {
    schedule: Arc<GeneratorSchedule>,
    terms: Terms,
}

impl LieElement {
    pub fn zero(schedule: &Arc<GeneratorSchedule>) -> Self {
        Self {
            schedule: Arc::clone(schedule),
            terms: Terms::new(),
        }
    }

    /// The generator `x_i`.
    pub fn generator(schedule: &Arc<GeneratorSchedule>, i: usize) -> Result<Self> {
        let i = schedule
            .check_index(i)
            .map_err(|_| Error::UnknownGenerator(format!("x{i}")))?;
        Ok(Self::basis(schedule, Word::letter(i)))
    }

    fn basis(schedule: &Arc<GeneratorSchedule>, word: Word) -> Self {
        Self {
            schedule: Arc::clone(schedule),
            terms: Terms::from([(word, Rational::one())]),
        }
    }

    /// The basis element with the given Lyndon word.
    pub fn from_basis(schedule: &Arc<GeneratorSchedule>, element: &HallBasisElement) -> Result<Self> {
        Self::from_terms(schedule, [(element.word.clone(), Rational::one())])
    }

    pub fn from_terms(
        schedule: &Arc<GeneratorSchedule>,
        terms: impl IntoIterator<Item = (Word, Rational)>,
    ) -> Result<Self> {
        let mut out = Terms::new();
        for (w, c) in terms {
            HallBasisElement::new(schedule, w.clone())?;
            add_term(&mut out, w, c);
        }
        Ok(Self {
            schedule: Arc::clone(schedule),
            terms: out,
        })
    }

    pub(crate) fn from_raw(schedule: &Arc<GeneratorSchedule>, terms: Terms) -> Self {
        Self {
            schedule: Arc::clone(schedule),
            terms,
        }
    }

    pub fn schedule(&self) -> &Arc<GeneratorSchedule> {
        &self.schedule
    }

    pub(crate) fn raw_terms(&self) -> &Terms {
        &self.terms
    }

    /// Terms in canonical basis order.
    pub fn terms(&self) -> Vec<(HallBasisElement, &Rational)> {
        canonical_order(&self.schedule, self.terms.iter())
            .into_iter()
            .map(|(w, c)| {
                (
                    HallBasisElement {
                        samelson_degree: self.schedule.word_degree(w),
                        word: w.clone(),
                    },
                    c,
                )
            })
            .collect()
    }

    pub fn coefficient(&self, word: &[u32]) -> Rational {
        self.terms
            .get(&Word::from(word))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common Samelson degree of all terms; `None` for zero or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|w| self.schedule.word_degree(w));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_schedule(&self.schedule, &other.schedule)?;
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            add_term(&mut terms, w.clone(), c.clone());
        }
        Ok(Self::from_raw(&self.schedule, terms))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.schedule);
        }
        Self::from_raw(
            &self.schedule,
            self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        )
    }

    /// Re-expresses this element over another schedule with the same leading
    /// generators (e.g. a truncation or extension).
    pub fn rebase(&self, schedule: &Arc<GeneratorSchedule>) -> Result<Self> {
        for w in self.terms.keys() {
            for &i in w.iter() {
                if !schedule.contains(i) || schedule.generators()[i as usize - 1] != self.schedule.generators()[i as usize - 1] {
                    return Err(Error::MixedSchedules);
                }
            }
        }
        Ok(Self::from_raw(schedule, self.terms.clone()))
    }
}

/// Expansion of a basis element in the tensor algebra.
fn expand_word(schedule: &GeneratorSchedule, w: &[u32], memo: &mut HashMap<Word, Terms>) -> Terms {
    if let Some(t) = memo.get(w) {
        return t.clone();
    }
    let t = match standard_factorization(w) {
        None => Terms::from([(Word::from(w), Rational::one())]),
        Some((u, v)) => {
            let tu = expand_word(schedule, u, memo);
            let tv = expand_word(schedule, v, memo);
            commutator_terms(schedule, &tu, &tv)
        }
    };
    memo.insert(Word::from(w), t.clone());
    t
}

fn embed_terms(schedule: &GeneratorSchedule, terms: &Terms, memo: &mut HashMap<Word, Terms>) -> Terms {
    let mut out = Terms::new();
    for (w, c) in terms {
        for (v, x) in expand_word(schedule, w, memo) {
            add_term(&mut out, v, x * c);
        }
    }
    out
}

/// `x_i ↦ b_i`, brackets to graded commutators.
pub fn embed_assoc(a: &LieElement) -> TensorElement {
    let mut memo = HashMap::new();
    TensorElement::from_raw(&a.schedule, embed_terms(&a.schedule, &a.terms, &mut memo))
}

fn straighten(schedule: &GeneratorSchedule, mut u: Terms, memo: &mut HashMap<Word, Terms>) -> Result<Terms> {
    let mut out = Terms::new();
    while let Some((w, c)) = u.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
        if !is_lyndon(&w) {
            return Err(Error::NotALieElement);
        }
        for (v, x) in expand_word(schedule, &w, memo) {
            add_term(&mut u, v, -(x * &c));
        }
        debug_assert!(!u.contains_key(&w));
        out.insert(w, c);
    }
    Ok(out)
}

/// Inverse of [`embed_assoc`] on its image, by leading-word elimination.
pub fn lie_from_assoc(u: &TensorElement) -> Result<LieElement> {
    let mut memo = HashMap::new();
    let terms = straighten(u.schedule(), u.raw_terms().clone(), &mut memo)?;
    Ok(LieElement::from_raw(u.schedule(), terms))
}

/// The graded bracket, returned in Lyndon normal form.
pub fn bracket(a: &LieElement, b: &LieElement) -> Result<LieElement> {
    same_schedule(&a.schedule, &b.schedule)?;
    let s = &a.schedule;
    let mut memo = HashMap::new();
    let ta = embed_terms(s, &a.terms, &mut memo);
    let tb = embed_terms(s, &b.terms, &mut memo);
    let t = commutator_terms(s, &ta, &tb);
    let terms = straighten(s, t, &mut memo).expect("commutator of Lie elements is a Lie element");
    Ok(LieElement::from_raw(s, terms))
}

fn expr_to_tensor(expr: &BracketExpr, schedule: &GeneratorSchedule) -> Result<Terms> {
    Ok(match expr {
        BracketExpr::Generator(name) => {
            Terms::from([(Word::letter(schedule.resolve(name)?), Rational::one())])
        }
        BracketExpr::Bracket(l, r) => {
            let tl = expr_to_tensor(l, schedule)?;
            let tr = expr_to_tensor(r, schedule)?;
            commutator_terms(schedule, &tl, &tr)
        }
        BracketExpr::Sum(items) => {
            let mut out = Terms::new();
            for e in items {
                for (w, c) in expr_to_tensor(e, schedule)? {
                    add_term(&mut out, w, c);
                }
            }
            out
        }
        BracketExpr::Scale(c, e) => expr_to_tensor(e, schedule)?
            .into_iter()
            .map(|(w, x)| (w, x * c))
            .filter(|(_, x)| !x.is_zero())
            .collect(),
        BracketExpr::Scalar(c) if c.is_zero() => Terms::new(),
        BracketExpr::Scalar(_) | BracketExpr::Product(_) => return Err(Error::NotALieExpression),
    })
}

/// Normal form of a bracket expression: expand in the tensor algebra, then
/// straighten back into the Lyndon basis.
pub fn reduce(expr: &BracketExpr, schedule: &Arc<GeneratorSchedule>) -> Result<LieElement> {
    let t = expr_to_tensor(expr, schedule)?;
    let mut memo = HashMap::new();
    let terms = straighten(schedule, t, &mut memo)?;
    Ok(LieElement::from_raw(schedule, terms))
}
