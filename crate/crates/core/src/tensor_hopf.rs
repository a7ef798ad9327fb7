//! The tensor Hopf algebra `T[b_1, b_2, …]` over the rationals.
//!
//! Words in the generator indices form a basis. The product is concatenation
//! and the coproduct is the algebra map determined on generators by the
//! divided-power rule `Δ b_n = Σ_{i+j=n} b_i ⊗ b_j` (with `b_0 = 1`), which is
//! the dual of a polynomial cohomology ring. Schedules whose degrees are not
//! an arithmetic progression from their first degree have primitive
//! generators instead.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expr_io::BracketExpr;
use crate::graded_lie::LieElement;
use crate::linalg::{ratio, sparse_rank, Rational, SparseVec};
use crate::lyndon::standard_factorization;
use crate::schedule::{GeneratorSchedule, Word};

pub(crate) type Terms = BTreeMap<Word, Rational>;
pub(crate) type PairTerms = BTreeMap<(Word, Word), Rational>;

pub(crate) fn add_term<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, c: Rational) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub(crate) fn same_schedule(a: &Arc<GeneratorSchedule>, b: &Arc<GeneratorSchedule>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::MixedSchedules)
    }
}

/// Sorts words by (degree, length, lexicographic).
pub(crate) fn canonical_order<'a, V>(
    schedule: &GeneratorSchedule,
    iter: impl Iterator<Item = (&'a Word, V)>,
) -> Vec<(&'a Word, V)> {
    let mut v: Vec<_> = iter.collect();
    v.sort_by(|(a, _), (b, _)| {
        (schedule.word_degree(a), a.len(), *a).cmp(&(schedule.word_degree(b), b.len(), *b))
    });
    v
}

fn product_terms(schedule: &GeneratorSchedule, u: &Terms, v: &Terms) -> Terms {
    let _ = schedule;
    let mut out = Terms::new();
    for (a, x) in u {
        for (b, y) in v {
            add_term(&mut out, a.concat(b), x * y);
        }
    }
    out
}

/// Bilinear graded commutator `uv - (-1)^{|u||v|} vu`, termwise on degrees.
pub(crate) fn commutator_terms(schedule: &GeneratorSchedule, u: &Terms, v: &Terms) -> Terms {
    let mut out = Terms::new();
    for (a, x) in u {
        let da = schedule.word_degree(a);
        for (b, y) in v {
            let db = schedule.word_degree(b);
            let c = x * y;
            let sign_odd = (da * db) % 2 == 1;
            add_term(&mut out, a.concat(b), c.clone());
            add_term(&mut out, b.concat(a), if sign_odd { c } else { -c });
        }
    }
    out
}

/// The pieces of `Δ b_a` as (left, right) letters, `None` standing for the unit.
fn letter_coproduct(schedule: &GeneratorSchedule, a: u32) -> Vec<(Option<u32>, Option<u32>)> {
    if schedule.has_divided_powers() {
        (0..=a)
            .map(|i| {
                let j = a - i;
                ((i > 0).then_some(i), (j > 0).then_some(j))
            })
            .collect()
    } else {
        vec![(Some(a), None), (None, Some(a))]
    }
}

/// `Δ(w)` for a single word, as an algebra morphism with Koszul signs.
pub fn word_coproduct(schedule: &GeneratorSchedule, word: &[u32]) -> PairTerms {
    let mut acc: PairTerms = BTreeMap::new();
    acc.insert((Word::empty(), Word::empty()), Rational::one());
    for &a in word {
        let pieces = letter_coproduct(schedule, a);
        let mut next = PairTerms::new();
        for ((l, r), c) in &acc {
            let dr = schedule.word_degree(r);
            for (x, y) in &pieces {
                let mut l2 = l.clone();
                let mut r2 = r.clone();
                let mut sign_odd = false;
                if let Some(x) = x {
                    sign_odd = (dr * schedule.degree(*x)) % 2 == 1;
                    l2.0.push(*x);
                }
                if let Some(y) = y {
                    r2.0.push(*y);
                }
                add_term(&mut next, (l2, r2), if sign_odd { -c.clone() } else { c.clone() });
            }
        }
        acc = next;
    }
    acc
}

/// `Δ̃(w)`: the terms of `Δ(w)` with both legs of positive degree.
pub fn word_reduced_coproduct(schedule: &GeneratorSchedule, word: &[u32]) -> PairTerms {
    let mut t = word_coproduct(schedule, word);
    t.retain(|(l, r), _| !l.is_empty() && !r.is_empty());
    t
}

/// An element of the tensor algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorElement {
    schedule: Arc<GeneratorSchedule>,
    terms: Terms,
}

impl TensorElement {
    pub fn zero(schedule: &Arc<GeneratorSchedule>) -> Self {
        Self {
            schedule: Arc::clone(schedule),
            terms: Terms::new(),
        }
    }

    pub fn one(schedule: &Arc<GeneratorSchedule>) -> Self {
        Self::monomial(schedule, Word::empty(), Rational::one()).expect("unit is valid")
    }

    /// The generator `b_i`.
    pub fn generator(schedule: &Arc<GeneratorSchedule>, i: usize) -> Result<Self> {
        let i = schedule
            .check_index(i)
            .map_err(|_| Error::UnknownGenerator(format!("b{i}")))?;
        Self::monomial(schedule, Word::letter(i), Rational::one())
    }

    pub fn monomial(schedule: &Arc<GeneratorSchedule>, word: Word, coeff: Rational) -> Result<Self> {
        Self::from_terms(schedule, [(word, coeff)])
    }

    pub fn from_terms(
        schedule: &Arc<GeneratorSchedule>,
        terms: impl IntoIterator<Item = (Word, Rational)>,
    ) -> Result<Self> {
        let mut out = Terms::new();
        for (w, c) in terms {
            if let Some(&bad) = w.iter().find(|&&i| !schedule.contains(i)) {
                return Err(Error::UnknownGenerator(format!("b{bad}")));
            }
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

    /// Terms in canonical order: degree, then length, then lexicographic.
    pub fn terms(&self) -> Vec<(&Word, &Rational)> {
        canonical_order(&self.schedule, self.terms.iter())
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

    /// `Ok(None)` for zero, `Ok(Some(d))` when every term has degree `d`.
    pub fn homogeneous_degree(&self) -> Result<Option<u32>> {
        let mut degrees = self.terms.keys().map(|w| self.schedule.word_degree(w));
        let Some(first) = degrees.next() else {
            return Ok(None);
        };
        if degrees.all(|d| d == first) {
            Ok(Some(first))
        } else {
            Err(Error::NonHomogeneous)
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        same_schedule(&self.schedule, &other.schedule)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
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
        let terms = self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect();
        Self::from_raw(&self.schedule, terms)
    }

    /// Concatenation product.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::from_raw(
            &self.schedule,
            product_terms(&self.schedule, &self.terms, &other.terms),
        ))
    }

    /// `uv - (-1)^{|u||v|} vu` for homogeneous `u`, `v`.
    pub fn graded_commutator(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.homogeneous_degree()?;
        other.homogeneous_degree()?;
        Ok(Self::from_raw(
            &self.schedule,
            commutator_terms(&self.schedule, &self.terms, &other.terms),
        ))
    }

    pub fn coproduct(&self) -> CoproductValue {
        let mut terms = PairTerms::new();
        for (w, c) in &self.terms {
            for (k, x) in word_coproduct(&self.schedule, w) {
                add_term(&mut terms, k, x * c);
            }
        }
        CoproductValue {
            schedule: Arc::clone(&self.schedule),
            terms,
        }
    }

    /// `Δ̃(u) = Δ(u) - u⊗1 - 1⊗u` on the positive-degree part of `u`.
    pub fn reduced_coproduct(&self) -> CoproductValue {
        let mut terms = PairTerms::new();
        for (w, c) in &self.terms {
            for (k, x) in word_reduced_coproduct(&self.schedule, w) {
                add_term(&mut terms, k, x * c);
            }
        }
        CoproductValue {
            schedule: Arc::clone(&self.schedule),
            terms,
        }
    }

    fn positive_homogeneous(&self) -> Result<()> {
        match self.homogeneous_degree()? {
            Some(0) => Err(Error::NonHomogeneous),
            _ => Ok(()),
        }
    }

    /// `Δ(u) = u⊗1 + 1⊗u`.
    pub fn is_primitive(&self) -> Result<bool> {
        self.positive_homogeneous()?;
        Ok(self.reduced_coproduct().is_zero())
    }

    /// Every word has length at least two.
    pub fn is_decomposable(&self) -> Result<bool> {
        self.positive_homogeneous()?;
        Ok(self.terms.keys().all(|w| w.len() >= 2))
    }

    /// The first Eulerian idempotent `e_1 = log(id)` under convolution:
    /// `e_1(u) = Σ_{k≥1} (-1)^{k-1}/k · m^{(k-1)} Δ̃^{(k-1)}(u)`.
    pub fn primitive_projection(&self) -> Result<Self> {
        let Some(d) = self.homogeneous_degree()? else {
            return Ok(self.clone());
        };
        if d == 0 {
            return Err(Error::NonHomogeneous);
        }
        let mut conv = Convolution::new(&self.schedule);
        let mut out = Terms::new();
        for (w, c) in &self.terms {
            let bound = conv.weight(w);
            for k in 1..=bound {
                let coeff = ratio(if k % 2 == 1 { 1 } else { -1 }, k as i64) * c;
                for (v, x) in conv.power(w, k).iter() {
                    add_term(&mut out, v.clone(), x * &coeff);
                }
            }
        }
        Ok(Self::from_raw(&self.schedule, out))
    }

    /// Projection onto length-one words, shifted to Whitehead grading.
    pub fn homology_suspension(&self) -> Result<SuspendedElement> {
        self.homogeneous_degree()?;
        let terms = self
            .terms
            .iter()
            .filter(|(w, _)| w.len() == 1)
            .map(|(w, c)| (w[0], c.clone()))
            .collect();
        Ok(SuspendedElement {
            schedule: Arc::clone(&self.schedule),
            terms,
        })
    }
}

/// Convolution powers of `J = id - ηε` on words, memoized within one call.
struct Convolution<'a> {
    schedule: &'a GeneratorSchedule,
    reduced: HashMap<Word, PairTerms>,
    powers: HashMap<(Word, usize), Terms>,
}

impl<'a> Convolution<'a> {
    fn new(schedule: &'a GeneratorSchedule) -> Self {
        Self {
            schedule,
            reduced: HashMap::new(),
            powers: HashMap::new(),
        }
    }

    /// Upper bound on the number of nontrivial tensor factors of `w`.
    fn weight(&self, w: &[u32]) -> usize {
        if self.schedule.has_divided_powers() {
            w.iter().map(|&i| i as usize).sum()
        } else {
            w.len()
        }
    }

    fn power(&mut self, w: &Word, k: usize) -> Terms {
        if k == 1 {
            return Terms::from([(w.clone(), Rational::one())]);
        }
        if let Some(t) = self.powers.get(&(w.clone(), k)) {
            return t.clone();
        }
        if !self.reduced.contains_key(w) {
            let r = word_reduced_coproduct(self.schedule, w);
            self.reduced.insert(w.clone(), r);
        }
        let pieces: Vec<_> = self.reduced[w]
            .iter()
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        let mut out = Terms::new();
        for ((l, r), c) in pieces {
            if self.weight(&r) < k - 1 {
                continue;
            }
            for (v, x) in self.power(&r, k - 1) {
                add_term(&mut out, l.concat(&v), x * &c);
            }
        }
        self.powers.insert((w.clone(), k), out.clone());
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoproductValue {
    schedule: Arc<GeneratorSchedule>,
    terms: PairTerms,
}

impl CoproductValue {
    pub fn terms(&self) -> &PairTerms {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, left: &[u32], right: &[u32]) -> Rational {
        self.terms
            .get(&(Word::from(left), Word::from(right)))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `u⊗v` summed into a value, for building expected coproducts.
    pub fn from_pairs(
        schedule: &Arc<GeneratorSchedule>,
        pairs: impl IntoIterator<Item = (Word, Word, Rational)>,
    ) -> Self {
        let mut terms = PairTerms::new();
        for (l, r, c) in pairs {
            add_term(&mut terms, (l, r), c);
        }
        Self {
            schedule: Arc::clone(schedule),
            terms,
        }
    }

    pub fn schedule(&self) -> &Arc<GeneratorSchedule> {
        &self.schedule
    }
}

/// An element of `H̃_*(ΣZ)` spanned by the sphere classes `β_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuspendedElement {
    schedule: Arc<GeneratorSchedule>,
    terms: BTreeMap<u32, Rational>,
}

impl SuspendedElement {
    pub fn terms(&self) -> &BTreeMap<u32, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, index: u32) -> Rational {
        self.terms.get(&index).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn whitehead_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .next()
            .map(|&i| self.schedule.generators()[i as usize - 1].whitehead_degree)
    }

    pub fn schedule(&self) -> &Arc<GeneratorSchedule> {
        &self.schedule
    }
}

/// The chosen Hurewicz image `p_n = e_1(b_n)`: primitive, with length-one part `b_n`.
pub fn hurewicz(schedule: &Arc<GeneratorSchedule>, n: usize) -> Result<TensorElement> {
    TensorElement::generator(schedule, n)?.primitive_projection()
}

/// Extends `x_i ↦ p_i` to brackets through graded commutators.
pub fn hurewicz_of_lie(a: &LieElement) -> TensorElement {
    let schedule = a.schedule();
    let mut memo: HashMap<Word, Terms> = HashMap::new();
    let mut out = Terms::new();
    for (w, c) in a.raw_terms() {
        for (v, x) in hurewicz_word(schedule, w, &mut memo) {
            add_term(&mut out, v, x * c);
        }
    }
    TensorElement::from_raw(schedule, out)
}

fn hurewicz_word(
    schedule: &Arc<GeneratorSchedule>,
    w: &[u32],
    memo: &mut HashMap<Word, Terms>,
) -> Terms {
    if let Some(t) = memo.get(w) {
        return t.clone();
    }
    let t = match standard_factorization(w) {
        None => hurewicz(schedule, w[0] as usize)
            .expect("letters of a Lie element are in range")
            .terms,
        Some((u, v)) => {
            let tu = hurewicz_word(schedule, u, memo);
            let tv = hurewicz_word(schedule, v, memo);
            commutator_terms(schedule, &tu, &tv)
        }
    };
    memo.insert(Word::from(w), t.clone());
    t
}

/// `[p_{i_k}, [ … , [p_{i_1}, p_{i_2}] … ]]`, the image of the top class under
/// the adjoint of an iterated commutator of self-maps. Always primitive and
/// decomposable.
pub fn iterated_commutator_image(
    schedule: &Arc<GeneratorSchedule>,
    indices: &[usize],
) -> Result<TensorElement> {
    if indices.len() < 2 {
        return Err(Error::TooFewIndices(indices.len()));
    }
    let p = |i: usize| hurewicz(schedule, i);
    let mut acc = p(indices[1]).and_then(|b| p(indices[0])?.graded_commutator(&b))?;
    for &i in &indices[2..] {
        acc = p(i)?.graded_commutator(&acc)?;
    }
    debug_assert!(acc.is_zero() || (acc.is_primitive() == Ok(true) && acc.is_decomposable() == Ok(true)));
    Ok(acc)
}

/// Evaluates an expression in the tensor algebra: brackets are graded
/// commutators, `.` is the product and bare rationals are multiples of the
/// unit. With `via_hurewicz` each generator stands for `p_i` instead of `b_i`.
pub fn evaluate_tensor(
    expr: &BracketExpr,
    schedule: &Arc<GeneratorSchedule>,
    via_hurewicz: bool,
) -> Result<TensorElement> {
    Ok(match expr {
        BracketExpr::Generator(name) => {
            let i = schedule.resolve(name)? as usize;
            if via_hurewicz {
                hurewicz(schedule, i)?
            } else {
                TensorElement::generator(schedule, i)?
            }
        }
        BracketExpr::Bracket(l, r) => evaluate_tensor(l, schedule, via_hurewicz)?
            .graded_commutator(&evaluate_tensor(r, schedule, via_hurewicz)?)?,
        BracketExpr::Sum(items) => {
            let mut acc = TensorElement::zero(schedule);
            for e in items {
                acc = acc.add(&evaluate_tensor(e, schedule, via_hurewicz)?)?;
            }
            acc
        }
        BracketExpr::Product(items) => {
            let mut acc = TensorElement::one(schedule);
            for e in items {
                acc = acc.product(&evaluate_tensor(e, schedule, via_hurewicz)?)?;
            }
            acc
        }
        BracketExpr::Scale(c, e) => evaluate_tensor(e, schedule, via_hurewicz)?.scale(c),
        BracketExpr::Scalar(c) => TensorElement::one(schedule).scale(c),
    })
}

/// Dimension of the primitive subspace in the given degree, from the kernel
/// of `Δ̃` on the word basis.
pub fn primitive_space_dim(schedule: &GeneratorSchedule, degree: u32) -> Result<usize> {
    if degree > schedule.degree_cap() {
        return Err(Error::DegreeCapExceeded {
            degree,
            cap: schedule.degree_cap(),
        });
    }
    let words = schedule.words_of_degree(degree);
    let coproducts: Vec<PairTerms> = words.iter().map(|w| word_reduced_coproduct(schedule, w)).collect();
    // Pivoting on the coarsest splits first keeps fill-in and entry growth low.
    let mut columns: Vec<&(Word, Word)> = coproducts.iter().flat_map(|c| c.keys()).collect();
    columns.sort_by(|a, b| (a.0.len() + a.1.len(), a).cmp(&(b.0.len() + b.1.len(), b)));
    columns.dedup();
    let index: HashMap<&(Word, Word), usize> = columns.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
    let vectors: Vec<SparseVec> = coproducts
        .iter()
        .map(|c| c.iter().map(|(k, x)| (index[k], x.clone())).collect())
        .collect();
    Ok(words.len() - sparse_rank(vectors))
}
