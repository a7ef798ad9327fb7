//! Automorphisms of truncated Whitehead algebras.
//!
//! A morphism is fixed by the images of the generators and extended through
//! brackets. The automorphisms that matter here are sign changes of the
//! generators and the unipotent translations `x_n ↦ x_n + α w` with `w` a
//! bracket of lower generators. Unipotent translations have infinite order
//! and, from `L≤4` on, fail to commute.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr_io::{format_lie, format_rational, parse_expr, Notation, ParseError, ParseErrorKind};
use crate::graded_lie::{bracket, reduce, HallBasisElement, LieElement};
use crate::homotopy_model::{indecomposables_and_decomposables, RingMode, TruncatedAlgebra};
use crate::linalg::{rat, Matrix, Rational};
use crate::lyndon::standard_factorization;
use crate::schedule::{Family, Word};

/// Largest group enumerated element by element when verifying a finite order.
const MAX_ENUMERATED_ORDER: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMorphism {
    domain: Arc<TruncatedAlgebra>,
    images: Vec<LieElement>,
}

impl GradedMorphism {
    /// Builds a morphism from the images of `x_1 … x_n`, checking degrees and,
    /// in Z-lattice mode, integrality.
    pub fn from_images(domain: &Arc<TruncatedAlgebra>, images: Vec<LieElement>) -> Result<Self> {
        let n = domain.top_index();
        if images.len() != n {
            return Err(Error::IndexOutOfRange {
                index: images.len(),
                max: n,
            });
        }
        let mut rebased = Vec::with_capacity(n);
        for (i, img) in images.into_iter().enumerate() {
            let img = img.rebase(domain.schedule())?;
            let expected = domain.generator_degree(i + 1);
            if !img.is_zero() && img.homogeneous_degree() != Some(expected) {
                return Err(Error::DegreeMismatch {
                    expected,
                    found: img.homogeneous_degree(),
                });
            }
            if domain.ring() == RingMode::ZLattice && !img.is_integral() {
                return Err(Error::NonIntegral);
            }
            rebased.push(img);
        }
        Ok(Self {
            domain: Arc::clone(domain),
            images: rebased,
        })
    }

    /// Parses `"x3 -> x3 + [x1,x2]; x1 -> -x1"`. Unlisted generators are fixed.
    pub fn parse_spec(domain: &Arc<TruncatedAlgebra>, spec: &str) -> Result<Self> {
        let mut images: Vec<LieElement> = (1..=domain.top_index())
            .map(|i| domain.generator(i))
            .collect::<Result<_>>()?;
        let mut offset = 0;
        for clause in spec.split(';') {
            let start = offset;
            offset += clause.len() + 1;
            if clause.trim().is_empty() {
                continue;
            }
            let Some(arrow) = clause.find("->") else {
                return Err(ParseError {
                    kind: ParseErrorKind::UnexpectedToken,
                    position: start,
                }
                .into());
            };
            let lhs = clause[..arrow].trim();
            let index = domain.schedule().resolve(lhs)? as usize;
            let rhs = parse_expr(&clause[arrow + 2..]).map_err(|mut e| {
                e.position += start + arrow + 2;
                e
            })?;
            images[index - 1] = reduce(&rhs, domain.schedule())?;
        }
        Self::from_images(domain, images)
    }

    pub fn domain(&self) -> &Arc<TruncatedAlgebra> {
        &self.domain
    }

    pub fn images(&self) -> &[LieElement] {
        &self.images
    }

    pub fn image(&self, i: usize) -> Result<&LieElement> {
        self.domain.check_index(i)?;
        Ok(&self.images[i - 1])
    }

    /// Bracket-compatible extension of the generator images.
    pub fn apply(&self, elem: &LieElement) -> Result<LieElement> {
        let elem = elem.rebase(self.domain.schedule())?;
        let mut memo = HashMap::new();
        let mut out = LieElement::zero(self.domain.schedule());
        for (b, c) in elem.terms() {
            if b.samelson_degree > self.domain.degree_cap() {
                return Err(Error::DegreeCapExceeded {
                    degree: b.samelson_degree,
                    cap: self.domain.degree_cap(),
                });
            }
            out = out.add(&self.apply_word(&b.word, &mut memo)?.scale(c))?;
        }
        Ok(out)
    }

    fn apply_word(&self, w: &[u32], memo: &mut HashMap<Word, LieElement>) -> Result<LieElement> {
        if let Some(v) = memo.get(w) {
            return Ok(v.clone());
        }
        let v = match standard_factorization(w) {
            None => self.images[w[0] as usize - 1].clone(),
            Some((u, v)) => bracket(&self.apply_word(u, memo)?, &self.apply_word(v, memo)?)?,
        };
        memo.insert(Word::from(w), v.clone());
        Ok(v)
    }

    /// Matrix of the morphism on the layer of Samelson degree `d`; column `j`
    /// holds the image of the `j`-th canonical basis element.
    pub fn matrix(&self, d: u32) -> Result<Matrix> {
        if d > self.domain.degree_cap() {
            return Err(Error::DegreeCapExceeded {
                degree: d,
                cap: self.domain.degree_cap(),
            });
        }
        let basis = self.domain.basis(d);
        let columns = basis
            .iter()
            .map(|b| {
                let img = self.apply(&LieElement::from_basis(self.domain.schedule(), b)?)?;
                Ok(basis.iter().map(|e| img.coefficient(&e.word)).collect())
            })
            .collect::<Result<Vec<Vec<Rational>>>>()?;
        Ok(Matrix::from_columns(basis.len(), columns))
    }

    fn check_domain(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.domain, &other.domain) || self.domain == other.domain {
            Ok(())
        } else {
            Err(Error::MixedSchedules)
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_domain(other)?;
        let images = other
            .images
            .iter()
            .map(|img| self.apply(img))
            .collect::<Result<_>>()?;
        Ok(Self {
            domain: Arc::clone(&self.domain),
            images,
        })
    }

    pub fn power(&self, k: u64) -> Result<Self> {
        let mut acc = identity(&self.domain);
        for _ in 0..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn equal(&self, other: &Self) -> bool {
        self == other
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, img)| img.len() == 1 && img.coefficient(&[i as u32 + 1]).is_one())
    }

    /// Every layer matrix is invertible over the coefficient ring.
    pub fn is_automorphism(&self) -> bool {
        self.domain.layer_degrees().into_iter().all(|d| {
            let m = self.matrix(d).expect("layer degrees are within the cap");
            match self.domain.ring() {
                RingMode::ZLattice => m.is_integral() && m.abs_det_is_one(),
                RingMode::Rational => !m.determinant().is_zero(),
            }
        })
    }

    pub fn invert(&self) -> Result<Self> {
        if !self.is_automorphism() {
            return Err(Error::NotInvertible);
        }
        let mut inverses: BTreeMap<u32, Matrix> = BTreeMap::new();
        let mut images = Vec::with_capacity(self.images.len());
        for i in 1..=self.domain.top_index() {
            let d = self.domain.generator_degree(i);
            if let std::collections::btree_map::Entry::Vacant(e) = inverses.entry(d) {
                e.insert(self.matrix(d)?.inverse().ok_or(Error::NotInvertible)?);
            }
            let basis = self.domain.basis(d);
            let j = basis
                .iter()
                .position(|b| b.word.0 == [i as u32])
                .expect("generator is a basis element of its layer");
            let col = inverses[&d].column(j);
            images.push(LieElement::from_terms(
                self.domain.schedule(),
                basis.into_iter().map(|b| b.word).zip(col),
            )?);
        }
        Self::from_images(&self.domain, images)
    }

    /// Coefficient of `x_n` in the image of `x_n`.
    pub fn linear_part(&self, n: usize) -> Result<Rational> {
        Ok(self.image(n)?.coefficient(&[n as u32]))
    }

    /// The sign of the linear part; `None` when it is not `±1`.
    pub fn linear_part_sign(&self, n: usize) -> Result<Option<i32>> {
        let c = self.linear_part(n)?;
        Ok(if c == rat(1) {
            Some(1)
        } else if c == rat(-1) {
            Some(-1)
        } else {
            None
        })
    }

    /// The induced morphism of `L≤n'`.
    pub fn restriction(&self, n: usize) -> Result<Self> {
        if n > self.domain.top_index() {
            return Err(Error::IndexOutOfRange {
                index: n,
                max: self.domain.top_index(),
            });
        }
        let sub = Arc::new(crate::homotopy_model::truncated_algebra(
            self.domain.schedule(),
            n,
            self.domain.ring(),
        )?);
        let images = self.images[..n]
            .iter()
            .map(|img| img.rebase(sub.schedule()))
            .collect::<Result<_>>()?;
        Self::from_images(&sub, images)
    }

    /// Order of an automorphism whose linear part is diagonal.
    ///
    /// With `m` the order of the diagonal part, `f^m` is unipotent; if it is
    /// not the identity, the lowest generator it moves is translated by a
    /// bracket fixed by `f^m`, so `f^{mk}(x) = x + k δ` and the order is infinite.
    pub fn order(&self) -> Result<Order> {
        if !self.is_automorphism() {
            return Err(Error::NotInvertible);
        }
        let mut m: u64 = 1;
        for i in 1..=self.domain.top_index() {
            let img = &self.images[i - 1];
            if img.terms().iter().any(|(b, _)| b.is_generator() && b.word.0 != [i as u32]) {
                return Err(Error::NonDiagonalLinearPart);
            }
            let c = self.linear_part(i)?;
            if c == rat(-1) {
                m = 2;
            } else if c != rat(1) {
                return Ok(Order::Infinite(OrderWitness::Scaling {
                    generator: i,
                    scalar: c,
                }));
            }
        }
        let u = self.power(m)?;
        if u.is_identity() {
            let k = (1..=m)
                .find(|&k| m.is_multiple_of(k) && self.power(k).map(|p| p.is_identity()).unwrap_or(false))
                .unwrap_or(m);
            return Ok(Order::Finite(k));
        }
        let i = (1..=self.domain.top_index())
            .find(|&i| u.images[i - 1] != self.domain.generator(i).expect("in range"))
            .expect("a non-identity morphism moves some generator");
        let displacement = u.images[i - 1].sub(&self.domain.generator(i)?)?;
        debug_assert_eq!(u.apply(&displacement).as_ref(), Ok(&displacement));
        Ok(Order::Infinite(OrderWitness::Unipotent {
            generator: i,
            period: m,
            displacement,
        }))
    }

    /// `"x3 -> x3 + [x1,x2]"` for every moved generator, or `"id"`.
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .filter(|(i, img)| !(img.len() == 1 && img.coefficient(&[*i as u32 + 1]).is_one()))
            .map(|(i, img)| {
                format!(
                    "{} -> {}",
                    self.domain.schedule().name(i as u32 + 1),
                    format_lie(img, Notation::Whitehead)
                )
            })
            .collect();
        if parts.is_empty() {
            "id".into()
        } else {
            parts.join("; ")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderWitness {
    /// The linear part multiplies `x_generator` by a scalar other than `±1`.
    Scaling { generator: usize, scalar: Rational },
    /// `f^{period·k}(x_generator) = x_generator + k·displacement` for all `k`.
    Unipotent {
        generator: usize,
        period: u64,
        displacement: LieElement,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Infinite(OrderWitness),
}

pub fn identity(domain: &Arc<TruncatedAlgebra>) -> GradedMorphism {
    let images = (1..=domain.top_index())
        .map(|i| domain.generator(i).expect("in range"))
        .collect();
    GradedMorphism {
        domain: Arc::clone(domain),
        images,
    }
}

/// `x_i ↦ ε_i x_i`.
pub fn sign_morphism(domain: &Arc<TruncatedAlgebra>, signs: &[i64]) -> Result<GradedMorphism> {
    if signs.contains(&0) {
        return Err(Error::ZeroScalar);
    }
    if signs.iter().any(|&s| s.abs() != 1) {
        return Err(Error::ScalingInZMode);
    }
    let scalars: Vec<Rational> = signs.iter().map(|&s| rat(s)).collect();
    scaling_morphism(domain, &scalars)
}

/// `x_i ↦ c_i x_i`; scalars other than `±1` need rational coefficients.
pub fn scaling_morphism(domain: &Arc<TruncatedAlgebra>, scalars: &[Rational]) -> Result<GradedMorphism> {
    if scalars.iter().any(|c| c.is_zero()) {
        return Err(Error::ZeroScalar);
    }
    if domain.ring() == RingMode::ZLattice && scalars.iter().any(|c| !c.abs().is_one()) {
        return Err(Error::ScalingInZMode);
    }
    let images = scalars
        .iter()
        .enumerate()
        .map(|(i, c)| Ok(domain.generator(i + 1)?.scale(c)))
        .collect::<Result<Vec<_>>>()?;
    GradedMorphism::from_images(domain, images)
}

/// `x_n ↦ x_n + δ`, all other generators fixed; `δ` must be a bracket of
/// lower generators in the degree of `x_n`.
pub fn translation(domain: &Arc<TruncatedAlgebra>, n: usize, delta: &LieElement) -> Result<GradedMorphism> {
    domain.check_index(n)?;
    let delta = delta.rebase(domain.schedule())?;
    let expected = domain.generator_degree(n);
    if !delta.is_zero() && delta.homogeneous_degree() != Some(expected) {
        return Err(Error::DegreeMismatch {
            expected,
            found: delta.homogeneous_degree(),
        });
    }
    if delta.terms().iter().any(|(b, _)| b.is_generator()) {
        return Err(Error::NotDecomposable(format_lie(&delta, Notation::Whitehead)));
    }
    let mut images: Vec<LieElement> = identity(domain).images;
    images[n - 1] = images[n - 1].add(&delta)?;
    GradedMorphism::from_images(domain, images)
}

/// `x_n ↦ x_n + α w`: the effect of `I + [ρ_{i_k}, [ … ]]` on homotopy.
pub fn unipotent_morphism(
    domain: &Arc<TruncatedAlgebra>,
    n: usize,
    w: &LieElement,
    alpha: &Rational,
) -> Result<GradedMorphism> {
    if alpha.is_zero() {
        return Err(Error::ZeroAlpha);
    }
    if domain.ring() == RingMode::ZLattice && !alpha.is_integer() {
        return Err(Error::NonIntegral);
    }
    translation(domain, n, &w.scale(alpha))
}

/// The pair `f = x_m ↦ x_m + α₁[x_1, x_{m-1}]`, `g = x_{m+1} ↦ x_{m+1} + α₂[x_1, x_m]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoncommutingWitness {
    pub f: GradedMorphism,
    pub g: GradedMorphism,
    pub generator: usize,
    /// `f ∘ g` applied to the generator.
    pub fg_image: LieElement,
    /// `g ∘ f` applied to the generator.
    pub gf_image: LieElement,
}

impl NoncommutingWitness {
    pub fn discrepancy(&self) -> LieElement {
        self.fg_image.sub(&self.gf_image).expect("same schedule")
    }

    fn report(&self) -> NoncommutingReport {
        let s = self.f.domain.schedule();
        NoncommutingReport {
            f: self.f.describe(),
            g: self.g.describe(),
            generator: s.name(self.generator as u32).to_string(),
            fg_image: format_lie(&self.fg_image, Notation::Whitehead),
            gf_image: format_lie(&self.gf_image, Notation::Whitehead),
            discrepancy: format_lie(&self.discrepancy(), Notation::Whitehead),
        }
    }
}

fn first_difference(f: &GradedMorphism, g: &GradedMorphism) -> Result<Option<NoncommutingWitness>> {
    let fg = f.compose(g)?;
    let gf = g.compose(f)?;
    Ok((0..fg.images.len())
        .find(|&i| fg.images[i] != gf.images[i])
        .map(|i| NoncommutingWitness {
            f: f.clone(),
            g: g.clone(),
            generator: i + 1,
            fg_image: fg.images[i].clone(),
            gf_image: gf.images[i].clone(),
        }))
}

pub fn noncommuting_witness(
    domain: &Arc<TruncatedAlgebra>,
    m: usize,
    alpha1: &Rational,
    alpha2: &Rational,
) -> Result<NoncommutingWitness> {
    if m < 3 {
        return Err(Error::IndexOutOfRange { index: m, max: 3 });
    }
    domain.check_index(m + 1)?;
    let x = |i: usize| domain.generator(i);
    let w1 = bracket(&x(1)?, &x(m - 1)?)?;
    let w2 = bracket(&x(1)?, &x(m)?)?;
    let f = unipotent_morphism(domain, m, &w1, alpha1)?;
    let g = unipotent_morphism(domain, m + 1, &w2, alpha2)?;
    let fg = f.compose(&g)?;
    let gf = g.compose(&f)?;
    Ok(NoncommutingWitness {
        fg_image: fg.images[m].clone(),
        gf_image: gf.images[m].clone(),
        f,
        g,
        generator: m + 1,
    })
}

fn decomposable_layers(domain: &TruncatedAlgebra) -> Vec<(usize, Vec<HallBasisElement>)> {
    (1..=domain.top_index())
        .map(|k| {
            let (_, dec) = indecomposables_and_decomposables(domain, k).expect("in range");
            (k, dec)
        })
        .collect()
}

fn unipotent_generators(domain: &Arc<TruncatedAlgebra>, below: usize) -> Vec<GradedMorphism> {
    decomposable_layers(domain)
        .into_iter()
        .filter(|(k, _)| *k < below)
        .flat_map(|(k, dec)| {
            dec.into_iter().map(move |b| (k, b))
        })
        .map(|(k, b)| {
            let w = LieElement::from_basis(domain.schedule(), &b).expect("basis element");
            unipotent_morphism(domain, k, &w, &Rational::one()).expect("valid translation")
        })
        .collect()
}

fn sign_generators(domain: &Arc<TruncatedAlgebra>, below: usize) -> Vec<GradedMorphism> {
    (1..below.min(domain.top_index() + 1))
        .map(|i| {
            let mut signs = vec![1; domain.top_index()];
            signs[i - 1] = -1;
            sign_morphism(domain, &signs).expect("signs are valid")
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderWitnessReport {
    pub morphism: String,
    pub generator: String,
    pub kind: String,
    pub period: Option<u64>,
    pub displacement: Option<String>,
    pub scalar: Option<String>,
}

impl OrderWitnessReport {
    fn new(f: &GradedMorphism, w: &OrderWitness) -> Self {
        let s = f.domain.schedule();
        match w {
            OrderWitness::Scaling { generator, scalar } => Self {
                morphism: f.describe(),
                generator: s.name(*generator as u32).to_string(),
                kind: "scaling".into(),
                period: None,
                displacement: None,
                scalar: Some(format_rational(scalar)),
            },
            OrderWitness::Unipotent {
                generator,
                period,
                displacement,
            } => Self {
                morphism: f.describe(),
                generator: s.name(*generator as u32).to_string(),
                kind: "unipotent".into(),
                period: Some(*period),
                displacement: Some(format_lie(displacement, Notation::Whitehead)),
                scalar: None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderReport {
    pub morphism: String,
    pub finite: bool,
    pub order: Option<u64>,
    pub witness: Option<OrderWitnessReport>,
}

pub fn order_report(f: &GradedMorphism) -> Result<OrderReport> {
    Ok(match f.order()? {
        Order::Finite(k) => OrderReport {
            morphism: f.describe(),
            finite: true,
            order: Some(k),
            witness: None,
        },
        Order::Infinite(w) => OrderReport {
            morphism: f.describe(),
            finite: false,
            order: None,
            witness: Some(OrderWitnessReport::new(f, &w)),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoncommutingReport {
    pub f: String,
    pub g: String,
    pub generator: String,
    pub fg_image: String,
    pub gf_image: String,
    pub discrepancy: String,
}

pub fn noncommuting_report(w: &NoncommutingWitness) -> NoncommutingReport {
    w.report()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutReport {
    pub family: Family,
    pub ring: RingMode,
    pub top_index: usize,
    pub max_whitehead_dim: u32,
    pub is_finite: bool,
    pub order: Option<u64>,
    pub is_abelian: bool,
    pub unipotent_rank: usize,
    pub decomposable_ranks: Vec<usize>,
    pub structure: String,
    pub infinite_order_witness: Option<OrderWitnessReport>,
    pub noncommuting_witness: Option<NoncommutingReport>,
}

/// Closure of a generating set under composition.
fn enumerate_group(domain: &Arc<TruncatedAlgebra>, gens: &[GradedMorphism], limit: u64) -> Result<Vec<GradedMorphism>> {
    let mut elems = vec![identity(domain)];
    let mut frontier = elems.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for g in gens {
                let c = g.compose(a)?;
                if !elems.contains(&c) {
                    if elems.len() as u64 >= limit {
                        return Err(Error::GroupTooLarge(limit));
                    }
                    elems.push(c.clone());
                    next.push(c);
                }
            }
        }
        frontier = next;
    }
    Ok(elems)
}

fn find_noncommuting(pairs: impl Iterator<Item = (GradedMorphism, GradedMorphism)>) -> Result<Option<NoncommutingWitness>> {
    for (f, g) in pairs {
        if let Some(w) = first_difference(&f, &g)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Finiteness, order and commutativity of `Aut(L≤n)`.
pub fn aut_report(domain: &Arc<TruncatedAlgebra>) -> Result<AutReport> {
    let n = domain.top_index();
    let layers = decomposable_layers(domain);
    let decomposable_ranks: Vec<usize> = layers.iter().map(|(_, d)| d.len()).collect();
    let unipotent_rank: usize = decomposable_ranks.iter().sum();
    let max_whitehead_dim = if n == 0 { 0 } else { domain.degree_cap() + 1 };
    let ring = domain.ring();

    let unipotents = unipotent_generators(domain, n + 1);
    let signs = sign_generators(domain, n + 1);

    let mut report = AutReport {
        family: domain.family(),
        ring,
        top_index: n,
        max_whitehead_dim,
        is_finite: false,
        order: None,
        is_abelian: true,
        unipotent_rank,
        decomposable_ranks,
        structure: String::new(),
        infinite_order_witness: None,
        noncommuting_witness: None,
    };

    if unipotent_rank == 0 {
        // Automorphisms are diagonal: (Z/2)^n over Z, (Q*)^n over Q.
        let factor = match ring {
            RingMode::ZLattice => "Z2",
            RingMode::Rational => "Q*",
        };
        report.structure = if n == 0 {
            "trivial".into()
        } else {
            vec![factor; n].join(" + ")
        };
        if ring == RingMode::ZLattice || n == 0 {
            let group = enumerate_group(domain, &signs, MAX_ENUMERATED_ORDER)?;
            report.is_finite = true;
            report.order = Some(group.len() as u64);
            let exhaustive = group.len() <= 64;
            let candidates = if exhaustive { &group } else { &signs };
            report.is_abelian = find_noncommuting(
                candidates
                    .iter()
                    .enumerate()
                    .flat_map(|(i, a)| candidates[i + 1..].iter().map(move |b| (a.clone(), b.clone()))),
            )?
            .is_none();
        } else {
            let mut scalars = vec![Rational::one(); n];
            scalars[0] = rat(2);
            let f = scaling_morphism(domain, &scalars)?;
            let Order::Infinite(w) = f.order()? else {
                unreachable!("scaling by 2 has infinite order")
            };
            report.infinite_order_witness = Some(OrderWitnessReport::new(&f, &w));
            let mut gens = signs.clone();
            gens.extend((1..=n).map(|i| {
                let mut c = vec![Rational::one(); n];
                c[i - 1] = rat(2);
                scaling_morphism(domain, &c).expect("nonzero scalars")
            }));
            report.is_abelian = find_noncommuting(
                gens.iter()
                    .enumerate()
                    .flat_map(|(i, a)| gens[i + 1..].iter().map(move |b| (a.clone(), b.clone()))),
            )?
            .is_none();
        }
        return Ok(report);
    }

    let psi = &unipotents[0];
    let Order::Infinite(w) = psi.order()? else {
        unreachable!("a nontrivial unipotent translation has infinite order")
    };
    report.infinite_order_witness = Some(OrderWitnessReport::new(psi, &w));
    report.structure = format!(
        "infinite; unipotent kernel of rank {unipotent_rank} extended by {}",
        match ring {
            RingMode::ZLattice => format!("(Z2)^{n}"),
            RingMode::Rational => format!("(Q*)^{n}"),
        }
    );

    let unipotent_pairs = unipotents
        .iter()
        .enumerate()
        .flat_map(|(i, a)| unipotents[i + 1..].iter().map(move |b| (a.clone(), b.clone())));
    let mixed_pairs = signs
        .iter()
        .flat_map(|s| unipotents.iter().map(move |u| (s.clone(), u.clone())));
    let witness = find_noncommuting(unipotent_pairs.chain(mixed_pairs))?;
    report.is_abelian = witness.is_none();
    report.noncommuting_witness = witness.map(|w| w.report());
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactSequenceReport {
    pub family: Family,
    pub n: usize,
    pub kernel_rank: usize,
    pub kernel_basis: Vec<String>,
    pub checks: Vec<CheckResult>,
    pub exact: bool,
}

/// Verifies `0 → Hom(I_n L, D_n L) → Aut(L≤n) → Aut(L<n) ⊕ Z2 → 0` on
/// explicit elements.
pub fn exact_sequence_report(domain: &Arc<TruncatedAlgebra>, n: usize) -> Result<ExactSequenceReport> {
    domain.check_index(n)?;
    let top = Arc::new(crate::homotopy_model::truncated_algebra(domain.schedule(), n, domain.ring())?);
    let (_, dec) = indecomposables_and_decomposables(&top, n)?;
    let s = top.schedule();
    let basis: Vec<LieElement> = dec
        .iter()
        .map(|b| LieElement::from_basis(s, b))
        .collect::<Result<_>>()?;
    let lower_identity = identity(&Arc::new(crate::homotopy_model::truncated_algebra(s, n - 1, top.ring())?));
    let xn = top.generator(n)?;
    let kernel_map = |d: &LieElement| translation(&top, n, d);

    // (a) each φ_d is an automorphism in the kernel
    let mut a_fail = Vec::new();
    for (d, b) in basis.iter().zip(&dec) {
        let phi = kernel_map(d)?;
        let ok = phi.is_automorphism()
            && phi.restriction(n - 1)? == lower_identity
            && phi.linear_part_sign(n)? == Some(1);
        if !ok {
            a_fail.push(top.format_basis(b));
        }
    }

    // (b) φ_d ∘ φ_e = φ_{d+e}
    let mut b_fail = Vec::new();
    for d in &basis {
        for e in &basis {
            if kernel_map(d)?.compose(&kernel_map(e)?)? != kernel_map(&d.add(e)?)? {
                b_fail.push(format!("({}, {})", top.format(d), top.format(e)));
            }
        }
    }

    // (c) kernel elements are exactly the translations by D_n L
    let mut samples: Vec<GradedMorphism> = vec![identity(&top)];
    for (i, d) in basis.iter().enumerate() {
        let phi = kernel_map(d)?;
        for e in &basis[i..] {
            samples.push(phi.compose(&kernel_map(&e.scale(&rat(-3)))?)?);
        }
        for c in sign_generators(&top, n).into_iter().chain(unipotent_generators(&top, n)) {
            samples.push(c.compose(&phi)?.compose(&c.invert()?)?);
        }
    }
    let mut c_fail = Vec::new();
    for f in &samples {
        if f.restriction(n - 1)? != lower_identity || f.linear_part_sign(n)? != Some(1) {
            c_fail.push(format!("{} is not in the kernel", f.describe()));
            continue;
        }
        let delta = f.image(n)?.sub(&xn)?;
        match translation(&top, n, &delta) {
            Ok(phi) if phi == *f => {}
            _ => c_fail.push(f.describe()),
        }
    }

    // (d) generators of Aut(L<n) ⊕ Z2 lift
    let mut d_fail = Vec::new();
    let mut lower: Vec<GradedMorphism> = vec![identity(&top)];
    lower.extend(sign_generators(&top, n));
    lower.extend(unipotent_generators(&top, n));
    for psi in &lower {
        let psi_lower = psi.restriction(n - 1)?;
        for eps in [1i64, -1] {
            let mut images = psi.images.clone();
            images[n - 1] = xn.scale(&rat(eps));
            let lift = GradedMorphism::from_images(&top, images)?;
            let ok = lift.is_automorphism()
                && lift.restriction(n - 1)? == psi_lower
                && lift.linear_part_sign(n)? == Some(eps as i32);
            if !ok {
                d_fail.push(format!("{} with sign {eps}", psi_lower.describe()));
            }
        }
    }

    let check = |name: &str, fails: Vec<String>, total: usize| CheckResult {
        name: name.into(),
        passed: fails.is_empty(),
        detail: if fails.is_empty() {
            format!("{total} cases verified")
        } else {
            format!("failed: {}", fails.join(", "))
        },
    };
    let checks = vec![
        check("kernel_containment", a_fail, basis.len()),
        check("kernel_additivity", b_fail, basis.len() * basis.len()),
        check("kernel_equals_image", c_fail, samples.len()),
        check("surjectivity", d_fail, 2 * lower.len()),
    ];
    Ok(ExactSequenceReport {
        family: top.family(),
        n,
        kernel_rank: dec.len(),
        kernel_basis: dec.iter().map(|b| top.format_basis(b)).collect(),
        exact: checks.iter().all(|c| c.passed),
        checks,
    })
}

/// Integer multiplier `α_{n', w}` per layer and decomposable basis element.
pub type AlphaConfig = BTreeMap<(usize, Word), i64>;

/// `α ≡ 1` on every decomposable basis element of every layer.
pub fn unit_alphas(domain: &TruncatedAlgebra) -> AlphaConfig {
    decomposable_layers(domain)
        .into_iter()
        .flat_map(|(k, dec)| dec.into_iter().map(move |b| ((k, b.word), 1)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SntGenerator {
    pub basis: String,
    pub alpha: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SntLayer {
    pub layer: usize,
    pub whitehead_dim: u32,
    pub decomposable_rank: usize,
    pub generators: Vec<SntGenerator>,
    pub index: u64,
    pub fully_covered: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SntReport {
    pub family: Family,
    pub top_index: usize,
    pub layers: Vec<SntLayer>,
    pub sign_factors: usize,
    pub total_index: u64,
    pub cokernel_finite: bool,
    pub verdict: String,
}

fn to_u64(x: &BigInt) -> Result<u64> {
    x.to_u64().ok_or(Error::Overflow)
}

/// Index of the translations realized by `x_{n'} ↦ x_{n'} + α w` inside
/// `Hom(I_{n'} L, D_{n'} L)`, layer by layer.
pub fn snt_cokernel_witness(domain: &Arc<TruncatedAlgebra>, alphas: &AlphaConfig) -> Result<SntReport> {
    let mut layers = Vec::new();
    let mut total = BigInt::one();
    let mut finite = true;
    for (k, dec) in decomposable_layers(domain) {
        let s = domain.schedule();
        let mut generators = Vec::new();
        let mut columns = Vec::new();
        let mut morphisms = Vec::new();
        for b in &dec {
            let label = format!("({k},{})", domain.format_basis(b));
            let alpha = *alphas
                .get(&(k, b.word.clone()))
                .ok_or_else(|| Error::MissingAlpha(label.clone()))?;
            if alpha == 0 {
                return Err(Error::ZeroAlpha);
            }
            let w = LieElement::from_basis(s, b)?;
            let phi = unipotent_morphism(domain, k, &w, &rat(alpha))?;
            debug_assert!(phi.is_automorphism());
            let t = phi.image(k)?.sub(&domain.generator(k)?)?;
            columns.push(dec.iter().map(|e| t.coefficient(&e.word)).collect::<Vec<_>>());
            morphisms.push((phi, t));
            generators.push(SntGenerator {
                basis: domain.format_basis(b),
                alpha,
            });
        }
        // The realized translations form a group: composites add.
        for (f, tf) in &morphisms {
            for (g, tg) in &morphisms {
                let sum = f.compose(g)?.image(k)?.sub(&domain.generator(k)?)?;
                debug_assert_eq!(sum, tf.add(tg)?);
            }
        }
        let det = Matrix::from_columns(dec.len(), columns).determinant();
        let index = det.abs().to_integer();
        if index.is_zero() {
            finite = false;
        } else {
            total *= &index;
        }
        layers.push(SntLayer {
            layer: k,
            whitehead_dim: domain.generator_degree(k) + 1,
            decomposable_rank: dec.len(),
            generators,
            index: to_u64(&index)?,
            fully_covered: index.is_one(),
        });
    }
    Ok(SntReport {
        family: domain.family(),
        top_index: domain.top_index(),
        layers,
        sign_factors: domain.top_index(),
        total_index: if finite { to_u64(&total)? } else { 0 },
        cokernel_finite: finite,
        verdict: if finite { "cokernel finite" } else { "cokernel infinite" }.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy_model::truncated_algebra;
    use crate::linalg::ratio;
    use crate::schedule::GeneratorSchedule;

    fn hp(n: usize, ring: RingMode) -> Arc<TruncatedAlgebra> {
        Arc::new(truncated_algebra(&GeneratorSchedule::hp(8), n, ring).unwrap())
    }

    fn expr(l: &TruncatedAlgebra, text: &str) -> LieElement {
        reduce(&parse_expr(text).unwrap(), l.schedule()).unwrap()
    }

    fn psi(l: &Arc<TruncatedAlgebra>) -> GradedMorphism {
        unipotent_morphism(l, 3, &expr(l, "[x1,x2]"), &rat(1)).unwrap()
    }

    #[test]
    fn sign_and_scaling_morphisms() {
        let l = hp(2, RingMode::ZLattice);
        let f = sign_morphism(&l, &[-1, 1]).unwrap();
        assert_eq!(f.image(1).unwrap(), &expr(&l, "-x1"));
        assert_eq!(f.image(2).unwrap(), &expr(&l, "x2"));
        assert!(sign_morphism(&l, &[1, 1]).unwrap().is_identity());
        assert_eq!(sign_morphism(&l, &[0, 1]), Err(Error::ZeroScalar));
        assert_eq!(scaling_morphism(&l, &[rat(2), rat(1)]), Err(Error::ScalingInZMode));

        let q = hp(1, RingMode::Rational);
        let g = scaling_morphism(&q, &[rat(2)]).unwrap();
        assert!(g.is_automorphism());
        assert!(matches!(g.order().unwrap(), Order::Infinite(OrderWitness::Scaling { .. })));
    }

    #[test]
    fn unipotent_examples() {
        let l3 = hp(3, RingMode::ZLattice);
        let p = psi(&l3);
        assert_eq!(p.image(3).unwrap(), &expr(&l3, "x3 + [x1,x2]"));
        let l4 = hp(4, RingMode::ZLattice);
        let u = unipotent_morphism(&l4, 4, &expr(&l4, "[x1,[x1,x2]]"), &rat(1)).unwrap();
        assert!(u.is_automorphism());
        assert_eq!(
            unipotent_morphism(&l3, 3, &expr(&l3, "[x1,x2]"), &rat(0)),
            Err(Error::ZeroAlpha)
        );
        assert!(matches!(
            unipotent_morphism(&l3, 2, &expr(&l3, "[x1,x2]"), &rat(1)),
            Err(Error::DegreeMismatch { .. })
        ));
        assert!(matches!(
            unipotent_morphism(&l3, 3, &expr(&l3, "x3"), &rat(1)),
            Err(Error::NotDecomposable(_))
        ));
        assert_eq!(
            unipotent_morphism(&l3, 3, &expr(&l3, "[x1,x2]"), &ratio(1, 2)),
            Err(Error::NonIntegral)
        );
    }

    #[test]
    fn apply_examples() {
        let l = hp(3, RingMode::ZLattice);
        let p = psi(&l);
        assert_eq!(p.apply(&expr(&l, "x3")).unwrap(), expr(&l, "x3 + [x1,x2]"));
        assert_eq!(p.apply(&expr(&l, "x1")).unwrap(), expr(&l, "x1"));
        assert_eq!(p.apply(&expr(&l, "[x1,x2]")).unwrap(), expr(&l, "[x1,x2]"));
        let big = Arc::new(GeneratorSchedule::hp(8));
        let too_high = reduce(&parse_expr("[x1,x3]").unwrap(), &big).unwrap();
        assert!(p.apply(&too_high).is_err());
    }

    #[test]
    fn matrix_of_psi() {
        let l = hp(3, RingMode::ZLattice);
        let m = psi(&l).matrix(12).unwrap();
        // basis (x3, [x1,x2]); x3 ↦ x3 + [x1,x2]
        assert_eq!(m.column(0), vec![rat(1), rat(1)]);
        assert_eq!(m.column(1), vec![rat(0), rat(1)]);
    }

    #[test]
    fn compose_and_invert() {
        let l = hp(3, RingMode::ZLattice);
        let p = psi(&l);
        assert_eq!(p.compose(&p).unwrap().image(3).unwrap(), &expr(&l, "x3 + 2*[x1,x2]"));
        let inv = p.invert().unwrap();
        assert_eq!(inv.image(3).unwrap(), &expr(&l, "x3 - [x1,x2]"));
        assert!(inv.compose(&p).unwrap().is_identity());
        let l1 = hp(1, RingMode::ZLattice);
        let doubling = GradedMorphism::from_images(&l1, vec![expr(&l1, "2*x1")]).unwrap();
        assert!(!doubling.is_automorphism());
        assert_eq!(doubling.invert(), Err(Error::NotInvertible));
    }

    #[test]
    fn orders() {
        let l = hp(3, RingMode::ZLattice);
        match psi(&l).order().unwrap() {
            Order::Infinite(OrderWitness::Unipotent {
                generator,
                period,
                displacement,
            }) => {
                assert_eq!((generator, period), (3, 1));
                assert_eq!(displacement, expr(&l, "[x1,x2]"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(sign_morphism(&l, &[-1, 1, 1]).unwrap().order().unwrap(), Order::Finite(2));
        assert_eq!(identity(&l).order().unwrap(), Order::Finite(1));
        // sign on x1 composed with Ψ squares to a nontrivial unipotent
        let f = sign_morphism(&l, &[-1, 1, 1]).unwrap().compose(&psi(&l)).unwrap();
        assert_eq!(f.order().unwrap(), Order::Finite(2));
        let g = sign_morphism(&l, &[1, 1, -1]).unwrap().compose(&psi(&l)).unwrap();
        assert_eq!(g.order().unwrap(), Order::Finite(2));
        let h = sign_morphism(&l, &[1, -1, 1]).unwrap().compose(&psi(&l)).unwrap();
        assert_eq!(h.order().unwrap(), Order::Finite(2));
        let k = sign_morphism(&l, &[-1, -1, 1]).unwrap().compose(&psi(&l)).unwrap();
        assert!(matches!(k.order().unwrap(), Order::Infinite(OrderWitness::Unipotent { period: 2, .. })));
    }

    #[test]
    fn noncommuting_examples() {
        let l4 = hp(4, RingMode::ZLattice);
        let w = noncommuting_witness(&l4, 3, &rat(1), &rat(1)).unwrap();
        assert_eq!(w.fg_image, expr(&l4, "x4 + [x1,x3] + [x1,[x1,x2]]"));
        assert_eq!(w.gf_image, expr(&l4, "x4 + [x1,x3]"));
        assert_eq!(w.discrepancy(), expr(&l4, "[x1,[x1,x2]]"));
        assert_eq!(noncommuting_witness(&l4, 3, &rat(0), &rat(1)).unwrap_err(), Error::ZeroAlpha);
        let l5 = hp(5, RingMode::ZLattice);
        let w = noncommuting_witness(&l5, 4, &rat(1), &rat(1)).unwrap();
        assert_eq!(w.discrepancy(), expr(&l5, "[x1,[x1,x3]]"));
        assert!(noncommuting_witness(&l4, 4, &rat(1), &rat(1)).is_err());
    }

    #[test]
    fn restriction_and_linear_part() {
        let l = hp(3, RingMode::ZLattice);
        let p = psi(&l);
        assert!(p.restriction(2).unwrap().is_identity());
        assert_eq!(p.linear_part_sign(3).unwrap(), Some(1));
        let s = sign_morphism(&l, &[1, 1, -1]).unwrap();
        assert_eq!(s.linear_part_sign(3).unwrap(), Some(-1));
        assert!(p.restriction(4).is_err());
    }

    #[test]
    fn parse_spec() {
        let l = hp(3, RingMode::ZLattice);
        let f = GradedMorphism::parse_spec(&l, "x3 -> x3 + [x1,x2]").unwrap();
        assert_eq!(f, psi(&l));
        assert!(matches!(
            GradedMorphism::parse_spec(&l, "x3 -> x2"),
            Err(Error::DegreeMismatch { .. })
        ));
        assert!(GradedMorphism::parse_spec(&l, "x3 = x3").is_err());
        assert_eq!(f.describe(), "x3 -> x3 + [x1,x2]");
    }

    #[test]
    fn small_reports() {
        let r = aut_report(&hp(1, RingMode::ZLattice)).unwrap();
        assert!(r.is_finite && r.is_abelian);
        assert_eq!(r.order, Some(2));
        let r = aut_report(&hp(2, RingMode::ZLattice)).unwrap();
        assert_eq!((r.is_finite, r.order, r.is_abelian), (true, Some(4), true));
        let r = aut_report(&hp(3, RingMode::ZLattice)).unwrap();
        assert!(!r.is_finite);
        assert_eq!(r.infinite_order_witness.unwrap().displacement.as_deref(), Some("[x1,x2]"));
        let r = aut_report(&hp(0, RingMode::ZLattice)).unwrap();
        assert_eq!((r.is_finite, r.order), (true, Some(1)));
    }

    #[test]
    fn snt_alpha_errors() {
        let l = hp(3, RingMode::ZLattice);
        assert!(matches!(
            snt_cokernel_witness(&l, &AlphaConfig::new()),
            Err(Error::MissingAlpha(_))
        ));
        let mut a = unit_alphas(&l);
        a.insert((3, Word::from(vec![1, 2])), 0);
        assert_eq!(snt_cokernel_witness(&l, &a), Err(Error::ZeroAlpha));
    }
}
