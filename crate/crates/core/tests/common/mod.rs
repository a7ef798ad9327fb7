//! Random inputs and independent oracles shared by the property suites and
//! the acceptance gate. Everything is driven by a `u64` seed.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use whitealg::expr_io::{format_lie, from_json, parse_expr, to_json, BracketExpr, Notation};
use whitealg::graded_lie::{embed_assoc, lie_from_assoc};
use whitealg::linalg::{rat, ratio};
use whitealg::tensor_hopf::{hurewicz_of_lie, word_coproduct};
use whitealg::{bracket, lyndon_basis, reduce, Error, GeneratorSchedule, LieElement, Rational, TensorElement, Word};

pub type Poly = BTreeMap<Vec<u32>, Rational>;
pub type CaseResult = Result<(), String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn hp(n: usize) -> Arc<GeneratorSchedule> {
    Arc::new(GeneratorSchedule::hp(n))
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let n = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
    ratio(n, rng.gen_range(1..=3))
}

/// Random bracket tree on generators whose degrees sum to at most `max_degree`.
pub fn random_tree(rng: &mut ChaCha8Rng, s: &GeneratorSchedule, max_degree: u32) -> BracketExpr {
    let mut leaves = Vec::new();
    let mut budget = max_degree;
    let target = rng.gen_range(1..=6);
    while leaves.len() < target {
        let fits: Vec<u32> = (1..=s.len() as u32).filter(|&i| s.degree(i) <= budget).collect();
        let Some(&i) = fits.choose(rng) else { break };
        budget -= s.degree(i);
        leaves.push(BracketExpr::gen(s.name(i)));
    }
    if leaves.is_empty() {
        leaves.push(BracketExpr::gen(s.name(1)));
    }
    while leaves.len() > 1 {
        let k = rng.gen_range(0..leaves.len() - 1);
        let l = leaves.remove(k);
        let r = leaves.remove(k);
        leaves.insert(k, BracketExpr::bracket(l, r));
    }
    leaves.pop().unwrap()
}

/// Sum of scaled random trees.
pub fn random_expr(rng: &mut ChaCha8Rng, s: &GeneratorSchedule, max_degree: u32) -> BracketExpr {
    let terms: Vec<BracketExpr> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let t = random_tree(rng, s, max_degree);
            if rng.gen_bool(0.5) {
                BracketExpr::scale(small_rational(rng), t)
            } else {
                t
            }
        })
        .collect();
    if terms.len() == 1 {
        terms.into_iter().next().unwrap()
    } else {
        BracketExpr::Sum(terms)
    }
}

/// Random combination of Lyndon basis elements in one degree.
pub fn random_lie_in_degree(rng: &mut ChaCha8Rng, s: &Arc<GeneratorSchedule>, degree: u32) -> LieElement {
    let basis = lyndon_basis(s, degree).unwrap();
    let mut terms = Vec::new();
    for b in &basis {
        if rng.gen_bool(0.6) {
            terms.push((b.word.clone(), small_rational(rng)));
        }
    }
    LieElement::from_terms(s, terms).unwrap()
}

/// Random homogeneous element of some nonempty degree in `[4, max_degree]`.
pub fn random_lie(rng: &mut ChaCha8Rng, s: &Arc<GeneratorSchedule>, max_degree: u32) -> (LieElement, u32) {
    let degrees: Vec<u32> = (1..=max_degree)
        .filter(|&d| !lyndon_basis(s, d).unwrap().is_empty())
        .collect();
    let d = *degrees.choose(rng).unwrap();
    (random_lie_in_degree(rng, s, d), d)
}

fn random_word(rng: &mut ChaCha8Rng, s: &GeneratorSchedule, degree: u32) -> Vec<u32> {
    let mut w = Vec::new();
    let mut left = degree;
    while left > 0 {
        let fits: Vec<u32> = (1..=s.len() as u32).filter(|&i| s.degree(i) <= left).collect();
        let i = *fits.choose(rng).unwrap();
        left -= s.degree(i);
        w.push(i);
    }
    w
}

fn add(p: &mut Poly, w: Vec<u32>, c: Rational) {
    let e = p.entry(w.clone()).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        p.remove(&w);
    }
}

fn degree_of(s: &GeneratorSchedule, w: &[u32]) -> u32 {
    w.iter().map(|&i| s.degree(i)).sum()
}

/// Graded commutator computed directly on words.
pub fn poly_commutator(s: &GeneratorSchedule, a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (u, x) in a {
        for (v, y) in b {
            let sign = if (degree_of(s, u) * degree_of(s, v)).is_multiple_of(2) { 1 } else { -1 };
            add(&mut out, [u.clone(), v.clone()].concat(), x * y);
            add(&mut out, [v.clone(), u.clone()].concat(), -(x * y) * rat(sign));
        }
    }
    out
}

/// Independent evaluation of a bracket expression in the tensor algebra.
pub fn oracle_eval(e: &BracketExpr, s: &GeneratorSchedule) -> Poly {
    match e {
        BracketExpr::Generator(n) => Poly::from([(vec![s.resolve(n).unwrap()], Rational::one())]),
        BracketExpr::Bracket(l, r) => poly_commutator(s, &oracle_eval(l, s), &oracle_eval(r, s)),
        BracketExpr::Sum(v) => {
            let mut out = Poly::new();
            for t in v {
                for (w, c) in oracle_eval(t, s) {
                    add(&mut out, w, c);
                }
            }
            out
        }
        BracketExpr::Scale(c, t) => oracle_eval(t, s).into_iter().map(|(w, x)| (w, x * c)).collect(),
        other => panic!("not a Lie expression: {other:?}"),
    }
}

pub fn tensor_poly(t: &TensorElement) -> Poly {
    t.terms().into_iter().map(|(w, c)| (w.0.clone(), c.clone())).collect()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> CaseResult {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------------------
// Cases
// ---------------------------------------------------------------------------

/// Antisymmetry, Jacobi and `[a,a] = 0` with all brackets of degree ≤ 24.
pub fn lie_identities_case(seed: u64) -> CaseResult {
    let mut r = rng(seed);
    let s = hp(6);
    let (a, da) = random_lie(&mut r, &s, 12);
    let (b, db) = random_lie(&mut r, &s, 20 - da);
    let (c, _) = random_lie(&mut r, &s, 24 - da - db);
    let ab = bracket(&a, &b).unwrap();
    check(ab == bracket(&b, &a).unwrap().neg(), || format!("antisymmetry fails (seed {seed})"))?;
    check(bracket(&a, &a).unwrap().is_zero(), || format!("[a,a] != 0 (seed {seed})"))?;
    let j = bracket(&a, &bracket(&b, &c).unwrap())
        .unwrap()
        .add(&bracket(&b, &bracket(&c, &a).unwrap()).unwrap())
        .unwrap()
        .add(&bracket(&c, &ab).unwrap())
        .unwrap();
    check(j.is_zero(), || format!("Jacobi fails (seed {seed})"))
}

/// `straighten ∘ embed = id`, and products of generators are rejected.
pub fn embed_round_trip_case(seed: u64) -> CaseResult {
    let mut r = rng(seed);
    let s = hp(10);
    let (a, _) = random_lie(&mut r, &s, 40);
    check(lie_from_assoc(&embed_assoc(&a)).unwrap() == a, || format!("round trip fails (seed {seed})"))?;
    let i = r.gen_range(1..=3);
    let j = r.gen_range(1..=3);
    let prod = TensorElement::generator(&s, i).unwrap().product(&TensorElement::generator(&s, j).unwrap()).unwrap();
    check(lie_from_assoc(&prod) == Err(Error::NotALieElement), || format!("b{i}.b{j} accepted"))
}

/// `reduce` agrees with a direct evaluation of commutators on words.
pub fn reduce_oracle_case(seed: u64) -> CaseResult {
    let mut r = rng(seed);
    let s = hp(10);
    let e = random_expr(&mut r, &s, 40);
    let got = tensor_poly(&embed_assoc(&reduce(&e, &s).unwrap()));
    check(got == oracle_eval(&e, &s), || format!("reduce disagrees with oracle on {e:?}"))
}

type Triple = BTreeMap<(Word, Word, Word), Rational>;

fn add3(t: &mut Triple, k: (Word, Word, Word), c: Rational) {
    let e = t.entry(k.clone()).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        t.remove(&k);
    }
}

/// `(Δ⊗1)Δ = (1⊗Δ)Δ` on a word and `Δ(uv) = Δ(u)Δ(v)`, degrees ≤ 24.
pub fn coproduct_case(seed: u64) -> CaseResult {
    let mut r = rng(seed);
    let s = hp(6);
    let d = 4 * r.gen_range(1..=6);
    let w = random_word(&mut r, &s, d);
    let mut left = Triple::new();
    let mut right = Triple::new();
    for ((u, v), c) in word_coproduct(&s, &w) {
        for ((u1, u2), c1) in word_coproduct(&s, &u) {
            add3(&mut left, (u1, u2, v.clone()), &c * c1);
        }
        for ((v1, v2), c2) in word_coproduct(&s, &v) {
            add3(&mut right, (u.clone(), v1, v2), &c * c2);
        }
    }
    check(left == right, || format!("coassociativity fails on {w:?}"))?;

    let du = 4 * r.gen_range(1..=5);
    let dv = 4 * r.gen_range(1..=(6 - du / 4));
    let u = random_word(&mut r, &s, du);
    let v = random_word(&mut r, &s, dv);
    let mut prod: BTreeMap<(Word, Word), Rational> = BTreeMap::new();
    for ((a1, a2), x) in word_coproduct(&s, &u) {
        for ((b1, b2), y) in word_coproduct(&s, &v) {
            let k = (a1.concat(&b1), a2.concat(&b2));
            let e = prod.entry(k.clone()).or_insert_with(Rational::zero);
            *e += &x * &y;
            if e.is_zero() {
                prod.remove(&k);
            }
        }
    }
    let uv = [u.clone(), v.clone()].concat();
    check(word_coproduct(&s, &uv) == prod, || format!("multiplicativity fails on {u:?}, {v:?}"))
}

/// `e₁` is an idempotent onto primitives and fixes primitives.
pub fn eulerian_case(seed: u64) -> CaseResult {
    let mut r = rng(seed);
    let s = hp(6);
    let d = 4 * r.gen_range(1..=6);
    let words = s.words_of_degree(d);
    let mut terms = Vec::new();
    for w in &words {
        if r.gen_bool(0.4) {
            terms.push((w.clone(), small_rational(&mut r)));
        }
    }
    let x = TensorElement::from_terms(&s, terms).unwrap();
    let p = x.primitive_projection().unwrap();
    check(p.is_primitive().unwrap(), || format!("e1(x) not primitive (seed {seed})"))?;
    check(p.primitive_projection().unwrap() == p, || format!("e1 not idempotent (seed {seed})"))?;
    let h = hurewicz_of_lie(&random_lie_in_degree(&mut r, &s, d));
    check(h.primitive_projection().unwrap() == h, || format!("e1 moves a primitive (seed {seed})"))
}

const FUZZ_ALPHABET: &[&str] = &[
    "x", "b", "xi", "chi", "1", "2", "3", "0", "/", "*", "+", "-", "[", "]", "<", ">", "(", ")", ",", ".", " ", "q",
    "#", "é", "99999999999999999999", "x1", "x2", "[x1,x2]",
];

/// Arbitrary strings never panic the parser; errors point inside the input.
pub fn parser_fuzz_case(seed: u64) -> CaseResult {
    let mut r = rng(seed);
    let s = hp(6);
    let text: String = if r.gen_bool(0.2) {
        (0..r.gen_range(0..24)).map(|_| r.gen::<char>()).collect()
    } else {
        (0..r.gen_range(0..16)).map(|_| *FUZZ_ALPHABET.choose(&mut r).unwrap()).collect()
    };
    match parse_expr(&text) {
        Err(e) => check(e.position <= text.len(), || format!("error position past end for {text:?}")),
        Ok(e) => {
            // evaluation may fail with a structured error, never a panic
            let _ = reduce(&e, &s);
            let _ = whitealg::tensor_hopf::evaluate_tensor(&e, &s, false);
            Ok(())
        }
    }
}

/// `reduce(parse(format(e))) = e` in both notations.
pub fn format_round_trip_case(seed: u64) -> CaseResult {
    let mut r = rng(seed);
    let s = hp(8);
    let (a, _) = random_lie(&mut r, &s, 32);
    for n in [Notation::Whitehead, Notation::Samelson] {
        let text = format_lie(&a, n);
        let back = reduce(&parse_expr(&text).map_err(|e| format!("{text}: {e:?}"))?, &s).unwrap();
        check(back == a, || format!("format round trip fails on {text}"))?;
    }
    Ok(())
}

/// Lossless JSON for random Lie and tensor elements.
pub fn json_case(seed: u64) -> CaseResult {
    let mut r = rng(seed);
    let s = hp(8);
    let (a, _) = random_lie(&mut r, &s, 32);
    check(from_json::<LieElement>(&to_json(&a)).unwrap() == a, || format!("Lie JSON round trip (seed {seed})"))?;
    let t = embed_assoc(&a).add(&TensorElement::one(&s).scale(&small_rational(&mut r))).unwrap();
    check(from_json::<TensorElement>(&to_json(&t)).unwrap() == t, || format!("tensor JSON round trip (seed {seed})"))
}

// ---------------------------------------------------------------------------
// Witt and necklace oracles
// ---------------------------------------------------------------------------

pub fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Free Lie algebra on one generator in each weight: `n·L_n = Σ_{d|n} μ(n/d)(2^d − 1)`.
pub fn witt_rank(n: u64) -> u64 {
    let total: i64 = (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| mobius(n / d) * ((1i64 << d) - 1))
        .sum();
    (total / n as i64) as u64
}

fn compositions(n: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    (1..=n)
        .flat_map(|first| {
            compositions(n - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Aperiodic necklaces of weight `n`: words strictly smaller than every
/// proper rotation.
pub fn necklace_rank(n: u32) -> u64 {
    compositions(n)
        .into_iter()
        .filter(|w| (1..w.len()).all(|k| *w < [&w[k..], &w[..k]].concat()))
        .count() as u64
}
