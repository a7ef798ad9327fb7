//! Generator schedules and words over them.
//!
//! A schedule is the ordered list of sphere generators of a rational wedge
//! `S^{d_1} ∨ S^{d_2} ∨ …`. Generator `i` (1-based) carries a Whitehead
//! degree `d_i` and a Samelson degree `d_i - 1`; all internal gradings use
//! the Samelson degree.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default Samelson degree cap for basis enumeration.
pub const DEFAULT_DEGREE_CAP: u32 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Hp,
    Cp,
    Rp,
    Custom,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Hp => "hp",
            Family::Cp => "cp",
            Family::Rp => "rp",
            Family::Custom => "custom",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hp" => Ok(Family::Hp),
            "cp" => Ok(Family::Cp),
            "rp" => Ok(Family::Rp),
            "custom" => Ok(Family::Custom),
            other => Err(format!("unknown family `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub whitehead_degree: u32,
    pub samelson_degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorSchedule {
    family: Family,
    generators: Vec<Generator>,
    degree_cap: u32,
}

impl GeneratorSchedule {
    /// Validates and builds a schedule from explicit generators.
    pub fn new(family: Family, generators: Vec<Generator>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut prev = 0;
        for (pos, g) in generators.iter().enumerate() {
            if g.whitehead_degree == 0 || g.samelson_degree + 1 != g.whitehead_degree {
                return Err(Error::InvalidSchedule(format!(
                    "generator {} must have samelson_degree = whitehead_degree - 1 > 0",
                    g.name
                )));
            }
            if g.samelson_degree == 0 {
                return Err(Error::InvalidSchedule(format!(
                    "generator {} has Samelson degree 0",
                    g.name
                )));
            }
            if g.samelson_degree % 2 == 1 {
                return Err(Error::OddParityUnsupported {
                    name: g.name.clone(),
                    degree: g.samelson_degree,
                });
            }
            if g.whitehead_degree <= prev {
                return Err(Error::InvalidSchedule(
                    "Whitehead degrees must strictly increase".into(),
                ));
            }
            prev = g.whitehead_degree;
            if !seen.insert(g.name.as_str()) {
                return Err(Error::InvalidSchedule(format!("duplicate name {}", g.name)));
            }
            let i = pos as u32 + 1;
            let expected = match family {
                Family::Hp => Some(4 * i + 1),
                Family::Cp => Some(2 * i + 1),
                Family::Rp => {
                    return Err(Error::InvalidSchedule(
                        "the RP family has no rational generators".into(),
                    ))
                }
                Family::Custom => None,
            };
            if let Some(w) = expected {
                if g.whitehead_degree != w {
                    return Err(Error::InvalidSchedule(format!(
                        "generator {} of family {family} must have Whitehead degree {w}",
                        g.name
                    )));
                }
            }
        }
        Ok(Self {
            family,
            generators,
            degree_cap: DEFAULT_DEGREE_CAP,
        })
    }

    /// `S^5 ∨ S^9 ∨ … ∨ S^{4k+1}`, generators `x1 … xk`.
    pub fn hp(count: usize) -> Self {
        let generators = (1..=count as u32)
            .map(|i| Generator {
                name: format!("x{i}"),
                whitehead_degree: 4 * i + 1,
                samelson_degree: 4 * i,
            })
            .collect();
        Self::new(Family::Hp, generators).expect("HP schedule is valid")
    }

    /// `S^3 ∨ S^5 ∨ … ∨ S^{2k+1}`, generators named by dimension `xi3, xi5, …`.
    pub fn cp(count: usize) -> Self {
        let generators = (1..=count as u32)
            .map(|i| Generator {
                name: format!("xi{}", 2 * i + 1),
                whitehead_degree: 2 * i + 1,
                samelson_degree: 2 * i,
            })
            .collect();
        Self::new(Family::Cp, generators).expect("CP schedule is valid")
    }

    pub fn rp() -> Self {
        Self {
            family: Family::Rp,
            generators: Vec::new(),
            degree_cap: DEFAULT_DEGREE_CAP,
        }
    }

    /// Custom schedule from Samelson degrees, generators named `x1, x2, …`.
    pub fn custom(samelson_degrees: &[u32]) -> Result<Self> {
        let generators = samelson_degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| Generator {
                name: format!("x{}", i + 1),
                whitehead_degree: d + 1,
                samelson_degree: d,
            })
            .collect();
        Self::new(Family::Custom, generators)
    }

    pub fn with_degree_cap(mut self, cap: u32) -> Self {
        self.degree_cap = cap;
        self
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    /// Samelson degree of generator `index` (1-based).
    pub fn degree(&self, index: u32) -> u32 {
        self.generators[index as usize - 1].samelson_degree
    }

    pub fn name(&self, index: u32) -> &str {
        &self.generators[index as usize - 1].name
    }

    pub fn contains(&self, index: u32) -> bool {
        index >= 1 && index as usize <= self.generators.len()
    }

    pub fn check_index(&self, index: usize) -> Result<u32> {
        if index >= 1 && index <= self.generators.len() {
            Ok(index as u32)
        } else {
            Err(Error::IndexOutOfRange {
                index,
                max: self.generators.len(),
            })
        }
    }

    pub fn word_degree(&self, word: &[u32]) -> u32 {
        word.iter().map(|&i| self.degree(i)).sum()
    }

    /// The first `n` generators, keeping family and cap.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n > self.generators.len() {
            return Err(Error::IndexOutOfRange {
                index: n,
                max: self.generators.len(),
            });
        }
        Ok(Self {
            family: self.family,
            generators: self.generators[..n].to_vec(),
            degree_cap: self.degree_cap,
        })
    }

    /// True when every generator degree is a multiple of the first one by its
    /// index, i.e. the degrees are those of the cells of a projective space.
    /// The coproduct uses the divided-power rule exactly in this case.
    pub fn has_divided_powers(&self) -> bool {
        match self.generators.first() {
            None => true,
            Some(first) => self
                .generators
                .iter()
                .enumerate()
                .all(|(i, g)| g.samelson_degree == (i as u32 + 1) * first.samelson_degree),
        }
    }

    /// Resolves `x<i>`, `b<i>`, `chi<i>` (by index) or `xi<d>` (by Whitehead
    /// dimension) against this schedule.
    pub fn resolve(&self, name: &str) -> Result<u32> {
        let unknown = || Error::UnknownGenerator(name.to_string());
        let split = name
            .find(|c: char| c.is_ascii_digit())
            .ok_or_else(unknown)?;
        let (prefix, digits) = name.split_at(split);
        let n: usize = digits.parse().map_err(|_| unknown())?;
        match prefix {
            "x" | "b" | "chi" => {
                if n >= 1 && n <= self.generators.len() {
                    Ok(n as u32)
                } else {
                    Err(unknown())
                }
            }
            "xi" => self
                .generators
                .iter()
                .position(|g| g.whitehead_degree as usize == n)
                .map(|p| p as u32 + 1)
                .ok_or_else(unknown),
            _ => Err(unknown()),
        }
    }

    /// All words whose letter degrees sum to `degree`, in lexicographic order.
    pub fn words_of_degree(&self, degree: u32) -> Vec<Word> {
        fn go(s: &GeneratorSchedule, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Word>) {
            if rem == 0 {
                out.push(Word(cur.clone()));
                return;
            }
            for i in 1..=s.len() as u32 {
                let d = s.degree(i);
                if d > rem {
                    break;
                }
                cur.push(i);
                go(s, rem - d, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if degree > 0 {
            go(self, degree, &mut Vec::new(), &mut out);
        }
        out
    }
}

/// A word in the generators, letters are 1-based generator indices.
///
/// Ordering is plain lexicographic with a proper prefix sorting first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: u32) -> Self {
        Word(vec![i])
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl Deref for Word {
    type Target = [u32];

    fn deref(&self) -> &[u32] {
        &self.0
    }
}

impl std::borrow::Borrow<[u32]> for Word {
    fn borrow(&self) -> &[u32] {
        &self.0
    }
}

impl From<Vec<u32>> for Word {
    fn from(v: Vec<u32>) -> Self {
        Word(v)
    }
}

impl From<&[u32]> for Word {
    fn from(v: &[u32]) -> Self {
        Word(v.to_vec())
    }
}
