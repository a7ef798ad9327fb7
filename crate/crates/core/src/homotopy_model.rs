//! Whitehead-graded view: schedules for the suspended projective spaces,
//! rank tables of `π_* ⊗ Q`, and truncated Whitehead algebras `L≤n`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr_io::{format_basis, Notation};
use crate::graded_lie::{lyndon_basis, HallBasisElement, LieElement};
use crate::schedule::{Family, GeneratorSchedule};

/// Schedule of the rational wedge modelling `ΣFP^∞`.
///
/// `ΣHP^∞ ≃_Q S^5 ∨ S^9 ∨ …`, `ΣCP^∞ ≃_Q S^3 ∨ S^5 ∨ …`, and `ΣRP^∞` is
/// rationally contractible. Custom schedules go through
/// [`GeneratorSchedule::custom`].
pub fn make_schedule(family: Family, generator_count: usize) -> Result<GeneratorSchedule> {
    match family {
        Family::Hp => Ok(GeneratorSchedule::hp(generator_count)),
        Family::Cp => Ok(GeneratorSchedule::cp(generator_count)),
        Family::Rp => Ok(GeneratorSchedule::rp()),
        Family::Custom => Err(Error::InvalidSchedule(
            "custom schedules need explicit degrees".into(),
        )),
    }
}

/// All generators of Samelson degree at most `max_samelson_degree`.
pub fn schedule_up_to(family: Family, max_samelson_degree: u32) -> Result<GeneratorSchedule> {
    let count = match family {
        Family::Hp => max_samelson_degree / 4,
        Family::Cp => max_samelson_degree / 2,
        _ => 0,
    };
    make_schedule(family, count as usize)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankTableRow {
    pub whitehead_dim: u32,
    pub rank: usize,
    pub basis_expressions: Vec<String>,
}

/// A rank table together with the schedule it was computed from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankTable {
    pub family: Family,
    pub max_whitehead_dim: u32,
    pub rows: Vec<RankTableRow>,
}

/// Nonzero ranks of `π_d ⊗ Q` for `d ≤ max_whitehead_dim`, with bases.
pub fn whitehead_rank_table(schedule: &GeneratorSchedule, max_whitehead_dim: u32) -> Result<Vec<RankTableRow>> {
    let cap = schedule.degree_cap();
    if max_whitehead_dim > cap + 1 {
        return Err(Error::DegreeCapExceeded {
            degree: max_whitehead_dim.saturating_sub(1),
            cap,
        });
    }
    let mut rows = Vec::new();
    for dim in 2..=max_whitehead_dim {
        let basis = lyndon_basis(schedule, dim - 1)?;
        if basis.is_empty() {
            continue;
        }
        rows.push(RankTableRow {
            whitehead_dim: dim,
            rank: basis.len(),
            basis_expressions: basis
                .iter()
                .map(|b| format_basis(schedule, &b.word, Notation::Whitehead))
                .collect(),
        });
    }
    Ok(rows)
}

/// Aligned text rendering of a rank table.
pub fn render_rank_table(rows: &[RankTableRow]) -> String {
    let mut out = String::from("dim  rank  basis\n");
    for r in rows {
        out.push_str(&format!(
            "{:<4} {:<5} {}\n",
            r.whitehead_dim,
            r.rank,
            r.basis_expressions.join(", ")
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingMode {
    /// Integer lattice spanned by the Lyndon basis.
    #[serde(rename = "z")]
    ZLattice,
    #[serde(rename = "q")]
    Rational,
}

impl fmt::Display for RingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RingMode::ZLattice => "z",
            RingMode::Rational => "q",
        })
    }
}

impl FromStr for RingMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "z" => Ok(RingMode::ZLattice),
            "q" => Ok(RingMode::Rational),
            other => Err(format!("unknown ring `{other}` (expected z or q)")),
        }
    }
}

/// `L≤n`: the free Whitehead algebra on `x_1 … x_n`, truncated above the
/// degree of `x_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedAlgebra {
    schedule: Arc<GeneratorSchedule>,
    top_index: usize,
    degree_cap: u32,
    ring: RingMode,
}

pub fn truncated_algebra(schedule: &GeneratorSchedule, n: usize, ring: RingMode) -> Result<TruncatedAlgebra> {
    let truncated = schedule.truncate(n)?;
    let degree_cap = if n == 0 { 0 } else { truncated.degree(n as u32) };
    if degree_cap > truncated.degree_cap() {
        return Err(Error::DegreeCapExceeded {
            degree: degree_cap,
            cap: truncated.degree_cap(),
        });
    }
    Ok(TruncatedAlgebra {
        schedule: Arc::new(truncated),
        top_index: n,
        degree_cap,
        ring,
    })
}

impl TruncatedAlgebra {
    pub fn schedule(&self) -> &Arc<GeneratorSchedule> {
        &self.schedule
    }

    pub fn top_index(&self) -> usize {
        self.top_index
    }

    /// Samelson degree of `x_n`.
    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn ring(&self) -> RingMode {
        self.ring
    }

    pub fn family(&self) -> Family {
        self.schedule.family()
    }

    /// Samelson degree of `x_i`.
    pub fn generator_degree(&self, i: usize) -> u32 {
        self.schedule.degree(i as u32)
    }

    pub fn generator(&self, i: usize) -> Result<LieElement> {
        self.check_index(i)?;
        LieElement::generator(&self.schedule, i)
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i >= 1 && i <= self.top_index {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                max: self.top_index,
            })
        }
    }

    /// Basis of the layer in Samelson degree `d` (empty above the cap).
    pub fn basis(&self, d: u32) -> Vec<HallBasisElement> {
        if d > self.degree_cap {
            return Vec::new();
        }
        lyndon_basis(&self.schedule, d).expect("degree within the cap")
    }

    /// Even degrees with a nonempty layer, ascending.
    pub fn layer_degrees(&self) -> Vec<u32> {
        (1..=self.degree_cap).filter(|&d| !self.basis(d).is_empty()).collect()
    }

    pub fn format(&self, e: &LieElement) -> String {
        crate::expr_io::format_lie(e, Notation::Whitehead)
    }

    pub fn format_basis(&self, b: &HallBasisElement) -> String {
        format_basis(&self.schedule, &b.word, Notation::Whitehead)
    }
}

/// `(I_n L, D_n L)`: the generator `x_n` and the brackets of its degree.
pub fn indecomposables_and_decomposables(
    algebra: &TruncatedAlgebra,
    n: usize,
) -> Result<(Vec<HallBasisElement>, Vec<HallBasisElement>)> {
    algebra.check_index(n)?;
    let (ind, dec) = algebra
        .basis(algebra.generator_degree(n))
        .into_iter()
        .partition(|b| b.is_generator());
    Ok((ind, dec))
}
