//! `whitealg/1` JSON documents: a `schema` field, a `kind` tag and the
//! payload. Coefficients are exact rationals written as strings.

use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::aut_group::{AutReport, ExactSequenceReport, NoncommutingReport, OrderReport, SntReport};
use crate::error::{Error, Result};
use crate::expr_io::{format_basis, format_rational, Notation};
use crate::graded_lie::LieElement;
use crate::homotopy_model::RankTable;
use crate::linalg::Rational;
use crate::schedule::{Family, Generator, GeneratorSchedule, Word};
use crate::tensor_hopf::TensorElement;

pub const SCHEMA: &str = "whitealg/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleJson {
    pub family: Family,
    pub degree_cap: u32,
    pub generators: Vec<Generator>,
}

impl ScheduleJson {
    fn new(s: &GeneratorSchedule) -> Self {
        Self {
            family: s.family(),
            degree_cap: s.degree_cap(),
            generators: s.generators().to_vec(),
        }
    }

    fn build(&self) -> Result<Arc<GeneratorSchedule>> {
        let s = GeneratorSchedule::new(self.family, self.generators.clone())
            .map_err(|e| Error::SchemaMismatch(e.to_string()))?;
        Ok(Arc::new(s.with_degree_cap(self.degree_cap)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub word: Vec<u32>,
    pub coefficient: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expression: Option<String>,
}

fn parse_terms(terms: &[TermJson]) -> Result<Vec<(Word, Rational)>> {
    terms
        .iter()
        .map(|t| {
            let c = Rational::from_str(&t.coefficient)
                .map_err(|_| Error::SchemaMismatch(format!("bad coefficient `{}`", t.coefficient)))?;
            Ok((Word::from(t.word.clone()), c))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuspendedTermJson {
    pub index: u32,
    pub coefficient: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Document {
    LieElement {
        schedule: ScheduleJson,
        terms: Vec<TermJson>,
    },
    TensorElement {
        schedule: ScheduleJson,
        terms: Vec<TermJson>,
    },
    Basis {
        family: Family,
        whitehead_dim: u32,
        rank: usize,
        basis: Vec<String>,
    },
    RankTable(RankTable),
    PrimitiveCheck {
        expression: String,
        method: String,
        primitive: bool,
        decomposable: bool,
    },
    Suspension {
        expression: String,
        value: String,
        terms: Vec<SuspendedTermJson>,
    },
    AutReport(AutReport),
    OrderReport(OrderReport),
    NoncommutingReport(NoncommutingReport),
    ExactSequenceReport(ExactSequenceReport),
    SntReport(SntReport),
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    schema: String,
    #[serde(flatten)]
    document: Document,
}

/// Types with a `whitealg/1` document form.
pub trait JsonValue: Sized {
    fn to_document(&self) -> Document;
    fn from_document(doc: Document) -> Result<Self>;
}

pub fn document_to_json(doc: &Document) -> String {
    let env = Envelope {
        schema: SCHEMA.to_string(),
        document: doc.clone(),
    };
    serde_json::to_string_pretty(&env).expect("documents serialize")
}

pub fn to_json<T: JsonValue>(value: &T) -> String {
    document_to_json(&value.to_document())
}

/// Any `whitealg/1` document.
pub fn from_json_any(text: &str) -> Result<Document> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::MalformedJson(e.to_string()))?;
    match value.get("schema").and_then(Value::as_str) {
        Some(SCHEMA) => {}
        Some(other) => return Err(Error::SchemaMismatch(format!("unsupported schema `{other}`"))),
        None => return Err(Error::SchemaMismatch("missing schema field".into())),
    }
    let env: Envelope = serde_json::from_value(value).map_err(|e| Error::SchemaMismatch(e.to_string()))?;
    Ok(env.document)
}

pub fn from_json<T: JsonValue>(text: &str) -> Result<T> {
    T::from_document(from_json_any(text)?)
}

fn wrong_kind(expected: &str) -> Error {
    Error::SchemaMismatch(format!("expected a {expected} document"))
}

impl JsonValue for LieElement {
    fn to_document(&self) -> Document {
        let s = self.schedule();
        Document::LieElement {
            schedule: ScheduleJson::new(s),
            terms: self
                .terms()
                .into_iter()
                .map(|(b, c)| TermJson {
                    expression: Some(format_basis(s, &b.word, Notation::Whitehead)),
                    word: b.word.0,
                    coefficient: format_rational(c),
                })
                .collect(),
        }
    }

    fn from_document(doc: Document) -> Result<Self> {
        let Document::LieElement { schedule, terms } = doc else {
            return Err(wrong_kind("lie_element"));
        };
        LieElement::from_terms(&schedule.build()?, parse_terms(&terms)?)
            .map_err(|e| Error::SchemaMismatch(e.to_string()))
    }
}

impl JsonValue for TensorElement {
    fn to_document(&self) -> Document {
        Document::TensorElement {
            schedule: ScheduleJson::new(self.schedule()),
            terms: self
                .terms()
                .into_iter()
                .map(|(w, c)| TermJson {
                    word: w.0.clone(),
                    coefficient: format_rational(c),
                    expression: None,
                })
                .collect(),
        }
    }

    fn from_document(doc: Document) -> Result<Self> {
        let Document::TensorElement { schedule, terms } = doc else {
            return Err(wrong_kind("tensor_element"));
        };
        TensorElement::from_terms(&schedule.build()?, parse_terms(&terms)?)
            .map_err(|e| Error::SchemaMismatch(e.to_string()))
    }
}

macro_rules! report_json {
    ($ty:ty, $variant:ident, $kind:literal) => {
        impl JsonValue for $ty {
            fn to_document(&self) -> Document {
                Document::$variant(self.clone())
            }

            fn from_document(doc: Document) -> Result<Self> {
                match doc {
                    Document::$variant(v) => Ok(v),
                    _ => Err(wrong_kind($kind)),
                }
            }
        }
    };
}

report_json!(RankTable, RankTable, "rank_table");
report_json!(AutReport, AutReport, "aut_report");
report_json!(OrderReport, OrderReport, "order_report");
report_json!(NoncommutingReport, NoncommutingReport, "noncommuting_report");
report_json!(ExactSequenceReport, ExactSequenceReport, "exact_sequence_report");
report_json!(SntReport, SntReport, "snt_report");
