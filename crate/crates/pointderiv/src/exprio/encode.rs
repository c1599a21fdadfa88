//! JSON interchange for series and check reports.
//!
//! ```json
//! {"format": 1,
//!  "context": [{"name": "a", "kind": "const"}, {"name": "x", "kind": "var"}],
//!  "valid_order": "inf",
//!  "terms": [{"word": ["a", "x"], "coeff": "-3/2"}]}
//! ```
//!
//! Coefficients are reduced fractions written as strings, so round trips are
//! exact. Decoding is strict: anything the encoder would not produce is an
//! error.

use std::collections::BTreeSet;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Duration;

use pointderiv_core::alphabet::RESERVED_PREFIX;
use pointderiv_core::identities::{CheckReport, Failure};
use pointderiv_core::{Coeff, Context, Order, Series, SymbolKind};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("malformed document: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("unsupported format version {0}")]
    UnsupportedFormat(u32),
    #[error("invalid symbol `{0}`")]
    InvalidSymbol(String),
    #[error("unknown symbol kind `{0}`")]
    UnknownKind(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("invalid valid_order `{0}`")]
    InvalidOrder(String),
    #[error("non-canonical rational `{0}`")]
    NonCanonicalRational(String),
    #[error("zero coefficient on word {0:?}")]
    ZeroCoefficient(Vec<String>),
    #[error("word {0:?} appears twice")]
    DuplicateWord(Vec<String>),
    #[error("word {0:?} lies above the validity order")]
    BeyondValidity(Vec<String>),
    #[error("unknown verdict `{0}`")]
    UnknownVerdict(String),
    #[error("verdict does not match the failures listed for `{0}`")]
    InconsistentVerdict(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesDoc {
    format: u32,
    context: Vec<SymbolDoc>,
    valid_order: OrderDoc,
    terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolDoc {
    name: String,
    kind: String,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum OrderDoc {
    Finite(u32),
    Named(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    word: Vec<String>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReportsDoc {
    format: u32,
    reports: Vec<ReportDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReportDoc {
    check_name: String,
    trials: u64,
    verdict: String,
    failure_count: u64,
    elapsed_us: u64,
    failures: Vec<FailureDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FailureDoc {
    inputs: String,
    word: String,
    expected: String,
    actual: String,
}

fn kind_name(kind: SymbolKind) -> &'static str {
    match kind {
        SymbolKind::Constant => "const",
        SymbolKind::Variable => "var",
    }
}

pub fn encode_series(f: &Series) -> String {
    let ctx = f.context();
    let doc = SeriesDoc {
        format: FORMAT_VERSION,
        context: ctx
            .symbols()
            .map(|(_, s)| SymbolDoc {
                name: s.name().into(),
                kind: kind_name(s.kind()).into(),
            })
            .collect(),
        valid_order: match f.valid_order() {
            Order::Finite(n) => OrderDoc::Finite(n),
            Order::Infinite => OrderDoc::Named("inf".into()),
        },
        terms: f
            .canonical_terms()
            .into_iter()
            .map(|(w, c)| TermDoc {
                word: w.letters().iter().map(|&id| ctx.name(id).to_string()).collect(),
                coeff: c.to_string(),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("series documents serialize")
}

pub fn decode_series(text: &str) -> Result<Series, DecodeError> {
    let doc: SeriesDoc = serde_json::from_str(text)?;
    if doc.format != FORMAT_VERSION {
        return Err(DecodeError::UnsupportedFormat(doc.format));
    }
    let mut ctx = Context::new();
    for sym in &doc.context {
        let declared = match sym.kind.as_str() {
            "const" if sym.name.starts_with(RESERVED_PREFIX) => ctx.declare_reserved(&sym.name),
            "const" => ctx.declare(&sym.name, SymbolKind::Constant),
            "var" => ctx.declare(&sym.name, SymbolKind::Variable),
            other => return Err(DecodeError::UnknownKind(other.into())),
        };
        declared.map_err(|_| DecodeError::InvalidSymbol(sym.name.clone()))?;
    }
    let ctx = Arc::new(ctx);
    let valid = match doc.valid_order {
        OrderDoc::Finite(n) => Order::Finite(n),
        OrderDoc::Named(s) if s == "inf" => Order::Infinite,
        OrderDoc::Named(s) => return Err(DecodeError::InvalidOrder(s)),
    };
    let mut seen = BTreeSet::new();
    let mut terms = Vec::with_capacity(doc.terms.len());
    for term in doc.terms {
        let ids = term
            .word
            .iter()
            .map(|name| ctx.lookup(name).ok_or_else(|| DecodeError::UnknownSymbol(name.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let word = ctx.word_from_ids(ids);
        let c = Coeff::from_str(&term.coeff)
            .ok()
            .filter(|c| c.to_string() == term.coeff)
            .ok_or_else(|| DecodeError::NonCanonicalRational(term.coeff.clone()))?;
        if c == Coeff::from_integer(0.into()) {
            return Err(DecodeError::ZeroCoefficient(term.word));
        }
        if !valid.admits(word.degree()) {
            return Err(DecodeError::BeyondValidity(term.word));
        }
        if !seen.insert(word.clone()) {
            return Err(DecodeError::DuplicateWord(term.word));
        }
        terms.push((word, c));
    }
    Ok(Series::from_terms(&ctx, terms, valid).expect("words built from this context"))
}

pub fn encode_reports(reports: &[CheckReport]) -> String {
    let doc = ReportsDoc {
        format: FORMAT_VERSION,
        reports: reports
            .iter()
            .map(|r| ReportDoc {
                check_name: r.check_name.clone(),
                trials: r.trials,
                verdict: if r.passed() { "pass" } else { "fail" }.into(),
                failure_count: r.failure_count,
                elapsed_us: u64::try_from(r.elapsed.as_micros()).unwrap_or(u64::MAX),
                failures: r
                    .failures
                    .iter()
                    .map(|f| FailureDoc {
                        inputs: f.inputs.clone(),
                        word: f.word.clone(),
                        expected: f.expected.clone(),
                        actual: f.actual.clone(),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("report documents serialize")
}

pub fn decode_reports(text: &str) -> Result<Vec<CheckReport>, DecodeError> {
    let doc: ReportsDoc = serde_json::from_str(text)?;
    if doc.format != FORMAT_VERSION {
        return Err(DecodeError::UnsupportedFormat(doc.format));
    }
    doc.reports
        .into_iter()
        .map(|r| {
            let passed = match r.verdict.as_str() {
                "pass" => true,
                "fail" => false,
                other => return Err(DecodeError::UnknownVerdict(other.into())),
            };
            if passed != r.failures.is_empty() || (r.failures.len() as u64) > r.failure_count {
                return Err(DecodeError::InconsistentVerdict(r.check_name));
            }
            let mut report = CheckReport::new(&r.check_name);
            report.trials = r.trials;
            report.failure_count = r.failure_count;
            report.elapsed = Duration::from_micros(r.elapsed_us);
            report.failures = r
                .failures
                .into_iter()
                .map(|f| Failure {
                    inputs: f.inputs,
                    word: f.word,
                    expected: f.expected,
                    actual: f.actual,
                })
                .collect();
            Ok(report)
        })
        .collect()
}
