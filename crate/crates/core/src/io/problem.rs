use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ConeKind, NominalProblem};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConeDocument {
    Nonneg {},
    Soc {},
    Psd { q: usize },
    SvmProduct { s: usize, m_svm: usize },
}

/// On-disk JSON form of a problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    pub m: usize,
    pub cone: ConeDocument,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

impl ProblemDocument {
    pub fn from_problem(p: &NominalProblem, name: Option<String>) -> Self {
        let cone = match p.cone {
            ConeKind::NonnegOrthant { .. } => ConeDocument::Nonneg {},
            ConeKind::SecondOrderCone { .. } => ConeDocument::Soc {},
            ConeKind::PsdCone { q } => ConeDocument::Psd { q },
            ConeKind::Product {
                soc_dim,
                orthant_dim,
            } => ConeDocument::SvmProduct {
                s: soc_dim - 1,
                m_svm: orthant_dim,
            },
        };
        ProblemDocument {
            name,
            n: p.n(),
            m: p.m(),
            cone,
            a: (0..p.m())
                .map(|i| p.a_bar.row(i).iter().copied().collect())
                .collect(),
            b: p.b_bar.iter().copied().collect(),
        }
    }

    pub fn to_problem(&self) -> Result<NominalProblem> {
        if self.a.len() != self.m {
            return Err(Error::SchemaError(format!(
                "key \"A\": {} rows, expected m = {}",
                self.a.len(),
                self.m
            )));
        }
        if let Some((i, row)) = self.a.iter().enumerate().find(|(_, r)| r.len() != self.n) {
            return Err(Error::SchemaError(format!(
                "key \"A\": row {i} has {} entries, expected n = {}",
                row.len(),
                self.n
            )));
        }
        if self.b.len() != self.m {
            return Err(Error::SchemaError(format!(
                "key \"b\": length {}, expected m = {}",
                self.b.len(),
                self.m
            )));
        }
        let cone = match self.cone {
            ConeDocument::Nonneg {} => ConeKind::NonnegOrthant { m: self.m },
            ConeDocument::Soc {} => ConeKind::SecondOrderCone { m: self.m },
            ConeDocument::Psd { q } => ConeKind::PsdCone { q },
            ConeDocument::SvmProduct { s, m_svm } => ConeKind::Product {
                soc_dim: s + 1,
                orthant_dim: m_svm,
            },
        };
        NominalProblem::from_rows(&self.a, &self.b, cone)
    }
}

pub fn parse_problem_document(text: &str) -> Result<ProblemDocument> {
    serde_json::from_str(text).map_err(|e| Error::SchemaError(e.to_string()))
}

/// Parses and validates a problem document.
pub fn parse_problem(text: &str) -> Result<NominalProblem> {
    parse_problem_document(text)?.to_problem()
}

/// Canonical pretty-printed JSON with a trailing newline.
pub fn serialize_document(doc: &ProblemDocument) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("documents always serialize");
    out.push('\n');
    out
}

pub fn serialize_problem(p: &NominalProblem) -> String {
    serialize_document(&ProblemDocument::from_problem(p, None))
}
