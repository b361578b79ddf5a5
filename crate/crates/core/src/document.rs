//! Machine-readable output. Every number is an exact `"p/q"` string.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::elemental::{ElementalSystem, RowKind};
use crate::parser::{render, render_constraint, Query};
use crate::prover::{ProofCertificate, TermSource, ViolatingRay};
use crate::refute::{CheckResult, HintReport};
use crate::shortest::ShortestProofResult;
use crate::Rational;

pub const SCHEMA_VERSION: u32 = 1;

/// A rational that serializes as `"p/q"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactNumber(pub Rational);

impl fmt::Display for ExactNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for ExactNumber {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("not an exact rational: {s:?}");
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d == BigInt::from(0) {
            return Err(bad());
        }
        Ok(ExactNumber(Rational::new(n, d)))
    }
}

impl Serialize for ExactNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn exact(values: &[Rational]) -> Vec<ExactNumber> {
    values.iter().cloned().map(ExactNumber).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Provable,
    NotProvable,
    Confirmed,
    NotConfirmed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryEcho {
    pub parties: Vec<String>,
    /// Canonical `... >= 0` form.
    pub inequality: String,
    /// Canonical `... = 0` forms.
    pub constraints: Vec<String>,
}

impl QueryEcho {
    pub fn new(query: &Query) -> Self {
        QueryEcho {
            parties: query.context.parties().to_vec(),
            inequality: render(&query.b),
            constraints: query.constraints.iter().map(render_constraint).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateTerm {
    pub index: usize,
    /// Elemental row description or canonical constraint.
    pub row: String,
    pub coeff: ExactNumber,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    /// Nonzero entries of `y`.
    pub y: Vec<CertificateTerm>,
    /// Nonzero entries of `mu`, with `y⊤G - mu⊤Q = b⊤`.
    pub mu: Vec<CertificateTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l1_weight: Option<ExactNumber>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub term_count: Option<usize>,
}

impl CertificateDoc {
    pub fn new(cert: &ProofCertificate) -> Self {
        let mut y = Vec::new();
        let mut mu = Vec::new();
        for term in &cert.terms {
            match term.source {
                TermSource::Elemental(index) => y.push(CertificateTerm {
                    index,
                    row: term.description.clone(),
                    coeff: ExactNumber(cert.y[index].clone()),
                }),
                TermSource::Constraint(index) => mu.push(CertificateTerm {
                    index,
                    row: term.description.clone(),
                    coeff: ExactNumber(cert.mu[index].clone()),
                }),
            }
        }
        CertificateDoc {
            y,
            mu,
            l1_weight: None,
            term_count: None,
        }
    }

    pub fn shortest(result: &ShortestProofResult) -> Self {
        CertificateDoc {
            l1_weight: Some(ExactNumber(result.l1_weight.clone())),
            term_count: Some(result.term_count),
            ..Self::new(&result.certificate)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HintsDoc {
    pub tight_equalities: Vec<String>,
    pub constraint_equalities: Vec<String>,
    pub bounds: String,
    pub optimal_value: ExactNumber,
    pub predicted_violation: String,
    pub lambda: Vec<ExactNumber>,
}

impl HintsDoc {
    pub fn new(report: &HintReport) -> Self {
        HintsDoc {
            tight_equalities: report.tight.iter().map(|t| t.equality.clone()).collect(),
            constraint_equalities: report.constraint_equalities.clone(),
            bounds: report.bound_conditions.clone(),
            optimal_value: ExactNumber(report.optimal_value.clone()),
            predicted_violation: report.predicted_violation.clone(),
            lambda: exact(&report.lambda_star),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckDoc {
    pub in_cone: bool,
    pub tight_equalities_hold: bool,
    pub constraints_hold: bool,
    pub bounds_hold: bool,
    pub value: ExactNumber,
    pub vector: Vec<ExactNumber>,
}

impl CheckDoc {
    pub fn new(result: &CheckResult, vector: &[Rational]) -> Self {
        CheckDoc {
            in_cone: result.in_cone,
            tight_equalities_hold: result.tight_equalities_hold,
            constraints_hold: result.constraints_hold,
            bounds_hold: result.bounds_hold,
            value: ExactNumber(result.value.clone()),
            vector: exact(vector),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementalRowDoc {
    pub index: usize,
    /// `ssa` or `wm`.
    pub kind: String,
    pub description: String,
    pub coeffs: Vec<ExactNumber>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementalDoc {
    pub n: usize,
    pub parties: Vec<String>,
    pub rows: Vec<ElementalRowDoc>,
}

impl ElementalDoc {
    pub fn new(system: &ElementalSystem) -> Self {
        let rows = system
            .rows()
            .iter()
            .enumerate()
            .map(|(index, row)| ElementalRowDoc {
                index,
                kind: match row.kind() {
                    RowKind::Ssa { .. } => "ssa".into(),
                    RowKind::Wm { .. } => "wm".into(),
                },
                description: row.describe(),
                coeffs: exact(row.form().coeffs()),
            })
            .collect();
        ElementalDoc {
            n: system.context().n(),
            parties: system.context().parties().to_vec(),
            rows,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_micros: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub schema_version: u32,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query: Option<QueryEcho>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<Status>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hints: Option<HintsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray: Option<Vec<ExactNumber>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elemental: Option<ElementalDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub timing: Timing,
}

impl OutputDocument {
    pub fn new(command: &str) -> Self {
        OutputDocument {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            query: None,
            status: None,
            certificate: None,
            hints: None,
            ray: None,
            check: None,
            elemental: None,
            message: None,
            timing: Timing { elapsed_micros: 0 },
        }
    }

    pub fn with_ray(mut self, ray: &ViolatingRay) -> Self {
        self.ray = Some(exact(ray.s_star().coeffs()));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
