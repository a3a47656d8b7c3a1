//! On-disk document formats: group specs and state files.
//!
//! Both are JSON. A group-spec document carries the multiplication table
//! row-major, the metric row-major, and optionally explicit irreducible
//! representations (required for non-catalog nonabelian groups). A state file
//! carries either a probability weight vector over group elements or a
//! density matrix, row-major, as (re, im) pairs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{
    validate_group, FiniteMetricGroup, GroupOrigin, SuppliedIrrep, ValidationReport,
};
use crate::linalg::{CMat, C64};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("document is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed document: {0}")]
    Shape(String),
    #[error("group validation failed: {} violation(s), first: {}", .0.violations.len(), .0.violations[0])]
    Validation(ValidationReport),
}

/// Group-spec document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupSpecDoc {
    pub name: String,
    pub order: usize,
    pub labels: Vec<String>,
    /// Row-major `order × order` table of element indices.
    pub mult_table: Vec<usize>,
    /// Row-major `order × order` matrix of nonnegative distances.
    pub metric: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irreps: Option<Vec<IrrepDoc>>,
}

/// One irreducible representation inside a group-spec document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IrrepDoc {
    pub label: String,
    pub dim: usize,
    /// Per group element, row-major `dim × dim` entries as `[re, im]`.
    pub matrices: Vec<Vec<[f64; 2]>>,
}

/// Parse and fully validate a group-spec document.
pub fn load_group_spec(text: &str) -> Result<FiniteMetricGroup, FormatError> {
    let (group, report) = load_group_spec_lenient(text)?;
    if !report.is_valid() {
        return Err(FormatError::Validation(report));
    }
    Ok(group)
}

/// Parse a group-spec document and return the axiom scan alongside the
/// group instead of failing on violations. Structural problems (bad JSON,
/// wrong table shapes, missing inverses) still error.
pub fn load_group_spec_lenient(
    text: &str,
) -> Result<(FiniteMetricGroup, ValidationReport), FormatError> {
    let doc: GroupSpecDoc = serde_json::from_str(text)?;
    let group = group_from_doc_unchecked(doc)?;
    let report = validate_group(&group);
    Ok((group, report))
}

pub fn group_from_doc(doc: GroupSpecDoc) -> Result<FiniteMetricGroup, FormatError> {
    let group = group_from_doc_unchecked(doc)?;
    let report = validate_group(&group);
    if !report.is_valid() {
        return Err(FormatError::Validation(report));
    }
    Ok(group)
}

fn group_from_doc_unchecked(doc: GroupSpecDoc) -> Result<FiniteMetricGroup, FormatError> {
    let n = doc.order;
    if n == 0 {
        return Err(FormatError::Shape("order must be positive".to_string()));
    }
    if doc.labels.len() != n {
        return Err(FormatError::Shape(format!(
            "expected {n} labels, got {}",
            doc.labels.len()
        )));
    }
    if doc.mult_table.len() != n * n {
        return Err(FormatError::Shape(format!(
            "mult_table must have {} entries, got {}",
            n * n,
            doc.mult_table.len()
        )));
    }
    if let Some(&bad) = doc.mult_table.iter().find(|&&e| e >= n) {
        return Err(FormatError::Shape(format!(
            "mult_table entry {bad} out of range for order {n}"
        )));
    }
    if doc.metric.len() != n * n {
        return Err(FormatError::Shape(format!(
            "metric must have {} entries, got {}",
            n * n,
            doc.metric.len()
        )));
    }

    let inv = (0..n)
        .map(|a| {
            (0..n)
                .find(|&b| doc.mult_table[a * n + b] == 0 && doc.mult_table[b * n + a] == 0)
                .ok_or_else(|| FormatError::Shape(format!("element {a} has no two-sided inverse")))
        })
        .collect::<Result<Vec<usize>, FormatError>>()?;

    let irreps = match doc.irreps {
        None => None,
        Some(docs) => {
            let mut out = Vec::with_capacity(docs.len());
            for d in docs {
                if d.dim == 0 {
                    return Err(FormatError::Shape(format!("irrep {} has dim 0", d.label)));
                }
                if d.matrices.len() != n {
                    return Err(FormatError::Shape(format!(
                        "irrep {} must have one matrix per element",
                        d.label
                    )));
                }
                let mut matrices = Vec::with_capacity(n);
                for (g, m) in d.matrices.iter().enumerate() {
                    if m.len() != d.dim * d.dim {
                        return Err(FormatError::Shape(format!(
                            "irrep {} matrix for element {g} has {} entries, expected {}",
                            d.label,
                            m.len(),
                            d.dim * d.dim
                        )));
                    }
                    matrices.push(m.iter().map(|&[re, im]| (re, im)).collect());
                }
                out.push(SuppliedIrrep {
                    label: d.label,
                    dim: d.dim,
                    matrices,
                });
            }
            Some(out)
        }
    };

    Ok(FiniteMetricGroup {
        name: doc.name,
        order: n,
        labels: doc.labels,
        mult: doc.mult_table,
        inv,
        identity: 0,
        metric: doc.metric,
        origin: GroupOrigin::Document { irreps },
    })
}

/// State file: one of `weights` or `density` must be present.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFileDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<Vec<[f64; 2]>>,
}

/// A parsed state file.
#[derive(Debug, Clone)]
pub enum StateSpec {
    /// Probability weights over group elements.
    Weights(Vec<f64>),
    /// Density matrix on the truncated Hilbert space.
    Density(CMat),
}

pub fn parse_state_file(text: &str) -> Result<StateSpec, FormatError> {
    let doc: StateFileDoc = serde_json::from_str(text)?;
    match (doc.weights, doc.density) {
        (Some(w), None) => Ok(StateSpec::Weights(w)),
        (None, Some(entries)) => {
            let k2 = entries.len();
            let k = (k2 as f64).sqrt().round() as usize;
            if k * k != k2 {
                return Err(FormatError::Shape(format!(
                    "density must be a square matrix, got {k2} entries"
                )));
            }
            let data: Vec<C64> = entries.iter().map(|&[re, im]| C64::new(re, im)).collect();
            Ok(StateSpec::Density(CMat::from_row_slice(k, k, &data)))
        }
        (Some(_), Some(_)) => Err(FormatError::Shape(
            "state file must not contain both weights and density".to_string(),
        )),
        (None, None) => Err(FormatError::Shape(
            "state file needs either weights or density".to_string(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Violation;

    fn z2_doc() -> String {
        serde_json::json!({
            "name": "z2",
            "order": 2,
            "labels": ["e", "a"],
            "mult_table": [0, 1, 1, 0],
            "metric": [0.0, 1.0, 1.0, 0.0],
        })
        .to_string()
    }

    #[test]
    fn loads_z2() {
        let g = load_group_spec(&z2_doc()).unwrap();
        assert_eq!(g.order, 2);
        assert_eq!(g.inv, vec![0, 1]);
        assert_eq!(g.dist(0, 1), 1.0);
    }

    #[test]
    fn loads_z4_word_metric() {
        let doc = serde_json::json!({
            "name": "z4",
            "order": 4,
            "labels": ["0", "1", "2", "3"],
            "mult_table": [
                0, 1, 2, 3,
                1, 2, 3, 0,
                2, 3, 0, 1,
                3, 0, 1, 2
            ],
            "metric": [
                0.0, 1.0, 2.0, 1.0,
                1.0, 0.0, 1.0, 2.0,
                2.0, 1.0, 0.0, 1.0,
                1.0, 2.0, 1.0, 0.0
            ],
        })
        .to_string();
        let g = load_group_spec(&doc).unwrap();
        assert_eq!(g.dist(0, 2), 2.0);
        assert_eq!(g.dist(1, 3), 2.0);
    }

    #[test]
    fn diagonal_error_names_the_axiom() {
        let doc = serde_json::json!({
            "name": "z3bad",
            "order": 3,
            "labels": ["0", "1", "2"],
            "mult_table": [0,1,2, 1,2,0, 2,0,1],
            "metric": [1.0,1.0,1.0, 1.0,0.0,1.0, 1.0,1.0,0.0],
        })
        .to_string();
        let err = load_group_spec(&doc).unwrap_err();
        let FormatError::Validation(report) = err else {
            panic!("expected validation error, got {err}");
        };
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::MetricDiagonalNonzero { x: 0, .. })));
        assert!(err_to_string_mentions_diagonal(&FormatError::Validation(
            report
        )));
    }

    fn err_to_string_mentions_diagonal(err: &FormatError) -> bool {
        err.to_string().contains("diagonal")
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        assert!(matches!(
            load_group_spec("{ not json"),
            Err(FormatError::Json(_))
        ));
    }

    #[test]
    fn state_file_variants() {
        let w = parse_state_file(r#"{"weights": [0.5, 0.5]}"#).unwrap();
        assert!(matches!(w, StateSpec::Weights(ref v) if v.len() == 2));
        let d =
            parse_state_file(r#"{"density": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]}"#)
                .unwrap();
        let StateSpec::Density(m) = d else { panic!() };
        assert_eq!(m.shape(), (2, 2));
        assert!(parse_state_file(r#"{}"#).is_err());
    }
}
