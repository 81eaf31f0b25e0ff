use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PointSetError {
    #[error("point set is empty")]
    Empty,
    #[error("point {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("points must have dimension at least 1")]
    ZeroDimension,
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("points {i} and {j} coincide")]
    Duplicate { i: usize, j: usize },
    #[error("{labels} labels for {points} points")]
    LabelCount { labels: usize, points: usize },
}

/// Ordered finite list of points in `R^n`.
///
/// JSON accepts either a bare list of coordinate arrays or
/// `{"points": [...], "labels": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "PointSetRepr")]
pub struct PointSet {
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PointSetRepr {
    Bare(Vec<Vec<f64>>),
    Full {
        points: Vec<Vec<f64>>,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
}

impl From<PointSetRepr> for PointSet {
    fn from(r: PointSetRepr) -> Self {
        match r {
            PointSetRepr::Bare(points) => PointSet { points, labels: None },
            PointSetRepr::Full { points, labels } => PointSet { points, labels },
        }
    }
}

impl PointSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self, PointSetError> {
        let s = PointSet { points, labels: None };
        s.validate()?;
        Ok(s)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, PointSetError> {
        if labels.len() != self.points.len() {
            return Err(PointSetError::LabelCount {
                labels: labels.len(),
                points: self.points.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Standard basis `e_1, …, e_n`.
    pub fn standard_basis(n: usize) -> Self {
        PointSet {
            points: (0..n).map(|i| linalg::unit(n, i)).collect(),
            labels: None,
        }
    }

    /// The `2^n` vertices of `{±1}^n`.
    pub fn cube_vertices(n: usize) -> Self {
        PointSet {
            points: (0..1usize << n)
                .map(|mask| {
                    (0..n)
                        .map(|k| if (mask >> k) & 1 == 1 { 1.0 } else { -1.0 })
                        .collect()
                })
                .collect(),
            labels: None,
        }
    }

    pub fn validate(&self) -> Result<(), PointSetError> {
        let first = self.points.first().ok_or(PointSetError::Empty)?;
        let dim = first.len();
        if dim == 0 {
            return Err(PointSetError::ZeroDimension);
        }
        for (index, p) in self.points.iter().enumerate() {
            if p.len() != dim {
                return Err(PointSetError::DimensionMismatch {
                    index,
                    expected: dim,
                    found: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(PointSetError::NonFinite { index });
            }
        }
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                if linalg::max_abs(&linalg::sub(&self.points[i], &self.points[j])) <= 1e-12 {
                    return Err(PointSetError::Duplicate { i, j });
                }
            }
        }
        if let Some(l) = &self.labels {
            if l.len() != self.points.len() {
                return Err(PointSetError::LabelCount {
                    labels: l.len(),
                    points: self.points.len(),
                });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        PointSet {
            points: self.points.iter().map(|p| linalg::scale(p, lambda)).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Unordered index pairs `(i, j)` with `i < j`, in lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_forms() {
        let a: PointSet = serde_json::from_str("[[1, 0], [0, 1]]").unwrap();
        let b: PointSet = serde_json::from_str(r#"{"points": [[1, 0], [0, 1]]}"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, PointSet::standard_basis(2));
    }

    #[test]
    fn rejects_bad_sets() {
        assert_eq!(PointSet::new(vec![]), Err(PointSetError::Empty));
        assert_eq!(
            PointSet::new(vec![vec![1.0], vec![1.0, 2.0]]),
            Err(PointSetError::DimensionMismatch { index: 1, expected: 1, found: 2 })
        );
        assert_eq!(
            PointSet::new(vec![vec![1.0], vec![1.0]]),
            Err(PointSetError::Duplicate { i: 0, j: 1 })
        );
    }

    #[test]
    fn cube_has_all_sign_patterns() {
        let c = PointSet::cube_vertices(3);
        assert_eq!(c.len(), 8);
        c.validate().unwrap();
    }
}
