use crate::error::{MetricError, Result};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Declared axioms of a space. A declaration is a guarantee, not a maximal
/// description: a metric space may legitimately be declared `PseudoMetric`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Metric,
    Ultrametric,
    PseudoMetric,
    PseudoUltrametric,
}

impl Kind {
    pub fn is_ultra(self) -> bool {
        matches!(self, Kind::Ultrametric | Kind::PseudoUltrametric)
    }

    pub fn is_separated(self) -> bool {
        matches!(self, Kind::Metric | Kind::Ultrametric)
    }

    /// The same axioms minus separation.
    pub fn pseudo(self) -> Kind {
        match self {
            Kind::Metric | Kind::PseudoMetric => Kind::PseudoMetric,
            Kind::Ultrametric | Kind::PseudoUltrametric => Kind::PseudoUltrametric,
        }
    }

    /// The same axioms plus separation.
    pub fn separated(self) -> Kind {
        match self {
            Kind::Metric | Kind::PseudoMetric => Kind::Metric,
            Kind::Ultrametric | Kind::PseudoUltrametric => Kind::Ultrametric,
        }
    }

    /// Weakest kind implied by both (ultra only if both ultra, separated only
    /// if both separated).
    pub fn meet(self, other: Kind) -> Kind {
        let ultra = self.is_ultra() && other.is_ultra();
        let sep = self.is_separated() && other.is_separated();
        match (ultra, sep) {
            (true, true) => Kind::Ultrametric,
            (true, false) => Kind::PseudoUltrametric,
            (false, true) => Kind::Metric,
            (false, false) => Kind::PseudoMetric,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Metric => "metric",
            Kind::Ultrametric => "ultrametric",
            Kind::PseudoMetric => "pseudo_metric",
            Kind::PseudoUltrametric => "pseudo_ultrametric",
        };
        f.write_str(s)
    }
}

/// A violated triangle: d(i,j) exceeds the bound through k by `excess`.
#[derive(Clone, Debug, Serialize)]
pub struct TriangleViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub excess: f64,
}

/// Exhaustive axiom audit over all O(n^3) triples.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub pseudo_metric: bool,
    pub metric: bool,
    pub pseudo_ultrametric: bool,
    pub ultrametric: bool,
    /// Worst weak-triangle violation, if any.
    pub worst_triangle: Option<TriangleViolation>,
    /// Worst strong-triangle violation, if any.
    pub worst_strong_triangle: Option<TriangleViolation>,
    /// A distinct pair at distance zero (breaks separation), if any.
    pub zero_pair: Option<(usize, usize)>,
    /// Float comparison tolerance used (max(1e-12, 1e-12 * diameter)).
    pub tolerance: f64,
}

impl ValidationReport {
    pub fn satisfies(&self, kind: Kind) -> bool {
        match kind {
            Kind::Metric => self.metric,
            Kind::Ultrametric => self.ultrametric,
            Kind::PseudoMetric => self.pseudo_metric,
            Kind::PseudoUltrametric => self.pseudo_ultrametric,
        }
    }
}

/// Beyond this size, constructors skip the O(n^3) kind audit; operations
/// guarantee their outputs by construction and `validate` stays available.
pub const KIND_CHECK_LIMIT: usize = 256;

/// A finite space with a symmetric, zero-diagonal, non-negative distance
/// matrix and a declared [`Kind`]. Labels are unique.
#[derive(Clone, Debug)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Scalar>, // row-major n*n
    kind: Kind,
}

impl FiniteMetricSpace {
    /// Checks shape and, for spaces up to [`KIND_CHECK_LIMIT`] points, the
    /// declared kind.
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<Scalar>>, kind: Kind) -> Result<Self> {
        let space = Self::with_shape_checked(labels, matrix, kind)?;
        if space.len() <= KIND_CHECK_LIMIT {
            let report = space.validate()?;
            if !report.satisfies(kind) {
                return Err(MetricError::KindMismatch {
                    declared: kind.to_string(),
                    reason: describe_failure(&report, kind),
                });
            }
        }
        Ok(space)
    }

    /// Checks shape and the declared kind regardless of size.
    pub fn new_validated(labels: Vec<String>, matrix: Vec<Vec<Scalar>>, kind: Kind) -> Result<Self> {
        let space = Self::with_shape_checked(labels, matrix, kind)?;
        let report = space.validate()?;
        if !report.satisfies(kind) {
            return Err(MetricError::KindMismatch {
                declared: kind.to_string(),
                reason: describe_failure(&report, kind),
            });
        }
        Ok(space)
    }

    fn with_shape_checked(labels: Vec<String>, matrix: Vec<Vec<Scalar>>, kind: Kind) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(MetricError::Empty("space needs at least one point".into()));
        }
        if matrix.len() != n {
            return Err(MetricError::Malformed(format!(
                "{} labels but {} matrix rows",
                n,
                matrix.len()
            )));
        }
        {
            let mut seen = std::collections::HashSet::new();
            for l in &labels {
                if !seen.insert(l) {
                    return Err(MetricError::Malformed(format!("duplicate label {l:?}")));
                }
            }
        }
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(MetricError::Malformed(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(MetricError::Malformed(format!("non-finite entry at ({i},{j})")));
                }
                if v.is_negative() {
                    return Err(MetricError::Malformed(format!("negative entry at ({i},{j})")));
                }
                if i == j && !v.is_zero() {
                    return Err(MetricError::Malformed(format!("non-zero diagonal at ({i},{i})")));
                }
                dist.push(v.clone());
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if dist[i * n + j] != dist[j * n + i] {
                    return Err(MetricError::Malformed(format!("asymmetric at ({i},{j})")));
                }
            }
        }
        Ok(FiniteMetricSpace { labels, dist, kind })
    }

    /// Internal constructor for operations whose output shape is correct by
    /// construction. Still debug-asserts the shape.
    pub(crate) fn from_parts(labels: Vec<String>, dist: Vec<Scalar>, kind: Kind) -> Self {
        debug_assert_eq!(labels.len() * labels.len(), dist.len());
        FiniteMetricSpace { labels, dist, kind }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn dist(&self, i: usize, j: usize) -> &Scalar {
        &self.dist[i * self.len() + j]
    }

    pub fn diameter(&self) -> Scalar {
        let n = self.len();
        let mut best = Scalar::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                best = best.max(self.dist(i, j).clone());
            }
        }
        best
    }

    /// Smallest non-zero distance; `None` when all distances are zero.
    pub fn min_positive_distance(&self) -> Option<Scalar> {
        let n = self.len();
        let mut best: Option<Scalar> = None;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = self.dist(i, j);
                if !d.is_zero() {
                    best = Some(match best {
                        Some(b) => b.min(d.clone()),
                        None => d.clone(),
                    });
                }
            }
        }
        best
    }

    pub fn eccentricity(&self, i: usize) -> Scalar {
        let mut best = Scalar::zero();
        for j in 0..self.len() {
            best = best.max(self.dist(i, j).clone());
        }
        best
    }

    /// Float comparison tolerance for this space: max(1e-12, 1e-12 * diameter).
    pub fn tolerance(&self) -> f64 {
        let d = self.diameter().to_f64();
        (1e-12 * d).max(1e-12)
    }

    /// Exhaustive axiom audit. Malformed shapes were rejected at
    /// construction, so this always yields a report.
    pub fn validate(&self) -> Result<ValidationReport> {
        let n = self.len();
        let tol = self.tolerance();
        let mut worst_triangle: Option<TriangleViolation> = None;
        let mut worst_strong: Option<TriangleViolation> = None;
        let mut zero_pair = None;
        for i in 0..n {
            for j in (i + 1)..n {
                let dij = self.dist(i, j);
                if dij.is_zero() && zero_pair.is_none() {
                    zero_pair = Some((i, j));
                }
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    let dik = self.dist(i, k);
                    let dkj = self.dist(k, j);
                    // weak triangle
                    let weak_bound = dik.add(dkj);
                    if exceeds(dij, &weak_bound, tol) {
                        let excess = dij.to_f64() - weak_bound.to_f64();
                        if worst_triangle.as_ref().map_or(true, |w| excess > w.excess) {
                            worst_triangle = Some(TriangleViolation { i, j, k, excess });
                        }
                    }
                    // strong triangle
                    let strong_bound = dik.max(dkj);
                    if exceeds(dij, &strong_bound, tol) {
                        let excess = dij.to_f64() - strong_bound.to_f64();
                        if worst_strong.as_ref().map_or(true, |w| excess > w.excess) {
                            worst_strong = Some(TriangleViolation { i, j, k, excess });
                        }
                    }
                }
            }
        }
        let pseudo_metric = worst_triangle.is_none();
        let pseudo_ultrametric = worst_strong.is_none();
        let separated = zero_pair.is_none();
        Ok(ValidationReport {
            pseudo_metric,
            metric: pseudo_metric && separated,
            pseudo_ultrametric,
            ultrametric: pseudo_ultrametric && separated,
            worst_triangle,
            worst_strong_triangle: worst_strong,
            zero_pair,
            tolerance: tol,
        })
    }

    /// Subspace on the given point indices (order preserved, no duplicates).
    pub fn restrict(&self, indices: &[usize]) -> Result<FiniteMetricSpace> {
        if indices.is_empty() {
            return Err(MetricError::Empty("restriction to empty subset".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for &i in indices {
            if i >= self.len() {
                return Err(MetricError::InvalidParameter(format!("index {i} out of range")));
            }
            if !seen.insert(i) {
                return Err(MetricError::InvalidParameter(format!("duplicate index {i}")));
            }
        }
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        let m = indices.len();
        let mut dist = Vec::with_capacity(m * m);
        for &i in indices {
            for &j in indices {
                dist.push(self.dist(i, j).clone());
            }
        }
        Ok(FiniteMetricSpace::from_parts(labels, dist, self.kind))
    }

    /// Scales every distance by `lambda >= 0`. Zero collapses the space, so
    /// the kind loses separation.
    pub fn dilate(&self, lambda: &Scalar) -> Result<FiniteMetricSpace> {
        if lambda.is_negative() {
            return Err(MetricError::InvalidParameter("negative dilation".into()));
        }
        let kind = if lambda.is_zero() { self.kind.pseudo() } else { self.kind };
        let dist = self.dist.iter().map(|d| d.mul(lambda)).collect();
        Ok(FiniteMetricSpace::from_parts(self.labels.clone(), dist, kind))
    }

    pub fn relabeled(&self, labels: Vec<String>) -> Result<FiniteMetricSpace> {
        if labels.len() != self.len() {
            return Err(MetricError::LabelMismatch(format!(
                "{} labels for {} points",
                labels.len(),
                self.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(MetricError::Malformed(format!("duplicate label {l:?}")));
            }
        }
        Ok(FiniteMetricSpace::from_parts(labels, self.dist.clone(), self.kind))
    }

    /// Same points, declared kind replaced (checked).
    pub fn redeclared(&self, kind: Kind) -> Result<FiniteMetricSpace> {
        let report = self.validate()?;
        if !report.satisfies(kind) {
            return Err(MetricError::KindMismatch {
                declared: kind.to_string(),
                reason: describe_failure(&report, kind),
            });
        }
        Ok(FiniteMetricSpace::from_parts(self.labels.clone(), self.dist.clone(), kind))
    }
}

fn exceeds(d: &Scalar, bound: &Scalar, tol: f64) -> bool {
    match (d, bound) {
        (Scalar::Exact(a), Scalar::Exact(b)) => a > b,
        _ => d.to_f64() > bound.to_f64() + tol,
    }
}

fn describe_failure(report: &ValidationReport, kind: Kind) -> String {
    if kind.is_separated() {
        if let Some((i, j)) = report.zero_pair {
            return format!("distinct points {i} and {j} at distance zero");
        }
    }
    if kind.is_ultra() {
        if let Some(v) = &report.worst_strong_triangle {
            return format!(
                "strong triangle fails at ({}, {}) through {} by {:.3e}",
                v.i, v.j, v.k, v.excess
            );
        }
    }
    if let Some(v) = &report.worst_triangle {
        return format!(
            "triangle fails at ({}, {}) through {} by {:.3e}",
            v.i, v.j, v.k, v.excess
        );
    }
    "axioms not satisfied".into()
}
