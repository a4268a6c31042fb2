use crate::error::{MetricError, Result};
use crate::scalar::Scalar;
use crate::space::{FiniteMetricSpace, Kind};
use serde::{Deserialize, Serialize};

/// Serialization shape for a space. Exact values travel as strings
/// ("3/4", "0.125"), floats as JSON numbers.
#[derive(Serialize, Deserialize)]
pub struct SpaceJson {
    pub labels: Vec<String>,
    pub kind: Kind,
    pub matrix: Vec<Vec<Scalar>>,
}

impl SpaceJson {
    pub fn from_space(space: &FiniteMetricSpace) -> SpaceJson {
        let n = space.len();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| space.dist(i, j).clone()).collect())
            .collect();
        SpaceJson {
            labels: space.labels().to_vec(),
            kind: space.kind(),
            matrix,
        }
    }

    pub fn into_space(self) -> Result<FiniteMetricSpace> {
        FiniteMetricSpace::new(self.labels, self.matrix, self.kind)
    }
}

pub fn to_json(space: &FiniteMetricSpace) -> String {
    serde_json::to_string_pretty(&SpaceJson::from_space(space)).expect("serializable")
}

pub fn from_json(text: &str) -> Result<FiniteMetricSpace> {
    let sj: SpaceJson =
        serde_json::from_str(text).map_err(|e| MetricError::Malformed(format!("bad space JSON: {e}")))?;
    sj.into_space()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_preserves_exact_values() {
        let d = Scalar::from_ratio(1, 3);
        let s = FiniteMetricSpace::new(
            vec!["a".into(), "b".into()],
            vec![vec![Scalar::zero(), d.clone()], vec![d, Scalar::zero()]],
            Kind::Ultrametric,
        )
        .unwrap();
        let text = to_json(&s);
        let back = from_json(&text).unwrap();
        assert_eq!(back.kind(), Kind::Ultrametric);
        assert_eq!(back.dist(0, 1), s.dist(0, 1));
        assert!(back.dist(0, 1).is_exact());
    }

    #[test]
    fn rejects_matrix_that_breaks_declared_kind() {
        let text = r#"{
            "labels": ["a", "b", "c"],
            "kind": "ultrametric",
            "matrix": [["0", "1", "3"], ["1", "0", "2"], ["3", "2", "0"]]
        }"#;
        assert!(matches!(from_json(text), Err(MetricError::KindMismatch { .. })));
    }
}
