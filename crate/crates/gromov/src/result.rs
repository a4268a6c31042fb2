//! Computation results: an exact value together with the object attaining
//! it, or a certified two-sided interval. Never a bare approximation.

use crate::correspondence::Correspondence;
use crate::error::{GhError, Result};
use metric_core::Scalar;
use serde_json::{json, Value};

/// The object that attains (or, for intervals, produces) the reported bound.
#[derive(Clone, Debug)]
pub enum GhWitness {
    /// Relation whose half-distortion is the value (exact) or the upper
    /// bound (interval).
    Correspondence(Correspondence),
    /// Surjective map `left index -> right index` behind a doubled-distortion
    /// bound.
    Surjection(Vec<usize>),
    /// Distance-preserving bijection `left index -> right index`.
    Isometry(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum GhValue {
    Exact(Scalar),
    Interval { lower: Scalar, upper: Scalar },
}

#[derive(Clone, Debug)]
pub struct GhResult {
    pub value: GhValue,
    pub witness: Option<GhWitness>,
    pub method: &'static str,
}

impl GhResult {
    pub fn exact(value: Scalar, witness: Option<GhWitness>, method: &'static str) -> GhResult {
        GhResult { value: GhValue::Exact(value), witness, method }
    }

    /// Certified interval. Rejects lower > upper; collapses lower == upper
    /// to an exact value, both ends being certified.
    pub fn interval(
        lower: Scalar,
        upper: Scalar,
        witness: Option<GhWitness>,
        method: &'static str,
    ) -> Result<GhResult> {
        if lower > upper {
            return Err(GhError::CrossCheck(format!(
                "interval has lower {lower} above upper {upper} ({method})"
            )));
        }
        if lower == upper {
            return Ok(GhResult::exact(lower, witness, method));
        }
        Ok(GhResult { value: GhValue::Interval { lower, upper }, witness, method })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.value, GhValue::Exact(_))
    }

    pub fn exact_value(&self) -> Option<&Scalar> {
        match &self.value {
            GhValue::Exact(v) => Some(v),
            GhValue::Interval { .. } => None,
        }
    }

    /// Certified lower bound (the value itself when exact).
    pub fn lower(&self) -> &Scalar {
        match &self.value {
            GhValue::Exact(v) => v,
            GhValue::Interval { lower, .. } => lower,
        }
    }

    /// Certified upper bound (the value itself when exact).
    pub fn upper(&self) -> &Scalar {
        match &self.value {
            GhValue::Exact(v) => v,
            GhValue::Interval { upper, .. } => upper,
        }
    }

    /// `{"value": v}` for exact results, `{"lower": l, "upper": u,
    /// "method": m}` for intervals. Exact scalars travel as strings, floats
    /// as numbers, matching the space serialization.
    pub fn to_json(&self) -> Value {
        match &self.value {
            GhValue::Exact(v) => json!({ "value": v }),
            GhValue::Interval { lower, upper } => {
                json!({ "lower": lower, "upper": upper, "method": self.method })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_orders_its_ends() {
        let bad = GhResult::interval(Scalar::one(), Scalar::zero(), None, "test");
        assert!(matches!(bad, Err(GhError::CrossCheck(_))));
    }

    #[test]
    fn degenerate_interval_collapses_to_exact() {
        let r = GhResult::interval(Scalar::from_ratio(1, 2), Scalar::from_ratio(2, 4), None, "test")
            .unwrap();
        assert!(r.is_exact());
        assert_eq!(r.exact_value().unwrap(), &Scalar::from_ratio(1, 2));
    }

    #[test]
    fn json_shapes_follow_the_result_kind() {
        let e = GhResult::exact(Scalar::from_ratio(101, 200), None, "test");
        assert_eq!(e.to_json(), serde_json::json!({ "value": "0.505" }));

        let i = GhResult::interval(Scalar::zero(), Scalar::from_ratio(1, 3), None, "halved-matching")
            .unwrap();
        let v = i.to_json();
        assert_eq!(v["lower"], serde_json::json!("0"));
        assert_eq!(v["upper"], serde_json::json!("1/3"));
        assert_eq!(v["method"], serde_json::json!("halved-matching"));
    }

    #[test]
    fn bounds_agree_with_the_value_when_exact() {
        let e = GhResult::exact(Scalar::from_int(2), None, "test");
        assert_eq!(e.lower(), e.upper());
        assert_eq!(e.lower(), &Scalar::from_int(2));
    }
}
