//! Finite-depth presentations of tree ultrametric spaces, and the JSON
//! family interface.

use crate::error::{CantorError, Result};
use crate::family::Family;
use metric_core::{FiniteMetricSpace, Kind, Scalar};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

/// Enumerability bound on the point count of a truncation.
pub const ENUMERABLE_POINTS: u64 = 1_000_000;

/// Hard cap for materializing a distance matrix (memory, not semantics).
pub const MATRIX_POINTS: u64 = 2_048;

/// A family truncated at a depth: the space of all digit strings
/// (x_0, ..., x_{depth-1}) with x_i < m_i, at distance alpha(v) for v the
/// first disagreeing index. This is a minimal alpha(depth-1)-net of the
/// infinite space.
#[derive(Clone, Debug)]
pub struct CantorSpec {
    family: Family,
    depth: u64,
}

impl CantorSpec {
    pub fn new(family: Family, depth: u64) -> Result<CantorSpec> {
        if depth < 1 {
            return Err(CantorError::InvalidParameter("depth must be >= 1".into()));
        }
        if let Some(len) = family.table_len() {
            if depth > len {
                return Err(CantorError::InvalidParameter(format!(
                    "depth {depth} exceeds the family's {len} tabulated levels"
                )));
            }
        }
        Ok(CantorSpec { family, depth })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn depth(&self) -> u64 {
        self.depth
    }

    /// Point count of the truncation, when every branching materializes
    /// and the product stays within the enumerability budget.
    pub fn point_count(&self) -> Result<Option<BigUint>> {
        let cap = BigUint::from(ENUMERABLE_POINTS);
        let mut prod = BigUint::one();
        for i in 0..self.depth {
            match self.family.m_count(i)? {
                None => return Ok(None),
                Some(m) => prod *= m,
            }
            if prod > cap {
                return Ok(None);
            }
        }
        Ok(Some(prod))
    }

    pub fn enumerable(&self) -> bool {
        matches!(self.point_count(), Ok(Some(_)))
    }

    /// Materialize the truncation as a validated ultrametric space.
    pub fn enumerate(&self) -> Result<FiniteMetricSpace> {
        let count = self.point_count()?.ok_or_else(|| {
            CantorError::SizeBudget(format!(
                "enumeration exceeds {ENUMERABLE_POINTS} points"
            ))
        })?;
        let count = count.to_u64().unwrap();
        if count > MATRIX_POINTS {
            return Err(CantorError::SizeBudget(format!(
                "distance matrix for {count} points exceeds the {MATRIX_POINTS}-point budget"
            )));
        }
        let radices: Vec<u64> = (0..self.depth)
            .map(|i| Ok(self.family.m_count(i)?.unwrap().to_u64().unwrap()))
            .collect::<Result<_>>()?;
        let scales: Vec<Scalar> = (0..self.depth)
            .map(|i| self.family.alpha_scalar(i))
            .collect::<Result<_>>()?;

        let mut points: Vec<Vec<u64>> = Vec::with_capacity(count as usize);
        let mut cur = vec![0u64; self.depth as usize];
        loop {
            points.push(cur.clone());
            // increment the mixed-radix counter, most significant digit first
            let mut pos = self.depth as usize;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                cur[pos] += 1;
                if cur[pos] < radices[pos] {
                    break;
                }
                cur[pos] = 0;
            }
            if cur.iter().all(|&d| d == 0) {
                break;
            }
        }

        let labels: Vec<String> = points
            .iter()
            .map(|p| p.iter().map(u64::to_string).collect::<Vec<_>>().join("."))
            .collect();
        let n = points.len();
        let mut matrix = vec![vec![Scalar::zero(); n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = points[i]
                    .iter()
                    .zip(&points[j])
                    .position(|(a, b)| a != b)
                    .expect("distinct points differ somewhere");
                let d = scales[v].clone();
                matrix[i][j] = d.clone();
                matrix[j][i] = d;
            }
        }
        Ok(FiniteMetricSpace::new(labels, matrix, Kind::Ultrametric)?)
    }

    /// The spec of any closed ball of radius alpha(k-1)... equivalently,
    /// drop the first k levels; its enumeration is isometric to every
    /// radius-alpha(k) ball of this spec's enumeration.
    pub fn shift(&self, k: u64) -> Result<CantorSpec> {
        if k >= self.depth {
            return Err(CantorError::InvalidParameter(format!(
                "shift {k} must stay below depth {}",
                self.depth
            )));
        }
        CantorSpec::new(self.family.clone().shifted(k), self.depth - k)
    }

    /// Mass of any closed ball of radius alpha(n+1): 1/(m_0 ... m_n),
    /// the uniform branching measure.
    pub fn measure_ball(&self, n: u64) -> Result<BigRational> {
        let mut denom = BigUint::one();
        for i in 0..=n {
            let m = self.family.m_count(i)?.ok_or_else(|| {
                CantorError::SizeBudget("branching count too large to materialize".into())
            })?;
            denom *= m;
            if denom.bits() > crate::family::MATERIALIZE_BITS {
                return Err(CantorError::SizeBudget(
                    "ball mass denominator exceeds the bit budget".into(),
                ));
            }
        }
        Ok(BigRational::new(BigInt::one(), denom.into()))
    }
}

/// Parse an exact rational out of a JSON number or string ("3/2", "0.25").
pub fn ratio_from_json(v: &Value) -> Result<BigRational> {
    let bad = || CantorError::InvalidParameter(format!("expected a rational, got {v}"));
    let s = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(bad()),
    };
    metric_core::scalar::parse_exact(&s).ok_or_else(bad)
}

fn ratio_to_json(r: &BigRational) -> Value {
    if r.is_integer() && r.numer().magnitude().bits() <= 53 {
        if let Some(i) = r.numer().to_i64() {
            return json!(i);
        }
    }
    json!(metric_core::scalar::format_exact(r))
}

/// Builtin family names: each states the dimensional 4-tuple it produces
/// (digits for finite entries, i for infinite), plus generic parametrized
/// families.
pub fn family_from_json(v: &Value) -> Result<Family> {
    let name = v
        .get("family")
        .and_then(Value::as_str)
        .ok_or_else(|| CantorError::InvalidParameter("missing \"family\" name".into()))?;
    match name {
        "block-0000" => Ok(Family::QuadraticDyadic),
        "block-1111" => Family::geometric(BigRational::one(), 2),
        "block-iiii" => Ok(Family::Harmonic { m: 2 }),
        "block-0111" => Ok(Family::TowerPlateau),
        "block-0111-mild" => Ok(Family::TowerMild),
        "block-0iii" => Ok(Family::FactorialGiant),
        "block-0iii-mild" => Ok(Family::SquareGiant),
        "block-0001" => Ok(Family::CubeInterleavedDyadic),
        "block-000i" => Ok(Family::CubeInterleavedFraction),
        "block-0011" | "block-00ii" => Err(CantorError::InvalidParameter(format!(
            "{name} is a glued block construction, not a plain family; build it via the block catalogue"
        ))),
        "geometric" => {
            let q = ratio_from_json(v.get("ratio_log2").unwrap_or(&Value::Null))?;
            let m = v.get("m").and_then(Value::as_u64).unwrap_or(2);
            Family::geometric(q, m)
        }
        "harmonic" => {
            let m = v.get("m").and_then(Value::as_u64).unwrap_or(2);
            if m < 2 {
                return Err(CantorError::InvalidParameter("m must be >= 2".into()));
            }
            Ok(Family::Harmonic { m })
        }
        "custom" => {
            let alpha = v
                .get("alpha")
                .and_then(Value::as_array)
                .ok_or_else(|| CantorError::InvalidParameter("custom needs \"alpha\"".into()))?
                .iter()
                .map(ratio_from_json)
                .collect::<Result<Vec<_>>>()?;
            let m = v
                .get("m")
                .and_then(Value::as_array)
                .ok_or_else(|| CantorError::InvalidParameter("custom needs \"m\"".into()))?
                .iter()
                .map(|x| {
                    x.as_u64().ok_or_else(|| {
                        CantorError::InvalidParameter("branching entries must be integers".into())
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Family::custom(alpha, m)
        }
        "shifted" => {
            let k = v
                .get("k")
                .and_then(Value::as_u64)
                .ok_or_else(|| CantorError::InvalidParameter("shifted needs \"k\"".into()))?;
            let base = family_from_json(
                v.get("base")
                    .ok_or_else(|| CantorError::InvalidParameter("shifted needs \"base\"".into()))?,
            )?;
            Ok(base.shifted(k))
        }
        other => Err(CantorError::InvalidParameter(format!("unknown family \"{other}\""))),
    }
}

pub fn family_to_json(f: &Family) -> Value {
    match f {
        Family::QuadraticDyadic => json!({"family": "block-0000"}),
        Family::Geometric { ratio_log2, m } => {
            if ratio_log2.is_one() && *m == 2 {
                json!({"family": "block-1111"})
            } else {
                json!({"family": "geometric", "ratio_log2": ratio_to_json(ratio_log2), "m": m})
            }
        }
        Family::Harmonic { m } => {
            if *m == 2 {
                json!({"family": "block-iiii"})
            } else {
                json!({"family": "harmonic", "m": m})
            }
        }
        Family::TowerPlateau => json!({"family": "block-0111"}),
        Family::TowerMild => json!({"family": "block-0111-mild"}),
        Family::FactorialGiant => json!({"family": "block-0iii"}),
        Family::SquareGiant => json!({"family": "block-0iii-mild"}),
        Family::CubeInterleavedDyadic => json!({"family": "block-0001"}),
        Family::CubeInterleavedFraction => json!({"family": "block-000i"}),
        Family::Custom { alpha, m } => json!({
            "family": "custom",
            "alpha": alpha.iter().map(ratio_to_json).collect::<Vec<_>>(),
            "m": m,
        }),
        Family::Shifted { base, k } => json!({
            "family": "shifted",
            "k": k,
            "base": family_to_json(base),
        }),
    }
}

pub fn spec_from_json(v: &Value) -> Result<CantorSpec> {
    let depth = v.get("depth").and_then(Value::as_u64).unwrap_or(1);
    CantorSpec::new(family_from_json(v)?, depth)
}

pub fn spec_to_json(s: &CantorSpec) -> Value {
    let mut v = family_to_json(s.family());
    v["depth"] = json!(s.depth());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use metric_core::covering_number;

    fn halving(depth: u64) -> CantorSpec {
        CantorSpec::new(Family::geometric(BigRational::one(), 2).unwrap(), depth).unwrap()
    }

    #[test]
    fn depth_one_pair() {
        let s = CantorSpec::new(
            Family::custom(vec![BigRational::new(1.into(), 3.into())], vec![2]).unwrap(),
            1,
        )
        .unwrap();
        let x = s.enumerate().unwrap();
        assert_eq!(x.len(), 2);
        assert_eq!(x.dist(0, 1), &Scalar::from_ratio(1, 3));
    }

    #[test]
    fn depth_five_halving_tree() {
        let x = halving(5).enumerate().unwrap();
        assert_eq!(x.len(), 32);
        assert!(x.validate().unwrap().ultrametric);
        // pairs split by the root differ first at index 0, hence sit at
        // alpha(0) = 1/2; each half holds 16 points
        let half = Scalar::from_ratio(1, 2);
        let mut at_half = 0;
        for i in 0..32 {
            for j in (i + 1)..32 {
                if x.dist(i, j) == &half {
                    at_half += 1;
                }
            }
        }
        assert_eq!(at_half, 16 * 16);
    }

    #[test]
    fn shift_matches_restricted_ball() {
        let s = halving(5);
        let whole = s.enumerate().unwrap();
        let shifted = s.shift(2).unwrap().enumerate().unwrap();
        // ball of radius alpha(2) around index 0: labels with prefix "0.0."
        let idx: Vec<usize> = (0..whole.len())
            .filter(|&i| whole.label(i).starts_with("0.0."))
            .collect();
        let ball = whole.restrict(&idx).unwrap();
        assert_eq!(ball.len(), shifted.len());
        assert!(metric_core::isometry(&ball, &shifted).unwrap().is_some());
    }

    #[test]
    fn measure_masses_sum_to_parent() {
        let s = halving(4);
        // children of a depth-n cylinder split its mass m_{n+1} ways
        let parent = s.measure_ball(1).unwrap();
        let child = s.measure_ball(2).unwrap();
        assert_eq!(parent, child * BigRational::from_integer(2.into()));
        assert_eq!(s.measure_ball(0).unwrap(), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn enumeration_budget_is_enforced() {
        let s = CantorSpec::new(Family::geometric(BigRational::one(), 2).unwrap(), 40).unwrap();
        assert!(!s.enumerable());
        assert!(matches!(s.enumerate(), Err(CantorError::SizeBudget(_))));
    }

    #[test]
    fn json_roundtrip_builtins_and_custom() {
        for name in [
            "block-0000",
            "block-1111",
            "block-iiii",
            "block-0111",
            "block-0111-mild",
            "block-0iii",
            "block-0iii-mild",
            "block-0001",
            "block-000i",
        ] {
            let v = json!({ "family": name, "depth": 3 });
            let s = spec_from_json(&v).unwrap();
            let back = spec_to_json(&s);
            assert_eq!(back["family"], json!(name));
        }
        let v = json!({"family": "custom", "alpha": ["1/2", "1/8"], "m": [2, 3], "depth": 2});
        let s = spec_from_json(&v).unwrap();
        assert_eq!(s.enumerate().unwrap().len(), 6);
        let v2 = json!({"family": "shifted", "k": 1, "base": {"family": "block-0000"}, "depth": 2});
        let s2 = spec_from_json(&v2).unwrap();
        assert_eq!(
            spec_to_json(&s2)["base"]["family"],
            json!("block-0000")
        );
    }

    #[test]
    fn oracle_agrees_on_a_small_tree() {
        // a sanity bridge to the set-cover oracle before the formula exists:
        // B(x, 1/4) = {y : first digit agrees}, so 2 balls cover the tree
        let x = halving(3).enumerate().unwrap();
        let r = Scalar::from_ratio(1, 4);
        let ans = covering_number(&x, &r).unwrap();
        assert_eq!(ans.exact(), Some(2));
    }
}
