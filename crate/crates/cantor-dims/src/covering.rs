//! Covering counts straight from the scale/branching data. For the infinite
//! space, the minimal number of closed r-balls covering everything is the
//! product of the branchings above the gap that r falls into; a truncation
//! agrees whenever r stays at or above its last scale.

use crate::error::{CantorError, Result};
use crate::family::{AlphaVal, Family, Mag, MATERIALIZE_BITS};
use crate::logval::{dyadic_log2, log2_interval, LOG_BITS};
use crate::spec::CantorSpec;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed};
use std::cmp::Ordering;

/// A covering count: exact log2 magnitude, plus the materialized integer
/// when it fits the bit budget.
#[derive(Clone, Debug)]
pub struct CountLog {
    pub log2: Mag,
    pub count: Option<BigUint>,
}

impl CountLog {
    fn one() -> CountLog {
        CountLog { log2: Mag::zero(), count: Some(BigUint::one()) }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.count {
            Some(c) => {
                let mut x = 0.0f64;
                for d in c.to_u64_digits().iter().rev() {
                    x = x * 1.8446744073709552e19 + *d as f64;
                }
                x
            }
            None => {
                let l = self.log2.to_f64();
                if l > 1020.0 {
                    f64::INFINITY
                } else {
                    2f64.powf(l)
                }
            }
        }
    }
}

/// r versus alpha(n). Exact for every rational scale; for irrational scales
/// the comparison runs on certified log intervals and reports a domain error
/// if the radius cannot be separated from the scale at the bit budget.
fn cmp_scale(family: &Family, r: &AlphaVal, n: u64) -> Result<Ordering> {
    match family.alpha(n) {
        Ok(a) => r.cmp_val(&a),
        Err(CantorError::Domain(_)) => {
            let rv = r.exact().ok_or_else(|| {
                CantorError::Domain(
                    "symbolic radius cannot be compared against an irrational scale".into(),
                )
            })?;
            if !rv.is_positive() {
                return Ok(Ordering::Less);
            }
            let Mag::Log(e) = family.e_val(n)? else {
                unreachable!("irrational scales live in the log regime")
            };
            let e = e
                .exact()
                .cloned()
                .ok_or_else(|| CantorError::Domain("scale exponent is not exact".into()))?;
            // r vs 2^-e flips to e vs -log2 r
            if let Some(l) = dyadic_log2(rv) {
                return Ok(e.cmp(&BigRational::from_integer(-l)));
            }
            let mut bits = LOG_BITS;
            for _ in 0..3 {
                let (val, err) = log2_interval(rv, bits);
                // -log2 r lies in [-(val+err), -(val-err)]
                if -(&val + &err) > e {
                    return Ok(Ordering::Less);
                }
                if -(&val - &err) < e {
                    return Ok(Ordering::Greater);
                }
                bits *= 4;
            }
            Err(CantorError::Domain(
                "radius indistinguishable from an irrational scale at the comparison budget"
                    .into(),
            ))
        }
        Err(e) => Err(e),
    }
}

/// The gap a radius falls into: Some(n) when alpha(n+1) <= r < alpha(n),
/// None when r >= alpha(0). A tabulated family whose scales never drop to r
/// cannot place it and errors.
pub fn locate_gap(family: &Family, r: &AlphaVal) -> Result<Option<u64>> {
    let above = |n: u64| -> Result<bool> { Ok(cmp_scale(family, r, n)? != Ordering::Less) };
    if above(0)? {
        return Ok(None);
    }
    let mut lo = 0u64; // r < alpha(lo)
    let mut hi = 1u64;
    loop {
        if let Some(len) = family.table_len() {
            if hi >= len {
                hi = len - 1;
                if hi == lo || !above(hi)? {
                    return Err(CantorError::Domain(
                        "radius falls below the family's last tabulated scale".into(),
                    ));
                }
                break;
            }
        }
        if above(hi)? {
            break;
        }
        lo = hi;
        hi = hi.checked_mul(2).ok_or_else(|| {
            CantorError::Domain("radius gap exceeds the index range".into())
        })?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if above(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi - 1))
}

/// Product of branchings m_from * ... * m_to.
pub(crate) fn count_range(family: &Family, from: u64, to: u64) -> Result<CountLog> {
    let mut log2 = Mag::zero();
    let mut count = Some(BigUint::one());
    for i in from..=to {
        log2 = log2.add(&family.m_log2(i)?);
        count = match (count, family.m_count(i)?) {
            (Some(c), Some(m)) => {
                let c = c * m;
                if c.bits() > MATERIALIZE_BITS {
                    None
                } else {
                    Some(c)
                }
            }
            _ => None,
        };
    }
    Ok(CountLog { log2, count })
}

pub(crate) fn covering_at(family: &Family, r: &AlphaVal) -> Result<CountLog> {
    match locate_gap(family, r)? {
        None => Ok(CountLog::one()),
        // balls of radius r are exactly the cylinders fixing levels 0..=gap
        Some(gap) => count_range(family, 0, gap),
    }
}

pub(crate) fn ball_covering_at(
    family: &Family,
    cap: &AlphaVal,
    r: &AlphaVal,
) -> Result<CountLog> {
    match locate_gap(family, cap)? {
        // a ball of radius >= alpha(0) is the whole space
        None => covering_at(family, r),
        Some(cap_gap) => match locate_gap(family, r)? {
            None => Ok(CountLog::one()),
            Some(r_gap) if r_gap <= cap_gap => Ok(CountLog::one()),
            Some(r_gap) => count_range(family, cap_gap + 1, r_gap),
        },
    }
}

/// Minimal closed-ball covering count of the whole space at radius r.
pub fn covering_formula(family: &Family, r: &BigRational) -> Result<CountLog> {
    if !r.is_positive() {
        return Err(CantorError::InvalidParameter("radius must be positive".into()));
    }
    covering_at(family, &AlphaVal::Exact(r.clone()))
}

/// Minimal count of closed r-balls covering any closed ball of radius
/// cap >= r. Homogeneity makes the center irrelevant.
pub fn ball_covering_formula(
    family: &Family,
    cap: &BigRational,
    r: &BigRational,
) -> Result<CountLog> {
    if !r.is_positive() || !cap.is_positive() {
        return Err(CantorError::InvalidParameter("radii must be positive".into()));
    }
    if r > cap {
        return Err(CantorError::InvalidParameter(
            "covering radius exceeds the ball radius".into(),
        ));
    }
    ball_covering_at(family, &AlphaVal::Exact(cap.clone()), &AlphaVal::Exact(r.clone()))
}

impl CantorSpec {
    /// Covering count of the untruncated space; agrees with the enumeration
    /// whenever r >= alpha(depth - 1).
    pub fn covering_formula(&self, r: &BigRational) -> Result<CountLog> {
        covering_formula(self.family(), r)
    }

    pub fn ball_covering_formula(&self, cap: &BigRational, r: &BigRational) -> Result<CountLog> {
        ball_covering_formula(self.family(), cap, r)
    }
}
