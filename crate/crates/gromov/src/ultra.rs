//! The non-Archimedean variant: the same infimum taken over ultrametric
//! ambient spaces only. It is itself an ultrametric on the class of finite
//! ultrametric spaces, and it diverges from the ordinary distance as badly
//! as one likes, which the scaled-copy table demonstrates with certified
//! numbers.

use crate::error::{GhError, Result};
use crate::result::{GhResult, GhWitness};
use crate::solver::{gh_exact, try_isometry, GH_EXACT_LIMIT};
use metric_core::{FiniteMetricSpace, Scalar};
use num_rational::BigRational;
use num_traits::{One, Signed};

/// Distance under ultrametric ambient spaces only.
///
/// Distinct diameters force every pair of jointly embedded copies exactly
/// max-diameter apart (by the strong triangle through any far pair), and
/// gluing the two spaces at basepoints attains that, so the value is exact.
/// Isometric inputs are exactly at zero. Equal diameters without an isometry
/// get the certified interval [2 * gh lower, diameter]: comparison with the
/// ordinary distance is 2-Lipschitz in this direction, and the basepoint
/// glue at the shared diameter caps the Hausdorff gap.
pub fn ugh(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Result<GhResult> {
    require_ultrametric(a, "left input")?;
    require_ultrametric(b, "right input")?;
    let da = a.diameter();
    let db = b.diameter();
    if da != db {
        let v = da.max(db);
        return Ok(GhResult::exact(v, None, "diameter-gap"));
    }
    if let Some(map) = try_isometry(a, b)? {
        return Ok(GhResult::exact(Scalar::zero(), Some(GhWitness::Isometry(map)), "isometry"));
    }
    let gh = gh_exact(a, b)?;
    GhResult::interval(gh.lower().double(), da, None, "lipschitz-glue")
}

/// Outcome of checking the strong triangle inequality on the three pairwise
/// distances of a triple.
#[derive(Clone, Debug)]
pub enum UghAxiomAudit {
    /// Pairwise values in the order (1,2), (2,3), (1,3).
    Verified { values: [Scalar; 3], holds: bool },
    /// Some pair resolved to an interval only, so there is nothing exact to
    /// check.
    Skipped { reason: String },
}

/// Verifies the strong triangle inequality on the exact pairwise distances
/// of three ultrametric spaces, or reports why it could not.
pub fn ugh_ultrametric_axiom_audit(
    a: &FiniteMetricSpace,
    b: &FiniteMetricSpace,
    c: &FiniteMetricSpace,
) -> Result<UghAxiomAudit> {
    let r12 = ugh(a, b)?;
    let r23 = ugh(b, c)?;
    let r13 = ugh(a, c)?;
    for (name, r) in [("(1,2)", &r12), ("(2,3)", &r23), ("(1,3)", &r13)] {
        if !r.is_exact() {
            return Ok(UghAxiomAudit::Skipped {
                reason: format!(
                    "pair {name} resolved to the interval [{}, {}] via {}; equal diameters without an isometry have no exact value",
                    r.lower(),
                    r.upper(),
                    r.method
                ),
            });
        }
    }
    let values = [
        r12.exact_value().expect("checked exact").clone(),
        r23.exact_value().expect("checked exact").clone(),
        r13.exact_value().expect("checked exact").clone(),
    ];
    let holds = values[0] <= values[1].clone().max(values[2].clone())
        && values[1] <= values[0].clone().max(values[2].clone())
        && values[2] <= values[0].clone().max(values[1].clone());
    Ok(UghAxiomAudit::Verified { values, holds })
}

/// One row of the scaled-copy table for a given scale offset eps.
#[derive(Clone, Debug)]
pub struct QiuRow {
    pub epsilon: BigRational,
    pub diameter: Scalar,
    /// Certified upper bound for the ordinary distance to the scaled copy:
    /// the identity correspondence distorts by exactly eps * diameter.
    pub gh_upper: Scalar,
    /// Exact ordinary distance, when the pair fits the search budget.
    pub gh_exact: Option<Scalar>,
    /// Exact non-Archimedean distance (1 + eps) * diameter.
    pub ugh: Scalar,
    /// ugh / gh_upper = (1 + eps) / eps, a true lower bound for the ratio of
    /// the non-Archimedean to the ordinary distance.
    pub certified_ratio: Scalar,
}

/// For each eps builds the scaled copy (1 + eps) * d of the input, checks it
/// is still ultrametric, and reports how far the two distances drift apart.
/// The ratio column grows without bound as eps shrinks, so no constant
/// multiple of the ordinary distance dominates the non-Archimedean one.
pub fn qiu_demo(x: &FiniteMetricSpace, epsilons: &[BigRational]) -> Result<Vec<QiuRow>> {
    require_ultrametric(x, "input")?;
    if x.len() < 2 {
        return Err(GhError::Domain(
            "needs at least two points: a one-point space is isometric to every scaled copy of itself".into(),
        ));
    }
    let diam = x.diameter();
    let mut rows = Vec::with_capacity(epsilons.len());
    for eps in epsilons {
        if !eps.is_positive() {
            return Err(GhError::InvalidParameter(format!(
                "scale offset must be positive, got {eps}"
            )));
        }
        let scale = Scalar::Exact(BigRational::one() + eps.clone());
        let scaled = x.dilate(&scale)?;
        if !scaled.validate()?.ultrametric {
            return Err(GhError::CrossCheck("scaling broke the strong triangle".into()));
        }
        let gh_upper = diam.mul_ratio(eps);
        let u = ugh(x, &scaled)?;
        let ugh_value = u
            .exact_value()
            .cloned()
            .ok_or_else(|| GhError::CrossCheck("scaled copy did not resolve exactly".into()))?;
        let gh_value = if 2 * x.len() <= GH_EXACT_LIMIT {
            let g = gh_exact(x, &scaled)?;
            let v = g
                .exact_value()
                .cloned()
                .ok_or_else(|| GhError::CrossCheck("in-budget search returned an interval".into()))?;
            if v > gh_upper {
                return Err(GhError::CrossCheck(format!(
                    "search value {v} above the scaled-identity bound {gh_upper}"
                )));
            }
            Some(v)
        } else {
            None
        };
        let certified_ratio = div_val(&ugh_value, &gh_upper);
        rows.push(QiuRow {
            epsilon: eps.clone(),
            diameter: diam.clone(),
            gh_upper,
            gh_exact: gh_value,
            ugh: ugh_value,
            certified_ratio,
        });
    }
    Ok(rows)
}

fn require_ultrametric(s: &FiniteMetricSpace, which: &str) -> Result<()> {
    let report = s.validate()?;
    if report.ultrametric {
        return Ok(());
    }
    let reason = if let Some((i, j)) = report.zero_pair {
        format!("distinct points {i} and {j} at distance zero")
    } else if let Some(v) = &report.worst_strong_triangle {
        format!("strong triangle fails at ({}, {}) through {} by {:.3e}", v.i, v.j, v.k, v.excess)
    } else {
        "axioms not satisfied".into()
    };
    Err(GhError::NotUltrametric(format!("{which}: {reason}")))
}

fn div_val(n: &Scalar, d: &Scalar) -> Scalar {
    match (n.as_exact(), d.as_exact()) {
        (Some(a), Some(b)) => Scalar::Exact(a / b),
        _ => Scalar::from_f64(n.to_f64() / d.to_f64()),
    }
}
