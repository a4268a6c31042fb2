//! Recovery of telescope parameters from an unlabeled distance matrix.
//!
//! The accumulation point is found as the unique point whose distance
//! profile splits into halving groups of three; each group is one triangle
//! level, and the level parameter is read off the base/leg ratio. Every
//! recovery is verified by rebuilding the telescope and comparing all
//! entries, so a success is a certificate and a failure is structured.
//!
//! When the telescope sits inside a larger glued space, its points are the
//! ones whose nearest neighbor is comparatively far away (every other
//! construction block in this crate pairs each point with a close sibling).
//! Recovery therefore retries on the subsets above each multiplicative gap
//! in the nearest-neighbor profile before giving up.

use crate::error::{Result, TelescopeError};
use crate::spec::{base_ratio, telescope, TelescopeFlavor, TelescopeSpec};
use metric_core::FiniteMetricSpace;

/// Relative tolerance for detecting the telescope structure (grouping,
/// halving, leg agreement). Loose on purpose: the strict check is the full
/// matrix verification at the end.
const DETECT_RTOL: f64 = 1e-6;

/// Absolute tolerance of the final verification, per unit of scale.
const VERIFY_TOL: f64 = 1e-9;

/// Most gap cutoffs tried when extracting an embedded telescope.
const MAX_CUTS: usize = 32;

/// A verified recovery: rebuilding `telescope(q, levels, flavor, scale)` and
/// indexing it by `members` reproduces the input entries within tolerance.
#[derive(Debug, Clone)]
pub struct TelescopeFingerprint {
    /// One parameter in [0, 1] per level, shallowest first.
    pub q: Vec<f64>,
    /// The global scale multiplying every distance.
    pub scale: f64,
    pub flavor: TelescopeFlavor,
    /// Input indices: the accumulation point, then per level the two base
    /// corners around the apex in builder order (1@j, 2@j, 3@j).
    pub members: Vec<usize>,
}

fn shape(msg: String) -> TelescopeError {
    TelescopeError::NotTelescopeShaped(msg)
}

fn rel_close(a: f64, b: f64, rtol: f64) -> bool {
    (a - b).abs() <= rtol * a.abs().max(b.abs())
}

/// Recovers the parameters of a scaled telescope, with any point order.
///
/// The input may also be a larger space containing a scaled telescope as a
/// glued block, as long as the telescope points' nearest-neighbor distances
/// are separated from all other points' by a multiplicative gap.
pub fn fingerprint(space: &FiniteMetricSpace) -> Result<TelescopeFingerprint> {
    let n = space.len();
    let all: Vec<usize> = (0..n).collect();
    let direct = match recover_on(space, &all) {
        Ok(fp) => return Ok(fp),
        Err(e) => e,
    };

    // nearest-neighbor profile, then try the subset above each gap
    let nn: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| space.dist(i, j).to_f64())
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mut sorted = nn.clone();
    sorted.sort_by(f64::total_cmp);
    let mut cuts: Vec<(f64, f64)> = Vec::new(); // (gap ratio, cutoff)
    for w in sorted.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if lo > 0.0 && hi / lo > 1.0 + DETECT_RTOL {
            cuts.push((hi / lo, (lo * hi).sqrt()));
        }
    }
    cuts.sort_by(|a, b| b.0.total_cmp(&a.0));
    cuts.dedup_by(|a, b| a.1 == b.1);
    for (_, cutoff) in cuts.into_iter().take(MAX_CUTS) {
        let subset: Vec<usize> = (0..n).filter(|&i| nn[i] > cutoff).collect();
        if subset.len() >= 7 && subset.len() % 3 == 1 && subset.len() < n {
            if let Ok(fp) = recover_on(space, &subset) {
                return Ok(fp);
            }
        }
    }
    Err(shape(format!(
        "{direct}; and no isolated-part subset recovers a telescope either"
    )))
}

/// Distances from `c` to the rest of `pts`, grouped into descending triples
/// that must each agree internally and halve from one to the next. Returns
/// the triples (as point indices) or None if the profile does not fit.
fn halving_triples(
    space: &FiniteMetricSpace,
    pts: &[usize],
    c: usize,
) -> Option<Vec<[usize; 3]>> {
    let mut d: Vec<(f64, usize)> = pts
        .iter()
        .filter(|&&p| p != c)
        .map(|&p| (space.dist(c, p).to_f64(), p))
        .collect();
    d.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut groups = Vec::with_capacity(d.len() / 3);
    let mut prev_mean: Option<f64> = None;
    for chunk in d.chunks(3) {
        let mean = (chunk[0].0 + chunk[1].0 + chunk[2].0) / 3.0;
        if mean <= 0.0 || !rel_close(chunk[0].0, chunk[2].0, DETECT_RTOL) {
            return None;
        }
        if let Some(pm) = prev_mean {
            if !rel_close(pm, 2.0 * mean, DETECT_RTOL) {
                return None;
            }
        }
        prev_mean = Some(mean);
        groups.push([chunk[0].1, chunk[1].1, chunk[2].1]);
    }
    Some(groups)
}

/// Runs the recovery on the given point subset and verifies the result.
fn recover_on(space: &FiniteMetricSpace, pts: &[usize]) -> Result<TelescopeFingerprint> {
    let count = pts.len();
    if count < 7 || count % 3 != 1 {
        return Err(shape(format!(
            "{count} points cannot form full triangle levels around an accumulation point"
        )));
    }
    let level_count = (count - 1) / 3;

    let mut found: Option<(usize, Vec<[usize; 3]>)> = None;
    for &c in pts {
        if let Some(groups) = halving_triples(space, pts, c) {
            if found.is_some() {
                return Err(shape("two candidate accumulation points".into()));
            }
            found = Some((c, groups));
        }
    }
    let (acc, groups) = found.ok_or_else(|| {
        shape("no point has a halving groups-of-three distance profile".into())
    })?;

    let dist = |a: usize, b: usize| space.dist(a, b).to_f64();
    let mut q = Vec::with_capacity(level_count);
    let mut members = Vec::with_capacity(count);
    members.push(acc);
    let mut scale_sum = 0.0;
    for (j, g) in groups.iter().enumerate() {
        let (dab, dac, dbc) = (dist(g[0], g[1]), dist(g[0], g[2]), dist(g[1], g[2]));
        // the base is the smallest side; the apex is the corner it misses
        let (base0, apex, base1, base_len, leg_a, leg_b) = if dab <= dac && dab <= dbc {
            (g[0], g[2], g[1], dab, dac, dbc)
        } else if dac <= dab && dac <= dbc {
            (g[0], g[1], g[2], dac, dab, dbc)
        } else {
            (g[1], g[0], g[2], dbc, dab, dac)
        };
        if !rel_close(leg_a, leg_b, DETECT_RTOL) {
            return Err(shape(format!("level {j} has unequal legs")));
        }
        let leg = 0.5 * (leg_a + leg_b);
        let ratio = base_len / leg;
        if ratio > 1.0 + DETECT_RTOL || ratio < base_ratio(0.0) * (1.0 - DETECT_RTOL) {
            return Err(shape(format!(
                "level {j} base/leg ratio {ratio} is outside the apex-angle range"
            )));
        }
        let qj = (6.0 / std::f64::consts::PI)
            * (1.0 - ratio * ratio / 2.0).clamp(-1.0, 1.0).acos()
            - 1.0;
        q.push(qj.clamp(0.0, 1.0));
        scale_sum += leg * 2.0f64.powi(j as i32 + 1);
        members.push(base0);
        members.push(apex);
        members.push(base1);
    }
    let scale = scale_sum / level_count as f64;

    // flavor from the shallowest cross-level pair: gap K/2 versus max K
    let observed = dist(members[1], members[4]);
    let flavor = if rel_close(observed, 0.5 * scale, DETECT_RTOL) {
        TelescopeFlavor::Metric
    } else if rel_close(observed, scale, DETECT_RTOL) {
        TelescopeFlavor::Ultrametric
    } else {
        return Err(shape(format!(
            "cross-level distance {observed} matches neither flavor at scale {scale}"
        )));
    };

    // certificate: the rebuilt telescope must reproduce every entry
    let spec = TelescopeSpec::new(q.clone(), level_count - 1, flavor, scale)?;
    let expected = telescope(&spec)?;
    let tol = VERIFY_TOL * scale.max(1.0);
    for x in 0..count {
        for y in (x + 1)..count {
            let got = dist(members[x], members[y]);
            let want = expected.dist(x, y).to_f64();
            if (got - want).abs() > tol {
                return Err(shape(format!(
                    "entry between recovered points {x} and {y} deviates by {}",
                    (got - want).abs()
                )));
            }
        }
    }

    Ok(TelescopeFingerprint { q, scale, flavor, members })
}
