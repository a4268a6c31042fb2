//! Continuity audits along simplex segments and branch selection for the
//! vertex-collapse family.
//!
//! An audit samples a segment of the simplex on a uniform grid and reports,
//! for every consecutive pair of samples, how far the two distance tables
//! drift apart. Twice that drift is a certified bound on the distance
//! between the two spaces, since collapsing one table onto the other moves
//! no pair by more than the drift in each of the two legs. Refining the
//! grid should shrink the largest step roughly in proportion, which the
//! ratio helper makes checkable.
//!
//! Branch selection screens the candidate branches of a family against the
//! component spaces: a component can shadow a branch only when the component
//! itself is telescope-shaped and its recovered parameters coincide with the
//! branch's embedded parameters at some sampled interior point. Each
//! component can disqualify at most one branch (the branch flags of two
//! different branches never agree at an interior point), so with one spare
//! branch a clean choice always exists.

use metric_core::sup_distance;
use metric_core::Scalar;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Result, TelescopeError};
use crate::fingerprint::fingerprint;
use crate::path::{simplex_metric, PathSpec};
use crate::simplex::SimplexPoint;

/// Largest coordinate-wise deviation under which two parameter vectors are
/// treated as the same point of the parameter cube.
const COLLISION_TOL: f64 = 1e-9;

/// One grid sample of a continuity audit.
#[derive(Debug, Clone)]
pub struct AuditRow {
    /// Sample position along the segment, in [0, 1].
    pub t: BigRational,
    /// Sup deviation between this sample's table and the previous one.
    pub step: Scalar,
    /// Certified distance bound between the two samples: twice the step.
    pub gh_bound: Scalar,
}

/// Continuity audit along a segment, rows in grid order.
#[derive(Debug, Clone)]
pub struct PathAudit {
    pub rows: Vec<AuditRow>,
}

impl PathAudit {
    /// Largest single-step table deviation observed on the grid.
    pub fn max_step(&self) -> Scalar {
        let mut best = Scalar::zero();
        for row in &self.rows {
            if row.step > best {
                best = row.step.clone();
            }
        }
        best
    }

    /// Renders the audit as CSV with header `t,sup_distance,gh_bound`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,sup_distance,gh_bound\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{}\n",
                row.t.to_f64().unwrap_or(f64::NAN),
                row.step.to_f64(),
                row.gh_bound.to_f64(),
            ));
        }
        out
    }
}

/// Samples the segment from `a` to `b` on a uniform grid of the given size
/// and measures the table drift between consecutive samples.
///
/// The first row sits at t = 0 with zero drift; row i compares the samples
/// at t = (i-1)/grid and t = i/grid. Endpoints may be vertices: the drift is
/// measured on the raw tables, which stay label-aligned across the segment.
pub fn path_continuity_audit(
    path: &PathSpec,
    a: &SimplexPoint,
    b: &SimplexPoint,
    grid: usize,
) -> Result<PathAudit> {
    path.validate()?;
    if grid == 0 {
        return Err(TelescopeError::InvalidParameter(
            "audit grid needs at least one step".into(),
        ));
    }
    let mut rows = Vec::with_capacity(grid + 1);
    rows.push(AuditRow {
        t: BigRational::zero(),
        step: Scalar::zero(),
        gh_bound: Scalar::zero(),
    });
    let mut prev = simplex_metric(path, a)?.space;
    for i in 1..=grid {
        let t = BigRational::new(i.into(), grid.into());
        let s = a.lerp(b, &t)?;
        let cur = simplex_metric(path, &s)?.space;
        let step = sup_distance(&prev, &cur)?;
        let gh_bound = step.double();
        rows.push(AuditRow { t, step, gh_bound });
        prev = cur;
    }
    Ok(PathAudit { rows })
}

/// Ratio of the largest step of a coarse audit to that of a finer one over
/// the same segment. A family continuous along the segment shows a ratio
/// near the refinement factor.
pub fn refinement_ratio(coarse: &PathAudit, fine: &PathAudit) -> Result<f64> {
    let c = coarse.max_step().to_f64();
    let f = fine.max_step().to_f64();
    if f <= 0.0 {
        return Err(TelescopeError::Precondition(
            "refinement ratio needs a nonzero fine-grid step".into(),
        ));
    }
    Ok(c / f)
}

/// A sampled interior point whose embedded parameters matched a component's
/// own recovered parameters, disqualifying the branch.
#[derive(Debug, Clone)]
pub struct BranchCollision {
    pub branch: usize,
    pub sample_index: usize,
    pub component: usize,
}

/// Outcome of screening every candidate branch over an interior sample.
#[derive(Debug, Clone)]
pub struct SelectionCertificate {
    /// Smallest branch with no collisions over the sample.
    pub branch: usize,
    /// Interior points screened, in generation order.
    pub sample: Vec<SimplexPoint>,
    /// Parameters recovered from each component space; None marks a
    /// component that is not telescope-shaped and so cannot shadow any
    /// branch.
    pub component_parameters: Vec<Option<Vec<f64>>>,
    /// Every collision found, across all candidate branches.
    pub collisions: Vec<BranchCollision>,
}

/// Screens every candidate branch of the family over a fixed interior
/// sample and returns the smallest branch whose embedded parameters collide
/// with no component.
///
/// Requires one spare branch (branch count = component count + 1) and a
/// telescope truncation long enough to carry the branch flags. Every
/// sampled space must yield a recoverable fingerprint; a failure there is
/// reported as a precondition error naming the branch and sample.
pub fn vertex_branch_selection(path: &PathSpec) -> Result<SelectionCertificate> {
    path.validate()?;
    let n = path.n();
    if path.branches != n + 2 {
        return Err(TelescopeError::Precondition(format!(
            "branch selection needs {} candidate branches for {} components, got {}",
            n + 2,
            n + 1,
            path.branches
        )));
    }
    if path.levels + 1 < (n + 1) + path.branches {
        return Err(TelescopeError::Precondition(format!(
            "telescope truncation too short to carry the branch flags: needs {} levels, got {}",
            n + path.branches,
            path.levels
        )));
    }
    let sample = interior_sample(n);
    let component_parameters: Vec<Option<Vec<f64>>> = path
        .components
        .iter()
        .map(|x| fingerprint(x).ok().map(|fp| fp.q))
        .collect();
    let mut collisions = Vec::new();
    let mut branch = None;
    for k in 1..=path.branches {
        let mut probe = path.clone();
        probe.branch = k;
        let mut hit = false;
        for (si, s) in sample.iter().enumerate() {
            let space = simplex_metric(&probe, s)?.space;
            let fp = fingerprint(&space).map_err(|e| {
                TelescopeError::Precondition(format!(
                    "branch {k} sample {si}: embedded parameters unrecoverable: {e}"
                ))
            })?;
            for (ci, params) in component_parameters.iter().enumerate() {
                if let Some(q) = params {
                    if q_close(&fp.q, q, COLLISION_TOL) {
                        collisions.push(BranchCollision {
                            branch: k,
                            sample_index: si,
                            component: ci,
                        });
                        hit = true;
                    }
                }
            }
        }
        if !hit && branch.is_none() {
            branch = Some(k);
        }
    }
    let branch = branch.ok_or_else(|| {
        TelescopeError::Precondition("every candidate branch collided over the sample".into())
    })?;
    Ok(SelectionCertificate {
        branch,
        sample,
        component_parameters,
        collisions,
    })
}

/// All interior rational points with a fixed denominator: the compositions
/// of max(7, n+2) into n+1 positive parts.
fn interior_sample(n: usize) -> Vec<SimplexPoint> {
    let denom = (n as i64 + 2).max(7);
    let mut raw = Vec::new();
    let mut prefix = Vec::with_capacity(n + 1);
    compositions(denom, n + 1, &mut prefix, &mut raw);
    raw.into_iter()
        .map(|parts| {
            let coords = parts
                .iter()
                .map(|&k| BigRational::new(k.into(), denom.into()))
                .collect();
            SimplexPoint::new(coords).expect("composition coordinates sum to one")
        })
        .collect()
}

fn compositions(total: i64, parts: usize, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    let reserve = parts as i64 - 1;
    for first in 1..=(total - reserve) {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

/// Coordinate-wise closeness with implicit zero padding: two parameter
/// vectors of different truncation lengths agree when the shared prefix
/// agrees and the tail of the longer one is tolerably zero.
fn q_close(a: &[f64], b: &[f64], tol: f64) -> bool {
    (0..a.len().max(b.len())).all(|i| {
        let x = a.get(i).copied().unwrap_or(0.0);
        let y = b.get(i).copied().unwrap_or(0.0);
        (x - y).abs() <= tol
    })
}
