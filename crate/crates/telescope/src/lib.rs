//! Telescope spaces with recoverable parameters, simplex-indexed metric
//! families, and continuity audits.
//!
//! A telescope space stacks shrinking isosceles triangles toward an
//! accumulation point, one triangle per level, with the level-j apex angle
//! encoding a parameter q_j in [0, 1]. The whole parameter list, together
//! with a global scale, can be read back off the bare distance table:
//! [`fingerprint`] recovers (q, K) from any relabeling of such a space, and
//! can dig the telescope part out of a larger space when the other points
//! are glued in through sufficiently fine product blocks.
//!
//! On top of the telescopes sits a family of spaces indexed by a simplex:
//! [`simplex_metric`] blends a list of component spaces with a parameter
//! telescope so that each vertex of the simplex collapses everything except
//! its component, while interior points give genuine metrics (or
//! ultrametrics) remembering both the barycentric coordinates and a branch
//! index. [`path_continuity_audit`] tracks how the family's tables move
//! along a segment, and [`vertex_branch_selection`] certifies a branch that
//! no component can shadow.

pub mod audit;
pub mod error;
pub mod fingerprint;
pub mod path;
pub mod simplex;
pub mod spec;

pub use audit::{
    path_continuity_audit, refinement_ratio, vertex_branch_selection, AuditRow, BranchCollision,
    PathAudit, SelectionCertificate,
};
pub use error::{Result, TelescopeError};
pub use fingerprint::{fingerprint, TelescopeFingerprint};
pub use path::{branch_parameters, simplex_metric, PathFlavor, PathSpec, SimplexMetricResult};
pub use simplex::SimplexPoint;
pub use spec::{telescope, TelescopeFlavor, TelescopeSpec};
