//! Gromov-Hausdorff distances between finite spaces.
//!
//! The ordinary distance is computed exactly as half the minimum
//! correspondence distortion, with the minimizing relation as a witness,
//! whenever the combined point count fits the search budget; anything larger
//! gets a certified two-sided interval and says so. The non-Archimedean
//! variant restricts the ambient spaces to ultrametric ones; it is exact
//! when diameters differ or an isometry exists, interval-valued otherwise,
//! and the scaled-copy table shows the two distances drift apart by any
//! prescribed factor.
//!
//! Sup-distance between two metrics on the same point set re-exports from
//! the core crate; a doubled-distortion bound for surjective maps is kept as
//! an independent cross-check on the solver.

pub mod correspondence;
pub mod error;
pub mod result;
pub mod solver;
pub mod ultra;

pub use correspondence::{Correspondence, MAX_RIGHT_POINTS};
pub use error::{GhError, Result};
pub use metric_core::sup_distance;
pub use result::{GhResult, GhValue, GhWitness};
pub use solver::{distortion, gh_bounds, gh_exact, gh_upper_via_surjection, GH_EXACT_LIMIT};
pub use ultra::{qiu_demo, ugh, ugh_ultrametric_axiom_audit, QiuRow, UghAxiomAudit};
