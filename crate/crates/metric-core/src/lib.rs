//! Finite metric and ultrametric spaces with exact arithmetic where it is
//! possible and explicit tolerances where it is not.
//!
//! The central type is [`FiniteMetricSpace`]: labeled points, a symmetric
//! distance matrix of [`Scalar`] values (exact rationals or floats), and a
//! declared [`Kind`] that constructors and operations keep honest. On top of
//! it sit the standard constructions (snowflake powers, max-products, glued
//! amalgams, zero-distance quotients), an exact covering-number oracle, and
//! an exhaustive isometry search for small spaces.

pub mod covering;
pub mod error;
pub mod isometry;
pub mod json;
pub mod ops;
pub mod sampling;
pub mod scalar;
pub mod space;

pub use covering::{covering_number, CoveringAnswer, EXACT_COVER_LIMIT};
pub use error::{MetricError, Result};
pub use isometry::{isometry, isometry_with_budget, ISOMETRY_LIMIT};
pub use json::{from_json, to_json, SpaceJson};
pub use ops::{linf_product, p_amalgam, quotient, snowflake, sup_distance, GlueExponent, Piece};
pub use scalar::Scalar;
pub use space::{FiniteMetricSpace, Kind, TriangleViolation, ValidationReport, KIND_CHECK_LIMIT};
