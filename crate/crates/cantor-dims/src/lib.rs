//! Compact ultrametric spaces with prescribed fractal dimensions.
//!
//! A space here is a rooted tree of branching counts m_n against a strictly
//! decreasing scale sequence alpha(n): points are infinite digit strings,
//! the distance between two strings is the scale of their first
//! disagreement. Everything dimensional about such a space is a functional
//! of the two sequences, so the crate works with [`family::Family`]
//! descriptors directly and only materializes finite truncations
//! ([`spec::CantorSpec`]) when a concrete distance matrix is wanted.
//!
//! On top of the descriptors sit exact covering-number formulas
//! ([`covering`]), the four dimension estimators with certified enclosures
//! ([`dims`]), a catalogue of blocks realizing each monotone pattern of
//! {0, 1, inf} across the 4-tuple ([`blocks`]), and a factory gluing
//! rescaled blocks into a space with any prescribed admissible tuple
//! ([`factory`]). Scale exponents too large for positional arithmetic are
//! carried symbolically ([`pow2sum`], [`tower`]) so the staircase and
//! tower families compare exactly instead of overflowing.

pub mod blocks;
pub mod covering;
pub mod dims;
pub mod error;
pub mod factory;
pub mod family;
pub mod logval;
pub mod pow2sum;
pub mod spec;
pub mod tower;

pub use blocks::{
    block_tags, building_block, plateau_conditions_certified, staircase_condition_ratios,
    BlockConstruction, BuildingBlock, Construction, EnvelopeCheck,
};
pub use covering::{locate_gap, CountLog};
pub use dims::{
    dim_sequences, dimension_report, theta_eta, DimBound, DimRow, DimValue, DimensionReport,
    DimensionalType, ThetaReport, ThetaRow, WindowPolicy,
};
pub use error::{CantorError, Result};
pub use factory::{
    euclidean_grid, prescribed_assembly, prescribed_with_tdim, AssemblyComponent,
    CantorAssembly, CubeComponent, TdimAssembly,
};
pub use family::{AlphaVal, Family, Mag};
pub use logval::SeqLog;
pub use pow2sum::Pow2Sum;
pub use spec::CantorSpec;
