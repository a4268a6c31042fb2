//! Realizes a prescribed dimension 4-tuple as a glued assembly of rescaled
//! catalogue blocks, optionally crossed with a cube factor carrying a
//! topological label.
//!
//! Selection rule: walk the tuple left to right and pick one block for every
//! position that strictly exceeds its predecessor (with 0 before the first).
//! The block chosen at position k has its first k - 1 slots at zero and the
//! rest at one (or at infinity, when the excess is infinite); a finite excess
//! a_k rescales the unit block by the snowflake power 1/a_k. Componentwise
//! max over the glued pieces then reproduces the request exactly.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use metric_core::{p_amalgam, snowflake, FiniteMetricSpace, GlueExponent, Kind, Piece, Scalar};

use crate::blocks::{building_block, BuildingBlock, Construction};
use crate::dims::{DimBound, DimensionalType};
use crate::error::{CantorError, Result};
use crate::spec::CantorSpec;

/// One selected block: which tuple position forced it in, and how it is
/// rescaled to carry that position's value.
#[derive(Clone, Debug)]
pub struct AssemblyComponent {
    /// 1-based tuple slot whose strict increase selected this block.
    pub position: u8,
    pub block: BuildingBlock,
    /// Multiplier applied to the block's unit target; None for infinite
    /// slots (and for the all-zero fallback), which need no rescaling.
    pub dim_scale: Option<BigRational>,
    pub scaled_target: DimensionalType,
}

impl AssemblyComponent {
    /// The snowflake exponent realizing the rescaling: raising distances to
    /// the power 1/s multiplies every dimension by s.
    pub fn metric_exponent(&self) -> Option<BigRational> {
        self.dim_scale.as_ref().map(|s| s.recip())
    }
}

/// A glued family of rescaled blocks whose componentwise max is the target.
#[derive(Clone, Debug)]
pub struct CantorAssembly {
    pub target: DimensionalType,
    pub components: Vec<AssemblyComponent>,
}

fn tag_for(position: u8, infinite: bool) -> &'static str {
    match (position, infinite) {
        (1, false) => "1111",
        (1, true) => "iiii",
        (2, false) => "0111",
        (2, true) => "0iii",
        (3, false) => "0011",
        (3, true) => "00ii",
        (4, false) => "0001",
        _ => "000i",
    }
}

/// Select and rescale catalogue blocks for a monotone tuple of finite or
/// infinite values. Targets carrying a positive topological label must go
/// through [`prescribed_with_tdim`] instead.
pub fn prescribed_assembly(target: &DimensionalType) -> Result<CantorAssembly> {
    if let Some(l) = &target.tdim {
        if !l.is_zero() {
            return Err(CantorError::InvalidParameter(
                "positive topological labels need the cube-attaching factory".into(),
            ));
        }
    }
    let zero = DimBound::zero();
    let mut components = Vec::new();
    let mut prev = &zero;
    for (idx, a_k) in target.a.iter().enumerate() {
        let position = idx as u8 + 1;
        if a_k.cmp_val(prev) == Ordering::Greater {
            let (tag, dim_scale) = match a_k {
                DimBound::Infinite => (tag_for(position, true), None),
                DimBound::Finite(v) => (tag_for(position, false), Some(v.clone())),
            };
            let block = building_block(tag)?;
            let scaled_target = match &dim_scale {
                Some(s) => block.target.scale_by(s),
                None => block.target.clone(),
            };
            components.push(AssemblyComponent { position, block, dim_scale, scaled_target });
        }
        prev = a_k;
    }
    if components.is_empty() {
        // all-zero target: the vanishing block alone
        let block = building_block("0000")?;
        let scaled_target = block.target.clone();
        components.push(AssemblyComponent { position: 1, block, dim_scale: None, scaled_target });
    }
    let assembly = CantorAssembly { target: target.clone(), components };
    let combined = assembly.combined_target();
    for (got, want) in combined.a.iter().zip(&assembly.target.a) {
        if got.cmp_val(want) != Ordering::Equal {
            return Err(CantorError::InvalidParameter(format!(
                "tuple {target} is not realizable by the catalogue (assembled {combined})"
            )));
        }
    }
    Ok(assembly)
}

impl CantorAssembly {
    /// Componentwise max of the scaled component targets: the tuple of the
    /// glued space.
    pub fn combined_target(&self) -> DimensionalType {
        let mut acc = DimensionalType::new([
            DimBound::zero(),
            DimBound::zero(),
            DimBound::zero(),
            DimBound::zero(),
        ])
        .expect("constant tuple");
        for c in &self.components {
            acc = acc.max(&c.scaled_target);
        }
        acc
    }

    /// A finite sample of the assembly: each component enumerated to the
    /// requested depth (truncated further where branching explodes), raised
    /// to its snowflake power, and glued at maximal distance, so the result
    /// is ultrametric and every cross-component distance equals the largest
    /// component diameter.
    pub fn enumerate(&self, depth: u64) -> Result<FiniteMetricSpace> {
        if depth == 0 {
            return Err(CantorError::InvalidParameter("depth must be at least 1".into()));
        }
        let mut spaces = Vec::with_capacity(self.components.len());
        for c in &self.components {
            let mut s = component_space(c, depth)?;
            if let Some(gamma) = c.metric_exponent() {
                if gamma != BigRational::one() {
                    s = snowflake(&s, &gamma)?;
                }
            }
            spaces.push(s);
        }
        if spaces.len() == 1 {
            return Ok(spaces.pop().unwrap());
        }
        let mut diam = spaces[0].diameter();
        for s in &spaces[1..] {
            let d = s.diameter();
            if d.cmp_val(&diam) == Ordering::Greater {
                diam = d;
            }
        }
        let k = spaces.len();
        let labels: Vec<String> =
            self.components.iter().map(|c| c.block.tag.to_string()).collect();
        let mut rows = vec![vec![Scalar::from_ratio(0, 1); k]; k];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                if i != j {
                    *v = diam.clone();
                }
            }
        }
        let glue = FiniteMetricSpace::new(labels, rows, Kind::Ultrametric)?;
        let pieces: Vec<Piece> =
            spaces.iter().map(|s| Piece { space: s, basepoint: 0 }).collect();
        p_amalgam(&pieces, &glue, GlueExponent::Infinity).map_err(CantorError::from)
    }
}

/// Enumerate one component, backing off to shallower depths when the level
/// sizes blow past the matrix budget (giant-branching families).
fn component_space(c: &AssemblyComponent, depth: u64) -> Result<FiniteMetricSpace> {
    match &c.block.construction {
        Construction::Family(f) => {
            let mut d = depth;
            loop {
                match CantorSpec::new(f.clone(), d).and_then(|s| s.enumerate()) {
                    Ok(space) => return Ok(space),
                    Err(CantorError::SizeBudget(_)) if d > 1 => d -= 1,
                    Err(e) => return Err(e),
                }
            }
        }
        Construction::Blocks(b) => {
            let mut n = depth.min(3);
            loop {
                match b.enumerate_block(n) {
                    Ok(space) => return Ok(space),
                    Err(CantorError::SizeBudget(_)) if n > 1 => n -= 1,
                    Err(e) => return Err(e),
                }
            }
        }
    }
}

/// A finite grid sample of the unit cube [0, 1]^dim with the Euclidean
/// metric: (resolution + 1)^dim points at spacing 1/resolution.
#[derive(Clone, Debug)]
pub struct CubeComponent {
    pub dim: u64,
    pub resolution: u64,
    pub space: FiniteMetricSpace,
}

/// Grid points of [0, 1]^dim, labeled by their index vectors. Distances are
/// exact for dim = 1 and float square roots otherwise.
pub fn euclidean_grid(dim: u64, resolution: u64) -> Result<CubeComponent> {
    if dim == 0 || resolution == 0 {
        return Err(CantorError::InvalidParameter(
            "cube grids need dim >= 1 and resolution >= 1".into(),
        ));
    }
    if dim > 16 || resolution > 4096 {
        return Err(CantorError::SizeBudget(
            "cube grids stop at 16 dimensions and resolution 4096".into(),
        ));
    }
    let side = resolution + 1;
    let count = side
        .checked_pow(dim as u32)
        .filter(|c| *c <= 4096)
        .ok_or_else(|| CantorError::SizeBudget("cube grid exceeds 4096 points".into()))?
        as usize;
    let dim_u = dim as usize;
    let coords: Vec<Vec<u64>> = (0..count)
        .map(|mut i| {
            let mut v = vec![0u64; dim_u];
            for t in (0..dim_u).rev() {
                v[t] = (i as u64) % side;
                i /= side as usize;
            }
            v
        })
        .collect();
    let labels: Vec<String> = coords
        .iter()
        .map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("."))
        .collect();
    let mut rows = Vec::with_capacity(count);
    for a in &coords {
        let mut row = Vec::with_capacity(count);
        for b in &coords {
            let sumsq: u64 = a
                .iter()
                .zip(b)
                .map(|(x, y)| {
                    let d = x.abs_diff(*y);
                    d * d
                })
                .sum();
            let v = if dim == 1 {
                // one dimension stays exact: |x - y| / resolution
                let d = a[0].abs_diff(b[0]);
                Scalar::from_ratio(d as i64, resolution as i64)
            } else {
                Scalar::Float((sumsq as f64).sqrt() / resolution as f64)
            };
            row.push(v);
        }
        rows.push(row);
    }
    let space = FiniteMetricSpace::new(labels, rows, Kind::Metric)?;
    Ok(CubeComponent { dim, resolution, space })
}

/// An assembly together with its topological label and, for finite positive
/// labels, the cube factor realizing it.
#[derive(Clone, Debug)]
pub struct TdimAssembly {
    pub assembly: CantorAssembly,
    pub tdim: DimBound,
    pub cube: Option<CubeComponent>,
    /// Set when the label is infinite: the cube factor would be an
    /// infinite-dimensional compact cube, which no finite table represents,
    /// so only the label is tracked and [`TdimAssembly::glued`] returns the
    /// assembly alone.
    pub symbolic_cube: bool,
}

/// Realize a tuple carrying a topological label: the label 0 assembly is
/// totally disconnected as built; a finite label l >= 1 attaches a grid
/// sample of [0, 1]^l; an infinite label is recorded symbolically.
pub fn prescribed_with_tdim(target: &DimensionalType, resolution: u64) -> Result<TdimAssembly> {
    let tdim = target
        .tdim
        .clone()
        .ok_or_else(|| CantorError::InvalidParameter("target carries no topological label".into()))?;
    let mut bare = target.clone();
    bare.tdim = None;
    let assembly = prescribed_assembly(&bare)?;
    let (cube, symbolic_cube) = match &tdim {
        DimBound::Infinite => (None, true),
        DimBound::Finite(l) if l.is_zero() => (None, false),
        DimBound::Finite(l) => {
            let dim = l
                .to_integer()
                .to_u64()
                .ok_or_else(|| CantorError::SizeBudget("label too large for a grid".into()))?;
            (Some(euclidean_grid(dim, resolution)?), false)
        }
    };
    Ok(TdimAssembly { assembly, tdim, cube, symbolic_cube })
}

impl TdimAssembly {
    /// The assembly joined to its cube factor across a unit bridge (sum
    /// gluing), when a finite positive label asks for one.
    pub fn glued(&self, depth: u64) -> Result<FiniteMetricSpace> {
        let base = self.assembly.enumerate(depth)?;
        let Some(cube) = &self.cube else {
            return Ok(base);
        };
        let labels = vec!["set".to_string(), "cube".to_string()];
        let one = Scalar::from_ratio(1, 1);
        let zero = Scalar::from_ratio(0, 1);
        let rows = vec![vec![zero.clone(), one.clone()], vec![one, zero]];
        let glue = FiniteMetricSpace::new(labels, rows, Kind::Metric)?;
        let pieces =
            [Piece { space: &base, basepoint: 0 }, Piece { space: &cube.space, basepoint: 0 }];
        p_amalgam(&pieces, &glue, GlueExponent::One).map_err(CantorError::from)
    }
}
