//! The simplex-indexed family of glued spaces.
//!
//! Each simplex point s and branch choice k determine one space: every
//! component space is crossed with a rescaled null block and weighted by its
//! bump value, a telescope encodes (s, k) in its parameters, and everything
//! is glued through basepoints. At vertex i the weights collapse all blocks
//! except component i, so the quotient recovers that component exactly; off
//! the vertices the result is a genuine metric carrying a recoverable
//! fingerprint that separates both the simplex point and the branch.

use crate::error::{Result, TelescopeError};
use crate::simplex::SimplexPoint;
use crate::spec::{telescope, TelescopeFlavor, TelescopeSpec};
use metric_core::{
    linf_product, p_amalgam, quotient, FiniteMetricSpace, GlueExponent, Piece, Scalar,
};
use num_traits::ToPrimitive;

/// Which amalgam rule glues the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathFlavor {
    /// Sum-glued components with a gap-separated telescope.
    Metric,
    /// Max-glued components with a max-separated telescope; requires every
    /// ingredient to be ultrametric.
    Ultrametric,
}

/// Ingredients of the family. `components` are the target spaces X_0..X_n,
/// `glue` has one point per component plus a final point for the telescope
/// slot, `basepoints[i]` indexes the gluing point inside component i (the
/// telescope always glues at its accumulation point), `block` is the null
/// factor crossed into every component, and `branch` is the 1-based branch
/// choice in 1..=branches.
///
/// For reliable fingerprint extraction the block's minimum distance should
/// sit well below 2^{-levels-1}, the deepest telescope leg.
#[derive(Debug, Clone)]
pub struct PathSpec {
    pub components: Vec<FiniteMetricSpace>,
    pub branches: usize,
    pub branch: usize,
    pub glue: FiniteMetricSpace,
    pub basepoints: Vec<usize>,
    pub block: FiniteMetricSpace,
    pub levels: usize,
    pub flavor: PathFlavor,
}

impl PathSpec {
    /// n, for n+1 component spaces.
    pub fn n(&self) -> usize {
        self.components.len() - 1
    }

    /// Checks every structural invariant, including a positive certified
    /// distance lower bound between each pair of components.
    pub fn validate(&self) -> Result<()> {
        let count = self.components.len();
        if count < 2 {
            return Err(TelescopeError::Precondition(
                "the family needs at least two component spaces".into(),
            ));
        }
        if self.branches < 2 {
            return Err(TelescopeError::InvalidParameter(
                "the family needs at least two branches".into(),
            ));
        }
        if self.branch < 1 || self.branch > self.branches {
            return Err(TelescopeError::InvalidParameter(format!(
                "branch {} is outside 1..={}",
                self.branch, self.branches
            )));
        }
        if self.glue.len() != count + 1 {
            return Err(TelescopeError::Precondition(format!(
                "glue space has {} points for {count} components plus the telescope slot",
                self.glue.len()
            )));
        }
        if self.basepoints.len() != count {
            return Err(TelescopeError::Precondition(format!(
                "{} basepoints for {count} components",
                self.basepoints.len()
            )));
        }
        for (i, (&b, x)) in self.basepoints.iter().zip(&self.components).enumerate() {
            if b >= x.len() {
                return Err(TelescopeError::Precondition(format!(
                    "basepoint {b} is outside component {i}"
                )));
            }
        }
        if self.levels < 1 {
            return Err(TelescopeError::InvalidParameter(
                "the telescope needs at least levels 0 and 1".into(),
            ));
        }
        let need_ultra = self.flavor == PathFlavor::Ultrametric;
        let mut kinds = vec![("glue", &self.glue), ("block", &self.block)];
        for x in &self.components {
            kinds.push(("component", x));
        }
        for (what, sp) in kinds {
            if !sp.kind().is_separated() {
                return Err(TelescopeError::Precondition(format!(
                    "{what} space must be separated, found {}",
                    sp.kind()
                )));
            }
            if need_ultra && !sp.kind().is_ultra() {
                return Err(TelescopeError::Precondition(format!(
                    "the max-glued flavor needs ultrametric ingredients, {what} is {}",
                    sp.kind()
                )));
            }
        }
        // the family separates points of the simplex only if the component
        // spaces are certifiably pairwise distinct
        for i in 0..count {
            for j in (i + 1)..count {
                let r = gromov::gh_exact(&self.components[i], &self.components[j])?;
                if r.lower().is_zero() {
                    return Err(TelescopeError::Precondition(format!(
                        "components {i} and {j} have no positive certified distance lower bound"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Telescope parameters for a simplex point and branch: the barycentric
/// coordinates, then one slot per branch holding xi(s) at the chosen branch,
/// then zeros, truncated or padded to levels+1 entries. At a vertex xi
/// vanishes, so every branch encodes to the same parameters; off the
/// vertices distinct (s, branch) pairs encode to distinct parameters.
pub fn branch_parameters(
    s: &SimplexPoint,
    branch: usize,
    branches: usize,
    levels: usize,
) -> Vec<f64> {
    let to_f = |r: &num_rational::BigRational| r.to_f64().expect("parameters fit in binary64");
    let mut q: Vec<f64> = s.coords().iter().map(to_f).collect();
    let xi = to_f(&s.xi());
    for t in 1..=branches {
        q.push(if t == branch { xi } else { 0.0 });
    }
    q.resize(levels + 1, 0.0);
    q
}

/// One member of the family, its quotient, and the class map onto it.
#[derive(Debug, Clone)]
pub struct SimplexMetricResult {
    /// The glued space: a pseudo-metric at the vertices, a genuine metric
    /// (or ultrametric, per flavor) everywhere else.
    pub space: FiniteMetricSpace,
    /// The space with zero-distance points identified.
    pub quotient: FiniteMetricSpace,
    /// Class index of every point of `space` inside `quotient`.
    pub class_of: Vec<usize>,
}

/// Builds the family member at simplex point `s` under `path.branch`.
pub fn simplex_metric(path: &PathSpec, s: &SimplexPoint) -> Result<SimplexMetricResult> {
    path.validate()?;
    if s.dim() + 1 != path.components.len() {
        return Err(TelescopeError::InvalidParameter(format!(
            "a {}-coordinate simplex point indexes {} components, the family has {}",
            s.dim() + 1,
            s.dim() + 1,
            path.components.len()
        )));
    }

    let xi = Scalar::Exact(s.xi());
    let scaled_block = path.block.dilate(&xi)?;
    let mut pieces_owned = Vec::with_capacity(path.components.len() + 1);
    for (i, x) in path.components.iter().enumerate() {
        let product = linf_product(x, &scaled_block);
        pieces_owned.push(product.dilate(&Scalar::Exact(s.zeta(i)))?);
    }

    let q = branch_parameters(s, path.branch, path.branches, path.levels);
    let tel_flavor = match path.flavor {
        PathFlavor::Metric => TelescopeFlavor::Metric,
        PathFlavor::Ultrametric => TelescopeFlavor::Ultrametric,
    };
    let tel = telescope(&TelescopeSpec::new(q, path.levels, tel_flavor, 1.0)?)?;
    pieces_owned.push(tel.dilate(&xi)?);

    let block_len = path.block.len();
    let pieces: Vec<Piece<'_>> = pieces_owned
        .iter()
        .enumerate()
        .map(|(i, sp)| Piece {
            space: sp,
            // product points are (component point, block point) in row-major
            // order; the telescope glues at its accumulation point 0
            basepoint: if i < path.basepoints.len() { path.basepoints[i] * block_len } else { 0 },
        })
        .collect();
    let exponent = match path.flavor {
        PathFlavor::Metric => GlueExponent::One,
        PathFlavor::Ultrametric => GlueExponent::Infinity,
    };
    let space = p_amalgam(&pieces, &path.glue.dilate(&xi)?, exponent)?;
    let (quotient, class_of) = quotient(&space)?;
    Ok(SimplexMetricResult { space, quotient, class_of })
}

#[cfg(test)]
mod tests {
    use super::*;
    use metric_core::{isometry, Kind};
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Two-point ultrametric space of the given diameter.
    fn pair(label: &str, diam: (i64, i64)) -> FiniteMetricSpace {
        let d = Scalar::Exact(rat(diam.0, diam.1));
        FiniteMetricSpace::new(
            vec![format!("{label}0"), format!("{label}1")],
            vec![
                vec![Scalar::zero(), d.clone()],
                vec![d, Scalar::zero()],
            ],
            Kind::Ultrametric,
        )
        .unwrap()
    }

    /// Equilateral ultrametric glue on n points with all distances one.
    fn glue(n: usize) -> FiniteMetricSpace {
        let one = Scalar::from_int(1);
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Scalar::zero() } else { one.clone() })
                    .collect()
            })
            .collect();
        FiniteMetricSpace::new(
            (0..n).map(|i| format!("g{i}")).collect(),
            matrix,
            Kind::Ultrametric,
        )
        .unwrap()
    }

    /// Dyadic ultrametric block on 2^depth points standing in for the null
    /// factor: indices first differing in bit v (most significant first) sit
    /// at distance 2^{-v^2}.
    fn dyadic_block(depth: u32) -> FiniteMetricSpace {
        let n = 1usize << depth;
        let dist = |i: usize, j: usize| {
            if i == j {
                return Scalar::zero();
            }
            let top = usize::BITS - 1 - (i ^ j).leading_zeros();
            let v = depth - 1 - top;
            Scalar::Exact(rat(1, 1i64 << (v * v)))
        };
        let matrix = (0..n).map(|i| (0..n).map(|j| dist(i, j)).collect()).collect();
        FiniteMetricSpace::new(
            (0..n).map(|i| format!("p{i}")).collect(),
            matrix,
            Kind::Ultrametric,
        )
        .unwrap()
    }

    fn path(flavor: PathFlavor) -> PathSpec {
        PathSpec {
            components: vec![pair("a", (1, 1)), pair("b", (1, 2))],
            branches: 3,
            branch: 1,
            glue: glue(3),
            basepoints: vec![0, 0],
            block: dyadic_block(2),
            levels: 4,
            flavor,
        }
    }

    #[test]
    fn vertex_quotients_recover_the_components() {
        for flavor in [PathFlavor::Metric, PathFlavor::Ultrametric] {
            let p = path(flavor);
            for i in 0..2 {
                let v = SimplexPoint::vertex(1, i).unwrap();
                let r = simplex_metric(&p, &v).unwrap();
                assert!(!r.space.kind().is_separated());
                let witness = isometry(&r.quotient, &p.components[i]).unwrap();
                assert!(witness.is_some(), "vertex {i} quotient is not component {i}");
            }
        }
    }

    #[test]
    fn interior_points_give_genuine_metrics_of_the_flavor() {
        let s = SimplexPoint::new(vec![rat(2, 5), rat(3, 5)]).unwrap();
        let m = simplex_metric(&path(PathFlavor::Metric), &s).unwrap();
        assert_eq!(m.space.kind(), Kind::Metric);
        assert_eq!(m.quotient.len(), m.space.len());
        assert!(m.space.validate().unwrap().satisfies(Kind::Metric));

        let u = simplex_metric(&path(PathFlavor::Ultrametric), &s).unwrap();
        assert_eq!(u.space.kind(), Kind::Ultrametric);
        assert!(u.space.validate().unwrap().satisfies(Kind::Ultrametric));
    }

    #[test]
    fn parameters_separate_points_and_branches() {
        let s = SimplexPoint::new(vec![rat(2, 5), rat(3, 5)]).unwrap();
        let t = SimplexPoint::new(vec![rat(1, 5), rat(4, 5)]).unwrap();
        let qs = branch_parameters(&s, 1, 3, 4);
        let qt = branch_parameters(&t, 1, 3, 4);
        let qs2 = branch_parameters(&s, 2, 3, 4);
        assert_ne!(qs, qt);
        assert_ne!(qs, qs2);
        // at a vertex the branch information is erased
        let v = SimplexPoint::vertex(1, 0).unwrap();
        assert_eq!(branch_parameters(&v, 1, 3, 4), branch_parameters(&v, 2, 3, 4));
    }

    #[test]
    fn embedded_fingerprints_differ_across_branches() {
        let s = SimplexPoint::new(vec![rat(2, 5), rat(3, 5)]).unwrap();
        let mut p = path(PathFlavor::Metric);
        // a deep block keeps every product distance below the embedded
        // telescope's smallest side, so extraction can find the boundary
        p.block = dyadic_block(4);
        let fp1 = crate::fingerprint(&simplex_metric(&p, &s).unwrap().space).unwrap();
        p.branch = 2;
        let fp2 = crate::fingerprint(&simplex_metric(&p, &s).unwrap().space).unwrap();
        let expected1 = branch_parameters(&s, 1, 3, 4);
        let expected2 = branch_parameters(&s, 2, 3, 4);
        for (got, want) in fp1.q.iter().zip(&expected1) {
            assert!((got - want).abs() < 1e-9);
        }
        for (got, want) in fp2.q.iter().zip(&expected2) {
            assert!((got - want).abs() < 1e-9);
        }
        let xi = 0.4;
        assert!((fp1.scale - xi).abs() < 1e-9);
        assert!((fp1.q[2] - xi).abs() < 1e-9 && fp1.q[3].abs() < 1e-9);
        assert!((fp2.q[3] - xi).abs() < 1e-9 && fp2.q[2].abs() < 1e-9);
    }

    #[test]
    fn validation_rejects_indistinct_components() {
        let mut p = path(PathFlavor::Metric);
        p.components = vec![pair("a", (1, 1)), pair("b", (1, 1))];
        match p.validate() {
            Err(TelescopeError::Precondition(msg)) => {
                assert!(msg.contains("lower bound"), "unexpected message: {msg}")
            }
            other => panic!("expected a precondition failure, got {other:?}"),
        }
    }

    #[test]
    fn validation_rejects_mismatched_shapes() {
        let mut p = path(PathFlavor::Metric);
        p.glue = glue(4);
        assert!(p.validate().is_err());

        let mut p = path(PathFlavor::Metric);
        p.basepoints = vec![0, 5];
        assert!(p.validate().is_err());

        let mut p = path(PathFlavor::Metric);
        p.branch = 4;
        assert!(p.validate().is_err());
    }

    #[test]
    fn ultrametric_flavor_requires_ultrametric_ingredients() {
        let mut p = path(PathFlavor::Ultrametric);
        // a 3-point path metric: valid metric, not an ultrametric
        let line = FiniteMetricSpace::new(
            vec!["l0".into(), "l1".into(), "l2".into()],
            vec![
                vec![Scalar::zero(), Scalar::from_int(1), Scalar::from_int(2)],
                vec![Scalar::from_int(1), Scalar::zero(), Scalar::from_int(1)],
                vec![Scalar::from_int(2), Scalar::from_int(1), Scalar::zero()],
            ],
            Kind::Metric,
        )
        .unwrap();
        p.components[0] = line;
        match p.validate() {
            Err(TelescopeError::Precondition(msg)) => {
                assert!(msg.contains("ultrametric"), "unexpected message: {msg}")
            }
            other => panic!("expected a precondition failure, got {other:?}"),
        }
    }
}
