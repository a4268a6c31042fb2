//! Towers of isosceles triangles converging to a single accumulation point.
//!
//! Level j is the vertex set of an isosceles triangle with legs 2^{-j-1} and
//! an apex angle in [pi/6, pi/3] selected by the parameter q_j, so the whole
//! distance matrix is determined by the parameter list, the level count, and
//! one global scale. Two flavors share the within-level triangles and differ
//! across levels: the metric flavor separates levels i and j by
//! |2^{-i} - 2^{-j}|, the ultrametric one by max(2^{-i}, 2^{-j}).

use crate::error::{Result, TelescopeError};
use metric_core::{FiniteMetricSpace, Kind, Scalar};

/// Which cross-level rule the telescope uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TelescopeFlavor {
    /// Cross-level distance |2^{-i} - 2^{-j}|: always a metric, never an
    /// ultrametric once there are two levels.
    Metric,
    /// Cross-level distance max(2^{-i}, 2^{-j}): always an ultrametric.
    Ultrametric,
}

/// Chord length of the unit-circle arc with central angle x, in [0, 2].
pub(crate) fn chord(x: f64) -> f64 {
    (2.0 - 2.0 * x.cos()).max(0.0).sqrt()
}

/// Apex angle encoding a parameter t in [0, 1] into [pi/6, pi/3].
pub(crate) fn apex_angle(t: f64) -> f64 {
    std::f64::consts::FRAC_PI_6 * (t + 1.0)
}

/// Base/leg ratio of a level triangle with parameter t: increasing from
/// chord(pi/6) ~ 0.5176 at t = 0 up to 1 (equilateral) at t = 1.
pub(crate) fn base_ratio(t: f64) -> f64 {
    chord(apex_angle(t))
}

/// Parameters of a telescope truncation.
///
/// `levels = J` builds triangle levels 0 through J inclusive, so the space
/// has `3 * (J + 1) + 1` points and consumes `q[0..=J]`.
#[derive(Debug, Clone)]
pub struct TelescopeSpec {
    q: Vec<f64>,
    levels: usize,
    flavor: TelescopeFlavor,
    scale: f64,
}

impl TelescopeSpec {
    pub fn new(q: Vec<f64>, levels: usize, flavor: TelescopeFlavor, scale: f64) -> Result<Self> {
        if levels < 1 {
            return Err(TelescopeError::InvalidParameter(
                "a telescope needs at least levels 0 and 1".into(),
            ));
        }
        if q.len() < levels + 1 {
            return Err(TelescopeError::InvalidParameter(format!(
                "levels 0..={levels} need {} parameters, q has {}",
                levels + 1,
                q.len()
            )));
        }
        for (j, v) in q.iter().enumerate() {
            if !v.is_finite() || !(0.0..=1.0).contains(v) {
                return Err(TelescopeError::InvalidParameter(format!(
                    "q[{j}] = {v} is outside [0, 1]"
                )));
            }
        }
        if !scale.is_finite() || scale <= 0.0 {
            return Err(TelescopeError::InvalidParameter(format!(
                "scale must be positive and finite, got {scale}"
            )));
        }
        Ok(TelescopeSpec { q, levels, flavor, scale })
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn flavor(&self) -> TelescopeFlavor {
        self.flavor
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

/// Point index of triangle corner `o` (1..=3) at level `j`; index 0 is the
/// accumulation point.
fn corner(o: usize, j: usize) -> usize {
    1 + 3 * j + (o - 1)
}

/// Materializes the truncated telescope as a validated space.
///
/// Point 0 is the accumulation point, labeled `inf`; the corner `o` of the
/// level-j triangle is labeled `o@j`. Corner 2 is the apex (the two legs are
/// {1,2} and {2,3}, the base is {1,3}).
pub fn telescope(spec: &TelescopeSpec) -> Result<FiniteMetricSpace> {
    let levels = spec.levels;
    let n = 3 * (levels + 1) + 1;
    let mut labels = Vec::with_capacity(n);
    labels.push("inf".to_string());
    for j in 0..=levels {
        for o in 1..=3 {
            labels.push(format!("{o}@{j}"));
        }
    }

    let mut matrix = vec![vec![Scalar::zero(); n]; n];
    let set = |m: &mut Vec<Vec<Scalar>>, a: usize, b: usize, v: f64| {
        let d = Scalar::Float(v * spec.scale);
        m[a][b] = d.clone();
        m[b][a] = d;
    };

    for j in 0..=levels {
        let leg = 0.5f64.powi(j as i32 + 1);
        set(&mut matrix, corner(1, j), corner(2, j), leg);
        set(&mut matrix, corner(2, j), corner(3, j), leg);
        set(&mut matrix, corner(1, j), corner(3, j), leg * base_ratio(spec.q[j]));
        let reach = 0.5f64.powi(j as i32);
        for o in 1..=3 {
            set(&mut matrix, 0, corner(o, j), reach);
        }
        for i in 0..j {
            let cross = match spec.flavor {
                TelescopeFlavor::Metric => 0.5f64.powi(i as i32) - 0.5f64.powi(j as i32),
                TelescopeFlavor::Ultrametric => 0.5f64.powi(i as i32),
            };
            for o in 1..=3 {
                for p in 1..=3 {
                    set(&mut matrix, corner(o, i), corner(p, j), cross);
                }
            }
        }
    }

    let kind = match spec.flavor {
        TelescopeFlavor::Metric => Kind::Metric,
        TelescopeFlavor::Ultrametric => Kind::Ultrametric,
    };
    Ok(FiniteMetricSpace::new(labels, matrix, kind)?)
}
