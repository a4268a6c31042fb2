//! Points of the standard simplex with exact barycentric coordinates, plus
//! the bump functions that drive the simplex-indexed metric family.

use crate::error::{Result, TelescopeError};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// A point of the n-simplex: n+1 exact coordinates, non-negative, summing
/// to one. Coordinate i weights component space i; the i-th vertex is the
/// point with s_i = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexPoint {
    coords: Vec<BigRational>,
}

impl SimplexPoint {
    pub fn new(coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(TelescopeError::InvalidParameter(
                "a simplex point needs at least two coordinates".into(),
            ));
        }
        let mut sum = BigRational::zero();
        for (i, c) in coords.iter().enumerate() {
            if c < &BigRational::zero() {
                return Err(TelescopeError::InvalidParameter(format!(
                    "coordinate {i} is negative"
                )));
            }
            sum += c;
        }
        if sum != BigRational::one() {
            return Err(TelescopeError::InvalidParameter(format!(
                "coordinates sum to {sum}, not 1"
            )));
        }
        Ok(SimplexPoint { coords })
    }

    /// The i-th vertex (0-based) of the n-simplex.
    pub fn vertex(n: usize, i: usize) -> Result<Self> {
        if i > n {
            return Err(TelescopeError::InvalidParameter(format!(
                "vertex {i} of the {n}-simplex does not exist"
            )));
        }
        let mut coords = vec![BigRational::zero(); n + 1];
        coords[i] = BigRational::one();
        Ok(SimplexPoint { coords })
    }

    /// n, for a point with n+1 coordinates.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    fn max_coord(&self) -> &BigRational {
        self.coords.iter().max().expect("at least two coordinates")
    }

    /// 1 minus the largest coordinate: zero exactly at the vertices,
    /// positive everywhere else on the simplex.
    pub fn xi(&self) -> BigRational {
        BigRational::one() - self.max_coord()
    }

    /// max(s_i, xi): one exactly at vertex i, zero exactly at the other
    /// vertices, strictly between elsewhere.
    pub fn zeta(&self, i: usize) -> BigRational {
        let xi = self.xi();
        if self.coords[i] > xi {
            self.coords[i].clone()
        } else {
            xi
        }
    }

    /// Some(i) when the point is the i-th vertex.
    pub fn vertex_index(&self) -> Option<usize> {
        self.coords.iter().position(|c| c.is_one())
    }

    /// Convex combination: (1-t) * self + t * other, with t in [0, 1].
    pub fn lerp(&self, other: &SimplexPoint, t: &BigRational) -> Result<SimplexPoint> {
        if self.coords.len() != other.coords.len() {
            return Err(TelescopeError::InvalidParameter(
                "interpolation endpoints live in different simplexes".into(),
            ));
        }
        if t < &BigRational::zero() || t > &BigRational::one() {
            return Err(TelescopeError::InvalidParameter(format!(
                "interpolation parameter {t} is outside [0, 1]"
            )));
        }
        let s = BigRational::one() - t;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| &s * a + t * b)
            .collect();
        // non-negativity and the unit sum are preserved exactly
        Ok(SimplexPoint { coords })
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords
            .iter()
            .map(|c| c.to_f64().expect("simplex coordinates fit in binary64"))
            .collect()
    }
}
