//! Relations between two point sets that cover both sides. Half the
//! distortion of any such relation bounds the Gromov-Hausdorff distance from
//! above, and the minimum over all of them attains it, which is what the
//! solver exploits.

use crate::error::{GhError, Result};
use metric_core::{FiniteMetricSpace, Scalar};

/// Rows are u64 bitsets, so the right space holds at most this many points.
pub const MAX_RIGHT_POINTS: usize = 64;

/// A relation R between {0..nx} and {0..ny}. It is a correspondence once
/// every left point and every right point has at least one partner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correspondence {
    nx: usize,
    ny: usize,
    rows: Vec<u64>,
}

impl Correspondence {
    /// Empty relation; callers add pairs with [`Correspondence::relate`].
    pub fn new(nx: usize, ny: usize) -> Result<Correspondence> {
        if nx == 0 || ny == 0 {
            return Err(GhError::InvalidParameter("relation needs non-empty sides".into()));
        }
        if ny > MAX_RIGHT_POINTS {
            return Err(GhError::InvalidParameter(format!(
                "right side has {ny} points, limit {MAX_RIGHT_POINTS}"
            )));
        }
        Ok(Correspondence { nx, ny, rows: vec![0; nx] })
    }

    pub fn relate(&mut self, x: usize, y: usize) -> Result<()> {
        if x >= self.nx || y >= self.ny {
            return Err(GhError::InvalidParameter(format!(
                "pair ({x}, {y}) out of range for {}x{}",
                self.nx, self.ny
            )));
        }
        self.rows[x] |= 1u64 << y;
        Ok(())
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        x < self.nx && y < self.ny && self.rows[x] >> y & 1 == 1
    }

    pub fn left_len(&self) -> usize {
        self.nx
    }

    pub fn right_len(&self) -> usize {
        self.ny
    }

    /// True when every left point and every right point has a partner.
    pub fn covers_both_sides(&self) -> bool {
        let mut cols = 0u64;
        for &row in &self.rows {
            if row == 0 {
                return false;
            }
            cols |= row;
        }
        cols == full_mask(self.ny)
    }

    /// Builds from explicit pairs and requires two-sided coverage.
    pub fn from_pairs(nx: usize, ny: usize, pairs: &[(usize, usize)]) -> Result<Correspondence> {
        let mut c = Correspondence::new(nx, ny)?;
        for &(x, y) in pairs {
            c.relate(x, y)?;
        }
        c.require_coverage()?;
        Ok(c)
    }

    /// Union of the graph of `f: left -> right` and the reversed graph of
    /// `g: right -> left`; such a union always covers both sides.
    pub fn from_maps(f: &[usize], g: &[usize]) -> Result<Correspondence> {
        let mut c = Correspondence::new(f.len(), g.len())?;
        for (x, &y) in f.iter().enumerate() {
            c.relate(x, y)?;
        }
        for (y, &x) in g.iter().enumerate() {
            c.relate(x, y)?;
        }
        Ok(c)
    }

    /// The diagonal on n points.
    pub fn identity(n: usize) -> Result<Correspondence> {
        let ids: Vec<usize> = (0..n).collect();
        Correspondence::from_maps(&ids, &ids)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (x, &row) in self.rows.iter().enumerate() {
            let mut bits = row;
            while bits != 0 {
                let y = bits.trailing_zeros() as usize;
                out.push((x, y));
                bits &= bits - 1;
            }
        }
        out
    }

    fn require_coverage(&self) -> Result<()> {
        if let Some(x) = self.rows.iter().position(|&r| r == 0) {
            return Err(GhError::NotCorrespondence(format!("left point {x} has no partner")));
        }
        let mut cols = 0u64;
        for &row in &self.rows {
            cols |= row;
        }
        let missing = full_mask(self.ny) & !cols;
        if missing != 0 {
            let y = missing.trailing_zeros();
            return Err(GhError::NotCorrespondence(format!("right point {y} has no partner")));
        }
        Ok(())
    }

    /// max over related pairs (x,y), (x',y') of |d(x,x') - e(y,y')|. Exact on
    /// exact matrices.
    pub fn distortion(&self, a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Result<Scalar> {
        if a.len() != self.nx || b.len() != self.ny {
            return Err(GhError::InvalidParameter(format!(
                "relation is {}x{} but spaces have {} and {} points",
                self.nx,
                self.ny,
                a.len(),
                b.len()
            )));
        }
        self.require_coverage()?;
        let pairs = self.pairs();
        let mut worst = Scalar::zero();
        for (i, &(x, y)) in pairs.iter().enumerate() {
            for &(x2, y2) in &pairs[i + 1..] {
                let gap = a.dist(x, x2).sub_abs(b.dist(y, y2));
                worst = worst.max(gap);
            }
        }
        Ok(worst)
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}
