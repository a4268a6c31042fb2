use crate::error::{MetricError, Result};
use crate::scalar::Scalar;
use crate::space::FiniteMetricSpace;

/// Largest point count for which the exact set-cover search runs; beyond it
/// the greedy bound with a certified interval is returned.
pub const EXACT_COVER_LIMIT: usize = 24;

/// Minimal number of closed balls of radius `r` needed to cover the space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoveringAnswer {
    /// Minimal count with the chosen centers as a witness.
    Exact { count: u64, centers: Vec<usize> },
    /// Greedy witness of size `upper`; a cover smaller than `lower` is
    /// impossible (greedy is within a harmonic factor of optimal).
    Interval { lower: u64, upper: u64, centers: Vec<usize> },
}

impl CoveringAnswer {
    pub fn lower(&self) -> u64 {
        match self {
            CoveringAnswer::Exact { count, .. } => *count,
            CoveringAnswer::Interval { lower, .. } => *lower,
        }
    }

    pub fn upper(&self) -> u64 {
        match self {
            CoveringAnswer::Exact { count, .. } => *count,
            CoveringAnswer::Interval { upper, .. } => *upper,
        }
    }

    pub fn exact(&self) -> Option<u64> {
        match self {
            CoveringAnswer::Exact { count, .. } => Some(*count),
            CoveringAnswer::Interval { .. } => None,
        }
    }
}

/// Computes the minimal number of closed `r`-balls covering the space.
///
/// Ultrametric kinds partition into `r`-balls, so any size resolves exactly.
/// Otherwise an exhaustive branch-and-bound set cover runs for up to
/// [`EXACT_COVER_LIMIT`] points and a greedy cover with a certified lower
/// bound is returned beyond that.
pub fn covering_number(space: &FiniteMetricSpace, r: &Scalar) -> Result<CoveringAnswer> {
    if r.is_negative() {
        return Err(MetricError::InvalidParameter("covering radius must be >= 0".into()));
    }
    let n = space.len();
    if space.kind().is_ultra() {
        // closed balls of radius r coincide with the classes of d(x,y) <= r
        let mut centers: Vec<usize> = Vec::new();
        'points: for p in 0..n {
            for &c in &centers {
                if space.dist(c, p) <= r {
                    continue 'points;
                }
            }
            centers.push(p);
        }
        return Ok(CoveringAnswer::Exact { count: centers.len() as u64, centers });
    }

    // ball masks over a bit universe
    if n > 128 {
        return Err(MetricError::SizeBudget(format!(
            "covering oracle handles up to 128 points, got {n}"
        )));
    }
    let balls: Vec<u128> = (0..n)
        .map(|c| {
            let mut m: u128 = 0;
            for p in 0..n {
                if space.dist(c, p) <= r {
                    m |= 1u128 << p;
                }
            }
            m
        })
        .collect();
    let full: u128 = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };

    let greedy = greedy_cover(&balls, full);
    if n <= EXACT_COVER_LIMIT {
        let mut best = greedy.clone();
        let mut chosen = Vec::new();
        exact_cover(&balls, full, 0, &mut chosen, &mut best);
        return Ok(CoveringAnswer::Exact { count: best.len() as u64, centers: best });
    }

    let max_ball = balls.iter().map(|b| b.count_ones() as usize).max().unwrap_or(1);
    let harmonic: f64 = (1..=max_ball).map(|k| 1.0 / k as f64).sum();
    let by_harmonic = (greedy.len() as f64 / harmonic).ceil() as u64;
    let by_size = ((n + max_ball - 1) / max_ball) as u64;
    Ok(CoveringAnswer::Interval {
        lower: by_harmonic.max(by_size).max(1),
        upper: greedy.len() as u64,
        centers: greedy,
    })
}

fn greedy_cover(balls: &[u128], full: u128) -> Vec<usize> {
    let mut uncovered = full;
    let mut centers = Vec::new();
    while uncovered != 0 {
        let (best, _) = balls
            .iter()
            .enumerate()
            .map(|(i, b)| (i, (b & uncovered).count_ones()))
            .max_by_key(|&(i, c)| (c, std::cmp::Reverse(i)))
            .unwrap();
        centers.push(best);
        uncovered &= !balls[best];
    }
    centers
}

/// Branch and bound: pick the uncovered point in the fewest balls, try every
/// ball containing it. `best` always holds a feasible cover.
fn exact_cover(balls: &[u128], uncovered: u128, used: usize, chosen: &mut Vec<usize>, best: &mut Vec<usize>) {
    if uncovered == 0 {
        if used < best.len() {
            *best = chosen.clone();
        }
        return;
    }
    // lower bound: remaining / biggest remaining ball
    let max_gain = balls.iter().map(|b| (b & uncovered).count_ones()).max().unwrap_or(1).max(1);
    let need = (uncovered.count_ones() + max_gain - 1) / max_gain;
    if used + need as usize >= best.len() {
        return;
    }
    // most constrained uncovered point
    let mut pick = None;
    let mut pick_count = usize::MAX;
    let mut p = uncovered;
    while p != 0 {
        let bit = p.trailing_zeros() as usize;
        p &= p - 1;
        let c = balls.iter().filter(|b| *b & (1u128 << bit) != 0).count();
        if c < pick_count {
            pick_count = c;
            pick = Some(bit);
        }
    }
    let target = pick.unwrap();
    for (i, b) in balls.iter().enumerate() {
        if b & (1u128 << target) != 0 {
            chosen.push(i);
            exact_cover(balls, uncovered & !b, used + 1, chosen, best);
            chosen.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Kind;

    fn line(n: usize) -> FiniteMetricSpace {
        let labels = (0..n).map(|i| format!("p{i}")).collect();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| Scalar::from_int((i as i64 - j as i64).abs())).collect())
            .collect();
        FiniteMetricSpace::new(labels, matrix, Kind::Metric).unwrap()
    }

    #[test]
    fn line_cover_matches_hand_count() {
        // 0..9 with radius 1: balls cover 3 consecutive points, need ceil(10/3) = 4
        let s = line(10);
        let ans = covering_number(&s, &Scalar::from_int(1)).unwrap();
        assert_eq!(ans.exact(), Some(4));
    }

    #[test]
    fn radius_at_diameter_needs_one_ball() {
        let s = line(7);
        let ans = covering_number(&s, &Scalar::from_int(6)).unwrap();
        assert_eq!(ans.exact(), Some(1));
    }

    #[test]
    fn zero_radius_needs_every_point() {
        let s = line(5);
        let ans = covering_number(&s, &Scalar::zero()).unwrap();
        assert_eq!(ans.exact(), Some(5));
    }

    #[test]
    fn ultrametric_partition_matches_set_cover() {
        // 4-leaf dendrogram: {a,b} at 1/4, {c,d} at 1/8, across at 1/2
        let q = Scalar::from_ratio(1, 4);
        let e = Scalar::from_ratio(1, 8);
        let h = Scalar::from_ratio(1, 2);
        let z = Scalar::zero;
        let m = vec![
            vec![z(), q.clone(), h.clone(), h.clone()],
            vec![q.clone(), z(), h.clone(), h.clone()],
            vec![h.clone(), h.clone(), z(), e.clone()],
            vec![h.clone(), h.clone(), e.clone(), z()],
        ];
        let labels = vec!["a".into(), "b".into(), "c".into(), "d".into()];
        let u = FiniteMetricSpace::new(labels.clone(), m.clone(), Kind::Ultrametric).unwrap();
        let s = FiniteMetricSpace::new(labels, m, Kind::Metric).unwrap();
        for r in [Scalar::from_ratio(1, 16), e, q, h] {
            let a = covering_number(&u, &r).unwrap().exact().unwrap();
            let b = covering_number(&s, &r).unwrap().exact().unwrap();
            assert_eq!(a, b, "partition vs set cover at r = {r}");
        }
    }

    #[test]
    fn large_space_returns_certified_interval() {
        let s = line(30);
        let ans = covering_number(&s, &Scalar::from_int(1)).unwrap();
        match ans {
            CoveringAnswer::Interval { lower, upper, .. } => {
                assert!(lower <= 10 && 10 <= upper, "true answer 10 inside [{lower}, {upper}]");
            }
            CoveringAnswer::Exact { .. } => panic!("expected interval for n = 30"),
        }
    }
}
