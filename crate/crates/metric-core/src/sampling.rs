//! Random space generators for randomized verification. Deterministic under
//! a seeded RNG and exact-valued, so identities can be asserted exactly.

use crate::scalar::Scalar;
use crate::space::{FiniteMetricSpace, Kind};
use rand::Rng;

/// Random ultrametric on `n` points from a random merge tree: clusters merge
/// at strictly increasing dyadic heights and the distance between two points
/// is the height at which their clusters met.
pub fn random_ultrametric<R: Rng>(rng: &mut R, n: usize) -> FiniteMetricSpace {
    assert!(n >= 1);
    let mut heights: Vec<i64> = Vec::new();
    let mut h = 0i64;
    for _ in 0..n.saturating_sub(1) {
        h += rng.gen_range(1..=3);
        heights.push(h);
    }
    let denom = heights.last().copied().unwrap_or(0);
    // cluster id per point, merged pairwise
    let mut cluster: Vec<usize> = (0..n).collect();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut dist = vec![Scalar::zero(); n * n];
    for height in heights {
        let a = alive.remove(rng.gen_range(0..alive.len()));
        let b = alive[rng.gen_range(0..alive.len())];
        // distance 2^(height - denom) <= 1, exact dyadic
        let d = Scalar::pow2(height - denom);
        for i in 0..n {
            for j in 0..n {
                if cluster[i] == a && cluster[j] == b {
                    dist[i * n + j] = d.clone();
                    dist[j * n + i] = d.clone();
                }
            }
        }
        for c in cluster.iter_mut() {
            if *c == a {
                *c = b;
            }
        }
    }
    let labels = (0..n).map(|i| format!("u{i}")).collect();
    FiniteMetricSpace::from_parts(labels, dist, Kind::Ultrametric)
}

/// Random metric on `n` points: small random integer points in the cube,
/// max-coordinate distance, nudged apart when two points collide.
pub fn random_metric<R: Rng>(rng: &mut R, n: usize) -> FiniteMetricSpace {
    assert!(n >= 1);
    let mut pts: Vec<[i64; 3]> = Vec::with_capacity(n);
    while pts.len() < n {
        let p = [rng.gen_range(0..64), rng.gen_range(0..64), rng.gen_range(0..64)];
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    let mut dist = vec![Scalar::zero(); n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (0..3).map(|k| (pts[i][k] - pts[j][k]).abs()).max().unwrap();
            let s = Scalar::from_ratio(d, 64);
            dist[i * n + j] = s.clone();
            dist[j * n + i] = s;
        }
    }
    let labels = (0..n).map(|i| format!("m{i}")).collect();
    FiniteMetricSpace::from_parts(labels, dist, Kind::Metric)
}

/// Random pseudo-metric: a random metric with some points duplicated at
/// distance zero.
pub fn random_pseudo_metric<R: Rng>(rng: &mut R, n: usize) -> FiniteMetricSpace {
    assert!(n >= 1);
    let base_n = (n + 1) / 2;
    let base = random_metric(rng, base_n);
    let reps: Vec<usize> = (0..n).map(|i| if i < base_n { i } else { rng.gen_range(0..base_n) }).collect();
    let mut dist = vec![Scalar::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            dist[i * n + j] = base.dist(reps[i], reps[j]).clone();
        }
    }
    let labels = (0..n).map(|i| format!("q{i}")).collect();
    FiniteMetricSpace::from_parts(labels, dist, Kind::PseudoMetric)
}
