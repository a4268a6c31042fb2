use crate::error::{MetricError, Result};
use crate::scalar::Scalar;
use crate::space::FiniteMetricSpace;

/// Default point budget for the exhaustive isometry search.
pub const ISOMETRY_LIMIT: usize = 16;

/// Searches for a distance-preserving bijection from `a` to `b`.
///
/// Returns the mapping `a index -> b index` when one exists. Candidates are
/// filtered by per-point distance profiles before backtracking. Exact values
/// compare exactly; float comparisons use the spaces' tolerance.
pub fn isometry(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Result<Option<Vec<usize>>> {
    isometry_with_budget(a, b, ISOMETRY_LIMIT)
}

pub fn isometry_with_budget(
    a: &FiniteMetricSpace,
    b: &FiniteMetricSpace,
    budget: usize,
) -> Result<Option<Vec<usize>>> {
    if a.len() != b.len() {
        return Ok(None);
    }
    let n = a.len();
    if n > budget {
        return Err(MetricError::SizeBudget(format!(
            "isometry search limited to {budget} points, got {n}"
        )));
    }
    let tol = a.tolerance().max(b.tolerance());
    let eq = |x: &Scalar, y: &Scalar| -> bool {
        match (x, y) {
            (Scalar::Exact(p), Scalar::Exact(q)) => p == q,
            _ => x.approx_eq(y, tol),
        }
    };

    // sorted distance profile of every point; an isometry must match profiles
    let profile = |s: &FiniteMetricSpace, i: usize| -> Vec<Scalar> {
        let mut row: Vec<Scalar> = (0..s.len()).map(|j| s.dist(i, j).clone()).collect();
        row.sort();
        row
    };
    let prof_a: Vec<Vec<Scalar>> = (0..n).map(|i| profile(a, i)).collect();
    let prof_b: Vec<Vec<Scalar>> = (0..n).map(|i| profile(b, i)).collect();
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| {
                    prof_a[i].iter().zip(&prof_b[j]).all(|(x, y)| eq(x, y))
                })
                .collect()
        })
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return Ok(None);
    }

    // assign the most constrained points first
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| candidates[i].len());

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn backtrack(
        pos: usize,
        order: &[usize],
        candidates: &[Vec<usize>],
        a: &FiniteMetricSpace,
        b: &FiniteMetricSpace,
        eq: &dyn Fn(&Scalar, &Scalar) -> bool,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let i = order[pos];
        for &j in &candidates[i] {
            if used[j] {
                continue;
            }
            let consistent = order[..pos]
                .iter()
                .all(|&k| eq(a.dist(i, k), b.dist(j, map[k])));
            if !consistent {
                continue;
            }
            map[i] = j;
            used[j] = true;
            if backtrack(pos + 1, order, candidates, a, b, eq, map, used) {
                return true;
            }
            map[i] = usize::MAX;
            used[j] = false;
        }
        false
    }

    if backtrack(0, &order, &candidates, a, b, &eq, &mut map, &mut used) {
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Kind;

    fn space(matrix: Vec<Vec<i64>>, kind: Kind) -> FiniteMetricSpace {
        let n = matrix.len();
        let labels = (0..n).map(|i| format!("p{i}")).collect();
        let m = matrix
            .into_iter()
            .map(|row| row.into_iter().map(Scalar::from_int).collect())
            .collect();
        FiniteMetricSpace::new(labels, m, kind).unwrap()
    }

    #[test]
    fn finds_nontrivial_isometry() {
        // same 1-1-2 line written in two point orders
        let a = space(vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]], Kind::Metric);
        let b = space(vec![vec![0, 1, 1], vec![1, 0, 2], vec![1, 2, 0]], Kind::Metric);
        let map = isometry(&a, &b).unwrap().expect("isometric");
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a.dist(i, j), b.dist(map[i], map[j]));
            }
        }
    }

    #[test]
    fn distinguishes_non_isometric_spaces() {
        let a = space(vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]], Kind::Metric);
        let b = space(vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 0]], Kind::Metric);
        assert!(isometry(&a, &b).unwrap().is_none());
    }

    #[test]
    fn budget_is_enforced() {
        let n = 17;
        let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let matrix: Vec<Vec<Scalar>> = (0..n)
            .map(|i: i64| (0..n).map(|j: i64| Scalar::from_int((i - j).abs())).collect())
            .collect();
        let s = FiniteMetricSpace::new(labels, matrix, Kind::Metric).unwrap();
        assert!(matches!(isometry(&s, &s), Err(MetricError::SizeBudget(_))));
    }
}
