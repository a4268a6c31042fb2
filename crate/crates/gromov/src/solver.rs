//! Exact Gromov-Hausdorff values on small spaces, certified intervals on
//! everything else. The distance is half the minimum distortion over
//! correspondences, and restricting the search to unions of two function
//! graphs (one per direction) loses nothing: dropping surplus partners from
//! a correspondence never raises its distortion.

use crate::correspondence::Correspondence;
use crate::error::{GhError, Result};
use crate::result::{GhResult, GhWitness};
use metric_core::{isometry, FiniteMetricSpace, MetricError, Scalar};

/// Combined point budget for the exhaustive search; larger inputs get
/// certified intervals instead.
pub const GH_EXACT_LIMIT: usize = 14;

/// max over pairs of |d(x, x') - e(f(x), f(x'))| for a total map `f`,
/// given as the image index of every point of `a`.
pub fn distortion(f: &[usize], a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Result<Scalar> {
    if f.len() != a.len() {
        return Err(GhError::NotTotal(format!(
            "map lists {} images for {} points",
            f.len(),
            a.len()
        )));
    }
    if let Some((i, &fi)) = f.iter().enumerate().find(|(_, &fi)| fi >= b.len()) {
        return Err(GhError::NotTotal(format!(
            "image of point {i} is index {fi}, beyond the {} target points",
            b.len()
        )));
    }
    let mut worst = Scalar::zero();
    for i in 0..f.len() {
        for j in (i + 1)..f.len() {
            worst = worst.max(a.dist(i, j).sub_abs(b.dist(f[i], f[j])));
        }
    }
    Ok(worst)
}

/// Upper bound 2 * distortion(f) for surjective f, as a certified interval
/// down to the spectrum-gap floor. A distortion-free surjection collapses the
/// interval to an exact zero.
pub fn gh_upper_via_surjection(
    f: &[usize],
    a: &FiniteMetricSpace,
    b: &FiniteMetricSpace,
) -> Result<GhResult> {
    let dis = distortion(f, a, b)?;
    let mut hit = vec![false; b.len()];
    for &fi in f {
        hit[fi] = true;
    }
    if let Some(y) = hit.iter().position(|&h| !h) {
        return Err(GhError::NotSurjective(format!(
            "target point {:?} has no preimage",
            b.label(y)
        )));
    }
    GhResult::interval(
        half_spectrum_gap(a, b),
        dis.double(),
        Some(GhWitness::Surjection(f.to_vec())),
        "surjection-distortion",
    )
}

/// Cheap certified bounds without exhaustive search: exact zero when the
/// isometry search succeeds, otherwise the interval between the spectrum-gap
/// floor and half the distortion of the eccentricity matching.
pub fn gh_bounds(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Result<GhResult> {
    if let Some(map) = try_isometry(a, b)? {
        return Ok(GhResult::exact(Scalar::zero(), Some(GhWitness::Isometry(map)), "isometry"));
    }
    let greedy = eccentricity_matching(a, b)?;
    let upper = greedy.distortion(a, b)?.halve();
    GhResult::interval(
        half_spectrum_gap(a, b),
        upper,
        Some(GhWitness::Correspondence(greedy)),
        "eccentricity-matching",
    )
}

/// Half the minimum correspondence distortion, with the minimizer as witness.
/// Inputs beyond [`GH_EXACT_LIMIT`] combined points fall back to
/// [`gh_bounds`] and disclose that in the method tag.
pub fn gh_exact(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Result<GhResult> {
    if a.len() + b.len() > GH_EXACT_LIMIT {
        let mut r = gh_bounds(a, b)?;
        if !r.is_exact() {
            r.method = "search-budget-interval";
        }
        return Ok(r);
    }
    if let Some(map) = try_isometry(a, b)? {
        return Ok(GhResult::exact(Scalar::zero(), Some(GhWitness::Isometry(map)), "isometry"));
    }
    let (dis, corr) = min_distortion(a, b)?;
    let value = dis.halve();
    let floor = half_spectrum_gap(a, b);
    if value < floor {
        return Err(GhError::CrossCheck(format!(
            "search value {value} beat the spectrum-gap floor {floor}"
        )));
    }
    // separated spaces at distance zero must already have matched above
    if value.is_zero() && a.kind().is_separated() && b.kind().is_separated() {
        return Err(GhError::CrossCheck(
            "search reached zero on spaces the isometry search distinguished".into(),
        ));
    }
    Ok(GhResult::exact(value, Some(GhWitness::Correspondence(corr)), "correspondence-search"))
}

/// Half the Hausdorff distance between the two sets of occurring distance
/// values. A correspondence of distortion t matches every distance of one
/// space to a distance of the other within t, so this floors the value; it
/// dominates the plain diameter-gap floor because the diameter is itself an
/// occurring value.
fn half_spectrum_gap(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Scalar {
    let values = |s: &FiniteMetricSpace| {
        let mut v = Vec::with_capacity(s.len() * (s.len() + 1) / 2);
        for i in 0..s.len() {
            for j in i..s.len() {
                v.push(s.dist(i, j).clone());
            }
        }
        v.sort();
        v.dedup();
        v
    };
    let va = values(a);
    let vb = values(b);
    let one_sided = |from: &[Scalar], to: &[Scalar]| {
        let mut worst = Scalar::zero();
        let mut j = 0usize;
        for v in from {
            while j + 1 < to.len() && to[j + 1] <= *v {
                j += 1;
            }
            let mut best = v.sub_abs(&to[j]);
            if j + 1 < to.len() {
                let next = v.sub_abs(&to[j + 1]);
                if next < best {
                    best = next;
                }
            }
            if best > worst {
                worst = best;
            }
        }
        worst
    };
    let ab = one_sided(&va, &vb);
    let ba = one_sided(&vb, &va);
    if ab > ba {
        ab.halve()
    } else {
        ba.halve()
    }
}

/// Size overflow in the isometry search means "unknown", not failure.
pub(crate) fn try_isometry(
    a: &FiniteMetricSpace,
    b: &FiniteMetricSpace,
) -> Result<Option<Vec<usize>>> {
    match isometry(a, b) {
        Ok(m) => Ok(m),
        Err(MetricError::SizeBudget(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Points by descending eccentricity, ties by label.
fn eccentricity_order(s: &FiniteMetricSpace) -> Vec<usize> {
    let ecc: Vec<Scalar> = (0..s.len()).map(|i| s.eccentricity(i)).collect();
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&i, &j| ecc[j].cmp(&ecc[i]).then_with(|| s.label(i).cmp(s.label(j))));
    order
}

/// Rank-matches the two eccentricity orders, repeating the last point of the
/// shorter side; always a correspondence.
fn eccentricity_matching(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Result<Correspondence> {
    let xs = eccentricity_order(a);
    let ys = eccentricity_order(b);
    let n = xs.len().max(ys.len());
    let mut pairs = Vec::with_capacity(n);
    for r in 0..n {
        pairs.push((xs[r.min(xs.len() - 1)], ys[r.min(ys.len() - 1)]));
    }
    Correspondence::from_pairs(a.len(), b.len(), &pairs)
}

fn min_distortion(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Result<(Scalar, Correspondence)> {
    let mut search = Search::new(a, b)?;
    if search.best_dis > search.floor {
        search.assign_left(0, &Scalar::zero(), 0u64);
    }
    let corr = Correspondence::from_pairs(a.len(), b.len(), &search.best_pairs)?;
    Ok((search.best_dis, corr))
}

/// Branch-and-bound state. Phase one picks a partner for every left point in
/// descending-eccentricity order; phase two covers the right points still
/// unmatched. A branch dies as soon as its running distortion reaches the
/// incumbent, and the whole search stops at the spectrum-gap floor, which no
/// correspondence beats.
struct Search {
    na: usize,
    nb: usize,
    /// |d(x, x') - e(y, y')| indexed ((x * na + x') * nb + y) * nb + y'.
    gap: Vec<Scalar>,
    order_x: Vec<usize>,
    order_y: Vec<usize>,
    /// Per left point: right candidates, nearest eccentricity first.
    cand: Vec<Vec<usize>>,
    /// Per right point: left candidates, nearest eccentricity first.
    cand_rev: Vec<Vec<usize>>,
    floor: Scalar,
    best_dis: Scalar,
    best_pairs: Vec<(usize, usize)>,
    pairs: Vec<(usize, usize)>,
    done: bool,
}

impl Search {
    fn new(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Result<Search> {
        let (na, nb) = (a.len(), b.len());
        let mut gap = Vec::with_capacity(na * na * nb * nb);
        for x in 0..na {
            for x2 in 0..na {
                for y in 0..nb {
                    for y2 in 0..nb {
                        gap.push(a.dist(x, x2).sub_abs(b.dist(y, y2)));
                    }
                }
            }
        }
        let ecc_a: Vec<Scalar> = (0..na).map(|i| a.eccentricity(i)).collect();
        let ecc_b: Vec<Scalar> = (0..nb).map(|j| b.eccentricity(j)).collect();
        let cand = (0..na)
            .map(|x| {
                let mut ys: Vec<usize> = (0..nb).collect();
                ys.sort_by(|&y1, &y2| {
                    let g1 = ecc_a[x].sub_abs(&ecc_b[y1]);
                    let g2 = ecc_a[x].sub_abs(&ecc_b[y2]);
                    g1.cmp(&g2).then_with(|| b.label(y1).cmp(b.label(y2)))
                });
                ys
            })
            .collect();
        let cand_rev = (0..nb)
            .map(|y| {
                let mut xs: Vec<usize> = (0..na).collect();
                xs.sort_by(|&x1, &x2| {
                    let g1 = ecc_b[y].sub_abs(&ecc_a[x1]);
                    let g2 = ecc_b[y].sub_abs(&ecc_a[x2]);
                    g1.cmp(&g2).then_with(|| a.label(x1).cmp(a.label(x2)))
                });
                xs
            })
            .collect();
        let greedy = eccentricity_matching(a, b)?;
        let best_dis = greedy.distortion(a, b)?;
        let best_pairs = greedy.pairs();
        Ok(Search {
            na,
            nb,
            gap,
            order_x: eccentricity_order(a),
            order_y: eccentricity_order(b),
            cand,
            cand_rev,
            floor: half_spectrum_gap(a, b).double(),
            best_dis,
            best_pairs,
            pairs: Vec::with_capacity(na + nb),
            done: false,
        })
    }

    fn gap_at(&self, x: usize, x2: usize, y: usize, y2: usize) -> &Scalar {
        &self.gap[((x * self.na + x2) * self.nb + y) * self.nb + y2]
    }

    /// Running distortion after adding the pair (x, y).
    fn extend(&self, cur: &Scalar, x: usize, y: usize) -> Scalar {
        let mut nd = cur.clone();
        for &(px, py) in &self.pairs {
            let g = self.gap_at(x, px, y, py);
            if *g > nd {
                nd = g.clone();
            }
        }
        nd
    }

    fn assign_left(&mut self, pos: usize, cur: &Scalar, covered: u64) {
        if self.done {
            return;
        }
        if pos == self.na {
            let rest: Vec<usize> =
                self.order_y.iter().copied().filter(|&y| covered >> y & 1 == 0).collect();
            self.cover_right(&rest, 0, cur);
            return;
        }
        let x = self.order_x[pos];
        let cands = self.cand[x].clone();
        for y in cands {
            let nd = self.extend(cur, x, y);
            if nd < self.best_dis {
                self.pairs.push((x, y));
                self.assign_left(pos + 1, &nd, covered | 1 << y);
                self.pairs.pop();
                if self.done {
                    return;
                }
            }
        }
    }

    fn cover_right(&mut self, rest: &[usize], idx: usize, cur: &Scalar) {
        if self.done {
            return;
        }
        if idx == rest.len() {
            // every descent required strict improvement, so this is a new best
            self.best_dis = cur.clone();
            self.best_pairs = self.pairs.clone();
            if self.best_dis == self.floor {
                self.done = true;
            }
            return;
        }
        let y = rest[idx];
        let cands = self.cand_rev[y].clone();
        for x in cands {
            let nd = self.extend(cur, x, y);
            if nd < self.best_dis {
                self.pairs.push((x, y));
                self.cover_right(rest, idx + 1, &nd);
                self.pairs.pop();
                if self.done {
                    return;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use metric_core::Kind;

    fn space(matrix: Vec<Vec<i64>>, kind: Kind) -> FiniteMetricSpace {
        let n = matrix.len();
        let labels = (0..n).map(|i| format!("p{i}")).collect();
        let m = matrix
            .into_iter()
            .map(|row| row.into_iter().map(Scalar::from_int).collect())
            .collect();
        FiniteMetricSpace::new(labels, m, kind).unwrap()
    }

    fn scaled(matrix: Vec<Vec<i64>>, den: i64, kind: Kind) -> FiniteMetricSpace {
        let n = matrix.len();
        let labels = (0..n).map(|i| format!("p{i}")).collect();
        let m = matrix
            .into_iter()
            .map(|row| row.into_iter().map(|v| Scalar::from_ratio(v, den)).collect())
            .collect();
        FiniteMetricSpace::new(labels, m, kind).unwrap()
    }

    fn point() -> FiniteMetricSpace {
        space(vec![vec![0]], Kind::Ultrametric)
    }

    #[test]
    fn identity_map_has_zero_distortion() {
        let s = space(vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]], Kind::Metric);
        assert!(distortion(&[0, 1, 2], &s, &s).unwrap().is_zero());
    }

    #[test]
    fn scaled_identity_distorts_by_the_spread() {
        // e = 2d, so |d - e| peaks at the diameter of d
        let d = scaled(vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]], 4, Kind::Metric);
        let e = d.dilate(&Scalar::from_int(2)).unwrap();
        assert_eq!(distortion(&[0, 1, 2], &d, &e).unwrap(), d.diameter());
    }

    #[test]
    fn constant_map_on_a_unit_diameter_space_distorts_by_one() {
        let s = space(vec![vec![0, 1], vec![1, 0]], Kind::Ultrametric);
        assert_eq!(distortion(&[0, 0], &s, &point()).unwrap(), Scalar::one());
    }

    #[test]
    fn partial_maps_are_rejected() {
        let s = space(vec![vec![0, 1], vec![1, 0]], Kind::Ultrametric);
        assert!(matches!(distortion(&[0], &s, &s), Err(GhError::NotTotal(_))));
        assert!(matches!(distortion(&[0, 5], &s, &s), Err(GhError::NotTotal(_))));
    }

    #[test]
    fn surjection_bound_doubles_the_distortion() {
        let d = scaled(vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]], 4, Kind::Metric);
        let e = d.dilate(&Scalar::from_int(2)).unwrap();
        let r = gh_upper_via_surjection(&[0, 1, 2], &d, &e).unwrap();
        assert_eq!(r.upper(), &d.diameter().double());
        assert_eq!(r.method, "surjection-distortion");
        assert!(matches!(r.witness, Some(GhWitness::Surjection(_))));
    }

    #[test]
    fn surjection_bound_rejects_a_miss() {
        let s = space(vec![vec![0, 1], vec![1, 0]], Kind::Ultrametric);
        let err = gh_upper_via_surjection(&[0, 0], &s, &s);
        assert!(matches!(err, Err(GhError::NotSurjective(_))));
    }

    #[test]
    fn isometric_surjection_gives_an_exact_zero_bound() {
        let s = space(vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]], Kind::Metric);
        let r = gh_upper_via_surjection(&[2, 1, 0], &s, &s).unwrap();
        assert!(r.is_exact());
        assert!(r.exact_value().unwrap().is_zero());
    }

    #[test]
    fn two_points_against_one_cost_half_the_diameter() {
        let a = space(vec![vec![0, 1], vec![1, 0]], Kind::Ultrametric);
        let r = gh_exact(&a, &point()).unwrap();
        assert_eq!(r.exact_value().unwrap(), &Scalar::from_ratio(1, 2));
        match r.witness {
            Some(GhWitness::Correspondence(c)) => {
                assert_eq!(c.distortion(&a, &point()).unwrap(), Scalar::one())
            }
            other => panic!("expected a correspondence witness, got {other:?}"),
        }
    }

    #[test]
    fn any_space_sits_at_half_its_diameter_from_a_point() {
        let s = space(vec![vec![0, 3, 5], vec![3, 0, 4], vec![5, 4, 0]], Kind::Metric);
        let r = gh_exact(&s, &point()).unwrap();
        assert_eq!(r.exact_value().unwrap(), &Scalar::from_ratio(5, 2));
    }

    #[test]
    fn reordered_copies_are_recognized_as_isometric() {
        let a = space(vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]], Kind::Metric);
        let b = space(vec![vec![0, 1, 1], vec![1, 0, 2], vec![1, 2, 0]], Kind::Metric);
        let r = gh_exact(&a, &b).unwrap();
        assert!(r.exact_value().unwrap().is_zero());
        assert!(matches!(r.witness, Some(GhWitness::Isometry(_))));
        assert_eq!(r.method, "isometry");
    }

    #[test]
    fn dilation_cost_is_bracketed_by_the_endpoints() {
        // e = lambda * d: at lambda = 1 the distance is 0; at lambda = 0 the
        // quotient is a point, at half the diameter of d
        let d = scaled(vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]], 2, Kind::Metric);
        let same = gh_exact(&d, &d.dilate(&Scalar::one()).unwrap()).unwrap();
        assert!(same.exact_value().unwrap().is_zero());

        let collapsed = d.dilate(&Scalar::zero()).unwrap();
        let (q, _) = metric_core::quotient(&collapsed).unwrap();
        let r = gh_exact(&d, &q).unwrap();
        assert_eq!(r.exact_value().unwrap(), &d.diameter().halve());

        // interior dilations stay between the endpoint values
        let mid = gh_exact(&d, &d.dilate(&Scalar::from_ratio(1, 2)).unwrap()).unwrap();
        let v = mid.exact_value().unwrap();
        assert!(*v > Scalar::zero() && *v <= d.diameter().halve());
    }

    #[test]
    fn over_budget_inputs_get_a_certified_interval() {
        // 8 + 8 points exceed the search budget; the spectrum floor stays
        // strictly below the matching upper bound so the interval is strict
        let n = 8;
        let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let matrix: Vec<Vec<Scalar>> = (0..n as i64)
            .map(|i| (0..n as i64).map(|j| Scalar::from_int((i - j).abs())).collect())
            .collect();
        let line = FiniteMetricSpace::new(labels, matrix, Kind::Metric).unwrap();

        let star_labels: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
        let mut m = vec![vec![Scalar::zero(); n]; n];
        for i in 1..n {
            m[0][i] = Scalar::from_ratio(7, 2);
            m[i][0] = Scalar::from_ratio(7, 2);
            for j in (i + 1)..n {
                m[i][j] = Scalar::from_int(7);
                m[j][i] = Scalar::from_int(7);
            }
        }
        let star = FiniteMetricSpace::new(star_labels, m, Kind::Metric).unwrap();

        let r = gh_exact(&line, &star).unwrap();
        assert!(!r.is_exact());
        assert_eq!(r.method, "search-budget-interval");
        // line value 2 sits 3/2 away from the star values {0, 7/2, 7}
        assert_eq!(*r.lower(), Scalar::from_ratio(3, 4));
        assert!(*r.upper() > *r.lower());
    }

    #[test]
    fn cheap_bounds_recognize_isometry_and_bracket_the_rest() {
        let a = space(vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]], Kind::Metric);
        let iso = gh_bounds(&a, &a).unwrap();
        assert!(iso.exact_value().unwrap().is_zero());

        let b = space(vec![vec![0, 1], vec![1, 0]], Kind::Ultrametric);
        let r = gh_bounds(&a, &b).unwrap();
        // floor (2 - 1)/2, and the matching never does worse than the diameter
        assert_eq!(r.lower(), &Scalar::from_ratio(1, 2));
        assert!(*r.upper() <= Scalar::one());
    }

    #[test]
    fn solver_beats_the_greedy_matching_when_it_must() {
        // two 4-point lines with different spacings; the greedy rank matching
        // is already optimal here, so the solver must agree with brute force
        let a = space(vec![vec![0, 1, 2, 3], vec![1, 0, 1, 2], vec![2, 1, 0, 1], vec![3, 2, 1, 0]], Kind::Metric);
        let b = a.dilate(&Scalar::from_int(3)).unwrap();
        let r = gh_exact(&a, &b).unwrap();
        // identity correspondence distorts by 2 * diam(a) = 6, so value <= 3;
        // the diameter-gap floor gives exactly 3
        assert_eq!(r.exact_value().unwrap(), &Scalar::from_int(3));
    }
}
