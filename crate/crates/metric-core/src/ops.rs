use crate::error::{MetricError, Result};
use crate::scalar::Scalar;
use crate::space::{FiniteMetricSpace, Kind};
use num_rational::BigRational;

/// Exponent for combining distances across glued components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GlueExponent {
    One,
    Infinity,
    /// Finite p > 1; evaluates in floats.
    Finite(f64),
}

impl GlueExponent {
    pub fn parse(s: &str) -> Result<GlueExponent> {
        match s {
            "1" => Ok(GlueExponent::One),
            "inf" | "infinity" | "oo" => Ok(GlueExponent::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| MetricError::InvalidParameter(format!("bad exponent {other:?}")))?;
                if p < 1.0 || !p.is_finite() {
                    return Err(MetricError::InvalidParameter(format!(
                        "exponent must be in [1, inf], got {p}"
                    )));
                }
                if p == 1.0 {
                    Ok(GlueExponent::One)
                } else {
                    Ok(GlueExponent::Finite(p))
                }
            }
        }
    }

    /// Combined length of a three-leg path: (a^p + r^p + b^p)^(1/p).
    fn combine(&self, a: &Scalar, r: &Scalar, b: &Scalar) -> Scalar {
        match self {
            GlueExponent::One => a.add(r).add(b),
            GlueExponent::Infinity => a.clone().max(r.clone()).max(b.clone()),
            GlueExponent::Finite(p) => {
                let s = a.to_f64().powf(*p) + r.to_f64().powf(*p) + b.to_f64().powf(*p);
                Scalar::from_f64(s.powf(1.0 / *p))
            }
        }
    }
}

/// Raises every distance to the power `gamma > 0`.
///
/// Any power of an ultrametric stays ultrametric. For non-ultrametric kinds
/// the triangle inequality survives gamma <= 1 unconditionally; for gamma > 1
/// the result is audited and a failure is reported instead of returned.
pub fn snowflake(space: &FiniteMetricSpace, gamma: &BigRational) -> Result<FiniteMetricSpace> {
    use num_traits::Zero;
    if gamma <= &BigRational::zero() {
        return Err(MetricError::InvalidParameter("snowflake exponent must be positive".into()));
    }
    let n = space.len();
    let mut dist = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            dist.push(space.dist(i, j).pow_ratio(gamma));
        }
    }
    let out = FiniteMetricSpace::from_parts(space.labels().to_vec(), dist, space.kind());
    let one = BigRational::from_integer(1.into());
    if !space.kind().is_ultra() && gamma > &one {
        let report = out.validate()?;
        if !report.satisfies(out.kind()) {
            return Err(MetricError::KindMismatch {
                declared: out.kind().to_string(),
                reason: format!(
                    "power {gamma} breaks the triangle inequality{}",
                    report
                        .worst_triangle
                        .map(|v| format!(" at ({}, {}) through {}", v.i, v.j, v.k))
                        .unwrap_or_default()
                ),
            });
        }
    }
    Ok(out)
}

/// Product space on pairs with the max of coordinate distances.
/// Labels are `"(la,lb)"` in row-major (a-outer) order.
pub fn linf_product(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> FiniteMetricSpace {
    let (na, nb) = (a.len(), b.len());
    let n = na * nb;
    let mut labels = Vec::with_capacity(n);
    for i in 0..na {
        for j in 0..nb {
            labels.push(format!("({},{})", a.label(i), b.label(j)));
        }
    }
    let mut dist = vec![Scalar::zero(); n * n];
    for i1 in 0..na {
        for j1 in 0..nb {
            let p = i1 * nb + j1;
            for i2 in 0..na {
                for j2 in 0..nb {
                    let q = i2 * nb + j2;
                    if p < q {
                        let d = a.dist(i1, i2).max(b.dist(j1, j2)).clone();
                        dist[p * n + q] = d.clone();
                        dist[q * n + p] = d;
                    }
                }
            }
        }
    }
    FiniteMetricSpace::from_parts(labels, dist, a.kind().meet(b.kind()))
}

/// One component of a glued family: the space plus its basepoint.
pub struct Piece<'a> {
    pub space: &'a FiniteMetricSpace,
    pub basepoint: usize,
}

/// Glues components at basepoints: within a component the original distance,
/// across components the three-leg combination
/// `d_i(x, p_i) (+)_p glue(i, j) (+)_p d_j(p_j, y)`.
///
/// The glue space's points index the components and its labels prefix the
/// output labels (`"glue_label:point_label"`). With `p = Infinity` all
/// components and the glue must carry an ultrametric kind; the output is then
/// ultrametric too. Every finite `p >= 1` yields a valid (pseudo-)metric.
pub fn p_amalgam(
    pieces: &[Piece<'_>],
    glue: &FiniteMetricSpace,
    p: GlueExponent,
) -> Result<FiniteMetricSpace> {
    if pieces.is_empty() {
        return Err(MetricError::Empty("amalgam needs at least one component".into()));
    }
    if glue.len() != pieces.len() {
        return Err(MetricError::LabelMismatch(format!(
            "glue has {} points for {} components",
            glue.len(),
            pieces.len()
        )));
    }
    for (idx, piece) in pieces.iter().enumerate() {
        if piece.basepoint >= piece.space.len() {
            return Err(MetricError::InvalidParameter(format!(
                "component {idx} basepoint {} out of range",
                piece.basepoint
            )));
        }
    }
    if p == GlueExponent::Infinity {
        for (idx, piece) in pieces.iter().enumerate() {
            if !piece.space.kind().is_ultra() {
                return Err(MetricError::KindMismatch {
                    declared: piece.space.kind().to_string(),
                    reason: format!(
                        "max-gluing needs ultrametric components, component {idx} is not"
                    ),
                });
            }
        }
        if !glue.kind().is_ultra() {
            return Err(MetricError::KindMismatch {
                declared: glue.kind().to_string(),
                reason: "max-gluing needs an ultrametric glue space".into(),
            });
        }
    }

    let offsets: Vec<usize> = pieces
        .iter()
        .scan(0usize, |acc, piece| {
            let o = *acc;
            *acc += piece.space.len();
            Some(o)
        })
        .collect();
    let n: usize = pieces.iter().map(|piece| piece.space.len()).sum();

    let mut labels = Vec::with_capacity(n);
    for (ci, piece) in pieces.iter().enumerate() {
        for l in piece.space.labels() {
            labels.push(format!("{}:{}", glue.label(ci), l));
        }
    }

    let mut dist = vec![Scalar::zero(); n * n];
    for (ci, pi) in pieces.iter().enumerate() {
        for (cj, pj) in pieces.iter().enumerate() {
            if cj < ci {
                continue;
            }
            for x in 0..pi.space.len() {
                let gx = offsets[ci] + x;
                for y in 0..pj.space.len() {
                    let gy = offsets[cj] + y;
                    if gy <= gx {
                        continue;
                    }
                    let d = if ci == cj {
                        pi.space.dist(x, y).clone()
                    } else {
                        p.combine(
                            pi.space.dist(x, pi.basepoint),
                            glue.dist(ci, cj),
                            pj.space.dist(pj.basepoint, y),
                        )
                    };
                    dist[gx * n + gy] = d.clone();
                    dist[gy * n + gx] = d;
                }
            }
        }
    }

    // Separation can only fail inside a component or through a zero glue
    // distance, and glue kinds already encode the latter.
    let mut kind = glue.kind();
    for piece in pieces {
        kind = kind.meet(piece.space.kind());
    }
    if p != GlueExponent::Infinity {
        kind = kind.meet(Kind::Metric); // drops the ultra flag, keeps separation
    }
    Ok(FiniteMetricSpace::from_parts(labels, dist, kind))
}

/// Identifies points at distance zero. Error if two classes disagree on
/// their distance across representatives (the input was not a pseudo-metric).
/// Returns the quotient space plus the class index of every original point.
pub fn quotient(space: &FiniteMetricSpace) -> Result<(FiniteMetricSpace, Vec<usize>)> {
    let n = space.len();
    // union-find over exact-zero pairs
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if space.dist(i, j).is_zero() {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut class_of = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        if class_of[r] == usize::MAX {
            class_of[r] = reps.len();
            reps.push(r);
        }
        class_of[i] = class_of[r];
    }
    // all members of a class must agree with their representative
    for i in 0..n {
        let r = reps[class_of[i]];
        if i == r {
            continue;
        }
        for j in 0..n {
            if class_of[j] == class_of[i] {
                continue;
            }
            if space.dist(i, j) != space.dist(r, j) {
                return Err(MetricError::QuotientDisagreement(i, j));
            }
        }
    }
    let m = reps.len();
    let mut labels = Vec::with_capacity(m);
    for &r in &reps {
        labels.push(space.label(r).to_string());
    }
    let mut dist = Vec::with_capacity(m * m);
    for &a in &reps {
        for &b in &reps {
            dist.push(space.dist(a, b).clone());
        }
    }
    let q = FiniteMetricSpace::from_parts(labels, dist, space.kind().separated());
    Ok((q, class_of))
}

/// Sup over pairs of |d_a - d_b| between two spaces on the same label set
/// (alignment is by label, not by index).
pub fn sup_distance(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Result<Scalar> {
    if a.len() != b.len() {
        return Err(MetricError::LabelMismatch(format!(
            "spaces have {} and {} points",
            a.len(),
            b.len()
        )));
    }
    let mut map = Vec::with_capacity(a.len());
    for l in a.labels() {
        match b.index_of(l) {
            Some(i) => map.push(i),
            None => {
                return Err(MetricError::LabelMismatch(format!("label {l:?} missing from second space")))
            }
        }
    }
    let mut best = Scalar::zero();
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            let gap = a.dist(i, j).sub_abs(b.dist(map[i], map[j]));
            best = best.max(gap);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn ultra3() -> FiniteMetricSpace {
        // leaves a,b at 1/4, c at 1/2 from both
        let q = Scalar::from_ratio(1, 4);
        let h = Scalar::from_ratio(1, 2);
        FiniteMetricSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![Scalar::zero(), q.clone(), h.clone()],
                vec![q, Scalar::zero(), h.clone()],
                vec![h.clone(), h, Scalar::zero()],
            ],
            Kind::Ultrametric,
        )
        .unwrap()
    }

    fn line3() -> FiniteMetricSpace {
        FiniteMetricSpace::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec![
                vec![Scalar::zero(), Scalar::from_int(1), Scalar::from_int(2)],
                vec![Scalar::from_int(1), Scalar::zero(), Scalar::from_int(1)],
                vec![Scalar::from_int(2), Scalar::from_int(1), Scalar::zero()],
            ],
            Kind::Metric,
        )
        .unwrap()
    }

    #[test]
    fn snowflake_preserves_ultrametric_exactly() {
        let s = ultra3();
        let half = BigRational::new(1.into(), 2.into());
        let t = snowflake(&s, &half).unwrap();
        assert_eq!(t.kind(), Kind::Ultrametric);
        // (1/4)^(1/2) = 1/2 exactly
        assert_eq!(t.dist(0, 1), &Scalar::from_ratio(1, 2));
        assert!(t.validate().unwrap().ultrametric);
    }

    #[test]
    fn snowflake_above_one_rejected_on_taut_line() {
        // 1-1-2 line: squaring gives 4 > 1 + 1
        let s = line3();
        let two = BigRational::from_integer(2.into());
        let err = snowflake(&s, &two);
        assert!(matches!(err, Err(MetricError::KindMismatch { .. })));
    }

    #[test]
    fn snowflake_below_one_keeps_metric() {
        let s = line3();
        let half = BigRational::new(1.into(), 2.into());
        let t = snowflake(&s, &half).unwrap();
        assert!(t.validate().unwrap().metric);
    }

    #[test]
    fn linf_product_of_ultras_is_ultra() {
        let s = ultra3();
        let p = linf_product(&s, &s);
        assert_eq!(p.len(), 9);
        assert_eq!(p.kind(), Kind::Ultrametric);
        assert!(p.validate().unwrap().ultrametric);
        assert_eq!(p.label(1), "(a,b)");
        // d((a,b),(b,a)) = max(1/4, 1/4)
        let i = p.index_of("(a,b)").unwrap();
        let j = p.index_of("(b,a)").unwrap();
        assert_eq!(p.dist(i, j), &Scalar::from_ratio(1, 4));
    }

    #[test]
    fn sum_amalgam_is_metric() {
        let a = line3();
        let b = ultra3();
        let glue = FiniteMetricSpace::new(
            vec!["L".into(), "U".into()],
            vec![
                vec![Scalar::zero(), Scalar::from_int(1)],
                vec![Scalar::from_int(1), Scalar::zero()],
            ],
            Kind::Metric,
        )
        .unwrap();
        let out = p_amalgam(
            &[Piece { space: &a, basepoint: 0 }, Piece { space: &b, basepoint: 2 }],
            &glue,
            GlueExponent::One,
        )
        .unwrap();
        assert_eq!(out.len(), 6);
        assert!(out.validate().unwrap().metric);
        // z is 2 from basepoint x, glue 1, c is the basepoint of the other side
        let i = out.index_of("L:z").unwrap();
        let j = out.index_of("U:c").unwrap();
        assert_eq!(out.dist(i, j), &Scalar::from_int(3));
    }

    #[test]
    fn max_amalgam_requires_and_produces_ultrametric() {
        let u = ultra3();
        let glue = FiniteMetricSpace::new(
            vec!["A".into(), "B".into()],
            vec![
                vec![Scalar::zero(), Scalar::from_int(1)],
                vec![Scalar::from_int(1), Scalar::zero()],
            ],
            Kind::Ultrametric,
        )
        .unwrap();
        let out = p_amalgam(
            &[Piece { space: &u, basepoint: 0 }, Piece { space: &u, basepoint: 0 }],
            &glue,
            GlueExponent::Infinity,
        )
        .unwrap();
        assert_eq!(out.kind(), Kind::Ultrametric);
        assert!(out.validate().unwrap().ultrametric);

        let m = line3();
        let err = p_amalgam(
            &[Piece { space: &m, basepoint: 0 }, Piece { space: &u, basepoint: 0 }],
            &glue,
            GlueExponent::Infinity,
        );
        assert!(matches!(err, Err(MetricError::KindMismatch { .. })));
    }

    #[test]
    fn quotient_collapses_zero_classes() {
        // two copies of the same point at distance zero
        let z = Scalar::zero();
        let one = Scalar::from_int(1);
        let s = FiniteMetricSpace::new(
            vec!["p".into(), "p2".into(), "q".into()],
            vec![
                vec![z.clone(), z.clone(), one.clone()],
                vec![z.clone(), z.clone(), one.clone()],
                vec![one.clone(), one, z.clone()],
            ],
            Kind::PseudoMetric,
        )
        .unwrap();
        let (q, classes) = quotient(&s).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(classes, vec![0, 0, 1]);
        assert_eq!(q.kind(), Kind::Metric);
    }

    #[test]
    fn quotient_rejects_disagreeing_representatives() {
        // not a pseudo-metric: p and p2 are at distance 0 yet disagree on q
        let z = Scalar::zero();
        let flat = vec![
            z.clone(),
            z.clone(),
            Scalar::from_int(1),
            z.clone(),
            z.clone(),
            Scalar::from_int(2),
            Scalar::from_int(1),
            Scalar::from_int(2),
            z,
        ];
        let s = FiniteMetricSpace::from_parts(
            vec!["p".into(), "p2".into(), "q".into()],
            flat,
            Kind::PseudoMetric,
        );
        assert!(matches!(quotient(&s), Err(MetricError::QuotientDisagreement(_, _))));
    }

    #[test]
    fn sup_distance_aligns_by_label() {
        let a = line3();
        let relabel_swapped = FiniteMetricSpace::new(
            vec!["y".into(), "x".into(), "z".into()],
            vec![
                vec![Scalar::zero(), Scalar::from_int(1), Scalar::from_int(1)],
                vec![Scalar::from_int(1), Scalar::zero(), Scalar::from_int(2)],
                vec![Scalar::from_int(1), Scalar::from_int(2), Scalar::zero()],
            ],
            Kind::Metric,
        )
        .unwrap();
        // identical space, different point order: sup distance 0
        assert!(sup_distance(&a, &relabel_swapped).unwrap().is_zero());
    }
}
