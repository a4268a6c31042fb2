//! Dimension sequences h_n, p_n, window estimates, and the doubling
//! exponent table (Theta, eta).

use crate::covering::{count_range, locate_gap, CountLog};
use crate::error::{CantorError, Result};
use crate::family::{Family, Mag};
use crate::logval::{SeqLog, LOG_BITS};
use crate::pow2sum::Pow2Sum;
use crate::spec::CantorSpec;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// A dimension value: exact rational, certified interval, or an exact ratio
/// of power sums too large to materialize.
#[derive(Clone, Debug)]
pub enum DimValue {
    Exact(BigRational),
    Interval { lo: BigRational, hi: BigRational },
    GiantRatio { num: Pow2Sum, den: Pow2Sum },
}

impl DimValue {
    pub fn from_mag_ratio(num: &Mag, den: &Mag) -> Result<DimValue> {
        match (num, den) {
            (Mag::Log(a), Mag::Log(b)) => Ok(match a.ratio(b) {
                SeqLog::Exact(v) => DimValue::Exact(v),
                r => DimValue::Interval { lo: r.lo(), hi: r.hi() },
            }),
            (Mag::Giant(a), Mag::Giant(b)) => {
                Ok(DimValue::GiantRatio { num: a.clone(), den: b.clone() })
            }
            _ => Err(CantorError::Domain(
                "dimension ratio mixes magnitude regimes".into(),
            )),
        }
    }

    /// Exact product with a positive rational, preserving the variant.
    pub fn scale_by(&self, q: &BigRational) -> DimValue {
        assert!(q.is_positive(), "dimension scaling needs a positive factor");
        match self {
            DimValue::Exact(v) => DimValue::Exact(v * q),
            DimValue::Interval { lo, hi } => {
                DimValue::Interval { lo: lo * q, hi: hi * q }
            }
            DimValue::GiantRatio { num, den } => DimValue::GiantRatio {
                num: num.mul_int(q.numer().magnitude()),
                den: den.mul_int(q.denom().magnitude()),
            },
        }
    }

    /// Deterministic order: exact where the representations allow it,
    /// interval midpoints otherwise. Rational and giant values never meet
    /// inside one family's table.
    pub fn cmp_val(&self, other: &DimValue) -> Ordering {
        use DimValue::*;
        match (self, other) {
            (GiantRatio { num: a, den: b }, GiantRatio { num: c, den: d }) => {
                a.mul(d).cmp_val(&c.mul(b))
            }
            (GiantRatio { .. }, _) | (_, GiantRatio { .. }) => {
                self.to_f64().total_cmp(&other.to_f64())
            }
            _ => self.mid().cmp(&other.mid()),
        }
    }

    /// Midpoint of the rational variants.
    fn mid(&self) -> BigRational {
        match self {
            DimValue::Exact(v) => v.clone(),
            DimValue::Interval { lo, hi } => (lo + hi) / BigRational::from_integer(2.into()),
            DimValue::GiantRatio { .. } => unreachable!("giant ratios have no rational midpoint"),
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            DimValue::Exact(v) => Some(v),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            DimValue::Exact(v) => metric_core::scalar::ratio_to_f64(v),
            DimValue::Interval { .. } => metric_core::scalar::ratio_to_f64(&self.mid()),
            DimValue::GiantRatio { num, den } => {
                let l = num.log2_f64() - den.log2_f64();
                if l > 1020.0 {
                    f64::INFINITY
                } else {
                    2f64.powf(l)
                }
            }
        }
    }

    /// Certified distance-at-most check against a rational target.
    pub fn within(&self, target: &BigRational, tol: &BigRational) -> bool {
        match self {
            DimValue::Exact(v) => (v - target).abs() <= *tol,
            DimValue::Interval { lo, hi } => {
                (lo - target).abs() <= *tol && (hi - target).abs() <= *tol
            }
            DimValue::GiantRatio { .. } => false,
        }
    }
}

impl PartialEq for DimValue {
    fn eq(&self, other: &Self) -> bool {
        use DimValue::*;
        match (self, other) {
            (Exact(a), Exact(b)) => a == b,
            (Interval { lo: a, hi: b }, Interval { lo: c, hi: d }) => a == c && b == d,
            (GiantRatio { num: a, den: b }, GiantRatio { num: c, den: d }) => {
                a.mul(d).cmp_val(&c.mul(b)) == Ordering::Equal
            }
            _ => false,
        }
    }
}

impl fmt::Display for DimValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimValue::Exact(v) => write!(f, "{}", metric_core::scalar::format_exact(v)),
            DimValue::Interval { .. } => write!(f, "{:.12}", self.to_f64()),
            DimValue::GiantRatio { .. } => write!(f, "~2^{:.3}", {
                let DimValue::GiantRatio { num, den } = self else { unreachable!() };
                num.log2_f64() - den.log2_f64()
            }),
        }
    }
}

/// One bound of a dimensional 4-tuple.
#[derive(Clone, Debug, PartialEq)]
pub enum DimBound {
    Finite(BigRational),
    Infinite,
}

impl DimBound {
    pub fn finite(n: i64, d: i64) -> DimBound {
        DimBound::Finite(BigRational::new(n.into(), d.into()))
    }

    pub fn zero() -> DimBound {
        DimBound::Finite(BigRational::zero())
    }

    pub fn cmp_val(&self, other: &DimBound) -> Ordering {
        match (self, other) {
            (DimBound::Finite(a), DimBound::Finite(b)) => a.cmp(b),
            (DimBound::Finite(_), DimBound::Infinite) => Ordering::Less,
            (DimBound::Infinite, DimBound::Finite(_)) => Ordering::Greater,
            (DimBound::Infinite, DimBound::Infinite) => Ordering::Equal,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, DimBound::Finite(v) if v.is_zero())
    }

    pub fn scale_by(&self, q: &BigRational) -> DimBound {
        match self {
            DimBound::Finite(v) => DimBound::Finite(v * q),
            DimBound::Infinite => DimBound::Infinite,
        }
    }

    pub fn max(&self, other: &DimBound) -> DimBound {
        if self.cmp_val(other) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for DimBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimBound::Finite(v) => write!(f, "{}", metric_core::scalar::format_exact(v)),
            DimBound::Infinite => write!(f, "inf"),
        }
    }
}

/// A dimensional 4-tuple (hdim, pdim, ubdim, adim), optionally labeled with
/// a topological dimension. Admissible tuples are non-decreasing with the
/// label at or below the head.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionalType {
    pub tdim: Option<DimBound>,
    pub a: [DimBound; 4],
}

impl DimensionalType {
    pub fn new(a: [DimBound; 4]) -> Result<DimensionalType> {
        DimensionalType::with_tdim(None, a)
    }

    pub fn with_tdim(tdim: Option<DimBound>, a: [DimBound; 4]) -> Result<DimensionalType> {
        for w in a.windows(2) {
            if w[0].cmp_val(&w[1]) == Ordering::Greater {
                return Err(CantorError::InvalidParameter(
                    "dimensional tuple must be non-decreasing".into(),
                ));
            }
        }
        if let Some(l) = &tdim {
            if let DimBound::Finite(v) = l {
                if !v.is_integer() || v.is_negative() {
                    return Err(CantorError::InvalidParameter(
                        "topological label must be a non-negative integer or infinite".into(),
                    ));
                }
            }
            if l.cmp_val(&a[0]) == Ordering::Greater {
                return Err(CantorError::InvalidParameter(
                    "topological label cannot exceed the Hausdorff entry".into(),
                ));
            }
        }
        Ok(DimensionalType { tdim, a })
    }

    /// Snowflake scaling: d -> d^(1/eta) multiplies the four metric entries
    /// by eta and leaves the topological label alone.
    pub fn scale_by(&self, eta: &BigRational) -> DimensionalType {
        DimensionalType {
            tdim: self.tdim.clone(),
            a: [
                self.a[0].scale_by(eta),
                self.a[1].scale_by(eta),
                self.a[2].scale_by(eta),
                self.a[3].scale_by(eta),
            ],
        }
    }

    /// Componentwise max, the gluing rule for finite unions.
    pub fn max(&self, other: &DimensionalType) -> DimensionalType {
        DimensionalType {
            tdim: match (&self.tdim, &other.tdim) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (Some(a), None) | (None, Some(a)) => Some(a.clone()),
                (None, None) => None,
            },
            a: [
                self.a[0].max(&other.a[0]),
                self.a[1].max(&other.a[1]),
                self.a[2].max(&other.a[2]),
                self.a[3].max(&other.a[3]),
            ],
        }
    }
}

impl fmt::Display for DimensionalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = &self.tdim {
            write!(f, "[tdim {l}] ")?;
        }
        write!(f, "({}, {}, {}, {})", self.a[0], self.a[1], self.a[2], self.a[3])
    }
}

/// One row of the dimension table.
#[derive(Clone, Debug)]
pub struct DimRow {
    pub n: u64,
    pub h: DimValue,
    pub p: DimValue,
}

/// h_n = sum_{i<=n} L(i) / E(n+1) and p_n = sum_{i<=n} L(i) / E(n), for
/// every n <= n_max past the prefix where alpha(n) >= 1. The branching sum
/// starts at level 0 regardless of the skipped prefix.
pub fn dim_sequences(family: &Family, n_max: u64) -> Result<Vec<DimRow>> {
    let limit = match family.table_len() {
        // h_n needs E(n+1), so a table of len levels caps rows at len - 2
        Some(len) if len < 2 => return Ok(Vec::new()),
        Some(len) => n_max.min(len - 2),
        None => n_max,
    };
    let mut rows = Vec::new();
    let mut lsum = Mag::zero();
    let mut e_cur = family.e_val(0)?;
    for n in 0..=limit {
        lsum = lsum.add(&family.m_log2(n)?);
        let e_next = family.e_val(n + 1)?;
        let positive = |m: &Mag| m.cmp_rational(&BigRational::zero()) == Some(Ordering::Greater);
        if positive(&e_cur) && positive(&e_next) {
            rows.push(DimRow {
                n,
                h: DimValue::from_mag_ratio(&lsum, &e_next)?,
                p: DimValue::from_mag_ratio(&lsum, &e_cur)?,
            });
        }
        e_cur = e_next;
    }
    Ok(rows)
}

/// How the liminf/limsup estimates pick their window: the tail half fits
/// monotone sequences; staircase families keep the full window so the
/// periodic dips stay visible.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WindowPolicy {
    TailHalf,
    Full,
}

#[derive(Clone, Debug)]
pub struct DimensionReport {
    pub target: Option<DimensionalType>,
    pub rows: Vec<DimRow>,
    pub estimate_window: (u64, u64),
    /// Exact minimum of h_n over the estimate window.
    pub h_liminf: DimValue,
    /// Exact maximum of p_n over the estimate window.
    pub p_limsup: DimValue,
}

pub fn dimension_report(
    family: &Family,
    n_max: u64,
    policy: WindowPolicy,
    target: Option<DimensionalType>,
) -> Result<DimensionReport> {
    let rows = dim_sequences(family, n_max)?;
    let first = rows
        .first()
        .ok_or_else(|| {
            CantorError::InvalidParameter("window contains no admissible levels".into())
        })?
        .n;
    let last = rows.last().unwrap().n;
    let start = match policy {
        WindowPolicy::Full => first,
        WindowPolicy::TailHalf => first.max(last / 2),
    };
    let tail: Vec<&DimRow> = rows.iter().filter(|r| r.n >= start).collect();
    let h_liminf = tail
        .iter()
        .map(|r| &r.h)
        .min_by(|a, b| a.cmp_val(b))
        .unwrap()
        .clone();
    let p_limsup = tail
        .iter()
        .map(|r| &r.p)
        .max_by(|a, b| a.cmp_val(b))
        .unwrap()
        .clone();
    Ok(DimensionReport {
        target,
        rows,
        estimate_window: (start, last),
        h_liminf,
        p_limsup,
    })
}

/// One Theta table row: covering count of a ball B(x, alpha(scale)) at
/// radius epsilon * alpha(scale).
#[derive(Clone, Debug)]
pub struct ThetaRow {
    pub scale: u64,
    pub count: CountLog,
}

#[derive(Clone, Debug)]
pub struct ThetaReport {
    pub epsilon: BigRational,
    pub window: u64,
    pub rows: Vec<ThetaRow>,
    /// Max covering count over the window: a certified lower bound for
    /// Theta(epsilon), exact when the window covers the maximizing scale.
    pub theta_log2: Mag,
    pub theta_count: Option<BigUint>,
    /// log2 Theta / -log2 epsilon.
    pub eta: DimValue,
    /// Largest n with epsilon^-n < Theta certified, capped by the window.
    pub n_star: u64,
    /// Set when the witness keeps growing from the half window to the full
    /// window: covering counts outrun every fixed power of 1/epsilon.
    pub non_doubling: bool,
}

/// Scan R = alpha(n) for n <= window and cover each ball at radius
/// epsilon * R. Homogeneity makes the ball's center irrelevant.
pub fn theta_eta(family: &Family, epsilon: &BigRational, window: u64) -> Result<ThetaReport> {
    if !epsilon.is_positive() || epsilon >= &BigRational::one() {
        return Err(CantorError::InvalidParameter("epsilon must lie in (0, 1)".into()));
    }
    let limit = match family.table_len() {
        Some(len) => window.min(len - 1),
        None => window,
    };
    let mut rows = Vec::new();
    for n in 0..=limit {
        let cap = family.alpha(n)?;
        let r = cap.mul_unit(epsilon)?;
        // gap(alpha(n)) = n - 1 by strict decrease, so the ball fixes
        // levels 0..n and splits over levels n..=r_gap
        let count = match locate_gap(family, &r) {
            Ok(Some(r_gap)) if r_gap >= n => count_range(family, n, r_gap)?,
            Ok(_) => CountLog { log2: Mag::zero(), count: Some(BigUint::one()) },
            Err(CantorError::Domain(_)) => break, // table exhausted below r
            Err(e) => return Err(e),
        };
        rows.push(ThetaRow { scale: n, count });
    }
    if rows.is_empty() {
        return Err(CantorError::InvalidParameter(
            "no scale in the window admits the requested epsilon".into(),
        ));
    }
    let best = rows
        .iter()
        .max_by(|a, b| mag_order(&a.count.log2, &b.count.log2))
        .unwrap();
    let theta_log2 = best.count.log2.clone();
    let theta_count = best.count.count.clone();
    let neg_log_eps = Mag::Log(SeqLog::log2_of(&epsilon.recip(), LOG_BITS));
    let eta = DimValue::from_mag_ratio(&theta_log2, &neg_log_eps)?;
    let n_star = witness_power(&theta_log2, epsilon, limit);
    let half_best = rows
        .iter()
        .filter(|r| r.scale <= limit / 2)
        .max_by(|a, b| mag_order(&a.count.log2, &b.count.log2))
        .map(|r| witness_power(&r.count.log2, epsilon, limit / 2))
        .unwrap_or(0);
    let non_doubling = n_star >= 4 && n_star > half_best;
    Ok(ThetaReport {
        epsilon: epsilon.clone(),
        window,
        rows,
        theta_log2,
        theta_count,
        eta,
        n_star,
        non_doubling,
    })
}

/// Deterministic order on covering magnitudes: exact for counts in the same
/// regime, certified-bound order across regimes.
fn mag_order(a: &Mag, b: &Mag) -> Ordering {
    match (a, b) {
        (Mag::Log(x), Mag::Log(y)) => x.mid().cmp(&y.mid()),
        (Mag::Giant(x), Mag::Giant(y)) => x.cmp_val(y),
        (Mag::Giant(_), Mag::Log(_)) => Ordering::Greater,
        (Mag::Log(_), Mag::Giant(_)) => Ordering::Less,
    }
}

/// Largest n <= cap with n * (-log2 eps) certifiably below log2 Theta.
fn witness_power(theta_log2: &Mag, epsilon: &BigRational, cap: u64) -> u64 {
    let ell_hi = SeqLog::log2_of(&epsilon.recip(), LOG_BITS).hi();
    let mut n = cap;
    while n > 0 {
        let bound = &ell_hi * BigRational::from_integer(n.into());
        if theta_log2.cmp_rational(&bound) == Some(Ordering::Greater) {
            return n;
        }
        n -= 1;
    }
    0
}

impl CantorSpec {
    pub fn dim_sequences(&self, n_max: u64) -> Result<Vec<DimRow>> {
        dim_sequences(self.family(), n_max)
    }

    pub fn theta_eta(&self, epsilon: &BigRational, window: u64) -> Result<ThetaReport> {
        theta_eta(self.family(), epsilon, window)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn halving_tree_sequences_are_the_textbook_fractions() {
        let family = Family::geometric(BigRational::one(), 2).unwrap();
        let rows = dim_sequences(&family, 1000).unwrap();
        assert_eq!(rows.len(), 1001);
        for r in &rows {
            assert_eq!(r.h.exact().unwrap(), &ratio(r.n as i64 + 1, r.n as i64 + 2));
            assert_eq!(r.p.exact().unwrap(), &BigRational::one());
        }
        let report =
            dimension_report(&family, 1000, WindowPolicy::TailHalf, None).unwrap();
        assert_eq!(report.estimate_window.0, 500);
        assert_eq!(report.h_liminf.exact().unwrap(), &ratio(501, 502));
        assert_eq!(report.p_limsup.exact().unwrap(), &BigRational::one());
    }

    #[test]
    fn harmonic_scales_send_h_up() {
        let family = Family::Harmonic { m: 2 };
        let rows = dim_sequences(&family, 200).unwrap();
        // alpha(0) = 1 is skipped; from n = 1 on the values are certified
        assert_eq!(rows[0].n, 1);
        let h50 = rows.iter().find(|r| r.n == 50).unwrap().h.to_f64();
        let h200 = rows.iter().find(|r| r.n == 200).unwrap().h.to_f64();
        // (n+1) log 2 / log (n+2) rises without bound
        assert!(h50 > 6.0 && h200 > h50);
        for r in &rows {
            assert!(r.h.cmp_val(&r.p) != Ordering::Greater);
        }
    }

    #[test]
    fn staircase_dip_sits_in_the_full_window() {
        let family = Family::TowerMild;
        let report = dimension_report(&family, 40, WindowPolicy::Full, None).unwrap();
        // h_4 = 5/301 is the first crush dip; the tail-half policy would
        // miss it
        assert_eq!(report.h_liminf.exact().unwrap(), &ratio(5, 301));
        assert_eq!(report.p_limsup.exact().unwrap(), &BigRational::one());
        let tail = dimension_report(&family, 40, WindowPolicy::TailHalf, None).unwrap();
        assert!(tail.h_liminf.cmp_val(&report.h_liminf) == Ordering::Greater);
    }

    #[test]
    fn giant_rows_split_to_zero_and_infinity() {
        let family = Family::FactorialGiant;
        let rows = dim_sequences(&family, 5).unwrap();
        assert_eq!(rows.len(), 6);
        // h_n collapses: L-sum through (2n+2)! dwarfed by E(n+1) ~ 2^(2n+3)!
        let h = rows.last().unwrap().h.to_f64();
        assert!(h < 1e-9, "h_5 = {h}");
        // p_n explodes: same sum against E(n) ~ 2^(2n+1)!
        let p = rows.last().unwrap().p.to_f64();
        assert!(p.is_infinite() || p > 1e9, "p_5 = {p}");
        // exact ordering across rows despite the magnitudes
        for w in rows.windows(2) {
            assert_eq!(w[0].h.cmp_val(&w[1].h), Ordering::Greater);
            assert_eq!(w[0].p.cmp_val(&w[1].p), Ordering::Less);
        }
    }

    #[test]
    fn snowflake_scaling_is_exact() {
        let family = Family::QuadraticDyadic;
        let rows = dim_sequences(&family, 30).unwrap();
        let eta = ratio(3, 7);
        for r in &rows {
            let scaled = r.h.scale_by(&eta);
            assert_eq!(scaled.exact().unwrap(), &(r.h.exact().unwrap() * &eta));
            // and the giant representation scales exactly too
            let g = DimValue::GiantRatio {
                num: Pow2Sum::from_exp(100.into()),
                den: Pow2Sum::from_exp(300.into()),
            };
            assert_eq!(g.scale_by(&eta).scale_by(&ratio(7, 3)), g);
        }
    }

    #[test]
    fn tuple_ordering_and_scaling_rules() {
        let t = DimensionalType::new([
            DimBound::zero(),
            DimBound::finite(7, 10),
            DimBound::finite(13, 10),
            DimBound::Infinite,
        ])
        .unwrap();
        let s = t.scale_by(&ratio(1, 2));
        assert_eq!(s.a[1], DimBound::finite(7, 20));
        assert_eq!(s.a[3], DimBound::Infinite);
        assert!(DimensionalType::new([
            DimBound::finite(2, 1),
            DimBound::finite(1, 1),
            DimBound::finite(3, 1),
            DimBound::finite(4, 1),
        ])
        .is_err());
        let l = DimensionalType::with_tdim(
            Some(DimBound::finite(1, 1)),
            [
                DimBound::finite(1, 1),
                DimBound::finite(1, 1),
                DimBound::finite(2, 1),
                DimBound::finite(2, 1),
            ],
        )
        .unwrap();
        let m = t.max(&l);
        assert_eq!(m.a[0], DimBound::finite(1, 1));
        assert_eq!(m.a[2], DimBound::finite(2, 1));
        assert_eq!(m.a[3], DimBound::Infinite);
        assert!(DimensionalType::with_tdim(
            Some(DimBound::finite(1, 2)),
            [
                DimBound::finite(1, 1),
                DimBound::finite(1, 1),
                DimBound::finite(1, 1),
                DimBound::finite(1, 1),
            ],
        )
        .is_err());
    }

    #[test]
    fn quadratic_theta_peaks_at_the_square_root() {
        // log2 Theta(2^-16) = 4: the gain j - n is largest where
        // (j+1)^2 >= n^2 + 16 first allows j = n + 4 - 1... the max is
        // exactly 4 at n = 1 and decays after
        let family = Family::QuadraticDyadic;
        let report = theta_eta(&family, &ratio(1, 65536), 64).unwrap();
        let Mag::Log(l) = &report.theta_log2 else { panic!() };
        assert_eq!(l.exact().unwrap(), &BigRational::from_integer(4.into()));
        assert_eq!(report.eta.exact().unwrap(), &ratio(1, 4));
        assert!(!report.non_doubling);
    }

    #[test]
    fn harmonic_counts_outrun_every_power() {
        // B(x, 1/(n+1)) needs 2^(n+1) balls of half its radius: the
        // doubling witness grows with the window
        let family = Family::Harmonic { m: 2 };
        let report = theta_eta(&family, &ratio(1, 2), 64).unwrap();
        assert!(report.non_doubling);
        assert!(report.n_star >= 32);
        let small = theta_eta(&family, &ratio(1, 2), 16).unwrap();
        assert!(small.n_star < report.n_star);
    }

    #[test]
    fn theta_is_monotone_in_epsilon() {
        let family = Family::QuadraticDyadic;
        let mut last: Option<f64> = None;
        for eps in [ratio(1, 2), ratio(1, 4), ratio(1, 16), ratio(1, 256)] {
            let report = theta_eta(&family, &eps, 48).unwrap();
            let cur = report.theta_log2.to_f64();
            if let Some(prev) = last {
                assert!(cur >= prev, "Theta must not shrink as epsilon shrinks");
            }
            last = Some(cur);
        }
    }

    #[test]
    fn interval_values_carry_certified_width() {
        let family = Family::Harmonic { m: 2 };
        let rows = dim_sequences(&family, 40).unwrap();
        for r in &rows {
            if let DimValue::Interval { lo, hi } = &r.h {
                let width = hi - lo;
                assert!(width.is_positive());
                assert!(width < ratio(1, 1_000_000_000));
            }
        }
    }
}
