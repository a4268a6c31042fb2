//! Scale and branching sequence families for tree ultrametric spaces.
//!
//! A family supplies, for each level n: the branching count m_n >= 2, its
//! logarithm L(n) = log2 m_n, the scale alpha(n), and the exponent
//! E(n) = -log2 alpha(n). Everything downstream (covering counts, dimension
//! tables, assembly factories) consumes these four accessors.
//!
//! Values live in two regimes. Ordinary families keep exact rationals (or
//! certified intervals for irrational logs). The giant families, whose
//! exponents are themselves powers of two with factorial-sized exponents,
//! keep symbolic `Pow2Sum` magnitudes that never materialize.

use crate::error::{CantorError, Result};
use crate::logval::{SeqLog, LOG_BITS};
use crate::pow2sum::Pow2Sum;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// Values needing more than this many bits stay symbolic.
pub const MATERIALIZE_BITS: u64 = 1 << 20;

fn big(n: u64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// An exponent-domain magnitude: rational-sized (exact or certified
/// interval), or a symbolic sum of powers of two beyond materialization.
#[derive(Clone, Debug)]
pub enum Mag {
    Log(SeqLog),
    Giant(Pow2Sum),
}

impl Mag {
    pub fn zero() -> Mag {
        Mag::Log(SeqLog::zero())
    }

    pub fn from_u64(n: u64) -> Mag {
        Mag::Log(SeqLog::from_bigint(n.into()))
    }

    pub fn add(&self, other: &Mag) -> Mag {
        match (self, other) {
            (Mag::Log(a), Mag::Log(b)) => Mag::Log(a.add(b)),
            (Mag::Giant(a), Mag::Giant(b)) => Mag::Giant(a.add(b)),
            (Mag::Log(a), Mag::Giant(b)) | (Mag::Giant(b), Mag::Log(a)) => {
                // giants only ever combine with exact integer logs
                let v = a.exact().expect("mixed giant/interval magnitude");
                assert!(v.is_integer() && !v.is_negative(), "giant mixed with fractional log");
                Mag::Giant(b.add(&Pow2Sum::from_biguint(v.to_integer().magnitude())))
            }
        }
    }

    /// Compare against an exact rational; None when a certified interval
    /// straddles the bound.
    pub fn cmp_rational(&self, q: &BigRational) -> Option<Ordering> {
        match self {
            Mag::Log(s) => {
                if let Some(v) = s.exact() {
                    return Some(v.cmp(q));
                }
                if s.certainly_gt(q) {
                    Some(Ordering::Greater)
                } else if s.certainly_lt(q) {
                    Some(Ordering::Less)
                } else {
                    None
                }
            }
            Mag::Giant(p) => {
                if p.is_zero() {
                    return Some(BigRational::zero().cmp(q));
                }
                if !q.is_positive() {
                    return Some(Ordering::Greater);
                }
                // value in [2^t, 2^(t+1)); log2 q in (B-1, B+1) with
                // B = bits(numer) - bits(denom)
                let t = p.max_exp().unwrap();
                let b = q.numer().magnitude().bits() as i64 - q.denom().magnitude().bits() as i64;
                if let Some(tv) = t.to_i64() {
                    if tv > b + 1 {
                        return Some(Ordering::Greater);
                    }
                    if tv + 1 < b - 1 {
                        return Some(Ordering::Less);
                    }
                    if let Some(n) = p.to_biguint(MATERIALIZE_BITS * 2) {
                        return Some(BigRational::from_integer(n.into()).cmp(q));
                    }
                    None
                } else {
                    // exponent beyond i64: astronomically larger than any
                    // representable rational
                    Some(Ordering::Greater)
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Mag::Log(s) => s.to_f64(),
            Mag::Giant(p) => {
                let l = p.log2_f64();
                if l > 1020.0 {
                    f64::INFINITY
                } else {
                    2f64.powf(l)
                }
            }
        }
    }
}

/// An exact scale value: a materializable rational, or frac * 2^(-neg_exp)
/// with frac in (1/2, 1] and a symbolic exponent.
#[derive(Clone, Debug)]
pub enum AlphaVal {
    Exact(BigRational),
    Scaled { frac: BigRational, neg_exp: Pow2Sum },
}

impl AlphaVal {
    fn scaled(mut frac: BigRational, mut neg_exp: Pow2Sum) -> AlphaVal {
        assert!(frac.is_positive() && frac <= BigRational::one());
        let half = BigRational::new(1.into(), 2.into());
        while frac <= half {
            frac = frac * big(2);
            neg_exp = neg_exp.add(&Pow2Sum::from_exp(BigInt::zero()));
        }
        AlphaVal::Scaled { frac, neg_exp }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            AlphaVal::Exact(v) => Some(v),
            AlphaVal::Scaled { .. } => None,
        }
    }

    /// Exact total order on scale values.
    pub fn cmp_val(&self, other: &AlphaVal) -> Result<Ordering> {
        match (self, other) {
            (AlphaVal::Exact(a), AlphaVal::Exact(b)) => Ok(a.cmp(b)),
            (AlphaVal::Exact(a), AlphaVal::Scaled { frac, neg_exp }) => {
                cmp_rational_vs_scaled(a, frac, neg_exp)
            }
            (AlphaVal::Scaled { frac, neg_exp }, AlphaVal::Exact(b)) => {
                cmp_rational_vs_scaled(b, frac, neg_exp).map(Ordering::reverse)
            }
            (
                AlphaVal::Scaled { frac: f1, neg_exp: e1 },
                AlphaVal::Scaled { frac: f2, neg_exp: e2 },
            ) => Ok(match e1.cmp_val(e2) {
                // smaller exponent means strictly larger value once fracs
                // are normalized into (1/2, 1]
                Ordering::Less => Ordering::Greater,
                Ordering::Greater => Ordering::Less,
                Ordering::Equal => f1.cmp(f2),
            }),
        }
    }

    /// Exact product with a rational factor in (0, 1].
    pub fn mul_unit(&self, q: &BigRational) -> Result<AlphaVal> {
        if !q.is_positive() || q > &BigRational::one() {
            return Err(CantorError::InvalidParameter(
                "scale factor must lie in (0, 1]".into(),
            ));
        }
        Ok(match self {
            AlphaVal::Exact(v) => AlphaVal::Exact(v * q),
            AlphaVal::Scaled { frac, neg_exp } => {
                AlphaVal::scaled(frac * q, neg_exp.clone())
            }
        })
    }
}

/// Compare a materializable positive rational against frac * 2^(-neg_exp).
fn cmp_rational_vs_scaled(
    a: &BigRational,
    frac: &BigRational,
    neg_exp: &Pow2Sum,
) -> Result<Ordering> {
    if !a.is_positive() {
        return Ok(Ordering::Less);
    }
    // a > 2^(-(bits(denom)+1)); certified greater once neg_exp clears that
    let floor_bits = a.denom().magnitude().bits() + 2;
    if neg_exp.cmp_val(&Pow2Sum::from_biguint(&floor_bits.into())) == Ordering::Greater {
        return Ok(Ordering::Greater);
    }
    if let Some(e) = neg_exp.to_biguint(MATERIALIZE_BITS * 2) {
        let e = e.to_u64().ok_or_else(|| {
            CantorError::Domain("scale exponent exceeds comparison budget".into())
        })?;
        let val = frac / BigRational::from_integer(BigInt::one() << e);
        return Ok(a.cmp(&val));
    }
    Err(CantorError::Domain(
        "rational too extreme to compare against a symbolic scale".into(),
    ))
}

/// Stage data for the mild staircase family: stage boundary k(i) = 2^(2^i)
/// and crush budget b_i.
pub struct MildStage {
    pub boundary: BigUint,
    pub budget: BigUint,
    pub exponent_at_crush: BigUint,
}

/// k(i) = 2^(2^i) as BigUint.
fn mild_boundary(i: u32) -> BigUint {
    BigUint::one() << (1u64 << i)
}

/// Crush budgets: hand-tuned finite prefix, then b_i = 2^i * k(i).
fn mild_budget(i: u32) -> BigUint {
    match i {
        0 => 2u32.into(),
        1 => 295u32.into(),
        2 => 8u32.into(),
        3 => 12u32.into(),
        _ => BigUint::from(1u32) << (i as u64 + (1u64 << i)),
    }
}

/// Exact stage quantities for the mild staircase's limit conditions.
pub fn mild_stage(i: u32) -> MildStage {
    let boundary = mild_boundary(i);
    let budget_sum: BigUint = (0..=i).map(mild_budget).sum();
    // E(k(i)+1): k(i)+2 steps, i+1 of them crushes, the rest halve
    let exponent_at_crush = &boundary + 2u32 - BigUint::from(i + 1) + budget_sum;
    MildStage { boundary, budget: mild_budget(i), exponent_at_crush }
}

/// Split a linear index into (block, offset) along triangular blocks of
/// sizes 1, 2, 3, ...: block n covers [n(n+1)/2, n(n+1)/2 + n].
pub fn triangular_split(j: u64) -> (u64, u64) {
    let tri = |n: u128| n * (n + 1) / 2;
    let disc = BigUint::from(8u64) * BigUint::from(j) + BigUint::one();
    let mut n = (disc.sqrt() - BigUint::one()).to_u128().unwrap() / 2;
    while tri(n) > j as u128 {
        n -= 1;
    }
    while tri(n + 1) <= j as u128 {
        n += 1;
    }
    (n as u64, j - tri(n) as u64)
}

/// A scale/branching family. All accessors are pure in (family, n).
#[derive(Clone, Debug)]
pub enum Family {
    /// alpha(n) = 2^(-(n+1) q), constant branching. q = 1, m = 2 is the
    /// canonical full-dimensional tree of type (1/q, 1/q, 1/q, 1/q) * log2 m.
    Geometric { ratio_log2: BigRational, m: u64 },
    /// alpha(n) = 1/(n+1), constant branching: all four dimensions infinite.
    Harmonic { m: u64 },
    /// alpha(n) = 2^(-n^2), m = 2: all four dimensions zero.
    QuadraticDyadic,
    /// Halving scales with tetration-depth crush stages k(i) = t(5i+5):
    /// analytic type (0, 1, 1, 1), but the first crush sits past t(5), so
    /// every desk-scale table shows the initial plateau at 1.
    TowerPlateau,
    /// Same staircase shape with stages k(i) = 2^(2^i): type (0, 1, 1, 1)
    /// with the h-dip and p-recovery visible by n = 10^4.
    TowerMild,
    /// Branching 2^2^((2i+2)!) against crush 2^2^((2i+1)!): type
    /// (0, inf, inf, inf) with symbolic exponents.
    FactorialGiant,
    /// Mild variant with (2i+2)^2 / (2i+1)^2 exponents: same type, limits
    /// visible within a few terms.
    SquareGiant,
    /// alpha(n) = 2^(-n^3) refined by inserting 2^(-k) alpha(n), k = 1..n:
    /// type (0, 0, 0, 1).
    CubeInterleavedDyadic,
    /// alpha(n) = 2^(-n^3) refined by inserting (k/(k+1)) alpha(n): type
    /// (0, 0, 0, inf) and non-doubling at every scale.
    CubeInterleavedFraction,
    /// Explicit finite tables (strictly decreasing positive scales).
    Custom { alpha: Vec<BigRational>, m: Vec<u64> },
    /// Drop the first k levels: the family of any radius-alpha(k) ball.
    Shifted { base: Box<Family>, k: u64 },
}

impl Family {
    pub fn custom(alpha: Vec<BigRational>, m: Vec<u64>) -> Result<Family> {
        if alpha.is_empty() || alpha.len() != m.len() {
            return Err(CantorError::InvalidParameter(
                "custom family needs equal, nonzero scale and branching tables".into(),
            ));
        }
        if !alpha[0].is_positive() {
            return Err(CantorError::InvalidParameter("scales must be positive".into()));
        }
        for w in alpha.windows(2) {
            if w[1] >= w[0] {
                return Err(CantorError::InvalidParameter(
                    "scales must be strictly decreasing".into(),
                ));
            }
        }
        if m.iter().any(|&x| x < 2) {
            return Err(CantorError::InvalidParameter("branching must be >= 2".into()));
        }
        Ok(Family::Custom { alpha, m })
    }

    pub fn geometric(ratio_log2: BigRational, m: u64) -> Result<Family> {
        if !ratio_log2.is_positive() || m < 2 {
            return Err(CantorError::InvalidParameter(
                "geometric family needs ratio_log2 > 0 and m >= 2".into(),
            ));
        }
        Ok(Family::Geometric { ratio_log2, m })
    }

    pub fn shifted(self, k: u64) -> Family {
        if k == 0 {
            self
        } else {
            Family::Shifted { base: Box::new(self), k }
        }
    }

    /// Number of levels the family defines; None when unbounded.
    pub fn table_len(&self) -> Option<u64> {
        match self {
            Family::Custom { alpha, .. } => Some(alpha.len() as u64),
            Family::Shifted { base, k } => base.table_len().map(|l| l.saturating_sub(*k)),
            _ => None,
        }
    }

    fn check_level(&self, n: u64) -> Result<()> {
        match self.table_len() {
            Some(len) if n >= len => Err(CantorError::Domain(format!(
                "level {n} past the family's table (length {len})"
            ))),
            _ => Ok(()),
        }
    }

    /// Branching count m_n, when it materializes.
    pub fn m_count(&self, n: u64) -> Result<Option<BigUint>> {
        self.check_level(n)?;
        Ok(match self {
            Family::Geometric { m, .. } | Family::Harmonic { m } => Some((*m).into()),
            Family::QuadraticDyadic
            | Family::TowerPlateau
            | Family::TowerMild
            | Family::CubeInterleavedDyadic
            | Family::CubeInterleavedFraction => Some(2u32.into()),
            Family::FactorialGiant => double_pow2_count(&factorial(2 * n + 2)),
            Family::SquareGiant => double_pow2_count(&square(2 * n + 2)),
            Family::Custom { m, .. } => Some(m[n as usize].into()),
            Family::Shifted { base, k } => base.m_count(n + k)?,
        })
    }

    /// L(n) = log2 m_n: exact for power-of-two branching, certified
    /// interval otherwise, symbolic for the giants.
    pub fn m_log2(&self, n: u64) -> Result<Mag> {
        self.check_level(n)?;
        Ok(match self {
            Family::Geometric { m, .. } | Family::Harmonic { m } => int_log2(*m),
            Family::QuadraticDyadic
            | Family::TowerPlateau
            | Family::TowerMild
            | Family::CubeInterleavedDyadic
            | Family::CubeInterleavedFraction => Mag::from_u64(1),
            Family::FactorialGiant => Mag::Giant(Pow2Sum::from_exp(factorial(2 * n + 2))),
            Family::SquareGiant => Mag::Giant(Pow2Sum::from_exp(square(2 * n + 2))),
            Family::Custom { m, .. } => int_log2(m[n as usize]),
            Family::Shifted { base, k } => base.m_log2(n + k)?,
        })
    }

    /// E(n) = -log2 alpha(n).
    pub fn e_val(&self, n: u64) -> Result<Mag> {
        self.check_level(n)?;
        Ok(match self {
            Family::Geometric { ratio_log2, m: _ } => {
                Mag::Log(SeqLog::Exact(big(n + 1) * ratio_log2))
            }
            Family::Harmonic { .. } => {
                Mag::Log(SeqLog::log2_of(&big(n + 1), LOG_BITS))
            }
            Family::QuadraticDyadic => Mag::Log(SeqLog::from_bigint(BigInt::from(n) * n)),
            Family::TowerPlateau => {
                // first crush stage ends at t(5)+1 = 2^65536 + 1, past any
                // u64 level: within addressable range E(n) = n+1
                Mag::from_u64(n + 1)
            }
            Family::TowerMild => {
                let mut e = BigInt::from(n) + 1;
                for i in 0..6u32 {
                    // special level k(i)+1 contributes b_i instead of 1
                    let special = (1u128 << (1u32 << i)) + 1;
                    if special <= n as u128 {
                        e += BigInt::from(mild_budget(i)) - 1;
                    }
                }
                Mag::Log(SeqLog::Exact(BigRational::from_integer(e)))
            }
            Family::FactorialGiant => {
                let mut p = Pow2Sum::zero();
                for i in 0..=n {
                    p = p.add(&Pow2Sum::from_exp(factorial(2 * i + 1)));
                }
                Mag::Giant(p)
            }
            Family::SquareGiant => {
                let mut p = Pow2Sum::zero();
                for i in 0..=n {
                    p = p.add(&Pow2Sum::from_exp(square(2 * i + 1)));
                }
                Mag::Giant(p)
            }
            Family::CubeInterleavedDyadic => {
                let (blk, off) = triangular_split(n);
                let cube = BigInt::from(blk).pow(3);
                Mag::Log(SeqLog::from_bigint(cube + off))
            }
            Family::CubeInterleavedFraction => {
                let (blk, off) = triangular_split(n);
                let cube = SeqLog::from_bigint(BigInt::from(blk).pow(3));
                if off == 0 {
                    Mag::Log(cube)
                } else {
                    // inserted value (k/(k+1)) alpha(blk) with k = blk+1-off
                    let k = blk + 1 - off;
                    let step = BigRational::new((k + 1).into(), k.into());
                    Mag::Log(cube.add(&SeqLog::log2_of(&step, LOG_BITS)))
                }
            }
            Family::Custom { alpha, .. } => {
                Mag::Log(neg_log2(&alpha[n as usize]))
            }
            Family::Shifted { base, k } => base.e_val(n + k)?,
        })
    }

    /// alpha(n) as an exact value. Errors only for scales that are
    /// irrational (fractional geometric exponents).
    pub fn alpha(&self, n: u64) -> Result<AlphaVal> {
        self.check_level(n)?;
        match self {
            Family::Geometric { ratio_log2, .. } => {
                let q = big(n + 1) * ratio_log2;
                if !q.is_integer() {
                    return Err(CantorError::Domain(
                        "fractional geometric exponent has no exact scale value".into(),
                    ));
                }
                Ok(dyadic_alpha_from_bigint(q.to_integer()))
            }
            Family::Harmonic { .. } => Ok(AlphaVal::Exact(big(n + 1).recip())),
            Family::QuadraticDyadic => Ok(dyadic_alpha_from_bigint(BigInt::from(n) * n)),
            Family::TowerPlateau | Family::TowerMild => {
                let Mag::Log(s) = self.e_val(n)? else { unreachable!() };
                Ok(dyadic_alpha_from_bigint(s.exact().unwrap().to_integer()))
            }
            Family::FactorialGiant | Family::SquareGiant => {
                let Mag::Giant(p) = self.e_val(n)? else { unreachable!() };
                match p.to_biguint(MATERIALIZE_BITS) {
                    Some(e) => Ok(dyadic_alpha_from_bigint(e.into())),
                    None => Ok(AlphaVal::scaled(BigRational::one(), p)),
                }
            }
            Family::CubeInterleavedDyadic => {
                let (blk, off) = triangular_split(n);
                Ok(dyadic_alpha_from_bigint(BigInt::from(blk).pow(3) + off))
            }
            Family::CubeInterleavedFraction => {
                let (blk, off) = triangular_split(n);
                let cube = BigUint::from(blk).pow(3);
                let frac = if off == 0 {
                    BigRational::one()
                } else {
                    let k = blk + 1 - off;
                    BigRational::new(k.into(), (k + 1).into())
                };
                if cube.bits() < 64 && cube.to_u64().unwrap() <= MATERIALIZE_BITS {
                    let e = cube.to_u64().unwrap();
                    Ok(AlphaVal::Exact(frac / BigRational::from_integer(BigInt::one() << e)))
                } else {
                    Ok(AlphaVal::scaled(frac, Pow2Sum::from_biguint(&cube)))
                }
            }
            Family::Custom { alpha, .. } => Ok(AlphaVal::Exact(alpha[n as usize].clone())),
            Family::Shifted { base, k } => base.alpha(n + k),
        }
    }

    /// alpha(n) as a metric-space entry; floats only for irrational scales.
    pub fn alpha_scalar(&self, n: u64) -> Result<metric_core::Scalar> {
        match self.alpha(n) {
            Ok(AlphaVal::Exact(v)) => Ok(metric_core::Scalar::Exact(v)),
            Ok(AlphaVal::Scaled { .. }) => Err(CantorError::SizeBudget(
                "scale too small to materialize as a distance".into(),
            )),
            Err(_) => {
                // irrational scale: certified-interval midpoint as a float
                let Mag::Log(e) = self.e_val(n)? else { unreachable!() };
                let x = metric_core::scalar::ratio_to_f64(&e.mid());
                Ok(metric_core::Scalar::Float(2f64.powf(-x)))
            }
        }
    }

    /// First level n <= limit where E(n) certifiably exceeds the bound:
    /// the on-demand witness that the scales shrink to zero.
    pub fn scale_escapes(&self, bound: &BigRational, limit: u64) -> Result<Option<u64>> {
        let mut n = 0u64;
        while n <= limit {
            if self.check_level(n).is_err() {
                return Ok(None);
            }
            if self.e_val(n)?.cmp_rational(bound) == Some(Ordering::Greater) {
                return Ok(Some(n));
            }
            n = if n == 0 { 1 } else { n.saturating_mul(2) };
        }
        Ok(None)
    }

    pub fn descriptor(&self) -> String {
        match self {
            Family::Geometric { ratio_log2, m } => {
                format!("alpha(n) = 2^-((n+1)*{ratio_log2}), m = {m}")
            }
            Family::Harmonic { m } => format!("alpha(n) = 1/(n+1), m = {m}"),
            Family::QuadraticDyadic => "alpha(n) = 2^-(n^2), m = 2".into(),
            Family::TowerPlateau => {
                "halving scales with tetration-stage crushes (desk tables plateau)".into()
            }
            Family::TowerMild => {
                "halving scales with crush stages at k(i) = 2^(2^i)".into()
            }
            Family::FactorialGiant => {
                "m_i = 2^2^((2i+2)!), crush 2^((2i+1)!) bits per level".into()
            }
            Family::SquareGiant => {
                "m_i = 2^2^((2i+2)^2), crush 2^((2i+1)^2) bits per level".into()
            }
            Family::CubeInterleavedDyadic => {
                "2^-(n^3) grid with dyadic refinements 2^-k, k <= n".into()
            }
            Family::CubeInterleavedFraction => {
                "2^-(n^3) grid with fractional refinements k/(k+1)".into()
            }
            Family::Custom { alpha, .. } => format!("explicit table, {} levels", alpha.len()),
            Family::Shifted { base, k } => format!("{} shifted by {k}", base.descriptor()),
        }
    }

    /// True when exponent arithmetic runs on symbolic power sums.
    pub fn is_giant(&self) -> bool {
        match self {
            Family::FactorialGiant | Family::SquareGiant => true,
            Family::Shifted { base, .. } => base.is_giant(),
            _ => false,
        }
    }
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn square(n: u64) -> BigInt {
    BigInt::from(n) * n
}

/// 2^(2^f) as a count when it fits the bit budget.
fn double_pow2_count(f: &BigInt) -> Option<BigUint> {
    let f = f.to_u64()?;
    if f > 40 {
        return None;
    }
    let e = 1u64 << f;
    if e <= MATERIALIZE_BITS {
        Some(BigUint::one() << e)
    } else {
        None
    }
}

fn int_log2(m: u64) -> Mag {
    if m.is_power_of_two() {
        Mag::from_u64(m.trailing_zeros() as u64)
    } else {
        Mag::Log(SeqLog::log2_of(&big(m), LOG_BITS))
    }
}

fn neg_log2(x: &BigRational) -> SeqLog {
    match SeqLog::log2_of(x, LOG_BITS) {
        SeqLog::Exact(v) => SeqLog::Exact(-v),
        SeqLog::Approx { val, err } => SeqLog::Approx { val: -val, err },
    }
}

/// 2^(-e) for integer e, exact when it materializes.
fn dyadic_alpha_from_bigint(e: BigInt) -> AlphaVal {
    if e.is_negative() {
        let mag = e.magnitude();
        assert!(mag.bits() <= 40, "unexpectedly large positive power");
        return AlphaVal::Exact(BigRational::from_integer(
            BigInt::one() << mag.to_u64().unwrap(),
        ));
    }
    match e.to_u64() {
        Some(v) if v <= MATERIALIZE_BITS => {
            AlphaVal::Exact(BigRational::new(1.into(), BigInt::one() << v))
        }
        _ => AlphaVal::scaled(BigRational::one(), Pow2Sum::from_biguint(e.magnitude())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_e(f: &Family, n: u64) -> BigRational {
        match f.e_val(n).unwrap() {
            Mag::Log(s) => s.exact().unwrap().clone(),
            Mag::Giant(_) => panic!("giant"),
        }
    }

    #[test]
    fn geometric_matches_halving_tree() {
        let f = Family::geometric(BigRational::one(), 2).unwrap();
        assert_eq!(exact_e(&f, 0), big(1));
        assert_eq!(exact_e(&f, 999), big(1000));
        let a = f.alpha(2).unwrap();
        assert_eq!(a.exact().unwrap(), &BigRational::new(1.into(), 8.into()));
    }

    #[test]
    fn harmonic_scales_are_exact_rationals() {
        let f = Family::Harmonic { m: 2 };
        assert_eq!(f.alpha(9).unwrap().exact().unwrap(), &big(10).recip());
        // E(9) = log2(10), irrational: certified interval brackets it
        let Mag::Log(e) = f.e_val(9).unwrap() else { panic!() };
        assert!(!e.is_exact());
        let v = e.to_f64();
        assert!((v - 10f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn mild_staircase_exponents() {
        let f = Family::TowerMild;
        // specials at n = 3, 5, 17, 257: budgets 2, 295, 8, 12
        assert_eq!(exact_e(&f, 2), big(3));
        assert_eq!(exact_e(&f, 3), big(5));
        assert_eq!(exact_e(&f, 4), big(6));
        assert_eq!(exact_e(&f, 5), big(301));
        assert_eq!(exact_e(&f, 17), big(320));
        assert_eq!(exact_e(&f, 257), big(571));
        assert_eq!(exact_e(&f, 10_000), big(10_314));
    }

    #[test]
    fn mild_stage_conditions_decay_geometrically() {
        // the three ratios (boundary/crush-exponent, boundary/gap,
        // crush-exponent/gap) shrink by at least 10% per stage past the
        // hand-tuned prefix, and end far below the tolerance scale
        let nine_tenths = BigRational::new(9.into(), 10.into());
        let mut prev: Option<[BigRational; 3]> = None;
        for i in 4..12 {
            let s = mild_stage(i);
            let next = mild_stage(i + 1);
            let gap = BigRational::from_integer(
                (BigInt::from(next.boundary.clone()) - BigInt::from(s.boundary.clone())) - 1,
            );
            let k = BigRational::from_integer(s.boundary.clone().into());
            let e = BigRational::from_integer(s.exponent_at_crush.clone().into());
            let ratios = [&k / &e, &k / &gap, &e / &gap];
            if let Some(p) = &prev {
                for (r, pr) in ratios.iter().zip(p) {
                    assert!(r < &(pr * &nine_tenths), "stage {i} ratio failed to shrink");
                }
            }
            prev = Some(ratios);
        }
        let last = prev.unwrap();
        assert!(last[0] < BigRational::new(1.into(), 1000.into()));
    }

    #[test]
    fn cube_interleaved_exponent_ladder() {
        let f = Family::CubeInterleavedDyadic;
        let want: Vec<u64> = vec![0, 1, 2, 8, 9, 10, 27, 28, 29, 30, 64, 65, 66, 67, 68];
        for (j, w) in want.iter().enumerate() {
            assert_eq!(exact_e(&f, j as u64), big(*w), "index {j}");
        }
        // strictly increasing across a block boundary far out
        let a = exact_e(&f, 40 * 41 / 2 + 40);
        let b = exact_e(&f, 41 * 42 / 2);
        assert_eq!(a, big(64_040));
        assert_eq!(b, big(68_921));
    }

    #[test]
    fn fraction_interleaved_scales() {
        let f = Family::CubeInterleavedFraction;
        // block 2 descends: 2^-8, (2/3) 2^-8, (1/2) 2^-8
        let vals: Vec<BigRational> = (3..6)
            .map(|j| f.alpha(j).unwrap().exact().unwrap().clone())
            .collect();
        let base = BigRational::new(1.into(), 256.into());
        assert_eq!(vals[0], base);
        assert_eq!(vals[1], &base * BigRational::new(2.into(), 3.into()));
        assert_eq!(vals[2], &base / big(2));
        // fractional steps have exact dyadic E only at the block edge
        let Mag::Log(e) = f.e_val(4).unwrap() else { panic!() };
        assert!(!e.is_exact());
        assert!((e.to_f64() - (8.0 + 0.5849625007211562)).abs() < 1e-12);
    }

    #[test]
    fn giant_exponents_stay_symbolic() {
        let f = Family::FactorialGiant;
        assert_eq!(f.m_count(0).unwrap(), Some(16u32.into()));
        assert_eq!(f.m_count(1).unwrap(), None);
        let Mag::Giant(e2) = f.e_val(2).unwrap() else { panic!() };
        // E(2) = 2^1 + 2^6 + 2^120
        assert_eq!(e2.terms(), 3);
        assert_eq!(e2.max_exp().unwrap(), &BigInt::from(120));
        assert!(matches!(f.alpha(1).unwrap(), AlphaVal::Exact(_)));
        assert!(matches!(f.alpha(2).unwrap(), AlphaVal::Scaled { .. }));
    }

    #[test]
    fn square_giant_materializes_first_counts() {
        let f = Family::SquareGiant;
        assert_eq!(f.m_count(0).unwrap(), Some(65536u32.into()));
        let m1 = f.m_count(1).unwrap().unwrap();
        assert_eq!(m1.bits(), 65537);
        assert_eq!(f.m_count(2).unwrap(), None);
    }

    #[test]
    fn triangular_split_roundtrip() {
        let mut j = 0u64;
        for n in 0..60u64 {
            for off in 0..=n {
                assert_eq!(triangular_split(j), (n, off));
                j += 1;
            }
        }
        let far = u64::MAX / 4;
        let (n, off) = triangular_split(far);
        assert!(off <= n);
        assert_eq!(n * (n + 1) / 2 + off, far);
    }

    #[test]
    fn shifted_family_reindexes() {
        let base = Family::QuadraticDyadic;
        let sh = base.clone().shifted(3);
        assert_eq!(exact_e(&sh, 0), big(9));
        assert_eq!(exact_e(&sh, 2), big(25));
    }

    #[test]
    fn alpha_ordering_is_exact_across_regimes() {
        let f = Family::FactorialGiant;
        let a1 = f.alpha(1).unwrap(); // 2^-66
        let a2 = f.alpha(2).unwrap(); // symbolic
        let a3 = f.alpha(3).unwrap();
        assert_eq!(a1.cmp_val(&a2).unwrap(), Ordering::Greater);
        assert_eq!(a2.cmp_val(&a3).unwrap(), Ordering::Greater);
        assert_eq!(a2.cmp_val(&a2).unwrap(), Ordering::Equal);
        let tiny = AlphaVal::Exact(BigRational::new(1.into(), BigInt::one() << 200));
        assert_eq!(tiny.cmp_val(&a2).unwrap(), Ordering::Greater);
    }

    #[test]
    fn escape_witness_for_shrinking_scales() {
        let f = Family::Harmonic { m: 2 };
        let n = f.scale_escapes(&big(40), 1 << 50).unwrap();
        assert!(n.is_some());
        let hit = n.unwrap();
        assert!(exact_or_mid(&f, hit) > 40.0);
    }

    fn exact_or_mid(f: &Family, n: u64) -> f64 {
        match f.e_val(n).unwrap() {
            Mag::Log(s) => s.to_f64(),
            Mag::Giant(p) => p.log2_f64().exp2(),
        }
    }
}
