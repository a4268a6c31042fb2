//! Certified base-2 logarithms of positive rationals via fixed-point
//! squaring. Used where a sequence's exponents are not themselves rational
//! (e.g. scale sequences like 1/(n+1)).

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Default precision of log approximations, in fractional bits.
pub const LOG_BITS: u32 = 120;

/// log2 of a positive rational with a certified absolute error bound:
/// returns (v, e) with |log2(x) - v| <= e. The bound comes from counting
/// one truncation of at most one ulp per squaring step.
pub fn log2_interval(x: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(x.is_positive(), "log2 needs a positive argument");
    // normalize x = m * 2^e with m in [1, 2)
    let mut e: i64 = 0;
    let mut num = x.numer().magnitude().clone();
    let mut den = x.denom().magnitude().clone();
    while num < den {
        num <<= 1;
        e -= 1;
    }
    while num >= (&den << 1) {
        den <<= 1;
        e += 1;
    }
    // fixed-point mantissa with guard bits: m ~ mant / 2^G, mant in [2^G, 2^{G+1}).
    // Relative truncation error doubles per squaring, so the guard must cover
    // 2^bits amplification with room to spare.
    let g: u32 = 2 * bits + 16;
    let mant0 = (num << g) / &den;
    let mut mant = mant0;
    let mut frac = BigUint::zero();
    for _ in 0..bits {
        mant = (&mant * &mant) >> g; // square, renormalize; truncates
        frac <<= 1;
        if mant.bits() as u32 > g + 1 {
            mant >>= 1;
            frac += 1u32;
        }
    }
    // amplified truncation error stays below 2^{bits+2-G} = 2^{-bits-14};
    // the dominant term is the 2^-bits quantization of frac itself
    let val = BigRational::from_integer(BigInt::from(e))
        + BigRational::new(BigInt::from(frac), BigInt::from(BigUint::one() << bits));
    let err = BigRational::new(BigInt::one(), BigInt::from(BigUint::one() << (bits - 1)));
    (val, err)
}

/// An exponent-domain quantity: exact rational, or a rational approximation
/// with a certified absolute error bound.
#[derive(Clone, Debug)]
pub enum SeqLog {
    Exact(BigRational),
    Approx { val: BigRational, err: BigRational },
}

impl SeqLog {
    pub fn zero() -> SeqLog {
        SeqLog::Exact(BigRational::zero())
    }

    pub fn from_int(n: i64) -> SeqLog {
        SeqLog::Exact(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> SeqLog {
        SeqLog::Exact(BigRational::from_integer(n))
    }

    /// log2 of a positive rational, exact for powers of two.
    pub fn log2_of(x: &BigRational, bits: u32) -> SeqLog {
        if let Some(e) = dyadic_log2(x) {
            return SeqLog::from_bigint(e);
        }
        let (val, err) = log2_interval(x, bits);
        SeqLog::Approx { val, err }
    }

    pub fn lo(&self) -> BigRational {
        match self {
            SeqLog::Exact(v) => v.clone(),
            SeqLog::Approx { val, err } => val - err,
        }
    }

    pub fn hi(&self) -> BigRational {
        match self {
            SeqLog::Exact(v) => v.clone(),
            SeqLog::Approx { val, err } => val + err,
        }
    }

    pub fn mid(&self) -> BigRational {
        match self {
            SeqLog::Exact(v) | SeqLog::Approx { val: v, .. } => v.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, SeqLog::Exact(_))
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            SeqLog::Exact(v) => Some(v),
            SeqLog::Approx { .. } => None,
        }
    }

    pub fn add(&self, other: &SeqLog) -> SeqLog {
        match (self, other) {
            (SeqLog::Exact(a), SeqLog::Exact(b)) => SeqLog::Exact(a + b),
            _ => SeqLog::Approx {
                val: self.mid() + other.mid(),
                err: (self.hi() - self.mid()) + (other.hi() - other.mid()),
            },
        }
    }

    /// self / other for positive quantities, as a certified interval.
    pub fn ratio(&self, other: &SeqLog) -> SeqLog {
        match (self, other) {
            (SeqLog::Exact(a), SeqLog::Exact(b)) => {
                assert!(!b.is_zero(), "ratio by zero exponent");
                SeqLog::Exact(a / b)
            }
            _ => {
                let (nlo, nhi) = (self.lo(), self.hi());
                let (dlo, dhi) = (other.lo(), other.hi());
                assert!(dlo.is_positive(), "interval denominator must stay positive");
                let lo = &nlo / &dhi;
                let hi = &nhi / &dlo;
                let val = (&lo + &hi) / BigRational::from_integer(2.into());
                let err = (&hi - &lo) / BigRational::from_integer(2.into());
                SeqLog::Approx { val, err }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        metric_core::scalar::ratio_to_f64(&self.mid())
    }

    /// True when the whole interval sits strictly above the bound.
    pub fn certainly_gt(&self, bound: &BigRational) -> bool {
        self.lo() > *bound
    }

    /// True when the whole interval sits strictly below the bound.
    pub fn certainly_lt(&self, bound: &BigRational) -> bool {
        self.hi() < *bound
    }
}

/// Exact log2 of x when x is a power of two (2^k for integer k).
pub fn dyadic_log2(x: &BigRational) -> Option<BigInt> {
    if !x.is_positive() {
        return None;
    }
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    let pow2 = |n: &BigUint| -> Option<u64> {
        if n.count_ones() == 1 {
            Some(n.trailing_zeros().unwrap_or(0))
        } else {
            None
        }
    };
    match (pow2(num), pow2(den)) {
        (Some(a), Some(b)) => Some(BigInt::from(a) - BigInt::from(b)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn dyadic_logs_are_exact() {
        assert_eq!(dyadic_log2(&rat(8, 1)), Some(3.into()));
        assert_eq!(dyadic_log2(&rat(1, 1024)), Some((-10).into()));
        assert_eq!(dyadic_log2(&rat(3, 1)), None);
        assert_eq!(dyadic_log2(&rat(6, 3)), Some(1.into())); // reduces to 2
    }

    #[test]
    fn log2_interval_brackets_known_values() {
        // log2(3) = 1.5849625007211562...
        let (v, e) = log2_interval(&rat(3, 1), 120);
        let val = metric_core::scalar::ratio_to_f64(&v);
        assert!((val - 1.5849625007211562).abs() < 1e-15);
        assert!(metric_core::scalar::ratio_to_f64(&e) < 1e-30);
        // exactness on powers of two through the generic path too
        let (v8, _) = log2_interval(&rat(8, 1), 60);
        assert!((metric_core::scalar::ratio_to_f64(&v8) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn interval_ratio_brackets_truth() {
        // log2(10)/log2(3) = log_3(10); exact integer powers pin the coarse
        // bracket 44/21 < log_3(10) < 65/31, and the certified interval must
        // land strictly inside it
        let three = BigUint::from(3u32);
        let ten = BigUint::from(10u32);
        assert!(three.pow(44) < ten.pow(21));
        assert!(three.pow(65) > ten.pow(31));

        let a = SeqLog::log2_of(&rat(10, 1), 120);
        let b = SeqLog::log2_of(&rat(3, 1), 120);
        let r = a.ratio(&b);
        assert!(r.lo() < r.hi());
        assert!(r.lo() > rat(44, 21));
        assert!(r.hi() < rat(65, 31));
        // more precision tightens the enclosure without losing overlap
        let fine = SeqLog::log2_of(&rat(10, 1), 200).ratio(&SeqLog::log2_of(&rat(3, 1), 200));
        assert!(fine.hi() - fine.lo() < r.hi() - r.lo());
        assert!(fine.lo() <= r.hi() && r.lo() <= fine.hi());
        let truth = 10f64.log2() / 3f64.log2();
        assert!((r.to_f64() - truth).abs() < 1e-12);
    }
}
