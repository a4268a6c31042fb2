//! Distance values: exact non-negative rationals where the construction
//! permits, binary64 otherwise. Arithmetic degrades from exact to float only
//! when an operand is already a float or an operation leaves the rationals.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// A distance value. `Exact` holds an arbitrary-precision rational; `Float`
/// holds a finite binary64. Comparisons between the two convert the exact
/// side to f64, so mixed matrices should be compared with a tolerance
/// (see [`Scalar::approx_eq`]).
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Exact dyadic 2^exp.
    pub fn pow2(exp: i64) -> Self {
        let one = BigInt::one();
        if exp >= 0 {
            Scalar::Exact(BigRational::from_integer(one << exp as usize))
        } else {
            Scalar::Exact(BigRational::new(one, BigInt::one() << (-exp) as usize))
        }
    }

    pub fn from_f64(x: f64) -> Self {
        Scalar::Float(x)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Float(x) => *x < 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Scalar::Exact(_) => true,
            Scalar::Float(x) => x.is_finite(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => ratio_to_f64(r),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            _ => Scalar::Float(self.to_f64() + other.to_f64()),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        // An exact zero annihilates even a float operand; quotient classes
        // rely on collapsed distances being exactly zero.
        if let Scalar::Exact(r) = self {
            if r.is_zero() {
                return Scalar::zero();
            }
        }
        if let Scalar::Exact(r) = other {
            if r.is_zero() {
                return Scalar::zero();
            }
        }
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            _ => Scalar::Float(self.to_f64() * other.to_f64()),
        }
    }

    pub fn mul_ratio(&self, r: &BigRational) -> Scalar {
        self.mul(&Scalar::Exact(r.clone()))
    }

    /// |self - other|.
    pub fn sub_abs(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact((a - b).abs()),
            _ => Scalar::Float((self.to_f64() - other.to_f64()).abs()),
        }
    }

    pub fn halve(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r / BigRational::from_integer(BigInt::from(2))),
            Scalar::Float(x) => Scalar::Float(x / 2.0),
        }
    }

    pub fn double(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r * BigRational::from_integer(BigInt::from(2))),
            Scalar::Float(x) => Scalar::Float(x * 2.0),
        }
    }

    /// self^gamma for rational gamma > 0. Stays exact when the reduced
    /// numerator and denominator have exact roots; otherwise falls to f64.
    pub fn pow_ratio(&self, gamma: &BigRational) -> Scalar {
        assert!(gamma.is_positive(), "exponent must be positive");
        match self {
            Scalar::Exact(r) => {
                if r.is_zero() {
                    return Scalar::zero();
                }
                if r.is_one() {
                    return Scalar::one();
                }
                let p = gamma.numer();
                let q = gamma.denom();
                if let (Some(p), Some(q)) = (p.to_i64(), q.to_u32()) {
                    if let Some(exact) = exact_root_pow(r, p, q) {
                        return Scalar::Exact(exact);
                    }
                }
                Scalar::Float(ratio_to_f64(r).powf(ratio_to_f64(gamma)))
            }
            Scalar::Float(x) => Scalar::Float(x.powf(ratio_to_f64(gamma))),
        }
    }

    /// self^(1/p) combined p-sum helper: (self^p + other^p)^(1/p) for p >= 1.
    /// Exact for p = 1; float otherwise (p = infinity is `max`, not this).
    pub fn p_sum(&self, other: &Scalar, p: f64) -> Scalar {
        if p == 1.0 {
            return self.add(other);
        }
        let a = self.to_f64();
        let b = other.to_f64();
        Scalar::Float((a.powf(p) + b.powf(p)).powf(1.0 / p))
    }

    pub fn cmp_val(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => self.to_f64().total_cmp(&other.to_f64()),
        }
    }

    /// Equality with tolerance; exact pairs compare exactly.
    pub fn approx_eq(&self, other: &Scalar, tol: f64) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() <= tol,
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_val(other) == Ordering::Equal
    }
}
impl Eq for Scalar {}
impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_val(other))
    }
}
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_val(other)
    }
}

/// Ratio -> f64 that survives magnitudes far outside f64 exponent range
/// (falls back to sign * 0/inf rather than NaN).
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(x) = r.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    // bit-length based estimate: r = n/d, log2 |r| = bits(n) - bits(d) approx
    if r.is_zero() {
        return 0.0;
    }
    let n_bits = r.numer().magnitude().bits() as i64;
    let d_bits = r.denom().magnitude().bits() as i64;
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    if n_bits - d_bits > 1024 {
        sign * f64::INFINITY
    } else if d_bits - n_bits > 1100 {
        sign * 0.0
    } else {
        // should have been representable; re-derive via shifted division
        let shift = 64i64;
        let num = r.numer() << shift as usize;
        let q = num / r.denom();
        q.to_f64().map(|v| v / 2f64.powi(shift as i32)).unwrap_or(sign * f64::INFINITY)
    }
}

fn exact_root_pow(r: &BigRational, p: i64, q: u32) -> Option<BigRational> {
    if q == 0 {
        return None;
    }
    let root = |n: &BigInt| -> Option<BigInt> {
        if n.sign() == Sign::Minus {
            return None;
        }
        let m = n.magnitude();
        let candidate = m.nth_root(q);
        if candidate.pow(q) == *m {
            Some(BigInt::from(candidate))
        } else {
            None
        }
    };
    let rn = root(r.numer())?;
    let rd = root(r.denom())?;
    let base = BigRational::new(rn, rd);
    let powed = if p >= 0 {
        pow_big(&base, p as u64)
    } else {
        let x = pow_big(&base, (-p) as u64);
        if x.is_zero() {
            return None;
        }
        x.recip()
    };
    Some(powed)
}

fn pow_big(base: &BigRational, mut exp: u64) -> BigRational {
    let mut result = BigRational::one();
    let mut acc = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            result *= &acc;
        }
        exp >>= 1;
        if exp > 0 {
            acc = &acc * &acc;
        }
    }
    result
}

/// Renders an exact rational as a terminating decimal string when the reduced
/// denominator is 2^a * 5^b and the expansion is short; otherwise "p/q".
pub fn format_exact(r: &BigRational) -> String {
    if let Some(dec) = decimal_string(r, 60) {
        dec
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn decimal_string(r: &BigRational, max_digits: usize) -> Option<String> {
    let mut den = r.denom().magnitude().clone();
    let two = BigUint::from(2u32);
    let five = BigUint::from(5u32);
    let mut a = 0usize;
    let mut b = 0usize;
    while (&den % &two).is_zero() {
        den /= &two;
        a += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        b += 1;
    }
    if !den.is_one() {
        return None;
    }
    let m = a.max(b);
    if m > max_digits {
        return None;
    }
    // scale numerator so the denominator becomes 10^m
    let scaled = r.numer().magnitude() * two.pow((m - a) as u32) * five.pow((m - b) as u32);
    let digits = scaled.to_string();
    if digits.len() > max_digits + m {
        return None;
    }
    let negative = r.is_negative();
    let body = if m == 0 {
        digits
    } else if digits.len() > m {
        let (int_part, frac_part) = digits.split_at(digits.len() - m);
        format!("{int_part}.{frac_part}")
    } else {
        format!("0.{}{}", "0".repeat(m - digits.len()), digits)
    };
    Some(if negative { format!("-{body}") } else { body })
}

/// Parses "p/q", a decimal string, or an integer string into an exact rational.
pub fn parse_exact(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s),
    };
    if let Some((int_part, frac_part)) = body.split_once('.') {
        if !frac_part.chars().all(|c| c.is_ascii_digit()) || frac_part.is_empty() {
            return None;
        }
        let int_part = if int_part.is_empty() { "0" } else { int_part };
        let int: BigInt = int_part.parse().ok()?;
        let frac: BigInt = frac_part.parse().ok()?;
        let den = BigInt::from(10).pow(frac_part.len() as u32);
        let val = BigRational::from_integer(int) + BigRational::new(frac, den);
        Some(BigRational::from_integer(BigInt::from(sign)) * val)
    } else {
        let n: BigInt = body.parse().ok()?;
        Some(BigRational::from_integer(BigInt::from(sign) * n))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}", format_exact(r)),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => serializer.serialize_str(&format_exact(r)),
            Scalar::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

struct ScalarVisitor;

impl<'de> Visitor<'de> for ScalarVisitor {
    type Value = Scalar;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a number, or a decimal / \"p/q\" string")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Scalar, E> {
        if !v.is_finite() {
            return Err(E::custom("non-finite distance"));
        }
        Ok(Scalar::Float(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Scalar, E> {
        Ok(Scalar::from_int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Scalar, E> {
        Ok(Scalar::Exact(BigRational::from_integer(BigInt::from(v))))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Scalar, E> {
        parse_exact(v)
            .map(Scalar::Exact)
            .ok_or_else(|| E::custom(format!("unparseable distance {v:?}")))
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Scalar, D::Error> {
        deserializer.deserialize_any(ScalarVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_stays_exact() {
        let a = Scalar::from_ratio(1, 3);
        let b = Scalar::from_ratio(1, 6);
        assert_eq!(a.add(&b), Scalar::from_ratio(1, 2));
        assert!(a.add(&b).is_exact());
    }

    #[test]
    fn mixed_arithmetic_degrades() {
        let a = Scalar::from_ratio(1, 2);
        let b = Scalar::from_f64(0.25);
        assert!(!a.add(&b).is_exact());
        assert!((a.add(&b).to_f64() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn exact_zero_annihilates_floats() {
        let z = Scalar::zero();
        let f = Scalar::from_f64(0.123456);
        let prod = z.mul(&f);
        assert!(prod.is_exact() && prod.is_zero());
    }

    #[test]
    fn sqrt_of_dyadic_square_is_exact() {
        // d = 4, gamma = 1/2 -> 2
        let four = Scalar::from_int(4);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(four.pow_ratio(&half), Scalar::from_int(2));
        assert!(four.pow_ratio(&half).is_exact());
    }

    #[test]
    fn sqrt_of_two_degrades_to_float() {
        let two = Scalar::from_int(2);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let r = two.pow_ratio(&half);
        assert!(!r.is_exact());
        assert!((r.to_f64() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(format_exact(&BigRational::new(BigInt::from(101), BigInt::from(200))), "0.505");
        assert_eq!(format_exact(&BigRational::new(BigInt::from(1), BigInt::from(3))), "1/3");
        assert_eq!(format_exact(&BigRational::from_integer(BigInt::from(7))), "7");
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0.505", "1/3", "7", "-0.25", "12.0625"] {
            let r = parse_exact(s).unwrap();
            let back = parse_exact(&format_exact(&r)).unwrap();
            assert_eq!(r, back);
        }
    }

    #[test]
    fn tiny_dyadic_to_f64_underflows_cleanly() {
        let tiny = Scalar::pow2(-2000);
        assert_eq!(tiny.to_f64(), 0.0);
        assert!(!tiny.is_zero());
    }
}
