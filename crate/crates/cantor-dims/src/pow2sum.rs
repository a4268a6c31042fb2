//! Exact sums of powers of two whose exponents are arbitrary-precision
//! integers. Scale sequences like 2^{-2^{n!}} produce exponents far beyond
//! any positional representation, but sums of a few such powers still
//! compare exactly: with distinct exponents, comparison is lexicographic.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::BTreeSet;

/// A non-negative value Σ 2^{e_k} with distinct BigInt exponents, sorted
/// descending. Empty sum = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pow2Sum {
    exps: Vec<BigInt>,
}

impl Pow2Sum {
    pub fn zero() -> Pow2Sum {
        Pow2Sum { exps: Vec::new() }
    }

    pub fn from_exp(e: BigInt) -> Pow2Sum {
        Pow2Sum { exps: vec![e] }
    }

    /// Binary expansion of an ordinary integer.
    pub fn from_biguint(n: &BigUint) -> Pow2Sum {
        let mut exps = Vec::new();
        for bit in (0..n.bits()).rev() {
            if n.bit(bit) {
                exps.push(BigInt::from(bit));
            }
        }
        Pow2Sum { exps }
    }

    pub fn is_zero(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn terms(&self) -> usize {
        self.exps.len()
    }

    pub fn max_exp(&self) -> Option<&BigInt> {
        self.exps.first()
    }

    /// Merge with binary carries (2^e + 2^e = 2^{e+1}). Each incoming
    /// exponent cascades upward until it lands on a free slot, so the
    /// distinct-exponents invariant is preserved.
    pub fn add(&self, other: &Pow2Sum) -> Pow2Sum {
        let mut set: BTreeSet<BigInt> = self.exps.iter().cloned().collect();
        for e in &other.exps {
            let mut cur = e.clone();
            while set.contains(&cur) {
                set.remove(&cur);
                cur += 1;
            }
            set.insert(cur);
        }
        Pow2Sum { exps: set.into_iter().rev().collect() }
    }

    /// Product: pairwise exponent sums, then carry-merge.
    pub fn mul(&self, other: &Pow2Sum) -> Pow2Sum {
        let mut acc = Pow2Sum::zero();
        for a in &self.exps {
            let shifted = Pow2Sum { exps: other.exps.iter().map(|b| a + b).collect() };
            acc = acc.add(&shifted);
        }
        acc
    }

    pub fn mul_int(&self, k: &BigUint) -> Pow2Sum {
        self.mul(&Pow2Sum::from_biguint(k))
    }

    /// Exact comparison: sums of distinct powers of two compare like binary
    /// numerals, i.e. lexicographically on the descending exponent lists.
    pub fn cmp_val(&self, other: &Pow2Sum) -> Ordering {
        let mut i = 0;
        loop {
            match (self.exps.get(i), other.exps.get(i)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(a), Some(b)) => match a.cmp(b) {
                    Ordering::Equal => i += 1,
                    ord => return ord,
                },
            }
        }
    }

    /// Approximate log2 as f64; exact leading exponent plus the fractional
    /// correction from lower terms (clamped when they underflow).
    pub fn log2_f64(&self) -> f64 {
        let top = match self.exps.first() {
            None => return f64::NEG_INFINITY,
            Some(t) => t,
        };
        let lead = top.to_f64().unwrap_or(f64::INFINITY);
        let mut rest = 1.0f64;
        for e in &self.exps[1..] {
            let gap = (e - top).to_f64().unwrap_or(f64::NEG_INFINITY);
            rest += 2f64.powf(gap);
        }
        lead + rest.log2()
    }

    /// Materialize as an integer when the leading exponent is small enough.
    pub fn to_biguint(&self, max_bits: u64) -> Option<BigUint> {
        let top = self.max_exp()?;
        let bits = top.to_u64()?;
        if bits + 1 > max_bits {
            return None;
        }
        let mut n = BigUint::zero();
        for e in &self.exps {
            n.set_bit(e.to_u64()?, true);
        }
        Some(n)
    }
}

impl PartialOrd for Pow2Sum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_val(other))
    }
}
impl Ord for Pow2Sum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_val(other)
    }
}
