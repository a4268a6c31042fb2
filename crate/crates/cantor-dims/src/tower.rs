//! Linear expressions over the tetration tower t(0)=2, t(n+1)=2^t(n), with
//! certified comparisons. t(5) already has 2^65536 bits, so values at these
//! scales never materialize; instead comparisons peel logarithms. Since
//! log2 t(n+1) = t(n) exactly, one peel turns a level-L expression into a
//! level-(L-1) expression, and after a few peels both sides fit in BigInts.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Largest tower level materialized as a BigInt: t(4) = 2^65536 takes 64 KiB.
const MATERIALIZE_LEVEL: u32 = 4;

/// Integer value sum(mult_k * t(level_k)) + constant. Terms are sorted by
/// level descending with nonzero multipliers; multipliers and the constant
/// may be negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerExpr {
    terms: Vec<(u32, BigInt)>,
    constant: BigInt,
}

fn bits_of(x: &BigInt) -> u64 {
    x.magnitude().bits()
}

/// t(level) as a BigInt, for level <= MATERIALIZE_LEVEL.
fn tower_value(level: u32) -> BigInt {
    match level {
        0 => BigInt::from(2),
        1 => BigInt::from(4),
        2 => BigInt::from(16),
        3 => BigInt::from(65536),
        4 => BigInt::one() << 65536u32,
        _ => unreachable!("tower level {level} does not materialize"),
    }
}

/// Exact log2 of t(level), as an expression: t(level-1), or 1 at level 0.
fn log2_of_tower(level: u32) -> TowerExpr {
    if level == 0 {
        TowerExpr::from_int(1)
    } else {
        TowerExpr::tower(level - 1)
    }
}

impl TowerExpr {
    pub fn zero() -> TowerExpr {
        TowerExpr { terms: Vec::new(), constant: BigInt::zero() }
    }

    pub fn from_int(c: i64) -> TowerExpr {
        TowerExpr { terms: Vec::new(), constant: BigInt::from(c) }
    }

    pub fn tower(level: u32) -> TowerExpr {
        TowerExpr { terms: vec![(level, BigInt::one())], constant: BigInt::zero() }
    }

    pub fn add(&self, other: &TowerExpr) -> TowerExpr {
        let mut terms = self.terms.clone();
        for (lvl, m) in &other.terms {
            match terms.iter_mut().find(|(l, _)| l == lvl) {
                Some((_, acc)) => *acc += m,
                None => terms.push((*lvl, m.clone())),
            }
        }
        terms.retain(|(_, m)| !m.is_zero());
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        TowerExpr { terms, constant: &self.constant + &other.constant }
    }

    pub fn sub(&self, other: &TowerExpr) -> TowerExpr {
        let negated = TowerExpr {
            terms: other.terms.iter().map(|(l, m)| (*l, -m)).collect(),
            constant: -&other.constant,
        };
        self.add(&negated)
    }

    pub fn add_int(&self, c: i64) -> TowerExpr {
        self.add(&TowerExpr::from_int(c))
    }

    /// Exact BigInt value when every tower level materializes.
    pub fn materialize(&self) -> Option<BigInt> {
        if self.terms.iter().any(|(l, _)| *l > MATERIALIZE_LEVEL) {
            return None;
        }
        let mut acc = self.constant.clone();
        for (lvl, m) in &self.terms {
            acc += m * tower_value(*lvl);
        }
        Some(acc)
    }

    /// An expression u with 2^u >= self. Always valid: drops negative terms,
    /// so the bound holds even when the value is nonpositive.
    fn log2_upper(&self) -> TowerExpr {
        let mut weight = if self.constant.is_positive() {
            self.constant.clone()
        } else {
            BigInt::zero()
        };
        let mut top: Option<u32> = None;
        for (lvl, m) in &self.terms {
            if m.is_positive() {
                weight += m;
                top = Some(top.map_or(*lvl, |t| t.max(*lvl)));
            }
        }
        match top {
            None => TowerExpr::from_int(bits_of(&weight) as i64),
            // value <= weight * t(top), so log2 <= bits(weight) + log2 t(top)
            Some(lvl) => log2_of_tower(lvl).add_int(bits_of(&weight) as i64),
        }
    }

    /// An expression l with 2^l <= self, or None when positivity cannot be
    /// certified. Requires the top-level term to dominate everything below.
    fn log2_lower(&self) -> Option<TowerExpr> {
        let Some((top_level, top_mult)) = self.terms.first() else {
            // constant expression: c >= 2^(bits-1) when c >= 1
            if self.constant.is_positive() {
                return Some(TowerExpr::from_int(bits_of(&self.constant) as i64 - 1));
            }
            return None;
        };
        if !top_mult.is_positive() {
            return None;
        }
        let lead_bits = bits_of(top_mult) as i64;
        // weight of everything below the dominant term, in absolute value
        let mut rest_weight = self.constant.abs();
        for (_, m) in &self.terms[1..] {
            rest_weight += m.abs();
        }
        if rest_weight.is_zero() {
            // exact single term: mult * t(L) >= 2^(bits(mult)-1) * t(L)
            return Some(log2_of_tower(*top_level).add_int(lead_bits - 1));
        }
        // Rest lives at levels <= L-1, so |rest| <= rest_weight * t(L-1).
        // Certify rest_weight * t(L-1) <= top_mult * t(L) / 2 by comparing
        // logs; then value >= t(L)*top_mult/2.
        if *top_level == 0 {
            return None; // no lower levels exist; materialization covers this
        }
        let need_lhs = log2_of_tower(*top_level).add_int(lead_bits - 1);
        let doubled = rest_weight << 1;
        let need_rhs = log2_of_tower(top_level - 1).add_int(bits_of(&doubled) as i64);
        if cert_ge(&need_lhs, &need_rhs) {
            Some(log2_of_tower(*top_level).add_int(lead_bits - 2))
        } else {
            None
        }
    }
}

/// Certify lhs >= rhs. Returns true only when the inequality is proven;
/// false means "not certified", which for materializable inputs coincides
/// with falsity but in general does not.
pub fn cert_ge(lhs: &TowerExpr, rhs: &TowerExpr) -> bool {
    if let (Some(a), Some(b)) = (lhs.materialize(), rhs.materialize()) {
        return a >= b;
    }
    match lhs.log2_lower() {
        Some(low) => cert_ge(&low, &rhs.log2_upper()),
        None => false,
    }
}

/// Certify lhs >= a * b without forming the product: compare logarithms.
pub fn cert_ge_product(lhs: &TowerExpr, a: &TowerExpr, b: &TowerExpr) -> bool {
    if let (Some(x), Some(p), Some(q)) = (lhs.materialize(), a.materialize(), b.materialize()) {
        return x >= p * q;
    }
    match lhs.log2_lower() {
        Some(low) => cert_ge(&low, &a.log2_upper().add(&b.log2_upper())),
        None => false,
    }
}

/// Depth at which plateau stage i ends: k(i) = t(5i+5).
pub fn stage_depth(i: u32) -> TowerExpr {
    TowerExpr::tower(5 * i + 5)
}

/// Exponent budget accumulated through the contraction at depth k(i)+1:
/// of the k(i)+2 contraction steps 0..=k(i)+1, all but i+1 halve, and one
/// t(5j+7)-fold crush fires per stage j <= i.
pub fn stage_budget(i: u32) -> TowerExpr {
    let mut e = stage_depth(i).add_int(1 - i as i64);
    for j in 0..=i {
        e = e.add(&TowerExpr::tower(5 * j + 7));
    }
    e
}

/// Gap between consecutive stage depths: k(i+1) - k(i) - 1.
pub fn stage_gap(i: u32) -> TowerExpr {
    stage_depth(i + 1).sub(&stage_depth(i)).add_int(-1)
}

/// Safety factor t(5i+2) by which each stage-i inequality must dominate.
pub fn stage_margin(i: u32) -> TowerExpr {
    TowerExpr::tower(5 * i + 2)
}

/// The three inequalities that make the lower dimensions collapse while the
/// upper ones stay pinned: the crush budget dominates the depth, and the gap
/// to the next stage dominates both, each by the stage margin.
pub fn stage_conditions_certified(i: u32) -> [bool; 3] {
    let depth = stage_depth(i);
    let budget = stage_budget(i);
    let gap = stage_gap(i);
    let margin = stage_margin(i);
    [
        cert_ge_product(&budget, &depth, &margin),
        cert_ge_product(&gap, &depth, &margin),
        cert_ge_product(&gap, &budget, &margin),
    ]
}
