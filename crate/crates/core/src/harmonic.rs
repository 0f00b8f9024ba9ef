//! Harmonic numbers, exact and approximate.
//!
//! `H_j = 1 + 1/2 + ... + 1/j` is computed exactly as a rational via binary
//! splitting; the condition evaluators compare such sums against integers by
//! cross-multiplication, with no floating point on the exact path. For large
//! `j` a high-precision asymptotic expansion is provided, and the classical
//! sandwich `ln j + 1/2 < H_j < ln j + 2/3` can be checked over a range.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::interval::Interval;

/// Largest `j` for which the sandwich scan uses exact rationals.
pub const HARMONIC_EXACT_LIMIT: u64 = 10_000;

/// Smallest `j` from which both sandwich inequalities hold for every larger
/// `j`. Pinned by [`sandwich_scan`]; asserted in tests.
pub const SANDWICH_MIN_J: u64 = 6;

/// `Σ_{i=lo}^{hi} 1/i` as an unreduced numerator/denominator pair.
/// Empty ranges (`lo > hi`) give 0/1.
pub fn range_sum_raw(lo: u64, hi: u64) -> (BigInt, BigInt) {
    if lo > hi {
        return (BigInt::zero(), BigInt::one());
    }
    if lo == hi {
        return (BigInt::one(), BigInt::from(lo));
    }
    let mid = lo + (hi - lo) / 2;
    let (n1, d1) = range_sum_raw(lo, mid);
    let (n2, d2) = range_sum_raw(mid + 1, hi);
    (&n1 * &d2 + &n2 * &d1, d1 * d2)
}

/// `Σ_{i=lo}^{hi} 1/i` as a reduced rational.
pub fn range_sum(lo: u64, hi: u64) -> BigRational {
    let (num, den) = range_sum_raw(lo, hi);
    BigRational::new(num, den)
}

/// Exact `H_j`.
pub fn harmonic(j: u64) -> BigRational {
    assert!(j >= 1, "harmonic number needs j >= 1");
    range_sum(1, j)
}

/// `H_j` to near machine precision for any `j`, via the Euler-Maclaurin
/// expansion for large `j` and direct summation below.
pub fn harmonic_f64(j: u64) -> f64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    if j == 0 {
        return 0.0;
    }
    if j < 128 {
        let mut sum = 0.0;
        let mut comp = 0.0;
        for i in 1..=j {
            let term = 1.0 / i as f64;
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        return sum;
    }
    let x = j as f64;
    let x2 = x * x;
    x.ln() + EULER_GAMMA + 1.0 / (2.0 * x) - 1.0 / (12.0 * x2) + 1.0 / (120.0 * x2 * x2)
}

/// Enclosure of a possibly huge positive fraction as an `f64` interval.
fn big_ratio_interval(num: &BigInt, den: &BigInt) -> Interval {
    assert!(num.is_positive() && den.is_positive());
    // shift both down so the larger fits well inside f64 range
    let bits = num.bits().max(den.bits());
    let shift = bits.saturating_sub(512);
    let n = (num >> shift).to_f64().unwrap_or(f64::MAX);
    let d = (den >> shift).to_f64().unwrap_or(f64::MAX);
    // the shift floors both operands; 16 ulps dwarfs that plus rounding
    let q = n / d;
    let mut lo = q;
    let mut hi = q;
    for _ in 0..16 {
        lo = f64::from_bits(lo.to_bits() - 1);
        hi = f64::from_bits(hi.to_bits() + 1);
    }
    Interval { lo, hi }
}

fn sandwich_holds_interval(h: Interval, j: u64) -> Option<bool> {
    let lnj = Interval::from_u64(j).ln();
    let half = Interval::exact(1.0) / Interval::exact(2.0);
    let two_thirds = Interval::exact(2.0) / Interval::exact(3.0);
    let lower_ok = (lnj + half).lt(h)?;
    let upper_ok = h.lt(lnj + two_thirds)?;
    Some(lower_ok && upper_ok)
}

/// Whether `ln j + 1/2 < H_j < ln j + 2/3`, exactly backed for
/// `j <= HARMONIC_EXACT_LIMIT`.
pub fn sandwich_holds(j: u64) -> bool {
    assert!(j >= 1);
    let h = if j <= HARMONIC_EXACT_LIMIT {
        let (num, den) = range_sum_raw(1, j);
        big_ratio_interval(&num, &den)
    } else {
        let v = harmonic_f64(j);
        Interval { lo: v - 1e-9, hi: v + 1e-9 }
    };
    // margins are ~1e-2 at worst; an undecided comparison means a bug
    sandwich_holds_interval(h, j).expect("sandwich margins dwarf interval widths")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichReport {
    /// Smallest `j` such that the sandwich holds for every `j' in [j, checked_to]`.
    pub minimal_j: u64,
    pub checked_to: u64,
    /// Upper end of the exact-rational segment of the scan.
    pub exact_to: u64,
}

/// Scans `j = 1..=max_j`, exact rationals up to [`HARMONIC_EXACT_LIMIT`] and
/// high-precision floats beyond, and reports the minimal threshold.
pub fn sandwich_scan(max_j: u64) -> SandwichReport {
    assert!(max_j >= 1);
    let mut last_violation = 0u64;
    // incremental unreduced H_j for the exact segment
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    let exact_to = max_j.min(HARMONIC_EXACT_LIMIT);
    for j in 1..=exact_to {
        let jj = BigInt::from(j);
        num = &num * &jj + &den;
        den *= jj;
        let h = big_ratio_interval(&num, &den);
        if !sandwich_holds_interval(h, j).expect("decidable") {
            last_violation = j;
        }
    }
    for j in exact_to + 1..=max_j {
        let v = harmonic_f64(j);
        let h = Interval { lo: v - 1e-9, hi: v + 1e-9 };
        if !sandwich_holds_interval(h, j).expect("decidable") {
            last_violation = j;
        }
    }
    SandwichReport {
        minimal_j: last_violation + 1,
        checked_to: max_j,
        exact_to,
    }
}
