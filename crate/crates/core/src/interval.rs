//! Tiny directed-rounding interval arithmetic over `f64`.
//!
//! Used by the closed-form condition evaluators to make log-based comparisons
//! trustworthy: every operation widens its result outward by a few ulps, so a
//! comparison that comes back decided is decided for the true real values.
//! `f64` ops are correctly rounded (0.5 ulp); `ln` from libm is assumed within
//! 1 ulp, and gets extra widening.

use std::cmp::Ordering;

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let bits = x.to_bits();
    f64::from_bits(if x > 0.0 { bits + 1 } else { bits - 1 })
}

fn next_down(x: f64) -> f64 {
    -next_up(-x)
}

fn widen(lo: f64, hi: f64, ulps: u32) -> Interval {
    let mut lo = lo;
    let mut hi = hi;
    for _ in 0..ulps {
        lo = next_down(lo);
        hi = next_up(hi);
    }
    Interval { lo, hi }
}

impl Interval {
    pub fn exact(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Exact for |x| < 2^53, otherwise widened by a ulp on each side.
    pub fn from_i128(x: i128) -> Self {
        let f = x as f64;
        if x.unsigned_abs() <= (1u128 << 53) {
            Interval::exact(f)
        } else {
            widen(f, f, 1)
        }
    }

    pub fn from_u64(x: u64) -> Self {
        Interval::from_i128(x as i128)
    }

    /// Natural log; requires a strictly positive interval.
    pub fn ln(self) -> Interval {
        assert!(self.lo > 0.0, "interval ln of a non-positive range");
        widen(self.lo.ln(), self.hi.ln(), 2)
    }

    /// `None` when the intervals overlap and the order is undecidable.
    pub fn compare(self, other: Interval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && other.lo == other.hi && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Decides `self < other` if possible.
    pub fn lt(self, other: Interval) -> Option<bool> {
        match self.compare(other) {
            Some(Ordering::Less) => Some(true),
            Some(_) => Some(false),
            None => None,
        }
    }

    /// Decides `self >= other` if possible.
    pub fn ge(self, other: Interval) -> Option<bool> {
        self.lt(other).map(|b| !b)
    }

    /// The unique integer ceiling, when the whole interval agrees on it.
    pub fn ceil_unique(self) -> Option<i64> {
        let clo = self.lo.ceil();
        let chi = self.hi.ceil();
        if clo == chi && clo.abs() < 9e15 {
            Some(clo as i64)
        } else {
            None
        }
    }

    pub fn midpoint(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

impl std::ops::Add for Interval {
    type Output = Interval;
    fn add(self, other: Interval) -> Interval {
        widen(self.lo + other.lo, self.hi + other.hi, 1)
    }
}

impl std::ops::Sub for Interval {
    type Output = Interval;
    fn sub(self, other: Interval) -> Interval {
        widen(self.lo - other.hi, self.hi - other.lo, 1)
    }
}

impl std::ops::Mul for Interval {
    type Output = Interval;
    fn mul(self, other: Interval) -> Interval {
        let products = [
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        ];
        let lo = products.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = products.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        widen(lo, hi, 1)
    }
}

/// Division panics when the divisor straddles zero.
impl std::ops::Div for Interval {
    type Output = Interval;
    fn div(self, other: Interval) -> Interval {
        assert!(
            other.lo > 0.0 || other.hi < 0.0,
            "interval division by a range containing zero"
        );
        let quotients = [
            self.lo / other.lo,
            self.lo / other.hi,
            self.hi / other.lo,
            self.hi / other.hi,
        ];
        let lo = quotients.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = quotients.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        widen(lo, hi, 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_encloses() {
        let a = Interval::exact(1.0) / Interval::exact(3.0);
        assert!(a.lo < 1.0 / 3.0 + 1e-16 && a.hi > 1.0 / 3.0 - 1e-16);
        assert!(a.lo <= a.hi);
        let b = a * Interval::exact(3.0);
        assert!(b.lo <= 1.0 && 1.0 <= b.hi);
    }

    #[test]
    fn comparisons() {
        let lo = Interval { lo: 1.0, hi: 2.0 };
        let hi = Interval { lo: 3.0, hi: 4.0 };
        assert_eq!(lo.lt(hi), Some(true));
        assert_eq!(hi.lt(lo), Some(false));
        let overlap = Interval { lo: 1.5, hi: 3.5 };
        assert_eq!(lo.lt(overlap), None);
        assert_eq!(lo.ge(hi), Some(false));
    }

    #[test]
    fn ceil_detection() {
        assert_eq!(Interval { lo: 2.1, hi: 2.2 }.ceil_unique(), Some(3));
        assert_eq!(Interval { lo: 1.999, hi: 2.001 }.ceil_unique(), None);
    }

    #[test]
    fn ln_encloses() {
        let e = Interval::exact(std::f64::consts::E);
        let l = e.ln();
        assert!(l.lo <= 1.0 && 1.0 <= l.hi);
    }
}
