//! Closed floating-point intervals with outward rounding.
//!
//! Arithmetic widens every endpoint by one ulp. Elementary functions call
//! the platform libm and widen by `LIBM_ULPS` ulps, which covers the
//! documented error of glibc's sin, cos, atan and asin (≤ 1 ulp).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

pub const LIBM_ULPS: usize = 4;

#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64, ulps: usize) -> f64 {
    (0..ulps).fold(x, |v, _| v.next_down())
}

fn up(x: f64, ulps: usize) -> f64 {
    (0..ulps).fold(x, |v, _| v.next_up())
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Enclosure of a value known to within one rounding of `x`.
    pub fn around(x: f64) -> Self {
        Interval {
            lo: x.next_down(),
            hi: x.next_up(),
        }
    }

    pub fn pi() -> Self {
        Self::around(std::f64::consts::PI)
    }

    pub fn sqrt3() -> Self {
        Self::around(3f64.sqrt())
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Intersection, or `None` when disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn scale(&self, k: f64) -> Interval {
        *self * Interval::point(k)
    }

    pub fn abs_max(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    fn libm(lo: f64, hi: f64) -> Interval {
        Interval {
            lo: down(lo, LIBM_ULPS),
            hi: up(hi, LIBM_ULPS),
        }
    }

    pub fn sqrt(&self) -> Interval {
        // IEEE sqrt is correctly rounded
        let lo = self.lo.max(0.0);
        let hi = self.hi.max(0.0);
        Interval {
            lo: lo.sqrt().next_down().max(0.0),
            hi: hi.sqrt().next_up(),
        }
    }

    /// 1/x for x ≥ 0; the upper end is +∞ when the interval reaches 0.
    pub fn recip_nonneg(&self) -> Interval {
        assert!(self.lo >= 0.0, "recip_nonneg of {self:?}");
        let lo = if self.hi.is_infinite() { 0.0 } else { (1.0 / self.hi).next_down().max(0.0) };
        let hi = if self.lo == 0.0 { f64::INFINITY } else { (1.0 / self.lo).next_up() };
        Interval { lo, hi }
    }

    /// Critical points c + kπ met by the interval, conservatively.
    fn meets(&self, c: f64, k_parity: i64) -> bool {
        let pi = std::f64::consts::PI;
        let kmin = ((self.lo - c) / pi - 1e-9).ceil() as i64;
        let kmax = ((self.hi - c) / pi + 1e-9).floor() as i64;
        (kmin..=kmax).any(|k| k.rem_euclid(2) == k_parity)
    }

    pub fn sin(&self) -> Interval {
        if self.width() >= 2.0 * std::f64::consts::PI {
            return Interval::new(-1.0, 1.0);
        }
        let (a, b) = (self.lo.sin(), self.hi.sin());
        let mut r = Self::libm(a.min(b), a.max(b));
        let half_pi = std::f64::consts::FRAC_PI_2;
        if self.meets(half_pi, 0) {
            r.hi = 1.0;
        }
        if self.meets(half_pi, 1) {
            r.lo = -1.0;
        }
        r.clamp_unit()
    }

    pub fn cos(&self) -> Interval {
        if self.width() >= 2.0 * std::f64::consts::PI {
            return Interval::new(-1.0, 1.0);
        }
        let (a, b) = (self.lo.cos(), self.hi.cos());
        let mut r = Self::libm(a.min(b), a.max(b));
        if self.meets(0.0, 0) {
            r.hi = 1.0;
        }
        if self.meets(0.0, 1) {
            r.lo = -1.0;
        }
        r.clamp_unit()
    }

    fn clamp_unit(self) -> Interval {
        Interval {
            lo: self.lo.max(-1.0),
            hi: self.hi.min(1.0),
        }
    }

    pub fn atan(&self) -> Interval {
        Self::libm(self.lo.atan(), self.hi.atan())
    }

    /// asin on the part of the interval inside [−1, 1].
    pub fn asin(&self) -> Interval {
        let lo = self.lo.max(-1.0);
        let hi = self.hi.min(1.0);
        assert!(lo <= hi, "asin outside [-1, 1]: {self:?}");
        Self::libm(lo.asin(), hi.asin())
    }

    /// acos on the part of the interval inside [−1, 1].
    pub fn acos(&self) -> Interval {
        let lo = self.lo.max(-1.0);
        let hi = self.hi.min(1.0);
        assert!(lo <= hi, "acos outside [-1, 1]: {self:?}");
        let r = Self::libm(hi.acos(), lo.acos());
        Interval {
            lo: r.lo.max(0.0),
            hi: r.hi,
        }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: (self.lo + rhs.lo).next_down(),
            hi: (self.hi + rhs.hi).next_up(),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: (self.lo - rhs.hi).next_down(),
            hi: (self.hi - rhs.lo).next_up(),
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

/// Product where 0 · ∞ counts as 0 (the zero is exact).
fn prod(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let c = [
            prod(self.lo, rhs.lo),
            prod(self.lo, rhs.hi),
            prod(self.hi, rhs.lo),
            prod(self.hi, rhs.hi),
        ];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval {
            lo: lo.next_down(),
            hi: hi.next_up(),
        }
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, rhs: Interval) -> Interval {
        assert!(!rhs.contains_zero(), "division by {rhs:?}");
        let r = Interval {
            lo: (1.0 / rhs.hi).next_down(),
            hi: (1.0 / rhs.lo).next_up(),
        };
        self * r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    #[test]
    fn pi_encloses_known_digits() {
        let p = Interval::pi();
        assert!(p.lo < PI && PI < p.hi);
        assert!(p.width() < 1e-15);
    }

    #[test]
    fn sin_handles_extrema() {
        let s = Interval::new(1.0, 2.0).sin();
        assert_eq!(s.hi, 1.0);
        assert!(s.contains(1f64.sin()) && s.contains(2f64.sin()));
        let c = Interval::new(-0.1, 0.1).cos();
        assert_eq!(c.hi, 1.0);
        assert!(c.lo <= 0.1f64.cos());
        let s = Interval::new(FRAC_PI_2 + 0.1, 3.0 * FRAC_PI_2 + 0.1).sin();
        assert_eq!(s.lo, -1.0);
        assert!(s.hi < 1.0 && s.contains((FRAC_PI_2 + 0.1).sin()));
    }

    #[test]
    fn encloses_random_samples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let a: f64 = rng.gen_range(-4.0..4.0);
            let w: f64 = rng.gen_range(0.0..1.0);
            let iv = Interval::new(a, a + w);
            let x = a + w * rng.gen::<f64>();
            assert!(iv.sin().contains(x.sin()));
            assert!(iv.cos().contains(x.cos()));
            assert!(iv.atan().contains(x.atan()));
            assert!((iv * iv).contains(x * x));
            let y = Interval::new(1.0, 2.0);
            assert!((iv / y).contains(x / 1.5));
        }
    }

    #[test]
    fn recip_reaching_zero_is_unbounded() {
        let r = Interval::new(0.0, 0.25).recip_nonneg();
        assert_eq!(r.hi, f64::INFINITY);
        assert!(r.lo <= 4.0);
        assert!((Interval::point(0.0) * r).hi < 1e-300);
    }

    #[test]
    fn asin_acos_match_constants() {
        let half = Interval::point(0.5);
        assert!(half.asin().contains(PI / 6.0));
        assert!(half.acos().contains(FRAC_PI_3));
        assert!(Interval::new(1.0, 1.0).acos().contains(0.0));
    }
}
