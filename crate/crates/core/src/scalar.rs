//! Exact arithmetic in the quadratic field Q[√3].
//!
//! Every coordinate used by the exact pipeline is an element `a + b·√3`
//! with rational `a`, `b`. The field is closed under the operations we need
//! (ring operations, rotation by multiples of π/6), and signs can be decided
//! with two rational comparisons.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `a + b·√3`, with both parts kept in lowest terms by `BigRational`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
}

pub const SQRT_3: f64 = 1.732_050_807_568_877_2;

impl Scalar {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Scalar { a, b }
    }

    pub fn from_rational(a: BigRational) -> Self {
        Scalar {
            a,
            b: BigRational::zero(),
        }
    }

    pub fn from_int(a: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(a)))
    }

    /// `num/den + (rnum/rden)·√3`. Panics on a zero denominator.
    pub fn from_parts(num: i64, den: i64, rnum: i64, rden: i64) -> Self {
        Scalar {
            a: BigRational::new(num.into(), den.into()),
            b: BigRational::new(rnum.into(), rden.into()),
        }
    }

    pub fn sqrt3() -> Self {
        Scalar {
            a: BigRational::zero(),
            b: BigRational::one(),
        }
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// Rational part.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of √3.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign of `a + b√3` as -1, 0 or +1.
    pub fn sign(&self) -> i8 {
        let sa = signum(&self.a);
        let sb = signum(&self.b);
        if sa == 0 {
            return sb;
        }
        if sb == 0 || sa == sb {
            return sa;
        }
        // Opposite signs: compare a² with 3b².
        let a2 = &self.a * &self.a;
        let b2 = &self.b * &self.b * BigRational::from_integer(BigInt::from(3));
        match a2.cmp(&b2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    /// Multiply by a rational.
    pub fn scale(&self, k: &BigRational) -> Scalar {
        Scalar {
            a: &self.a * k,
            b: &self.b * k,
        }
    }

    /// Multiply by √3.
    pub fn times_sqrt3(&self) -> Scalar {
        Scalar {
            a: &self.b * BigRational::from_integer(BigInt::from(3)),
            b: self.a.clone(),
        }
    }

    /// Nearest-ish double. Each rational part converts with at most one ulp of
    /// error; the result carries the absolute error bound from [`Scalar::to_f64_bounded`].
    /// Reporting only, never used to decide a predicate.
    pub fn to_f64(&self) -> f64 {
        self.to_f64_bounded().0
    }

    /// Approximation together with a rigorous bound on its absolute error.
    pub fn to_f64_bounded(&self) -> (f64, f64) {
        let a = rat_to_f64(&self.a);
        let b = rat_to_f64(&self.b);
        let v = a + b * SQRT_3;
        // one ulp per rational part, one for the √3 constant, two roundings
        let err = (a.abs() + 2.0 * b.abs() + v.abs()) * 4.0 * f64::EPSILON + f64::MIN_POSITIVE;
        (v, err)
    }
}

fn signum(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // astronomically large numerator or denominator
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign().cmp(&0)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}√3", self.b)
        } else {
            write!(f, "{} + {}√3", self.a, self.b)
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        // (a + b√3)(c + d√3) = (ac + 3bd) + (ad + bc)√3
        let three = BigRational::from_integer(BigInt::from(3));
        Scalar {
            a: &self.a * &rhs.a + &self.b * &rhs.b * three,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(num: i64, den: i64, rnum: i64, rden: i64) -> Scalar {
        Scalar::from_parts(num, den, rnum, rden)
    }

    #[test]
    fn sign_examples() {
        assert_eq!(s(1, 1, 0, 1).sign(), 1);
        assert_eq!(s(0, 1, 0, 1).sign(), 0);
        // 9 < 12, so -3 + 2√3 > 0
        assert_eq!(s(-3, 1, 2, 1).sign(), 1);
        assert_eq!(s(3, 1, -2, 1).sign(), -1);
        // 4 > 3: 2 - √3 > 0
        assert_eq!(s(2, 1, -1, 1).sign(), 1);
        assert_eq!(s(-2, 1, 1, 1).sign(), -1);
    }

    #[test]
    fn lowest_terms() {
        let x = s(2, 4, -3, -6);
        assert_eq!(x.a(), &BigRational::new(1.into(), 2.into()));
        assert_eq!(x.b(), &BigRational::new(1.into(), 2.into()));
        assert!(x.a().denom().is_positive());
    }

    #[test]
    fn sqrt3_squared_is_three() {
        let r = Scalar::sqrt3();
        assert_eq!(&r * &r, Scalar::from_int(3));
        assert_eq!(Scalar::one().times_sqrt3(), r);
    }

    #[test]
    fn ordering_follows_value() {
        let small = s(17, 10, 0, 1);
        let root = Scalar::sqrt3();
        let big = s(7, 4, 0, 1);
        assert!(small < root && root < big);
    }

    #[test]
    fn float_error_bound_holds() {
        let x = s(123_456_789, 1_000, -71_234_567, 1_000);
        let (v, err) = x.to_f64_bounded();
        let exact = 123_456.789 - 71_234.567 * SQRT_3;
        assert!((v - exact).abs() <= err + 1e-9);
    }
}
