//! Exact scalar arithmetic.
//!
//! Everything downstream (simplex pivots, transport values, envelope
//! breakpoints) is generic over [`Scalar`]: an exact, totally ordered field
//! with floor/ceiling. Floating-point types do not qualify — the `Ord` and
//! `Num` bounds rule them out on purpose, since every consumer of this trait
//! relies on exact equality.
//!
//! Two implementations ship with the crate:
//! * `num_rational::BigRational` — arbitrary precision, the default.
//! * [`Rational128`] — numerator/denominator in `i128` with every operation
//!   overflow-checked. Roughly an order of magnitude faster on the small
//!   numbers that dominate this workload; any overflow panics rather than
//!   wrapping.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// An exact ordered field with floor/ceiling and integer conversions.
pub trait Scalar: Num + Signed + Ord + Eq + Clone + fmt::Debug + fmt::Display + 'static {
    fn from_int(n: i64) -> Self;

    /// Exact ratio `num/den`. Panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Largest integer `<= self`, as a scalar.
    fn floor(&self) -> Self;

    /// Smallest integer `>= self`, as a scalar.
    fn ceil(&self) -> Self;

    fn is_integer(&self) -> bool;

    /// Exact integer value, if this scalar is an integer that fits in `i64`.
    fn to_i64(&self) -> Option<i64>;

    /// Nearest `f64`; for display/CSV convenience only, never for computation.
    fn to_f64_lossy(&self) -> f64;

    fn two() -> Self {
        Self::one() + Self::one()
    }

    /// `self / 2`, exact.
    fn half(&self) -> Self {
        self.clone() / Self::two()
    }
}

impl Scalar for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn floor(&self) -> Self {
        Ratio::floor(self)
    }

    fn ceil(&self) -> Self {
        Ratio::ceil(self)
    }

    fn is_integer(&self) -> bool {
        Ratio::is_integer(self)
    }

    fn to_i64(&self) -> Option<i64> {
        if Ratio::is_integer(self) {
            self.to_integer().to_i64()
        } else {
            None
        }
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Exact rational with `i128` backing and loud overflow detection.
///
/// Invariants: denominator is strictly positive and `gcd(|num|, den) == 1`;
/// zero is canonically `0/1`. Every arithmetic step uses checked `i128`
/// operations and panics on overflow — results are exact or absent, never
/// silently wrapped.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational128 {
    num: i128,
    den: i128,
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    // 128-bit division is a software routine; drop to hardware-width
    // operands as soon as both fit.
    while b != 0 {
        if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
            return gcd_u64(a as u64, b as u64) as u128;
        }
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cold]
fn overflow(op: &str) -> ! {
    panic!("Rational128 overflow during {op}; use the arbitrary-precision scalar instead");
}

fn checked_mul(a: i128, b: i128, op: &str) -> i128 {
    a.checked_mul(b).unwrap_or_else(|| overflow(op))
}

fn checked_add(a: i128, b: i128, op: &str) -> i128 {
    a.checked_add(b).unwrap_or_else(|| overflow(op))
}

impl Rational128 {
    /// Canonical `num/den`. Panics if `den == 0`.
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "Rational128: zero denominator");
        let sign = if (num < 0) == (den < 0) || num == 0 {
            1
        } else {
            -1
        };
        let (n, d) = (num.unsigned_abs(), den.unsigned_abs());
        let g = gcd_u128(n, d).max(1);
        let n = (n / g) as i128 * sign;
        let d = (d / g) as i128;
        Rational128 { num: n, den: d }
    }

    pub fn numer(&self) -> i128 {
        self.num
    }

    pub fn denom(&self) -> i128 {
        self.den
    }
}

impl std::ops::Add for Rational128 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.num == 0 {
            return rhs;
        }
        if rhs.num == 0 {
            return self;
        }
        if self.den == rhs.den {
            return Rational128::new(checked_add(self.num, rhs.num, "add"), self.den);
        }
        // Reduce by gcd of denominators first to delay overflow.
        let g = gcd_u128(self.den as u128, rhs.den as u128) as i128;
        let lhs_scale = rhs.den / g;
        let rhs_scale = self.den / g;
        let num = checked_add(
            checked_mul(self.num, lhs_scale, "add"),
            checked_mul(rhs.num, rhs_scale, "add"),
            "add",
        );
        let den = checked_mul(self.den, lhs_scale, "add");
        Rational128::new(num, den)
    }
}

impl std::ops::Sub for Rational128 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl std::ops::Mul for Rational128 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.num == 0 || rhs.num == 0 {
            return Rational128 { num: 0, den: 1 };
        }
        if self.den == 1 && self.num == 1 {
            return rhs;
        }
        if rhs.den == 1 && rhs.num == 1 {
            return self;
        }
        // Cross-reduce before multiplying; the factors are then coprime, so
        // no final reduction pass is needed.
        let g1 = gcd_u128(self.num.unsigned_abs(), rhs.den as u128).max(1) as i128;
        let g2 = gcd_u128(rhs.num.unsigned_abs(), self.den as u128).max(1) as i128;
        let num = checked_mul(self.num / g1, rhs.num / g2, "mul");
        let den = checked_mul(self.den / g2, rhs.den / g1, "mul");
        Rational128 { num, den }
    }
}

impl std::ops::Div for Rational128 {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "Rational128: division by zero");
        let g1 = gcd_u128(self.num.unsigned_abs(), rhs.num.unsigned_abs()).max(1) as i128;
        let g2 = gcd_u128(rhs.den as u128, self.den as u128).max(1) as i128;
        let num = checked_mul(self.num / g1, rhs.den / g2, "div");
        let den = checked_mul(self.den / g2, rhs.num / g1, "div");
        Rational128::new(num, den)
    }
}

impl std::ops::Rem for Rational128 {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        let q = Scalar::floor(&(self / rhs));
        self - q * rhs
    }
}

impl std::ops::Neg for Rational128 {
    type Output = Self;
    fn neg(self) -> Self {
        Rational128 {
            num: self.num.checked_neg().unwrap_or_else(|| overflow("neg")),
            den: self.den,
        }
    }
}

impl PartialOrd for Rational128 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational128 {
    fn cmp(&self, other: &Self) -> Ordering {
        // Denominators are positive, so compare num1*den2 vs num2*den1.
        checked_mul(self.num, other.den, "cmp").cmp(&checked_mul(other.num, self.den, "cmp"))
    }
}

impl Zero for Rational128 {
    fn zero() -> Self {
        Rational128 { num: 0, den: 1 }
    }
    fn is_zero(&self) -> bool {
        self.num == 0
    }
}

impl One for Rational128 {
    fn one() -> Self {
        Rational128 { num: 1, den: 1 }
    }
}

impl Num for Rational128 {
    type FromStrRadixErr = String;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, String> {
        let parse = |t: &str| i128::from_str_radix(t, radix).map_err(|e| e.to_string());
        match s.split_once('/') {
            Some((n, d)) => {
                let den = parse(d)?;
                if den == 0 {
                    return Err("zero denominator".to_string());
                }
                Ok(Rational128::new(parse(n)?, den))
            }
            None => Ok(Rational128::new(parse(s)?, 1)),
        }
    }
}

impl Signed for Rational128 {
    fn abs(&self) -> Self {
        if self.num < 0 {
            -*self
        } else {
            *self
        }
    }
    fn abs_sub(&self, other: &Self) -> Self {
        if self <= other {
            Self::zero()
        } else {
            *self - *other
        }
    }
    fn signum(&self) -> Self {
        Rational128::new(self.num.signum(), 1)
    }
    fn is_positive(&self) -> bool {
        self.num > 0
    }
    fn is_negative(&self) -> bool {
        self.num < 0
    }
}

impl Scalar for Rational128 {
    fn from_int(n: i64) -> Self {
        Rational128 {
            num: n as i128,
            den: 1,
        }
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational128::new(num as i128, den as i128)
    }

    fn floor(&self) -> Self {
        Rational128 {
            num: self.num.div_euclid(self.den),
            den: 1,
        }
    }

    fn ceil(&self) -> Self {
        -Scalar::floor(&-*self)
    }

    fn is_integer(&self) -> bool {
        self.den == 1
    }

    fn to_i64(&self) -> Option<i64> {
        if self.den == 1 {
            i64::try_from(self.num).ok()
        } else {
            None
        }
    }

    fn to_f64_lossy(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Rational128 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rational128 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational128 {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Num::from_str_radix(s, 10)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64, d: i64) -> BigRational {
        <BigRational as Scalar>::from_ratio(n, d)
    }

    fn q(n: i128, d: i128) -> Rational128 {
        Rational128::new(n, d)
    }

    #[test]
    fn sums_reduce_to_canonical_form() {
        assert_eq!(big(1, 3) + big(1, 6), big(1, 2));
        assert_eq!(q(1, 3) + q(1, 6), q(1, 2));
    }

    #[test]
    fn floor_and_ceil_of_seven_halves() {
        assert_eq!(Scalar::floor(&big(7, 2)), big(3, 1));
        assert_eq!(Scalar::ceil(&big(7, 2)), big(4, 1));
        assert_eq!(Scalar::floor(&q(7, 2)), q(3, 1));
        assert_eq!(Scalar::ceil(&q(7, 2)), q(4, 1));
        // Negative operands round toward -infinity / +infinity respectively.
        assert_eq!(Scalar::floor(&q(-7, 2)), q(-4, 1));
        assert_eq!(Scalar::ceil(&q(-7, 2)), q(-3, 1));
    }

    #[test]
    fn tail_segment_arithmetic() {
        // (1 - 1/7) * 1/2 = 3/7
        let r = (Rational128::one() - q(1, 7)) * q(1, 2);
        assert_eq!(r, q(3, 7));
        assert_eq!((big(1, 1) - big(1, 7)) * big(1, 2), big(3, 7));
    }

    #[test]
    fn canonical_zero_is_zero_over_one() {
        let z = q(0, -17);
        assert_eq!(z.numer(), 0);
        assert_eq!(z.denom(), 1);
        assert!(z.is_zero());
    }

    #[test]
    fn negative_denominators_normalize() {
        assert_eq!(q(2, -4), q(-1, 2));
        assert!(q(2, -4).is_negative());
    }

    #[test]
    fn renders_like_the_wire_format() {
        assert_eq!(q(3, 7).to_string(), "3/7");
        assert_eq!(q(-5, 1).to_string(), "-5");
        assert_eq!(big(3, 7).to_string(), "3/7");
        assert_eq!(big(-5, 1).to_string(), "-5");
        assert_eq!("22/7".parse::<Rational128>().unwrap(), q(22, 7));
    }

    #[test]
    #[should_panic(expected = "division by zero")]
    fn division_by_zero_panics() {
        let _ = q(1, 2) / Rational128::zero();
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn overflow_aborts_instead_of_wrapping() {
        let huge = Rational128::new(i128::MAX, 1);
        let _ = huge * huge;
    }

    proptest! {
        // Rational128 must agree with the arbitrary-precision scalar on
        // everything it can represent.
        #[test]
        fn matches_bigrational(
            a in -10_000i64..10_000, b in 1i64..400,
            c in -10_000i64..10_000, d in 1i64..400,
        ) {
            let (x, y) = (q(a as i128, b as i128), q(c as i128, d as i128));
            let (bx, by) = (big(a, b), big(c, d));

            let pairs = [
                (x + y, bx.clone() + by.clone()),
                (x - y, bx.clone() - by.clone()),
                (x * y, bx.clone() * by.clone()),
                (Scalar::floor(&x), Scalar::floor(&bx)),
                (Scalar::ceil(&x), Scalar::ceil(&bx)),
            ];
            for (small, big) in pairs {
                prop_assert_eq!(small.to_string(), big.to_string());
            }
            prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
            if !y.is_zero() {
                prop_assert_eq!((x / y).to_string(), (bx / by).to_string());
            }
        }
    }
}
