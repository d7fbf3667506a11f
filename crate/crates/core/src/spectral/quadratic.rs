//! Exact arithmetic in real quadratic fields `Q(√D)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Trial-division bound for extracting square factors of the discriminant.
const TRIAL_BOUND: u64 = 100_000;

/// `x + y·√d` with rational `x`, `y`.
///
/// Canonical form: `d` is squarefree and `d > 1`, or the number is rational,
/// in which case `y = 0` and `d = 1`. Square factors of `d` are found by trial
/// division up to 10^5 followed by a perfect-square test of the cofactor, which
/// is exact whenever `d` has no repeated prime factor above that bound paired
/// with another large prime (always the case for `d < 10^15`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    x: BigRational,
    y: BigRational,
    d: BigInt,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// `d = s² · f` with `f` squarefree (within the documented bound).
fn split_square(d: &BigInt) -> (BigInt, BigInt) {
    let mut rest = d.clone();
    let mut s = BigInt::one();
    let mut p = 2u64;
    while p <= TRIAL_BOUND {
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        let p2 = &pb * &pb;
        while (&rest % &p2).is_zero() {
            rest /= &p2;
            s *= &pb;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if let Some(root) = exact_isqrt(&rest) {
        if root > BigInt::one() {
            s *= &root;
            rest = BigInt::one();
        }
    }
    (s, rest)
}

/// `√q` for a rational `q` that is a perfect square.
pub(crate) fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    let n = exact_isqrt(q.numer())?;
    let m = exact_isqrt(q.denom())?;
    Some(BigRational::new(n, m))
}

impl QuadraticNumber {
    /// `x + y·√d`; fails for negative `d`.
    pub fn new(x: BigRational, y: BigRational, d: BigInt) -> Result<Self> {
        if d.is_negative() {
            return Err(Error::Parameter(format!("negative discriminant {d}")));
        }
        Ok(Self::normalized(x, y, d))
    }

    fn normalized(x: BigRational, y: BigRational, d: BigInt) -> Self {
        if y.is_zero() || d.is_zero() {
            return Self::rational(x);
        }
        let (s, f) = split_square(&d);
        let y = y * BigRational::from_integer(s);
        if f.is_one() {
            Self::rational(x + y)
        } else {
            Self { x, y, d: f }
        }
    }

    pub fn rational(x: BigRational) -> Self {
        Self {
            x,
            y: BigRational::zero(),
            d: BigInt::one(),
        }
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(rat(n))
    }

    pub fn ratio(n: i64, m: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(n), BigInt::from(m)))
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    /// `√q` for rational `q >= 0`.
    pub fn sqrt_of_rational(q: &BigRational) -> Option<Self> {
        if q.is_negative() {
            return None;
        }
        // √(a/b) = √(ab) / b
        let (a, b) = (q.numer().clone(), q.denom().clone());
        let y = BigRational::new(BigInt::one(), b.clone());
        Some(Self::normalized(BigRational::zero(), y, a * b))
    }

    /// `√n` for an integer `n >= 0`.
    pub fn sqrt_int(n: i64) -> Option<Self> {
        Self::sqrt_of_rational(&rat(n))
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.x
    }

    pub fn surd_coefficient(&self) -> &BigRational {
        &self.y
    }

    /// The squarefree `d`, or 1 for rationals.
    pub fn discriminant(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.x)
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// `x - y·√d`.
    pub fn conjugate(&self) -> Self {
        Self {
            x: self.x.clone(),
            y: -self.y.clone(),
            d: self.d.clone(),
        }
    }

    /// `x² - d·y²`.
    pub fn norm(&self) -> BigRational {
        &self.x * &self.x - &self.y * &self.y * BigRational::from_integer(self.d.clone())
    }

    fn field_with(&self, other: &Self) -> Result<BigInt> {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => Ok(other.d.clone()),
            (_, true) => Ok(self.d.clone()),
            _ if self.d == other.d => Ok(self.d.clone()),
            _ => Err(Error::FieldMismatch),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let d = self.field_with(other)?;
        Ok(Self::normalized(&self.x + &other.x, &self.y + &other.y, d))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other.clone())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let d = self.field_with(other)?;
        let dr = BigRational::from_integer(d.clone());
        let x = &self.x * &other.x + &self.y * &other.y * dr;
        let y = &self.x * &other.y + &self.y * &other.x;
        Ok(Self::normalized(x, y, d))
    }

    /// `1 / self`, or `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Self::normalized(&self.x / &n, -(&self.y / &n), self.d.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        let inv = other
            .recip()
            .ok_or_else(|| Error::Parameter("division by zero".into()))?;
        self.checked_mul(&inv)
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sx = sign(&self.x);
        let sy = sign(&self.y);
        if sy == 0 || sx == sy {
            return if sx == 0 { sy } else { sx };
        }
        if sx == 0 {
            return sy;
        }
        let x2 = &self.x * &self.x;
        let y2d = &self.y * &self.y * BigRational::from_integer(self.d.clone());
        if x2 > y2d {
            sx
        } else {
            sy
        }
    }

    /// `√self` when it lies in the same field (or in `Q(√q)` for rational `q`).
    pub fn sqrt(&self) -> Option<Self> {
        if self.signum() < 0 {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Self::sqrt_of_rational(q);
        }
        // (a + b√d)² = X + Y√d  ⇔  a² + d b² = X, 2ab = Y
        let big_x = &self.x;
        let n = rational_sqrt(&self.norm())?;
        let two = rat(2);
        for a2 in [(big_x + &n) / &two, (big_x - &n) / &two] {
            if !a2.is_positive() {
                continue;
            }
            let Some(a) = rational_sqrt(&a2) else { continue };
            let b = &self.y / (&two * &a);
            let root = Self::normalized(a, b, self.d.clone());
            let root = if root.signum() < 0 { -root } else { root };
            if root.checked_mul(&root).ok().as_ref() == Some(self) {
                return Some(root);
            }
        }
        None
    }

    pub fn to_f64(&self) -> f64 {
        let x = self.x.to_f64().unwrap_or(f64::NAN);
        let y = self.y.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        x + y * d.sqrt()
    }

    /// Comparison; `None` when the operands lie in different fields.
    pub fn compare(&self, other: &Self) -> Option<Ordering> {
        let diff = self.checked_sub(other).ok()?;
        Some(diff.signum().cmp(&0))
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

fn sign(q: &BigRational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialOrd for QuadraticNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.compare(other)
    }
}

impl From<i64> for QuadraticNumber {
    fn from(n: i64) -> Self {
        Self::integer(n)
    }
}

impl From<BigRational> for QuadraticNumber {
    fn from(q: BigRational) -> Self {
        Self::rational(q)
    }
}

impl Neg for QuadraticNumber {
    type Output = QuadraticNumber;

    fn neg(self) -> QuadraticNumber {
        QuadraticNumber {
            x: -self.x,
            y: -self.y,
            d: self.d,
        }
    }
}

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;

    fn neg(self) -> QuadraticNumber {
        -self.clone()
    }
}

// Operator forms panic on mixing different fields; use the `checked_*` methods
// when that can happen.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&QuadraticNumber> for &QuadraticNumber {
            type Output = QuadraticNumber;

            fn $method(self, rhs: &QuadraticNumber) -> QuadraticNumber {
                self.$checked(rhs).expect(concat!("quadratic ", stringify!($method)))
            }
        }

        impl $trait<QuadraticNumber> for QuadraticNumber {
            type Output = QuadraticNumber;

            fn $method(self, rhs: QuadraticNumber) -> QuadraticNumber {
                (&self).$method(&rhs)
            }
        }

        impl $trait<&QuadraticNumber> for QuadraticNumber {
            type Output = QuadraticNumber;

            fn $method(self, rhs: &QuadraticNumber) -> QuadraticNumber {
                (&self).$method(rhs)
            }
        }

        impl $trait<QuadraticNumber> for &QuadraticNumber {
            type Output = QuadraticNumber;

            fn $method(self, rhs: QuadraticNumber) -> QuadraticNumber {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.x);
        }
        let y_abs = self.y.abs();
        let surd = if y_abs.is_one() {
            format!("sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", y_abs, self.d)
        };
        match (self.x.is_zero(), self.y.is_negative()) {
            (true, false) => write!(f, "{surd}"),
            (true, true) => write!(f, "-{surd}"),
            (false, false) => write!(f, "{} + {surd}", self.x),
            (false, true) => write!(f, "{} - {surd}", self.x),
        }
    }
}

#[derive(Serialize)]
struct Exported {
    x: String,
    y: String,
    d: String,
    decimal: f64,
}

impl Serialize for QuadraticNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Exported {
            x: self.x.to_string(),
            y: self.y.to_string(),
            d: self.d.to_string(),
            decimal: self.to_f64(),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, m: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(m))
    }

    fn qn(x: (i64, i64), y: (i64, i64), d: i64) -> QuadraticNumber {
        QuadraticNumber::new(q(x.0, x.1), q(y.0, y.1), BigInt::from(d)).unwrap()
    }

    fn golden() -> QuadraticNumber {
        qn((1, 2), (1, 2), 5)
    }

    #[test]
    fn normalizes_square_factors() {
        let a = qn((0, 1), (1, 1), 20);
        assert_eq!(a, qn((0, 1), (2, 1), 5));
        let b = qn((1, 1), (3, 1), 9);
        assert_eq!(b, QuadraticNumber::integer(10));
        assert!(b.is_rational());
        assert_eq!(qn((1, 1), (0, 1), 7).discriminant(), &BigInt::one());
        assert!(QuadraticNumber::new(rat(1), rat(1), BigInt::from(-3)).is_err());
    }

    #[test]
    fn golden_ratio_identities() {
        let t = golden();
        assert_eq!(&t * &t, &t + QuadraticNumber::one());
        assert_eq!(t.recip().unwrap(), &t - QuadraticNumber::one());
        assert_eq!((&t * &t.conjugate()), QuadraticNumber::integer(-1));
        assert!((t.to_f64() - 1.618_033_988_75).abs() < 1e-10);
    }

    #[test]
    fn signs_and_order() {
        assert_eq!(qn((3, 1), (-1, 1), 5).signum(), 1);
        assert_eq!(qn((2, 1), (-1, 1), 5).signum(), -1);
        assert_eq!(qn((-3, 1), (1, 1), 5).signum(), -1);
        assert_eq!(QuadraticNumber::zero().signum(), 0);
        assert!(golden() > QuadraticNumber::ratio(8, 5));
        assert!(golden() < QuadraticNumber::ratio(13, 8));
        assert_eq!(golden().partial_cmp(&qn((0, 1), (1, 1), 2)), None);
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = qn((0, 1), (1, 1), 2);
        let b = qn((0, 1), (1, 1), 3);
        assert_eq!(a.checked_add(&b).unwrap_err(), Error::FieldMismatch);
        assert!(a.checked_mul(&QuadraticNumber::integer(3)).is_ok());
    }

    #[test]
    fn square_roots() {
        assert_eq!(QuadraticNumber::integer(4).sqrt().unwrap(), QuadraticNumber::integer(2));
        assert_eq!(QuadraticNumber::integer(5).sqrt().unwrap(), qn((0, 1), (1, 1), 5));
        let x = qn((3, 1), (2, 1), 2); // (1 + √2)²
        assert_eq!(x.sqrt().unwrap(), qn((1, 1), (1, 1), 2));
        let t = golden();
        assert_eq!((&t * &t).sqrt().unwrap(), t);
        assert!(qn((1, 1), (1, 1), 2).sqrt().is_none());
        assert!(QuadraticNumber::integer(-1).sqrt().is_none());
        assert_eq!(
            QuadraticNumber::sqrt_of_rational(&q(1, 4)).unwrap(),
            QuadraticNumber::ratio(1, 2)
        );
    }

    #[test]
    fn display() {
        assert_eq!(golden().to_string(), "1/2 + 1/2*sqrt(5)");
        assert_eq!(qn((0, 1), (-1, 1), 3).to_string(), "-sqrt(3)");
        assert_eq!(QuadraticNumber::ratio(3, 2).to_string(), "3/2");
    }

    #[test]
    fn large_discriminant_square_part() {
        // 1_000_003 is prime; its square sits above the trial bound
        let p = 1_000_003i64;
        let a = QuadraticNumber::new(rat(0), rat(1), BigInt::from(p) * BigInt::from(p)).unwrap();
        assert_eq!(a, QuadraticNumber::integer(p));
    }
}
