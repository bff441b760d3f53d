//! Exact arithmetic in real quadratic fields `Q(sqrt d)`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::rat::{format_rat, int, sign, to_f64, Rat};
use crate::error::{Error, Result};

/// The number `a + b*sqrt(d)` with `d` squarefree and greater than one.
///
/// Every value carries its radicand; combining different radicands is an error.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNum {
    a: Rat,
    b: Rat,
    d: u64,
}

/// Squarefree part of a positive integer.
pub fn squarefree_part(mut n: u64) -> u64 {
    let mut out = 1;
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += 1;
    }
    out * n
}

/// Integer square root if `n` is a perfect square.
pub fn exact_sqrt(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt().round() as u64;
    (r.saturating_sub(1)..=r + 1).find(|&s| s * s == n)
}

impl QuadNum {
    /// Builds `a + b*sqrt(d)`.
    pub fn new(a: Rat, b: Rat, d: u64) -> Result<Self> {
        if d < 2 || squarefree_part(d) != d {
            return Err(Error::BadRadicand(d));
        }
        Ok(Self { a, b, d })
    }

    /// Embeds a rational into `Q(sqrt d)`.
    pub fn rational(a: Rat, d: u64) -> Result<Self> {
        Self::new(a, Rat::zero(), d)
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(Error::MixedRadicand(self.d, other.d));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { a: &self.a + &other.a, b: &self.b + &other.b, d: self.d })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { a: &self.a - &other.a, b: &self.b - &other.b, d: self.d })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let d = int(self.d as i64);
        Ok(Self {
            a: &self.a * &other.a + &self.b * &other.b * d,
            b: &self.a * &other.b + &self.b * &other.a,
            d: self.d,
        })
    }

    /// Algebraic conjugate `a - b*sqrt(d)`.
    pub fn conjugate(&self) -> Self {
        Self { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// Field norm `a^2 - d*b^2`.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - &self.b * &self.b * int(self.d as i64)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = other.norm();
        if n.is_zero() {
            return Err(Error::Singular);
        }
        let num = self.checked_mul(&other.conjugate())?;
        Ok(Self { a: num.a / &n, b: num.b / n, d: self.d })
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Self { a: &self.a * r, b: &self.b * r, d: self.d }
    }

    pub fn neg(&self) -> Self {
        Self { a: -self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// Exact sign of the real number `a + b*sqrt(d)`.
    pub fn signum(&self) -> i32 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with d b^2
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * int(self.d as i64);
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    /// Exact comparison of real values.
    pub fn cmp_value(&self, other: &Self) -> Result<Ordering> {
        Ok(match self.checked_sub(other)?.signum() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        })
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.a) + to_f64(&self.b) * (self.d as f64).sqrt()
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", format_rat(&self.a));
        }
        let surd = if self.b.abs().is_one() {
            format!("√{}", self.d)
        } else {
            format!("{}√{}", format_rat(&self.b.abs()), self.d)
        };
        let sgn = if self.b.is_negative() { "-" } else { "+" };
        if self.a.is_zero() {
            let lead = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{lead}{surd}")
        } else {
            write!(f, "{}{sgn}{surd}", format_rat(&self.a))
        }
    }
}

/// A direction in the plane with coordinates in `Q(sqrt d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadRay {
    coords: [QuadNum; 2],
}

impl QuadRay {
    pub fn new(x: QuadNum, y: QuadNum) -> Result<Self> {
        if x.radicand() != y.radicand() {
            return Err(Error::MixedRadicand(x.radicand(), y.radicand()));
        }
        if x.is_zero() && y.is_zero() {
            return Err(Error::Inconsistent("zero vector is not a ray".into()));
        }
        Ok(Self { coords: [x, y] })
    }

    pub fn x(&self) -> &QuadNum {
        &self.coords[0]
    }

    pub fn y(&self) -> &QuadNum {
        &self.coords[1]
    }

    pub fn radicand(&self) -> u64 {
        self.coords[0].radicand()
    }

    pub fn neg(&self) -> Self {
        Self { coords: [self.coords[0].neg(), self.coords[1].neg()] }
    }

    /// Scales by a positive or negative element of the field.
    pub fn scale(&self, s: &QuadNum) -> Result<Self> {
        Self::new(self.coords[0].checked_mul(s)?, self.coords[1].checked_mul(s)?)
    }

    /// Rescales the line so that the first coordinate is `-1`, or the second is `1`
    /// when the first vanishes.
    pub fn normalized_line(&self) -> Result<Self> {
        let x = &self.coords[0];
        let d = self.radicand();
        if x.is_zero() {
            let one = QuadNum::rational(Rat::one(), d)?;
            return Self::new(x.clone(), one);
        }
        let s = QuadNum::rational(-Rat::one(), d)?.checked_div(x)?;
        self.scale(&s)
    }

    /// Exact `x1*y2 - x2*y1`.
    pub fn cross(&self, other: &Self) -> Result<QuadNum> {
        self.coords[0]
            .checked_mul(&other.coords[1])?
            .checked_sub(&self.coords[1].checked_mul(&other.coords[0])?)
    }

    /// Whether two rays point in the same direction (positive multiples).
    pub fn same_direction(&self, other: &Self) -> Result<bool> {
        if !self.cross(other)?.is_zero() {
            return Ok(false);
        }
        let dot = self.coords[0]
            .checked_mul(&other.coords[0])?
            .checked_add(&self.coords[1].checked_mul(&other.coords[1])?)?;
        Ok(dot.signum() > 0)
    }

    /// Applies a rational 2x2 matrix given by rows.
    pub fn transform(&self, m: [[&Rat; 2]; 2]) -> Result<Self> {
        let [x, y] = &self.coords;
        let nx = x.scale(m[0][0]).checked_add(&y.scale(m[0][1]))?;
        let ny = x.scale(m[1][0]).checked_add(&y.scale(m[1][1]))?;
        Self::new(nx, ny)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.coords[0].to_f64(), self.coords[1].to_f64())
    }
}

impl fmt::Display for QuadRay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.coords[0], self.coords[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;

    fn q(a: i64, b: i64, d: u64) -> QuadNum {
        QuadNum::new(int(a), int(b), d).unwrap()
    }

    #[test]
    fn sign_is_exact_near_zero() {
        // 1393 - 985*sqrt(2) ~ -3.6e-4, and 3363 - 2378*sqrt(2) ~ +1.5e-4
        assert_eq!(q(1393, -985, 2).signum(), -1);
        assert_eq!(q(-1393, 985, 2).signum(), 1);
        assert_eq!(q(3363, -2378, 2).signum(), 1);
        assert_eq!(q(0, 0, 2).signum(), 0);
    }

    #[test]
    fn division_inverts_multiplication() {
        let x = q(2, 1, 3);
        let y = QuadNum::new(rat(1, 2), rat(-3, 7), 3).unwrap();
        let p = x.checked_mul(&y).unwrap();
        assert_eq!(p.checked_div(&y).unwrap(), x);
    }

    #[test]
    fn mixed_radicands_are_rejected() {
        assert!(matches!(q(1, 1, 2).checked_add(&q(1, 1, 3)), Err(Error::MixedRadicand(2, 3))));
        assert!(QuadNum::new(int(1), int(1), 4).is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(q(2, 1, 3).to_string(), "2+√3");
        assert_eq!(q(-3, 2, 2).to_string(), "-3+2√2");
        assert_eq!(q(0, -1, 5).to_string(), "-√5");
    }

    #[test]
    fn squarefree() {
        assert_eq!(squarefree_part(12), 3);
        assert_eq!(squarefree_part(1152), 2);
        assert_eq!(exact_sqrt(2704), Some(52));
        assert_eq!(exact_sqrt(2705), None);
    }
}
