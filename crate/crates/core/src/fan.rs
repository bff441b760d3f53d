//! Rational fans in the plane: primitive lattice rays, angular order inside a
//! half-plane, and irrational closure rays.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{eigenrays_2x2, ExactMatrix, QuadNum, QuadRay, Rat};

/// A nonzero primitive integer vector in the plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeRay {
    pub x: BigInt,
    pub y: BigInt,
}

impl LatticeRay {
    /// The primitive vector on the ray through `(x, y)`, direction preserved.
    pub fn new(x: BigInt, y: BigInt) -> Result<Self> {
        if x.is_zero() && y.is_zero() {
            return Err(Error::Inconsistent("zero vector is not a ray".into()));
        }
        let g = x.gcd(&y);
        Ok(Self { x: x / &g, y: y / g })
    }

    pub fn from_i64(x: i64, y: i64) -> Result<Self> {
        Self::new(x.into(), y.into())
    }

    /// Clears denominators of rational coordinates.
    pub fn from_rats(x: &Rat, y: &Rat) -> Result<Self> {
        let l = x.denom().lcm(y.denom());
        let sx = x * Rat::from_integer(l.clone());
        let sy = y * Rat::from_integer(l);
        Self::new(sx.to_integer(), sy.to_integer())
    }

    pub fn cross(&self, other: &Self) -> BigInt {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn dot(&self, other: &Self) -> BigInt {
        &self.x * &other.x + &self.y * &other.y
    }

    /// Image under an integer 2x2 matrix acting on column vectors.
    pub fn transform(&self, m: &ExactMatrix) -> Result<Self> {
        let v = m.apply(&[Rat::from_integer(self.x.clone()), Rat::from_integer(self.y.clone())])?;
        Self::from_rats(&v[0], &v[1])
    }

    /// The same ray with coordinates in `Q(sqrt d)`.
    pub fn to_quad(&self, d: u64) -> Result<QuadRay> {
        let q = |v: &BigInt| QuadNum::rational(Rat::from_integer(v.clone()), d);
        QuadRay::new(q(&self.x)?, q(&self.y)?)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (self.x.to_f64().unwrap_or(f64::NAN), self.y.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for LatticeRay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Serialize for LatticeRay {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x.to_string(), self.y.to_string()].serialize(s)
    }
}

/// Serializes a closure-ray pair as display strings.
pub fn ser_quad_rays<S: Serializer>(r: &[QuadRay; 2], s: S) -> std::result::Result<S::Ok, S::Error> {
    [r[0].to_string(), r[1].to_string()].serialize(s)
}

/// Sorts rays counterclockwise and removes duplicates. All rays must lie in an open
/// half-plane, so that the cross product is a strict order.
pub fn sort_counterclockwise(rays: &mut Vec<LatticeRay>) -> Result<()> {
    rays.sort_by(|a, b| match a.cross(b).sign() {
        num_bigint::Sign::Plus => Ordering::Less,
        num_bigint::Sign::Minus => Ordering::Greater,
        num_bigint::Sign::NoSign => Ordering::Equal,
    });
    rays.dedup();
    for w in rays.windows(2) {
        if !w[0].cross(&w[1]).is_positive() {
            return Err(Error::Inconsistent(format!("rays {} and {} are not in a half-plane", w[0], w[1])));
        }
    }
    if let (Some(first), Some(last)) = (rays.first(), rays.last()) {
        if rays.len() > 1 && !first.cross(last).is_positive() {
            return Err(Error::Inconsistent("rays span more than a half-plane".into()));
        }
    }
    Ok(())
}

/// Whether consecutive rays turn strictly in one direction.
pub fn is_monotone(rays: &[LatticeRay]) -> bool {
    let signs: Vec<_> = rays.windows(2).map(|w| w[0].cross(&w[1]).sign()).collect();
    signs.iter().all(|s| *s == num_bigint::Sign::Plus) || signs.iter().all(|s| *s == num_bigint::Sign::Minus)
}

/// Determinants of consecutive ray pairs.
pub fn chamber_determinants(rays: &[LatticeRay]) -> Vec<BigInt> {
    rays.windows(2).map(|w| w[0].cross(&w[1])).collect()
}

/// The two eigen-rays of `orbit`, each pointing to the side of `walls`, returned as
/// `[start, end]` in counterclockwise order.
pub fn oriented_closure(orbit: &ExactMatrix, walls: &[LatticeRay]) -> Result<[QuadRay; 2]> {
    let [a, b] = eigenrays_2x2(orbit)?;
    let d = a.ray.radicand();
    let mut sx = BigInt::zero();
    let mut sy = BigInt::zero();
    for w in walls {
        sx += &w.x;
        sy += &w.y;
    }
    let sum = LatticeRay::new(sx, sy)?.to_quad(d)?;
    let orient = |r: QuadRay| -> Result<QuadRay> {
        let dot = r.x().checked_mul(sum.x())?.checked_add(&r.y().checked_mul(sum.y())?)?;
        match dot.signum() {
            1 => Ok(r),
            -1 => Ok(r.neg()),
            _ => Err(Error::Inconsistent(format!("closure ray {r} is orthogonal to the fan"))),
        }
    };
    let (a, b) = (orient(a.ray)?, orient(b.ray)?);
    if a.cross(&b)?.signum() > 0 {
        Ok([a, b])
    } else {
        Ok([b, a])
    }
}

/// Whether every ray lies strictly between the closure rays.
pub fn inside_closure(rays: &[LatticeRay], closure: &[QuadRay; 2]) -> Result<bool> {
    let d = closure[0].radicand();
    for r in rays {
        let q = r.to_quad(d)?;
        if closure[0].cross(&q)?.signum() <= 0 || q.cross(&closure[1])?.signum() <= 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: i64, y: i64) -> LatticeRay {
        LatticeRay::from_i64(x, y).unwrap()
    }

    #[test]
    fn primitive_and_sorted() {
        assert_eq!(r(-4, 8), r(-1, 2));
        let mut v = vec![r(0, 1), r(4, -1), r(-1, 4), r(1, 0), r(2, 0)];
        sort_counterclockwise(&mut v).unwrap();
        assert_eq!(v, vec![r(4, -1), r(1, 0), r(0, 1), r(-1, 4)]);
        assert!(is_monotone(&v));
        assert!(sort_counterclockwise(&mut vec![r(1, 0), r(-1, 0)]).is_err());
    }

    #[test]
    fn closure_is_oriented_toward_the_walls() {
        let m = ExactMatrix::from_i64_rows(&[&[-4, -15], &[15, 56]]);
        let walls = [r(-1, 4), r(0, 1), r(1, 0), r(4, -1)];
        let [s, e] = oriented_closure(&m, &walls).unwrap();
        assert_eq!(s.to_string(), "(1, -2+√3)");
        assert_eq!(e.to_string(), "(-1, 2+√3)");
        assert!(inside_closure(&walls, &[s, e]).unwrap());
    }
}
