//! Univariate polynomials and rational functions over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{format_rat, Rat};

/// Dense polynomial, coefficients from degree 0 upward, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * q^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, q: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * q + c)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&(Rat::one() / l)),
            None => self.clone(),
        }
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dl = d.leading().ok_or(Error::Singular)?.clone();
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        let mut q = vec![Rat::zero(); r.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = r.last().expect("nonempty remainder") / &dl;
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[k + i] = &r[k + i] - &c * dc;
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Ok((Self::new(q), Self::new(r)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Multiplicity of `root` as a zero of `self` (0 if not a root).
    pub fn root_multiplicity(&self, root: &Rat) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::Inconsistent("zero polynomial has every root".into()));
        }
        let lin = Self::new(vec![-root.clone(), Rat::one()]);
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = p.div_rem(&lin)?;
            if !r.is_zero() {
                return Ok(m);
            }
            p = q;
            m += 1;
        }
    }

    /// Coefficients reversed with respect to degree `n`: `q^n p(1/q)`.
    fn reversed(&self, n: usize) -> Self {
        let mut v = vec![Rat::zero(); n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[n - k] = c.clone();
        }
        Self::new(v)
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: Self) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: Self) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: Self) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = &v[i + j] + a * b;
            }
        }
        UniPoly::new(v)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format_rat(c),
                1 => format!("{}*q", format_rat(c)),
                _ => format!("{}*q^{k}", format_rat(c)),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Reduced quotient of polynomials with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: UniPoly,
    den: UniPoly,
}

impl RationalFn {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Singular);
        }
        let g = num.gcd(&den);
        let g = if g.is_zero() { UniPoly::constant(Rat::one()) } else { g };
        let (n, _) = num.div_rem(&g)?;
        let (d, _) = den.div_rem(&g)?;
        let l = d.leading().expect("nonzero denominator").clone();
        let inv = Rat::one() / l;
        Ok(Self { num: n.scale(&inv), den: d.scale(&inv) })
    }

    pub fn constant(c: Rat) -> Self {
        Self { num: UniPoly::constant(c), den: UniPoly::constant(Rat::one()) }
    }

    pub fn poly(p: UniPoly) -> Self {
        Self { num: p, den: UniPoly::constant(Rat::one()) }
    }

    pub fn numerator(&self) -> &UniPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        Self::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        Self::new(&(&self.num * &o.den) - &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        Self::new(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Self { num: self.num.scale(s), den: self.den.clone() }
    }

    /// The function `q -> f(1/q)`.
    pub fn substitute_reciprocal(&self) -> Result<Self> {
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let n = self.num.reversed(dn);
        let d = self.den.reversed(dd);
        let (n, d) = if dd >= dn {
            (&n * &UniPoly::monomial(Rat::one(), dd - dn), d)
        } else {
            (n, &d * &UniPoly::monomial(Rat::one(), dn - dd))
        };
        Self::new(n, d)
    }

    pub fn eval(&self, q: &Rat) -> Result<Rat> {
        let d = self.den.eval(q);
        if d.is_zero() {
            return Err(Error::Singular);
        }
        Ok(self.num.eval(q) / d)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&v| int(v)).collect())
    }

    #[test]
    fn gcd_and_reduction() {
        let a = &p(&[-1, 1]) * &p(&[2, 1]);
        let b = &p(&[-1, 1]) * &p(&[3, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        let f = RationalFn::new(a, b).unwrap();
        assert_eq!(f.numerator(), &p(&[2, 1]));
        assert_eq!(f.denominator(), &p(&[3, 1]));
    }

    #[test]
    fn reciprocal_substitution() {
        // q/(1-q) at q -> 1/q is 1/(q-1)
        let f = RationalFn::new(p(&[0, 1]), p(&[1, -1])).unwrap();
        let g = f.substitute_reciprocal().unwrap();
        assert_eq!(g.eval(&int(3)).unwrap(), rat(1, 2));
    }

    #[test]
    fn multiplicity() {
        let f = &(&p(&[-1, 4]) * &p(&[-1, 4])) * &p(&[5, 1]);
        assert_eq!(f.root_multiplicity(&rat(1, 4)).unwrap(), 2);
        assert_eq!(f.root_multiplicity(&int(1)).unwrap(), 0);
    }
}
