//! Sparse bivariate polynomials over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::uni::UniPoly;
use crate::error::{Error, Result};
use crate::exact::{format_rat, int, Rat};

/// Polynomial in `x, y`, keyed by exponent pairs `(i, j)` for `x^i y^j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), Rat>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: Rat, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Self { terms }
    }

    pub fn x() -> Self {
        Self::monomial(Rat::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(Rat::one(), 0, 1)
    }

    /// Builds from `(coefficient, i, j)` triples; repeated exponents accumulate.
    pub fn from_terms(terms: &[(i64, u32, u32)]) -> Self {
        let mut p = Self::zero();
        for &(c, i, j) in terms {
            p.add_term((i, j), int(c));
        }
        p
    }

    pub fn add_term(&mut self, e: (u32, u32), c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rat {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect() }
    }

    /// Multiplies by `x^a y^b`.
    pub fn shift(&self, a: u32, b: u32) -> Self {
        Self { terms: self.terms.iter().map(|((i, j), c)| ((i + a, j + b), c.clone())).collect() }
    }

    /// `x d/dx`.
    pub fn theta_x(&self) -> Self {
        let mut p = Self::zero();
        for ((i, j), c) in &self.terms {
            p.add_term((*i, *j), c * int(i64::from(*i)));
        }
        p
    }

    /// `y d/dy`.
    pub fn theta_y(&self) -> Self {
        let mut p = Self::zero();
        for ((i, j), c) in &self.terms {
            p.add_term((*i, *j), c * int(i64::from(*j)));
        }
        p
    }

    /// The polynomial `p(x + a, y + b)`.
    pub fn translate(&self, a: &Rat, b: &Rat) -> Self {
        let mut out = Self::zero();
        for ((i, j), c) in &self.terms {
            let bx = binomial_row(*i, a);
            let by = binomial_row(*j, b);
            for (k, u) in bx.iter().enumerate() {
                for (l, v) in by.iter().enumerate() {
                    out.add_term((k as u32, l as u32), c * u * v);
                }
            }
        }
        out
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        self.terms.iter().fold(Rat::zero(), |acc, ((i, j), c)| {
            acc + c * num_traits::pow(x.clone(), *i as usize) * num_traits::pow(y.clone(), *j as usize)
        })
    }

    /// Restriction to `y = 0` as a polynomial in `x`.
    pub fn restrict_y0(&self) -> UniPoly {
        let deg = self.terms.keys().map(|(i, _)| *i as usize).max().unwrap_or(0);
        let mut v = vec![Rat::zero(); deg + 1];
        for ((i, j), c) in &self.terms {
            if *j == 0 {
                v[*i as usize] = c.clone();
            }
        }
        UniPoly::new(v)
    }

    /// Leading exponent in lexicographic order (x first).
    fn lead(&self) -> Option<((u32, u32), &Rat)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Result<Option<Self>> {
        let Some(((di, dj), dc)) = d.lead() else {
            return Err(Error::Singular);
        };
        let dc = dc.clone();
        let mut r = self.clone();
        let mut q = Self::zero();
        while let Some(((ri, rj), rc)) = r.lead() {
            if ri < di || rj < dj {
                return Ok(None);
            }
            let t = Self::monomial(rc / &dc, ri - di, rj - dj);
            r = &r - &(&t * d);
            q = &q + &t;
        }
        Ok(Some(q))
    }
}

/// Coefficients of `(t + a)^n` in powers of `t`.
fn binomial_row(n: u32, a: &Rat) -> Vec<Rat> {
    let n = n as usize;
    let mut row = vec![Rat::zero(); n + 1];
    let mut binom = Rat::one();
    for k in 0..=n {
        // C(n, k) a^(n - k)
        row[k] = &binom * num_traits::pow(a.clone(), n - k);
        binom = binom * int((n - k) as i64) / int(k as i64 + 1);
    }
    row
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: Self) -> Poly2 {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: Self) -> Poly2 {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: Self) -> Poly2 {
        let mut out = Poly2::zero();
        for ((i, j), a) in &self.terms {
            for ((k, l), b) in &rhs.terms {
                out.add_term((i + k, j + l), a * b);
            }
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        self.scale(&-Rat::one())
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .terms
            .iter()
            .map(|((i, j), c)| {
                let mut s = format_rat(c);
                if *i > 0 {
                    s.push_str(&if *i == 1 { "*x".to_string() } else { format!("*x^{i}") });
                }
                if *j > 0 {
                    s.push_str(&if *j == 1 { "*y".to_string() } else { format!("*y^{j}") });
                }
                s
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Fraction-free (Bareiss) determinant of a square matrix of polynomials.
pub fn bareiss_det(m: &[Vec<Poly2>]) -> Result<Poly2> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("bareiss_det needs a square matrix".into()));
    }
    if n == 0 {
        return Ok(Poly2::one());
    }
    let mut a: Vec<Vec<Poly2>> = m.to_vec();
    let mut prev = Poly2::one();
    let mut negate = false;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(Poly2::zero());
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .exact_div(&prev)?
                    .ok_or_else(|| Error::Inconsistent("Bareiss division is not exact".into()))?;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -&d } else { d })
}
