//! Arbitrary-precision complex numbers and dense complex matrices over MPFR floats.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nilcone_core::error::{Error, Result};
use nilcone_core::Rat;
use rug::float::Constant;
use rug::ops::NegAssign;
use rug::{Float, Integer, Rational};

/// Binary float rounded to nearest.
pub type Real = Float;

fn prec_u32(prec: usize) -> u32 {
    u32::try_from(prec.max(2)).expect("precision fits in u32")
}

fn real_zero(prec: usize) -> Real {
    Float::new(prec_u32(prec))
}

fn integer(n: &num_bigint::BigInt) -> Integer {
    Integer::from_str_radix(&n.to_str_radix(16), 16).expect("hexadecimal integer")
}

/// `n / d` rounded to `prec` bits.
pub fn real_from_rat(r: &Rat, prec: usize) -> Real {
    let q = Rational::from((integer(r.numer()), integer(r.denom())));
    Float::with_val(prec_u32(prec), q)
}

/// `real + i imag`. Binary operators round to the larger precision of their operands,
/// so precision never drops below the inputs'.
#[derive(Clone, Debug, PartialEq)]
pub struct BigC {
    re: Real,
    im: Real,
}

impl BigC {
    pub fn zero(prec: usize) -> Self {
        Self { re: real_zero(prec), im: real_zero(prec) }
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(n: i64, prec: usize) -> Self {
        Self { re: Float::with_val(prec_u32(prec), n), im: real_zero(prec) }
    }

    pub fn from_parts(re: Real, im: Real) -> Self {
        Self { re, im }
    }

    pub fn from_rats(re: &Rat, im: &Rat, prec: usize) -> Self {
        Self { re: real_from_rat(re, prec), im: real_from_rat(im, prec) }
    }

    pub fn from_rat(re: &Rat, prec: usize) -> Self {
        Self { re: real_from_rat(re, prec), im: real_zero(prec) }
    }

    /// `exp(2 pi i turns)`, evaluated at `prec` bits.
    pub fn unit(turns: &Rat, prec: usize) -> Self {
        let work = prec_u32(prec + 16);
        let mut angle = Float::with_val(work, Constant::Pi) * 2u32;
        angle *= real_from_rat(turns, work as usize);
        let (s, c) = angle.sin_cos(Float::new(work));
        Self { re: Float::with_val(prec_u32(prec), &c), im: Float::with_val(prec_u32(prec), &s) }
    }

    pub fn re(&self) -> &Real {
        &self.re
    }

    pub fn im(&self) -> &Real {
        &self.im
    }

    /// Working precision in bits.
    pub fn precision(&self) -> usize {
        self.re.prec().max(self.im.prec()) as usize
    }

    /// The same value rounded to `prec` bits.
    pub fn rounded(&self, prec: usize) -> Self {
        let p = prec_u32(prec);
        Self { re: Float::with_val(p, &self.re), im: Float::with_val(p, &self.im) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn scale(&self, s: &Real) -> Self {
        let p = self.prec_with(s.prec());
        Self { re: Float::with_val(p, &self.re * s), im: Float::with_val(p, &self.im * s) }
    }

    pub fn norm_sqr(&self) -> Real {
        let mut n = Float::with_val(self.re.prec(), self.re.square_ref());
        n += &self.im * &self.im;
        n
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Modulus as `f64`; magnitudes far outside the `f64` range saturate.
    pub fn abs_f64(&self) -> f64 {
        let (a, b) = self.to_f64();
        a.hypot(b)
    }

    pub fn checked_div(&self, d: &Self) -> Result<Self> {
        let n = d.norm_sqr();
        if n.is_zero() {
            return Err(Error::Singular);
        }
        let p = self.prec_with(d.re.prec().max(d.im.prec()));
        let mut re = Float::with_val(p, &self.re * &d.re);
        re += &self.im * &d.im;
        re /= &n;
        let mut im = Float::with_val(p, &self.im * &d.re);
        im -= &self.re * &d.im;
        im /= &n;
        Ok(Self { re, im })
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        Self { re: Float::with_val(self.re.prec(), &self.re * k), im: Float::with_val(self.im.prec(), &self.im * k) }
    }

    pub fn div_i64(&self, k: i64) -> Self {
        Self { re: Float::with_val(self.re.prec(), &self.re / k), im: Float::with_val(self.im.prec(), &self.im / k) }
    }

    /// `self += a * b` with fused multiply-adds.
    pub fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        self.re += &a.re * &b.re;
        self.re -= &a.im * &b.im;
        self.im += &a.re * &b.im;
        self.im += &a.im * &b.re;
    }

    /// `self -= a * b` with fused multiply-adds.
    pub fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        self.re -= &a.re * &b.re;
        self.re += &a.im * &b.im;
        self.im -= &a.re * &b.im;
        self.im -= &a.im * &b.re;
    }

    fn prec_with(&self, other: u32) -> u32 {
        self.re.prec().max(self.im.prec()).max(other)
    }
}

impl Add for &BigC {
    type Output = BigC;
    fn add(self, o: &BigC) -> BigC {
        let p = self.prec_with(o.re.prec().max(o.im.prec()));
        BigC { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }
}

impl Sub for &BigC {
    type Output = BigC;
    fn sub(self, o: &BigC) -> BigC {
        let p = self.prec_with(o.re.prec().max(o.im.prec()));
        BigC { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }
}

impl Mul for &BigC {
    type Output = BigC;
    fn mul(self, o: &BigC) -> BigC {
        let p = self.prec_with(o.re.prec().max(o.im.prec()));
        let mut out = BigC::zero(p as usize);
        out.add_mul_assign(self, o);
        out
    }
}

impl Neg for &BigC {
    type Output = BigC;
    fn neg(self) -> BigC {
        let mut out = self.clone();
        out.re.neg_assign();
        out.im.neg_assign();
        out
    }
}

impl fmt::Display for BigC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.to_f64();
        if b < 0.0 {
            write!(f, "{a:e}-{:e}i", -b)
        } else {
            write!(f, "{a:e}+{b:e}i")
        }
    }
}

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<BigC>,
}

impl CMatrix {
    pub fn zeros(n: usize, prec: usize) -> Self {
        Self { n, data: vec![BigC::zero(prec); n * n] }
    }

    pub fn identity(n: usize, prec: usize) -> Self {
        let mut m = Self::zeros(n, prec);
        for i in 0..n {
            m.data[i * n + i] = BigC::one(prec);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> BigC) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigC {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigC) {
        self.data[i * self.n + j] = v;
    }

    pub fn precision(&self) -> usize {
        self.data.iter().map(BigC::precision).min().unwrap_or(0)
    }

    /// The same matrix rounded to `prec` bits.
    pub fn rounded(&self, prec: usize) -> Self {
        Self { n: self.n, data: self.data.iter().map(|z| z.rounded(prec)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zeros(self.n, self.precision().max(o.precision()));
        out.add_mul_assign(self, o);
        out
    }

    /// `self += a * b`, skipping exact zeros of `a`.
    pub fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        let n = self.n;
        for i in 0..n {
            for k in 0..n {
                let aik = &a.data[i * n + k];
                if aik.is_zero() {
                    continue;
                }
                for j in 0..n {
                    self.data[i * n + j].add_mul_assign(aik, &b.data[k * n + j]);
                }
            }
        }
    }

    /// `self -= s * b`.
    pub fn sub_scaled_assign(&mut self, s: &BigC, b: &Self) {
        if s.is_zero() {
            return;
        }
        for (x, y) in self.data.iter_mut().zip(&b.data) {
            x.sub_mul_assign(s, y);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(i, j) + o.get(i, j))
    }

    /// `self += o`.
    pub fn add_assign(&mut self, o: &Self) {
        for (x, y) in self.data.iter_mut().zip(&o.data) {
            x.re += &y.re;
            x.im += &y.im;
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(i, j) - o.get(i, j))
    }

    pub fn scale(&self, s: &BigC) -> Self {
        Self::from_fn(self.n, |i, j| self.get(i, j) * s)
    }

    pub fn trace(&self) -> BigC {
        let mut acc = BigC::zero(self.precision());
        for i in 0..self.n {
            acc = &acc + self.get(i, i);
        }
        acc
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(BigC::abs_f64).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation `|self - o|`.
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.sub(o).max_abs()
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let prec = self.precision();
        let mut a = self.clone();
        let mut inv = Self::identity(n, prec);
        for c in 0..n {
            let p = (c..n)
                .max_by(|&i, &j| a.get(i, c).abs_f64().total_cmp(&a.get(j, c).abs_f64()))
                .expect("nonempty range");
            if a.get(p, c).is_zero() {
                return Err(Error::Singular);
            }
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let piv = a.get(c, c).clone();
            for j in 0..n {
                a.set(c, j, a.get(c, j).checked_div(&piv)?);
                inv.set(c, j, inv.get(c, j).checked_div(&piv)?);
            }
            for i in 0..n {
                if i == c || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in 0..n {
                    let (ac, ic) = (a.get(c, j).clone(), inv.get(c, j).clone());
                    a.data[i * n + j].sub_mul_assign(&f, &ac);
                    inv.data[i * n + j].sub_mul_assign(&f, &ic);
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.n {
            self.data.swap(a * self.n + j, b * self.n + j);
        }
    }

    /// `self^e` for any integer `e`.
    pub fn powi(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::identity(self.n, self.precision());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Characteristic polynomial `det(λ - self)` as coefficients `c_0..c_n`
    /// (constant term first, monic), by the Faddeev-LeVerrier recursion.
    pub fn charpoly(&self) -> Vec<BigC> {
        let n = self.n;
        let prec = self.precision();
        let mut c = vec![BigC::zero(prec); n + 1];
        c[n] = BigC::one(prec);
        let mut m = Self::zeros(n, prec);
        let id = Self::identity(n, prec);
        for k in 1..=n {
            m = self.mul(&m).add(&id.scale(&c[n + 1 - k]));
            let t = self.mul(&m).trace();
            c[n - k] = (-&t).div_i64(k as i64);
        }
        c
    }

    /// Determinant by elimination with partial pivoting.
    pub fn det(&self) -> BigC {
        let n = self.n;
        let prec = self.precision();
        let mut a = self.clone();
        let mut det = BigC::one(prec);
        for c in 0..n {
            let p = (c..n)
                .max_by(|&i, &j| a.get(i, c).abs_f64().total_cmp(&a.get(j, c).abs_f64()))
                .expect("nonempty range");
            if a.get(p, c).is_zero() {
                return BigC::zero(prec);
            }
            if p != c {
                a.swap_rows(p, c);
                det = -&det;
            }
            let piv = a.get(c, c).clone();
            det = &det * &piv;
            for i in c + 1..n {
                let Ok(f) = a.get(i, c).checked_div(&piv) else { continue };
                for j in c..n {
                    let acj = a.get(c, j).clone();
                    a.data[i * n + j].sub_mul_assign(&f, &acj);
                }
            }
        }
        det
    }
}

/// Coefficients (constant term first) of `prod (λ - r)^m` over `(root, multiplicity)`.
pub fn poly_from_roots(roots: &[(BigC, usize)], prec: usize) -> Vec<BigC> {
    let mut p = vec![BigC::one(prec)];
    for (r, m) in roots {
        for _ in 0..*m {
            let mut q = vec![BigC::zero(prec); p.len() + 1];
            for (k, c) in p.iter().enumerate() {
                q[k + 1] = &q[k + 1] + c;
                q[k] = &q[k] - &(c * r);
            }
            p = q;
        }
    }
    p
}

/// Largest coefficient deviation between two polynomials of equal length.
pub fn max_coeff_diff(a: &[BigC], b: &[BigC]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs_f64()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nilcone_core::exact::rat;

    #[test]
    fn arithmetic_keeps_precision() {
        let a = BigC::from_rats(&rat(1, 3), &rat(-2, 7), 200);
        let b = BigC::from_rats(&rat(5, 11), &rat(1, 13), 200);
        let q = (&a * &b).checked_div(&b).unwrap();
        assert!((&q - &a).abs_f64() < 1e-55);
        assert_eq!(q.precision(), 200);
    }

    #[test]
    fn unit_root_and_charpoly() {
        let w = BigC::unit(&rat(1, 3), 128);
        let w3 = &(&w * &w) * &w;
        assert!((&w3 - &BigC::one(128)).abs_f64() < 1e-35);
        let m = CMatrix::from_fn(2, |i, j| BigC::from_i64([[2, 1], [0, 3]][i][j], 128));
        let cp = m.charpoly();
        let expect = poly_from_roots(&[(BigC::from_i64(2, 128), 1), (BigC::from_i64(3, 128), 1)], 128);
        assert!(max_coeff_diff(&cp, &expect) < 1e-35);
        let inv = m.inverse().unwrap();
        assert!(inv.mul(&m).max_abs_diff(&CMatrix::identity(2, 128)) < 1e-35);
        assert!((&m.det() - &BigC::from_i64(6, 128)).abs_f64() < 1e-35);
    }

    #[test]
    fn rationals_round_correctly() {
        let third = real_from_rat(&rat(-1, 3), 300);
        let back = Float::with_val(300, &third * 3u32) + 1u32;
        assert!(back.abs() < 1e-88);
    }
}
