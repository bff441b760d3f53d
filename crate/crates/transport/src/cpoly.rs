//! Univariate polynomials with arbitrary-precision complex coefficients, restriction of
//! bivariate rational polynomials to complex lines, and `f64` root location.

use nilcone_core::poly::Poly2;
use num_complex::Complex64;

use crate::bigc::BigC;

/// Coefficients in ascending powers.
#[derive(Clone, Debug, PartialEq)]
pub struct CPoly {
    coeffs: Vec<BigC>,
}

impl CPoly {
    pub fn new(coeffs: Vec<BigC>) -> Self {
        Self { coeffs }
    }

    pub fn zero(prec: usize) -> Self {
        Self { coeffs: vec![BigC::zero(prec)] }
    }

    /// `a + b t`.
    pub fn linear(a: BigC, b: BigC) -> Self {
        Self { coeffs: vec![a, b] }
    }

    pub fn coeffs(&self) -> &[BigC] {
        &self.coeffs
    }

    /// Degree counting exact-zero leading coefficients away.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = self.coeffs[0].precision().max(o.coeffs[0].precision());
        let mut out = vec![BigC::zero(prec); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self { coeffs: out }
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.coeffs[0].precision().max(o.coeffs[0].precision());
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n)
            .map(|k| match (self.coeffs.get(k), o.coeffs.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => BigC::zero(prec),
            })
            .collect();
        Self { coeffs }
    }

    pub fn scale(&self, s: &BigC) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Coefficients of `p(t0 + h s)` in powers of `s`.
    pub fn shift_scale(&self, t0: &BigC, h: &BigC) -> Self {
        // repeated synthetic division gives the Taylor coefficients at t0
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for k in (i..n - 1).rev() {
                let t = &c[k + 1] * t0;
                c[k] = &c[k] + &t;
            }
        }
        let mut hp = BigC::one(h.precision());
        for ck in c.iter_mut() {
            *ck = &*ck * &hp;
            hp = &hp * h;
        }
        Self { coeffs: c }
    }

    pub fn eval(&self, t: &BigC) -> BigC {
        let mut acc = BigC::zero(t.precision());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * t) + c;
        }
        acc
    }

    pub fn to_f64(&self) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .map(|c| {
                let (a, b) = c.to_f64();
                Complex64::new(a, b)
            })
            .collect()
    }
}

/// Restriction of `p` to the line `(x0 + dx t, y0 + dy t)`, given the powers of both
/// coordinate polynomials.
pub fn restrict(p: &Poly2, xp: &[CPoly], yp: &[CPoly], prec: usize) -> CPoly {
    let mut acc = CPoly::zero(prec);
    for (&(i, j), c) in p.terms() {
        let c = BigC::from_rat(c, prec);
        acc = acc.add(&xp[i as usize].mul(&yp[j as usize]).scale(&c));
    }
    acc
}

/// Powers `1, l, l^2, ..., l^n` of a polynomial.
pub fn powers(l: &CPoly, n: usize, prec: usize) -> Vec<CPoly> {
    let mut out = vec![CPoly::new(vec![BigC::one(prec)])];
    for k in 0..n {
        out.push(out[k].mul(l));
    }
    out
}

/// All complex roots of `sum c_k t^k` by Aberth-Ehrlich iteration. Exact-zero leading
/// coefficients are dropped; a constant has no roots.
pub fn roots_f64(coeffs: &[Complex64]) -> Vec<Complex64> {
    let Some(n) = coeffs.iter().rposition(|c| *c != Complex64::new(0.0, 0.0)) else {
        return Vec::new();
    };
    if n == 0 {
        return Vec::new();
    }
    let c: Vec<Complex64> = coeffs[..=n].iter().map(|v| v / coeffs[n]).collect();
    // initial guesses on a circle of the geometric-mean root radius
    let r0 = c[0].norm().powf(1.0 / n as f64).max(1e-300);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r0, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    let eval = |t: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for ck in c.iter().rev() {
            dp = dp * t + p;
            p = p * t + ck;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1e-300));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_product() {
        // (t - 1)(t + 2i)(t - 3) = t^3 + (2i - 4) t^2 + (3 - 8i) t + 6i
        let c = [Complex64::new(0.0, 6.0), Complex64::new(3.0, -8.0), Complex64::new(-4.0, 2.0), Complex64::new(1.0, 0.0)];
        let mut r = roots_f64(&c);
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((r[0] - Complex64::new(0.0, -2.0)).norm() < 1e-12);
        assert!((r[1] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((r[2] - Complex64::new(3.0, 0.0)).norm() < 1e-12);
        assert!(roots_f64(&[Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)]).is_empty());
    }

    #[test]
    fn taylor_shift() {
        let p = CPoly::new([1, 2, 3].iter().map(|&k| BigC::from_i64(k, 128)).collect());
        // p(2 + 3s) = 17 + 42 s + 27 s^2
        let q = p.shift_scale(&BigC::from_i64(2, 128), &BigC::from_i64(3, 128));
        let want = [17, 42, 27];
        for (c, w) in q.coeffs().iter().zip(want) {
            assert!((c - &BigC::from_i64(w, 128)).abs_f64() < 1e-30);
        }
    }
}
