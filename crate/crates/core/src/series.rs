//! Truncated power series with logarithmic symbols, θ-operators in normal form,
//! Frobenius solutions of the ℙ³×ℙ³ Picard-Fuchs system, flop-invariance identities
//! of Yukawa couplings, and the symbolic prepotential shift.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{format_rat, int, ExactMatrix, Rat};
use crate::hodge::CouplingTensor;
use crate::poly::{Poly2, RationalFn, UniPoly};

/// Exponents `(n, m, p, q)` of `x^n y^m lx^p ly^q`, where `lx = log x`, `ly = log y`.
pub type LogMonomial = (u32, u32, u32, u32);

/// A power series in `x, y` with polynomial dependence on `log x`, `log y`,
/// truncated at total degree `degree` in `x, y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PSeries {
    degree: u32,
    terms: BTreeMap<LogMonomial, Rat>,
}

impl PSeries {
    pub fn zero(degree: u32) -> Self {
        Self { degree, terms: BTreeMap::new() }
    }

    pub fn one(degree: u32) -> Self {
        let mut s = Self::zero(degree);
        s.add_term((0, 0, 0, 0), Rat::one());
        s
    }

    /// `sum f(n, m) x^n y^m` over `n + m <= degree`.
    pub fn from_fn(degree: u32, mut f: impl FnMut(u32, u32) -> Rat) -> Self {
        let mut s = Self::zero(degree);
        for d in 0..=degree {
            for n in 0..=d {
                s.add_term((n, d - n, 0, 0), f(n, d - n));
            }
        }
        s
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Adds `c x^n y^m lx^p ly^q`; terms above the truncation are dropped.
    pub fn add_term(&mut self, e: LogMonomial, c: Rat) {
        if c.is_zero() || e.0 + e.1 > self.degree {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, n: u32, m: u32) -> Rat {
        self.log_coeff((n, m, 0, 0))
    }

    pub fn log_coeff(&self, e: LogMonomial) -> Rat {
        self.terms.get(&e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LogMonomial, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest total degree with a nonzero coefficient.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().map(|(n, m, _, _)| n + m).min()
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        let mut out = Self::zero(self.degree.min(o.degree));
        for (e, c) in self.terms.iter().chain(&o.terms) {
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.checked_add(&o.scale(&-Rat::one()))
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut out = Self::zero(self.degree);
        for (e, c) in &self.terms {
            out.add_term(*e, c * s);
        }
        out
    }

    /// Multiplies by `x^i y^j` keeping the truncation degree.
    pub fn mul_monomial(&self, i: u32, j: u32) -> Self {
        let mut out = Self::zero(self.degree);
        for ((n, m, p, q), c) in &self.terms {
            out.add_term((n + i, m + j, *p, *q), c.clone());
        }
        out
    }

    /// Multiplies by `lx^p ly^q`.
    pub fn mul_log(&self, p: u32, q: u32) -> Self {
        let mut out = Self::zero(self.degree);
        for ((n, m, a, b), c) in &self.terms {
            out.add_term((*n, *m, a + p, b + q), c.clone());
        }
        out
    }

    /// `θ_x = x d/dx` with `θ_x lx = 1`.
    pub fn theta_x(&self) -> Self {
        let mut out = Self::zero(self.degree);
        for ((n, m, p, q), c) in &self.terms {
            out.add_term((*n, *m, *p, *q), c * int(i64::from(*n)));
            if *p > 0 {
                out.add_term((*n, *m, p - 1, *q), c * int(i64::from(*p)));
            }
        }
        out
    }

    /// `θ_y = y d/dy` with `θ_y ly = 1`.
    pub fn theta_y(&self) -> Self {
        let mut out = Self::zero(self.degree);
        for ((n, m, p, q), c) in &self.terms {
            out.add_term((*n, *m, *p, *q), c * int(i64::from(*m)));
            if *q > 0 {
                out.add_term((*n, *m, *p, q - 1), c * int(i64::from(*q)));
            }
        }
        out
    }
}

/// A differential operator `sum x^i y^j P_ij(θ_x, θ_y)` with the polynomial factor on
/// the left. `Poly2` variables stand for `(θ_x, θ_y)` in the `P_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ThetaOperator {
    terms: BTreeMap<(u32, u32), Poly2>,
}

impl ThetaOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `x^i y^j P(θ)`.
    pub fn left(i: u32, j: u32, p: Poly2) -> Self {
        let mut op = Self::zero();
        op.add(i, j, p);
        op
    }

    /// `P(θ) x^i y^j`, brought to normal form `x^i y^j P(θ_x + i, θ_y + j)`.
    pub fn right(p: &Poly2, i: u32, j: u32) -> Self {
        Self::left(i, j, p.translate(&int(i64::from(i)), &int(i64::from(j))))
    }

    fn add(&mut self, i: u32, j: u32, p: Poly2) {
        let e = self.terms.entry((i, j)).or_default();
        *e = &*e + &p;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((i, j), p) in &o.terms {
            out.add(*i, *j, p.clone());
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Poly2)> {
        self.terms.iter()
    }

    /// Largest total degree of the polynomial coefficients.
    pub fn coefficient_degree(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    /// Largest total degree in `θ`.
    pub fn order(&self) -> u32 {
        self.terms.values().filter_map(Poly2::total_degree).max().unwrap_or(0)
    }
}

/// Applies an operator term by term; the result is exact through the input's degree.
pub fn apply_theta(op: &ThetaOperator, s: &PSeries) -> Result<PSeries> {
    let need = op.coefficient_degree();
    if s.degree() < need {
        return Err(Error::TruncationTooSmall { have: s.degree() as usize, need: need as usize });
    }
    let mut out = PSeries::zero(s.degree());
    let mut powers: BTreeMap<(u32, u32), PSeries> = BTreeMap::new();
    for ((i, j), p) in op.terms() {
        let mut acc = PSeries::zero(s.degree());
        for ((a, b), c) in p.terms() {
            let t = theta_power(s, *a, *b, &mut powers);
            acc = acc.checked_add(&t.scale(c))?;
        }
        out = out.checked_add(&acc.mul_monomial(*i, *j))?;
    }
    Ok(out)
}

fn theta_power(s: &PSeries, a: u32, b: u32, memo: &mut BTreeMap<(u32, u32), PSeries>) -> PSeries {
    if let Some(t) = memo.get(&(a, b)) {
        return t.clone();
    }
    let t = if a == 0 && b == 0 {
        s.clone()
    } else if a > 0 {
        theta_power(s, a - 1, b, memo).theta_x()
    } else {
        theta_power(s, a, b - 1, memo).theta_y()
    };
    memo.insert((a, b), t.clone());
    t
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn harmonic(n: u32) -> Rat {
    (1..=n).fold(Rat::zero(), |acc, k| acc + Rat::new(1.into(), BigInt::from(k)))
}

/// Coefficient `(2n+2m)! ((n+m)!)^2 / (n!^4 m!^4)` of the fundamental period.
pub fn w0_coefficient(n: u32, m: u32) -> Rat {
    let num = factorial(2 * n + 2 * m) * factorial(n + m).pow(2);
    let den = factorial(n).pow(4) * factorial(m).pow(4);
    Rat::new(num, den)
}

/// The holomorphic period of the ℙ³×ℙ³ family through total degree `degree`.
pub fn w0_series(degree: u32) -> PSeries {
    PSeries::from_fn(degree, w0_coefficient)
}

/// The Frobenius solution `lx w0 + sum c(n,m) (2 H_{2n+2m} + 2 H_{n+m} - 4 H_n) x^n y^m`
/// (or its `y` counterpart), the derivative of the Γ-series in the `x` exponent.
pub fn w1_series(degree: u32, along_x: bool) -> PSeries {
    let w0 = w0_series(degree);
    let corr = PSeries::from_fn(degree, |n, m| {
        let k = if along_x { n } else { m };
        w0_coefficient(n, m) * (int(2) * harmonic(2 * n + 2 * m) + int(2) * harmonic(n + m) - int(4) * harmonic(k))
    });
    let log = if along_x { w0.mul_log(1, 0) } else { w0.mul_log(0, 1) };
    log.checked_add(&corr).expect("same truncation")
}

/// The two Picard-Fuchs operators of the ℙ³×ℙ³ family:
/// `D1 = 3θx² - 4θxθy + 3θy² - S(2S-1)(10x + 6y) + 4θx(2S-1)(x - y)` and
/// `D2 = θx³ - θx²θy + θxθy² - θy³ - 2S²(2S-1)(x - y)` with `S = θx + θy`, each
/// θ-polynomial written to the left of its `x, y` factor.
pub fn picard_fuchs_p3p3() -> (ThetaOperator, ThetaOperator) {
    let tx = Poly2::x();
    let ty = Poly2::y();
    let s = &tx + &ty;
    let two_s_1 = &s.scale(&int(2)) - &Poly2::one();
    let ss = &s * &two_s_1;
    let d1_0 = Poly2::from_terms(&[(3, 2, 0), (-4, 1, 1), (3, 0, 2)]);
    let t4 = &tx.scale(&int(4)) * &two_s_1;
    let d1 = ThetaOperator::left(0, 0, d1_0)
        .plus(&ThetaOperator::right(&ss.scale(&int(-10)), 1, 0))
        .plus(&ThetaOperator::right(&ss.scale(&int(-6)), 0, 1))
        .plus(&ThetaOperator::right(&t4, 1, 0))
        .plus(&ThetaOperator::right(&t4.scale(&int(-1)), 0, 1));
    let d2_0 = Poly2::from_terms(&[(1, 3, 0), (-1, 2, 1), (1, 1, 2), (-1, 0, 3)]);
    let s2 = &(&s * &s) * &two_s_1;
    let d2 = ThetaOperator::left(0, 0, d2_0)
        .plus(&ThetaOperator::right(&s2.scale(&int(-2)), 1, 0))
        .plus(&ThetaOperator::right(&s2.scale(&int(2)), 0, 1));
    (d1, d2)
}

/// Result of applying the Picard-Fuchs operators to a candidate solution.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnnihilationReport {
    pub solution: String,
    pub degree: u32,
    /// Degree through which the residual is exact.
    pub valid_through: u32,
    pub d1_zero: bool,
    pub d2_zero: bool,
}

/// Checks `D1 w = D2 w = 0` through the truncation degree.
pub fn check_annihilation(name: &str, w: &PSeries) -> Result<AnnihilationReport> {
    let (d1, d2) = picard_fuchs_p3p3();
    let r1 = apply_theta(&d1, w)?;
    let r2 = apply_theta(&d2, w)?;
    Ok(AnnihilationReport {
        solution: name.to_string(),
        degree: w.degree(),
        valid_through: w.degree(),
        d1_zero: r1.is_zero(),
        d2_zero: r2.is_zero(),
    })
}

/// The ℙ³×ℙ³ discriminant `(1-4x-4y)^4 - 128xy(17 + 56(x+y) + 16(x²+y²))`.
pub fn discriminant_p3p3() -> Poly2 {
    let l = Poly2::from_terms(&[(1, 0, 0), (-4, 1, 0), (-4, 0, 1)]);
    let l2 = &l * &l;
    let inner = Poly2::from_terms(&[(17, 0, 0), (56, 1, 0), (56, 0, 1), (16, 2, 0), (16, 0, 2)]);
    let xy = Poly2::monomial(int(128), 1, 1);
    &(&l2 * &l2) - &(&xy * &inner)
}

/// The ℙ⁴×ℙ⁴ discriminant `(1-x-y)^5 - 5^4 xy(1-x-y)^2 + 5^5 xy(xy - x - y)`.
pub fn discriminant_p4p4() -> Poly2 {
    let l = Poly2::from_terms(&[(1, 0, 0), (-1, 1, 0), (-1, 0, 1)]);
    let l2 = &l * &l;
    let l5 = &(&l2 * &l2) * &l;
    let t2 = &Poly2::monomial(int(625), 1, 1) * &l2;
    let t3 = &Poly2::monomial(int(3125), 1, 1) * &Poly2::from_terms(&[(1, 1, 1), (-1, 1, 0), (-1, 0, 1)]);
    &(&l5 - &t2) + &t3
}

/// Multiplicity of `x = root` as a zero of the restriction to `y = 0`.
pub fn tangency_multiplicity(dis: &Poly2, root: &Rat) -> Result<usize> {
    dis.restrict_y0().root_multiplicity(root)
}

/// `sum_d n(d) d^3 q^d / (1 - q^d)`.
pub fn instanton_sum(n0: &[(u32, i64)]) -> Result<RationalFn> {
    let mut acc = RationalFn::constant(Rat::zero());
    for &(d, count) in n0 {
        let d = d as usize;
        let num = UniPoly::monomial(int(count) * int((d * d * d) as i64), d);
        let den = &UniPoly::constant(Rat::one()) - &UniPoly::monomial(Rat::one(), d);
        acc = acc.checked_add(&RationalFn::new(num, den)?)?;
    }
    Ok(acc)
}

/// Checks `C' + g(q') = C_f + jac^3 g(1/q')` in `Q(q')`, with `g` the instanton sum.
/// Fails with the residual rational function.
pub fn flop_invariance_check(c_prime: &Rat, c_flop: &Rat, n0: &[(u32, i64)], jac: &Rat) -> Result<()> {
    let g = instanton_sum(n0)?;
    let lhs = RationalFn::constant(c_prime.clone()).checked_add(&g)?;
    let j3 = jac * jac * jac;
    let rhs = RationalFn::constant(c_flop.clone()).checked_add(&g.substitute_reciprocal()?.scale(&j3))?;
    let res = lhs.checked_sub(&rhs)?;
    if res.is_zero() {
        Ok(())
    } else {
        Err(Error::IdentityFails(res.to_string()))
    }
}

/// `C'_{abc} = sum C_{ijk} J_ia J_jb J_kc` for `J = dt/dt'`.
pub fn coupling_pullback(c: &CouplingTensor, jac: &ExactMatrix) -> Result<CouplingTensor> {
    c.pullback(jac)
}

/// The jacobian `dt/dt'` of a linear mirror-map transform given as `dt'/dt`.
pub fn jacobian_from_transform(dtp_dt: &ExactMatrix) -> Result<ExactMatrix> {
    dtp_dt.inverse()
}

/// A quadratic form `s^T M s` in the period symbols `s = (a_0..a_r, b_0..b_r)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodSymbolForm {
    pub r: usize,
    /// Symmetric matrix of size `2(r+1)`.
    pub matrix: ExactMatrix,
}

impl PeriodSymbolForm {
    fn symbol(&self, k: usize) -> String {
        if k <= self.r {
            format!("a{k}")
        } else {
            format!("b{}", k - self.r - 1)
        }
    }

    /// Canonical monomials `(name, coefficient)` such as `("a1^2", -33/2)`.
    pub fn monomials(&self) -> Vec<(String, Rat)> {
        let n = self.matrix.rows();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                let c = if i == j { self.matrix.get(i, i).clone() } else { self.matrix.get(i, j) * int(2) };
                if c.is_zero() {
                    continue;
                }
                let name =
                    if i == j { format!("{}^2", self.symbol(i)) } else { format!("{}*{}", self.symbol(i), self.symbol(j)) };
                out.push((name, c));
            }
        }
        out
    }

    /// Whether any monomial involves a `b` symbol.
    pub fn has_b_terms(&self) -> bool {
        let n = self.matrix.rows();
        (0..n).any(|i| (self.r + 1..n).any(|j| !self.matrix.get(i, j).is_zero()))
    }

    /// The symmetric `Q` with `form = (1/2) a^T Q a` on the `a` symbols.
    pub fn a_matrix(&self) -> ExactMatrix {
        let k = self.r + 1;
        ExactMatrix::from_fn(k, k, |i, j| self.matrix.get(i, j) * int(2))
    }
}

impl fmt::Display for PeriodSymbolForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.monomials();
        if m.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = m.iter().map(|(n, c)| format!("{} {n}", format_rat(c))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Index of `a_i` and `b_i` in the period vector ordered `(A_0..A_r, B_r..B_0)`.
fn period_index(r: usize, is_b: bool, i: usize) -> usize {
    if is_b {
        2 * r + 1 - i
    } else {
        i
    }
}

/// `F' - F` for `F = (1/2) sum_{i<=r} a_i b_i` and periods transformed by `Π' = C Π`,
/// as a quadratic form in period symbols. Errors if `b` symbols survive.
pub fn prepotential_shift(connection: &ExactMatrix, r: usize) -> Result<PeriodSymbolForm> {
    let n = 2 * (r + 1);
    if connection.rows() != n || connection.cols() != n {
        return Err(Error::DimensionMismatch(format!("connection must be {n}x{n}")));
    }
    // symbol order s = (a_0..a_r, b_0..b_r); Π = P s
    let p = ExactMatrix::from_fn(n, n, |row, col| {
        let (is_b, i) = if col <= r { (false, col) } else { (true, col - r - 1) };
        if period_index(r, is_b, i) == row {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    let half = Rat::new(1.into(), 2.into());
    // F = (1/2) sum Π_{A_i} Π_{B_i} = Π^T K Π with K symmetric
    let k = ExactMatrix::from_fn(n, n, |a, b| {
        let pair = (0..=r).any(|i| {
            let (ia, ib) = (period_index(r, false, i), period_index(r, true, i));
            (a == ia && b == ib) || (a == ib && b == ia)
        });
        if pair {
            &half * &half
        } else {
            Rat::zero()
        }
    });
    let f = p.transpose().checked_mul(&k)?.checked_mul(&p)?;
    let cp = connection.checked_mul(&p)?;
    let fp = cp.transpose().checked_mul(&k)?.checked_mul(&cp)?;
    let form = PeriodSymbolForm { r, matrix: fp.checked_sub(&f)? };
    if form.has_b_terms() {
        let b = form.monomials().into_iter().find(|(m, _)| m.contains('b')).expect("b term present");
        return Err(Error::NotAQuadraticShiftInA(format!("{} {}", format_rat(&b.1), b.0)));
    }
    Ok(form)
}

/// Comparison of a computed shift with a printed `Q` (compared as quadratic forms on
/// `a_1..a_r`, so only the symmetric part of the printed matrix matters).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrepotentialComparison {
    pub computed: String,
    pub computed_q: Vec<Vec<String>>,
    pub printed_q: Vec<Vec<String>>,
    pub pure_a: bool,
    pub agrees: bool,
}

pub fn compare_prepotential(form: &PeriodSymbolForm, printed: &ExactMatrix) -> Result<PrepotentialComparison> {
    let q = form.a_matrix();
    let r = form.r;
    if printed.rows() != r || printed.cols() != r {
        return Err(Error::DimensionMismatch(format!("printed Q must be {r}x{r} on a_1..a_{r}")));
    }
    let half = Rat::new(1.into(), 2.into());
    let sym = printed.checked_add(&printed.transpose())?.scale(&half);
    let sub = ExactMatrix::from_fn(r, r, |i, j| q.get(i + 1, j + 1).clone());
    let a0_free = (0..=r).all(|j| q.get(0, j).is_zero());
    let rows = |m: &ExactMatrix| m.to_rows().iter().map(|r| r.iter().map(format_rat).collect()).collect();
    Ok(PrepotentialComparison {
        computed: form.to_string(),
        computed_q: rows(&sub),
        printed_q: rows(printed),
        pure_a: !form.has_b_terms(),
        agrees: a0_free && sub == sym,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_acts_on_logs_by_leibniz() {
        let s = PSeries::one(3).mul_log(2, 0).mul_monomial(1, 0);
        let t = s.theta_x();
        assert_eq!(t.log_coeff((1, 0, 2, 0)), int(1));
        assert_eq!(t.log_coeff((1, 0, 1, 0)), int(2));
        assert!(PSeries::one(2).theta_x().is_zero());
    }

    #[test]
    fn normal_form_shifts_theta() {
        // θ_x x = x (θ_x + 1)
        let op = ThetaOperator::right(&Poly2::x(), 1, 0);
        let s = PSeries::one(2);
        let r = apply_theta(&op, &s).unwrap();
        assert_eq!(r.coeff(1, 0), int(1));
        assert!(matches!(apply_theta(&op, &PSeries::one(0)), Err(Error::TruncationTooSmall { have: 0, need: 1 })));
    }

    #[test]
    fn translate_expands_binomially() {
        let p = Poly2::from_terms(&[(1, 2, 1)]);
        let q = p.translate(&int(1), &int(-2));
        // (x+1)^2 (y-2) at x = 2, y = 5 is 27
        assert_eq!(q.eval(&int(2), &int(5)), int(27));
    }
}
