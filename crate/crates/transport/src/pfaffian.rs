//! Reduction of a holonomic system of θ-operators to a first-order Pfaffian system
//! `θ_x F = A_x F`, `θ_y F = A_y F` over `Q(x, y)`.
//!
//! The left ideal is truncated at θ-degree `K`: every operator is prolonged by all
//! θ-monomials keeping the order at most `K`, and the resulting linear system in the
//! θ-monomials is eliminated exactly by fraction-free Gauss-Jordan over `Q[x, y]`.
//! Pivots are taken on the highest monomials first, so the standard monomials are the
//! lowest ones the ideal leaves free.

use nilcone_core::error::{Error, Result};
use nilcone_core::exact::ExactMatrix;
use nilcone_core::poly::Poly2;
use nilcone_core::series::ThetaOperator;
use nilcone_core::Rat;
use num_traits::{One, Zero};

/// Extra prolongation degrees tried beyond the largest operator order.
const MAX_EXTRA_DEGREE: u32 = 3;

/// A θ-monomial `θ_x^a θ_y^b`.
pub type ThetaMonomial = (u32, u32);

/// `A_x = num_x / den` and `A_y = num_y / den` acting on the jet of θ-monomials in `basis`.
#[derive(Clone, Debug, PartialEq)]
pub struct PfaffianSystem {
    basis: Vec<ThetaMonomial>,
    den: Poly2,
    num_x: Vec<Vec<Poly2>>,
    num_y: Vec<Vec<Poly2>>,
    prolongation_degree: u32,
}

impl PfaffianSystem {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ThetaMonomial] {
        &self.basis
    }

    /// Labels such as `1`, `θx`, `θx^2 θy`.
    pub fn basis_labels(&self) -> Vec<String> {
        self.basis.iter().map(|&(a, b)| theta_label(a, b)).collect()
    }

    /// Common denominator of both connection matrices.
    pub fn denominator(&self) -> &Poly2 {
        &self.den
    }

    pub fn numerator_x(&self) -> &[Vec<Poly2>] {
        &self.num_x
    }

    pub fn numerator_y(&self) -> &[Vec<Poly2>] {
        &self.num_y
    }

    /// Degree `K` of the truncated ideal that produced the system.
    pub fn prolongation_degree(&self) -> u32 {
        self.prolongation_degree
    }

    /// `den · x · y`; every pole of `θ_x`, `θ_y` connection coefficients in `d/dx`, `d/dy`
    /// form lies on its zero set.
    pub fn singular_polynomial(&self) -> Poly2 {
        self.den.shift(1, 1)
    }

    /// The flatness residual `θ_y(A_x) - θ_x(A_y) - [A_y, A_x]` multiplied by `den²`,
    /// computed in `Q[x, y]`.
    pub fn flatness_residual(&self) -> Vec<Vec<Poly2>> {
        let n = self.rank();
        let d = &self.den;
        let dy = d.theta_y();
        let dx = d.theta_x();
        let yx = mat_mul(&self.num_y, &self.num_x);
        let xy = mat_mul(&self.num_x, &self.num_y);
        let mut out = vec![vec![Poly2::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let nx = &self.num_x[i][j];
                let ny = &self.num_y[i][j];
                let a = &(d * &nx.theta_y()) - &(nx * &dy);
                let b = &(d * &ny.theta_x()) - &(ny * &dx);
                let comm = &yx[i][j] - &xy[i][j];
                out[i][j] = &(&a - &b) - &comm;
            }
        }
        out
    }

    /// Whether the system is integrable, as an exact polynomial identity.
    pub fn is_flat(&self) -> bool {
        self.flatness_residual().iter().flatten().all(Poly2::is_zero)
    }

    /// `(A_x, A_y)` at a rational point off the denominator.
    pub fn eval_at(&self, x: &Rat, y: &Rat) -> Result<(ExactMatrix, ExactMatrix)> {
        let d = self.den.eval(x, y);
        if d.is_zero() {
            return Err(Error::Singular);
        }
        let n = self.rank();
        let ax = ExactMatrix::from_fn(n, n, |i, j| self.num_x[i][j].eval(x, y) / &d);
        let ay = ExactMatrix::from_fn(n, n, |i, j| self.num_y[i][j].eval(x, y) / &d);
        Ok((ax, ay))
    }
}

/// `θx^a θy^b` rendered for reports.
pub fn theta_label(a: u32, b: u32) -> String {
    let part = |name: &str, k: u32| match k {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{k}")),
    };
    let parts: Vec<String> = [part("θx", a), part("θy", b)].into_iter().flatten().collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

fn mat_mul(a: &[Vec<Poly2>], b: &[Vec<Poly2>]) -> Vec<Vec<Poly2>> {
    let n = a.len();
    let mut out = vec![vec![Poly2::zero(); n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            for k in 0..n {
                if a[i][k].is_zero() || b[k][j].is_zero() {
                    continue;
                }
                *cell = &*cell + &(&a[i][k] * &b[k][j]);
            }
        }
    }
    out
}

/// `θ^α · op` in normal form, as a row `θ-monomial -> coefficient in Q[x, y]`.
fn prolonged_row(op: &ThetaOperator, a: u32, b: u32, monos: &[ThetaMonomial]) -> Vec<Poly2> {
    let mut row = vec![Poly2::zero(); monos.len()];
    let lift = Poly2::monomial(Rat::one(), a, b);
    for (&(i, j), p) in op.terms() {
        // θ^α x^i y^j P(θ) = x^i y^j (θ + (i, j))^α P(θ)
        let shifted = &lift.translate(&Rat::from_integer(i.into()), &Rat::from_integer(j.into())) * p;
        for (&(ta, tb), c) in shifted.terms() {
            let k = monos.iter().position(|&m| m == (ta, tb)).expect("monomial within the truncation");
            row[k].add_term((i, j), c.clone());
        }
    }
    row
}

/// θ-monomials of degree at most `k`, highest first (by degree, then by θy power).
fn monomials_descending(k: u32) -> Vec<ThetaMonomial> {
    let mut m: Vec<ThetaMonomial> = (0..=k).flat_map(|d| (0..=d).map(move |a| (a, d - a))).collect();
    m.sort_by_key(|&(a, b)| std::cmp::Reverse((a + b, b)));
    m
}

struct Elimination {
    /// `(pivot column, row)` for every pivot.
    pivots: Vec<(usize, Vec<Poly2>)>,
    /// The common pivot value after the last step.
    den: Poly2,
}

/// Fraction-free Gauss-Jordan: after each step every pivot row carries the same pivot
/// value and all entries are minors of the input, so each division is exact.
fn eliminate(mut m: Vec<Vec<Poly2>>, ncols: usize) -> Result<Elimination> {
    let mut prev = Poly2::one();
    let mut r = 0;
    let mut pivot_cols = Vec::new();
    for c in 0..ncols {
        let Some(p) = (r..m.len())
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| m[i][c].terms().count())
        else {
            continue;
        };
        m.swap(r, p);
        let piv = m[r][c].clone();
        for i in 0..m.len() {
            if i == r {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..ncols {
                let num = &(&piv * &m[i][j]) - &(&f * &m[r][j]);
                m[i][j] = num
                    .exact_div(&prev)?
                    .ok_or_else(|| Error::Inconsistent("fraction-free elimination is not exact".into()))?;
            }
        }
        prev = piv;
        pivot_cols.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let pivots = pivot_cols.into_iter().zip(m).collect();
    Ok(Elimination { pivots, den: prev })
}

/// Reduces `ops` to a Pfaffian system of the expected holonomic rank.
pub fn build_pfaffian(ops: &[ThetaOperator], expected_rank: usize) -> Result<PfaffianSystem> {
    let order = ops.iter().map(ThetaOperator::order).max().unwrap_or(0);
    let mut last_rank = 0;
    for k in order.max(1)..=order.max(1) + MAX_EXTRA_DEGREE {
        let monos = monomials_descending(k);
        let mut rows = Vec::new();
        for op in ops {
            let free = k - op.order();
            for (a, b) in monomials_descending(free) {
                rows.push(prolonged_row(op, a, b, &monos));
            }
        }
        let elim = eliminate(rows, monos.len())?;
        let pivot_monos: Vec<ThetaMonomial> = elim.pivots.iter().map(|(c, _)| monos[*c]).collect();
        if pivot_monos.contains(&(0, 0)) {
            return Err(Error::WrongHolonomicRank { got: 0, expected: expected_rank });
        }
        let mut basis: Vec<ThetaMonomial> = monos.iter().copied().filter(|m| !pivot_monos.contains(m)).collect();
        basis.sort_by_key(|&(a, b)| (a + b, b));
        last_rank = basis.len();
        if basis.iter().any(|&(a, b)| a + b >= k) {
            continue;
        }
        let sys = assemble(&basis, &monos, &elim, k)?;
        if sys.is_flat() {
            if sys.rank() != expected_rank {
                return Err(Error::WrongHolonomicRank { got: sys.rank(), expected: expected_rank });
            }
            return Ok(sys);
        }
    }
    Err(Error::WrongHolonomicRank { got: last_rank, expected: expected_rank })
}

fn assemble(basis: &[ThetaMonomial], monos: &[ThetaMonomial], elim: &Elimination, k: u32) -> Result<PfaffianSystem> {
    let n = basis.len();
    // normalize so the denominator has constant term 1 when it has one
    let scale = {
        let c = elim.den.coeff(0, 0);
        if c.is_zero() {
            elim.den.terms().next().map(|(_, c)| c.clone()).ok_or(Error::Singular)?
        } else {
            c
        }
    };
    let inv = Rat::one() / &scale;
    let den = elim.den.scale(&inv);
    // reduction of a monomial: coefficients over the basis, times den
    let reduce = |m: ThetaMonomial| -> Result<Vec<Poly2>> {
        if let Some(j) = basis.iter().position(|&b| b == m) {
            let mut v = vec![Poly2::zero(); n];
            v[j] = den.clone();
            return Ok(v);
        }
        let (_, row) = elim
            .pivots
            .iter()
            .find(|(c, _)| monos[*c] == m)
            .ok_or_else(|| Error::Inconsistent(format!("{} is neither reduced nor free", theta_label(m.0, m.1))))?;
        Ok(basis
            .iter()
            .map(|b| {
                let c = monos.iter().position(|x| x == b).expect("basis monomial is a column");
                -&row[c].scale(&inv)
            })
            .collect())
    };
    let mut num_x = Vec::with_capacity(n);
    let mut num_y = Vec::with_capacity(n);
    for &(a, b) in basis {
        num_x.push(reduce((a + 1, b))?);
        num_y.push(reduce((a, b + 1))?);
    }
    Ok(PfaffianSystem { basis: basis.to_vec(), den, num_x, num_y, prolongation_degree: k })
}

/// `θ_x(θ_x + c - 1) - x(θ_x + a)(θ_x + b)` together with `θ_y`: the Gauss
/// hypergeometric equation embedded in two variables, of rank 2.
pub fn hypergeometric_operators(a: &Rat, b: &Rat, c: &Rat) -> Vec<ThetaOperator> {
    let t = Poly2::x();
    let shift = |s: &Rat| &t + &Poly2::constant(s.clone());
    let lead = &t * &shift(&(c - Rat::one()));
    let tail = -&(&shift(a) * &shift(b));
    let op = ThetaOperator::left(0, 0, lead).plus(&ThetaOperator::left(1, 0, tail));
    vec![op, ThetaOperator::left(0, 0, Poly2::y())]
}

#[cfg(test)]
mod tests {
    use super::*;
    use nilcone_core::exact::rat;

    #[test]
    fn labels_and_ordering() {
        assert_eq!(theta_label(0, 0), "1");
        assert_eq!(theta_label(2, 1), "θx^2 θy");
        assert_eq!(monomials_descending(1), vec![(0, 1), (1, 0), (0, 0)]);
    }

    #[test]
    fn hypergeometric_rank_two() {
        let ops = hypergeometric_operators(&rat(1, 2), &rat(1, 5), &rat(1, 3));
        let sys = build_pfaffian(&ops, 2).unwrap();
        assert_eq!(sys.basis_labels(), vec!["1", "θx"]);
        assert!(sys.is_flat());
        // θx^2 = x(θx+a)(θx+b)/(1-x) - (c-1)θx/(1-x) on the solution jet
        let (ax, ay) = sys.eval_at(&rat(1, 2), &rat(3, 1)).unwrap();
        assert!(ay.is_zero());
        assert_eq!(ax.get(0, 1), &rat(1, 1));
    }
}
