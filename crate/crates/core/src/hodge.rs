//! Monodromy weight filtrations, LCSL conditions, coupling tensors and the
//! quotient of endomorphisms by those vanishing on `W_2`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    contains, format_rat, image_of, is_nilpotent, is_unipotent, primitive_integer_vector,
    same_span, span_intersection, span_sum, unipotent_log, ExactMatrix, Rat,
};

/// An increasing filtration `W_0 ⊆ W_1 ⊆ .. ⊆ W_{2c}` given by column bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    dimension: usize,
    center: usize,
    steps: Vec<ExactMatrix>,
}

impl Filtration {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn center(&self) -> usize {
        self.center
    }

    /// Basis of `W_j`; empty below 0 and the full space above `2c`.
    pub fn step(&self, j: i64) -> ExactMatrix {
        if j < 0 {
            return ExactMatrix::zeros(self.dimension, 0);
        }
        match self.steps.get(j as usize) {
            Some(w) => w.clone(),
            None => ExactMatrix::identity(self.dimension),
        }
    }

    pub fn steps(&self) -> &[ExactMatrix] {
        &self.steps
    }

    /// `dim W_j` for `j = 0..=2c`.
    pub fn dims(&self) -> Vec<usize> {
        self.steps.iter().map(ExactMatrix::cols).collect()
    }

    /// `dim W_{2k}` for `k = 0..=c`.
    pub fn even_dims(&self) -> Vec<usize> {
        self.steps.iter().step_by(2).map(ExactMatrix::cols).collect()
    }

    /// Whether `N W_j ⊆ W_{j-2}` for every `j`.
    pub fn is_lowered_by(&self, n: &ExactMatrix) -> Result<bool> {
        for j in 0..self.steps.len() as i64 {
            let img = image_of(n, &self.step(j))?;
            if !contains(&self.step(j - 2), &img)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `N^k` induces isomorphisms `Gr_{c+k} -> Gr_{c-k}` for all `k >= 1`.
    pub fn has_hard_lefschetz(&self, n: &ExactMatrix) -> Result<bool> {
        let c = self.center as i64;
        let gr = |j: i64| self.step(j).cols() - self.step(j - 1).cols();
        for k in 1..=c {
            if gr(c + k) != gr(c - k) {
                return Ok(false);
            }
            let nk = n.pow(k as u32)?;
            let img = span_sum(&image_of(&nk, &self.step(c + k))?, &self.step(c - k - 1))?;
            if !same_span(&img, &self.step(c - k))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether two filtrations have identical steps as subspaces.
    pub fn same_as(&self, other: &Self) -> Result<bool> {
        if self.dimension != other.dimension || self.center != other.center {
            return Ok(false);
        }
        for (a, b) in self.steps.iter().zip(&other.steps) {
            if !same_span(a, b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Weight filtration of a nilpotent `N` centered at `center`, by the closed form
/// `W_j = sum_{a-b = j-center} (Ker N^{a+1} ∩ Im N^b)`.
pub fn weight_filtration(n: &ExactMatrix, center: usize) -> Result<Filtration> {
    n.require_square("weight_filtration")?;
    let dim = n.rows();
    if !is_nilpotent(n)? {
        return Err(Error::NotNilpotent { dim });
    }
    if !n.pow(center as u32 + 1)?.is_zero() {
        return Err(Error::WrongCenter(center + 1));
    }
    let powers: Vec<ExactMatrix> =
        (0..=center + 1).map(|k| n.pow(k as u32)).collect::<Result<_>>()?;
    let kernels: Vec<ExactMatrix> = powers.iter().map(ExactMatrix::kernel).collect();
    let images: Vec<ExactMatrix> = powers.iter().map(ExactMatrix::column_space).collect();
    let c = center as i64;
    let mut steps = Vec::with_capacity(2 * center + 1);
    for j in 0..=2 * c {
        let shift = j - c;
        let mut w = ExactMatrix::zeros(dim, 0);
        for b in 0..=c + 1 {
            let a = b + shift;
            if a < 0 {
                continue;
            }
            let ker = kernels.get((a + 1) as usize).cloned().unwrap_or_else(|| ExactMatrix::identity(dim));
            let piece = span_intersection(&ker, &images[b as usize])?;
            w = span_sum(&w, &piece)?;
        }
        steps.push(w);
    }
    Ok(Filtration { dimension: dim, center, steps })
}

/// Outcome of the three LCSL conditions at a boundary point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LcslReport {
    pub unipotent_flags: Vec<bool>,
    /// `(dim W_0, dim W_2)` of the filtration of `sum N_i`, if all logs exist.
    pub filtration_dims: Option<(usize, usize)>,
    #[serde(serialize_with = "ser_opt_matrix")]
    pub m_matrix: Option<ExactMatrix>,
    #[serde(serialize_with = "ser_opt_rat")]
    pub m_det: Option<Rat>,
    pub verdict: bool,
}

fn ser_opt_matrix<S: serde::Serializer>(m: &Option<ExactMatrix>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Option<Vec<Vec<String>>> =
        m.as_ref().map(|m| m.to_rows().iter().map(|r| r.iter().map(format_rat).collect()).collect());
    rows.serialize(s)
}

fn ser_opt_rat<S: serde::Serializer>(r: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    r.as_ref().map(format_rat).serialize(s)
}

/// Checks unipotency, `dim W_0 = 1`, `dim W_2 = 1 + r`, and invertibility of the
/// pairing `N_j w_k = m_{jk} w_0` for monodromies `generators` at weight `center`.
///
/// `w_0` is the primitive integral generator of `W_0`; the `w_k` extend it to a
/// basis of `W_2` by column reduction in coordinate order, so `m` is basis-dependent
/// while `det m != 0` is not.
pub fn lcsl_verify(generators: &[ExactMatrix], center: usize) -> Result<LcslReport> {
    let r = generators.len();
    let unipotent_flags: Vec<bool> =
        generators.iter().map(is_unipotent).collect::<Result<_>>()?;
    let mut report = LcslReport {
        unipotent_flags: unipotent_flags.clone(),
        filtration_dims: None,
        m_matrix: None,
        m_det: None,
        verdict: false,
    };
    if r == 0 || unipotent_flags.iter().any(|f| !f) {
        return Ok(report);
    }
    let logs: Vec<ExactMatrix> = generators.iter().map(unipotent_log).collect::<Result<_>>()?;
    let dim = logs[0].rows();
    let mut sum = ExactMatrix::zeros(dim, dim);
    for n in &logs {
        sum = sum.checked_add(n)?;
    }
    let w = match weight_filtration(&sum, center) {
        Ok(w) => w,
        Err(Error::WrongCenter(_)) => return Ok(report),
        Err(e) => return Err(e),
    };
    let (w0, w2) = (w.step(0), w.step(2));
    report.filtration_dims = Some((w0.cols(), w2.cols()));
    if w0.cols() != 1 || w2.cols() != 1 + r {
        return Ok(report);
    }
    let w0v = primitive_integer_vector(&w0.column(0));
    let w0v: Vec<Rat> = w0v.into_iter().map(Rat::from_integer).collect();
    let w0m = ExactMatrix::from_columns(dim, &[w0v])?;
    let ext = w0m.hstack(&w2)?.column_space();
    let mut m = ExactMatrix::zeros(r, r);
    for (j, n) in logs.iter().enumerate() {
        for k in 0..r {
            let img = n.checked_mul(&ext.select_columns(&[k + 1]))?;
            let Some(c) = w0m.coordinates(&img) else {
                return Ok(report);
            };
            m.set(j, k, c.get(0, 0).clone());
        }
    }
    let det = m.det()?;
    report.verdict = !det.is_zero();
    report.m_matrix = Some(m);
    report.m_det = Some(det);
    Ok(report)
}

/// The matrix with a single `1` at `(0, dim-1)`.
pub fn reference_nilpotent(dim: usize) -> ExactMatrix {
    ExactMatrix::unit(dim, dim, 0, dim - 1)
}

/// Symmetric tensor `C_{i1..ik}` with `N_{i1}..N_{ik} = C_{i1..ik} N_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingTensor {
    rank: usize,
    order: usize,
    values: Vec<Rat>,
}

impl CouplingTensor {
    /// Builds from a full row-major value table of length `rank^order`.
    pub fn from_values(rank: usize, order: usize, values: Vec<Rat>) -> Result<Self> {
        if values.len() != rank.pow(order as u32) {
            return Err(Error::DimensionMismatch(format!(
                "{} values for rank {rank} order {order}",
                values.len()
            )));
        }
        let t = Self { rank, order, values };
        t.check_symmetric()?;
        Ok(t)
    }

    /// Builds a symmetric cubic tensor from its values on sorted index triples,
    /// ordered as `(1,1,1), (1,1,2), (1,2,2), (2,2,2)` for rank 2.
    pub fn cubic_from_canonical(rank: usize, canonical: &[Rat]) -> Result<Self> {
        let keys = sorted_indices(rank, 3);
        if keys.len() != canonical.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} canonical values for rank {rank}",
                canonical.len()
            )));
        }
        let mut values = vec![Rat::zero(); rank.pow(3)];
        for idx in all_indices(rank, 3) {
            let mut s = idx.clone();
            s.sort_unstable();
            let pos = keys.iter().position(|k| *k == s).expect("sorted key exists");
            values[flat(rank, &idx)] = canonical[pos].clone();
        }
        Ok(Self { rank, order: 3, values })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Value at a 0-based multi-index.
    pub fn get(&self, idx: &[usize]) -> &Rat {
        &self.values[flat(self.rank, idx)]
    }

    /// Values on sorted multi-indices, e.g. `(C111, C112, C122, C222)` for rank 2.
    pub fn canonical(&self) -> Vec<Rat> {
        sorted_indices(self.rank, self.order).iter().map(|i| self.get(i).clone()).collect()
    }

    /// `C'_{ijk} = sum C_{lmn} J_{li} J_{mj} J_{nk}` for a `rank x rank` jacobian `J`.
    pub fn pullback(&self, jac: &ExactMatrix) -> Result<Self> {
        if jac.rows() != self.rank || jac.cols() != self.rank {
            return Err(Error::DimensionMismatch(format!(
                "jacobian {}x{} for rank {}",
                jac.rows(),
                jac.cols(),
                self.rank
            )));
        }
        let idx = all_indices(self.rank, self.order);
        let mut values = vec![Rat::zero(); self.values.len()];
        for out in &idx {
            let mut acc = Rat::zero();
            for inn in &idx {
                let c = self.get(inn);
                if c.is_zero() {
                    continue;
                }
                let mut t = c.clone();
                for (l, i) in inn.iter().zip(out) {
                    t *= jac.get(*l, *i);
                }
                acc += t;
            }
            values[flat(self.rank, out)] = acc;
        }
        Ok(Self { rank: self.rank, order: self.order, values })
    }

    fn check_symmetric(&self) -> Result<()> {
        for idx in all_indices(self.rank, self.order) {
            let mut s = idx.clone();
            s.sort_unstable();
            if self.get(&idx) != self.get(&s) {
                let at = |k: usize| idx.get(k).copied().unwrap_or(0) + 1;
                return Err(Error::AsymmetricTensor { i: at(0), j: at(1), k: at(2) });
            }
        }
        Ok(())
    }
}

fn flat(rank: usize, idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, i| acc * rank + i)
}

fn all_indices(rank: usize, order: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..order {
        out = out
            .into_iter()
            .flat_map(|p| (0..rank).map(move |i| [p.clone(), vec![i]].concat()))
            .collect();
    }
    out
}

fn sorted_indices(rank: usize, order: usize) -> Vec<Vec<usize>> {
    all_indices(rank, order).into_iter().filter(|v| v.windows(2).all(|w| w[0] <= w[1])).collect()
}

/// Solves `N_i N_j N_k = C_{ijk} n0` exactly.
pub fn extract_couplings(generators: &[ExactMatrix], n0: &ExactMatrix) -> Result<CouplingTensor> {
    extract_products(generators, n0, 3)
}

/// Solves `N_{i1} .. N_{ik} = C n0` exactly for products of length `order`.
pub fn extract_products(
    generators: &[ExactMatrix],
    n0: &ExactMatrix,
    order: usize,
) -> Result<CouplingTensor> {
    n0.require_square("reference nilpotent")?;
    if n0.rank() != 1 {
        return Err(Error::Inconsistent("reference nilpotent must have rank one".into()));
    }
    for (i, n) in generators.iter().enumerate() {
        if !is_nilpotent(n)? {
            return Err(Error::NotNilpotent { dim: n.rows() });
        }
        if !n.checked_mul(n0)?.is_zero() {
            return Err(Error::Inconsistent(format!("N_{} N_0 != 0", i + 1)));
        }
    }
    let (p, q) = (0..n0.rows())
        .flat_map(|i| (0..n0.cols()).map(move |j| (i, j)))
        .find(|&(i, j)| !n0.get(i, j).is_zero())
        .expect("rank one matrix has a nonzero entry");
    let rank = generators.len();
    let dim = n0.rows();
    let mut values = Vec::with_capacity(rank.pow(order as u32));
    for idx in all_indices(rank, order) {
        let mut prod = ExactMatrix::identity(dim);
        for &i in &idx {
            prod = prod.checked_mul(&generators[i])?;
        }
        let c = prod.get(p, q) / n0.get(p, q);
        if prod != n0.scale(&c) {
            let at = |k: usize| idx.get(k).copied().unwrap_or(0) + 1;
            return Err(Error::NotProportional { i: at(0), j: at(1), k: at(2) });
        }
        values.push(c);
    }
    CouplingTensor::from_values(rank, order, values)
}

/// Restriction `X|_{W_2}` as the matrix `X * w2_basis`.
pub fn project_mod_i2(x: &ExactMatrix, w2_basis: &ExactMatrix) -> Result<ExactMatrix> {
    if x.cols() != w2_basis.rows() {
        return Err(Error::DimensionMismatch(format!(
            "endomorphism {}x{} vs W_2 basis with {} rows",
            x.rows(),
            x.cols(),
            w2_basis.rows()
        )));
    }
    x.checked_mul(w2_basis)
}

/// Coordinates of `π(x)` in the basis `π(b_1), .., π(b_r)` of the quotient, if it lies
/// in their rational span.
pub fn quotient_coordinates(
    x: &ExactMatrix,
    basis: &[ExactMatrix],
    w2_basis: &ExactMatrix,
) -> Result<Option<Vec<Rat>>> {
    let flatten = |m: &ExactMatrix| -> Result<Vec<Rat>> {
        Ok(project_mod_i2(m, w2_basis)?.entries().to_vec())
    };
    let target = flatten(x)?;
    let len = target.len();
    let cols: Vec<Vec<Rat>> = basis.iter().map(flatten).collect::<Result<_>>()?;
    let b = ExactMatrix::from_columns(len, &cols)?;
    let t = ExactMatrix::from_columns(len, &[target])?;
    Ok(b.coordinates(&t).map(|c| c.column(0)))
}

/// Whether `g W_j = W_j` for every step.
pub fn check_filtration_preserved(g: &ExactMatrix, w: &Filtration) -> Result<bool> {
    if g.rows() != w.dimension() || !g.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "matrix {}x{} on a filtration of dimension {}",
            g.rows(),
            g.cols(),
            w.dimension()
        )));
    }
    for step in w.steps() {
        if !same_span(&image_of(g, step)?, step)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Weighted sum `sum lambda_i N_i`.
pub fn cone_point(gens: &[ExactMatrix], lambda: &[Rat]) -> Result<ExactMatrix> {
    if gens.is_empty() || gens.len() != lambda.len() {
        return Err(Error::DimensionMismatch("cone_point needs one weight per generator".into()));
    }
    let mut out = ExactMatrix::zeros(gens[0].rows(), gens[0].cols());
    for (n, l) in gens.iter().zip(lambda) {
        out = out.checked_add(&n.scale(l))?;
    }
    Ok(out)
}

/// Standard basis vectors `e_0, .., e_{k-1}` of `Q^dim` as columns.
pub fn leading_coordinates(dim: usize, k: usize) -> ExactMatrix {
    ExactMatrix::from_fn(dim, k, |i, j| if i == j { Rat::one() } else { Rat::zero() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn jordan(n: usize) -> ExactMatrix {
        ExactMatrix::from_fn(n, n, |i, j| if i == j + 1 { Rat::one() } else { Rat::zero() })
    }

    #[test]
    fn jordan_block_has_one_dimensional_steps() {
        let w = weight_filtration(&jordan(4), 3).unwrap();
        assert_eq!(w.even_dims(), vec![1, 2, 3, 4]);
        assert!(w.is_lowered_by(&jordan(4)).unwrap());
        assert!(w.has_hard_lefschetz(&jordan(4)).unwrap());
    }

    #[test]
    fn zero_nilpotent_is_pure() {
        let z = ExactMatrix::zeros(6, 6);
        let w = weight_filtration(&z, 3).unwrap();
        assert_eq!(w.dims(), vec![0, 0, 0, 6, 6, 6, 6]);
    }

    #[test]
    fn errors() {
        assert!(matches!(weight_filtration(&jordan(4), 2), Err(Error::WrongCenter(3))));
        let id = ExactMatrix::identity(2);
        assert!(matches!(weight_filtration(&id, 1), Err(Error::NotNilpotent { .. })));
    }

    #[test]
    fn cubic_tensor_roundtrip() {
        let c = CouplingTensor::cubic_from_canonical(2, &[int(5), int(10), int(10), int(5)]).unwrap();
        assert_eq!(c.get(&[1, 0, 1]), &int(10));
        let id = ExactMatrix::identity(2);
        assert_eq!(c.pullback(&id).unwrap(), c);
        let bad = CouplingTensor::from_values(2, 2, vec![int(1), int(2), int(3), int(4)]);
        assert!(matches!(bad, Err(Error::AsymmetricTensor { .. })));
    }
}
