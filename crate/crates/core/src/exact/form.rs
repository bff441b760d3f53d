//! Non-degenerate bilinear forms and the inverse-transpose action.

use num_traits::{One, Zero};

use super::{ExactMatrix, Rat};
use crate::error::{Error, Result};

/// Symmetry type of a bilinear form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    /// `J^T = -J`: the intersection pairing of a threefold's middle cohomology.
    Antisymmetric,
    /// `G^T = G`: a lattice pairing such as the K3 transcendental lattice.
    Symmetric,
}

/// An invertible bilinear form with declared parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    matrix: ExactMatrix,
    parity: Parity,
}

/// The symplectic case used for threefolds.
pub type SymplecticForm = BilinearForm;

impl BilinearForm {
    /// Validates parity and invertibility.
    pub fn new(matrix: ExactMatrix, parity: Parity) -> Result<Self> {
        matrix.require_square("bilinear form")?;
        let t = matrix.transpose();
        let ok = match parity {
            Parity::Antisymmetric => t == -&matrix,
            Parity::Symmetric => t == matrix,
        };
        if !ok {
            return Err(Error::Inconsistent(format!("form is not {parity:?}")));
        }
        if matrix.det()?.is_zero() {
            return Err(Error::Singular);
        }
        Ok(Self { matrix, parity })
    }

    /// Antisymmetric pairing on a basis ordered `(a_0, .., a_{h-1}, b_{h-1}, .., b_0)`:
    /// `J[i][n-1-i] = 1` for the first half and `-1` for the second half.
    pub fn standard_symplectic(dim: usize) -> Result<Self> {
        if dim == 0 || dim % 2 == 1 {
            return Err(Error::DimensionMismatch(format!("symplectic dimension {dim}")));
        }
        let mut j = ExactMatrix::zeros(dim, dim);
        for i in 0..dim {
            let v = if i < dim / 2 { Rat::one() } else { -Rat::one() };
            j.set(i, dim - 1 - i, v);
        }
        Self::new(j, Parity::Antisymmetric)
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Whether `M^T J M = J` exactly.
    pub fn is_preserved_by(&self, m: &ExactMatrix) -> Result<bool> {
        preserves_form(m, self)
    }
}

/// Whether `M^T J M = J` holds exactly.
pub fn preserves_form(m: &ExactMatrix, form: &BilinearForm) -> Result<bool> {
    m.require_square("preserves_form")?;
    if m.rows() != form.dim() {
        return Err(Error::DimensionMismatch(format!(
            "matrix {}x{} vs form of dimension {}",
            m.rows(),
            m.cols(),
            form.dim()
        )));
    }
    let lhs = m.transpose().checked_mul(form.matrix())?.checked_mul(m)?;
    Ok(&lhs == form.matrix())
}

/// The inverse transpose `(M^T)^{-1}`, converting homology to cohomology action.
pub fn dual_action(m: &ExactMatrix) -> Result<ExactMatrix> {
    Ok(m.inverse()?.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_form_shape() {
        let j = BilinearForm::standard_symplectic(6).unwrap();
        assert_eq!(j.matrix().get(0, 5), &Rat::one());
        assert_eq!(j.matrix().get(5, 0), &-Rat::one());
        assert_eq!(j.matrix().get(2, 3), &Rat::one());
        assert!(BilinearForm::standard_symplectic(5).is_err());
    }

    #[test]
    fn rejects_wrong_parity() {
        let g = ExactMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert!(BilinearForm::new(g.clone(), Parity::Antisymmetric).is_err());
        assert!(BilinearForm::new(g, Parity::Symmetric).is_ok());
    }
}
