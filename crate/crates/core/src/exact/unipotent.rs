//! Logarithms of unipotent matrices and exponentials of nilpotent ones.

use super::matrix::{Matrix, Scalar};
use crate::error::{Error, Result};

/// Smallest `n <= dim` with `N^n = 0`, if any.
pub fn nilpotency_index<T: Scalar>(n: &Matrix<T>) -> Result<Option<usize>> {
    n.require_square("nilpotency_index")?;
    let dim = n.rows();
    let mut p = Matrix::identity(dim);
    for k in 1..=dim {
        p = p.checked_mul(n)?;
        if p.is_zero() {
            return Ok(Some(k));
        }
    }
    Ok(if dim == 0 { Some(0) } else { None })
}

pub fn is_nilpotent<T: Scalar>(n: &Matrix<T>) -> Result<bool> {
    Ok(nilpotency_index(n)?.is_some())
}

pub fn is_unipotent<T: Scalar>(m: &Matrix<T>) -> Result<bool> {
    m.require_square("is_unipotent")?;
    is_nilpotent(&(m - &Matrix::identity(m.rows())))
}

fn from_usize<T: Scalar>(k: usize) -> T {
    T::from_usize(k).expect("small integers are representable")
}

/// `log M = sum_{k>=1} (-1)^{k-1} (M - I)^k / k`, truncated at the nilpotency index.
pub fn unipotent_log<T: Scalar>(m: &Matrix<T>) -> Result<Matrix<T>> {
    m.require_square("unipotent_log")?;
    let dim = m.rows();
    let x = m - &Matrix::identity(dim);
    let idx = nilpotency_index(&x)?.ok_or(Error::NotUnipotent { dim })?;
    let mut out = Matrix::zeros(dim, dim);
    let mut p = Matrix::identity(dim);
    for k in 1..idx {
        p = p.checked_mul(&x)?;
        let c = T::one() / from_usize::<T>(k);
        let term = p.scale(&if k % 2 == 1 { c } else { -c });
        out = out.checked_add(&term)?;
    }
    Ok(out)
}

/// `exp N = sum_k N^k / k!`, truncated at the nilpotency index.
pub fn nilpotent_exp<T: Scalar>(n: &Matrix<T>) -> Result<Matrix<T>> {
    n.require_square("nilpotent_exp")?;
    let dim = n.rows();
    let idx = nilpotency_index(n)?.ok_or(Error::NotNilpotent { dim })?;
    let mut out = Matrix::identity(dim);
    let mut p = Matrix::identity(dim);
    let mut fact = T::one();
    for k in 1..idx {
        p = p.checked_mul(n)?;
        fact = fact * from_usize::<T>(k);
        out = out.checked_add(&p.scale(&(T::one() / fact.clone())))?;
    }
    Ok(out)
}

/// Smallest `k <= k_max` such that `M^k` is unipotent.
pub fn quasi_unipotency_order<T: Scalar>(m: &Matrix<T>, k_max: usize) -> Result<usize> {
    m.require_square("quasi_unipotency_order")?;
    let mut p = Matrix::identity(m.rows());
    for k in 1..=k_max {
        p = p.checked_mul(m)?;
        if is_unipotent(&p)? {
            return Ok(k);
        }
    }
    Err(Error::NotQuasiUnipotent { k_max })
}

/// Whether `(M - I)^k = 0` but `(M - I)^{k-1} != 0`.
pub fn unipotency_index<T: Scalar>(m: &Matrix<T>) -> Result<Option<usize>> {
    m.require_square("unipotency_index")?;
    nilpotency_index(&(m - &Matrix::identity(m.rows())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ExactMatrix;

    #[test]
    fn jordan_block_log() {
        let m = ExactMatrix::from_i64_rows(&[&[1, 0], &[1, 1]]);
        let n = unipotent_log(&m).unwrap();
        assert_eq!(n, ExactMatrix::from_i64_rows(&[&[0, 0], &[1, 0]]));
        assert_eq!(nilpotent_exp(&n).unwrap(), m);
    }

    #[test]
    fn identity_and_zero() {
        let i = ExactMatrix::identity(6);
        assert!(unipotent_log(&i).unwrap().is_zero());
        assert_eq!(nilpotent_exp(&ExactMatrix::zeros(6, 6)).unwrap(), i);
        let e = ExactMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]);
        assert_eq!(nilpotent_exp(&e).unwrap(), ExactMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]));
    }

    #[test]
    fn errors() {
        let m = ExactMatrix::from_i64_rows(&[&[2, 0], &[0, 1]]);
        assert!(matches!(unipotent_log(&m), Err(Error::NotUnipotent { .. })));
        assert!(matches!(nilpotent_exp(&m), Err(Error::NotNilpotent { .. })));
        let minus = ExactMatrix::from_i64_rows(&[&[-1, 0], &[0, -1]]);
        assert_eq!(quasi_unipotency_order(&minus, 4).unwrap(), 2);
        assert!(quasi_unipotency_order(&m, 4).is_err());
    }

    #[test]
    fn works_over_f64() {
        let m = Matrix::<f64>::from_i64_rows(&[&[1, 0, 0], &[2, 1, 0], &[3, 4, 1]]);
        let back = nilpotent_exp(&unipotent_log(&m).unwrap()).unwrap();
        for (a, b) in back.entries().iter().zip(m.entries()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
