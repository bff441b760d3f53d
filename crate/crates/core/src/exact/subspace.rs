//! Subspaces of `T^n` represented by column bases.

use super::matrix::{Matrix, Scalar};
use crate::error::Result;

/// Reduces a spanning set to a basis (pivot columns).
pub fn basis_of<T: Scalar>(span: &Matrix<T>) -> Matrix<T> {
    span.column_space()
}

/// Basis of `U + V`.
pub fn span_sum<T: Scalar>(u: &Matrix<T>, v: &Matrix<T>) -> Result<Matrix<T>> {
    Ok(u.hstack(v)?.column_space())
}

/// Basis of `U ∩ V` for column bases `u` and `v`.
pub fn span_intersection<T: Scalar>(u: &Matrix<T>, v: &Matrix<T>) -> Result<Matrix<T>> {
    let u = u.column_space();
    let v = v.column_space();
    if u.cols() == 0 || v.cols() == 0 {
        return Ok(Matrix::zeros(u.rows(), 0));
    }
    // U a = V b  <=>  [U | -V] (a, b) = 0
    let k = u.hstack(&-&v)?.kernel();
    let a = Matrix::from_fn(u.cols(), k.cols(), |i, j| k.get(i, j).clone());
    Ok(u.checked_mul(&a)?.column_space())
}

/// Whether every column of `v` lies in the span of `u`.
pub fn contains<T: Scalar>(u: &Matrix<T>, v: &Matrix<T>) -> Result<bool> {
    if v.cols() == 0 {
        return Ok(true);
    }
    Ok(u.hstack(v)?.rank() == u.rank())
}

/// Whether two column sets span the same subspace.
pub fn same_span<T: Scalar>(u: &Matrix<T>, v: &Matrix<T>) -> Result<bool> {
    Ok(contains(u, v)? && contains(v, u)?)
}

/// Basis of the image `N (span u)`.
pub fn image_of<T: Scalar>(n: &Matrix<T>, u: &Matrix<T>) -> Result<Matrix<T>> {
    if u.cols() == 0 {
        return Ok(Matrix::zeros(n.rows(), 0));
    }
    Ok(n.checked_mul(u)?.column_space())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ExactMatrix;

    #[test]
    fn sum_and_intersection() {
        let u = ExactMatrix::from_i64_rows(&[&[1, 0], &[0, 1], &[0, 0]]);
        let v = ExactMatrix::from_i64_rows(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(span_sum(&u, &v).unwrap().cols(), 3);
        let w = span_intersection(&u, &v).unwrap();
        assert_eq!(w.cols(), 1);
        assert!(same_span(&w, &ExactMatrix::from_i64_rows(&[&[0], &[2], &[0]])).unwrap());
        let empty = ExactMatrix::zeros(3, 0);
        assert_eq!(span_intersection(&u, &empty).unwrap().cols(), 0);
        assert!(contains(&u, &empty).unwrap());
    }
}
