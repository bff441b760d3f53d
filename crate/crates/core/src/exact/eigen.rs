//! Eigen-directions of integer 2x2 matrices with real quadratic spectrum.

use num_traits::{Signed, ToPrimitive, Zero};

use super::quad::{exact_sqrt, squarefree_part, QuadNum, QuadRay};
use super::rat::{format_rat, int, Rat};
use super::ExactMatrix;
use crate::error::{Error, Result};

/// An eigenvalue in `Q(sqrt d)` with its eigen-direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenRay {
    pub lambda: QuadNum,
    pub ray: QuadRay,
}

/// The two eigen-lines of a 2x2 integer matrix with irrational real eigenvalues.
///
/// The larger eigenvalue comes first. Each ray is normalized with first coordinate `-1`
/// (or `(0, 1)` if the first coordinate vanishes); `M v = lambda v` is verified exactly.
pub fn eigenrays_2x2(m: &ExactMatrix) -> Result<[EigenRay; 2]> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::NotTwoByTwo(m.rows(), m.cols()));
    }
    if m.entries().iter().any(|v| !v.is_integer()) {
        return Err(Error::Inconsistent("eigenrays_2x2 expects integer entries".into()));
    }
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let tr = a + d;
    let det = a * d - b * c;
    let disc = &tr * &tr - int(4) * &det;
    if disc.is_negative() {
        return Err(Error::ComplexSpectrum(format_rat(&disc)));
    }
    let disc_u = disc
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::Inconsistent("discriminant out of range".into()))?;
    if exact_sqrt(disc_u).is_some() {
        return Err(Error::RationalSpectrum(format_rat(&disc)));
    }
    let rad = squarefree_part(disc_u);
    let s = exact_sqrt(disc_u / rad).expect("cofactor of the squarefree part is a square");
    let half = Rat::new(1.into(), 2.into());
    let mut out = Vec::with_capacity(2);
    for sgn in [1i64, -1] {
        let lambda = QuadNum::new(&tr * &half, int(sgn * s as i64) * &half, rad)?;
        let q = |r: &Rat| QuadNum::rational(r.clone(), rad);
        // (M - lambda) v = 0: take v from whichever row is nonzero
        let (vx, vy) = if !b.is_zero() {
            (q(b)?, lambda.checked_sub(&q(a)?)?)
        } else {
            (lambda.checked_sub(&q(d)?)?, q(c)?)
        };
        let ray = QuadRay::new(vx, vy)?.normalized_line()?;
        verify_eigen(m, &lambda, &ray)?;
        out.push(EigenRay { lambda, ray });
    }
    let second = out.pop().expect("two eigenrays");
    let first = out.pop().expect("two eigenrays");
    Ok([first, second])
}

/// Checks `M v = lambda v` exactly in `Q(sqrt d)^2`.
pub fn verify_eigen(m: &ExactMatrix, lambda: &QuadNum, ray: &QuadRay) -> Result<()> {
    let mv = ray.transform([[m.get(0, 0), m.get(0, 1)], [m.get(1, 0), m.get(1, 1)]])?;
    let lx = ray.x().checked_mul(lambda)?;
    let ly = ray.y().checked_mul(lambda)?;
    if mv.x() != &lx || mv.y() != &ly {
        return Err(Error::Inconsistent(format!("eigen equation fails for {ray}")));
    }
    Ok(())
}
