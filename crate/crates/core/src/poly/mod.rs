//! Polynomials and rational functions over the rationals.

mod bi;
mod uni;

pub use bi::{bareiss_det, Poly2};
pub use uni::{RationalFn, UniPoly};
