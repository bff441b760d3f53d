//! Exact rational and quadratic-field arithmetic and the matrix operations built on it.

mod eigen;
mod form;
mod matrix;
mod quad;
mod rat;
mod subspace;
mod unipotent;

pub use eigen::{eigenrays_2x2, verify_eigen, EigenRay};
pub use form::{dual_action, preserves_form, BilinearForm, Parity, SymplecticForm};
pub use matrix::{Matrix, Scalar};
pub use quad::{exact_sqrt, squarefree_part, QuadNum, QuadRay};
pub use rat::{
    common_denominator, format_rat, int, parse_rat, primitive_integer_vector, rat, sign, to_f64,
    to_i64, Rat,
};
pub use subspace::{basis_of, contains, image_of, same_span, span_intersection, span_sum};
pub use unipotent::{
    is_nilpotent, is_unipotent, nilpotency_index, nilpotent_exp, quasi_unipotency_order,
    unipotency_index, unipotent_log,
};

/// Matrix over exact rationals.
pub type ExactMatrix = Matrix<Rat>;
/// Matrix over `f64`, used for plotting and quick numeric checks.
pub type MatrixF64 = Matrix<f64>;
/// Matrix over `f32`.
pub type MatrixF32 = Matrix<f32>;
