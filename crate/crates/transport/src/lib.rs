//! Pfaffian systems from θ-operators and high-precision analytic continuation of
//! their solutions along piecewise-linear paths in `C²`.

pub mod bigc;
pub mod checks;
pub mod cpoly;
pub mod integrate;
pub mod loops;
pub mod path;
pub mod pfaffian;

pub use bigc::{BigC, CMatrix};
pub use checks::{hypergeometric_deviation, p3p3_contractible_square};
pub use integrate::{transport, TransportOptions, TransportStats};
pub use loops::{
    evaluate_word, loop_monodromy, numeric_relation_check, p3p3_base, p3p3_loops, p3p3_small_y, p3p3_system,
    word_trace_deviation, LoopInvariants, LoopSet, NumericRelation,
};
pub use path::{Arc, ExactC, ExactPoint, PathSpec};
pub use pfaffian::{build_pfaffian, PfaffianSystem};
