//! Closed-form and homotopy controls for the integrator.

use nilcone_core::exact::rat;
use nilcone_core::{Rat, Result};
use num_traits::{One, Zero};

use crate::bigc::BigC;
use crate::integrate::TransportOptions;
use crate::loops::loop_monodromy;
use crate::path::{Arc, ExactC, ExactPoint, PathSpec};
use crate::pfaffian::{build_pfaffian, hypergeometric_operators};

/// Deviation of the `x = 0` monodromy of Gauss's equation with `a = 1/2`, `b = 1/5`
/// from the closed-form char poly `(λ - 1)(λ - e^{2πi(1-c)})`, on a circle of radius
/// 1/4 around `x = 0` at `y = 1/2`.
pub fn hypergeometric_deviation(c: &Rat, prec: usize) -> Result<f64> {
    let sys = build_pfaffian(&hypergeometric_operators(&rat(1, 2), &rat(1, 5), c), 2)?;
    let base = ExactPoint::real(rat(1, 4), rat(1, 2));
    let arc = Arc::circle(0, ExactC::real(Rat::zero()), rat(1, 4), Rat::zero(), ExactC::real(rat(1, 2)));
    let (_, inv, _) = loop_monodromy(&sys, &PathSpec::new("x0", base).arc(arc), &TransportOptions::with_precision(prec))?;
    let turn = BigC::unit(&(Rat::one() - c), prec);
    Ok(inv.charpoly_deviation(&[(BigC::one(prec), 1), (turn, 1)]))
}

/// A closed square near the `P³×P³` base point that encloses no singularity.
pub fn p3p3_contractible_square() -> PathSpec {
    let (a, b) = (rat(1, 128), rat(1, 64));
    PathSpec::new("square", ExactPoint::real(a.clone(), a.clone())).through(&[
        ExactPoint::real(b.clone(), a.clone()),
        ExactPoint::new(ExactC::real(b.clone()), ExactC::new(b.clone(), rat(1, 128))),
        ExactPoint::new(ExactC::new(a.clone(), rat(1, 128)), ExactC::real(b)),
        ExactPoint::real(a.clone(), a),
    ])
}
