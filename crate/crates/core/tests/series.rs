use nilcone_core::dataset::Dataset;
use nilcone_core::exact::{dual_action, int, rat, ExactMatrix};
use nilcone_core::hodge::CouplingTensor;
use nilcone_core::series::{
    apply_theta, check_annihilation, compare_prepotential, coupling_pullback, discriminant_p3p3,
    discriminant_p4p4, flop_invariance_check, jacobian_from_transform, picard_fuchs_p3p3,
    prepotential_shift, tangency_multiplicity, w0_series, w1_series, PSeries,
};
use nilcone_core::Error;

#[test]
fn fundamental_period_coefficients() {
    let w = w0_series(4);
    assert_eq!(w.coeff(0, 0), int(1));
    assert_eq!(w.coeff(1, 0), int(2));
    assert_eq!(w.coeff(0, 1), int(2));
    assert_eq!(w.coeff(1, 1), int(96));
}

#[test]
fn periods_are_annihilated() {
    let rep = check_annihilation("w0", &w0_series(12)).unwrap();
    assert!(rep.d1_zero && rep.d2_zero && rep.valid_through >= 11);
    for along_x in [true, false] {
        let rep = check_annihilation("w1", &w1_series(10, along_x)).unwrap();
        assert!(rep.d1_zero && rep.d2_zero);
    }
}

#[test]
fn a_non_solution_is_detected() {
    let (d1, _) = picard_fuchs_p3p3();
    let mut w = w0_series(8);
    w.add_term((2, 1, 0, 0), int(1));
    let r = apply_theta(&d1, &w).unwrap();
    assert_eq!(r.valuation(), Some(3));
    assert!(apply_theta(&d1, &PSeries::one(0)).is_err());
}

#[test]
fn discriminant_tangencies() {
    assert_eq!(tangency_multiplicity(&discriminant_p4p4(), &int(1)).unwrap(), 5);
    assert_eq!(tangency_multiplicity(&discriminant_p3p3(), &rat(1, 4)).unwrap(), 4);
    assert_eq!(tangency_multiplicity(&discriminant_p3p3(), &int(1)).unwrap(), 0);
}

#[test]
fn flop_invariance_identities() {
    flop_invariance_check(&int(5), &int(-45), &[(1, 50)], &int(-1)).unwrap();
    flop_invariance_check(&int(2), &int(-110), &[(1, 80), (2, 4)], &int(-1)).unwrap();
    flop_invariance_check(&int(7), &int(7), &[], &int(-1)).unwrap();
    // roles swapped: the flopped side carries jac^3 n0, and the jacobian is inverted
    flop_invariance_check(&int(-45), &int(5), &[(1, -50)], &int(-1)).unwrap();
    flop_invariance_check(&int(-110), &int(2), &[(1, -80), (2, -4)], &int(-1)).unwrap();
    assert!(flop_invariance_check(&int(-45), &int(5), &[(1, 50)], &int(-1)).is_err());
    assert!(matches!(flop_invariance_check(&int(5), &int(-44), &[(1, 50)], &int(-1)), Err(Error::IdentityFails(_))));
    assert!(matches!(flop_invariance_check(&int(2), &int(-110), &[(1, 80)], &int(-1)), Err(Error::IdentityFails(_))));
}

#[test]
fn coupling_pullback_by_the_mirror_map() {
    let c = CouplingTensor::cubic_from_canonical(2, &[int(5), int(10), int(10), int(5)]).unwrap();
    // t1' = -t1, t2' = 4 t1 + t2
    let jac = jacobian_from_transform(&ExactMatrix::from_i64_rows(&[&[-1, 0], &[4, 1]])).unwrap();
    assert_eq!(coupling_pullback(&c, &jac).unwrap().canonical(), [int(-45), int(10), int(10), int(5)]);
    let c = CouplingTensor::cubic_from_canonical(2, &[int(2), int(6), int(6), int(2)]).unwrap();
    let jac = jacobian_from_transform(&ExactMatrix::from_i64_rows(&[&[-1, 0], &[6, 1]])).unwrap();
    assert_eq!(coupling_pullback(&c, &jac).unwrap().canonical(), [int(-110), int(6), int(6), int(2)]);
    assert_eq!(coupling_pullback(&c, &ExactMatrix::identity(2)).unwrap(), c);
}

#[test]
fn prepotential_shift_of_the_connection() {
    let zero = prepotential_shift(&ExactMatrix::identity(6), 2).unwrap();
    assert!(zero.monomials().is_empty());
    let ds = Dataset::bundled("p4p4").unwrap();
    let c = dual_action(ds.matrix("phi21").unwrap()).unwrap();
    let form = prepotential_shift(&c, 2).unwrap();
    let m = form.monomials();
    assert_eq!(m, vec![("a1^2".to_string(), rat(-33, 2)), ("a1*a2".to_string(), int(-2))]);
    let printed = ExactMatrix::from_i64_rows(&[&[-25, -2], &[2, 0]]);
    let cmp = compare_prepotential(&form, &printed).unwrap();
    assert!(cmp.pure_a);
    assert!(!cmp.agrees);
    // a connection mixing A into B periods leaves b terms
    let mut bad = ExactMatrix::identity(6);
    bad.set(5, 0, int(1));
    bad.set(0, 5, int(1));
    assert!(matches!(prepotential_shift(&bad, 2), Err(Error::NotAQuadraticShiftInA(_))));
}
