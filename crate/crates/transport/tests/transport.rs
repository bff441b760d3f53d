use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use nilcone_core::error::Error;
use nilcone_core::exact::rat;
use nilcone_core::poly::Poly2;
use nilcone_core::series::{discriminant_p3p3, picard_fuchs_p3p3, w0_series, w1_series, PSeries, ThetaOperator};
use nilcone_core::{Dataset, Rat};
use nilcone_transport::loops::p3p3_loops;
use nilcone_transport::*;
use proptest::prelude::*;

fn system() -> &'static PfaffianSystem {
    static SYS: OnceLock<PfaffianSystem> = OnceLock::new();
    SYS.get_or_init(|| p3p3_system().expect("rank-6 system"))
}

/// All p3p3 loop monodromies at 128 bits, shared by the loop tests.
fn loops_128() -> &'static BTreeMap<String, CMatrix> {
    static LOOPS: OnceLock<BTreeMap<String, CMatrix>> = OnceLock::new();
    LOOPS.get_or_init(|| {
        let set = p3p3_loops().unwrap();
        let names = set.loop_names();
        set.monodromies(system(), &names, &TransportOptions::with_precision(128)).unwrap().0
    })
}

fn r(n: i64) -> Rat {
    rat(n, 1)
}

#[test]
fn system_is_flat_with_the_expected_basis() {
    let sys = system();
    assert_eq!(sys.rank(), 6);
    assert_eq!(sys.basis_labels(), vec!["1", "θx", "θy", "θx^2", "θx θy", "θx^3"]);
    assert_eq!(sys.prolongation_degree(), 4);
    assert!(sys.is_flat());
}

#[test]
fn denominator_is_discriminant_times_apparent_factors() {
    let cubic = Poly2::from_terms(&[
        (64, 3, 0),
        (-192, 2, 1),
        (496, 2, 0),
        (192, 1, 2),
        (992, 1, 1),
        (124, 1, 0),
        (-64, 0, 3),
        (48, 0, 2),
        (-12, 0, 1),
        (1, 0, 0),
    ]);
    let linear = Poly2::from_terms(&[(20, 1, 0), (12, 0, 1), (-3, 0, 0)]);
    let expect = (&(&discriminant_p3p3() * &cubic) * &linear).scale(&rat(-1, 3));
    assert_eq!(system().denominator(), &expect);
}

/// Reduction of `θx^a θy^b` on the solution jet: numerators over `den^k`.
fn reduce(sys: &PfaffianSystem, memo: &mut HashMap<(u32, u32), (Vec<Poly2>, u32)>, a: u32, b: u32) -> (Vec<Poly2>, u32) {
    if let Some(v) = memo.get(&(a, b)) {
        return v.clone();
    }
    let n = sys.rank();
    let out = if (a, b) == (0, 0) {
        let mut e = vec![Poly2::zero(); n];
        e[0] = Poly2::one();
        (e, 0)
    } else {
        let along_x = a > 0;
        let (prev, k) = if along_x { reduce(sys, memo, a - 1, b) } else { reduce(sys, memo, a, b - 1) };
        let den = sys.denominator();
        let (dden, conn) = if along_x { (den.theta_x(), sys.numerator_x()) } else { (den.theta_y(), sys.numerator_y()) };
        let kk = Rat::from_integer(i64::from(k).into());
        let next = (0..n)
            .map(|j| {
                let d = if along_x { prev[j].theta_x() } else { prev[j].theta_y() };
                let mut acc = &(&d * den) - &(&prev[j] * &dden).scale(&kk);
                for i in 0..n {
                    acc = &acc + &(&prev[i] * &conn[i][j]);
                }
                acc
            })
            .collect();
        (next, k + 1)
    };
    memo.insert((a, b), out.clone());
    out
}

fn den_power(sys: &PfaffianSystem, k: u32) -> Poly2 {
    (0..k).fold(Poly2::one(), |acc, _| &acc * sys.denominator())
}

#[test]
fn picard_fuchs_operators_reduce_to_zero() {
    // ideal membership: each operator maps the generic solution jet to zero
    let sys = system();
    let (d1, d2) = picard_fuchs_p3p3();
    let mut memo = HashMap::new();
    for op in [&d1, &d2] {
        let top = op.order();
        let mut total = vec![Poly2::zero(); sys.rank()];
        for (&(i, j), p) in op.terms() {
            for (&(a, b), c) in p.terms() {
                let (v, k) = reduce(sys, &mut memo, a, b);
                let lift = den_power(sys, top - k).shift(i, j).scale(c);
                for (t, x) in total.iter_mut().zip(&v) {
                    *t = &*t + &(x * &lift);
                }
            }
        }
        assert!(total.iter().all(Poly2::is_zero));
    }
}

#[test]
fn wrong_operator_fails_membership() {
    // dropping the x y-coupling term of the second operator leaves a nonzero remainder
    let sys = system();
    let s = &Poly2::x() + &Poly2::y();
    let lead = Poly2::from_terms(&[(1, 3, 0), (-1, 2, 1), (1, 1, 2), (-1, 0, 3)]);
    let bad = ThetaOperator::left(0, 0, lead).plus(&ThetaOperator::left(1, 0, (&s * &s).scale(&r(-2))));
    let mut memo = HashMap::new();
    let mut total = vec![Poly2::zero(); sys.rank()];
    for (&(i, j), p) in bad.terms() {
        for (&(a, b), c) in p.terms() {
            let (v, k) = reduce(sys, &mut memo, a, b);
            let lift = den_power(sys, 3 - k).shift(i, j).scale(c);
            for (t, x) in total.iter_mut().zip(&v) {
                *t = &*t + &(x * &lift);
            }
        }
    }
    assert!(total.iter().any(|p| !p.is_zero()));
}

/// `θ^α w` for each basis monomial.
fn jet(sys: &PfaffianSystem, w: &PSeries) -> Vec<PSeries> {
    sys.basis()
        .iter()
        .map(|&(a, b)| {
            let mut s = w.clone();
            for _ in 0..a {
                s = s.theta_x();
            }
            for _ in 0..b {
                s = s.theta_y();
            }
            s
        })
        .collect()
}

fn times(p: &Poly2, s: &PSeries) -> PSeries {
    let mut out = PSeries::zero(s.degree());
    for (&(i, j), c) in p.terms() {
        out = out.checked_add(&s.mul_monomial(i, j).scale(c)).unwrap();
    }
    out
}

#[test]
fn series_solutions_satisfy_the_system() {
    let sys = system();
    for w in [w0_series(9), w1_series(9, true), w1_series(9, false)] {
        let f = jet(sys, &w);
        for (conn, along_x) in [(sys.numerator_x(), true), (sys.numerator_y(), false)] {
            for (i, fi) in f.iter().enumerate() {
                let d = if along_x { fi.theta_x() } else { fi.theta_y() };
                let mut res = times(sys.denominator(), &d);
                for (j, fj) in f.iter().enumerate() {
                    res = res.checked_sub(&times(&conn[i][j], fj)).unwrap();
                }
                assert!(res.is_zero(), "row {i} along {}", if along_x { "x" } else { "y" });
            }
        }
    }
}

#[test]
fn wrong_holonomic_rank_is_reported() {
    let tx = Poly2::x();
    let ops = [ThetaOperator::left(0, 0, tx.clone()), ThetaOperator::left(0, 0, &tx - &Poly2::one())];
    assert!(matches!(build_pfaffian(&ops, 2), Err(Error::WrongHolonomicRank { .. })));
    let (d1, d2) = picard_fuchs_p3p3();
    assert!(matches!(build_pfaffian(&[d1, d2], 5), Err(Error::WrongHolonomicRank { got: 6, expected: 5 })));
    // θx alone leaves infinitely many free monomials in θy
    assert!(matches!(build_pfaffian(&[ThetaOperator::left(0, 0, tx)], 1), Err(Error::WrongHolonomicRank { .. })));
}

fn hypergeometric_loop(c: &Rat, prec: usize) -> f64 {
    hypergeometric_deviation(c, prec).unwrap()
}

#[test]
fn hypergeometric_golden_at_256_bits() {
    let dev = hypergeometric_loop(&rat(1, 3), 256);
    assert!(dev < 1e-20, "deviation {dev:e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]
    #[test]
    fn hypergeometric_exponents(num in 1i64..12) {
        let c = rat(num, 13);
        prop_assert!(hypergeometric_loop(&c, 96) < 1e-20);
    }
}

fn square(prec: usize, cap: Option<f64>) -> CMatrix {
    let opts = TransportOptions { step_cap: cap, ..TransportOptions::with_precision(prec) };
    transport(system(), &p3p3_contractible_square(), &opts).unwrap().0
}

#[test]
fn constant_and_retraced_paths_are_identity() {
    let base = p3p3_base();
    let id = CMatrix::identity(6, 256);
    let still = PathSpec::new("still", base.clone()).line_to(base.clone());
    let (m, st) = transport(system(), &still, &TransportOptions::default()).unwrap();
    assert_eq!(st.steps, 0);
    assert!(m.max_abs_diff(&id) < 1e-30);
    let there = ExactPoint::new(ExactC::new(rat(1, 100), rat(1, 300)), ExactC::real(rat(1, 256)));
    let back = PathSpec::new("back", base.clone()).through(&[there, base]);
    let (m, _) = transport(system(), &back, &TransportOptions::default()).unwrap();
    assert!(m.max_abs_diff(&id) < 1e-30);
}

#[test]
fn contractible_square_is_identity_and_scales_with_precision() {
    let d128 = square(128, None).max_abs_diff(&CMatrix::identity(6, 128));
    let d256 = square(256, None).max_abs_diff(&CMatrix::identity(6, 256));
    assert!(d256 < 1e-20, "deviation {d256:e}");
    assert!(d256 * 2.0 <= d128, "{d256:e} vs {d128:e}");
}

#[test]
fn halving_the_step_changes_little() {
    let prec = 128;
    let coarse = square(prec, Some(1e-3));
    let fine = square(prec, Some(5e-4));
    assert!(coarse.max_abs_diff(&fine) < 2f64.powi(-(prec as i32) / 2));
}

#[test]
fn passing_through_a_singularity_is_refused() {
    let b = rat(1, 256);
    let p = PathSpec::new("through x = 0", p3p3_base()).line_to(ExactPoint::real(-b.clone(), b));
    let err = transport(system(), &p, &TransportOptions::with_precision(64)).unwrap_err();
    assert!(matches!(err, Error::SingularityTooClose { .. }));
}

#[test]
fn reversed_piece_inverts_its_transfer() {
    let set = p3p3_loops().unwrap();
    let cut = set.piece("to-far").unwrap();
    let opts = TransportOptions::with_precision(96);
    let (f, _) = transport(system(), cut, &opts).unwrap();
    let (g, _) = transport(system(), &cut.reversed().unwrap(), &opts).unwrap();
    assert!(g.mul(&f).max_abs_diff(&CMatrix::identity(6, 96)) < 1e-20);
}

#[test]
fn flattened_loop_matches_composed_pieces() {
    let set = p3p3_loops().unwrap();
    let opts = TransportOptions::with_precision(96);
    let whole = set.flattened("Typ").unwrap();
    let (m, inv, _) = loop_monodromy(system(), &whole, &opts).unwrap();
    let (parts, _) = set.monodromies(system(), &["Typ"], &opts).unwrap();
    assert!(m.max_abs_diff(&parts["Typ"]) < 1e-20);
    assert!(inv.charpoly_deviation(&[(BigC::one(96), 6)]) < 1e-20);
}

#[test]
fn loop_char_polys() {
    let m = loops_128();
    let one = BigC::one(128);
    let minus = BigC::from_i64(-1, 128);
    for name in ["Tx", "Ty", "Typ", "Txpp"] {
        let dev = LoopInvariants::of(&m[name]).charpoly_deviation(&[(one.clone(), 6)]);
        assert!(dev < 1e-25, "{name}: {dev:e}");
    }
    for name in ["TE1", "TE2", "TE1-fixed-y", "TE2-fixed-x", "Txp", "Typp"] {
        let dev = LoopInvariants::of(&m[name]).charpoly_deviation(&[(one.clone(), 2), (minus.clone(), 4)]);
        assert!(dev < 1e-25, "{name}: {dev:e}");
    }
    for (name, mat) in m {
        let det = LoopInvariants::of(mat).det;
        assert!((det.abs_f64() - 1.0).abs() < 1e-25, "{name}");
    }
}

#[test]
fn dataset_relations_hold_numerically() {
    let m = loops_128();
    let ds = Dataset::bundled("p3p3").unwrap();
    assert_eq!(ds.relations().len(), 7);
    for rel in ds.relations() {
        let out = numeric_relation_check(m, rel, 1e-25).unwrap();
        assert!(out.holds, "{} deviates by {:e}", rel.id, out.deviation);
    }
}

#[test]
fn fixed_y_circle_differs_by_four_y_turns() {
    let m = loops_128();
    let expect = m["TE1"].mul(&m["Ty"].powi(-4).unwrap());
    assert!(m["TE1-fixed-y"].max_abs_diff(&expect) < 1e-25);
    assert!(m["TE1-fixed-y"].max_abs_diff(&m["TE1"]) > 1.0);
}

#[test]
fn word_traces_match_the_dataset() {
    let m = loops_128();
    let ds = Dataset::bundled("p3p3").unwrap();
    let words = ["Tx * Ty", "TE1 * Tx", "TE1 * Tx^-1 * Ty^2", "TE1^-1 * Tx * Ty", "TE1^2 * Tx", "Txp * Ty^-1", "Typ * Tx^2 * TE1"];
    for w in words {
        let (dev, exact) = word_trace_deviation(w, m, |n| Ok(ds.matrix(n)?.clone())).unwrap();
        assert!(dev < 1e-20, "{w}: trace {exact} off by {dev:e}");
    }
}

#[test]
fn invariants_survive_a_change_of_base_point() {
    let m = loops_128();
    let set = p3p3_loops().unwrap();
    let (s, _) = transport(system(), set.piece("stem").unwrap(), &TransportOptions::with_precision(128)).unwrap();
    let s_inv = s.inverse().unwrap();
    for name in ["Tx", "TE1"] {
        let moved = s.mul(&m[name]).mul(&s_inv);
        let a = LoopInvariants::of(&m[name]);
        let b = LoopInvariants::of(&moved);
        let dev = a.charpoly.iter().zip(&b.charpoly).map(|(x, y)| (x - y).abs_f64()).fold(0.0, f64::max);
        assert!(dev < 1e-20, "{name}");
    }
}
