use nilcone_core::cones::{
    check_delta, compose_word, cone_chain, conjugate_generators, quotient_action, quotient_fan,
    stabilizer_probe, verify_relation, w2_basis,
};
use nilcone_core::exact::ExactMatrix;
use nilcone_core::fan::LatticeRay;
use nilcone_core::{Dataset, Error, Word};

fn r(x: i64, y: i64) -> LatticeRay {
    LatticeRay::from_i64(x, y).unwrap()
}

#[test]
fn k3_composite_connection_matches_the_printed_product() {
    let ds = Dataset::bundled("k3").unwrap();
    let rho = compose_word(&Word::parse("phi13 * phi32 * phi21").unwrap(), &ds).unwrap();
    let expected =
        ExactMatrix::from_i64_rows(&[&[-1, 0, 0, 0], &[0, 3, -8, 0], &[0, 8, -21, 0], &[0, 0, 0, -1]]);
    assert_eq!(rho, expected);
    assert!(compose_word(&Word::default(), &ds).unwrap().is_identity());
    assert!(matches!(
        compose_word(&Word::parse("phi21 * phi32").unwrap(), &ds),
        Err(Error::NotComposable(_))
    ));
}

#[test]
fn every_relation_holds_exactly() {
    for name in ["p4p4", "p3p3", "k3"] {
        let ds = Dataset::bundled(name).unwrap();
        for rel in ds.relations() {
            assert!(verify_relation(rel, &ds).unwrap(), "{name}: {}", rel.id);
        }
    }
}

#[test]
fn correction_terms_and_flags() {
    let ds = Dataset::bundled("p4p4").unwrap();
    let d = check_delta(&ds, &ds.deltas()[0]).unwrap();
    assert!(d.matches_printed && d.vanishes_on_w2);
    let vals: Vec<&str> = d.nonzero.iter().map(|(_, _, v)| v.as_str()).collect();
    assert_eq!(vals, ["25", "-25/3", "-50", "25"]);

    let ds = Dataset::bundled("p3p3").unwrap();
    let d = check_delta(&ds, &ds.deltas()[0]).unwrap();
    assert!(d.matches_printed && d.vanishes_on_w2);
    let vals: Vec<&str> = d.nonzero.iter().map(|(_, _, v)| v.as_str()).collect();
    assert_eq!(vals, ["48", "-44/3", "-112", "48"]);
    assert_eq!(d.flags.len(), 1);
    assert!(!d.flags[0].agrees);
    assert_eq!(d.flags[0].computed, "-112");
}

#[test]
fn orbit_quotient_actions() {
    let ds = Dataset::bundled("p4p4").unwrap();
    let w2 = w2_basis(&ds).unwrap();
    let rho = ds.matrix("rho").unwrap();
    let q = quotient_action(&ds, rho, &w2).unwrap();
    assert_eq!(q, ExactMatrix::from_i64_rows(&[&[-4, -15], &[15, 56]]));
    let step = ExactMatrix::from_i64_rows(&[&[0, -1], &[1, 4]]);
    assert_eq!(q, step.pow(3).unwrap());
    let same = conjugate_generators(&[ds.nilpotent("N1").unwrap().clone()], &ExactMatrix::identity(6)).unwrap();
    assert_eq!(&same[0], ds.nilpotent("N1").unwrap());
}

#[test]
fn p4p4_chain_glues_over_a_wide_range() {
    let ds = Dataset::bundled("p4p4").unwrap();
    let chain = cone_chain(&ds, -5, 5).unwrap();
    assert!(chain.all_ok());
    assert_eq!(chain.cones.len(), 33);
    assert_eq!(chain.identities.len(), 33);
}

#[test]
fn depth_zero_fans() {
    let ds = Dataset::bundled("p4p4").unwrap();
    let chain = cone_chain(&ds, 0, 0).unwrap();
    assert_eq!(chain.cones.iter().map(|c| c.label.as_str()).collect::<Vec<_>>(), ["o2", "o1", "o3"]);
    let fan = quotient_fan(&chain).unwrap();
    assert_eq!(fan.chain_rays, vec![r(-1, 4), r(0, 1), r(1, 0), r(4, -1)]);
    assert_eq!(fan.rays, vec![r(4, -1), r(1, 0), r(0, 1), r(-1, 4)]);
    assert_eq!(fan.closure[0].to_string(), "(1, -2+√3)");
    assert_eq!(fan.closure[1].to_string(), "(-1, 2+√3)");
    assert!(fan.monotone && fan.inside_closure);

    let ds = Dataset::bundled("p3p3").unwrap();
    let chain = cone_chain(&ds, 0, 0).unwrap();
    assert!(chain.all_ok());
    let fan = quotient_fan(&chain).unwrap();
    assert_eq!(fan.rays, vec![r(6, -1), r(1, 0), r(0, 1), r(-1, 6)]);
    assert_eq!(fan.closure[0].to_string(), "(1, -3+2√2)");
    assert_eq!(fan.closure[1].to_string(), "(-1, 3+2√2)");
}

#[test]
fn p3p3_orbit_and_invariances() {
    let ds = Dataset::bundled("p3p3").unwrap();
    let chain = cone_chain(&ds, -5, 5).unwrap();
    assert!(chain.identities_ok());
    assert!(chain.adjacency_ok());
    assert!(chain.involutions_ok());
    assert_eq!(chain.orbit_quotient, ExactMatrix::from_i64_rows(&[&[35, 6], &[-6, -1]]));
    let fan = quotient_fan(&chain).unwrap();
    assert!(fan.monotone && fan.inside_closure);
    assert!(fan.chamber_dets.iter().all(|d| d == "1"));
}

#[test]
fn k3_chain_glues() {
    let ds = Dataset::bundled("k3").unwrap();
    let chain = cone_chain(&ds, -3, 3).unwrap();
    // no correction terms: neighboring cones span a plane
    assert!(chain.glued());
    assert!(chain.adjacency.iter().all(|a| a.span_rank == 2));
    assert!(chain.identities_ok());
    assert!(chain.orbit_ok(), "{:?}", chain.orbit_quotient);
    assert!(chain.corrections_ok(), "{:?}", chain.images);
    let fan = quotient_fan(&chain).unwrap();
    assert!(fan.monotone && fan.inside_closure);
}

#[test]
fn stabilizer_is_the_normal_closure() {
    let ds = Dataset::bundled("p3p3").unwrap();
    let rep = stabilizer_probe(&ds, 4).unwrap();
    assert!(rep.matches_dihedral_kernel);
    assert!(rep.subgroup_acts_trivially);
    assert!(rep.orbit_powers_ok);
    assert!(rep.outside_subgroup.is_some());
    assert_eq!(rep.generator_quotients[0].1, vec![vec!["-1", "0"], vec!["6", "1"]]);
    assert_eq!(rep.generator_quotients[1].1, vec![vec!["1", "6"], vec!["0", "-1"]]);
    assert!(stabilizer_probe(&Dataset::bundled("p4p4").unwrap(), 2).is_err());
}

#[test]
fn couplings_are_invariant_along_the_orbit() {
    use nilcone_core::hodge::{extract_couplings, reference_nilpotent};
    for (name, g) in [("p4p4", "rho"), ("p3p3", "tau12")] {
        let ds = Dataset::bundled(name).unwrap();
        let w2 = w2_basis(&ds).unwrap();
        let base = vec![ds.nilpotent("N1").unwrap().clone(), ds.nilpotent("N2").unwrap().clone()];
        let n0 = reference_nilpotent(6);
        let c0 = extract_couplings(&base, &n0).unwrap();
        for n in -3i64..=3 {
            let gn = ds.matrix(g).unwrap().powi(n).unwrap();
            let conj = conjugate_generators(&base, &gn).unwrap();
            assert_eq!(extract_couplings(&conj, &n0).unwrap(), c0, "{name} n={n}");
            // the correction terms enter the triple products, so the cubic form of the
            // quotient images differs from the transformed tensor away from n = 0
            let moved = c0.pullback(&quotient_action(&ds, &gn, &w2).unwrap()).unwrap();
            assert_eq!(moved == c0, n == 0, "{name} n={n}");
        }
    }
}
