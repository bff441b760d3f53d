use nilcone_core::birational::{
    dictionary, format_class, mirror_compare, movable_chambers, positive_cone_boundary, pullback_cone,
    replay_identities, rho_star, BirationalModel, DivisorCone, PullbackMap,
};
use nilcone_core::cones::{cone_chain, quotient_fan};
use nilcone_core::exact::ExactMatrix;
use nilcone_core::fan::LatticeRay;
use nilcone_core::{Dataset, Error};

fn r(x: i64, y: i64) -> LatticeRay {
    LatticeRay::from_i64(x, y).unwrap()
}

#[test]
fn kahler_cones_of_the_flopped_models() {
    let ds = Dataset::bundled("p4p4").unwrap();
    let model = BirationalModel::from_dataset(&ds).unwrap();
    let names = model.class_names("X1").to_vec();
    let c2 = pullback_cone(&model.kahler_cone("X2").unwrap(), &model.maps["phi21*"]).unwrap();
    let shown: Vec<String> = c2.rays.iter().map(|x| format_class(x, &names)).collect();
    assert_eq!(shown, ["H2", "4 H2 - H1"]);
    let c3 = pullback_cone(&model.kahler_cone("X3").unwrap(), &model.maps["phi31*"]).unwrap();
    let shown: Vec<String> = c3.rays.iter().map(|x| format_class(x, &names)).collect();
    assert_eq!(shown, ["4 H1 - H2", "H1"]);
    let id = PullbackMap::new("id", "X1", "X1", ExactMatrix::identity(2)).unwrap();
    let k = model.kahler_cone("X1").unwrap();
    assert!(pullback_cone(&k, &id).unwrap().same_as(&k));
    assert!(matches!(pullback_cone(&k, &model.maps["phi21*"]), Err(Error::NotComposable(_))));
}

#[test]
fn pullbacks_must_be_lattice_automorphisms() {
    let m = ExactMatrix::from_i64_rows(&[&[2, 0], &[0, 1]]);
    assert!(matches!(PullbackMap::new("bad", "A", "B", m), Err(Error::Inconsistent(_))));
    let z = ExactMatrix::zeros(2, 2);
    assert!(matches!(PullbackMap::new("zero", "A", "B", z), Err(Error::Singular)));
}

#[test]
fn orbit_generators() {
    let (m, rep) = rho_star(&Dataset::bundled("p4p4").unwrap()).unwrap();
    assert!(rep.matches && rep.infinite_order && rep.irrational_fixed_rays);
    assert_eq!(rep.det, "1");
    assert_eq!(rep.discriminant, "2700");
    assert_eq!(m.matrix.inverse().unwrap(), ExactMatrix::from_i64_rows(&[&[56, 15], &[-15, -4]]));
    let (_, rep) = rho_star(&Dataset::bundled("p3p3").unwrap()).unwrap();
    assert!(rep.matches && rep.infinite_order);
    let (_, rep) = rho_star(&Dataset::bundled("k3").unwrap()).unwrap();
    assert!(rep.matches && rep.infinite_order);
}

#[test]
fn replayed_identities_hold() {
    for name in ["p4p4", "p3p3", "k3"] {
        let reps = replay_identities(&Dataset::bundled(name).unwrap()).unwrap();
        assert!(!reps.is_empty());
        for rep in reps {
            assert!(rep.holds, "{name}: {}", rep.statement);
        }
    }
}

#[test]
fn movable_cone_walls_and_closure() {
    let ds = Dataset::bundled("p4p4").unwrap();
    let fan = movable_chambers(&ds, 0).unwrap();
    assert_eq!(fan.rays, vec![r(4, -1), r(1, 0), r(0, 1), r(-1, 4)]);
    assert_eq!(fan.closure[0].to_string(), "(1, -2+√3)");
    assert_eq!(fan.closure[1].to_string(), "(-1, 2+√3)");
    let deep = movable_chambers(&ds, 3).unwrap();
    assert!(deep.monotone && deep.inside_closure && deep.orbit_consistent);
    assert_eq!(deep.rays.len(), 4 + 6 * 3);
    assert!(deep.chamber_dets.iter().all(|d| d == "1"));
}

#[test]
fn k3_positive_cone_is_the_closure() {
    let ds = Dataset::bundled("k3").unwrap();
    let fan = movable_chambers(&ds, 2).unwrap();
    let gram = ExactMatrix::from_i64_rows(&[&[4, 6], &[6, 4]]);
    let pos = positive_cone_boundary(&gram, &r(1, 1)).unwrap();
    for (a, b) in fan.closure.iter().zip(&pos) {
        assert!(a.same_direction(b).unwrap(), "{a} vs {b}");
    }
    assert_eq!(pos[0].to_string(), "(1, -3/2+1/2√5)");
    assert_eq!(pos[1].to_string(), "(-1, 3/2+1/2√5)");
}

#[test]
fn mirror_dictionary_matches_both_threefolds() {
    for name in ["p4p4", "p3p3", "k3"] {
        let ds = Dataset::bundled(name).unwrap();
        let a = movable_chambers(&ds, 3).unwrap();
        let b = quotient_fan(&cone_chain(&ds, -3, 3).unwrap()).unwrap();
        let dict = dictionary(&ds).unwrap();
        assert!(mirror_compare(&a, &b, &dict).unwrap().agrees(), "{name}");
        let swapped = ExactMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert!(!mirror_compare(&a, &b, &swapped).unwrap().agrees(), "{name} swapped");
        let shallow = movable_chambers(&ds, 2).unwrap();
        assert!(matches!(mirror_compare(&shallow, &b, &dict), Err(Error::DepthMismatch(2, 3))));
    }
}

#[test]
fn chamber_words_must_end_at_home() {
    let ds = Dataset::bundled("p4p4").unwrap();
    let model = BirationalModel::from_dataset(&ds).unwrap();
    assert!(model.chamber("phi32*").is_err());
    let c: DivisorCone = model.chamber("").unwrap();
    assert_eq!(c.rays, vec![r(1, 0), r(0, 1)]);
}
