//! Acceptance criteria of the verification tool, one test per criterion.
//!
//! Each test prints a single `criterion N: PASS|FAIL` line with its witnesses before
//! asserting, so `cargo test -- --nocapture` shows the full scorecard.

use std::time::{Duration, Instant};

use nilcone::numeric::{TransportPlan, TransportRun};
use nilcone::suites::{couplings, gluing, lcsl, mirror, rays, relations, series, symplectic};
use nilcone::{Record, Status};
use nilcone_core::exact::{int, ExactMatrix};
use nilcone_core::Dataset;

/// Runtime budgets.
const FAST: Duration = Duration::from_secs(1);
const GLUING_BUDGET: Duration = Duration::from_secs(5);
const SERIES_BUDGET: Duration = Duration::from_secs(10);
const TRANSPORT_BUDGET: Duration = Duration::from_secs(600);

/// Numeric tolerances of the transport criterion.
const TRANSPORT_BITS: usize = 256;
const GOLDEN_TOL: f64 = 1e-20;
const CONTRACTIBLE_TOL: f64 = 1e-20;
const CHARPOLY_TOL: f64 = 1e-8;
const TRACE_TOL: f64 = 1e-6;
const COMMUTATION_TOL: f64 = 1e-8;

const THREEFOLDS: [&str; 2] = ["p4p4", "p3p3"];
const CASES: [&str; 3] = ["p4p4", "p3p3", "k3"];

fn ds(name: &str) -> Dataset {
    Dataset::bundled(name).expect("bundled dataset")
}

fn find<'a>(records: &'a [Record], id: &str) -> &'a Record {
    records.iter().find(|r| r.id == id).unwrap_or_else(|| panic!("no record {id}"))
}

fn w<'a>(r: &'a Record, key: &str) -> &'a str {
    r.witness.get(key).map(String::as_str).unwrap_or_else(|| panic!("{} has no witness {key}", r.id))
}

fn fails(records: &[Record]) -> Vec<&str> {
    records.iter().filter(|r| r.status == Status::Fail).map(|r| r.id.as_str()).collect()
}

/// Prints the criterion line, then fails the test if `failures` is nonempty.
fn verdict(n: u32, what: &str, failures: Vec<String>, elapsed: Duration, budget: Duration) {
    let mut failures = failures;
    if elapsed > budget {
        failures.push(format!("took {elapsed:.2?}, budget {budget:.2?}"));
    }
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {n}: {status} {what} ({elapsed:.2?}){}", if failures.is_empty() { String::new() } else { format!(": {}", failures.join("; ")) });
    assert!(failures.is_empty(), "criterion {n} failed: {failures:?}");
}

fn expect(failures: &mut Vec<String>, ok: bool, msg: impl Into<String>) {
    if !ok {
        failures.push(msg.into());
    }
}

#[test]
fn criterion_01_printed_matrices_preserve_the_form() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut checked = 0;
    for name in CASES {
        let recs = symplectic(&ds(name));
        checked += recs.len();
        expect(&mut bad, fails(&recs).is_empty(), format!("{name}: {:?}", fails(&recs)));
        // the only flagged record is the transcribed typo, which the dataset corrects by symmetry
        let flagged: Vec<&str> = recs.iter().filter(|r| r.status == Status::Flagged).map(|r| r.id.as_str()).collect();
        let allowed: &[&str] = if name == "p4p4" { &["symplectic/Ty_printed"] } else { &[] };
        expect(&mut bad, flagged == allowed, format!("{name}: flagged {flagged:?}"));
    }
    expect(&mut bad, checked >= 15, format!("only {checked} matrices checked"));
    verdict(1, &format!("{checked} printed matrices preserve the form exactly"), bad, t.elapsed(), FAST);
}

#[test]
fn criterion_02_unipotency_and_exceptional_monodromy() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for name in THREEFOLDS {
        let recs = lcsl(&ds(name));
        for g in ["Tx", "Ty"] {
            let r = find(&recs, &format!("unipotent/{g}"));
            expect(&mut bad, r.status == Status::Pass && w(r, "index") == "4", format!("{name} {g} index {}", w(r, "index")));
        }
        let te = find(&recs, "quasi-unipotent/TE1");
        let (order, entry) = if name == "p3p3" { ("2", "96") } else { ("1", "50") };
        expect(
            &mut bad,
            te.status == Status::Pass && w(te, "order") == order && w(te, "entry") == entry,
            format!("{name} TE1 order {} entry {:?}", w(te, "order"), te.witness.get("entry")),
        );
    }
    verdict(2, "Tx, Ty have index 4; TE1 has order 2 with entry 96 (p3p3) and order 1 with entry 50 (p4p4)", bad, t.elapsed(), FAST);
}

#[test]
fn criterion_03_couplings() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let expected: [(&str, &str, &str); 6] = [
        ("p4p4", "o1", "(5, 10, 10, 5)"),
        ("p4p4", "o2", "(5, 10, 10, 5)"),
        ("p4p4", "flop", "(-45, 10, 10, 5)"),
        ("p3p3", "o", "(2, 6, 6, 2)"),
        ("p3p3", "tau1", "(2, 6, 6, 2)"),
        ("p3p3", "flop", "(-110, 6, 6, 2)"),
    ];
    for (name, id, want) in expected {
        let recs = couplings(&ds(name));
        let r = find(&recs, &format!("couplings/{id}"));
        expect(&mut bad, r.status == Status::Pass && w(r, "computed") == want, format!("{name} {id}: {}", w(r, "computed")));
    }
    verdict(3, "triple products reproduce the coupling values in every frame", bad, t.elapsed(), FAST);
}

#[test]
fn criterion_04_relations() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut count = 0;
    for name in CASES {
        let recs = relations(&ds(name));
        count += recs.len();
        expect(&mut bad, fails(&recs).is_empty(), format!("{name}: {:?}", fails(&recs)));
    }
    let p4 = relations(&ds("p4p4"));
    expect(&mut bad, find(&p4, "relation/E1pp").status == Status::Pass, "the permutation-conjugate relation");
    expect(&mut bad, find(&p4, "relation/o2-x").status == Status::Pass, "the x relation at o2");
    let p3 = relations(&ds("p3p3"));
    for id in ["E1-x", "E1-y", "E2-x", "E2-y"] {
        expect(&mut bad, find(&p3, &format!("relation/{id}")).status == Status::Pass, id);
    }
    let k3 = relations(&ds("k3"));
    expect(&mut bad, w(find(&k3, "relation/exceptional-trivial"), "note") == "TE1 = id", "k3 note");
    verdict(4, &format!("{count} relation records hold exactly"), bad, t.elapsed(), FAST);
}

#[test]
fn criterion_05_filtrations_and_lcsl() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for (name, point) in [("p4p4", "o1"), ("p3p3", "o")] {
        let recs = lcsl(&ds(name));
        let f = find(&recs, &format!("filtration/{point}"));
        let probes: usize = w(f, "interior_points").parse().unwrap();
        expect(
            &mut bad,
            f.status == Status::Pass && w(f, "even_dims") == "[1, 3, 5, 6]" && w(f, "w2_leading") == "true" && probes >= 3,
            format!("{name} {point}: {:?}", f.witness),
        );
        let l = find(&recs, &format!("lcsl/{point}"));
        let det = w(l, "det_m");
        expect(&mut bad, l.status == Status::Pass && w(l, "verdict") == "true" && det != "0", format!("{name} {point}: det {det}"));
    }
    verdict(5, "dims (1,3,5,6), W2 on the leading vectors, LCSL verdicts true with det m != 0", bad, t.elapsed(), FAST);
}

#[test]
fn criterion_06_gluing() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for name in THREEFOLDS {
        let recs = gluing(&ds(name));
        expect(&mut bad, fails(&recs).is_empty(), format!("{name}: {:?}", fails(&recs)));
        for r in recs.iter().filter(|r| r.id.starts_with("delta/")) {
            expect(&mut bad, w(r, "matches_printed") == "true" && w(r, "vanishes_on_w2") == "true", format!("{name} {}", r.id));
        }
        let ids = find(&recs, "chain/identities");
        expect(&mut bad, w(ids, "range") == "n in [-5, 5]", format!("{name} chain range {}", w(ids, "range")));
        expect(&mut bad, w(find(&recs, "chain/adjacency"), "transversal") == "true", format!("{name} transversality"));
    }
    let recs = gluing(&ds("p3p3"));
    for id in ["chain/invariance/TE1/N2", "chain/invariance/TE2/N1"] {
        let r = find(&recs, id);
        expect(&mut bad, r.status == Status::Pass && w(r, "checked") == "11", format!("{id}: {:?}", r.witness));
    }
    let orbit = find(&recs, "chain/orbit");
    expect(&mut bad, w(orbit, "computed") == "[[35,6],[-6,-1]]", format!("orbit {}", w(orbit, "computed")));
    let flag = find(&recs, "flag/delta-odd-entry");
    expect(
        &mut bad,
        flag.status == Status::Flagged && w(flag, "printed") == "-122" && w(flag, "computed") == "-112",
        format!("flag {:?}", flag.witness),
    );
    verdict(6, "corrections match, chain glues over [-5, 5], invariances hold, orbit [[35,6],[-6,-1]], -122 flagged", bad, t.elapsed(), GLUING_BUDGET);
}

#[test]
fn criterion_07_rays() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let expected = [
        ("p4p4", "(1, -2+√3) (-1, 2+√3)", "(4, -1) (1, 0) (0, 1) (-1, 4)"),
        ("p3p3", "(1, -3+2√2) (-1, 3+2√2)", "(6, -1) (1, 0) (0, 1) (-1, 6)"),
    ];
    for (name, closure, walls) in expected {
        let d = ds(name);
        let recs = rays(&d);
        let q = find(&recs, "rays/quotient");
        expect(&mut bad, q.status == Status::Pass && w(q, "eigen") == "true", format!("{name} quotient {:?}", q.witness));
        expect(&mut bad, w(q, "closure") == closure, format!("{name} closure {}", w(q, "closure")));
        let m = find(&recs, "rays/movable");
        expect(&mut bad, m.status == Status::Pass && w(m, "walls") == walls, format!("{name} walls {}", w(m, "walls")));
        expect(&mut bad, w(m, "closure") == closure, format!("{name} movable closure {}", w(m, "closure")));
        let mi = mirror(&d);
        expect(&mut bad, mi[0].status == Status::Pass && w(&mi[0], "depth") == "3", format!("{name} mirror {:?}", mi[0].witness));
    }
    verdict(7, "closure rays are exact eigen-lines, movable walls match, mirror fans agree at depth 3", bad, t.elapsed(), FAST);
}

#[test]
fn criterion_08_series() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let p3 = series(&ds("p3p3"));
    let w0 = find(&p3, "series/w0");
    expect(&mut bad, w0.status == Status::Pass && w(w0, "degree") == "12", format!("w0 {:?}", w0.witness));
    for (name, mult) in [("p4p4", "5"), ("p3p3", "4")] {
        let recs = if name == "p3p3" { p3.clone() } else { series(&ds(name)) };
        let tan = find(&recs, "series/tangency");
        expect(&mut bad, tan.status == Status::Pass && w(tan, "multiplicity") == mult, format!("{name} tangency {}", w(tan, "multiplicity")));
        let flop = find(&recs, "series/flop-identity");
        expect(&mut bad, flop.status == Status::Pass, format!("{name} flop identity {:?}", flop.witness));
    }
    verdict(8, "w0 through degree 12, flop identities, tangency 5 and 4", bad, t.elapsed(), SERIES_BUDGET);
}

#[test]
fn criterion_09_prepotential_shift() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let recs = couplings(&ds("p4p4"));
    let r = find(&recs, "prepotential/phi21");
    expect(&mut bad, w(r, "pure_a") == "true", "the shift has b terms");
    // the computed coefficients disagree with the printed display, which is reported, not hidden
    let agrees = w(r, "computed_q") == w(r, "printed_q");
    let want = if agrees { Status::Pass } else { Status::Flagged };
    expect(&mut bad, r.status == want, format!("status {:?} for {:?}", r.status, r.witness));
    verdict(
        9,
        &format!("pure-a shift {} against printed {} ({})", w(r, "computed"), w(r, "printed_q"), r.status.label()),
        bad,
        t.elapsed(),
        FAST,
    );
}

#[test]
fn criterion_10_transport() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let plan = TransportPlan {
        loops: ["Tx", "Ty", "TE1"].map(String::from).to_vec(),
        ..TransportPlan::full(TRANSPORT_BITS, 0.0)
    };
    let run = TransportRun::compute(&plan).expect("transport runs");
    expect(&mut bad, run.flat == Some(true), "system is not flat");
    let golden = run.golden.unwrap();
    expect(&mut bad, golden < GOLDEN_TOL, format!("hypergeometric deviation {golden:e}"));
    let square = run.square.unwrap();
    expect(&mut bad, square < CONTRACTIBLE_TOL, format!("contractible deviation {square:e}"));
    let charpoly: Vec<&str> = run.charpolys.iter().map(|(n, _)| n.as_str()).collect();
    expect(&mut bad, charpoly == ["Tx", "Ty", "TE1"], format!("char polys of {charpoly:?}"));
    for (name, d) in &run.charpolys {
        expect(&mut bad, *d < CHARPOLY_TOL, format!("char poly of {name} off by {d:e}"));
    }
    expect(&mut bad, run.traces.len() >= 8, format!("{} traces", run.traces.len()));
    for (word, d, exact) in &run.traces {
        expect(&mut bad, *d < TRACE_TOL, format!("trace of {word} (exact {exact}) off by {d:e}"));
    }
    let commuting: Vec<_> = run.relations.iter().filter(|(id, _, _)| id.ends_with("commute")).collect();
    expect(&mut bad, commuting.len() == 2, format!("{} commutation relations", commuting.len()));
    for (id, _, d) in commuting {
        expect(&mut bad, *d < COMMUTATION_TOL, format!("{id} off by {d:e}"));
    }
    let worst_charpoly = run.charpolys.iter().map(|(_, d)| *d).fold(0.0, f64::max);
    let worst_trace = run.traces.iter().map(|(_, d, _)| *d).fold(0.0, f64::max);
    verdict(
        10,
        &format!(
            "at {TRANSPORT_BITS} bits: golden {golden:.1e}, contractible {square:.1e}, char polys {worst_charpoly:.1e}, traces {worst_trace:.1e}"
        ),
        bad,
        t.elapsed(),
        TRANSPORT_BUDGET,
    );
}

/// The dataset with the printed matrix `name` replaced by `f(printed)`.
fn corrupted(name: &str, matrix: &str, f: impl Fn(&ExactMatrix) -> ExactMatrix) -> Result<Dataset, String> {
    let d = ds(name);
    let printed = d.named(matrix).unwrap().printed.clone().unwrap();
    Dataset::from_file(d.file_with_matrix(matrix, &f(&printed)).unwrap()).map_err(|e| e.to_string())
}

/// `m` with one entry raised by one, at the first position that keeps it invertible.
fn slipped(m: &ExactMatrix) -> ExactMatrix {
    let n = m.rows();
    (0..n * n)
        .map(|k| {
            let mut s = m.clone();
            s.set(k / n, k % n, s.get(k / n, k % n) + int(1));
            s
        })
        .find(|s| s.det().is_ok_and(|d| d != int(0)))
        .expect("an invertible slip")
}

#[test]
fn criterion_11_negative_controls() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for name in THREEFOLDS {
        // a transcription slip in one entry breaks the form
        let slip = corrupted(name, "TE1", slipped);
        match slip {
            Ok(d) => expect(&mut bad, !fails(&symplectic(&d)).is_empty(), format!("{name}: symplectic suite missed the slip")),
            Err(e) => bad.push(format!("{name}: slipped dataset rejected at load ({e})")),
        }
        // the same slip in a log-defining matrix is rejected when the dataset loads
        expect(&mut bad, corrupted(name, "Tx", slipped).is_err(), format!("{name}: slipped Tx loaded"));
        // the identity for Tx keeps the form and the logs but has the wrong nilpotency index
        let flat = corrupted(name, "Tx", |m| ExactMatrix::identity(m.rows())).unwrap();
        expect(&mut bad, fails(&lcsl(&flat)).contains(&"unipotent/Tx"), format!("{name}: unipotency missed"));
        // inverting the exceptional monodromy keeps the form but breaks the relations
        let inv = corrupted(name, "TE1", |m| m.inverse().unwrap()).unwrap();
        expect(&mut bad, fails(&symplectic(&inv)).is_empty(), format!("{name}: inverse should stay symplectic"));
        expect(&mut bad, !fails(&relations(&inv)).is_empty(), format!("{name}: relations missed the inverted TE1"));
    }
    verdict(11, "corrupted datasets fail the symplectic, unipotency and relation suites", bad, t.elapsed(), FAST);
}
