//! Exact verification suites over a monodromy dataset.

use std::fmt;
use std::str::FromStr;

use nilcone_core::birational::{dictionary, mirror_compare, movable_chambers, replay_identities, rho_star};
use nilcone_core::cones::{check_delta, cone_chain, quotient_fan, stabilizer_probe, verify_relation, ConeChain};
use nilcone_core::dataset::{Entries, Role};
use nilcone_core::exact::{
    dual_action, eigenrays_2x2, format_rat, int, parse_rat, quasi_unipotency_order, rat, unipotency_index, unipotent_log,
};
use nilcone_core::hodge::{cone_point, extract_couplings, lcsl_verify, leading_coordinates, reference_nilpotent, weight_filtration, CouplingTensor};
use nilcone_core::series::{
    check_annihilation, compare_prepotential, coupling_pullback, discriminant_p3p3, discriminant_p4p4,
    flop_invariance_check, jacobian_from_transform, prepotential_shift, tangency_multiplicity, w0_series, w1_series,
};
use nilcone_core::{Dataset, Error, ExactMatrix, Rat, Result};

use crate::numeric::{transport_records, TransportPlan};
use crate::report::{Record, Report, Status};

/// Verification suites in the order `all` runs them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Symplectic,
    Lcsl,
    Relations,
    Couplings,
    Gluing,
    Rays,
    Series,
    Mirror,
    Transport,
}

impl Suite {
    pub const NAMES: [&'static str; 10] =
        ["all", "symplectic", "lcsl", "relations", "couplings", "gluing", "rays", "series", "mirror", "transport"];

    const EACH: [Suite; 9] = [
        Suite::Symplectic,
        Suite::Lcsl,
        Suite::Relations,
        Suite::Couplings,
        Suite::Gluing,
        Suite::Rays,
        Suite::Series,
        Suite::Mirror,
        Suite::Transport,
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES[self as usize]
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::NAMES
            .iter()
            .position(|n| *n == s)
            .map(|k| [Suite::All].into_iter().chain(Self::EACH).nth(k).expect("names align"))
            .ok_or_else(|| Error::Schema(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Runs one suite, or every suite for [`Suite::All`], on `ds`.
///
/// Transport runs only for the `p3p3` case with the given plan; other cases yield no
/// transport records.
pub fn run_verification(ds: &Dataset, suite: Suite, plan: &TransportPlan) -> Report {
    let mut report = Report::new(ds.name(), suite.name());
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    for s in suites {
        report.extend(match s {
            Suite::Symplectic => symplectic(ds),
            Suite::Lcsl => lcsl(ds),
            Suite::Relations => relations(ds),
            Suite::Couplings => couplings(ds),
            Suite::Gluing => gluing(ds),
            Suite::Rays => rays(ds),
            Suite::Series => series(ds),
            Suite::Mirror => mirror(ds),
            Suite::Transport if ds.name() == "p3p3" => transport_records(plan),
            Suite::Transport | Suite::All => Vec::new(),
        });
    }
    report
}

fn entries_text(e: &Entries) -> String {
    let rows: Vec<String> = e.iter().map(|r| format!("[{}]", r.join(","))).collect();
    format!("[{}]", rows.join(","))
}

fn matrix_text(m: &ExactMatrix) -> String {
    let rows: Vec<String> =
        m.to_rows().iter().map(|r| format!("[{}]", r.iter().map(format_rat).collect::<Vec<_>>().join(","))).collect();
    format!("[{}]", rows.join(","))
}

/// Runs `f`, turning an error into a failed record with the same id and anchor.
fn guarded(id: &str, anchor: &str, f: impl FnOnce() -> Result<Record>) -> Record {
    f().unwrap_or_else(|e| Record::error(id, anchor, e))
}

/// Every printed monodromy, connection and exceptional matrix preserves the form.
/// A matrix marked as a printed typo that breaks the form is flagged.
pub fn symplectic(ds: &Dataset) -> Vec<Record> {
    let kind = if ds.weight() % 2 == 1 { "symplectic" } else { "symmetric" };
    ds.matrices()
        .filter(|m| m.printed.is_some() && (m.role.is_symplectic() || m.role == Role::PrintedTypo))
        .map(|m| {
            let id = format!("symplectic/{}", m.name);
            let anchor = format!("{} preserves the {kind} form", m.label);
            guarded(&id, &anchor, || {
                let ok = ds.form().is_preserved_by(&m.matrix)?;
                let status = match (ok, m.role) {
                    (true, _) => Status::Pass,
                    (false, Role::PrintedTypo) => Status::Flagged,
                    (false, _) => Status::Fail,
                };
                let mut r = Record::new(&id, &anchor, status).with("preserved", ok);
                if let Some(note) = &m.note {
                    r = r.with("note", note);
                }
                Ok(r)
            })
        })
        .collect()
}

/// Interior points of a two-generator cone used to probe the filtration.
const INTERIOR_WEIGHTS: [(i64, i64); 4] = [(1, 1), (1, 2), (3, 1), (2, 5)];

/// Unipotency of the local monodromies, quasi-unipotency of the printed exceptional
/// monodromies, weight filtrations on cone interiors and the LCSL conditions.
pub fn lcsl(ds: &Dataset) -> Vec<Record> {
    let mut out = Vec::new();
    let w = ds.weight();
    let mut seen = Vec::new();
    for p in ds.points().iter().filter(|p| p.lcsl) {
        for g in &p.generators {
            if seen.contains(g) {
                continue;
            }
            seen.push(g.clone());
            let id = format!("unipotent/{g}");
            let anchor = format!("(M - I)^{} = 0 and (M - I)^{} != 0 for {g}", w + 1, w);
            out.push(guarded(&id, &anchor, || {
                let k = unipotency_index(ds.matrix(g)?)?;
                let shown = k.map_or("none".to_string(), |k| k.to_string());
                Ok(Record::check(&id, &anchor, k == Some(w + 1)).with("index", shown))
            }));
        }
    }
    for m in ds.matrices().filter(|m| m.role == Role::Exceptional && m.printed.is_some()) {
        let id = format!("quasi-unipotent/{}", m.name);
        let anchor = format!("{}: some power minus the identity has a single nonzero entry", m.label);
        out.push(guarded(&id, &anchor, || {
            let k = quasi_unipotency_order(&m.matrix, 12)?;
            let d = m.matrix.pow(k as u32)?.checked_sub(&ExactMatrix::identity(ds.dimension()))?;
            let nz: Vec<(usize, usize, Rat)> = (0..d.rows())
                .flat_map(|i| (0..d.cols()).map(move |j| (i, j)))
                .filter(|&(i, j)| *d.get(i, j) != int(0))
                .map(|(i, j)| (i, j, d.get(i, j).clone()))
                .collect();
            let mut r = Record::check(&id, &anchor, nz.len() == 1).with("order", k);
            if let [(i, j, v)] = nz.as_slice() {
                r = r.with("entry", format_rat(v)).with("position", format!("({i}, {j})"));
            } else {
                r = r.with("nonzero_entries", nz.len());
            }
            Ok(r)
        }));
    }
    for (k, p) in ds.points().iter().enumerate() {
        let id = format!("filtration/{}", p.name);
        let anchor = format!("{}: the weight filtration is constant on the open cone", p.label);
        out.push(guarded(&id, &anchor, || {
            let logs: Vec<ExactMatrix> = ds.point_generators(&p.name)?.iter().map(unipotent_log).collect::<Result<_>>()?;
            let r = logs.len();
            let mut first = None;
            let mut same = true;
            let mut probes = 0;
            for (a, b) in INTERIOR_WEIGHTS {
                let lambda: Vec<Rat> = [a, b].iter().cycle().take(r).map(|v| int(*v)).collect();
                let f = weight_filtration(&cone_point(&logs, &lambda)?, w)?;
                probes += 1;
                match &first {
                    None => first = Some(f),
                    Some(f0) => same &= f0.same_as(&f)?,
                }
            }
            let f = first.expect("probes ran");
            let dims = f.even_dims();
            let mut ok = same && dims.first() == Some(&1) && dims.get(1) == Some(&(1 + r));
            let mut rec = Record::new(&id, &anchor, Status::Pass)
                .with("interior_points", probes)
                .with("even_dims", format!("{dims:?}"));
            // the base point's own frame puts W_2 on the leading basis vectors
            if k == 0 {
                let lead = nilcone_core::exact::same_span(&f.step(2), &leading_coordinates(ds.dimension(), 1 + r))?;
                ok &= lead;
                rec = rec.with("w2_leading", lead);
            }
            rec.status = Status::from_bool(ok);
            Ok(rec)
        }));
        let id = format!("lcsl/{}", p.name);
        let anchor = format!("{}: unipotent, dim W_0 = 1, dim W_2 = 1 + r, det m != 0", p.label);
        out.push(guarded(&id, &anchor, || {
            let rep = lcsl_verify(&ds.point_generators(&p.name)?, w)?;
            let mut r = Record::check(&id, &anchor, rep.verdict == p.lcsl).with("verdict", rep.verdict);
            if let Some(d) = &rep.m_det {
                r = r.with("det_m", format_rat(d));
            }
            if let Some((d0, d2)) = rep.filtration_dims {
                r = r.with("dims_w0_w2", format!("({d0}, {d2})"));
            }
            Ok(r)
        }));
    }
    out
}

/// Every declared relation holds exactly on the dataset matrices.
pub fn relations(ds: &Dataset) -> Vec<Record> {
    let mut out: Vec<Record> = ds
        .relations()
        .iter()
        .map(|rel| {
            let id = format!("relation/{}", rel.id);
            guarded(&id, &rel.label, || {
                let ok = verify_relation(rel, ds)?;
                Ok(Record::check(&id, &rel.label, ok).with("lhs", &rel.lhs).with("rhs", &rel.rhs))
            })
        })
        .collect();
    let has_exceptional = ds.matrices().any(|m| m.role == Role::Exceptional);
    if !has_exceptional && !ds.relations().is_empty() {
        let id = "relation/exceptional-trivial".to_string();
        let anchor = "the exceptional monodromies are trivial and drop out of the relations";
        out.push(Record::new(id, anchor, Status::Pass).with("note", "TE1 = id"));
    }
    out
}

fn parse_values(values: &[String]) -> Result<Vec<Rat>> {
    values.iter().map(|v| parse_rat(v)).collect()
}

fn rats_text(v: &[Rat]) -> String {
    format!("({})", v.iter().map(format_rat).collect::<Vec<_>>().join(", "))
}

/// Canonical coupling tensor of a named pair of nilpotents.
pub fn couplings_of(ds: &Dataset, generators: &[String]) -> Result<CouplingTensor> {
    let gens: Vec<ExactMatrix> = generators.iter().map(|g| ds.nilpotent(g).cloned()).collect::<Result<_>>()?;
    extract_couplings(&gens, &reference_nilpotent(ds.dimension()))
}

/// Triple products of the nilpotents against the expected couplings, and the
/// prepotential shift across each listed connection.
pub fn couplings(ds: &Dataset) -> Vec<Record> {
    let mut out = Vec::new();
    for c in ds.couplings() {
        let id = format!("couplings/{}", c.id);
        out.push(guarded(&id, &c.label, || {
            let got = couplings_of(ds, &c.generators)?.canonical();
            let want = parse_values(&c.values)?;
            Ok(Record::check(&id, &c.label, got == want).with("computed", rats_text(&got)).with("expected", rats_text(&want)))
        }));
    }
    let r = ds.dimension() / 2 - 1;
    for q in ds.prepotentials() {
        let id = format!("prepotential/{}", q.id);
        let anchor = format!("{}: the shift is a quadratic form in the a periods alone", q.label);
        out.push(guarded(&id, &anchor, || {
            let printed = nilcone_core::dataset::parse_entries(&q.printed, r, r, &id)?;
            let form = match prepotential_shift(&dual_action(ds.matrix(&q.connection)?)?, r) {
                Ok(f) => f,
                Err(Error::NotAQuadraticShiftInA(s)) => {
                    return Ok(Record::new(&id, &anchor, Status::Fail).with("b_terms", s));
                }
                Err(e) => return Err(e),
            };
            let cmp = compare_prepotential(&form, &printed)?;
            let status = match (cmp.pure_a, cmp.agrees) {
                (false, _) => Status::Fail,
                (true, true) => Status::Pass,
                (true, false) => Status::Flagged,
            };
            let q_text = |rows: &Vec<Vec<String>>| format!("[{}]", rows.iter().map(|r| format!("[{}]", r.join(","))).collect::<Vec<_>>().join(","));
            Ok(Record::new(&id, &anchor, status)
                .with("computed", &cmp.computed)
                .with("computed_q", q_text(&cmp.computed_q))
                .with("printed_q", q_text(&cmp.printed_q))
                .with("pure_a", cmp.pure_a))
        }));
    }
    out
}

/// Range of the glued chain checked by the gluing suite.
pub const CHAIN_RANGE: (i64, i64) = (-5, 5);

/// Word length of the stabilizer probe.
pub const STABILIZER_DEPTH: usize = 4;

/// Correction terms against their printed matrices, the sequential gluing of the
/// cone chain, and the orbit action on the quotient.
pub fn gluing(ds: &Dataset) -> Vec<Record> {
    let mut out = Vec::new();
    for d in ds.deltas() {
        let id = format!("delta/{}", d.id);
        let anchor = format!("{} matches the printed matrix and vanishes on W_2", d.label);
        match check_delta(ds, d) {
            Err(e) => out.push(Record::error(&id, &anchor, e)),
            Ok(chk) => {
                let nz: Vec<String> = chk.nonzero.iter().map(|(i, j, v)| format!("({i},{j})={v}")).collect();
                out.push(
                    Record::check(&id, &anchor, chk.matches_printed && chk.vanishes_on_w2 && !chk.nonzero.is_empty())
                        .with("matches_printed", chk.matches_printed)
                        .with("vanishes_on_w2", chk.vanishes_on_w2)
                        .with("nonzero", nz.join(" ")),
                );
                for f in &chk.flags {
                    let status = if f.agrees { Status::Pass } else { Status::Flagged };
                    let anchor = ds.flags().iter().find(|s| s.id == f.id).map_or(f.id.clone(), |s| s.label.clone());
                    out.push(
                        Record::new(format!("flag/{}", f.id), anchor, status)
                            .with("printed", &f.printed)
                            .with("computed", &f.computed)
                            .with("position", format!("({}, {})", f.row, f.col))
                            .with("note", &f.note),
                    );
                }
            }
        }
    }
    let (lo, hi) = CHAIN_RANGE;
    match cone_chain(ds, lo, hi) {
        Err(e) => out.push(Record::error("chain", "the cone chain glues sequentially", e)),
        Ok(chain) => out.extend(chain_records(ds, &chain)),
    }
    if ds.b_side().involutions.len() == 2 {
        let id = "stabilizer";
        let anchor = "words in the exceptional involutions act trivially on the quotient exactly on the squares subgroup";
        out.push(guarded(id, anchor, || {
            let rep = stabilizer_probe(ds, STABILIZER_DEPTH)?;
            Ok(Record::check(id, anchor, rep.matches_dihedral_kernel && rep.subgroup_acts_trivially && rep.orbit_powers_ok)
                .with("max_len", rep.max_len)
                .with("words", rep.words_checked)
                .with("trivial", rep.trivial_action))
        }));
    }
    out
}

fn chain_records(ds: &Dataset, chain: &ConeChain) -> Vec<Record> {
    let span = format!("n in [{}, {}]", chain.n_min, chain.n_max);
    let transversal = chain.adjacency.iter().all(|a| a.transversal);
    let bad: Vec<String> = chain.identities.iter().filter(|c| !c.holds).map(|c| format!("{}={}", c.lhs, c.rhs)).collect();
    let mut out = vec![
        Record::check("chain/adjacency", "consecutive cones share exactly one generator", chain.glued())
            .with("pairs", chain.adjacency.len())
            .with("transversal", transversal)
            .with("range", &span),
        Record::check("chain/identities", "shared generators of adjacent cones coincide", bad.is_empty())
            .with("checked", chain.identities.len())
            .with("failing", bad.join(" "))
            .with("range", &span),
        Record::check("chain/corrections", "every correction term vanishes on W_2", chain.corrections_ok())
            .with("images", chain.images.len()),
    ];
    for inv in &ds.b_side().invariances {
        let checks: Vec<_> =
            chain.invariances.iter().filter(|c| c.conjugator == inv.conjugator && c.nilpotent == inv.nilpotent).collect();
        let bad: Vec<String> = checks.iter().filter(|c| !c.holds).map(|c| c.n.to_string()).collect();
        out.push(
            Record::check(
                format!("chain/invariance/{}/{}", inv.conjugator, inv.nilpotent),
                format!("{} powers fix {}", inv.conjugator, inv.nilpotent),
                bad.is_empty() && !checks.is_empty(),
            )
            .with("checked", checks.len())
            .with("range", &span)
            .with("failing_n", bad.join(",")),
        );
    }
    for inv in &chain.involutions {
        out.push(
            Record::check(
                format!("chain/involution/{}", inv.name),
                format!("{} acts on the quotient as a nontrivial involution", inv.name),
                inv.square_is_trivial && !inv.is_trivial,
            )
            .with("quotient", entries_text(&inv.quotient)),
        );
    }
    out.push(
        Record::check("chain/orbit", format!("the orbit word {} acts on the quotient as expected", ds.b_side().orbit_word), chain.orbit_ok())
            .with("computed", matrix_text(&chain.orbit_quotient))
            .with("expected", matrix_text(&chain.orbit_quotient_expected)),
    );
    out
}

/// Depth of the fans compared by the rays and mirror suites.
pub const FAN_DEPTH: usize = 3;

/// Closure rays of the quotient fan as exact eigen-lines of the orbit action, the
/// movable-cone walls, and the A-side orbit generator.
pub fn rays(ds: &Dataset) -> Vec<Record> {
    let mut out = Vec::new();
    let d = FAN_DEPTH as i64;
    let anchor = "the quotient fan is monotone and accumulates to the eigen-lines of the orbit action";
    out.push(guarded("rays/quotient", anchor, || {
        let chain = cone_chain(ds, -d, d)?;
        let fan = quotient_fan(&chain)?;
        let eig = eigenrays_2x2(&chain.orbit_quotient)?;
        let eigen_ok = fan.closure.iter().all(|c| eig.iter().any(|e| e.ray.cross(c).is_ok_and(|x| x.is_zero())));
        let unimodular = fan.chamber_dets.iter().all(|x| x == "1");
        Ok(Record::check("rays/quotient", anchor, fan.monotone && fan.inside_closure && eigen_ok && unimodular)
            .with("closure", format!("{} {}", fan.closure[0], fan.closure[1]))
            .with("eigen", eigen_ok)
            .with("rays", fan.rays.len())
            .with("unimodular", unimodular)
            .with("depth", FAN_DEPTH))
    }));
    let anchor = "walls of the movable cone from the Kähler cones of the birational models";
    out.push(guarded("rays/movable", anchor, || {
        let walls = movable_chambers(ds, 0)?;
        let fan = movable_chambers(ds, FAN_DEPTH)?;
        let shown: Vec<String> = walls.rays.iter().map(ToString::to_string).collect();
        Ok(Record::check("rays/movable", anchor, fan.monotone && fan.inside_closure && fan.orbit_consistent)
            .with("walls", shown.join(" "))
            .with("closure", format!("{} {}", fan.closure[0], fan.closure[1]))
            .with("depth", FAN_DEPTH))
    }));
    let anchor = format!("the pullback {} has infinite order with irrational fixed rays", ds.a_side().orbit_word);
    out.push(guarded("rays/orbit-generator", &anchor, || {
        let (_, rep) = rho_star(ds)?;
        Ok(Record::check("rays/orbit-generator", &anchor, rep.matches && rep.infinite_order && rep.irrational_fixed_rays)
            .with("matrix", entries_text(&rep.matrix))
            .with("trace", &rep.trace)
            .with("discriminant", &rep.discriminant))
    }));
    match replay_identities(ds) {
        Err(e) => out.push(Record::error("rays/identities", "wall identities among the pullbacks", e)),
        Ok(reps) => {
            for (k, rep) in reps.iter().enumerate() {
                out.push(Record::check(format!("rays/identity/{k}"), &rep.statement, rep.holds));
            }
        }
    }
    out
}

/// A-side walls under the dictionary against the B-side quotient fan.
pub fn mirror(ds: &Dataset) -> Vec<Record> {
    let anchor = "the movable-cone fan maps onto the glued nilpotent-cone fan";
    let d = FAN_DEPTH as i64;
    vec![guarded("mirror", anchor, || {
        let a = movable_chambers(ds, FAN_DEPTH)?;
        let b = quotient_fan(&cone_chain(ds, -d, d)?)?;
        let cmp = mirror_compare(&a, &b, &dictionary(ds)?)?;
        Ok(Record::check("mirror", anchor, cmp.agrees())
            .with("rays_match", cmp.rays_match)
            .with("closure_match", cmp.closure_match)
            .with("depth", cmp.depth))
    })]
}

/// Series data of a threefold family that the dataset does not carry.
struct FlopData {
    /// `dt'/dt` of the flop frame.
    transform: [[i64; 2]; 2],
    /// Genus-zero invariants of the flopping curves, by degree.
    n0: &'static [(u32, i64)],
    /// Point of the discriminant's tangency with `y = 0`, and its multiplicity.
    tangency: (Rat, usize),
    discriminant: fn() -> nilcone_core::poly::Poly2,
    has_operators: bool,
}

fn flop_data(name: &str) -> Option<FlopData> {
    match name {
        "p4p4" => Some(FlopData {
            transform: [[-1, 0], [4, 1]],
            n0: &[(1, 50)],
            tangency: (int(1), 5),
            discriminant: discriminant_p4p4,
            has_operators: false,
        }),
        "p3p3" => Some(FlopData {
            transform: [[-1, 0], [6, 1]],
            n0: &[(1, 80), (2, 4)],
            tangency: (rat(1, 4), 4),
            discriminant: discriminant_p3p3,
            has_operators: true,
        }),
        _ => None,
    }
}

/// Degree through which the series suite checks the period solutions.
pub const SERIES_DEGREE: u32 = 12;

/// Period solutions, discriminant tangency, and the flop identity of the couplings.
pub fn series(ds: &Dataset) -> Vec<Record> {
    let Some(data) = flop_data(ds.name()) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    if data.has_operators {
        for (name, w) in [
            ("w0", w0_series(SERIES_DEGREE)),
            ("w1-x", w1_series(SERIES_DEGREE, true)),
            ("w1-y", w1_series(SERIES_DEGREE, false)),
        ] {
            let id = format!("series/{name}");
            let anchor = format!("{name} is annihilated by both Picard-Fuchs operators");
            out.push(guarded(&id, &anchor, || {
                let rep = check_annihilation(name, &w)?;
                Ok(Record::check(&id, &anchor, rep.d1_zero && rep.d2_zero)
                    .with("degree", rep.degree)
                    .with("valid_through", rep.valid_through))
            }));
        }
    }
    let (root, mult) = &data.tangency;
    let anchor = format!("the discriminant meets y = 0 at x = {} with multiplicity {mult}", format_rat(root));
    out.push(guarded("series/tangency", &anchor, || {
        let got = tangency_multiplicity(&(data.discriminant)(), root)?;
        Ok(Record::check("series/tangency", &anchor, got == *mult).with("multiplicity", got))
    }));
    let find = |id: &str| ds.couplings().iter().find(|c| c.id == id);
    let (Some(home), Some(flop)) = (ds.couplings().first(), find("flop")) else {
        return out;
    };
    let anchor = "the flop-frame couplings are the pullback of the home couplings";
    out.push(guarded("series/flop-frame", anchor, || {
        let t = data.transform;
        let jac = jacobian_from_transform(&ExactMatrix::from_i64_rows(&[&t[0], &t[1]]))?;
        let c = CouplingTensor::cubic_from_canonical(2, &parse_values(&home.values)?)?;
        let got = coupling_pullback(&c, &jac)?.canonical();
        let want = parse_values(&flop.values)?;
        Ok(Record::check("series/flop-frame", anchor, got == want).with("computed", rats_text(&got)))
    }));
    let anchor = "the instanton-corrected coupling is invariant under the flop";
    out.push(guarded("series/flop-identity", anchor, || {
        let c = parse_rat(&home.values[0])?;
        let cf = parse_rat(&flop.values[0])?;
        let r = match flop_invariance_check(&c, &cf, data.n0, &int(-1)) {
            Ok(()) => Record::check("series/flop-identity", anchor, true),
            Err(Error::IdentityFails(res)) => Record::check("series/flop-identity", anchor, false).with("residual", res),
            Err(e) => return Err(e),
        };
        let n0: Vec<String> = data.n0.iter().map(|(d, n)| format!("n{d}={n}")).collect();
        Ok(r.with("c", format_rat(&c)).with("c_flop", format_rat(&cf)).with("invariants", n0.join(" ")))
    }));
    out
}

/// The LCSL records of one boundary point: unipotency of its generators, the weight
/// filtration on its cone, and the three LCSL conditions.
pub fn lcsl_point(ds: &Dataset, name: &str) -> Result<Vec<Record>> {
    let p = ds.point(name)?;
    let mut ids: Vec<String> = p.generators.iter().map(|g| format!("unipotent/{g}")).collect();
    ids.push(format!("filtration/{name}"));
    ids.push(format!("lcsl/{name}"));
    Ok(lcsl(ds).into_iter().filter(|r| ids.contains(&r.id)).collect())
}
