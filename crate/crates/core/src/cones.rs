//! Nilpotent cones, their conjugates under connection and exceptional-divisor
//! matrices, the glued chain of cones, and its image fan in `End(H)/I_2`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::dataset::{entries_of, parse_entries, Dataset, DeltaSpec, Entries, RelationSpec};
use crate::error::{Error, Result};
use crate::exact::{format_rat, is_nilpotent, parse_rat, ExactMatrix, QuadRay, Rat};
use crate::fan::{
    chamber_determinants, inside_closure, is_monotone, oriented_closure, ser_quad_rays,
    sort_counterclockwise, LatticeRay,
};
use crate::hodge::{quotient_coordinates, weight_filtration, Filtration};
use crate::word::Word;

/// Positive combinations of commuting nilpotent generators.
#[derive(Clone, Debug, PartialEq)]
pub struct NilpotentCone {
    pub label: String,
    pub generators: Vec<ExactMatrix>,
}

impl NilpotentCone {
    pub fn new(label: impl Into<String>, generators: Vec<ExactMatrix>) -> Result<Self> {
        for g in &generators {
            if !is_nilpotent(g)? {
                return Err(Error::NotNilpotent { dim: g.rows() });
            }
        }
        Ok(Self { label: label.into(), generators })
    }

    /// Weight filtration of the interior point `sum N_i`.
    pub fn filtration(&self, center: usize) -> Result<Filtration> {
        let dim = self.generators[0].rows();
        let mut s = ExactMatrix::zeros(dim, dim);
        for n in &self.generators {
            s = s.checked_add(n)?;
        }
        weight_filtration(&s, center)
    }

    /// The cone `g^-1 Σ g`.
    pub fn conjugate(&self, g: &ExactMatrix, label: impl Into<String>) -> Result<Self> {
        Ok(Self { label: label.into(), generators: conjugate_generators(&self.generators, g)? })
    }
}

/// Evaluates a word over the dataset's named matrices, with composability checks.
pub fn compose_word(word: &Word, ds: &Dataset) -> Result<ExactMatrix> {
    Ok(ds.evaluate_word(word)?.0)
}

/// `g^-1 N g` for each generator.
pub fn conjugate_generators(gens: &[ExactMatrix], g: &ExactMatrix) -> Result<Vec<ExactMatrix>> {
    let gi = g.inverse()?;
    gens.iter().map(|n| gi.checked_mul(n)?.checked_mul(g)).collect()
}

/// `Δ = target - (c_1 base_1 + c_2 base_2)` and whether it vanishes on `W_2`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaCorrection {
    pub delta: ExactMatrix,
    pub vanishes_on_w2: bool,
}

pub fn delta_correction(
    target: &ExactMatrix,
    coeffs: [&Rat; 2],
    base: [&ExactMatrix; 2],
    w2: &ExactMatrix,
) -> Result<DeltaCorrection> {
    let lin = base[0].scale(coeffs[0]).checked_add(&base[1].scale(coeffs[1]))?;
    let delta = target.checked_sub(&lin)?;
    let vanishes_on_w2 = delta.checked_mul(w2)?.is_zero();
    Ok(DeltaCorrection { delta, vanishes_on_w2 })
}

/// A printed entry compared with the computed correction term.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlagOutcome {
    pub id: String,
    pub row: usize,
    pub col: usize,
    pub printed: String,
    pub computed: String,
    pub agrees: bool,
    pub note: String,
}

/// A dataset correction term checked against its printed matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaCheck {
    pub id: String,
    pub delta: Entries,
    pub nonzero: Vec<(usize, usize, String)>,
    pub vanishes_on_w2: bool,
    pub matches_printed: bool,
    pub flags: Vec<FlagOutcome>,
}

/// Computes a dataset correction term and compares it with the printed matrix and
/// with any flagged printed entries.
pub fn check_delta(ds: &Dataset, spec: &DeltaSpec) -> Result<DeltaCheck> {
    let dim = ds.dimension();
    let w2 = w2_basis(ds)?;
    let c0 = parse_rat(&spec.coeffs[0])?;
    let c1 = parse_rat(&spec.coeffs[1])?;
    let d = delta_correction(
        ds.nilpotent(&spec.target)?,
        [&c0, &c1],
        [ds.nilpotent(&spec.base[0])?, ds.nilpotent(&spec.base[1])?],
        &w2,
    )?;
    let printed = parse_entries(&spec.printed, dim, dim, &spec.id)?;
    let mut nonzero = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            if !d.delta.get(i, j).is_zero() {
                nonzero.push((i, j, format_rat(d.delta.get(i, j))));
            }
        }
    }
    let flags = ds
        .flags()
        .iter()
        .filter(|f| f.delta == spec.id)
        .map(|f| {
            let computed = d.delta.get(f.row, f.col);
            Ok(FlagOutcome {
                id: f.id.clone(),
                row: f.row,
                col: f.col,
                printed: f.printed.clone(),
                computed: format_rat(computed),
                agrees: &parse_rat(&f.printed)? == computed,
                note: f.note.clone(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(DeltaCheck {
        id: spec.id.clone(),
        delta: entries_of(&d.delta),
        nonzero,
        vanishes_on_w2: d.vanishes_on_w2,
        matches_printed: d.delta == printed,
        flags,
    })
}

/// Exact equality of both sides of a relation.
pub fn verify_relation(rel: &RelationSpec, ds: &Dataset) -> Result<bool> {
    let lhs = compose_word(&Word::parse(&rel.lhs)?, ds)?;
    let rhs = compose_word(&Word::parse(&rel.rhs)?, ds)?;
    Ok(lhs == rhs)
}

/// `W_2` of the reference cone `(N1, N2)` at the dataset's weight.
pub fn w2_basis(ds: &Dataset) -> Result<ExactMatrix> {
    let cone = NilpotentCone::new("reference", vec![ds.nilpotent("N1")?.clone(), ds.nilpotent("N2")?.clone()])?;
    Ok(cone.filtration(ds.weight())?.step(2))
}

/// Powers `g^k` for `k` in a range, computed once.
struct Powers {
    lo: i64,
    mats: Vec<ExactMatrix>,
    invs: Vec<ExactMatrix>,
}

impl Powers {
    fn new(g: &ExactMatrix, lo: i64, hi: i64) -> Result<Self> {
        let mut mats = Vec::new();
        let mut invs = Vec::new();
        let mut m = g.powi(lo)?;
        let mut mi = g.powi(-lo)?;
        let gi = g.inverse()?;
        for _ in lo..=hi {
            mats.push(m.clone());
            invs.push(mi.clone());
            m = m.checked_mul(g)?;
            mi = gi.checked_mul(&mi)?;
        }
        Ok(Self { lo, mats, invs })
    }

    /// `g^-k X g^k`.
    fn conj(&self, x: &ExactMatrix, k: i64) -> Result<ExactMatrix> {
        let i = (k - self.lo) as usize;
        self.invs[i].checked_mul(x)?.checked_mul(&self.mats[i])
    }
}

/// One cone of a chain: the dataset cone `label` conjugated by the `n`-th orbit power.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainCone {
    pub label: String,
    pub n: i64,
    pub names: Vec<String>,
    pub cone: NilpotentCone,
}

/// Gluing check between consecutive cones.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Adjacency {
    pub left: String,
    pub right: String,
    pub shared: usize,
    pub span_rank: usize,
    /// Exactly one generator coincides.
    pub glued: bool,
    /// The union of generators is linearly independent in `End(H)`.
    pub transversal: bool,
}

/// `lhs(n + a) = rhs(n + b)` at one `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub n: i64,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

/// `g^-n N g^n = N` at one `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvarianceCheck {
    pub n: i64,
    pub conjugator: String,
    pub nilpotent: String,
    pub holds: bool,
}

/// Quotient action of an involution-like generator and of its square.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvolutionCheck {
    pub name: String,
    pub quotient: Entries,
    pub square_is_trivial: bool,
    pub is_trivial: bool,
}

/// Every generator `X(n)` differs from an integral combination of `N1, N2` by a
/// term vanishing on `W_2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuotientImage {
    pub label: String,
    pub n: i64,
    pub generator: String,
    pub coords: Option<(String, String)>,
}

/// A chain of glued cones with the exact checks performed while building it.
#[derive(Clone, Debug)]
pub struct ConeChain {
    pub n_min: i64,
    pub n_max: i64,
    pub cones: Vec<ChainCone>,
    pub adjacency: Vec<Adjacency>,
    pub identities: Vec<IdentityCheck>,
    pub invariances: Vec<InvarianceCheck>,
    pub involutions: Vec<InvolutionCheck>,
    pub images: Vec<QuotientImage>,
    pub orbit_quotient: ExactMatrix,
    pub orbit_quotient_expected: ExactMatrix,
    pub w2: ExactMatrix,
}

impl ConeChain {
    pub fn adjacency_ok(&self) -> bool {
        self.glued() && self.adjacency.iter().all(|a| a.transversal)
    }

    /// Consecutive cones share exactly one generator.
    pub fn glued(&self) -> bool {
        self.adjacency.iter().all(|a| a.glued)
    }

    pub fn identities_ok(&self) -> bool {
        self.identities.iter().all(|c| c.holds) && self.invariances.iter().all(|c| c.holds)
    }

    pub fn involutions_ok(&self) -> bool {
        self.involutions.iter().all(|c| c.square_is_trivial && !c.is_trivial)
    }

    pub fn orbit_ok(&self) -> bool {
        self.orbit_quotient == self.orbit_quotient_expected
    }

    /// Whether every `Δ_n` vanishes on `W_2`, i.e. every image has coordinates.
    pub fn corrections_ok(&self) -> bool {
        self.images.iter().all(|i| i.coords.is_some())
    }

    pub fn all_ok(&self) -> bool {
        self.adjacency_ok() && self.identities_ok() && self.involutions_ok() && self.orbit_ok() && self.corrections_ok()
    }
}

/// Matrix of `X -> g^-1 X g` on `span(π N1, π N2)`; columns are the coordinates of
/// the images of `N1`, `N2`.
pub fn quotient_action(ds: &Dataset, g: &ExactMatrix, w2: &ExactMatrix) -> Result<ExactMatrix> {
    let base = [ds.nilpotent("N1")?.clone(), ds.nilpotent("N2")?.clone()];
    let imgs = conjugate_generators(&base, g)?;
    let mut cols = Vec::new();
    for (k, x) in imgs.iter().enumerate() {
        let c = quotient_coordinates(x, &base, w2)?
            .ok_or_else(|| Error::NotInQuotientLattice(format!("conjugate of N{}", k + 1)))?;
        cols.push(c);
    }
    ExactMatrix::from_columns(2, &cols)
}

fn flat(m: &ExactMatrix) -> Vec<Rat> {
    m.entries().to_vec()
}

fn adjacency(a: &ChainCone, b: &ChainCone) -> Result<Adjacency> {
    let shared = a.cone.generators.iter().filter(|x| b.cone.generators.contains(x)).count();
    let mut cols: Vec<Vec<Rat>> = a.cone.generators.iter().map(flat).collect();
    cols.extend(b.cone.generators.iter().map(flat));
    let len = cols[0].len();
    let span_rank = ExactMatrix::from_columns(len, &cols)?.rank();
    let gens = a.cone.generators.len() + b.cone.generators.len() - shared;
    Ok(Adjacency {
        left: format!("{}({})", a.label, a.n),
        right: format!("{}({})", b.label, b.n),
        shared,
        span_rank,
        glued: shared == 1,
        transversal: span_rank == gens,
    })
}

/// Builds the cones `g^-n Σ g^n` for `n` from `n_max` down to `n_min` in the dataset's
/// cone order, appends the closing cone at `n_min - 1` when the dataset has one, and
/// checks gluing, identities, invariances and the quotient action exactly.
pub fn cone_chain(ds: &Dataset, n_min: i64, n_max: i64) -> Result<ConeChain> {
    if n_min > n_max {
        return Err(Error::Inconsistent(format!("empty range [{n_min}, {n_max}]")));
    }
    let b = ds.b_side();
    let g = compose_word(&Word::parse(&b.orbit_word)?, ds)?;
    let w2 = w2_basis(ds)?;
    let shifts = b.identities.iter().flat_map(|i| [i.lhs_shift, i.rhs_shift]);
    let (smin, smax) = shifts.fold((0i64, 0i64), |(a, c), s| (a.min(s), c.max(s)));
    let lo = n_min - 1 + smin.min(0);
    let hi = n_max + smax.max(0);
    let powers = Powers::new(&g, lo, hi)?;
    let mut memo: BTreeMap<(String, i64), ExactMatrix> = BTreeMap::new();
    let mut at = |name: &str, k: i64| -> Result<ExactMatrix> {
        if let Some(m) = memo.get(&(name.to_string(), k)) {
            return Ok(m.clone());
        }
        let m = powers.conj(ds.nilpotent(name)?, k)?;
        memo.insert((name.to_string(), k), m.clone());
        Ok(m)
    };

    let mut slots: Vec<(usize, i64)> = Vec::new();
    for n in (n_min..=n_max).rev() {
        slots.extend((0..b.cones.len()).map(|c| (c, n)));
    }
    if let Some(c) = b.closing_cone {
        slots.push((c, n_min - 1));
    }
    let base = [ds.nilpotent("N1")?.clone(), ds.nilpotent("N2")?.clone()];
    let mut cones = Vec::new();
    let mut images = Vec::new();
    for (c, n) in slots {
        let spec = &b.cones[c];
        let gens = spec.generators.iter().map(|name| at(name, n)).collect::<Result<Vec<_>>>()?;
        for (name, x) in spec.generators.iter().zip(&gens) {
            let coords = quotient_coordinates(x, &base, &w2)?.map(|v| (format_rat(&v[0]), format_rat(&v[1])));
            images.push(QuotientImage { label: spec.label.clone(), n, generator: name.clone(), coords });
        }
        cones.push(ChainCone {
            label: spec.label.clone(),
            n,
            names: spec.generators.clone(),
            cone: NilpotentCone::new(format!("{}({n})", spec.label), gens)?,
        });
    }
    let adjacency = cones.windows(2).map(|w| adjacency(&w[0], &w[1])).collect::<Result<_>>()?;

    let mut identities = Vec::new();
    for n in n_min..=n_max {
        for id in &b.identities {
            let l = at(&id.lhs, n + id.lhs_shift)?;
            let r = at(&id.rhs, n + id.rhs_shift)?;
            identities.push(IdentityCheck {
                n,
                lhs: format!("{}({})", id.lhs, n + id.lhs_shift),
                rhs: format!("{}({})", id.rhs, n + id.rhs_shift),
                holds: l == r,
            });
        }
    }
    let mut invariances = Vec::new();
    for inv in &b.invariances {
        let h = ds.matrix(&inv.conjugator)?;
        let n0 = ds.nilpotent(&inv.nilpotent)?;
        let p = Powers::new(h, n_min, n_max)?;
        for n in n_min..=n_max {
            invariances.push(InvarianceCheck {
                n,
                conjugator: inv.conjugator.clone(),
                nilpotent: inv.nilpotent.clone(),
                holds: &p.conj(n0, n)? == n0,
            });
        }
    }
    let mut involutions = Vec::new();
    for name in &b.involutions {
        let h = ds.matrix(name)?;
        let q = quotient_action(ds, h, &w2)?;
        let q2 = quotient_action(ds, &h.checked_mul(h)?, &w2)?;
        involutions.push(InvolutionCheck {
            name: name.clone(),
            quotient: entries_of(&q),
            square_is_trivial: q2.is_identity(),
            is_trivial: q.is_identity(),
        });
    }
    let orbit_quotient = quotient_action(ds, &g, &w2)?;
    let orbit_quotient_expected = parse_entries(&b.orbit_quotient, 2, 2, "b_side.orbit_quotient")?;
    Ok(ConeChain {
        n_min,
        n_max,
        cones,
        adjacency,
        identities,
        invariances,
        involutions,
        images,
        orbit_quotient,
        orbit_quotient_expected,
        w2,
    })
}

/// The image of a chain in `End(H)/I_2`, in coordinates of `π N1, π N2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuotientFan {
    pub n_min: i64,
    pub n_max: i64,
    /// Rays in the order they appear along the chain.
    pub chain_rays: Vec<LatticeRay>,
    /// The same rays, deduplicated and sorted counterclockwise.
    pub rays: Vec<LatticeRay>,
    /// Eigen-rays of the orbit action, `[start, end]` counterclockwise.
    #[serde(serialize_with = "ser_quad_rays")]
    pub closure: [QuadRay; 2],
    pub monotone: bool,
    pub chamber_dets: Vec<String>,
    pub inside_closure: bool,
}

impl QuotientFan {
    /// `Some(d)` for a chain over `[-d, d]`.
    pub fn depth(&self) -> Option<usize> {
        (self.n_min == -self.n_max && self.n_max >= 0).then_some(self.n_max as usize)
    }
}

/// Integer ray of each chain generator and exact closure rays.
pub fn quotient_fan(chain: &ConeChain) -> Result<QuotientFan> {
    let mut per_cone: Vec<Vec<LatticeRay>> = Vec::new();
    let mut images = chain.images.iter();
    for cone in &chain.cones {
        let mut rays = Vec::new();
        for img in images.by_ref().take(cone.names.len()) {
            let (x, y) = img.coords.as_ref().ok_or_else(|| {
                Error::NotInQuotientLattice(format!("{}({}) in cone {}", img.generator, img.n, img.label))
            })?;
            let (x, y) = (parse_rat(x)?, parse_rat(y)?);
            if !x.is_integer() || !y.is_integer() {
                return Err(Error::NotInQuotientLattice(format!(
                    "{}({}) has coordinates ({}, {})",
                    img.generator,
                    img.n,
                    format_rat(&x),
                    format_rat(&y)
                )));
            }
            rays.push(LatticeRay::from_rats(&x, &y)?);
        }
        per_cone.push(rays);
    }
    // walk the chain through the shared rays
    let mut chain_rays: Vec<LatticeRay> = Vec::new();
    for (k, rays) in per_cone.iter().enumerate() {
        let mut rays = rays.clone();
        if k == 0 {
            if let Some(next) = per_cone.get(1) {
                rays.sort_by_key(|r| next.contains(r));
            }
        } else {
            let prev = chain_rays.last().cloned();
            rays.retain(|r| Some(r) != prev.as_ref());
        }
        chain_rays.extend(rays);
    }
    let monotone = is_monotone(&chain_rays);
    let mut rays = chain_rays.clone();
    sort_counterclockwise(&mut rays)?;
    let closure = oriented_closure(&chain.orbit_quotient, &rays)?;
    let inside = inside_closure(&rays, &closure)?;
    Ok(QuotientFan {
        n_min: chain.n_min,
        n_max: chain.n_max,
        chamber_dets: chamber_determinants(&rays).iter().map(BigInt::to_string).collect(),
        chain_rays,
        rays,
        closure,
        monotone,
        inside_closure: inside,
    })
}

/// Result of enumerating reduced words in the exceptional generators.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilizerReport {
    pub max_len: usize,
    pub words_checked: usize,
    /// Words whose quotient action is the identity.
    pub trivial_action: usize,
    /// Trivially acting words that lie in `<g1^2, g2^2>`.
    pub trivial_in_subgroup: usize,
    /// Whether every element of `<g1^2, g2^2>` in the ball acts trivially.
    pub subgroup_acts_trivially: bool,
    /// Whether the quotient action is trivial exactly when the word is trivial in the
    /// infinite dihedral group `<s1, s2 | s1^2 = s2^2 = 1>`.
    pub matches_dihedral_kernel: bool,
    /// Shortest trivially acting word outside `<g1^2, g2^2>`, if any.
    pub outside_subgroup: Option<String>,
    pub generator_quotients: Vec<(String, Entries)>,
    pub orbit_powers_ok: bool,
}

impl StabilizerReport {
    /// Whether the trivially acting set equals `<g1^2, g2^2>` within the ball.
    pub fn equals_subgroup(&self) -> bool {
        self.subgroup_acts_trivially && self.outside_subgroup.is_none()
    }
}

/// Reduced words in `g1^±1, g2^±1` up to `max_len`, where `g1, g2` are the dataset's
/// involutions. A word `w` acts by `X -> w^-1 X w`.
pub fn stabilizer_probe(ds: &Dataset, max_len: usize) -> Result<StabilizerReport> {
    let inv = &ds.b_side().involutions;
    if inv.len() != 2 {
        return Err(Error::Inconsistent(format!("{} needs exactly two involution generators", ds.name())));
    }
    let w2 = w2_basis(ds)?;
    let dim = ds.dimension();
    let gens = [ds.matrix(&inv[0])?.clone(), ds.matrix(&inv[1])?.clone()];
    let inverses = [gens[0].inverse()?, gens[1].inverse()?];
    let id = ExactMatrix::identity(dim);
    // <g1^2, g2^2>: the squares are I + u and I + v with u v = v u = 0 checked below
    let u = gens[0].checked_mul(&gens[0])?.checked_sub(&id)?;
    let v = gens[1].checked_mul(&gens[1])?.checked_sub(&id)?;
    let squares_abelian =
        u.checked_mul(&v)?.is_zero() && v.checked_mul(&u)?.is_zero() && u.checked_mul(&u)?.is_zero() && v.checked_mul(&v)?.is_zero();
    if !squares_abelian {
        return Err(Error::Inconsistent("squares of the generators do not span an abelian unipotent group".into()));
    }
    let uv = ExactMatrix::from_columns(dim * dim, &[flat(&u), flat(&v)])?;
    let in_subgroup = |m: &ExactMatrix| -> Result<bool> {
        let d = m.checked_sub(&id)?;
        let t = ExactMatrix::from_columns(dim * dim, &[flat(&d)])?;
        Ok(uv.coordinates(&t).is_some_and(|c| c.entries().iter().all(Rat::is_integer)))
    };

    // letters: (generator, sign); a reduced word never follows x with x^-1
    let letters = [(0usize, 1i64), (0, -1), (1, 1), (1, -1)];
    let mut frontier: Vec<(Vec<(usize, i64)>, ExactMatrix)> = vec![(Vec::new(), id.clone())];
    let mut report = StabilizerReport {
        max_len,
        words_checked: 0,
        trivial_action: 0,
        trivial_in_subgroup: 0,
        subgroup_acts_trivially: true,
        matches_dihedral_kernel: true,
        outside_subgroup: None,
        generator_quotients: Vec::new(),
        orbit_powers_ok: true,
    };
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (w, m) in &frontier {
            for &(g, s) in &letters {
                if w.last() == Some(&(g, -s)) {
                    continue;
                }
                let step = if s > 0 { &gens[g] } else { &inverses[g] };
                let mut w2w = w.clone();
                w2w.push((g, s));
                next.push((w2w, m.checked_mul(step)?));
            }
        }
        for (w, m) in &next {
            report.words_checked += 1;
            let trivial = quotient_action(ds, m, &w2)?.is_identity();
            let sub = in_subgroup(m)?;
            if trivial {
                report.trivial_action += 1;
            }
            if sub && !trivial {
                report.subgroup_acts_trivially = false;
            }
            if trivial && sub {
                report.trivial_in_subgroup += 1;
            }
            if trivial && !sub && report.outside_subgroup.is_none() {
                report.outside_subgroup = Some(word_string(w, inv));
            }
            if trivial != dihedral_identity(w) {
                report.matches_dihedral_kernel = false;
            }
        }
        frontier = next;
    }
    for (k, name) in inv.iter().enumerate() {
        report.generator_quotients.push((name.clone(), entries_of(&quotient_action(ds, &gens[k], &w2)?)));
    }
    let b = ds.b_side();
    let g = compose_word(&Word::parse(&b.orbit_word)?, ds)?;
    let expected = parse_entries(&b.orbit_quotient, 2, 2, "b_side.orbit_quotient")?;
    for n in -3i64..=3 {
        if quotient_action(ds, &g.powi(n)?, &w2)? != expected.powi(n)? {
            report.orbit_powers_ok = false;
        }
    }
    Ok(report)
}

/// Whether the word reduces to the identity once each letter is read as an involution.
fn dihedral_identity(w: &[(usize, i64)]) -> bool {
    let mut stack: Vec<usize> = Vec::new();
    for &(g, _) in w {
        if stack.last() == Some(&g) {
            stack.pop();
        } else {
            stack.push(g);
        }
    }
    stack.is_empty()
}

fn word_string(w: &[(usize, i64)], names: &[String]) -> String {
    let parts: Vec<String> = w
        .iter()
        .map(|&(g, s)| if s == 1 { names[g].clone() } else { format!("{}^-1", names[g]) })
        .collect();
    parts.join(" * ")
}

/// Quotient coordinates of a single matrix, as integers if possible.
pub fn quotient_ray(ds: &Dataset, x: &ExactMatrix) -> Result<LatticeRay> {
    let w2 = w2_basis(ds)?;
    let base = [ds.nilpotent("N1")?.clone(), ds.nilpotent("N2")?.clone()];
    let c = quotient_coordinates(x, &base, &w2)?.ok_or_else(|| Error::NotInQuotientLattice("matrix".into()))?;
    if !c.iter().all(Rat::is_integer) {
        return Err(Error::NotInQuotientLattice(format!("coordinates ({}, {})", format_rat(&c[0]), format_rat(&c[1]))));
    }
    LatticeRay::from_rats(&c[0], &c[1])
}
