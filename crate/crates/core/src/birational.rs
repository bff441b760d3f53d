//! Divisor classes on the birational models, Kähler cones pulled back along flops,
//! the chamber structure of the movable cone, and its comparison with the glued
//! nilpotent cones.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cones::QuotientFan;
use crate::dataset::{entries_of, parse_entries, Dataset, Entries};
use crate::error::{Error, Result};
use crate::exact::{exact_sqrt, format_rat, int, squarefree_part, to_i64, ExactMatrix, QuadNum, QuadRay, Rat};
use crate::fan::{
    chamber_determinants, inside_closure, is_monotone, oriented_closure, ser_quad_rays, sort_counterclockwise,
    LatticeRay,
};
use crate::word::{Generator, Word};

/// A divisor class in a named basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass {
    pub basis: String,
    pub coords: [Rat; 2],
}

/// A rational cone spanned by primitive classes in one basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorCone {
    pub basis: String,
    pub rays: Vec<LatticeRay>,
}

impl DivisorCone {
    /// The cone spanned by the two basis classes.
    pub fn standard(basis: impl Into<String>) -> Result<Self> {
        Ok(Self { basis: basis.into(), rays: vec![LatticeRay::from_i64(1, 0)?, LatticeRay::from_i64(0, 1)?] })
    }

    /// Whether both cones have the same set of rays in the same basis.
    pub fn same_as(&self, other: &Self) -> bool {
        let mut a = self.rays.clone();
        let mut b = other.rays.clone();
        a.sort_by(|x, y| (&x.x, &x.y).cmp(&(&y.x, &y.y)));
        b.sort_by(|x, y| (&x.x, &x.y).cmp(&(&y.x, &y.y)));
        self.basis == other.basis && a == b
    }
}

/// Writes `a e1 + b e2` with basis class names, e.g. `4 H2 - H1`.
pub fn format_class(r: &LatticeRay, names: &[String]) -> String {
    let mut parts: Vec<(BigInt, &str)> = Vec::new();
    // list the positive term first so that `4 H2 - H1` reads naturally
    let terms = [(&r.x, names[0].as_str()), (&r.y, names[1].as_str())];
    let mut ordered: Vec<_> = terms.iter().filter(|(c, _)| !c.is_zero()).collect();
    ordered.sort_by_key(|(c, _)| c.is_negative());
    for (c, n) in ordered {
        parts.push(((*c).clone(), n));
    }
    let mut s = String::new();
    for (k, (c, n)) in parts.iter().enumerate() {
        let mag = c.abs();
        let coef = if mag == BigInt::from(1) { String::new() } else { format!("{mag} ") };
        match (k, c.is_negative()) {
            (0, false) => s.push_str(&format!("{coef}{n}")),
            (0, true) => s.push_str(&format!("-{coef}{n}")),
            (_, false) => s.push_str(&format!(" + {coef}{n}")),
            (_, true) => s.push_str(&format!(" - {coef}{n}")),
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

impl fmt::Display for DivisorCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rays: Vec<String> = self.rays.iter().map(ToString::to_string).collect();
        write!(f, "{}<{}>", self.basis, rays.join(", "))
    }
}

/// A pullback of divisor classes from `source` to `target`; column `j` is the image of
/// the `j`-th source basis class.
#[derive(Clone, Debug, PartialEq)]
pub struct PullbackMap {
    pub name: String,
    pub source: String,
    pub target: String,
    pub matrix: ExactMatrix,
}

impl PullbackMap {
    /// Checks that the map is a lattice automorphism: integer entries, determinant ±1.
    pub fn new(name: impl Into<String>, source: impl Into<String>, target: impl Into<String>, matrix: ExactMatrix) -> Result<Self> {
        let name = name.into();
        if matrix.rows() != 2 || matrix.cols() != 2 {
            return Err(Error::NotTwoByTwo(matrix.rows(), matrix.cols()));
        }
        if matrix.entries().iter().any(|v| !v.is_integer()) {
            return Err(Error::Inconsistent(format!("pullback {name} has non-integer entries")));
        }
        let det = matrix.det()?;
        if det.is_zero() {
            return Err(Error::Singular);
        }
        if det.abs() != Rat::from_integer(1.into()) {
            return Err(Error::Inconsistent(format!("pullback {name} has determinant {}", format_rat(&det))));
        }
        Ok(Self { name, source: source.into(), target: target.into(), matrix })
    }

    pub fn det(&self) -> Rat {
        self.matrix.det().expect("2x2 determinant")
    }

    pub fn apply(&self, c: &DivisorClass) -> Result<DivisorClass> {
        if c.basis != self.source {
            return Err(Error::NotComposable(format!("{} acts on {}, not {}", self.name, self.source, c.basis)));
        }
        let v = self.matrix.apply(&c.coords)?;
        Ok(DivisorClass { basis: self.target.clone(), coords: [v[0].clone(), v[1].clone()] })
    }
}

/// Image of a cone under a pullback.
pub fn pullback_cone(c: &DivisorCone, m: &PullbackMap) -> Result<DivisorCone> {
    if c.basis != m.source {
        return Err(Error::NotComposable(format!("{} acts on {}, not {}", m.name, m.source, c.basis)));
    }
    let rays = c.rays.iter().map(|r| r.transform(&m.matrix)).collect::<Result<_>>()?;
    Ok(DivisorCone { basis: m.target.clone(), rays })
}

/// The divisor-class side of a dataset: bases and registered pullbacks.
#[derive(Clone, Debug)]
pub struct BirationalModel {
    pub home: String,
    pub bases: BTreeMap<String, Vec<String>>,
    pub maps: BTreeMap<String, PullbackMap>,
    pub derived: bool,
}

impl BirationalModel {
    pub fn from_dataset(ds: &Dataset) -> Result<Self> {
        let a = ds.a_side();
        let bases = a.bases.iter().map(|b| (b.name.clone(), b.classes.clone())).collect();
        let mut maps = BTreeMap::new();
        for m in &a.maps {
            let mat = parse_entries(&m.entries, 2, 2, &m.name)?;
            maps.insert(m.name.clone(), PullbackMap::new(&m.name, &m.source, &m.target, mat)?);
        }
        Ok(Self { home: a.home.clone(), bases, maps, derived: a.derived })
    }

    /// Evaluates a word in pullbacks, e.g. `phi21* * phi32* * phi31*^-1`, as a map
    /// between bases. The empty word is the identity of the home basis.
    pub fn compose(&self, word: &str) -> Result<PullbackMap> {
        let w = Word::parse(word)?;
        let (m, span) = w.evaluate(2, |n| {
            self.maps.get(n).map(|p| Generator {
                matrix: &p.matrix,
                endpoints: Some((p.source.as_str(), p.target.as_str())),
            })
        })?;
        let (s, t) = span.unwrap_or_else(|| (self.home.clone(), self.home.clone()));
        PullbackMap::new(w.to_string(), s, t, m)
    }

    /// The Kähler cone of the model with basis `name`, spanned by its basis classes.
    pub fn kahler_cone(&self, basis: &str) -> Result<DivisorCone> {
        if !self.bases.contains_key(basis) {
            return Err(Error::Schema(format!("unknown basis {basis:?}")));
        }
        DivisorCone::standard(basis)
    }

    pub fn class_names(&self, basis: &str) -> &[String] {
        self.bases.get(basis).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The chamber `w(K)` of the fundamental domain for a word `w` in pullbacks.
    pub fn chamber(&self, word: &str) -> Result<DivisorCone> {
        let m = self.compose(word)?;
        if m.target != self.home {
            return Err(Error::NotComposable(format!("{word} does not end in {}", self.home)));
        }
        pullback_cone(&self.kahler_cone(&m.source)?, &m)
    }
}

/// The orbit generator acting on classes of the home model.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitMap {
    pub word: String,
    pub matrix: Entries,
    pub expected: Entries,
    pub matches: bool,
    pub det: String,
    pub trace: String,
    pub discriminant: String,
    /// `|trace| > 2` with determinant 1: hyperbolic, hence of infinite order.
    pub infinite_order: bool,
    /// The discriminant is not a square, so no rational ray is fixed.
    pub irrational_fixed_rays: bool,
}

/// Composes the orbit generator from the registered pullbacks and checks it.
pub fn rho_star(ds: &Dataset) -> Result<(PullbackMap, OrbitMap)> {
    let model = BirationalModel::from_dataset(ds)?;
    let a = ds.a_side();
    let m = model.compose(&a.orbit_word)?;
    if m.source != model.home || m.target != model.home {
        return Err(Error::Inconsistent(format!("orbit word {} is not a loop at {}", a.orbit_word, model.home)));
    }
    let expected = parse_entries(&a.orbit_expected, 2, 2, "a_side.orbit_expected")?;
    let tr = m.matrix.trace();
    let det = m.det();
    let disc = &tr * &tr - int(4) * &det;
    let square = to_i64(&disc).is_some_and(|d| d >= 0 && exact_sqrt(d as u64).is_some());
    let report = OrbitMap {
        word: a.orbit_word.clone(),
        matrix: entries_of(&m.matrix),
        expected: entries_of(&expected),
        matches: m.matrix == expected,
        det: format_rat(&det),
        trace: format_rat(&tr),
        discriminant: format_rat(&disc),
        infinite_order: det == int(1) && tr.abs() > int(2),
        irrational_fixed_rays: !square,
    };
    Ok((m, report))
}

/// An exact identity among the registered pullbacks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Replay {
    pub statement: String,
    pub holds: bool,
}

/// Replays the consistency chain behind the infinite-order argument: neighboring
/// Kähler cones share one wall, and for a three-model cycle the class identity
/// `M3 = k M1 - phi13*(H2)` holds with `k` the trace of `phi21*`.
pub fn replay_identities(ds: &Dataset) -> Result<Vec<Replay>> {
    let model = BirationalModel::from_dataset(ds)?;
    let home_cone = model.kahler_cone(&model.home)?;
    let mut out = Vec::new();
    for word in &ds.a_side().chambers {
        if word.is_empty() {
            continue;
        }
        let c = model.chamber(word)?;
        let shared = c.rays.iter().filter(|r| home_cone.rays.contains(r)).count();
        out.push(Replay { statement: format!("{word}(K) shares one wall with K"), holds: shared == 1 });
    }
    if let (Some(p21), Some(p31)) = (model.maps.get("phi21*"), model.maps.get("phi31*")) {
        let k = p21.matrix.trace();
        let p13 = model.compose("phi31*^-1")?;
        let h2 = DivisorClass { basis: model.home.clone(), coords: [Rat::zero(), int(1)] };
        let img = p13.apply(&h2)?;
        // basis of the third model is (M3, M1)
        let rhs = [-img.coords[0].clone(), &k - &img.coords[1]];
        let holds = rhs == [int(1), Rat::zero()];
        let names = model.class_names(&p31.source).to_vec();
        out.push(Replay {
            statement: format!(
                "{} = {} {} - phi13*({})",
                names.first().cloned().unwrap_or_default(),
                format_rat(&k),
                names.get(1).cloned().unwrap_or_default(),
                model.class_names(&model.home).get(1).cloned().unwrap_or_default()
            ),
            holds,
        });
        let rho = model.compose(&ds.a_side().orbit_word)?;
        let lhs = model.compose("phi21* * phi32*")?;
        let rhs = rho.matrix.checked_mul(&p31.matrix)?;
        out.push(Replay { statement: "phi21* phi32* = rho* phi31*".into(), holds: lhs.matrix == rhs });
    }
    Ok(out)
}

/// Walls of the movable cone up to a depth, with exact closure rays.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChamberFan {
    pub depth: usize,
    /// Primitive walls sorted counterclockwise.
    pub rays: Vec<LatticeRay>,
    #[serde(serialize_with = "ser_quad_rays")]
    pub closure: [QuadRay; 2],
    pub chamber_dets: Vec<String>,
    pub monotone: bool,
    pub inside_closure: bool,
    /// Whether the walls are the orbit images of the depth-0 walls.
    pub orbit_consistent: bool,
}

/// The walls of `G^n D` for `|n| <= depth`, where `D` is the union of the dataset's
/// fundamental chambers and `G` the orbit generator.
pub fn movable_chambers(ds: &Dataset, depth: usize) -> Result<ChamberFan> {
    let model = BirationalModel::from_dataset(ds)?;
    let (g, _) = rho_star(ds)?;
    let mut base: Vec<LatticeRay> = Vec::new();
    for word in &ds.a_side().chambers {
        base.extend(model.chamber(word)?.rays);
    }
    sort_counterclockwise(&mut base)?;
    let gi = g.matrix.inverse()?;
    let d = depth as i64;
    let mut rays = Vec::new();
    let mut fwd = ExactMatrix::identity(2);
    let mut back = ExactMatrix::identity(2);
    for n in 0..=d {
        for r in &base {
            rays.push(r.transform(&fwd)?);
            if n > 0 {
                rays.push(r.transform(&back)?);
            }
        }
        fwd = g.matrix.checked_mul(&fwd)?;
        back = gi.checked_mul(&back)?;
    }
    sort_counterclockwise(&mut rays)?;
    let closure = oriented_closure(&g.matrix, &base)?;
    // consecutive depths nest: G maps the depth-(d-1) walls into the depth-d walls
    let orbit_consistent = if depth == 0 {
        true
    } else {
        let inner = movable_chambers(ds, depth - 1)?;
        inner.rays.iter().map(|r| r.transform(&g.matrix)).collect::<Result<Vec<_>>>()?.iter().all(|r| rays.contains(r))
    };
    Ok(ChamberFan {
        depth,
        chamber_dets: chamber_determinants(&rays).iter().map(BigInt::to_string).collect(),
        monotone: is_monotone(&rays),
        inside_closure: inside_closure(&rays, &closure)?,
        rays,
        closure,
        orbit_consistent,
    })
}

/// Boundary rays of the positive cone `{D : D.D > 0}` of a hyperbolic rank-2 Gram
/// matrix, on the side of `reference`, as `[start, end]` counterclockwise.
pub fn positive_cone_boundary(gram: &ExactMatrix, reference: &LatticeRay) -> Result<[QuadRay; 2]> {
    if gram.rows() != 2 || gram.cols() != 2 || gram.get(0, 1) != gram.get(1, 0) {
        return Err(Error::Inconsistent("Gram matrix must be symmetric 2x2".into()));
    }
    let (a, b, c) = (gram.get(0, 0), gram.get(0, 1), gram.get(1, 1));
    let disc = b * b - a * c;
    let di = to_i64(&disc).filter(|d| *d > 0).ok_or_else(|| Error::Inconsistent("form is not hyperbolic".into()))?;
    if exact_sqrt(di as u64).is_some() {
        return Err(Error::RationalSpectrum(format_rat(&disc)));
    }
    if c.is_zero() {
        return Err(Error::Inconsistent("second basis class is isotropic".into()));
    }
    let rad = squarefree_part(di as u64);
    let s = exact_sqrt(di as u64 / rad).expect("square cofactor") as i64;
    let q = |r: Rat| QuadNum::rational(r, rad);
    let refq = reference.to_quad(rad)?;
    let ref_norm = {
        let (x, y) = (Rat::from_integer(reference.x.clone()), Rat::from_integer(reference.y.clone()));
        a * &x * &x + int(2) * b * &x * &y + c * &y * &y
    };
    if ref_norm <= Rat::zero() {
        return Err(Error::Inconsistent("reference class is not in the positive cone".into()));
    }
    let mut rays = Vec::new();
    for sgn in [1i64, -1] {
        // a + 2 b t + c t^2 = 0 for the ray (1, t)
        let t = QuadNum::new(-b / c, int(sgn * s) / c, rad)?;
        let mut r = QuadRay::new(q(int(1))?, t)?;
        let dot = r.x().checked_mul(refq.x())?.checked_add(&r.y().checked_mul(refq.y())?)?;
        if dot.signum() < 0 {
            r = r.neg();
        }
        rays.push(r);
    }
    let (r0, r1) = (rays[0].clone(), rays[1].clone());
    if r0.cross(&r1)?.signum() > 0 {
        Ok([r0, r1])
    } else {
        Ok([r1, r0])
    }
}

/// Outcome of comparing the two fans through the dictionary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MirrorComparison {
    pub depth: usize,
    pub rays_match: bool,
    pub closure_match: bool,
    pub a_rays_mapped: Vec<LatticeRay>,
    pub b_rays: Vec<LatticeRay>,
}

impl MirrorComparison {
    pub fn agrees(&self) -> bool {
        self.rays_match && self.closure_match
    }
}

/// Maps the ordered A-side walls by `dict` (coordinates in `(H1, H2)` to coordinates
/// in `(N1, N2)` mod `I_2`) and compares with the ordered B-side rays and closures.
pub fn mirror_compare(a: &ChamberFan, b: &QuotientFan, dict: &ExactMatrix) -> Result<MirrorComparison> {
    let bd = b.depth().ok_or_else(|| Error::Inconsistent("B-side chain is not symmetric about 0".into()))?;
    if bd != a.depth {
        return Err(Error::DepthMismatch(a.depth, bd));
    }
    let mapped = a.rays.iter().map(|r| r.transform(dict)).collect::<Result<Vec<_>>>()?;
    let m = [[dict.get(0, 0), dict.get(0, 1)], [dict.get(1, 0), dict.get(1, 1)]];
    let mut closure_match = true;
    for (ra, rb) in a.closure.iter().zip(&b.closure) {
        if ra.radicand() != rb.radicand() || !ra.transform(m)?.same_direction(rb)? {
            closure_match = false;
        }
    }
    Ok(MirrorComparison {
        depth: a.depth,
        rays_match: mapped == b.rays,
        closure_match,
        a_rays_mapped: mapped,
        b_rays: b.rays.clone(),
    })
}

/// The dataset's dictionary matrix.
pub fn dictionary(ds: &Dataset) -> Result<ExactMatrix> {
    parse_entries(&ds.a_side().dictionary, 2, 2, "a_side.dictionary")
}
