//! Loops based at a common point, assembled from shared path pieces so that each piece
//! is continued only once, and numeric checks of monodromy relations.

use std::collections::BTreeMap;

use nilcone_core::dataset::RelationSpec;
use nilcone_core::error::{Error, Result};
use nilcone_core::exact::rat;
use nilcone_core::series::picard_fuchs_p3p3;
use nilcone_core::{ExactMatrix, Rat, Word};
use num_traits::Zero;

use crate::bigc::{max_coeff_diff, poly_from_roots, BigC, CMatrix};
use crate::integrate::{transport, TransportOptions, TransportStats};
use crate::path::{Arc, ExactC, ExactPoint, PathSpec, DEFAULT_CHORDS_PER_TURN};
use crate::pfaffian::{build_pfaffian, PfaffianSystem};

/// Conjugation invariants of one loop monodromy.
#[derive(Clone, Debug)]
pub struct LoopInvariants {
    /// `det(λ - M)`, constant term first.
    pub charpoly: Vec<BigC>,
    pub trace: BigC,
    pub det: BigC,
}

impl LoopInvariants {
    pub fn of(m: &CMatrix) -> Self {
        Self { charpoly: m.charpoly(), trace: m.trace(), det: m.det() }
    }

    /// Largest coefficient deviation from `prod (λ - r)^mult`.
    pub fn charpoly_deviation(&self, roots: &[(BigC, usize)]) -> f64 {
        let prec = self.trace.precision();
        max_coeff_diff(&self.charpoly, &poly_from_roots(roots, prec))
    }
}

/// Monodromy of a single closed loop together with its invariants.
pub fn loop_monodromy(
    sys: &PfaffianSystem,
    path: &PathSpec,
    opts: &TransportOptions,
) -> Result<(CMatrix, LoopInvariants, TransportStats)> {
    if !path.is_closed() {
        return Err(Error::Inconsistent(format!("path {:?} is not a closed loop", path.name)));
    }
    let (m, stats) = transport(sys, path, opts)?;
    let inv = LoopInvariants::of(&m);
    Ok((m, inv, stats))
}

/// Named open pieces and loops written as words in them, in path order.
#[derive(Clone, Debug)]
pub struct LoopSet {
    base: ExactPoint,
    pieces: BTreeMap<String, PathSpec>,
    loops: BTreeMap<String, Vec<(String, bool)>>,
}

impl LoopSet {
    pub fn new(base: ExactPoint) -> Self {
        Self { base, pieces: BTreeMap::new(), loops: BTreeMap::new() }
    }

    pub fn base(&self) -> &ExactPoint {
        &self.base
    }

    pub fn add_piece(&mut self, piece: PathSpec) {
        self.pieces.insert(piece.name.clone(), piece);
    }

    /// Declares `name` as the pieces traversed in order; `false` runs a piece backwards.
    /// The pieces must join up into a loop at the base point.
    pub fn add_loop(&mut self, name: &str, route: &[(&str, bool)]) -> Result<()> {
        let mut cur = self.base.clone();
        for (piece, forward) in route {
            let p = self.pieces.get(*piece).ok_or_else(|| Error::UnknownGenerator(piece.to_string()))?;
            let end = p.end().ok_or_else(|| Error::Inconsistent(format!("piece {piece:?} has no exact end")))?;
            let (from, to) = if *forward { (p.base().clone(), end) } else { (end, p.base().clone()) };
            if from != cur {
                return Err(Error::Inconsistent(format!("loop {name:?}: piece {piece:?} does not start where the route is")));
            }
            cur = to;
        }
        if cur != self.base {
            return Err(Error::Inconsistent(format!("loop {name:?} does not return to the base point")));
        }
        self.loops.insert(name.into(), route.iter().map(|(p, f)| (p.to_string(), *f)).collect());
        Ok(())
    }

    pub fn loop_names(&self) -> Vec<&str> {
        self.loops.keys().map(String::as_str).collect()
    }

    pub fn piece(&self, name: &str) -> Option<&PathSpec> {
        self.pieces.get(name)
    }

    /// The route of a loop flattened into one path.
    pub fn flattened(&self, name: &str) -> Result<PathSpec> {
        let route = self.loops.get(name).ok_or_else(|| Error::UnknownGenerator(name.into()))?;
        let mut out = PathSpec::new(name, self.base.clone());
        for (piece, forward) in route {
            let p = &self.pieces[piece];
            out = if *forward { out.append(p) } else { out.append(&p.reversed()?) };
        }
        Ok(out)
    }

    /// Monodromies of the requested loops, continuing each needed piece once.
    pub fn monodromies(
        &self,
        sys: &PfaffianSystem,
        names: &[&str],
        opts: &TransportOptions,
    ) -> Result<(BTreeMap<String, CMatrix>, TransportStats)> {
        let mut cache: BTreeMap<&str, (CMatrix, Option<CMatrix>)> = BTreeMap::new();
        let mut total = TransportStats { min_distance: f64::INFINITY, ..Default::default() };
        let mut out = BTreeMap::new();
        for &name in names {
            let route = self.loops.get(name).ok_or_else(|| Error::UnknownGenerator(name.into()))?;
            let mut m = CMatrix::identity(sys.rank(), opts.prec_bits + 32);
            for (piece, forward) in route {
                if !cache.contains_key(piece.as_str()) {
                    let (phi, st) = transport(sys, &self.pieces[piece], opts)?;
                    total.chords += st.chords;
                    total.steps += st.steps;
                    total.max_order = total.max_order.max(st.max_order);
                    total.min_distance = total.min_distance.min(st.min_distance);
                    cache.insert(piece, (phi, None));
                }
                let entry = cache.get_mut(piece.as_str()).expect("cached");
                let step = if *forward {
                    entry.0.clone()
                } else {
                    if entry.1.is_none() {
                        entry.1 = Some(entry.0.inverse()?);
                    }
                    entry.1.clone().expect("inverse cached")
                };
                m = step.mul(&m);
            }
            out.insert(name.to_string(), m.rounded(opts.prec_bits));
        }
        Ok((out, total))
    }
}

/// Product of loop monodromies along a word such as `TE1^-1 * Tx^-1 * Ty^3`.
pub fn evaluate_word(word: &Word, loops: &BTreeMap<String, CMatrix>) -> Result<CMatrix> {
    let first = loops.values().next().ok_or_else(|| Error::Inconsistent("no loops".into()))?;
    let mut acc = CMatrix::identity(first.dim(), first.precision());
    for letter in word.letters() {
        let m = loops.get(&letter.name).ok_or_else(|| Error::UnknownGenerator(letter.name.clone()))?;
        acc = acc.mul(&m.powi(letter.exponent)?);
    }
    Ok(acc)
}

/// Outcome of comparing both sides of a relation numerically.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericRelation {
    pub id: String,
    /// Largest entry of `lhs - rhs` relative to the larger of 1 and the largest entry.
    pub deviation: f64,
    pub holds: bool,
}

pub fn numeric_relation_check(
    loops: &BTreeMap<String, CMatrix>,
    rel: &RelationSpec,
    tol: f64,
) -> Result<NumericRelation> {
    let lhs = evaluate_word(&Word::parse(&rel.lhs)?, loops)?;
    let rhs = evaluate_word(&Word::parse(&rel.rhs)?, loops)?;
    let scale = lhs.max_abs().max(rhs.max_abs()).max(1.0);
    let deviation = lhs.max_abs_diff(&rhs) / scale;
    Ok(NumericRelation { id: rel.id.clone(), deviation, holds: deviation < tol })
}

/// `|tr(word(numeric)) - tr(word(exact))|` for a word over loops that also name exact
/// dataset matrices acting on cohomology.
pub fn word_trace_deviation(
    word: &str,
    loops: &BTreeMap<String, CMatrix>,
    exact: impl Fn(&str) -> Result<ExactMatrix>,
) -> Result<(f64, Rat)> {
    let w = Word::parse(word)?;
    let numeric = evaluate_word(&w, loops)?.trace();
    let mut acc: Option<ExactMatrix> = None;
    for letter in w.letters() {
        let m = exact(&letter.name)?;
        let p = m.powi(letter.exponent)?;
        acc = Some(match acc {
            None => p,
            Some(a) => &a * &p,
        });
    }
    let t = acc.map(|m| m.trace()).unwrap_or_else(Rat::zero);
    let dev = (&numeric - &BigC::from_rat(&t, numeric.precision())).abs_f64();
    Ok((dev, t))
}

/// The rank-6 Pfaffian system of the `P³×P³` family.
pub fn p3p3_system() -> Result<PfaffianSystem> {
    let (d1, d2) = picard_fuchs_p3p3();
    build_pfaffian(&[d1, d2], 6)
}

/// Base point `(1/256, 1/256)` near the large complex structure limit.
pub fn p3p3_base() -> ExactPoint {
    ExactPoint::real(rat(1, 256), rat(1, 256))
}

/// The small `|y|` at which the exceptional cluster near `x = 1/4` is resolved.
pub fn p3p3_small_y() -> Rat {
    Rat::new(1.into(), num_bigint::BigInt::from(1u64 << 32))
}

fn cx(re: Rat, im: Rat) -> ExactC {
    ExactC::new(re, im)
}

fn real(r: Rat) -> ExactC {
    ExactC::real(r)
}

/// Loops of the `P³×P³` family at [`p3p3_base`]:
///
/// * `Tx`, `Ty`: circles of radius 1/256 around `x = 0` and `y = 0`.
/// * `TE1`: out to `y = 2^-32` and along `Im x = -1/20` to `x = 3/16`, then once around
///   the exceptional cluster keeping `y / (x - 1/4)^4` fixed, so `y` turns four times.
/// * `TE1-fixed-y`: the same with `y` held fixed; it differs from `TE1` by `Ty^-4`.
/// * `Txp`, `Typ`: along the same route to `x = 4`, then `x -> 4 e^{-iφ}`,
///   `y -> y e^{-iφ}` (the far point's `x` loop) or a circle around `y = 0`.
/// * `TE2`, `Txpp`, `Typp`: the mirror images of `TE1`, `Typ`, `Txp` under `x <-> y`.
pub fn p3p3_loops() -> Result<LoopSet> {
    let b = rat(1, 256);
    let eps = p3p3_small_y();
    let zero = Rat::zero();
    let base = p3p3_base();
    let low = ExactPoint::real(b.clone(), eps.clone());
    let cut = ExactPoint::new(cx(rat(3, 20), rat(-1, 20)), real(eps.clone()));
    let near = ExactPoint::real(rat(3, 16), eps.clone());
    let far = ExactPoint::real(rat(4, 1), eps.clone());
    let mut set = LoopSet::new(base.clone());
    set.add_piece(PathSpec::new("x0", base.clone()).arc(Arc::circle(0, real(zero.clone()), b.clone(), zero.clone(), real(b.clone()))));
    set.add_piece(PathSpec::new("y0", base.clone()).arc(Arc::circle(1, real(zero.clone()), b.clone(), zero.clone(), real(b.clone()))));
    set.add_piece(PathSpec::new("stem", base.clone()).line_to(low.clone()));
    set.add_piece(PathSpec::new("cut", low).line_to(cut.clone()));
    set.add_piece(PathSpec::new("to-e1", cut.clone()).line_to(near.clone()));
    let cluster = Arc {
        center: [real(rat(1, 4)), real(zero.clone())],
        radius: [rat(1, 16), eps.clone()],
        phase: [rat(1, 2), zero.clone()],
        winding: [1, 4],
        sweep: rat(1, 1),
        chords_per_turn: DEFAULT_CHORDS_PER_TURN,
    };
    set.add_piece(PathSpec::new("e1", near.clone()).arc(cluster));
    set.add_piece(PathSpec::new("e1-fixed-y", near).arc(Arc::circle(0, real(rat(1, 4)), rat(1, 16), rat(1, 2), real(eps.clone()))));
    set.add_piece(PathSpec::new("to-far", cut).through(&[
        ExactPoint::new(cx(rat(1, 4), rat(-1, 20)), real(eps.clone())),
        ExactPoint::new(cx(rat(1, 2), rat(-1, 20)), real(eps.clone())),
        far.clone(),
    ]));
    let far_x = Arc {
        center: [real(zero.clone()), real(zero.clone())],
        radius: [rat(4, 1), eps.clone()],
        phase: [zero.clone(), zero.clone()],
        winding: [-1, -1],
        sweep: rat(1, 1),
        chords_per_turn: DEFAULT_CHORDS_PER_TURN,
    };
    set.add_piece(PathSpec::new("far-x", far.clone()).arc(far_x));
    set.add_piece(PathSpec::new("far-y", far).arc(Arc::circle(1, real(zero.clone()), eps, zero, real(rat(4, 1)))));

    let names: Vec<String> = set.pieces.keys().cloned().collect();
    for name in names {
        let mirrored = set.pieces[&name].swapped(&format!("{name}~"));
        set.add_piece(mirrored);
    }
    set.add_loop("Tx", &[("x0", true)])?;
    set.add_loop("Ty", &[("y0", true)])?;
    let lasso = |tip: &[&'static str], around: &'static str| -> Vec<(&'static str, bool)> {
        let mut r: Vec<(&str, bool)> = tip.iter().map(|p| (*p, true)).collect();
        r.push((around, true));
        r.extend(tip.iter().rev().map(|p| (*p, false)));
        r
    };
    let mirror = |route: &[(&'static str, bool)]| -> Vec<(String, bool)> {
        route.iter().map(|(p, f)| (format!("{p}~"), *f)).collect()
    };
    let routes = [
        ("TE1", "TE2", lasso(&["stem", "cut", "to-e1"], "e1")),
        ("TE1-fixed-y", "TE2-fixed-x", lasso(&["stem", "cut", "to-e1"], "e1-fixed-y")),
        ("Txp", "Typp", lasso(&["stem", "cut", "to-far"], "far-x")),
        ("Typ", "Txpp", lasso(&["stem", "cut", "to-far"], "far-y")),
    ];
    for (name, mirror_name, route) in routes {
        set.add_loop(name, &route)?;
        let m = mirror(&route);
        let m: Vec<(&str, bool)> = m.iter().map(|(p, f)| (p.as_str(), *f)).collect();
        set.add_loop(mirror_name, &m)?;
    }
    Ok(set)
}
