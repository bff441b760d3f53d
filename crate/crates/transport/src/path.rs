//! Paths in `C²` built from straight legs and torus arcs, specified with exact
//! rational data and discretized to a polygon at the working precision.

use nilcone_core::error::{Error, Result};
use nilcone_core::Rat;
use num_traits::{One, Signed, Zero};

use crate::bigc::BigC;

/// A complex number with rational parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactC {
    pub re: Rat,
    pub im: Rat,
}

impl ExactC {
    pub fn new(re: Rat, im: Rat) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rat) -> Self {
        Self { re, im: Rat::zero() }
    }

    pub fn to_big(&self, prec: usize) -> BigC {
        BigC::from_rats(&self.re, &self.im, prec)
    }
}

/// A point `(x, y)` in `C²` with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPoint {
    pub x: ExactC,
    pub y: ExactC,
}

impl ExactPoint {
    pub fn new(x: ExactC, y: ExactC) -> Self {
        Self { x, y }
    }

    /// A point with real coordinates.
    pub fn real(x: Rat, y: Rat) -> Self {
        Self { x: ExactC::real(x), y: ExactC::real(y) }
    }

    /// The point with its coordinates exchanged.
    pub fn swapped(&self) -> Self {
        Self { x: self.y.clone(), y: self.x.clone() }
    }

    pub fn to_big(&self, prec: usize) -> [BigC; 2] {
        [self.x.to_big(prec), self.y.to_big(prec)]
    }
}

/// `z_k(u) = center_k + radius_k exp(2πi (phase_k + winding_k u))` for `u` from 0 to
/// `sweep` (in turns). A coordinate with radius 0 stays at its center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub center: [ExactC; 2],
    pub radius: [Rat; 2],
    pub phase: [Rat; 2],
    pub winding: [i64; 2],
    pub sweep: Rat,
    /// Chords per turn of the fastest-winding coordinate.
    pub chords_per_turn: usize,
}

impl Arc {
    /// A full counterclockwise turn of one coordinate around `center` starting at
    /// `center + radius exp(2πi phase)`, the other coordinate fixed at `other`.
    pub fn circle(axis: usize, center: ExactC, radius: Rat, phase: Rat, other: ExactC) -> Self {
        let mut c = [other.clone(), other];
        c[axis] = center;
        let mut radius_v = [Rat::zero(), Rat::zero()];
        radius_v[axis] = radius;
        let mut winding = [0, 0];
        winding[axis] = 1;
        Self {
            center: c,
            radius: radius_v,
            phase: [phase.clone(), phase],
            winding,
            sweep: Rat::one(),
            chords_per_turn: DEFAULT_CHORDS_PER_TURN,
        }
    }

    fn chords(&self) -> usize {
        let w = self.winding.iter().map(|w| w.unsigned_abs()).max().unwrap_or(0).max(1);
        let turns = (self.sweep.abs() * Rat::from_integer((w as i64).into())).ceil().to_integer();
        let turns: usize = turns.try_into().unwrap_or(1);
        (turns.max(1) * self.chords_per_turn).max(1)
    }

    /// Whether both coordinates return to their start.
    pub fn is_closed(&self) -> bool {
        (0..2).all(|k| self.radius[k].is_zero() || (&self.sweep * Rat::from_integer(self.winding[k].into())).is_integer())
    }

    pub fn point(&self, u: &Rat, prec: usize) -> [BigC; 2] {
        let coord = |k: usize| {
            let c = self.center[k].to_big(prec);
            if self.radius[k].is_zero() {
                return c;
            }
            let turns = &self.phase[k] + Rat::from_integer(self.winding[k].into()) * u;
            let e = BigC::unit(&turns, prec);
            &c + &e.scale(&crate::bigc::real_from_rat(&self.radius[k], prec))
        };
        [coord(0), coord(1)]
    }

    /// The same arc traversed backwards.
    pub fn reversed(&self) -> Self {
        let phase = [0, 1].map(|k| &self.phase[k] + Rat::from_integer(self.winding[k].into()) * &self.sweep);
        Self { phase, winding: self.winding.map(|w| -w), ..self.clone() }
    }

    pub fn swapped(&self) -> Self {
        Self {
            center: [self.center[1].clone(), self.center[0].clone()],
            radius: [self.radius[1].clone(), self.radius[0].clone()],
            phase: [self.phase[1].clone(), self.phase[0].clone()],
            winding: [self.winding[1], self.winding[0]],
            sweep: self.sweep.clone(),
            chords_per_turn: self.chords_per_turn,
        }
    }
}

/// Default polygon resolution of arcs.
pub const DEFAULT_CHORDS_PER_TURN: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Leg {
    Line(ExactPoint),
    Arc(Arc),
}

/// A path from `base` through its legs. Legs start where the previous one ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSpec {
    pub name: String,
    base: ExactPoint,
    legs: Vec<Leg>,
}

impl PathSpec {
    pub fn new(name: &str, base: ExactPoint) -> Self {
        Self { name: name.into(), base, legs: Vec::new() }
    }

    pub fn line_to(mut self, p: ExactPoint) -> Self {
        self.legs.push(Leg::Line(p));
        self
    }

    pub fn arc(mut self, a: Arc) -> Self {
        self.legs.push(Leg::Arc(a));
        self
    }

    /// Straight legs through `points` in order.
    pub fn through(mut self, points: &[ExactPoint]) -> Self {
        for p in points {
            self.legs.push(Leg::Line(p.clone()));
        }
        self
    }

    /// `stem · arc · stem⁻¹`: out along `stem`, around the closed `arc`, and back.
    pub fn lasso(name: &str, base: ExactPoint, stem: &[ExactPoint], arc: Arc) -> Self {
        let back: Vec<ExactPoint> = stem.iter().rev().skip(1).cloned().chain(std::iter::once(base.clone())).collect();
        Self::new(name, base).through(stem).arc(arc).through(&back)
    }

    pub fn base(&self) -> &ExactPoint {
        &self.base
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    /// The mirror path under `(x, y) -> (y, x)`.
    pub fn swapped(&self, name: &str) -> Self {
        Self {
            name: name.into(),
            base: self.base.swapped(),
            legs: self
                .legs
                .iter()
                .map(|l| match l {
                    Leg::Line(p) => Leg::Line(p.swapped()),
                    Leg::Arc(a) => Leg::Arc(a.swapped()),
                })
                .collect(),
        }
    }

    /// Polygon vertices at `prec` bits. Each arc must start at the current point to
    /// within `2^(-prec/2)`; it then starts there exactly, and a closed arc ends there.
    pub fn vertices(&self, prec: usize) -> Result<Vec<[BigC; 2]>> {
        let mut out = vec![self.base.to_big(prec)];
        let tol = 2f64.powi(-((prec / 2) as i32));
        for (k, leg) in self.legs.iter().enumerate() {
            let cur = out.last().expect("nonempty").clone();
            match leg {
                Leg::Line(p) => out.push(p.to_big(prec)),
                Leg::Arc(a) => {
                    let start = a.point(&Rat::zero(), prec);
                    let gap = (&start[0] - &cur[0]).abs_f64().max((&start[1] - &cur[1]).abs_f64());
                    if gap > tol {
                        return Err(Error::Inconsistent(format!(
                            "leg {k} of path {:?} starts {gap:e} away from the previous end",
                            self.name
                        )));
                    }
                    let n = a.chords();
                    for i in 1..n {
                        let u = &a.sweep * Rat::new((i as i64).into(), (n as i64).into());
                        out.push(a.point(&u, prec));
                    }
                    out.push(if a.is_closed() { cur } else { a.point(&a.sweep, prec) });
                }
            }
        }
        Ok(out)
    }

    /// This path followed by `next`, which must start where this one ends.
    pub fn append(mut self, next: &PathSpec) -> Self {
        debug_assert_eq!(self.end().as_ref(), Some(&next.base));
        self.legs.extend(next.legs.iter().cloned());
        self
    }

    /// The path traversed backwards; every open leg must end at an exact point.
    pub fn reversed(&self) -> Result<Self> {
        let end = self.end().ok_or_else(|| Error::Inconsistent(format!("path {:?} has no exact end", self.name)))?;
        let mut starts = vec![self.base.clone()];
        for leg in &self.legs[..self.legs.len().saturating_sub(1)] {
            if let Leg::Line(p) = leg {
                starts.push(p.clone());
            } else {
                starts.push(starts.last().expect("nonempty").clone());
            }
        }
        let legs = self
            .legs
            .iter()
            .zip(starts)
            .rev()
            .map(|(leg, start)| match leg {
                Leg::Line(_) => Leg::Line(start),
                Leg::Arc(a) => Leg::Arc(a.reversed()),
            })
            .collect();
        Ok(Self { name: format!("{}^-1", self.name), base: end, legs })
    }

    /// The exact end point, when every open leg ends at a rational point.
    pub fn end(&self) -> Option<ExactPoint> {
        let mut cur = self.base.clone();
        for leg in &self.legs {
            match leg {
                Leg::Line(p) => cur = p.clone(),
                Leg::Arc(a) if a.is_closed() => {}
                Leg::Arc(_) => return None,
            }
        }
        Some(cur)
    }

    /// Whether the path ends at its base point.
    pub fn is_closed(&self) -> bool {
        match self.legs.last() {
            None => true,
            Some(Leg::Line(p)) => p == &self.base,
            Some(Leg::Arc(a)) => a.is_closed() && self.legs.len() == 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nilcone_core::exact::rat;

    #[test]
    fn lasso_is_closed_and_connected() {
        let base = ExactPoint::real(rat(1, 4), rat(1, 4));
        let tip = ExactPoint::real(rat(1, 2), rat(1, 4));
        let arc = Arc::circle(0, ExactC::real(rat(0, 1)), rat(1, 2), rat(0, 1), ExactC::real(rat(1, 4)));
        let p = PathSpec::lasso("x", base.clone(), &[tip], arc);
        assert!(p.is_closed());
        let v = p.vertices(128).unwrap();
        assert_eq!(v.len(), 1 + 1 + DEFAULT_CHORDS_PER_TURN + 1);
        assert_eq!(v.last().unwrap(), &base.to_big(128));
        let bad = PathSpec::new("bad", base).arc(Arc::circle(0, ExactC::real(rat(0, 1)), rat(1, 2), rat(0, 1), ExactC::real(rat(0, 1))));
        assert!(bad.vertices(128).is_err());
    }
}
