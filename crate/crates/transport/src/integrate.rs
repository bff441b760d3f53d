//! Taylor-series continuation of the fundamental matrix of a Pfaffian system along a
//! polygonal path.
//!
//! On a chord `z(t) = p + t (q - p)` the jet `F` satisfies `Q(t) F' = M(t) F` with
//! `Q = x y den` and `M = dx y N_x + dy x N_y`, both polynomial in `t`. Each step expands
//! `F` around the current `t0` by the exact polynomial recurrence and sums it at a step
//! `h` no larger than a fixed fraction of the distance from `t0` to the nearest root of `Q`.

use nilcone_core::error::{Error, Result};
use nilcone_core::Rat;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::bigc::{BigC, CMatrix};
use crate::cpoly::{powers, restrict, roots_f64, CPoly};
use crate::path::PathSpec;
use crate::pfaffian::PfaffianSystem;

/// Numerical controls for [`transport`].
#[derive(Clone, Debug, PartialEq)]
pub struct TransportOptions {
    pub prec_bits: usize,
    /// Step as a fraction of the distance to the nearest singular point.
    pub step_fraction: f64,
    /// Largest step length in `C²`, if any.
    pub step_cap: Option<f64>,
    /// Smallest admissible distance from the path to the singular locus.
    pub margin: f64,
}

impl Default for TransportOptions {
    fn default() -> Self {
        Self { prec_bits: 256, step_fraction: 0.3, step_cap: None, margin: 1e-14 }
    }
}

impl TransportOptions {
    pub fn with_precision(prec_bits: usize) -> Self {
        Self { prec_bits, ..Self::default() }
    }

    fn guard(&self) -> usize {
        self.prec_bits + 32
    }
}

/// Bookkeeping of one continuation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TransportStats {
    pub chords: usize,
    pub steps: usize,
    pub max_order: usize,
    /// Smallest distance from the path to a singular point, measured within each chord's
    /// complex line.
    pub min_distance: f64,
}

/// Transfer matrix `Φ` along `path`: the jet of any solution at the end equals `Φ` times
/// its jet at the start.
pub fn transport(sys: &PfaffianSystem, path: &PathSpec, opts: &TransportOptions) -> Result<(CMatrix, TransportStats)> {
    let prec = opts.guard();
    let verts = path.vertices(prec)?;
    let n = sys.rank();
    let mut phi = CMatrix::identity(n, prec);
    let mut stats = TransportStats { min_distance: f64::INFINITY, ..Default::default() };
    for w in verts.windows(2) {
        let seg = Chord::new(sys, &w[0], &w[1], prec)?;
        let Some(seg) = seg else { continue };
        stats.chords += 1;
        let d = seg.min_distance();
        stats.min_distance = stats.min_distance.min(d);
        if d < opts.margin {
            return Err(Error::SingularityTooClose { distance: d, margin: opts.margin });
        }
        let step = seg.transfer(opts, &mut stats)?;
        phi = step.mul(&phi);
    }
    Ok((phi.rounded(opts.prec_bits), stats))
}

struct Chord {
    /// `Q(t)` and the matrix `M(t)` on the chord, in powers of `t`.
    q: CPoly,
    m: Vec<Vec<CPoly>>,
    /// Roots of `Q` in the chord parameter.
    roots: Vec<Complex64>,
    /// Euclidean length of the chord.
    length: f64,
    prec: usize,
}

impl Chord {
    fn new(sys: &PfaffianSystem, p: &[BigC; 2], q: &[BigC; 2], prec: usize) -> Result<Option<Self>> {
        let dx = &q[0] - &p[0];
        let dy = &q[1] - &p[1];
        if dx.is_zero() && dy.is_zero() {
            return Ok(None);
        }
        let length = dx.abs_f64().hypot(dy.abs_f64());
        let xl = CPoly::linear(p[0].clone(), dx.clone());
        let yl = CPoly::linear(p[1].clone(), dy.clone());
        let deg = sys_degree(sys);
        let xp = powers(&xl, deg, prec);
        let yp = powers(&yl, deg, prec);
        let den = restrict(sys.denominator(), &xp, &yp, prec);
        let n = sys.rank();
        let mut m = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let ax = restrict(&sys.numerator_x()[i][j], &xp, &yp, prec).mul(&yl).scale(&dx);
                let ay = restrict(&sys.numerator_y()[i][j], &xp, &yp, prec).mul(&xl).scale(&dy);
                row.push(ax.add(&ay));
            }
            m.push(row);
        }
        let mut roots = roots_f64(&den.to_f64());
        for l in [&xl, &yl] {
            roots.extend(roots_f64(&l.to_f64()));
        }
        let qpoly = xl.mul(&yl).mul(&den);
        Ok(Some(Self { q: qpoly, m, roots, length, prec }))
    }

    fn distance_at(&self, t: f64) -> f64 {
        self.roots.iter().map(|r| (r - Complex64::new(t, 0.0)).norm()).fold(f64::INFINITY, f64::min)
    }

    /// Distance from the chord to the nearest root, in `C²` units.
    fn min_distance(&self) -> f64 {
        let d = self
            .roots
            .iter()
            .map(|r| {
                let t = r.re.clamp(0.0, 1.0);
                (r - Complex64::new(t, 0.0)).norm()
            })
            .fold(f64::INFINITY, f64::min);
        d * self.length
    }

    fn transfer(&self, opts: &TransportOptions, stats: &mut TransportStats) -> Result<CMatrix> {
        let n = self.m.len();
        let mut phi = CMatrix::identity(n, self.prec);
        let mut t0 = Rat::zero();
        let one = Rat::one();
        while t0 < one {
            let tf = t0.to_f64().unwrap_or(1.0);
            let mut h = opts.step_fraction * self.distance_at(tf);
            if let Some(cap) = opts.step_cap {
                h = h.min(cap / self.length);
            }
            let rest = &one - &t0;
            let h = if h >= rest.to_f64().unwrap_or(0.0) {
                rest
            } else {
                Rat::from_float(h).filter(|v| !v.is_zero()).ok_or_else(|| {
                    Error::PrecisionExhausted(format!("step underflow at t = {tf}"))
                })?
            };
            let (g, order) = self.taylor_step(&t0, &h, opts)?;
            stats.steps += 1;
            stats.max_order = stats.max_order.max(order);
            phi = g.mul(&phi);
            t0 += h;
        }
        Ok(phi)
    }

    /// Sum of the Taylor series of the transfer matrix from `t0` to `t0 + h`.
    fn taylor_step(&self, t0: &Rat, h: &Rat, opts: &TransportOptions) -> Result<(CMatrix, usize)> {
        let prec = self.prec;
        let n = self.m.len();
        let t0 = BigC::from_rat(t0, prec);
        let hb = BigC::from_rat(h, prec);
        let q = self.q.shift_scale(&t0, &hb);
        // M picks up one more factor of h from dt = h ds
        let m: Vec<Vec<CPoly>> =
            self.m.iter().map(|row| row.iter().map(|p| p.shift_scale(&t0, &hb).scale(&hb)).collect()).collect();
        let dm = m.iter().flatten().map(CPoly::degree).max().unwrap_or(0);
        let mj: Vec<CMatrix> = (0..=dm)
            .map(|j| CMatrix::from_fn(n, |a, b| m[a][b].coeffs().get(j).cloned().unwrap_or_else(|| BigC::zero(prec))))
            .collect();
        let qc = q.coeffs();
        let dq = q.degree();
        if qc[0].is_zero() {
            return Err(Error::SingularityTooClose { distance: 0.0, margin: opts.margin });
        }
        let inv_q0 = BigC::one(prec).checked_div(&qc[0])?;
        let tol = 2f64.powi(-(opts.prec_bits as i32) - 8);
        let max_order = 16 * opts.prec_bits + 64;
        let mut f: Vec<CMatrix> = vec![CMatrix::identity(n, prec)];
        let mut sum = CMatrix::identity(n, prec);
        let mut small = 0;
        for k in 0..max_order {
            let mut acc = CMatrix::zeros(n, prec);
            for j in 0..=k.min(dm) {
                acc.add_mul_assign(&mj[j], &f[k - j]);
            }
            for j in 1..=(k + 1).min(dq) {
                acc.sub_scaled_assign(&qc[j].mul_i64((k + 1 - j) as i64), &f[k + 1 - j]);
            }
            let next = acc.scale(&inv_q0.div_i64((k + 1) as i64));
            let size = next.max_abs();
            sum.add_assign(&next);
            f.push(next);
            small = if size < tol * sum.max_abs().max(1.0) { small + 1 } else { 0 };
            if small >= 3 {
                return Ok((sum, k + 1));
            }
        }
        Err(Error::PrecisionExhausted(format!("Taylor series did not converge within order {max_order}")))
    }
}

fn sys_degree(sys: &PfaffianSystem) -> usize {
    let d = |p: &nilcone_core::poly::Poly2| p.terms().map(|((i, j), _)| (*i).max(*j)).max().unwrap_or(0);
    let mut deg = d(sys.denominator());
    for row in sys.numerator_x().iter().chain(sys.numerator_y()) {
        for p in row {
            deg = deg.max(d(p));
        }
    }
    deg as usize
}
