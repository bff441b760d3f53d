//! SVG 1.1 figures of two-dimensional fans with their limiting rays.

use std::fmt::Write as _;

use nilcone_core::birational::ChamberFan;
use nilcone_core::cones::QuotientFan;
use nilcone_core::fan::LatticeRay;
use nilcone_core::{Error, QuadRay, Result};

const SIZE: f64 = 480.0;
const RADIUS: f64 = 200.0;
const SHADES: [&str; 2] = ["#c9d8ec", "#eef2f7"];

/// Rays counterclockwise and the two closure rays.
#[derive(Clone, Debug, PartialEq)]
pub struct FanFigure {
    pub title: String,
    pub rays: Vec<LatticeRay>,
    pub closure: Option<[QuadRay; 2]>,
}

impl FanFigure {
    pub fn from_chambers(fan: &ChamberFan, title: impl Into<String>) -> Self {
        Self { title: title.into(), rays: fan.rays.clone(), closure: Some(fan.closure.clone()) }
    }

    pub fn from_quotient(fan: &QuotientFan, title: impl Into<String>) -> Self {
        Self { title: title.into(), rays: fan.rays.clone(), closure: Some(fan.closure.clone()) }
    }
}

fn unit(x: f64, y: f64) -> (f64, f64) {
    let n = x.hypot(y);
    (x / n, y / n)
}

/// Screen point at distance `r` along the direction `(x, y)`; screen `y` points down.
fn at(d: (f64, f64), r: f64) -> (f64, f64) {
    (SIZE / 2.0 + r * d.0, SIZE / 2.0 - r * d.1)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders `fig`: shaded sectors between consecutive rays, alternating in tone, each
/// ray drawn from the origin, and the closure rays dashed with their exact labels.
pub fn fan_svg(fig: &FanFigure) -> Result<String> {
    if fig.rays.len() < 2 {
        return Err(Error::Inconsistent("a fan figure needs at least two rays".into()));
    }
    let dirs: Vec<(f64, f64)> = fig.rays.iter().map(|r| {
        let (x, y) = r.to_f64();
        unit(x, y)
    }).collect();
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, "  <title>{}</title>", escape(&fig.title));
    let _ = writeln!(s, r#"  <rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(s, r#"  <g id="chambers" stroke="none">"#);
    let o = at((0.0, 0.0), 0.0);
    for (k, w) in dirs.windows(2).enumerate() {
        let (a, b) = (at(w[0], RADIUS), at(w[1], RADIUS));
        // sectors of a fan never exceed a half-turn
        let _ = writeln!(
            s,
            r#"    <path d="M {:.3} {:.3} L {:.3} {:.3} A {RADIUS} {RADIUS} 0 0 0 {:.3} {:.3} Z" fill="{}"/>"#,
            o.0, o.1, a.0, a.1, b.0, b.1, SHADES[k % 2]
        );
    }
    let _ = writeln!(s, "  </g>");
    let _ = writeln!(s, r##"  <g id="rays" stroke="#1f3a5f" stroke-width="1.5">"##);
    for (r, d) in fig.rays.iter().zip(&dirs) {
        let e = at(*d, RADIUS);
        let _ = writeln!(s, r#"    <line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"><title>{r}</title></line>"#, o.0, o.1, e.0, e.1);
    }
    let _ = writeln!(s, "  </g>");
    if let Some(closure) = &fig.closure {
        let _ = writeln!(s, r##"  <g id="closure" stroke="#b03030" stroke-width="1.5" stroke-dasharray="6 4">"##);
        for q in closure {
            let (x, y) = q.to_f64();
            let d = unit(x, y);
            let e = at(d, RADIUS + 12.0);
            let _ = writeln!(s, r#"    <line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#, o.0, o.1, e.0, e.1);
        }
        let _ = writeln!(s, "  </g>");
        let _ = writeln!(s, r##"  <g id="labels" font-family="serif" font-size="13" fill="#b03030" text-anchor="middle">"##);
        for q in closure {
            let (x, y) = q.to_f64();
            let t = at(unit(x, y), RADIUS + 26.0);
            let _ = writeln!(s, r#"    <text x="{:.3}" y="{:.3}">{}</text>"#, t.0, t.1, escape(&q.to_string()));
        }
        let _ = writeln!(s, "  </g>");
    }
    let _ = writeln!(s, r#"  <circle cx="{:.3}" cy="{:.3}" r="2.5" fill="black"/>"#, o.0, o.1);
    let _ = writeln!(s, "</svg>");
    Ok(s)
}
