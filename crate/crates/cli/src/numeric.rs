//! Numeric transport checks of the `P³×P³` family against the exact dataset.

use std::collections::BTreeMap;
use std::str::FromStr;

use nilcone_core::exact::{format_rat, rat};
use nilcone_core::{Dataset, Error, Result, Word};
use nilcone_transport::{
    hypergeometric_deviation, numeric_relation_check, p3p3_contractible_square, p3p3_loops, p3p3_system, transport,
    word_trace_deviation, BigC, CMatrix, LoopInvariants, TransportOptions,
};

use crate::report::{Record, Status};

/// Loop selections of the `transport` command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopChoice {
    X0,
    Y0,
    E1,
    /// Every loop, with the dataset relations checked numerically.
    Rel,
}

impl FromStr for LoopChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "x0" => Self::X0,
            "y0" => Self::Y0,
            "e1" => Self::E1,
            "rel" => Self::Rel,
            _ => return Err(Error::Schema(format!("unknown loop {s:?}"))),
        })
    }
}

/// Every loop of the numeric loop set.
pub const ALL_LOOPS: [&str; 10] = ["Tx", "Ty", "TE1", "TE2", "TE1-fixed-y", "TE2-fixed-x", "Txp", "Typp", "Typ", "Txpp"];

/// Products whose traces are compared with the dataset.
pub const TRACE_WORDS: [&str; 7] = [
    "Tx * Ty",
    "TE1 * Tx",
    "TE1 * Tx^-1 * Ty^2",
    "TE1^-1 * Tx * Ty",
    "TE1^2 * Tx",
    "Txp * Ty^-1",
    "Typ * Tx^2 * TE1",
];

/// What a transport run computes, at which precision, and the verdict tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct TransportPlan {
    pub prec_bits: usize,
    pub tol: f64,
    pub loops: Vec<String>,
    /// Flatness, the hypergeometric golden value and the contractible square.
    pub controls: bool,
    pub relations: bool,
    pub traces: bool,
}

impl Default for TransportPlan {
    fn default() -> Self {
        Self::full(256, 1e-10)
    }
}

impl TransportPlan {
    pub fn full(prec_bits: usize, tol: f64) -> Self {
        Self {
            prec_bits,
            tol,
            loops: ALL_LOOPS.iter().map(|s| s.to_string()).collect(),
            controls: true,
            relations: true,
            traces: true,
        }
    }

    pub fn for_loop(choice: LoopChoice, prec_bits: usize, tol: f64) -> Self {
        let single = |name: &str| Self {
            loops: vec![name.to_string()],
            controls: false,
            relations: false,
            traces: true,
            ..Self::full(prec_bits, tol)
        };
        match choice {
            LoopChoice::X0 => single("Tx"),
            LoopChoice::Y0 => single("Ty"),
            LoopChoice::E1 => single("TE1"),
            LoopChoice::Rel => Self { controls: false, ..Self::full(prec_bits, tol) },
        }
    }
}

/// Multiplicities of the eigenvalues 1 and -1 of a loop's monodromy.
pub fn expected_eigenvalues(name: &str) -> Option<(usize, usize)> {
    match name {
        "Tx" | "Ty" | "Typ" | "Txpp" => Some((6, 0)),
        "TE1" | "TE2" | "TE1-fixed-y" | "TE2-fixed-x" | "Txp" | "Typp" => Some((2, 4)),
        _ => None,
    }
}

/// Raw deviations of a transport run; verdicts are applied by the caller.
#[derive(Clone, Debug)]
pub struct TransportRun {
    pub prec_bits: usize,
    pub flat: Option<bool>,
    pub golden: Option<f64>,
    pub square: Option<f64>,
    pub monodromies: BTreeMap<String, CMatrix>,
    pub steps: usize,
    /// Char poly deviation from the expected `(λ - 1)^a (λ + 1)^b`, by loop.
    pub charpolys: Vec<(String, f64)>,
    /// Relative deviation of each dataset relation over the computed loops.
    pub relations: Vec<(String, String, f64)>,
    /// Trace deviation and exact trace of each word over the computed loops.
    pub traces: Vec<(String, f64, String)>,
}

fn letters_available(word: &Word, loops: &BTreeMap<String, CMatrix>) -> bool {
    word.letters().iter().all(|l| loops.contains_key(&l.name))
}

impl TransportRun {
    pub fn compute(plan: &TransportPlan) -> Result<Self> {
        let prec = plan.prec_bits;
        let sys = p3p3_system()?;
        let opts = TransportOptions::with_precision(prec);
        let mut run = Self {
            prec_bits: prec,
            flat: None,
            golden: None,
            square: None,
            monodromies: BTreeMap::new(),
            steps: 0,
            charpolys: Vec::new(),
            relations: Vec::new(),
            traces: Vec::new(),
        };
        if plan.controls {
            run.flat = Some(sys.rank() == 6 && sys.is_flat());
            run.golden = Some(hypergeometric_deviation(&rat(1, 3), prec)?);
            let (m, _) = transport(&sys, &p3p3_contractible_square(), &opts)?;
            run.square = Some(m.max_abs_diff(&CMatrix::identity(6, prec)));
        }
        if plan.loops.is_empty() {
            return Ok(run);
        }
        let names: Vec<&str> = plan.loops.iter().map(String::as_str).collect();
        let (loops, stats) = p3p3_loops()?.monodromies(&sys, &names, &opts)?;
        run.steps = stats.steps;
        let one = BigC::one(prec);
        let minus = BigC::from_i64(-1, prec);
        for name in &plan.loops {
            if let Some((a, b)) = expected_eigenvalues(name) {
                let mut roots = vec![(one.clone(), a)];
                if b > 0 {
                    roots.push((minus.clone(), b));
                }
                run.charpolys.push((name.clone(), LoopInvariants::of(&loops[name]).charpoly_deviation(&roots)));
            }
        }
        let ds = Dataset::bundled("p3p3")?;
        if plan.relations {
            for rel in ds.relations() {
                let (l, r) = (Word::parse(&rel.lhs)?, Word::parse(&rel.rhs)?);
                if letters_available(&l, &loops) && letters_available(&r, &loops) {
                    let out = numeric_relation_check(&loops, rel, f64::INFINITY)?;
                    run.relations.push((rel.id.clone(), rel.label.clone(), out.deviation));
                }
            }
        }
        if plan.traces {
            let words = plan.loops.iter().map(String::as_str).chain(TRACE_WORDS);
            for w in words {
                let parsed = Word::parse(w)?;
                if !letters_available(&parsed, &loops) || parsed.letters().iter().any(|l| ds.matrix(&l.name).is_err()) {
                    continue;
                }
                let (dev, exact) = word_trace_deviation(w, &loops, |n| Ok(ds.matrix(n)?.clone()))?;
                run.traces.push((w.to_string(), dev, format_rat(&exact)));
            }
        }
        run.monodromies = loops;
        Ok(run)
    }

    /// Records with verdicts at tolerance `tol`.
    pub fn records(&self, tol: f64) -> Vec<Record> {
        let prec = self.prec_bits;
        let stamp = |r: Record| r.with("precision_bits", prec).with("tol", format!("{tol:e}"));
        let mut out = Vec::new();
        if let Some(flat) = self.flat {
            out.push(
                Record::check("transport/flatness", "the rank-6 Pfaffian system of the operators is integrable", flat)
                    .with("precision_bits", prec),
            );
        }
        if let Some(d) = self.golden {
            out.push(stamp(
                Record::check("transport/hypergeometric", "Gauss monodromy at x = 0 has eigenvalues 1 and e^{2πi(1-c)}", d < tol)
                    .with("deviation", format!("{d:.3e}")),
            ));
        }
        if let Some(d) = self.square {
            out.push(stamp(
                Record::check("transport/contractible", "a contractible loop has identity monodromy", d < tol)
                    .with("deviation", format!("{d:.3e}")),
            ));
        }
        for (name, d) in &self.charpolys {
            let (a, b) = expected_eigenvalues(name).expect("listed loop");
            let poly = if b == 0 { format!("(λ-1)^{a}") } else { format!("(λ-1)^{a} (λ+1)^{b}") };
            out.push(stamp(
                Record::check(format!("transport/charpoly/{name}"), format!("char poly of {name} is {poly}"), *d < tol)
                    .with("deviation", format!("{d:.3e}")),
            ));
        }
        for (id, label, d) in &self.relations {
            out.push(stamp(
                Record::check(format!("transport/relation/{id}"), label, *d < tol).with("deviation", format!("{d:.3e}")),
            ));
        }
        for (w, d, exact) in &self.traces {
            out.push(stamp(
                Record::check(format!("transport/trace/{w}"), format!("trace of {w} matches the dataset"), *d < tol)
                    .with("deviation", format!("{d:.3e}"))
                    .with("exact", exact),
            ));
        }
        out
    }
}

/// Runs `plan` and returns its records, or one failed record if transport stops.
pub fn transport_records(plan: &TransportPlan) -> Vec<Record> {
    match TransportRun::compute(plan) {
        Ok(run) => run.records(plan.tol),
        Err(e) => vec![Record::new("transport", "numeric transport of the loop set", Status::Fail)
            .with("error", e)
            .with("precision_bits", plan.prec_bits)],
    }
}
