//! Words in named generators, such as `TE1^-1 * Tx^-1 * Ty^4`, and their evaluation
//! with source/target bookkeeping for paths between boundary points.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::ExactMatrix;

/// One factor `name^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub name: String,
    pub exponent: i64,
}

/// A product of letters; the rightmost letter acts first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

/// What a resolver returns for a generator name.
#[derive(Clone, Copy, Debug)]
pub struct Generator<'a> {
    pub matrix: &'a ExactMatrix,
    /// `(source, target)` for a path between labeled points; `None` for loops that
    /// compose with anything.
    pub endpoints: Option<(&'a str, &'a str)>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self { letters: letters.into_iter().filter(|l| l.exponent != 0).collect() }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Parses `"A^k * B * C^-1"`; `""` and `"id"` are the empty word.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() || t == "id" {
            return Ok(Self::default());
        }
        let mut letters = Vec::new();
        let tokens: Vec<&str> = t.split_whitespace().collect();
        for (k, tok) in tokens.iter().enumerate() {
            if k % 2 == 1 {
                if *tok != "*" {
                    return Err(Error::Parse(format!("expected ' * ' between factors in word {s:?}")));
                }
                continue;
            }
            let (name, exponent) = match tok.split_once('^') {
                None => (*tok, 1),
                Some((n, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent {e:?} in word {s:?}")))?;
                    (n, e)
                }
            };
            // only pullback names like "phi21*" may carry a star, and only at the end
            let stem = name.strip_suffix('*').unwrap_or(name);
            if stem.is_empty() || stem.contains('*') {
                return Err(Error::Parse(format!("bad generator name {name:?} in word {s:?}")));
            }
            letters.push(Letter { name: name.to_string(), exponent });
        }
        if tokens.len().is_multiple_of(2) {
            return Err(Error::Parse(format!("dangling '*' in word {s:?}")));
        }
        Ok(Self::new(letters))
    }

    /// The word `w^-1`.
    pub fn inverse(&self) -> Self {
        Self {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter { name: l.name.clone(), exponent: -l.exponent })
                .collect(),
        }
    }

    /// Concatenation `self * other`.
    pub fn concat(&self, other: &Self) -> Self {
        Self::new([self.letters.clone(), other.letters.clone()].concat())
    }

    /// Evaluates the product of `dim x dim` matrices, checking composability of the
    /// labeled paths. Returns the matrix and the overall `(source, target)`, if any.
    pub fn evaluate<'a, F>(&self, dim: usize, resolve: F) -> Result<(ExactMatrix, Option<(String, String)>)>
    where
        F: Fn(&str) -> Option<Generator<'a>>,
    {
        let mut acc = ExactMatrix::identity(dim);
        let mut span: Option<(String, String)> = None;
        for letter in self.letters.iter().rev() {
            let (m, ends) = resolve_letter(&letter.name, &resolve)?;
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "generator {} is {}x{}, expected {dim}x{dim}",
                    letter.name,
                    m.rows(),
                    m.cols()
                )));
            }
            let ends = ends.map(|(s, t)| if letter.exponent < 0 { (t, s) } else { (s, t) });
            if let Some((s, t)) = &ends {
                if letter.exponent.abs() > 1 && s != t {
                    return Err(Error::NotComposable(format!(
                        "{}^{} is a path from {s} to {t} and cannot be iterated",
                        letter.name, letter.exponent
                    )));
                }
                span = match span {
                    None => Some((s.clone(), t.clone())),
                    Some((start, cur)) => {
                        if &cur != s {
                            return Err(Error::NotComposable(format!(
                                "{} starts at {s} but the path so far ends at {cur}",
                                letter.name
                            )));
                        }
                        Some((start, t.clone()))
                    }
                };
            }
            let p = m.powi(letter.exponent)?;
            acc = p.checked_mul(&acc)?;
        }
        Ok((acc, span))
    }
}

/// Looks up a name, falling back to the inverse of the index-swapped name
/// (`phi12 = phi21^-1`).
fn resolve_letter<'a, F>(name: &str, resolve: &F) -> Result<(ExactMatrix, Option<(String, String)>)>
where
    F: Fn(&str) -> Option<Generator<'a>>,
{
    let own = |g: Generator<'a>| {
        (g.matrix.clone(), g.endpoints.map(|(s, t)| (s.to_string(), t.to_string())))
    };
    if let Some(g) = resolve(name) {
        return Ok(own(g));
    }
    if let Some(swapped) = swapped_indices(name) {
        if let Some(g) = resolve(&swapped) {
            let (m, ends) = own(g);
            return Ok((m.inverse()?, ends.map(|(s, t)| (t, s))));
        }
    }
    Err(Error::UnknownGenerator(name.to_string()))
}

fn swapped_indices(name: &str) -> Option<String> {
    let (stem, star) = match name.strip_suffix('*') {
        Some(s) => (s, "*"),
        None => (name, ""),
    };
    let b = stem.as_bytes();
    if b.len() < 3 || !b[b.len() - 1].is_ascii_digit() || !b[b.len() - 2].is_ascii_digit() {
        return None;
    }
    let head = &stem[..stem.len() - 2];
    if head.ends_with(|c: char| c.is_ascii_digit()) {
        return None;
    }
    Some(format!("{head}{}{}{star}", b[b.len() - 1] as char, b[b.len() - 2] as char))
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| if l.exponent == 1 { l.name.clone() } else { format!("{}^{}", l.name, l.exponent) })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let w = Word::parse("TE1^-1 * Tx^-1 * Ty^4").unwrap();
        assert_eq!(w.letters().len(), 3);
        assert_eq!(w.to_string(), "TE1^-1 * Tx^-1 * Ty^4");
        assert_eq!(Word::parse("phi21* * phi32* * phi31*^-1").unwrap().letters()[2].name, "phi31*");
        assert!(Word::parse("id").unwrap().is_empty());
        assert!(Word::parse("A^x").is_err());
        assert!(Word::parse("A *").is_err());
        assert!(Word::parse("A*B").is_err());
        assert_eq!(swapped_indices("phi13").as_deref(), Some("phi31"));
        assert_eq!(swapped_indices("phi31*").as_deref(), Some("phi13*"));
        assert_eq!(swapped_indices("Tx"), None);
    }

    #[test]
    fn composability_is_checked() {
        let a = ExactMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]);
        let resolve = |n: &str| match n {
            "p12" => Some(Generator { matrix: &a, endpoints: Some(("o1", "o2")) }),
            "L" => Some(Generator { matrix: &a, endpoints: None }),
            _ => None,
        };
        let (m, span) = Word::parse("p12^-1 * L * p12").unwrap().evaluate(2, resolve).unwrap();
        assert_eq!(m, a);
        assert_eq!(span, Some(("o1".into(), "o1".into())));
        assert!(matches!(Word::parse("p12 * p12").unwrap().evaluate(2, resolve), Err(Error::NotComposable(_))));
        assert!(matches!(Word::parse("p12^2").unwrap().evaluate(2, resolve), Err(Error::NotComposable(_))));
        let (inv, _) = Word::parse("p21").unwrap().evaluate(2, resolve).unwrap();
        assert_eq!(inv, a.inverse().unwrap());
        assert!(matches!(Word::parse("q").unwrap().evaluate(2, resolve), Err(Error::UnknownGenerator(_))));
    }
}
