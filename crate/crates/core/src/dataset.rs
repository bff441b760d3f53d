//! Monodromy datasets: printed matrices, derived words, boundary points, relations and
//! expected values, stored as JSON with exact rational entries.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{dual_action, format_rat, parse_rat, unipotent_log, BilinearForm, ExactMatrix, Parity, Rat};
use crate::word::{Generator, Word};

/// Matrix rows as canonical rational strings.
pub type Entries = Vec<Vec<String>>;

/// The on-disk schema; field order is the canonical serialization order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetFile {
    pub name: String,
    pub description: String,
    pub dimension: usize,
    pub weight: usize,
    pub form: FormSpec,
    pub matrices: Vec<MatrixSpec>,
    pub derived: Vec<DerivedSpec>,
    pub points: Vec<PointSpec>,
    pub nilpotents: Vec<NilpotentSpec>,
    pub relations: Vec<RelationSpec>,
    pub couplings: Vec<CouplingSpec>,
    pub deltas: Vec<DeltaSpec>,
    #[serde(default)]
    pub prepotentials: Vec<PrepotentialSpec>,
    pub b_side: BSideSpec,
    pub a_side: ASideSpec,
    pub flags: Vec<FlagSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpec {
    pub parity: String,
    pub entries: Entries,
}

/// A printed matrix. `frame` is `"homology"` (converted to the cohomology action by
/// inverse transpose) or `"cohomology"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub name: String,
    pub frame: String,
    pub role: String,
    pub source: Option<String>,
    pub target: Option<String>,
    pub label: String,
    pub note: Option<String>,
    pub entries: Entries,
}

/// A matrix defined by a word in earlier names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivedSpec {
    pub name: String,
    pub word: String,
    pub role: String,
    pub label: String,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub name: String,
    pub generators: Vec<String>,
    pub lcsl: bool,
    pub label: String,
}

/// `sum c_i log(M_i)` over `(c_i, M_i)` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NilpotentSpec {
    pub name: String,
    pub combination: Vec<(String, String)>,
    pub label: String,
}

/// The relation `lhs = rhs` between two words.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSpec {
    pub id: String,
    pub lhs: String,
    pub rhs: String,
    pub label: String,
}

/// Expected canonical coupling values for a pair of nilpotents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingSpec {
    pub id: String,
    pub generators: Vec<String>,
    pub values: Vec<String>,
    pub label: String,
}

/// `target - (c_1 base_1 + c_2 base_2)` with its printed value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaSpec {
    pub id: String,
    pub target: String,
    pub base: Vec<String>,
    pub coeffs: Vec<String>,
    pub printed: Entries,
    pub label: String,
}

/// Printed symmetric `Q` of the prepotential shift `(1/2) a^T Q a` across a connection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrepotentialSpec {
    pub id: String,
    pub connection: String,
    pub printed: Entries,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeSpec {
    pub label: String,
    pub generators: Vec<String>,
}

/// `lhs(n + lhs_shift) = rhs(n + rhs_shift)` for conjugates by the orbit matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentitySpec {
    pub lhs: String,
    pub lhs_shift: i64,
    pub rhs: String,
    pub rhs_shift: i64,
}

/// `g^-n N g^n = N` for all `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvarianceSpec {
    pub conjugator: String,
    pub nilpotent: String,
}

/// Data for the glued chain of nilpotent cones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BSideSpec {
    pub orbit_word: String,
    pub orbit_quotient: Entries,
    pub cones: Vec<ConeSpec>,
    pub closing_cone: Option<usize>,
    pub identities: Vec<IdentitySpec>,
    pub invariances: Vec<InvarianceSpec>,
    pub involutions: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSpec {
    pub name: String,
    pub classes: Vec<String>,
}

/// A pullback of divisor classes; columns are images of the source basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PullbackSpec {
    pub name: String,
    pub source: String,
    pub target: String,
    pub entries: Entries,
    pub label: String,
}

/// Divisor-class data of the birational models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ASideSpec {
    pub home: String,
    pub bases: Vec<BasisSpec>,
    pub maps: Vec<PullbackSpec>,
    pub orbit_word: String,
    pub orbit_expected: Entries,
    /// Words whose images of the source Kähler cone form the fundamental domain.
    pub chambers: Vec<String>,
    pub gram: Option<Entries>,
    pub dictionary: Entries,
    /// Whether the A-side values are derived rather than transcribed.
    pub derived: bool,
}

/// A printed value that disagrees with the computed one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagSpec {
    pub id: String,
    pub delta: String,
    pub row: usize,
    pub col: usize,
    pub printed: String,
    pub label: String,
    pub note: String,
}

/// Role of a named matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Monodromy,
    Connection,
    Exceptional,
    Permutation,
    PrintedTypo,
}

impl Role {
    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "monodromy" => Self::Monodromy,
            "connection" => Self::Connection,
            "exceptional" => Self::Exceptional,
            "permutation" => Self::Permutation,
            "printed-typo" => Self::PrintedTypo,
            _ => return Err(Error::Schema(format!("unknown role {s:?}"))),
        })
    }

    /// Whether matrices of this role must preserve the form.
    pub fn is_symplectic(self) -> bool {
        matches!(self, Self::Monodromy | Self::Connection | Self::Exceptional)
    }
}

/// A resolved named matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedMatrix {
    pub name: String,
    pub role: Role,
    /// Action on cohomology, used in all computations.
    pub matrix: ExactMatrix,
    /// The matrix as printed (homology or cohomology frame); `None` if derived.
    pub printed: Option<ExactMatrix>,
    pub endpoints: Option<(String, String)>,
    pub label: String,
    pub note: Option<String>,
}

/// A validated dataset with every matrix parsed exactly.
#[derive(Clone, Debug)]
pub struct Dataset {
    file: DatasetFile,
    form: BilinearForm,
    order: Vec<String>,
    matrices: BTreeMap<String, NamedMatrix>,
    nilpotents: BTreeMap<String, ExactMatrix>,
}

const BUNDLED: [(&str, &str); 3] = [
    ("p4p4", include_str!("../data/p4p4.json")),
    ("p3p3", include_str!("../data/p3p3.json")),
    ("k3", include_str!("../data/k3.json")),
];

/// Names of the bundled datasets.
pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

/// Parses a matrix of rational strings with a location for errors.
pub fn parse_entries(e: &Entries, rows: usize, cols: usize, at: &str) -> Result<ExactMatrix> {
    if e.len() != rows {
        return Err(Error::DimensionMismatch(format!("{at}: {} rows, expected {rows}", e.len())));
    }
    let mut out = Vec::with_capacity(rows);
    for (i, row) in e.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::DimensionMismatch(format!(
                "{at}: row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        let parsed: Vec<Rat> = row
            .iter()
            .enumerate()
            .map(|(j, s)| parse_rat(s).map_err(|_| Error::Parse(format!("{at}: entry ({i},{j}) {s:?}"))))
            .collect::<Result<_>>()?;
        out.push(parsed);
    }
    ExactMatrix::from_rows(out)
}

/// Canonical string rows of a matrix.
pub fn entries_of(m: &ExactMatrix) -> Entries {
    m.to_rows().iter().map(|r| r.iter().map(format_rat).collect()).collect()
}

fn canonical_entries(e: &Entries) -> Result<Entries> {
    e.iter()
        .map(|r| r.iter().map(|s| parse_rat(s).map(|v| format_rat(&v))).collect())
        .collect()
}

impl Dataset {
    /// One of the bundled datasets by name.
    pub fn bundled(name: &str) -> Result<Self> {
        let (_, text) = BUNDLED
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::Schema(format!("no bundled dataset {name:?}")))?;
        Self::from_json(text)
    }

    /// Raw JSON text of a bundled dataset.
    pub fn bundled_text(name: &str) -> Option<&'static str> {
        BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DatasetFile = serde_json::from_str(text).map_err(|e| {
            let msg = format!("line {}, column {}: {e}", e.line(), e.column());
            if e.is_data() {
                Error::Schema(msg)
            } else {
                Error::Parse(msg)
            }
        })?;
        Self::from_file(file)
    }

    /// Validates a schema value: parses every matrix, evaluates derived words and
    /// nilpotents, and checks that every referenced name exists.
    pub fn from_file(mut file: DatasetFile) -> Result<Self> {
        let dim = file.dimension;
        let parity = match file.form.parity.as_str() {
            "antisymmetric" => Parity::Antisymmetric,
            "symmetric" => Parity::Symmetric,
            p => return Err(Error::Schema(format!("unknown form parity {p:?}"))),
        };
        let form = BilinearForm::new(parse_entries(&file.form.entries, dim, dim, "form")?, parity)?;
        let mut ds = Self {
            file: file.clone(),
            form,
            order: Vec::new(),
            matrices: BTreeMap::new(),
            nilpotents: BTreeMap::new(),
        };
        for spec in &mut file.matrices {
            let at = format!("matrices[{}]", spec.name);
            let printed = parse_entries(&spec.entries, dim, dim, &at)?;
            spec.entries = entries_of(&printed);
            let matrix = match spec.frame.as_str() {
                "homology" => dual_action(&printed)?,
                "cohomology" => printed.clone(),
                f => return Err(Error::Schema(format!("{at}: unknown frame {f:?}"))),
            };
            let endpoints = match (&spec.source, &spec.target) {
                (Some(s), Some(t)) => Some((s.clone(), t.clone())),
                (None, None) => None,
                _ => return Err(Error::Schema(format!("{at}: source and target must be given together"))),
            };
            ds.insert(NamedMatrix {
                name: spec.name.clone(),
                role: Role::parse(&spec.role)?,
                matrix,
                printed: Some(printed),
                endpoints,
                label: spec.label.clone(),
                note: spec.note.clone(),
            })?;
        }
        for spec in &file.derived {
            let (matrix, span) = ds.evaluate_with_span(&spec.word)?;
            let endpoints = span.filter(|(s, t)| s != t);
            ds.insert(NamedMatrix {
                name: spec.name.clone(),
                role: Role::parse(&spec.role)?,
                matrix,
                printed: None,
                endpoints,
                label: spec.label.clone(),
                note: spec.note.clone(),
            })?;
        }
        for spec in &file.nilpotents {
            let mut n = ExactMatrix::zeros(dim, dim);
            for (c, m) in &mut spec.combination.clone() {
                let c = parse_rat(c)?;
                let log = unipotent_log(ds.matrix(m)?)?;
                n = n.checked_add(&log.scale(&c))?;
            }
            if ds.nilpotents.insert(spec.name.clone(), n).is_some() {
                return Err(Error::Schema(format!("duplicate nilpotent {:?}", spec.name)));
            }
        }
        for c in &mut file.nilpotents {
            for (coef, _) in &mut c.combination {
                *coef = format_rat(&parse_rat(coef)?);
            }
        }
        for p in &file.points {
            for g in &p.generators {
                ds.matrix(g)?;
            }
        }
        for r in &file.relations {
            Word::parse(&r.lhs)?;
            Word::parse(&r.rhs)?;
        }
        for c in &mut file.couplings {
            for g in &c.generators {
                ds.nilpotent(g)?;
            }
            c.values = c.values.iter().map(|v| parse_rat(v).map(|x| format_rat(&x))).collect::<Result<_>>()?;
        }
        for d in &mut file.deltas {
            ds.nilpotent(&d.target)?;
            if d.base.len() != 2 || d.coeffs.len() != 2 {
                return Err(Error::Schema(format!("delta {:?} needs two base nilpotents", d.id)));
            }
            for b in &d.base {
                ds.nilpotent(b)?;
            }
            parse_entries(&d.printed, dim, dim, &format!("deltas[{}]", d.id))?;
            d.printed = canonical_entries(&d.printed)?;
            d.coeffs = d.coeffs.iter().map(|v| parse_rat(v).map(|x| format_rat(&x))).collect::<Result<_>>()?;
        }
        for q in &mut file.prepotentials {
            ds.matrix(&q.connection)?;
            let r = dim / 2 - 1;
            parse_entries(&q.printed, r, r, &format!("prepotentials[{}]", q.id))?;
            q.printed = canonical_entries(&q.printed)?;
        }
        let b = &mut file.b_side;
        Word::parse(&b.orbit_word)?;
        parse_entries(&b.orbit_quotient, 2, 2, "b_side.orbit_quotient")?;
        b.orbit_quotient = canonical_entries(&b.orbit_quotient)?;
        for c in &b.cones {
            for g in &c.generators {
                ds.nilpotent(g)?;
            }
        }
        if let Some(k) = b.closing_cone {
            if k >= b.cones.len() {
                return Err(Error::Schema(format!("closing cone {k} out of range")));
            }
        }
        for id in &b.identities {
            ds.nilpotent(&id.lhs)?;
            ds.nilpotent(&id.rhs)?;
        }
        for inv in &b.invariances {
            ds.matrix(&inv.conjugator)?;
            ds.nilpotent(&inv.nilpotent)?;
        }
        for g in &b.involutions {
            ds.matrix(g)?;
        }
        let a = &mut file.a_side;
        for m in &mut a.maps {
            parse_entries(&m.entries, 2, 2, &format!("a_side.maps[{}]", m.name))?;
            m.entries = canonical_entries(&m.entries)?;
            for basis in [&m.source, &m.target] {
                if !a.bases.iter().any(|b| &b.name == basis) {
                    return Err(Error::Schema(format!("map {:?} refers to unknown basis {basis:?}", m.name)));
                }
            }
        }
        parse_entries(&a.orbit_expected, 2, 2, "a_side.orbit_expected")?;
        a.orbit_expected = canonical_entries(&a.orbit_expected)?;
        parse_entries(&a.dictionary, 2, 2, "a_side.dictionary")?;
        a.dictionary = canonical_entries(&a.dictionary)?;
        if let Some(g) = &mut a.gram {
            parse_entries(g, 2, 2, "a_side.gram")?;
            *g = canonical_entries(g)?;
        }
        for f in &file.flags {
            if !file.deltas.iter().any(|d| d.id == f.delta) {
                return Err(Error::Schema(format!("flag {:?} refers to unknown delta {:?}", f.id, f.delta)));
            }
            parse_rat(&f.printed)?;
        }
        file.form.entries = canonical_entries(&file.form.entries)?;
        ds.file = file;
        Ok(ds)
    }

    fn insert(&mut self, m: NamedMatrix) -> Result<()> {
        let name = m.name.clone();
        if self.matrices.insert(name.clone(), m).is_some() {
            return Err(Error::Schema(format!("duplicate matrix name {name:?}")));
        }
        self.order.push(name);
        Ok(())
    }

    /// Canonical JSON text; loading it back gives byte-identical output.
    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.file).expect("dataset serializes");
        s.push('\n');
        s
    }

    pub fn file(&self) -> &DatasetFile {
        &self.file
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn dimension(&self) -> usize {
        self.file.dimension
    }

    pub fn weight(&self) -> usize {
        self.file.weight
    }

    pub fn form(&self) -> &BilinearForm {
        &self.form
    }

    /// All named matrices in declaration order.
    pub fn matrices(&self) -> impl Iterator<Item = &NamedMatrix> {
        self.order.iter().map(|n| &self.matrices[n])
    }

    pub fn named(&self, name: &str) -> Result<&NamedMatrix> {
        self.matrices.get(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Cohomology action of a named matrix.
    pub fn matrix(&self, name: &str) -> Result<&ExactMatrix> {
        Ok(&self.named(name)?.matrix)
    }

    pub fn nilpotent(&self, name: &str) -> Result<&ExactMatrix> {
        self.nilpotents.get(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Evaluates a word over the named matrices.
    pub fn evaluate(&self, word: &str) -> Result<ExactMatrix> {
        Ok(self.evaluate_with_span(word)?.0)
    }

    pub fn evaluate_word(&self, word: &Word) -> Result<(ExactMatrix, Option<(String, String)>)> {
        word.evaluate(self.dimension(), |n| {
            self.matrices.get(n).map(|m| Generator {
                matrix: &m.matrix,
                endpoints: m.endpoints.as_ref().map(|(s, t)| (s.as_str(), t.as_str())),
            })
        })
    }

    fn evaluate_with_span(&self, word: &str) -> Result<(ExactMatrix, Option<(String, String)>)> {
        self.evaluate_word(&Word::parse(word)?)
    }

    pub fn points(&self) -> &[PointSpec] {
        &self.file.points
    }

    pub fn point(&self, name: &str) -> Result<&PointSpec> {
        self.file
            .points
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| Error::Schema(format!("no boundary point {name:?} in {}", self.name())))
    }

    /// Monodromy matrices of a boundary point.
    pub fn point_generators(&self, name: &str) -> Result<Vec<ExactMatrix>> {
        self.point(name)?.generators.iter().map(|g| self.matrix(g).cloned()).collect()
    }

    pub fn relations(&self) -> &[RelationSpec] {
        &self.file.relations
    }

    pub fn couplings(&self) -> &[CouplingSpec] {
        &self.file.couplings
    }

    pub fn deltas(&self) -> &[DeltaSpec] {
        &self.file.deltas
    }

    pub fn prepotentials(&self) -> &[PrepotentialSpec] {
        &self.file.prepotentials
    }

    pub fn b_side(&self) -> &BSideSpec {
        &self.file.b_side
    }

    pub fn a_side(&self) -> &ASideSpec {
        &self.file.a_side
    }

    pub fn flags(&self) -> &[FlagSpec] {
        &self.file.flags
    }

    /// A copy of the schema value with one printed matrix replaced, for negative controls.
    pub fn file_with_matrix(&self, name: &str, m: &ExactMatrix) -> Result<DatasetFile> {
        let mut f = self.file.clone();
        let spec = f
            .matrices
            .iter_mut()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        spec.entries = entries_of(m);
        Ok(f)
    }
}
