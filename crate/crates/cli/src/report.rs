//! Check records, summary counts, and their JSON and text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

/// Verdict of a single check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    /// The computation is consistent but a printed value disagrees with it.
    Flagged,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Pass => "PASS",
            Self::Flagged => "FLAGGED",
            Self::Fail => "FAIL",
        }
    }
}

/// One check: a stable id, the statement it verifies, the verdict and its witnesses.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub witness: BTreeMap<String, String>,
}

impl Record {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, status: Status) -> Self {
        Self { id: id.into(), anchor: anchor.into(), status, witness: BTreeMap::new() }
    }

    pub fn check(id: impl Into<String>, anchor: impl Into<String>, ok: bool) -> Self {
        Self::new(id, anchor, Status::from_bool(ok))
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.witness.insert(key.into(), value.to_string());
        self
    }

    /// A failed record carrying the error that stopped the check.
    pub fn error(id: impl Into<String>, anchor: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Self::new(id, anchor, Status::Fail).with("error", err)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub flagged: usize,
    pub fail: usize,
}

/// All records of a verification run on one case, in execution order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub case: String,
    pub suite: String,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    pub fn new(case: &str, suite: &str) -> Self {
        Self { case: case.into(), suite: suite.into(), records: Vec::new(), summary: Summary::default() }
    }

    pub fn push(&mut self, r: Record) {
        match r.status {
            Status::Pass => self.summary.pass += 1,
            Status::Flagged => self.summary.flagged += 1,
            Status::Fail => self.summary.fail += 1,
        }
        self.records.push(r);
    }

    pub fn extend(&mut self, rs: impl IntoIterator<Item = Record>) {
        for r in rs {
            self.push(r);
        }
    }

    pub fn get(&self, id: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.id == id)
    }

    /// Records whose id starts with `prefix`.
    pub fn with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a Record> + 'a {
        self.records.iter().filter(move |r| r.id.starts_with(prefix))
    }

    /// The worst status, or `Pass` for an empty report.
    pub fn status(&self) -> Status {
        self.records.iter().map(|r| r.status).max().unwrap_or(Status::Pass)
    }

    /// 0 all pass, 1 any failure, 3 flagged records only.
    pub fn exit_code(&self) -> i32 {
        match self.status() {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Flagged => 3,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per record, then the summary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "case {} suite {}", self.case, self.suite);
        for r in &self.records {
            let _ = write!(out, "{:<8} {}  {}", r.status.label(), r.id, r.anchor);
            if !r.witness.is_empty() {
                let w: Vec<String> = r.witness.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = write!(out, "  [{}]", w.join("; "));
            }
            out.push('\n');
        }
        let s = &self.summary;
        let _ = writeln!(out, "summary: {} pass, {} flagged, {} fail", s.pass, s.flagged, s.fail);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_follows_the_worst_status() {
        let mut r = Report::new("k3", "relations");
        assert_eq!(r.exit_code(), 0);
        r.push(Record::check("a", "first", true));
        assert_eq!(r.exit_code(), 0);
        r.push(Record::new("b", "second", Status::Flagged));
        assert_eq!(r.exit_code(), 3);
        r.push(Record::check("c", "third", false));
        assert_eq!(r.exit_code(), 1);
        assert_eq!(r.summary, Summary { pass: 1, flagged: 1, fail: 1 });
    }

    #[test]
    fn text_and_json_list_the_same_records() {
        let mut r = Report::new("p3p3", "gluing");
        r.push(Record::check("x", "an identity", true).with("n", 3).with("det", "-1"));
        let text = r.to_text();
        assert!(text.contains("PASS     x  an identity  [det=-1; n=3]"));
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["records"][0]["status"], "pass");
        assert_eq!(json["records"][0]["witness"]["n"], "3");
        assert_eq!(json["summary"]["pass"], 1);
    }
}
