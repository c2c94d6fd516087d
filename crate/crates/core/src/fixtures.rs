//! Reference constants produced by `fixtures/oracle.py`.
//!
//! Same `key = value` format as the run config, with a `provenance.<key>`
//! twin for every entry. The table keeps the raw value text and the comment
//! lines so that [`FixtureTable::emit`] reproduces a canonical file byte for
//! byte.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The shipped fixture file.
pub const REFERENCE_KV: &str = include_str!("../fixtures/reference.kv");

const PROVENANCE_PREFIX: &str = "provenance.";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProvenanceTag {
    Paper,
    Trivial,
    Derived,
}

impl FromStr for ProvenanceTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "PAPER" => Ok(Self::Paper),
            "TRIVIAL" => Ok(Self::Trivial),
            "DERIVED" => Ok(Self::Derived),
            other => Err(Error::Parse(format!("unknown provenance tag `{other}`"))),
        }
    }
}

impl fmt::Display for ProvenanceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Paper => "PAPER",
            Self::Trivial => "TRIVIAL",
            Self::Derived => "DERIVED",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub name: String,
    pub value: f64,
    /// Value text exactly as stored.
    pub raw: String,
    pub tag: ProvenanceTag,
    /// Oracle description after the tag.
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Line {
    Comment(String),
    Blank,
    Value(String),
    Provenance(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureTable {
    lines: Vec<Line>,
    entries: Vec<Fixture>,
}

fn parse_err(line: usize, msg: impl fmt::Display) -> Error {
    Error::Parse(format!("fixture line {line}: {msg}"))
}

impl FixtureTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Vec::new();
        let mut values: Vec<(String, String, usize)> = Vec::new();
        let mut provenance: Vec<(String, String)> = Vec::new();
        for (i, l) in text.lines().enumerate() {
            let line = i + 1;
            if l.trim().is_empty() {
                lines.push(Line::Blank);
                continue;
            }
            if l.starts_with('#') {
                lines.push(Line::Comment(l.to_string()));
                continue;
            }
            let (key, value) = l
                .split_once(" = ")
                .ok_or_else(|| parse_err(line, "expected `key = value`"))?;
            if let Some(name) = key.strip_prefix(PROVENANCE_PREFIX) {
                provenance.push((name.to_string(), value.to_string()));
                lines.push(Line::Provenance(name.to_string()));
            } else {
                if values.iter().any(|(k, _, _)| k == key) {
                    return Err(parse_err(line, format!("duplicate fixture `{key}`")));
                }
                values.push((key.to_string(), value.to_string(), line));
                lines.push(Line::Value(key.to_string()));
            }
        }
        let mut entries = Vec::with_capacity(values.len());
        for (name, raw, line) in values {
            let value: f64 = raw
                .parse()
                .map_err(|_| parse_err(line, format!("`{raw}` is not a number")))?;
            let (_, prov) = provenance
                .iter()
                .find(|(k, _)| *k == name)
                .ok_or_else(|| parse_err(line, format!("`{name}` has no provenance")))?;
            let (tag, desc) = prov
                .split_once(": ")
                .ok_or_else(|| parse_err(line, format!("provenance of `{name}` lacks a tag")))?;
            entries.push(Fixture {
                name,
                value,
                raw,
                tag: tag.parse()?,
                provenance: desc.to_string(),
            });
        }
        if let Some((orphan, _)) = provenance
            .iter()
            .find(|(k, _)| !entries.iter().any(|e| e.name == *k))
        {
            return Err(Error::Parse(format!(
                "provenance for missing fixture `{orphan}`"
            )));
        }
        Ok(Self { lines, entries })
    }

    pub fn reference() -> Self {
        Self::parse(REFERENCE_KV).expect("shipped fixture file parses")
    }

    pub fn get(&self, name: &str) -> Result<&Fixture> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::Lookup(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name.as_str())
    }

    pub fn emit(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            match line {
                Line::Comment(c) => out.push_str(c),
                Line::Blank => {}
                Line::Value(name) => {
                    let e = self.get(name).expect("line refers to a parsed entry");
                    out.push_str(&format!("{} = {}", e.name, e.raw));
                }
                Line::Provenance(name) => {
                    let e = self.get(name).expect("line refers to a parsed entry");
                    out.push_str(&format!(
                        "{PROVENANCE_PREFIX}{} = {}: {}",
                        e.name, e.tag, e.provenance
                    ));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Value and provenance of a shipped fixture.
pub fn load_fixture(name: &str) -> Result<Fixture> {
    FixtureTable::reference().get(name).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups() {
        let c = load_fixture("C_00").unwrap();
        assert!((c.value - 0.797_884_560_802_865_4).abs() < 1e-16);
        assert_eq!(c.tag, ProvenanceTag::Derived);
        assert_eq!(load_fixture("q_electron_0_1_minus").unwrap().value, 2.0);
        assert!(matches!(load_fixture("missing"), Err(Error::Lookup(_))));
    }

    #[test]
    fn round_trip_is_byte_identical() {
        assert_eq!(FixtureTable::reference().emit(), REFERENCE_KV);
    }

    #[test]
    fn malformed_tables_rejected() {
        assert!(FixtureTable::parse("a = 1\n").is_err());
        assert!(FixtureTable::parse("a = x\nprovenance.a = TRIVIAL: t\n").is_err());
        assert!(FixtureTable::parse("a = 1\nprovenance.a = GUESS: t\n").is_err());
        assert!(FixtureTable::parse("provenance.a = TRIVIAL: t\n").is_err());
    }
}
