//! Molecule files: line-oriented `key: field=value, ...` records.
//!
//! ```text
//! # comment
//! units: hbar=1, M=1
//! h2: De=4.7446, re=0.7416
//! co: De=11.2256, re=1.1283, M=6.8606
//! ```
//!
//! The optional `units` header sets `hbar` and `M` for every record and must
//! precede the first record; a record may override `M`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use pseudoharmonic::{MolecularParams, UnitSystem};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Molecule {
    pub params: MolecularParams,
    pub units: UnitSystem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoleculeError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl fmt::Display for MoleculeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(key) = &self.key {
            write!(f, "molecule `{key}`: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for MoleculeError {}

fn error(line: usize, key: Option<&str>, message: impl Into<String>) -> MoleculeError {
    MoleculeError {
        line: Some(line),
        key: key.map(str::to_owned),
        message: message.into(),
    }
}

fn valid_key(key: &str) -> bool {
    !key.is_empty()
        && key
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.' | '+'))
}

/// `field=value` pairs in file order.
fn fields(line_no: usize, key: &str, body: &str) -> Result<Vec<(String, f64)>, MoleculeError> {
    let mut out: Vec<(String, f64)> = Vec::new();
    for item in body.split(',') {
        let item = item.trim();
        let Some((name, value)) = item.split_once('=') else {
            return Err(error(
                line_no,
                Some(key),
                format!("expected `field=value`, got `{item}`"),
            ));
        };
        let name = name.trim();
        let value: f64 = value.trim().parse().map_err(|_| {
            error(
                line_no,
                Some(key),
                format!("`{name}` is not a number: `{}`", value.trim()),
            )
        })?;
        if out.iter().any(|(n, _)| n == name) {
            return Err(error(
                line_no,
                Some(key),
                format!("field `{name}` given twice"),
            ));
        }
        out.push((name.to_owned(), value));
    }
    Ok(out)
}

pub fn parse_molecules(text: &str) -> Result<BTreeMap<String, Molecule>, MoleculeError> {
    let mut units = UnitSystem::default();
    let mut seen_units = false;
    let mut molecules = BTreeMap::new();
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, body)) = line.split_once(':') else {
            return Err(error(
                line_no,
                None,
                format!("expected `key: field=value, ...`, got `{line}`"),
            ));
        };
        let key = key.trim();
        if !valid_key(key) {
            return Err(error(line_no, None, format!("invalid key `{key}`")));
        }
        let values = fields(line_no, key, body)?;
        let get = |name: &str| values.iter().find(|(n, _)| n == name).map(|&(_, v)| v);

        if key == "units" {
            if seen_units || !molecules.is_empty() {
                return Err(error(
                    line_no,
                    None,
                    "`units` header must appear once, before any record",
                ));
            }
            if let Some((name, _)) = values.iter().find(|(n, _)| n != "hbar" && n != "M") {
                return Err(error(
                    line_no,
                    None,
                    format!("unknown units field `{name}`"),
                ));
            }
            units = UnitSystem::new(get("hbar").unwrap_or(1.0), get("M").unwrap_or(1.0))
                .map_err(|e| error(line_no, None, e.to_string()))?;
            seen_units = true;
            continue;
        }

        if molecules.contains_key(key) {
            return Err(error(line_no, Some(key), "duplicate key"));
        }
        if let Some((name, _)) = values
            .iter()
            .find(|(n, _)| !matches!(n.as_str(), "De" | "re" | "M"))
        {
            return Err(error(line_no, Some(key), format!("unknown field `{name}`")));
        }
        let (Some(de), Some(re)) = (get("De"), get("re")) else {
            return Err(error(line_no, Some(key), "record needs both `De` and `re`"));
        };
        let params =
            MolecularParams::new(de, re).map_err(|e| error(line_no, Some(key), e.to_string()))?;
        let record_units = match get("M") {
            Some(mass) => UnitSystem::new(units.hbar(), mass)
                .map_err(|e| error(line_no, Some(key), e.to_string()))?,
            None => units,
        };
        molecules.insert(
            key.to_owned(),
            Molecule {
                params,
                units: record_units,
            },
        );
    }
    Ok(molecules)
}

pub fn load_molecules(path: &Path) -> Result<BTreeMap<String, Molecule>, MoleculeError> {
    let text = std::fs::read_to_string(path).map_err(|e| MoleculeError {
        line: None,
        key: None,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_molecules(&text)
}
