//! Curated space descriptors with expected bounds.
//!
//! Entries live in `data/catalog/*.json` and reference triangulations in
//! `data/complexes/`. Every expected value states where it comes from: the
//! bound rules, an internal oracle, or outside literature. Literature values
//! are kept apart and never gate [`Catalog::run_all`].

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;
use thiserror::Error;

use crate::bounds::{bounds_for, Interval, Quantity, SpaceDescriptor};
use crate::cohomology::cohomology_ring_z2;
use crate::complex::SimplicialComplex;
use crate::formats::{complex_from_json, interval, space_from_json, FormatError, UpperJson};
use crate::ring::zero_divisor_cup_length;

const ENTRIES: &[(&str, &str)] = &[
    ("point", include_str!("../data/catalog/point.json")),
    ("circle", include_str!("../data/catalog/circle.json")),
    ("torus7", include_str!("../data/catalog/torus7.json")),
    ("torus3", include_str!("../data/catalog/torus3.json")),
    ("wedge2circles", include_str!("../data/catalog/wedge2circles.json")),
    ("wedge3circles", include_str!("../data/catalog/wedge3circles.json")),
    ("circle_wedge_sphere", include_str!("../data/catalog/circle_wedge_sphere.json")),
    ("circle_times_wedge2", include_str!("../data/catalog/circle_times_wedge2.json")),
    ("T2xS2", include_str!("../data/catalog/T2xS2.json")),
    ("rudyak_cd2", include_str!("../data/catalog/rudyak_cd2.json")),
];

const COMPLEXES: &[(&str, &str)] = &[
    ("point.json", include_str!("../data/complexes/point.json")),
    ("circle.json", include_str!("../data/complexes/circle.json")),
    ("torus7.json", include_str!("../data/complexes/torus7.json")),
    ("torus3.json", include_str!("../data/complexes/torus3.json")),
    ("wedge2circles.json", include_str!("../data/complexes/wedge2circles.json")),
    ("wedge3circles.json", include_str!("../data/complexes/wedge3circles.json")),
    ("circle_wedge_sphere.json", include_str!("../data/complexes/circle_wedge_sphere.json")),
    ("circle_times_wedge2.json", include_str!("../data/complexes/circle_times_wedge2.json")),
];

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("no catalog entry named `{name}`; available: {available}")]
    Unknown { name: String, available: String },
    #[error("catalog entry `{name}`: {source}")]
    Format { name: String, source: FormatError },
}

/// Where an expected value comes from.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Follows from the bound rules.
    Rule(String),
    /// Computed by an internal exhaustive oracle.
    Oracle(String),
    /// Taken from outside literature; informational only.
    External(String),
}

impl Provenance {
    pub fn is_external(&self) -> bool {
        matches!(self, Provenance::External(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expected {
    pub interval: Interval,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedZcl {
    pub value: usize,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub descriptor: SpaceDescriptor,
    /// Values checked by [`Catalog::run_all`], unless marked external.
    pub expected: BTreeMap<Quantity, Expected>,
    /// Literature values, reported but never checked.
    pub external: BTreeMap<Quantity, Expected>,
    /// Zero-divisor cup length of the attached complex.
    pub zcl: Option<ExpectedZcl>,
    pub note: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpectedJson {
    lo: u64,
    hi: UpperJson,
    provenance: Provenance,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ZclJson {
    value: usize,
    provenance: Provenance,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryJson {
    name: String,
    space: serde_json::Value,
    expected: BTreeMap<String, ExpectedJson>,
    #[serde(default)]
    external: BTreeMap<String, ExpectedJson>,
    #[serde(default)]
    zcl: Option<ZclJson>,
    #[serde(default)]
    note: Option<String>,
}

fn expected_map(raw: BTreeMap<String, ExpectedJson>) -> Result<BTreeMap<Quantity, Expected>, FormatError> {
    raw.into_iter()
        .map(|(k, v)| Ok((k.parse()?, Expected { interval: interval(v.lo, v.hi)?, provenance: v.provenance })))
        .collect()
}

/// Parses one entry; `resolve` loads complex files named in the descriptor.
pub fn parse_entry(
    text: &str,
    resolve: &mut dyn FnMut(&str) -> Result<SimplicialComplex, FormatError>,
) -> Result<CatalogEntry, FormatError> {
    let raw: EntryJson = serde_json::from_str(text)?;
    let descriptor = space_from_json(&raw.space.to_string(), resolve)?;
    Ok(CatalogEntry {
        name: raw.name,
        descriptor,
        expected: expected_map(raw.expected)?,
        external: expected_map(raw.external)?,
        zcl: raw.zcl.map(|z| ExpectedZcl { value: z.value, provenance: z.provenance }),
        note: raw.note,
    })
}

fn builtin_complex(path: &str) -> Result<SimplicialComplex, FormatError> {
    let file = path.rsplit('/').next().unwrap_or(path);
    let text = COMPLEXES
        .iter()
        .find(|(name, _)| *name == file)
        .map(|(_, text)| *text)
        .ok_or_else(|| FormatError::Invalid(format!("no shipped complex `{path}`")))?;
    complex_from_json(text)
}

/// One failed comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mismatch {
    Bound { quantity: Quantity, expected: Interval, actual: Option<Interval> },
    Zcl { expected: usize, actual: Option<usize> },
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mismatch::Bound { quantity, expected, actual: Some(a) } => {
                write!(f, "{quantity}: expected {expected}, engine derived {a}")
            }
            Mismatch::Bound { quantity, expected, actual: None } => {
                write!(f, "{quantity}: expected {expected}, quantity not tracked")
            }
            Mismatch::Zcl { expected, actual: Some(a) } => write!(f, "zcl: expected {expected}, computed {a}"),
            Mismatch::Zcl { expected, actual: None } => write!(f, "zcl: expected {expected}, but no complex is attached"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryOutcome {
    pub name: String,
    pub mismatches: Vec<Mismatch>,
    /// Engine failure, if `bounds_for` itself returned an error.
    pub error: Option<String>,
}

impl EntryOutcome {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.error.is_none()
    }
}

/// Compares an entry's gated expectations with the engine and the zcl oracle.
pub fn check_entry(entry: &CatalogEntry) -> EntryOutcome {
    let mut outcome = EntryOutcome { name: entry.name.clone(), mismatches: Vec::new(), error: None };
    let report = match bounds_for(&entry.descriptor) {
        Ok(r) => r,
        Err(e) => {
            outcome.error = Some(e.to_string());
            return outcome;
        }
    };
    for (q, e) in entry.expected.iter().filter(|(_, e)| !e.provenance.is_external()) {
        let actual = report.get(q);
        if actual != Some(e.interval) {
            outcome.mismatches.push(Mismatch::Bound { quantity: q.clone(), expected: e.interval, actual });
        }
    }
    if let Some(z) = entry.zcl.as_ref().filter(|z| !z.provenance.is_external()) {
        let actual = entry
            .descriptor
            .complex
            .as_ref()
            .map(|c| zero_divisor_cup_length(&cohomology_ring_z2(&c.complex), None).length);
        if actual != Some(z.value) {
            outcome.mismatches.push(Mismatch::Zcl { expected: z.value, actual });
        }
    }
    outcome
}

#[derive(Clone, Debug, Default)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// The entries shipped in `data/catalog`.
    pub fn builtin() -> Result<Self, CatalogError> {
        let entries = ENTRIES
            .iter()
            .map(|(name, text)| {
                parse_entry(text, &mut |p| builtin_complex(p))
                    .map_err(|source| CatalogError::Format { name: name.to_string(), source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Catalog { entries })
    }

    pub fn from_entries(entries: Vec<CatalogEntry>) -> Self {
        Catalog { entries }
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }

    pub fn lookup(&self, name: &str) -> Result<&CatalogEntry, CatalogError> {
        self.entries.iter().find(|e| e.name == name).ok_or_else(|| CatalogError::Unknown {
            name: name.to_string(),
            available: self.names().join(", "),
        })
    }

    /// Checks every entry, in catalog order.
    pub fn run_all(&self) -> Vec<EntryOutcome> {
        self.entries.iter().map(check_entry).collect()
    }
}

/// Looks up a shipped entry by name.
pub fn lookup(name: &str) -> Result<CatalogEntry, CatalogError> {
    Catalog::builtin()?.lookup(name).cloned()
}

/// Checks every shipped entry.
pub fn run_all() -> Result<Vec<EntryOutcome>, CatalogError> {
    Ok(Catalog::builtin()?.run_all())
}
