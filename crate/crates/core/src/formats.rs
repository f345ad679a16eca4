//! JSON file formats for families, actions, metric spaces, complexes, space
//! descriptors and bound reports.
//!
//! Emitted JSON is canonical: point ids inside a set are sorted, sets keep
//! their family order, rationals are `"p/q"` strings, and documents are
//! pretty-printed with a trailing newline.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::PermutationAction;
use crate::bounds::{
    BoundsError, ComplexRef, EquivariantFlags, GroupClass, GroupDescriptor, Interval, Quantity, Report, RuleId,
    SpaceDescriptor, Structure, TraceEntry,
};
use crate::complex::{ComplexError, SimplicialComplex};
use crate::cover::{CoverError, GroundSet, IndexedFamily, PointSet, Tag, WitnessPiece};
use crate::nerve::{format_rational, parse_rational, FiniteMetricSpace, MetricError};
use crate::ring::{tensor_square, RingError, RingPresentation, ZeroDivisorCupLength};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read `{path}`: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("{0}")]
    Invalid(String),
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("format types serialize infallibly");
    s.push('\n');
    s
}

fn sorted_ids(ground: &GroundSet, set: &PointSet) -> Vec<String> {
    let mut ids = ground.ids_of(set);
    ids.sort();
    ids
}

pub fn read_file(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

// ---------------------------------------------------------------- families

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PieceJson {
    piece: Vec<String>,
    origin: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyJson {
    points: Vec<String>,
    sets: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tags: Option<Vec<Option<Tag>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witnesses: Option<Vec<Option<Vec<PieceJson>>>>,
}

pub fn family_to_json(family: &IndexedFamily) -> String {
    let ground = family.ground();
    let doc = FamilyJson {
        points: ground.points().to_vec(),
        sets: family.sets().iter().map(|s| sorted_ids(ground, s)).collect(),
        tags: family.tags().map(<[_]>::to_vec),
        witnesses: family.witnesses().map(|ws| {
            ws.iter()
                .map(|w| {
                    w.as_ref().map(|pieces| {
                        pieces
                            .iter()
                            .map(|p| PieceJson { piece: sorted_ids(ground, &p.piece), origin: p.origin })
                            .collect()
                    })
                })
                .collect()
        }),
    };
    to_pretty(&doc)
}

pub fn family_from_json(text: &str) -> Result<IndexedFamily, FormatError> {
    let doc: FamilyJson = serde_json::from_str(text)?;
    let ground = GroundSet::new(doc.points)?;
    let mut family = IndexedFamily::from_ids(ground.clone(), &doc.sets)?;
    if let Some(tags) = doc.tags {
        family = family.with_tags(tags)?;
    }
    if let Some(witnesses) = doc.witnesses {
        let parsed = witnesses
            .into_iter()
            .map(|w| {
                w.map(|pieces| {
                    pieces
                        .into_iter()
                        .map(|p| Ok(WitnessPiece { piece: ground.subset(&p.piece)?, origin: p.origin }))
                        .collect::<Result<Vec<_>, CoverError>>()
                })
                .transpose()
            })
            .collect::<Result<Vec<_>, _>>()?;
        family = family.with_witnesses(parsed)?;
    }
    Ok(family)
}

// ---------------------------------------------------------------- actions

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionJson {
    points: Vec<String>,
    generators: Vec<Vec<String>>,
}

pub fn action_to_json(action: &PermutationAction) -> String {
    let ground = action.ground();
    let doc = ActionJson {
        points: ground.points().to_vec(),
        generators: action.generators().iter().map(|g| g.iter().map(|&i| ground.id(i).to_string()).collect()).collect(),
    };
    to_pretty(&doc)
}

pub fn action_from_json(text: &str) -> Result<PermutationAction, FormatError> {
    let doc: ActionJson = serde_json::from_str(text)?;
    let ground = GroundSet::new(doc.points)?;
    Ok(PermutationAction::from_ids(ground, &doc.generators)?)
}

/// Reads an action and checks it acts on the same points as `family`.
pub fn action_for_family(text: &str, family: &IndexedFamily) -> Result<PermutationAction, FormatError> {
    let action = action_from_json(text)?;
    if action.ground() != family.ground() {
        return Err(CoverError::GroundMismatch.into());
    }
    Ok(action)
}

// ---------------------------------------------------------------- metric spaces

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricJson {
    points: Vec<String>,
    dist: Vec<Vec<String>>,
}

pub fn metric_to_json(space: &FiniteMetricSpace) -> String {
    let doc = MetricJson {
        points: space.points().points().to_vec(),
        dist: space.distances().iter().map(|row| row.iter().map(format_rational).collect()).collect(),
    };
    to_pretty(&doc)
}

pub fn metric_from_json(text: &str) -> Result<FiniteMetricSpace, FormatError> {
    let doc: MetricJson = serde_json::from_str(text)?;
    let ground = GroundSet::new(doc.points)?;
    let dist = doc
        .dist
        .iter()
        .map(|row| row.iter().map(|v| parse_rational(v)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FiniteMetricSpace::new(ground, dist)?)
}

// ---------------------------------------------------------------- complexes

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexJson {
    vertices: usize,
    facets: Vec<Vec<usize>>,
}

pub fn complex_to_json(complex: &SimplicialComplex) -> String {
    to_pretty(&ComplexJson { vertices: complex.vertex_count(), facets: complex.facets().to_vec() })
}

pub fn complex_from_json(text: &str) -> Result<SimplicialComplex, FormatError> {
    let doc: ComplexJson = serde_json::from_str(text)?;
    Ok(SimplicialComplex::new(doc.vertices, doc.facets)?)
}

// ---------------------------------------------------------------- rings

#[derive(Serialize)]
struct ProductJson {
    left: String,
    right: String,
    result: Vec<String>,
}

#[derive(Serialize)]
struct CohomologyJson {
    betti: Vec<usize>,
    basis: Vec<Vec<String>>,
    unit: Option<String>,
    products: Vec<ProductJson>,
}

fn terms(ring: &RingPresentation, v: &crate::gf2::BitVector) -> Vec<String> {
    v.ones().map(|i| ring.label(i).to_string()).collect()
}

/// Betti numbers and the cup product table of a cohomology ring.
pub fn cohomology_to_json(betti: &[usize], ring: &RingPresentation) -> String {
    let doc = CohomologyJson {
        betti: betti.to_vec(),
        basis: ring.basis_by_degree().iter().map(|d| d.iter().map(|&i| ring.label(i).to_string()).collect()).collect(),
        unit: (ring.dim() > 0).then(|| ring.label(ring.unit()).to_string()),
        products: ring
            .nonzero_products()
            .into_iter()
            .filter(|&(i, j, _)| i <= j)
            .map(|(i, j, v)| ProductJson {
                left: ring.label(i).to_string(),
                right: ring.label(j).to_string(),
                result: terms(ring, v),
            })
            .collect(),
    };
    to_pretty(&doc)
}

#[derive(Serialize)]
struct ZclJson {
    zcl: usize,
    factors: Vec<String>,
    product: Option<String>,
}

pub fn zcl_to_json(ring: &RingPresentation, result: &ZeroDivisorCupLength) -> String {
    let square = tensor_square(ring);
    let doc = ZclJson {
        zcl: result.length,
        factors: result.factors.iter().map(|f| square.format_element(f)).collect(),
        product: result.product.as_ref().map(|p| square.format_element(p)),
    };
    to_pretty(&doc)
}

// ---------------------------------------------------------------- space descriptors

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupJson {
    name: String,
    class: GroupClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cd: Option<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum StructureJson {
    Product { base: Box<SpaceJson>, fiber: Box<SpaceJson> },
    Twisted { base: Box<SpaceJson>, fiber: Box<SpaceJson>, group: GroupJson },
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct SpaceJson {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<u64>,
    group: GroupJson,
    aspherical: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    complex: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    structure: Option<StructureJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    equivariant_flags: Option<EquivariantFlags>,
}

impl From<&GroupDescriptor> for GroupJson {
    fn from(g: &GroupDescriptor) -> Self {
        GroupJson { name: g.name.clone(), class: g.class, cd: g.cd }
    }
}

impl From<GroupJson> for GroupDescriptor {
    fn from(g: GroupJson) -> Self {
        GroupDescriptor::new(g.name, g.class, g.cd)
    }
}

fn space_to_doc(d: &SpaceDescriptor) -> Result<SpaceJson, FormatError> {
    let complex = match &d.complex {
        None => None,
        Some(ComplexRef { path: Some(p), .. }) => Some(p.clone()),
        Some(ComplexRef { path: None, .. }) => {
            return Err(FormatError::Invalid(format!("complex of `{}` has no file path to reference", d.name)));
        }
    };
    let structure = match &d.structure {
        None => None,
        Some(Structure::Product { base, fiber }) => {
            Some(StructureJson::Product { base: Box::new(space_to_doc(base)?), fiber: Box::new(space_to_doc(fiber)?) })
        }
        Some(Structure::Twisted { base, fiber, group }) => Some(StructureJson::Twisted {
            base: Box::new(space_to_doc(base)?),
            fiber: Box::new(space_to_doc(fiber)?),
            group: group.into(),
        }),
    };
    Ok(SpaceJson {
        name: d.name.clone(),
        dim: d.dim,
        group: (&d.group).into(),
        aspherical: d.aspherical,
        complex,
        structure,
        equivariant_flags: d.equivariant_flags,
    })
}

/// Serializes a descriptor; attached complexes must carry the path they were read from.
pub fn space_to_json(descriptor: &SpaceDescriptor) -> Result<String, FormatError> {
    Ok(to_pretty(&space_to_doc(descriptor)?))
}

fn space_from_doc(
    doc: SpaceJson,
    resolve: &mut dyn FnMut(&str) -> Result<SimplicialComplex, FormatError>,
) -> Result<SpaceDescriptor, FormatError> {
    let complex = match doc.complex {
        None => None,
        Some(path) => Some(ComplexRef { complex: resolve(&path)?, path: Some(path) }),
    };
    let structure = match doc.structure {
        None => None,
        Some(StructureJson::Product { base, fiber }) => Some(Structure::Product {
            base: Box::new(space_from_doc(*base, resolve)?),
            fiber: Box::new(space_from_doc(*fiber, resolve)?),
        }),
        Some(StructureJson::Twisted { base, fiber, group }) => Some(Structure::Twisted {
            base: Box::new(space_from_doc(*base, resolve)?),
            fiber: Box::new(space_from_doc(*fiber, resolve)?),
            group: group.into(),
        }),
    };
    let descriptor = SpaceDescriptor {
        name: doc.name,
        dim: doc.dim,
        group: doc.group.into(),
        aspherical: doc.aspherical,
        complex,
        structure,
        equivariant_flags: doc.equivariant_flags,
    };
    descriptor.validate()?;
    Ok(descriptor)
}

/// Parses a space descriptor; `resolve` loads the complex file named by each `"complex"` path.
pub fn space_from_json(
    text: &str,
    resolve: &mut dyn FnMut(&str) -> Result<SimplicialComplex, FormatError>,
) -> Result<SpaceDescriptor, FormatError> {
    space_from_doc(serde_json::from_str(text)?, resolve)
}

/// Reads a space descriptor file, resolving complex paths relative to its directory.
pub fn space_from_path(path: &Path) -> Result<SpaceDescriptor, FormatError> {
    let text = read_file(path)?;
    let dir: PathBuf = path.parent().map(Path::to_path_buf).unwrap_or_default();
    space_from_json(&text, &mut |p| complex_from_json(&read_file(&dir.join(p))?))
}

// ---------------------------------------------------------------- reports

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum UpperJson {
    Finite(u64),
    Infinite(Infinity),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub(crate) enum Infinity {
    #[serde(rename = "inf")]
    Inf,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntervalJson {
    lo: u64,
    hi: UpperJson,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ValueJson {
    quantity: String,
    lo: u64,
    hi: UpperJson,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResultJson {
    quantity: String,
    lo: u64,
    hi: UpperJson,
    tightened: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceJson {
    rule: String,
    inputs: Vec<ValueJson>,
    result: ResultJson,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReportJson {
    facts: BTreeMap<String, IntervalJson>,
    trace: Vec<TraceJson>,
    assumptions: Vec<String>,
}

pub(crate) fn upper(i: &Interval) -> UpperJson {
    i.hi().map_or(UpperJson::Infinite(Infinity::Inf), UpperJson::Finite)
}

pub(crate) fn interval(lo: u64, hi: UpperJson) -> Result<Interval, FormatError> {
    let hi = match hi {
        UpperJson::Finite(h) => Some(h),
        UpperJson::Infinite(_) => None,
    };
    Interval::new(lo, hi).ok_or_else(|| FormatError::Invalid(format!("empty interval with lo {lo}")))
}

pub fn report_to_json(report: &Report) -> String {
    let doc = ReportJson {
        facts: report.facts.iter().map(|(q, i)| (q.to_string(), IntervalJson { lo: i.lo(), hi: upper(i) })).collect(),
        trace: report
            .trace
            .iter()
            .map(|e| TraceJson {
                rule: e.rule.to_string(),
                inputs: e
                    .inputs
                    .iter()
                    .map(|(q, i)| ValueJson { quantity: q.to_string(), lo: i.lo(), hi: upper(i) })
                    .collect(),
                result: ResultJson {
                    quantity: e.target.to_string(),
                    lo: e.candidate.lo(),
                    hi: upper(&e.candidate),
                    tightened: e.tightened,
                    note: e.note.clone(),
                },
            })
            .collect(),
        assumptions: report.assumptions.clone(),
    };
    to_pretty(&doc)
}

pub fn report_from_json(text: &str) -> Result<Report, FormatError> {
    let doc: ReportJson = serde_json::from_str(text)?;
    let facts = doc
        .facts
        .into_iter()
        .map(|(k, v)| Ok((k.parse::<Quantity>()?, interval(v.lo, v.hi)?)))
        .collect::<Result<BTreeMap<_, _>, FormatError>>()?;
    let trace = doc
        .trace
        .into_iter()
        .map(|t| {
            let inputs = t
                .inputs
                .into_iter()
                .map(|v| Ok((v.quantity.parse::<Quantity>()?, interval(v.lo, v.hi)?)))
                .collect::<Result<Vec<_>, FormatError>>()?;
            Ok(TraceEntry {
                rule: t.rule.parse::<RuleId>()?,
                inputs,
                target: t.result.quantity.parse()?,
                candidate: interval(t.result.lo, t.result.hi)?,
                tightened: t.result.tightened,
                note: t.result.note,
            })
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    Ok(Report { facts, trace, assumptions: doc.assumptions })
}

/// Parses `KEY=LO..HI` (with `HI` possibly `inf`) as used for command-line assertions.
pub fn parse_assertion(s: &str) -> Result<(Quantity, Interval), FormatError> {
    let bad = || FormatError::Invalid(format!("assertion `{s}` is not of the form KEY=LO..HI"));
    let (key, range) = s.rsplit_once('=').ok_or_else(bad)?;
    let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi = match hi.trim() {
        "inf" => UpperJson::Infinite(Infinity::Inf),
        h => UpperJson::Finite(h.parse().map_err(|_| bad())?),
    };
    Ok((key.trim().parse()?, interval(lo, hi)?))
}
