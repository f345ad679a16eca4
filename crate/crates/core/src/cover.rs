//! k-covers of finite ground sets.
//!
//! A family of `m` subsets is a `k`-cover when every `k` of its members
//! already cover the ground set. On a finite set this is equivalent to the
//! order condition `Ord_x >= m - k + 1` at every point `x`, which is what
//! [`IndexedFamily::is_k_cover_fast`] checks; [`IndexedFamily::is_k_cover_oracle`]
//! enumerates subfamilies instead and exists to test the former.
//!
//! [`ostrand_extend`] lengthens an `(n + 1)`-element cover into an
//! `(n + 1)`-cover of any finite length, and [`product_cover`] combines two
//! covers of equal length into a cover of the product.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::PermutationAction;

/// Errors raised by the cover operations on malformed or out-of-contract input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("ground set must be nonempty")]
    EmptyGround,
    #[error("duplicate point id `{0}`")]
    DuplicatePoint(String),
    #[error("unknown point id `{0}`")]
    UnknownPoint(String),
    #[error("point index {index} outside a ground set of {size} points")]
    PointOutOfRange { index: usize, size: usize },
    #[error("k = {k} is out of range 1..={sets}")]
    KOutOfRange { k: usize, sets: usize },
    #[error("expected {expected} sets, found {found}")]
    WrongSetCount { expected: usize, found: usize },
    #[error("family does not cover point `{point}`")]
    NotACover { point: String },
    #[error("set {set} is not invariant under generator {generator}")]
    NotInvariant { set: usize, generator: usize },
    #[error("families are defined over different ground sets")]
    GroundMismatch,
    #[error("target length m = {m} is smaller than n = {n}")]
    TargetTooShort { n: usize, m: usize },
    #[error("expected {expected} {what}, found {found}")]
    LengthMismatch { what: &'static str, expected: usize, found: usize },
    #[error("product cover precondition failed: {0}")]
    ProductPrecondition(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
}

/// A subset of a ground set, stored as a bitset sized to the ground set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet(FixedBitSet);

impl PointSet {
    pub fn empty(size: usize) -> Self {
        PointSet(FixedBitSet::with_capacity(size))
    }

    pub fn full(size: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(size);
        bits.insert_range(..);
        PointSet(bits)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(size: usize, indices: I) -> Result<Self, CoverError> {
        let mut set = Self::empty(size);
        for index in indices {
            if index >= size {
                return Err(CoverError::PointOutOfRange { index, size });
            }
            set.0.insert(index);
        }
        Ok(set)
    }

    /// Size of the ambient ground set.
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.0.is_full()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.contains(index)
    }

    pub fn insert(&mut self, index: usize) {
        self.0.insert(index);
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union_with(&mut self, other: &PointSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &PointSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn difference_with(&mut self, other: &PointSet) {
        self.0.difference_with(&other.0);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// An ordered list of distinct point identifiers.
#[derive(Clone, Debug)]
pub struct GroundSet {
    points: Vec<String>,
    index: HashMap<String, usize>,
}

impl PartialEq for GroundSet {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
    }
}

impl Eq for GroundSet {}

impl GroundSet {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(points: I) -> Result<Self, CoverError> {
        let points: Vec<String> = points.into_iter().map(Into::into).collect();
        if points.is_empty() {
            return Err(CoverError::EmptyGround);
        }
        let mut index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(CoverError::DuplicatePoint(p.clone()));
            }
        }
        Ok(GroundSet { points, index })
    }

    /// Ground set `{"0", "1", ..., "size-1"}`.
    pub fn numbered(size: usize) -> Result<Self, CoverError> {
        Self::new((0..size).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn id(&self, index: usize) -> &str {
        &self.points[index]
    }

    pub fn index_of(&self, id: &str) -> Result<usize, CoverError> {
        self.index.get(id).copied().ok_or_else(|| CoverError::UnknownPoint(id.to_string()))
    }

    pub fn subset<S: AsRef<str>>(&self, ids: &[S]) -> Result<PointSet, CoverError> {
        let mut set = PointSet::empty(self.len());
        for id in ids {
            set.insert(self.index_of(id.as_ref())?);
        }
        Ok(set)
    }

    pub fn ids_of(&self, set: &PointSet) -> Vec<String> {
        set.iter().map(|i| self.points[i].clone()).collect()
    }
}

/// Opaque deformability label attached to a member of a family.
///
/// Appended Ostrand sets carry the union of the tags of their witness
/// origins; product sets carry the pair of factor tags.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Tag {
    Label(String),
    Union { union: Vec<Tag> },
    Pair { pair: (Option<Box<Tag>>, Option<Box<Tag>>) },
}

impl Tag {
    pub fn label(s: impl Into<String>) -> Self {
        Tag::Label(s.into())
    }
}

/// One piece of a witness decomposition: `piece ⊆ sets[origin]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessPiece {
    pub piece: PointSet,
    pub origin: usize,
}

/// First violated witness invariant found by [`IndexedFamily::check_witnesses`].
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WitnessViolation {
    #[error("set {set}: witness list has {found} entries for {expected} sets")]
    Length { set: usize, expected: usize, found: usize },
    #[error("set {set}: piece {piece} has origin {origin}, which is not an earlier set")]
    OriginNotEarlier { set: usize, piece: usize, origin: usize },
    #[error("set {set}: piece {piece} is not contained in its origin set {origin}")]
    PieceOutsideOrigin { set: usize, piece: usize, origin: usize },
    #[error("set {set}: pieces {first} and {second} overlap")]
    Overlap { set: usize, first: usize, second: usize },
    #[error("set {set}: union of pieces differs from the set")]
    UnionMismatch { set: usize },
}

/// An ordered family of subsets of a finite ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedFamily {
    ground: GroundSet,
    sets: Vec<PointSet>,
    tags: Option<Vec<Option<Tag>>>,
    witnesses: Option<Vec<Option<Vec<WitnessPiece>>>>,
}

impl IndexedFamily {
    pub fn new(ground: GroundSet, sets: Vec<PointSet>) -> Result<Self, CoverError> {
        for set in &sets {
            if set.universe() != ground.len() {
                return Err(CoverError::GroundMismatch);
            }
        }
        Ok(IndexedFamily { ground, sets, tags: None, witnesses: None })
    }

    /// Builds a family from point ids.
    pub fn from_ids<S: AsRef<str>>(ground: GroundSet, sets: &[Vec<S>]) -> Result<Self, CoverError> {
        let sets = sets.iter().map(|s| ground.subset(s)).collect::<Result<Vec<_>, _>>()?;
        Self::new(ground, sets)
    }

    pub fn with_tags(mut self, tags: Vec<Option<Tag>>) -> Result<Self, CoverError> {
        if tags.len() != self.sets.len() {
            return Err(CoverError::LengthMismatch { what: "tags", expected: self.sets.len(), found: tags.len() });
        }
        self.tags = Some(tags);
        Ok(self)
    }

    /// Attaches witness decompositions. Only structural checks are made here;
    /// the decomposition invariants are checked by [`Self::check_witnesses`].
    pub fn with_witnesses(mut self, witnesses: Vec<Option<Vec<WitnessPiece>>>) -> Result<Self, CoverError> {
        if witnesses.len() != self.sets.len() {
            return Err(CoverError::LengthMismatch {
                what: "witness entries",
                expected: self.sets.len(),
                found: witnesses.len(),
            });
        }
        for piece in witnesses.iter().flatten().flatten() {
            if piece.piece.universe() != self.ground.len() {
                return Err(CoverError::GroundMismatch);
            }
        }
        self.witnesses = Some(witnesses);
        Ok(self)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn sets(&self) -> &[PointSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn tags(&self) -> Option<&[Option<Tag>]> {
        self.tags.as_deref()
    }

    pub fn tag(&self, k: usize) -> Option<&Tag> {
        self.tags.as_ref().and_then(|t| t.get(k)).and_then(Option::as_ref)
    }

    pub fn witnesses(&self) -> Option<&[Option<Vec<WitnessPiece>>]> {
        self.witnesses.as_deref()
    }

    pub fn witness(&self, k: usize) -> Option<&[WitnessPiece]> {
        self.witnesses.as_ref().and_then(|w| w.get(k)).and_then(|w| w.as_deref())
    }

    /// Number of members containing the point with the given id.
    pub fn order_at(&self, point: &str) -> Result<usize, CoverError> {
        Ok(self.order_at_index(self.ground.index_of(point)?))
    }

    pub fn order_at_index(&self, point: usize) -> usize {
        self.sets.iter().filter(|s| s.contains(point)).count()
    }

    /// Order at every point, in ground order.
    pub fn orders(&self) -> Vec<usize> {
        let mut orders = vec![0; self.ground.len()];
        for set in &self.sets {
            for p in set.iter() {
                orders[p] += 1;
            }
        }
        orders
    }

    pub fn min_order(&self) -> usize {
        self.orders().into_iter().min().unwrap_or(0)
    }

    pub fn union(&self) -> PointSet {
        let mut all = PointSet::empty(self.ground.len());
        for set in &self.sets {
            all.union_with(set);
        }
        all
    }

    /// First ground point (by index) missed by every member.
    pub fn first_uncovered(&self) -> Option<usize> {
        let union = self.union();
        (0..self.ground.len()).find(|&p| !union.contains(p))
    }

    pub fn covers(&self) -> bool {
        self.union().is_full()
    }

    fn check_k(&self, k: usize) -> Result<(), CoverError> {
        if k == 0 || k > self.sets.len() {
            return Err(CoverError::KOutOfRange { k, sets: self.sets.len() });
        }
        Ok(())
    }

    /// Checks every `k`-element subfamily for coverage.
    pub fn is_k_cover_oracle(&self, k: usize) -> Result<bool, CoverError> {
        self.check_k(k)?;
        let size = self.ground.len();
        Ok((0..self.sets.len()).combinations(k).all(|chosen| {
            let mut union = PointSet::empty(size);
            for i in chosen {
                union.union_with(&self.sets[i]);
            }
            union.is_full()
        }))
    }

    /// Order criterion: `m` sets form a `k`-cover iff every point has order `>= m - k + 1`.
    pub fn is_k_cover_fast(&self, k: usize) -> Result<bool, CoverError> {
        self.check_k(k)?;
        Ok(self.min_order() + k > self.sets.len())
    }

    pub fn is_invariant(&self, action: &PermutationAction) -> Result<bool, CoverError> {
        Ok(self.first_non_invariant(action)?.is_none())
    }

    /// `(set index, generator index)` of the first failure of invariance.
    pub fn first_non_invariant(&self, action: &PermutationAction) -> Result<Option<(usize, usize)>, CoverError> {
        if action.ground() != &self.ground {
            return Err(CoverError::GroundMismatch);
        }
        Ok(self
            .sets
            .iter()
            .enumerate()
            .find_map(|(k, set)| action.first_moving_generator(set).map(|g| (k, g))))
    }

    pub fn check_witnesses(&self) -> Result<(), WitnessViolation> {
        let Some(witnesses) = &self.witnesses else {
            return Ok(());
        };
        if witnesses.len() != self.sets.len() {
            return Err(WitnessViolation::Length { set: 0, expected: self.sets.len(), found: witnesses.len() });
        }
        for (k, pieces) in witnesses.iter().enumerate() {
            let Some(pieces) = pieces else { continue };
            let mut union = PointSet::empty(self.ground.len());
            for (j, w) in pieces.iter().enumerate() {
                if w.origin >= k {
                    return Err(WitnessViolation::OriginNotEarlier { set: k, piece: j, origin: w.origin });
                }
                if !w.piece.is_subset(&self.sets[w.origin]) {
                    return Err(WitnessViolation::PieceOutsideOrigin { set: k, piece: j, origin: w.origin });
                }
                if let Some(first) = pieces[..j].iter().position(|other| !other.piece.is_disjoint(&w.piece)) {
                    return Err(WitnessViolation::Overlap { set: k, first, second: j });
                }
                union.union_with(&w.piece);
            }
            if union != self.sets[k] {
                return Err(WitnessViolation::UnionMismatch { set: k });
            }
        }
        Ok(())
    }

    pub fn verify_witnesses(&self) -> bool {
        self.check_witnesses().is_ok()
    }

    fn push_with_witness(&mut self, set: PointSet, pieces: Vec<WitnessPiece>) {
        if let Some(tags) = &mut self.tags {
            let mut origin_tags: Vec<Tag> = pieces.iter().filter_map(|w| tags[w.origin].clone()).collect();
            origin_tags.sort();
            tags.push(if origin_tags.is_empty() { None } else { Some(Tag::Union { union: origin_tags }) });
        }
        let count = self.sets.len();
        self.witnesses.get_or_insert_with(|| vec![None; count]).push(Some(pieces));
        self.sets.push(set);
    }
}

/// One appended set of an Ostrand extension, with the data that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionStep {
    /// Family length before the step.
    pub size: usize,
    /// Points of minimal order `size - n`.
    pub low_order: PointSet,
    /// The pieces `F_0, ..., F_n`; empty when `low_order` is empty.
    pub pieces: Vec<PointSet>,
}

/// Extends a cover by `n + 1` sets to an `(n + 1)`-cover by `m + 1` sets.
///
/// The first `n + 1` sets are kept. Each appended set is the disjoint union
/// of the pieces `F_i = Y ∩ U_i \ (U_0 ∪ ... ∪ U_{i-1})`, where `Y` is the set
/// of points of minimal order in the current family; when `Y` is empty a
/// copy of `U_0` is appended. If `action` is given, every input set must be
/// invariant and then so is every appended set.
pub fn ostrand_extend(
    family: &IndexedFamily,
    n: usize,
    m: usize,
    action: Option<&PermutationAction>,
) -> Result<IndexedFamily, CoverError> {
    ostrand_extend_with_steps(family, n, m, action).map(|(family, _)| family)
}

/// [`ostrand_extend`], also returning the per-step `Y` and `F_i` sets.
pub fn ostrand_extend_with_steps(
    family: &IndexedFamily,
    n: usize,
    m: usize,
    action: Option<&PermutationAction>,
) -> Result<(IndexedFamily, Vec<ExtensionStep>), CoverError> {
    if family.len() != n + 1 {
        return Err(CoverError::WrongSetCount { expected: n + 1, found: family.len() });
    }
    if m < n {
        return Err(CoverError::TargetTooShort { n, m });
    }
    if let Some(p) = family.first_uncovered() {
        return Err(CoverError::NotACover { point: family.ground.id(p).to_string() });
    }
    if let Some(action) = action {
        if let Some((set, generator)) = family.first_non_invariant(action)? {
            return Err(CoverError::NotInvariant { set, generator });
        }
    }

    let size = family.ground.len();
    let originals: Vec<PointSet> = family.sets.clone();
    let mut result = family.clone();
    let mut orders = family.orders();
    let mut steps = Vec::with_capacity(m - n);

    for s in n + 1..=m {
        let low = s - n;
        debug_assert!(orders.iter().all(|&o| o >= low));
        let y = PointSet::from_indices(size, (0..size).filter(|&p| orders[p] == low))
            .expect("indices are in range");

        let (appended, pieces, witness) = if y.is_empty() {
            let copy = originals[0].clone();
            let witness = vec![WitnessPiece { piece: copy.clone(), origin: 0 }];
            (copy, Vec::new(), witness)
        } else {
            let mut covered = PointSet::empty(size);
            let mut pieces = Vec::with_capacity(n + 1);
            for original in &originals {
                let mut piece = y.clone();
                piece.intersect_with(original);
                piece.difference_with(&covered);
                covered.union_with(original);
                pieces.push(piece);
            }
            let witness = pieces
                .iter()
                .enumerate()
                .filter(|(_, p)| !p.is_empty())
                .map(|(origin, p)| WitnessPiece { piece: p.clone(), origin })
                .collect();
            (y.clone(), pieces, witness)
        };

        for p in appended.iter() {
            orders[p] += 1;
        }
        result.push_with_witness(appended, witness);
        steps.push(ExtensionStep { size: s, low_order: y, pieces });
    }
    Ok((result, steps))
}

/// The diagonal family `W_k = A_k × B_k` over the product ground set, without
/// any precondition check. Product point `(i, j)` has index `i * |B| + j` and
/// id `"(a,b)"`.
pub fn diagonal_product(fam_a: &IndexedFamily, fam_b: &IndexedFamily) -> Result<IndexedFamily, CoverError> {
    if fam_a.len() != fam_b.len() {
        return Err(CoverError::LengthMismatch { what: "sets in the second family", expected: fam_a.len(), found: fam_b.len() });
    }
    let (na, nb) = (fam_a.ground.len(), fam_b.ground.len());
    let ground = GroundSet::new(
        fam_a.ground.points.iter().cartesian_product(fam_b.ground.points.iter()).map(|(a, b)| format!("({a},{b})")),
    )?;
    let sets = fam_a
        .sets
        .iter()
        .zip(&fam_b.sets)
        .map(|(sa, sb)| {
            PointSet::from_indices(na * nb, sa.iter().cartesian_product(sb.iter().collect::<Vec<_>>()).map(|(i, j)| i * nb + j))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut product = IndexedFamily::new(ground, sets)?;
    if fam_a.tags.is_some() || fam_b.tags.is_some() {
        let tags = (0..fam_a.len())
            .map(|k| Some(Tag::Pair { pair: (fam_a.tag(k).cloned().map(Box::new), fam_b.tag(k).cloned().map(Box::new)) }))
            .collect();
        product = product.with_tags(tags)?;
    }
    Ok(product)
}

/// Product of an `(n + 1)`-cover and an `(m + 1)`-cover of common length
/// `s >= n + m + 1`.
///
/// Every product point `(a, b)` lies in at least `s - n` of the `A_k` and
/// misses at most `m` of the `B_k`, so the diagonal family covers `A × B`.
pub fn product_cover(
    fam_a: &IndexedFamily,
    n: usize,
    fam_b: &IndexedFamily,
    m: usize,
) -> Result<IndexedFamily, CoverError> {
    if fam_a.len() != fam_b.len() {
        return Err(CoverError::ProductPrecondition(format!(
            "families have different lengths {} and {}",
            fam_a.len(),
            fam_b.len()
        )));
    }
    let s = fam_a.len();
    if s < n + m + 1 {
        return Err(CoverError::ProductPrecondition(format!("length {s} is at most n + m = {}", n + m)));
    }
    if !fam_a.is_k_cover_fast(n + 1)? {
        return Err(CoverError::ProductPrecondition(format!("first family is not a {}-cover", n + 1)));
    }
    if !fam_b.is_k_cover_fast(m + 1)? {
        return Err(CoverError::ProductPrecondition(format!("second family is not a {}-cover", m + 1)));
    }
    let product = diagonal_product(fam_a, fam_b)?;
    debug_assert!(product.covers());
    Ok(product)
}
