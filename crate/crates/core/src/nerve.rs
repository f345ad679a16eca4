//! Nerves of finite families and the same-nerve extension of a relative
//! cover on a finite metric space.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::complex::SimplicialComplex;
use crate::cover::{CoverError, GroundSet, IndexedFamily, PointSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("distance matrix must be {size}×{size}")]
    Shape { size: usize },
    #[error("distance `{0}` is not a rational number p/q")]
    Parse(String),
    #[error("d({i},{j}) is negative")]
    Negative { i: String, j: String },
    #[error("d({0},{0}) is not zero")]
    NonzeroDiagonal(String),
    #[error("d({i},{j}) is zero for distinct points")]
    Indiscernible { i: String, j: String },
    #[error("d({i},{j}) differs from d({j},{i})")]
    Asymmetric { i: String, j: String },
    #[error("triangle inequality fails for {i}, {j}, {k}")]
    Triangle { i: String, j: String, k: String },
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational, MetricError> {
    let err = || MetricError::Parse(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}

/// Canonical `"p/q"` form with `q > 0`, reduced.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Finite metric space with exact rational distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    points: GroundSet,
    dist: Vec<Vec<BigRational>>,
}

impl FiniteMetricSpace {
    /// Validates symmetry, positivity off the diagonal and the triangle inequality.
    pub fn new(points: GroundSet, dist: Vec<Vec<BigRational>>) -> Result<Self, MetricError> {
        let n = points.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(MetricError::Shape { size: n });
        }
        let id = |i: usize| points.id(i).to_string();
        for i in 0..n {
            if !dist[i][i].is_zero() {
                return Err(MetricError::NonzeroDiagonal(id(i)));
            }
            for j in 0..n {
                if dist[i][j].is_negative() {
                    return Err(MetricError::Negative { i: id(i), j: id(j) });
                }
                if i != j && dist[i][j].is_zero() {
                    return Err(MetricError::Indiscernible { i: id(i), j: id(j) });
                }
                if dist[i][j] != dist[j][i] {
                    return Err(MetricError::Asymmetric { i: id(i), j: id(j) });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][k] > &dist[i][j] + &dist[j][k] {
                        return Err(MetricError::Triangle { i: id(i), j: id(j), k: id(k) });
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { points, dist })
    }

    /// Points `0..n` on a line with `d(i, j) = |x_i - x_j|` for distinct integer positions.
    pub fn on_line(positions: &[i64]) -> Result<Self, MetricError> {
        let points = GroundSet::new(positions.iter().map(|p| p.to_string()))?;
        let dist = positions
            .iter()
            .map(|a| positions.iter().map(|b| BigRational::from_integer(BigInt::from((a - b).abs()))).collect())
            .collect();
        Self::new(points, dist)
    }

    pub fn points(&self) -> &GroundSet {
        &self.points
    }

    pub fn distance(&self, i: usize, j: usize) -> &BigRational {
        &self.dist[i][j]
    }

    pub fn distances(&self) -> &[Vec<BigRational>] {
        &self.dist
    }

    /// `d(point, set)`, or `None` for the empty set (infinite distance).
    pub fn distance_to_set(&self, point: usize, set: &PointSet) -> Option<&BigRational> {
        set.iter().map(|q| &self.dist[point][q]).min()
    }
}

/// Nerve of a family: vertex `k` per nonempty member, a simplex for every
/// subfamily with a common point.
///
/// On a finite ground set every simplex lies in the set of members
/// containing some single point, so the facets are the maximal such sets.
pub fn nerve_of(family: &IndexedFamily) -> SimplicialComplex {
    let stars = (0..family.ground().len())
        .map(|p| (0..family.len()).filter(|&k| family.sets()[k].contains(p)).collect::<Vec<usize>>());
    SimplicialComplex::from_simplices(family.len(), stars).expect("indices are below the family length")
}

/// Extends a cover of `A ⊆ X` by sets open in `A` to sets open in `X` with
/// the same nerve, via `V_i = ⋃_{a ∈ V'_i} B(a, d(a, A \ V'_i) / 2)`.
///
/// `A` is the ground set of `relative` and must consist of points of
/// `space`. Balls are open; the distance to the empty set is infinite, so a
/// member equal to all of `A` extends to the whole space.
pub fn extend_same_nerve(space: &FiniteMetricSpace, relative: &IndexedFamily) -> Result<IndexedFamily, MetricError> {
    let n = space.points.len();
    let subset: Vec<usize> =
        relative.ground().points().iter().map(|id| space.points.index_of(id)).collect::<Result<_, _>>()?;
    if let Some(p) = relative.first_uncovered() {
        return Err(CoverError::NotACover { point: relative.ground().id(p).to_string() }.into());
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let mut extended = Vec::with_capacity(relative.len());
    for member in relative.sets() {
        // A \ V'_i in ambient indices
        let mut outside = PointSet::empty(n);
        let mut inside = Vec::new();
        for (local, &ambient) in subset.iter().enumerate() {
            if member.contains(local) {
                inside.push(ambient);
            } else {
                outside.insert(ambient);
            }
        }
        let mut v = PointSet::empty(n);
        for &a in &inside {
            match space.distance_to_set(a, &outside) {
                None => {
                    v = PointSet::full(n);
                    break;
                }
                Some(r) => {
                    for x in 0..n {
                        if &two * space.distance(a, x) < *r {
                            v.insert(x);
                        }
                    }
                }
            }
        }
        extended.push(v);
    }
    let mut out = IndexedFamily::new(space.points.clone(), extended)?;
    if let Some(tags) = relative.tags() {
        out = out.with_tags(tags.to_vec())?;
    }
    Ok(out)
}

/// Restriction of an ambient family to `A` (given as the ground of `relative`).
pub fn restrict(family: &IndexedFamily, subset: &GroundSet) -> Result<Vec<PointSet>, CoverError> {
    let ambient: Vec<usize> = subset.points().iter().map(|id| family.ground().index_of(id)).collect::<Result<_, _>>()?;
    Ok(family
        .sets()
        .iter()
        .map(|s| {
            PointSet::from_indices(subset.len(), ambient.iter().enumerate().filter(|(_, &a)| s.contains(a)).map(|(l, _)| l))
                .expect("local indices are in range")
        })
        .collect())
}
