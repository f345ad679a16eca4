//! Finite abstract simplicial complexes and their Z/2 homology ranks.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use thiserror::Error;

use crate::gf2::{zero_vector, BitMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("complex has no simplices")]
    Empty,
    #[error("facet {facet} is not a strictly ascending list of vertices below {vertices}")]
    BadFacet { facet: usize, vertices: usize },
    #[error("facet {inner} is contained in facet {outer}")]
    NotMaximal { inner: usize, outer: usize },
    #[error("vertex relabelling is not a permutation of 0..{0}")]
    BadRelabelling(usize),
}

/// A simplicial complex on the vertex range `0..vertex_count`, stored by its
/// maximal simplices. Vertices not lying in any facet are not part of the
/// complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Validating constructor: facets must be ascending, in range and maximal.
    pub fn new(vertex_count: usize, facets: Vec<Vec<usize>>) -> Result<Self, ComplexError> {
        for (i, f) in facets.iter().enumerate() {
            if f.is_empty() || !f.windows(2).all(|w| w[0] < w[1]) || f.iter().any(|&v| v >= vertex_count) {
                return Err(ComplexError::BadFacet { facet: i, vertices: vertex_count });
            }
        }
        for (i, inner) in facets.iter().enumerate() {
            for (j, outer) in facets.iter().enumerate() {
                if i != j && is_face(inner, outer) && (inner.len() < outer.len() || i > j) {
                    return Err(ComplexError::NotMaximal { inner: i, outer: j });
                }
            }
        }
        Ok(SimplicialComplex { vertex_count, facets })
    }

    /// Builds the complex generated by arbitrary simplices: each is sorted,
    /// duplicates and non-maximal simplices are dropped, and facets are kept
    /// in lexicographic order.
    pub fn from_simplices<I: IntoIterator<Item = Vec<usize>>>(vertex_count: usize, simplices: I) -> Result<Self, ComplexError> {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for mut s in simplices {
            s.sort_unstable();
            s.dedup();
            if !s.is_empty() {
                all.insert(s);
            }
        }
        let maximal: Vec<Vec<usize>> = all
            .iter()
            .filter(|s| !all.iter().any(|t| t.len() > s.len() && is_face(s, t)))
            .cloned()
            .collect();
        Self::new(vertex_count, maximal)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn dimension(&self) -> Result<usize, ComplexError> {
        self.facets.iter().map(|f| f.len() - 1).max().ok_or(ComplexError::Empty)
    }

    /// Facets as a sorted set, for comparing complexes independently of facet order.
    pub fn facet_set(&self) -> BTreeSet<Vec<usize>> {
        self.facets.iter().cloned().collect()
    }

    /// All simplices grouped by dimension, each group in lexicographic order.
    pub fn simplices(&self) -> Vec<Vec<Vec<usize>>> {
        let top = match self.dimension() {
            Ok(d) => d,
            Err(_) => return Vec::new(),
        };
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); top + 1];
        for f in &self.facets {
            for size in 1..=f.len() {
                for face in f.iter().copied().combinations(size) {
                    by_dim[size - 1].insert(face);
                }
            }
        }
        by_dim.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices().iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }

    /// Boundary matrix `∂_d : C_d → C_{d-1}` with rows indexed by
    /// `(d-1)`-simplices and columns by `d`-simplices (`d >= 1`).
    pub fn boundary_matrix(&self, d: usize) -> BitMatrix {
        let simplices = self.simplices();
        boundary_matrix_of(&simplices, d)
    }

    /// Z/2 Betti numbers `b_0, ..., b_dim`.
    pub fn betti_z2(&self) -> Vec<usize> {
        let simplices = self.simplices();
        let ranks: Vec<usize> = (0..=simplices.len())
            .map(|d| if d == 0 || d >= simplices.len() { 0 } else { boundary_matrix_of(&simplices, d).rank() })
            .collect();
        (0..simplices.len()).map(|d| simplices[d].len() - ranks[d] - ranks[d + 1]).collect()
    }

    /// The same complex with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, ComplexError> {
        let mut seen = vec![false; self.vertex_count];
        if perm.len() != self.vertex_count || perm.iter().any(|&p| p >= self.vertex_count || std::mem::replace(&mut seen[p], true)) {
            return Err(ComplexError::BadRelabelling(self.vertex_count));
        }
        Self::from_simplices(self.vertex_count, self.facets.iter().map(|f| f.iter().map(|&v| perm[v]).collect()))
    }
}

fn is_face(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|v| big.binary_search(v).is_ok())
}

pub(crate) fn index_simplices(simplices: &[Vec<usize>]) -> HashMap<&[usize], usize> {
    simplices.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect()
}

pub(crate) fn boundary_matrix_of(simplices: &[Vec<Vec<usize>>], d: usize) -> BitMatrix {
    assert!(d >= 1 && d < simplices.len());
    let lower = index_simplices(&simplices[d - 1]);
    let mut m = BitMatrix::from_rows(simplices[d].len(), vec![zero_vector(simplices[d].len()); simplices[d - 1].len()]);
    for (c, s) in simplices[d].iter().enumerate() {
        for skip in 0..s.len() {
            let face: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
            m.set(lower[face.as_slice()], c, true);
        }
    }
    m
}

/// Standard small triangulations used by tests and the catalog.
pub mod fixtures {
    use super::SimplicialComplex;

    pub fn point() -> SimplicialComplex {
        SimplicialComplex::new(1, vec![vec![0]]).unwrap()
    }

    /// Boundary of a triangle: a circle on three vertices.
    pub fn triangle_boundary() -> SimplicialComplex {
        SimplicialComplex::new(3, vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap()
    }

    pub fn solid_triangle() -> SimplicialComplex {
        SimplicialComplex::new(3, vec![vec![0, 1, 2]]).unwrap()
    }

    /// `r` triangle-boundary circles glued at vertex 0.
    pub fn wedge_of_circles(r: usize) -> SimplicialComplex {
        let facets = (0..r).flat_map(|i| {
            let (a, b) = (2 * i + 1, 2 * i + 2);
            [vec![0, a], vec![0, b], vec![a, b]]
        });
        SimplicialComplex::from_simplices(2 * r + 1, facets).unwrap()
    }

    /// Triangle boundary on `{0,1,2}` and tetrahedron boundary on `{0,3,4,5}`.
    pub fn circle_wedge_sphere() -> SimplicialComplex {
        let circle = [vec![0, 1], vec![0, 2], vec![1, 2]];
        let sphere = [vec![0, 3, 4], vec![0, 3, 5], vec![0, 4, 5], vec![3, 4, 5]];
        SimplicialComplex::from_simplices(6, circle.into_iter().chain(sphere)).unwrap()
    }

    /// The 7-vertex torus: triangles `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
    pub fn torus7() -> SimplicialComplex {
        let facets = (0..7).flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]]);
        SimplicialComplex::from_simplices(7, facets).unwrap()
    }

    /// Staircase triangulation of the product of two 1-dimensional complexes.
    /// Vertex `(i, j)` gets index `i * |B| + j`; each edge square splits along
    /// the diagonal from its least to its greatest corner.
    pub fn graph_product(a: &SimplicialComplex, b: &SimplicialComplex) -> SimplicialComplex {
        let nb = b.vertex_count();
        let v = |i: usize, j: usize| i * nb + j;
        let mut simplices = Vec::new();
        for e in a.facets() {
            for f in b.facets() {
                assert!(e.len() == 2 && f.len() == 2, "graph_product needs 1-dimensional complexes");
                let ((a0, a1), (b0, b1)) = ((e[0], e[1]), (f[0], f[1]));
                simplices.push(vec![v(a0, b0), v(a1, b0), v(a1, b1)]);
                simplices.push(vec![v(a0, b0), v(a0, b1), v(a1, b1)]);
            }
        }
        SimplicialComplex::from_simplices(a.vertex_count() * nb, simplices).unwrap()
    }

    /// `S¹ × (S¹ ∨ ... ∨ S¹)` with `r` circles in the wedge.
    pub fn circle_times_wedge(r: usize) -> SimplicialComplex {
        graph_product(&triangle_boundary(), &wedge_of_circles(r))
    }

    /// Periodic Freudenthal triangulation of the `dim`-torus on a grid of
    /// side 3: one simplex per grid point and per ordering of the axes.
    pub fn freudenthal_torus(dim: usize) -> SimplicialComplex {
        use itertools::Itertools;
        const SIDE: usize = 3;
        let count = SIDE.pow(dim as u32);
        let encode = |c: &[usize]| c.iter().rev().fold(0, |acc, &x| acc * SIDE + x);
        let mut simplices = Vec::new();
        for v in 0..count {
            let base: Vec<usize> = (0..dim).map(|i| (v / SIDE.pow(i as u32)) % SIDE).collect();
            for axes in (0..dim).permutations(dim) {
                let mut c = base.clone();
                let mut simplex = vec![encode(&c)];
                for &a in &axes {
                    c[a] = (c[a] + 1) % SIDE;
                    simplex.push(encode(&c));
                }
                simplices.push(simplex);
            }
        }
        SimplicialComplex::from_simplices(count, simplices).unwrap()
    }
}
