//! Simplicial cohomology with Z/2 coefficients and its cup product.
//!
//! Simplices are ordered by vertex index. A class in `H^d` is represented by
//! a cocycle; representatives are picked by scanning a kernel basis of the
//! coboundary and keeping each cocycle that is independent of the
//! coboundaries and of the representatives already chosen. In degree 0 the
//! constant cocycle is taken first so that it is the unit.

use crate::complex::{boundary_matrix_of, index_simplices, SimplicialComplex};
use crate::gf2::{unit_vector, zero_vector, BitMatrix, BitVector, Reducer};
use crate::ring::RingPresentation;

/// Cohomology of a complex: Betti numbers, cocycle representatives and the
/// ring they generate.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub betti: Vec<usize>,
    /// Cocycle representatives per degree, as vectors over the `d`-simplices.
    pub representatives: Vec<Vec<BitVector>>,
    pub ring: RingPresentation,
}

/// Label of the `i`-th basis class in degree `d`; the unit is `"1"`.
pub fn class_label(d: usize, i: usize) -> String {
    if d == 0 && i == 0 {
        "1".to_string()
    } else {
        format!("h{d}_{i}")
    }
}

pub fn cohomology_ring_z2(complex: &SimplicialComplex) -> RingPresentation {
    cohomology_z2(complex).ring
}

pub fn cohomology_z2(complex: &SimplicialComplex) -> Cohomology {
    let simplices = complex.simplices();
    let top = simplices.len();
    if top == 0 {
        let ring = RingPresentation::from_parts(Vec::new(), Vec::new(), 0, Vec::new());
        return Cohomology { betti: Vec::new(), representatives: Vec::new(), ring };
    }
    // coboundary δ_d = ∂_{d+1}^T: rows of ∂_{d} are coboundaries of (d-1)-simplices
    let boundaries: Vec<Option<BitMatrix>> =
        (0..=top).map(|d| (d >= 1 && d < top).then(|| boundary_matrix_of(&simplices, d))).collect();

    let mut representatives = Vec::with_capacity(top);
    let mut reducers = Vec::with_capacity(top);
    for d in 0..top {
        let len = simplices[d].len();
        let cocycles = match &boundaries[d + 1] {
            Some(b) => b.transpose().nullspace(),
            None => (0..len).map(|i| unit_vector(len, i)).collect(),
        };
        let coboundaries: Vec<BitVector> = match &boundaries[d] {
            Some(b) => b.rows().to_vec(),
            None => Vec::new(),
        };

        let mut span = Reducer::new(len, 0);
        for c in &coboundaries {
            span.insert(c, &zero_vector(0));
        }
        let mut candidates = Vec::new();
        if d == 0 {
            let mut ones = zero_vector(len);
            ones.insert_range(..);
            candidates.push(ones);
        }
        candidates.extend(cocycles);
        let reps: Vec<BitVector> = candidates.into_iter().filter(|z| span.insert(z, &zero_vector(0))).collect();

        // second pass with tags to express any cocycle in the chosen basis
        let mut reducer = Reducer::new(len, reps.len());
        for c in &coboundaries {
            reducer.insert(c, &zero_vector(reps.len()));
        }
        for (i, z) in reps.iter().enumerate() {
            reducer.insert(z, &unit_vector(reps.len(), i));
        }
        representatives.push(reps);
        reducers.push(reducer);
    }
    let betti: Vec<usize> = representatives.iter().map(Vec::len).collect();

    let mut labels = Vec::new();
    let mut degrees = Vec::new();
    let mut offsets = Vec::with_capacity(top);
    for (d, reps) in representatives.iter().enumerate() {
        offsets.push(labels.len());
        for i in 0..reps.len() {
            labels.push(class_label(d, i));
            degrees.push(d);
        }
    }
    let n = labels.len();
    let indices: Vec<_> = simplices.iter().map(|s| index_simplices(s)).collect();

    let mut table = vec![vec![zero_vector(n); n]; n];
    for (p, reps_p) in representatives.iter().enumerate() {
        for (q, reps_q) in representatives.iter().enumerate() {
            if p + q >= top {
                continue;
            }
            for (i, alpha) in reps_p.iter().enumerate() {
                for (j, beta) in reps_q.iter().enumerate() {
                    let cup = cup_product(&simplices[p + q], &indices[p], &indices[q], p, alpha, beta);
                    let (residual, coords) = reducers[p + q].reduce(&cup);
                    debug_assert!(residual.is_clear(), "cup product of cocycles is a cocycle");
                    let mut v = zero_vector(n);
                    for c in coords.ones() {
                        v.insert(offsets[p + q] + c);
                    }
                    table[offsets[p] + i][offsets[q] + j] = v;
                }
            }
        }
    }
    let ring = RingPresentation::from_parts(labels, degrees, 0, table);
    Cohomology { betti, representatives, ring }
}

/// `(α ∪ β)(v_0..v_{p+q}) = α(v_0..v_p) · β(v_p..v_{p+q})`.
fn cup_product(
    targets: &[Vec<usize>],
    front_index: &std::collections::HashMap<&[usize], usize>,
    back_index: &std::collections::HashMap<&[usize], usize>,
    p: usize,
    alpha: &BitVector,
    beta: &BitVector,
) -> BitVector {
    let mut out = zero_vector(targets.len());
    for (k, s) in targets.iter().enumerate() {
        let front = front_index[&s[..=p]];
        let back = back_index[&s[p..]];
        if alpha.contains(front) && beta.contains(back) {
            out.insert(k);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::*;
    use crate::ring::zero_divisor_cup_length;

    #[test]
    fn point_and_contractible() {
        for k in [point(), solid_triangle()] {
            let ring = cohomology_ring_z2(&k);
            assert_eq!(ring, RingPresentation::point());
        }
    }

    #[test]
    fn graphs_have_trivial_products() {
        for k in [triangle_boundary(), wedge_of_circles(3)] {
            let ring = cohomology_ring_z2(&k);
            ring.validate().unwrap();
            for (i, j, _) in ring.nonzero_products() {
                assert!(i == ring.unit() || j == ring.unit());
            }
        }
    }

    #[test]
    fn torus_products() {
        let ring = cohomology_ring_z2(&torus7());
        ring.validate().unwrap();
        let classes = ring.basis_by_degree();
        assert_eq!(classes.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 2, 1]);
        let (a, b, top) = (classes[1][0], classes[1][1], classes[2][0]);
        assert_eq!(ring.basis_product(a, b), &unit_vector(ring.dim(), top));
        assert!(ring.basis_product(a, a).is_clear());
        assert!(ring.basis_product(b, b).is_clear());
    }

    #[test]
    fn circle_wedge_sphere_products_vanish() {
        let ring = cohomology_ring_z2(&circle_wedge_sphere());
        ring.validate().unwrap();
        assert_eq!(ring.labels(), &["1", "h1_0", "h2_0"]);
        assert!(ring.basis_product(1, 2).is_clear());
        assert!(ring.basis_product(1, 1).is_clear());
        assert_eq!(zero_divisor_cup_length(&ring, None).length, 2);
    }

    #[test]
    fn three_torus_is_exterior() {
        let ring = cohomology_ring_z2(&freudenthal_torus(3));
        ring.validate().unwrap();
        let classes = ring.basis_by_degree();
        let mut triple = ring.basis_element(classes[1][0]);
        for &c in &classes[1][1..] {
            triple = ring.mul(&triple, &ring.basis_element(c));
        }
        assert_eq!(triple, ring.basis_element(classes[3][0]));
        assert_eq!(zero_divisor_cup_length(&ring, None).length, 3);
    }

    #[test]
    fn disconnected_complex_has_unit_first() {
        let two_points = SimplicialComplex::new(2, vec![vec![0], vec![1]]).unwrap();
        let coh = cohomology_z2(&two_points);
        assert_eq!(coh.betti, vec![2]);
        coh.ring.validate().unwrap();
        assert_eq!(coh.representatives[0][0].count_ones(..), 2);
    }
}
