//! Random instance generators and brute-force oracles shared by the
//! property tests and the acceptance harness.
#![allow(dead_code)]

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use tcbound_core::action::PermutationAction;
use tcbound_core::cover::{GroundSet, IndexedFamily, PointSet};
use tcbound_core::nerve::FiniteMetricSpace;

pub fn numbered(n: usize) -> GroundSet {
    GroundSet::numbered(n).unwrap()
}

/// A family of `m` sets over `0..ground`, each point joining each set with probability `density`.
pub fn random_family<R: Rng>(rng: &mut R, ground: usize, m: usize, density: f64) -> IndexedFamily {
    let sets = (0..m)
        .map(|_| PointSet::from_indices(ground, (0..ground).filter(|_| rng.gen_bool(density))).unwrap())
        .collect();
    IndexedFamily::new(numbered(ground), sets).unwrap()
}

/// Brute force: every `k`-element subfamily covers the ground set.
pub fn every_k_subfamily_covers(family: &IndexedFamily, k: usize) -> bool {
    let n = family.ground().len();
    (0..family.len()).combinations(k).all(|idx| {
        let mut union = PointSet::empty(n);
        for i in idx {
            union.union_with(&family.sets()[i]);
        }
        union.is_full()
    })
}

/// A random permutation of `0..n` made of disjoint cycles with lengths in `lengths`.
fn random_cycles<R: Rng>(rng: &mut R, n: usize, lengths: &[usize]) -> Vec<usize> {
    let mut points: Vec<usize> = (0..n).collect();
    points.shuffle(rng);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rest = &points[..];
    while !rest.is_empty() {
        let len = *lengths.choose(rng).unwrap();
        let len = len.min(rest.len());
        let (cycle, tail) = rest.split_at(len);
        for i in 0..len {
            perm[cycle[i]] = cycle[(i + 1) % len];
        }
        rest = tail;
    }
    perm
}

/// A random action on `0..n` by 0 to 2 generators whose generated group has
/// order at most `max_order`; returns the action and its group order.
pub fn random_action<R: Rng>(rng: &mut R, n: usize, max_order: usize) -> (PermutationAction, usize) {
    loop {
        let count = rng.gen_range(0..=2);
        let generators: Vec<Vec<usize>> =
            (0..count).map(|_| random_cycles(rng, n, &[1, 1, 2, 2, 3, 4])).collect();
        let action = PermutationAction::new(numbered(n), generators).unwrap();
        if let Some(elements) = action.elements(max_order) {
            return (action, elements.len());
        }
    }
}

/// A random cover of `0..ground` by `m` sets, each a union of orbits of `action`.
pub fn random_invariant_cover<R: Rng>(rng: &mut R, action: &PermutationAction, m: usize) -> IndexedFamily {
    let ground = action.ground().len();
    let orbits = action.orbits();
    let mut sets: Vec<PointSet> = (0..m).map(|_| PointSet::empty(ground)).collect();
    for orbit in &orbits {
        let mut joined = false;
        for set in sets.iter_mut() {
            if rng.gen_bool(0.4) {
                set.union_with(orbit);
                joined = true;
            }
        }
        if !joined {
            sets[rng.gen_range(0..m)].union_with(orbit);
        }
    }
    IndexedFamily::new(action.ground().clone(), sets).unwrap()
}

/// A random metric on `n` points: random positive rational edge weights closed
/// under shortest paths, so the triangle inequality holds exactly.
pub fn random_metric<R: Rng>(rng: &mut R, n: usize) -> FiniteMetricSpace {
    let zero = BigRational::from_integer(BigInt::from(0));
    let mut d = vec![vec![zero.clone(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = BigRational::new(BigInt::from(rng.gen_range(1..=20)), BigInt::from(rng.gen_range(1..=4)));
            d[i][j] = w.clone();
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    FiniteMetricSpace::new(numbered(n), d).unwrap()
}

/// A random nonempty subset of the space's points, as a ground set of the same ids.
pub fn random_subspace<R: Rng>(rng: &mut R, space: &FiniteMetricSpace) -> GroundSet {
    let ids = space.points().points();
    let mut chosen: Vec<String> = ids.iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
    if chosen.is_empty() {
        chosen.push(ids.choose(rng).unwrap().clone());
    }
    GroundSet::new(chosen).unwrap()
}

/// A random cover of `ground` by `m` sets.
pub fn random_cover_of<R: Rng>(rng: &mut R, ground: &GroundSet, m: usize) -> IndexedFamily {
    let n = ground.len();
    let mut sets: Vec<PointSet> = (0..m).map(|_| PointSet::empty(n)).collect();
    for p in 0..n {
        let mut placed = false;
        for set in sets.iter_mut() {
            if rng.gen_bool(0.35) {
                set.insert(p);
                placed = true;
            }
        }
        if !placed {
            sets[rng.gen_range(0..m)].insert(p);
        }
    }
    IndexedFamily::new(ground.clone(), sets).unwrap()
}
