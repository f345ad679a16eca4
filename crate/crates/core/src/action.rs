//! Finite groups acting on a ground set by permutations.

use std::collections::{HashSet, VecDeque};

use crate::cover::{CoverError, GroundSet, PointSet};

/// A permutation group given by generators, each an image list:
/// generator `g` sends point `i` to `g[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationAction {
    ground: GroundSet,
    generators: Vec<Vec<usize>>,
}

impl PermutationAction {
    pub fn new(ground: GroundSet, generators: Vec<Vec<usize>>) -> Result<Self, CoverError> {
        let n = ground.len();
        for (gi, g) in generators.iter().enumerate() {
            if g.len() != n {
                return Err(CoverError::InvalidPermutation(format!(
                    "generator {gi} has {} images for {n} points",
                    g.len()
                )));
            }
            let mut seen = vec![false; n];
            for &image in g {
                if image >= n || std::mem::replace(&mut seen[image], true) {
                    return Err(CoverError::InvalidPermutation(format!("generator {gi} is not a bijection")));
                }
            }
        }
        Ok(PermutationAction { ground, generators })
    }

    /// Generators given as image ids: generator `g` sends `points[i]` to `g[i]`.
    pub fn from_ids<S: AsRef<str>>(ground: GroundSet, generators: &[Vec<S>]) -> Result<Self, CoverError> {
        let generators = generators
            .iter()
            .map(|g| g.iter().map(|id| ground.index_of(id.as_ref())).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(ground, generators)
    }

    pub fn trivial(ground: GroundSet) -> Self {
        PermutationAction { ground, generators: Vec::new() }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    pub fn apply(perm: &[usize], set: &PointSet) -> PointSet {
        PointSet::from_indices(set.universe(), set.iter().map(|p| perm[p])).expect("permutation images are in range")
    }

    /// Index of the first generator that moves `set`, if any. Invariance
    /// under the generators is invariance under the whole group.
    pub fn first_moving_generator(&self, set: &PointSet) -> Option<usize> {
        self.generators.iter().position(|g| &Self::apply(g, set) != set)
    }

    pub fn is_invariant(&self, set: &PointSet) -> bool {
        self.first_moving_generator(set).is_none()
    }

    /// All group elements by breadth-first closure, or `None` once more than
    /// `limit` elements have been found.
    pub fn elements(&self, limit: usize) -> Option<Vec<Vec<usize>>> {
        let identity: Vec<usize> = (0..self.ground.len()).collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::from([identity.clone()]);
        let mut order = vec![identity.clone()];
        let mut queue = VecDeque::from([identity]);
        while let Some(h) = queue.pop_front() {
            for g in &self.generators {
                let gh: Vec<usize> = h.iter().map(|&i| g[i]).collect();
                if seen.insert(gh.clone()) {
                    if seen.len() > limit {
                        return None;
                    }
                    order.push(gh.clone());
                    queue.push_back(gh);
                }
            }
        }
        Some(order)
    }

    /// Orbits in order of their smallest point.
    pub fn orbits(&self) -> Vec<PointSet> {
        let n = self.ground.len();
        let mut assigned = vec![false; n];
        let mut orbits = Vec::new();
        for start in 0..n {
            if assigned[start] {
                continue;
            }
            let mut orbit = PointSet::empty(n);
            let mut stack = vec![start];
            assigned[start] = true;
            while let Some(p) = stack.pop() {
                orbit.insert(p);
                for g in &self.generators {
                    if !assigned[g[p]] {
                        assigned[g[p]] = true;
                        stack.push(g[p]);
                    }
                }
            }
            orbits.push(orbit);
        }
        orbits
    }
}
