//! Dense linear algebra over the two-element field.

use fixedbitset::FixedBitSet;

/// Bit vector over GF(2) of fixed length.
pub type BitVector = FixedBitSet;

pub fn zero_vector(len: usize) -> BitVector {
    FixedBitSet::with_capacity(len)
}

pub fn unit_vector(len: usize, index: usize) -> BitVector {
    let mut v = zero_vector(len);
    v.insert(index);
    v
}

/// Row-major matrix over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { cols, rows: vec![zero_vector(cols); rows] }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        BitMatrix { cols, rows }
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].contains(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                t.rows[c].insert(r);
            }
        }
        t
    }

    /// Matrix-vector product `M v`.
    pub fn apply(&self, v: &BitVector) -> BitVector {
        let mut out = zero_vector(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            if row.intersection_count(v) % 2 == 1 {
                out.insert(r);
            }
        }
        out
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (Vec<BitVector>, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            let Some(found) = (next..rows.len()).find(|&r| rows[r].contains(col)) else {
                continue;
            };
            rows.swap(next, found);
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.contains(col) {
                    *row ^= &pivot_row;
                }
            }
            pivots.push(col);
            next += 1;
            if next == rows.len() {
                break;
            }
        }
        rows.truncate(next);
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : M v = 0}`, one vector per free column in ascending order.
    pub fn nullspace(&self) -> Vec<BitVector> {
        let (rows, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = unit_vector(self.cols, free);
                for (row, &p) in rows.iter().zip(&pivots) {
                    if row.contains(free) {
                        v.insert(p);
                    }
                }
                v
            })
            .collect()
    }
}

/// Incrementally built echelon basis that remembers, for every stored
/// vector, which inserted tags combine to it.
#[derive(Clone, Debug)]
pub struct Reducer {
    len: usize,
    tag_len: usize,
    basis: Vec<(usize, BitVector, BitVector)>,
}

impl Reducer {
    pub fn new(len: usize, tag_len: usize) -> Self {
        Reducer { len, tag_len, basis: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Reduces `v` against the basis, returning the residual and the
    /// combination of tags that was subtracted.
    pub fn reduce(&self, v: &BitVector) -> (BitVector, BitVector) {
        let mut residual = v.clone();
        let mut tags = zero_vector(self.tag_len);
        for (pivot, row, row_tags) in &self.basis {
            if residual.contains(*pivot) {
                residual ^= row;
                tags ^= row_tags;
            }
        }
        (residual, tags)
    }

    /// Adds `v` carrying `tags`; returns false when `v` was already in the span.
    pub fn insert(&mut self, v: &BitVector, tags: &BitVector) -> bool {
        debug_assert_eq!(v.len(), self.len);
        let (residual, reduced_tags) = self.reduce(v);
        let Some(pivot) = residual.minimum() else {
            return false;
        };
        let mut combined = tags.clone();
        combined ^= &reduced_tags;
        // keep earlier rows reduced against the new pivot so `reduce` is one pass
        for (_, row, row_tags) in &mut self.basis {
            if row.contains(pivot) {
                *row ^= &residual;
                *row_tags ^= &combined;
            }
        }
        self.basis.push((pivot, residual, combined));
        true
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).0.is_clear()
    }
}
