//! Finite graded-commutative algebras over Z/2 given by a multiplication
//! table, their tensor squares, and zero-divisor cup length.
//!
//! Elements are bit vectors over the basis. The product of two basis
//! elements is stored explicitly; everything else follows by bilinearity.

use thiserror::Error;

use crate::gf2::{unit_vector, zero_vector, BitMatrix, BitVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("basis label `{0}` appears twice")]
    DuplicateLabel(String),
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("unit `{0}` is not a degree-0 basis element")]
    BadUnit(String),
    #[error("{0} is not a unit for the multiplication")]
    NotUnital(String),
    #[error("product {0}·{1} is not homogeneous of the expected degree")]
    NotGraded(String, String),
    #[error("{0}·{1} differs from {1}·{0}")]
    NotCommutative(String, String),
    #[error("({0}·{1})·{2} differs from {0}·({1}·{2})")]
    NotAssociative(String, String, String),
}

/// A graded-commutative Z/2-algebra with an explicit basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingPresentation {
    labels: Vec<String>,
    degrees: Vec<usize>,
    unit: usize,
    table: Vec<Vec<BitVector>>,
}

impl RingPresentation {
    /// Builds a ring from its basis and the nonzero products of basis pairs,
    /// then validates the axioms. Pairs not listed multiply to zero; a listed
    /// pair `(x, y)` also sets `(y, x)`.
    pub fn new(
        basis_by_degree: Vec<Vec<String>>,
        unit: &str,
        products: &[(String, String, Vec<String>)],
    ) -> Result<Self, RingError> {
        let mut labels = Vec::new();
        let mut degrees = Vec::new();
        for (d, group) in basis_by_degree.into_iter().enumerate() {
            for label in group {
                if labels.contains(&label) {
                    return Err(RingError::DuplicateLabel(label));
                }
                labels.push(label);
                degrees.push(d);
            }
        }
        let n = labels.len();
        let find = |l: &str| labels.iter().position(|x| x == l).ok_or_else(|| RingError::UnknownLabel(l.to_string()));
        let unit_index = find(unit)?;
        if degrees[unit_index] != 0 {
            return Err(RingError::BadUnit(unit.to_string()));
        }
        let mut table = vec![vec![zero_vector(n); n]; n];
        for (x, y, result) in products {
            let (i, j) = (find(x)?, find(y)?);
            let mut v = zero_vector(n);
            for r in result {
                v.toggle(find(r)?);
            }
            table[i][j] = v.clone();
            table[j][i] = v;
        }
        let ring = RingPresentation { labels, degrees, unit: unit_index, table };
        ring.validate()?;
        Ok(ring)
    }

    pub(crate) fn from_parts(labels: Vec<String>, degrees: Vec<usize>, unit: usize, table: Vec<Vec<BitVector>>) -> Self {
        RingPresentation { labels, degrees, unit, table }
    }

    /// The ring of a point: `Z/2` in degree 0.
    pub fn point() -> Self {
        Self::new(vec![vec!["1".into()]], "1", &[("1".into(), "1".into(), vec!["1".into()])]).unwrap()
    }

    /// Exterior algebra on `k` degree-1 generators `x1..xk` (the cohomology of the `k`-torus).
    pub fn exterior(k: usize) -> Self {
        let n = 1 << k;
        let label = |mask: usize| {
            if mask == 0 {
                "1".to_string()
            } else {
                (0..k).filter(|b| mask >> b & 1 == 1).map(|b| format!("x{}", b + 1)).collect::<Vec<_>>().join("")
            }
        };
        let mut masks: Vec<usize> = (0..n).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        let position = |mask: usize| masks.iter().position(|&m| m == mask).unwrap();
        let labels: Vec<String> = masks.iter().map(|&m| label(m)).collect();
        let degrees: Vec<usize> = masks.iter().map(|m| m.count_ones() as usize).collect();
        let table = masks
            .iter()
            .map(|&a| masks.iter().map(|&b| if a & b == 0 { unit_vector(n, position(a | b)) } else { zero_vector(n) }).collect())
            .collect();
        Self::from_parts(labels, degrees, 0, table)
    }

    /// Cohomology ring of a wedge of `r` circles: all positive-degree products vanish.
    pub fn wedge_of_circles(r: usize) -> Self {
        let generators: Vec<String> = (1..=r).map(|i| format!("a{i}")).collect();
        Self::trivial_products(vec![vec!["1".into()], generators])
    }

    /// `1` plus the given positive-degree basis with every product of
    /// positive-degree elements equal to zero.
    pub fn trivial_products(basis_by_degree: Vec<Vec<String>>) -> Self {
        let all: Vec<String> = basis_by_degree.iter().flatten().cloned().collect();
        let unit = basis_by_degree[0][0].clone();
        let products: Vec<_> = all.iter().map(|x| (unit.clone(), x.clone(), vec![x.clone()])).collect();
        Self::new(basis_by_degree, &unit, &products).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn top_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// Basis indices grouped by degree.
    pub fn basis_by_degree(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.top_degree() + 1];
        for (i, &d) in self.degrees.iter().enumerate() {
            groups[d].push(i);
        }
        groups
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &BitVector {
        &self.table[i][j]
    }

    pub fn basis_element(&self, i: usize) -> BitVector {
        unit_vector(self.dim(), i)
    }

    pub fn mul(&self, a: &BitVector, b: &BitVector) -> BitVector {
        let mut out = zero_vector(self.dim());
        for i in a.ones() {
            for j in b.ones() {
                out ^= &self.table[i][j];
            }
        }
        out
    }

    /// Common degree of the basis elements in `v`, or `None` if mixed or zero.
    pub fn homogeneous_degree(&self, v: &BitVector) -> Option<usize> {
        let mut degrees = v.ones().map(|i| self.degrees[i]);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn format_element(&self, v: &BitVector) -> String {
        if v.is_clear() {
            return "0".to_string();
        }
        v.ones().map(|i| self.labels[i].as_str()).collect::<Vec<_>>().join(" + ")
    }

    /// Nonzero products of basis pairs `(i, j)` with `i <= j`.
    pub fn nonzero_products(&self) -> Vec<(usize, usize, &BitVector)> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in i..self.dim() {
                if !self.table[i][j].is_clear() {
                    out.push((i, j, &self.table[i][j]));
                }
            }
        }
        out
    }

    /// Checks unit, grading, commutativity and associativity on basis elements.
    pub fn validate(&self) -> Result<(), RingError> {
        let n = self.dim();
        if self.degrees[self.unit] != 0 {
            return Err(RingError::BadUnit(self.labels[self.unit].clone()));
        }
        for i in 0..n {
            let e = self.basis_element(i);
            if self.table[self.unit][i] != e || self.table[i][self.unit] != e {
                return Err(RingError::NotUnital(self.labels[self.unit].clone()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let p = &self.table[i][j];
                if p != &self.table[j][i] {
                    return Err(RingError::NotCommutative(self.labels[i].clone(), self.labels[j].clone()));
                }
                if p.ones().any(|k| self.degrees[k] != self.degrees[i] + self.degrees[j]) {
                    return Err(RingError::NotGraded(self.labels[i].clone(), self.labels[j].clone()));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.mul(&self.table[i][j], &self.basis_element(k));
                    let right = self.mul(&self.basis_element(i), &self.table[j][k]);
                    if left != right {
                        return Err(RingError::NotAssociative(
                            self.labels[i].clone(),
                            self.labels[j].clone(),
                            self.labels[k].clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// The multiplication map `R ⊗ R → R` evaluated on a tensor-square element.
    pub fn multiply_tensor(&self, v: &BitVector) -> BitVector {
        let n = self.dim();
        let mut out = zero_vector(n);
        for t in v.ones() {
            out ^= &self.table[t / n][t % n];
        }
        out
    }
}

/// `R ⊗ R` with basis `x⊗y` (index `x * dim + y`) and
/// `(x⊗y)(x'⊗y') = xx' ⊗ yy'`; signs vanish over Z/2.
pub fn tensor_square(ring: &RingPresentation) -> RingPresentation {
    let n = ring.dim();
    let labels = (0..n * n).map(|t| format!("{}⊗{}", ring.labels[t / n], ring.labels[t % n])).collect();
    let degrees = (0..n * n).map(|t| ring.degrees[t / n] + ring.degrees[t % n]).collect();
    let table = (0..n * n)
        .map(|s| {
            (0..n * n)
                .map(|t| {
                    let left = &ring.table[s / n][t / n];
                    let right = &ring.table[s % n][t % n];
                    let mut v = zero_vector(n * n);
                    for p in left.ones() {
                        for q in right.ones() {
                            v.toggle(p * n + q);
                        }
                    }
                    v
                })
                .collect()
        })
        .collect();
    RingPresentation::from_parts(labels, degrees, ring.unit * n + ring.unit, table)
}

/// Homogeneous basis of `ker(R ⊗ R → R)`, as elements of `tensor_square(ring)`,
/// in ascending degree.
pub fn zero_divisor_basis(ring: &RingPresentation) -> Vec<BitVector> {
    let n = ring.dim();
    let square_dim = n * n;
    let top = 2 * ring.top_degree();
    let mut basis = Vec::new();
    for d in 0..=top {
        let columns: Vec<usize> = (0..square_dim).filter(|&t| ring.degrees[t / n] + ring.degrees[t % n] == d).collect();
        if columns.is_empty() {
            continue;
        }
        let mut m = BitMatrix::zeros(n, columns.len());
        for (c, &t) in columns.iter().enumerate() {
            for r in ring.table[t / n][t % n].ones() {
                m.set(r, c, true);
            }
        }
        for kernel in m.nullspace() {
            let mut v = zero_vector(square_dim);
            for c in kernel.ones() {
                v.insert(columns[c]);
            }
            basis.push(v);
        }
    }
    basis
}

/// Outcome of [`zero_divisor_cup_length`]: the length found and a witnessing
/// product (empty when the length is 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroDivisorCupLength {
    pub length: usize,
    pub factors: Vec<BitVector>,
    pub product: Option<BitVector>,
}

/// Largest `r` (at most `cap`) such that some product of `r` homogeneous
/// zero-divisor basis elements is nonzero in `R ⊗ R`.
///
/// The search runs over multisets of positive-degree basis elements (the
/// ring is commutative) and prunes as soon as a partial product vanishes, so
/// products vanish beyond the top degree of `R ⊗ R` and the search
/// terminates. Degree-0 zero divisors exist only when `R⁰` has dimension
/// above 1 (a disconnected complex); they can be idempotent and are skipped,
/// which keeps the result a lower bound.
pub fn zero_divisor_cup_length(ring: &RingPresentation, cap: Option<usize>) -> ZeroDivisorCupLength {
    let square = tensor_square(ring);
    let basis: Vec<BitVector> =
        zero_divisor_basis(ring).into_iter().filter(|v| square.homogeneous_degree(v) != Some(0)).collect();
    let cap = cap.unwrap_or(usize::MAX);
    let mut best = ZeroDivisorCupLength { length: 0, factors: Vec::new(), product: None };
    let mut chosen = Vec::new();
    search(&square, &basis, 0, None, &mut chosen, cap, &mut best);
    best
}

fn search(
    square: &RingPresentation,
    basis: &[BitVector],
    start: usize,
    current: Option<&BitVector>,
    chosen: &mut Vec<usize>,
    cap: usize,
    best: &mut ZeroDivisorCupLength,
) {
    if chosen.len() >= cap {
        return;
    }
    for i in start..basis.len() {
        let product = match current {
            None => basis[i].clone(),
            Some(c) => square.mul(c, &basis[i]),
        };
        if product.is_clear() {
            continue;
        }
        chosen.push(i);
        if chosen.len() > best.length {
            best.length = chosen.len();
            best.factors = chosen.iter().map(|&k| basis[k].clone()).collect();
            best.product = Some(product.clone());
        }
        search(square, basis, i, Some(&product), chosen, cap, best);
        chosen.pop();
    }
}
