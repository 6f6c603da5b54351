//! Equivalence relations on `{0..n}` and relational products.

use std::fmt;

use crate::error::{Error, Result};
use crate::structure::{Elem, Relation};

/// A partition of `{0..n}`, stored as canonical block labels: blocks are
/// numbered in order of their least element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EquivRelation {
    labels: Vec<usize>,
}

fn canonical(labels: &[usize]) -> Vec<usize> {
    let mut map: Vec<Option<usize>> = Vec::new();
    let mut next = 0;
    labels
        .iter()
        .map(|&l| {
            if l >= map.len() {
                map.resize(l + 1, None);
            }
            *map[l].get_or_insert_with(|| {
                next += 1;
                next - 1
            })
        })
        .collect()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, a: usize) -> usize {
        let mut r = a;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut a = a;
        while self.0[a] != r {
            let next = self.0[a];
            self.0[a] = r;
            a = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.0[hi] = lo;
        true
    }

    fn labels(mut self) -> Vec<usize> {
        (0..self.0.len()).map(|a| self.find(a)).collect()
    }
}

impl EquivRelation {
    /// Builds a partition from arbitrary block labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        EquivRelation {
            labels: canonical(labels),
        }
    }

    /// Builds a partition from explicit blocks, which must be non-empty,
    /// disjoint and cover `{0..n}`.
    pub fn from_blocks(n: usize, blocks: &[Vec<Elem>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (i, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Invalid("empty block in a partition".into()));
            }
            for &e in block {
                if e >= n {
                    return Err(Error::Invalid(format!("block element #{e} outside the carrier")));
                }
                if labels[e] != usize::MAX {
                    return Err(Error::Invalid(format!("element #{e} lies in two blocks")));
                }
                labels[e] = i;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(Error::Invalid("blocks do not cover the carrier".into()));
        }
        Ok(EquivRelation::from_labels(&labels))
    }

    /// Least equivalence relation containing `pairs`.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (Elem, Elem)>) -> Self {
        let mut uf = UnionFind::new(n);
        for (a, b) in pairs {
            uf.union(a, b);
        }
        EquivRelation::from_labels(&uf.labels())
    }

    /// The equality relation `0_A`.
    pub fn identity(n: usize) -> Self {
        EquivRelation {
            labels: (0..n).collect(),
        }
    }

    /// The total relation `1_A`.
    pub fn full(n: usize) -> Self {
        EquivRelation { labels: vec![0; n] }
    }

    /// Size of the carrier.
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn block_of(&self, a: Elem) -> usize {
        self.labels[a]
    }

    pub fn num_blocks(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<Elem>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (a, &l) in self.labels.iter().enumerate() {
            out[l].push(a);
        }
        out
    }

    pub fn related(&self, a: Elem, b: Elem) -> bool {
        self.labels[a] == self.labels[b]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Elem, Elem)> + '_ {
        let n = self.size();
        (0..n).flat_map(move |a| (0..n).filter(move |&b| self.related(a, b)).map(move |b| (a, b)))
    }

    pub fn is_identity(&self) -> bool {
        self.num_blocks() == self.size()
    }

    pub fn is_full(&self) -> bool {
        self.num_blocks() <= 1
    }

    /// Refinement order: every block of `self` lies inside a block of `other`.
    pub fn le(&self, other: &EquivRelation) -> bool {
        self.size() == other.size()
            && self.pairs().all(|(a, b)| other.related(a, b))
    }

    pub fn lt(&self, other: &EquivRelation) -> bool {
        self != other && self.le(other)
    }

    fn same_carrier(&self, other: &EquivRelation) -> Result<()> {
        if self.size() != other.size() {
            return Err(Error::CarrierMismatch);
        }
        Ok(())
    }

    pub fn meet(&self, other: &EquivRelation) -> Result<EquivRelation> {
        self.same_carrier(other)?;
        let n = self.size();
        let pairs: Vec<usize> = (0..n)
            .map(|a| self.labels[a] * (n + 1) + other.labels[a])
            .collect();
        Ok(EquivRelation::from_labels(&pairs))
    }

    /// Join computed with union-find.
    pub fn join(&self, other: &EquivRelation) -> Result<EquivRelation> {
        self.same_carrier(other)?;
        let n = self.size();
        let mut uf = UnionFind::new(n);
        for labels in [&self.labels, &other.labels] {
            let mut rep = vec![usize::MAX; n];
            for (a, &l) in labels.iter().enumerate() {
                if rep[l] == usize::MAX {
                    rep[l] = a;
                }
                uf.union(rep[l], a);
            }
        }
        Ok(EquivRelation::from_labels(&uf.labels()))
    }

    pub fn as_matrix(&self) -> BoolMatrix {
        let n = self.size();
        let mut m = BoolMatrix::empty(n);
        for (a, b) in self.pairs() {
            m.set(a, b);
        }
        m
    }

    /// The relation as a set of pairs.
    pub fn as_relation(&self) -> Relation {
        Relation::new(2, self.pairs().map(|(a, b)| vec![a, b])).expect("pairs")
    }
}

impl fmt::Display for EquivRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, block) in self.blocks().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let names: Vec<String> = block.iter().map(|e| e.to_string()).collect();
            write!(f, "{{{}}}", names.join(", "))?;
        }
        write!(f, "}}")
    }
}

/// A binary relation on `{0..n}` as a boolean matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    n: usize,
    bits: Vec<bool>,
}

impl BoolMatrix {
    pub fn empty(n: usize) -> Self {
        BoolMatrix {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BoolMatrix::empty(n);
        for a in 0..n {
            m.set(a, a);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: Elem, b: Elem) -> bool {
        self.bits[a * self.n + b]
    }

    pub fn set(&mut self, a: Elem, b: Elem) {
        self.bits[a * self.n + b] = true;
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Elem, Elem)> + '_ {
        let n = self.n;
        (0..n * n).filter(|&i| self.bits[i]).map(move |i| (i / n, i % n))
    }

    /// `{(a, b) : exists c . (a, c) in self, (c, b) in other}`.
    pub fn compose(&self, other: &BoolMatrix) -> Result<BoolMatrix> {
        if self.n != other.n {
            return Err(Error::CarrierMismatch);
        }
        let n = self.n;
        let mut out = BoolMatrix::empty(n);
        for a in 0..n {
            for c in 0..n {
                if self.get(a, c) {
                    for b in 0..n {
                        if other.get(c, b) {
                            out.set(a, b);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// The partition this matrix describes, if it is an equivalence relation.
    pub fn to_equivalence(&self) -> Option<EquivRelation> {
        let n = self.n;
        let labels: Vec<usize> = (0..n)
            .map(|a| (0..n).find(|&b| self.get(a, b)).unwrap_or(usize::MAX))
            .collect();
        if labels.contains(&usize::MAX) {
            return None;
        }
        let e = EquivRelation::from_labels(&labels);
        (e.as_matrix() == *self).then_some(e)
    }
}

/// Relational product `theta ∘ theta_prime`.
pub fn compose(theta: &EquivRelation, theta_prime: &EquivRelation) -> Result<BoolMatrix> {
    theta.as_matrix().compose(&theta_prime.as_matrix())
}

/// `θ₁ ∨ ... ∨ θ_k` computed as `(θ₁ ∘ ... ∘ θ_k)^m` with `m` the carrier size.
pub fn join_via_product(thetas: &[EquivRelation]) -> Result<EquivRelation> {
    let first = thetas.first().ok_or(Error::EmptyFamily)?;
    let n = first.size();
    let mut product = first.as_matrix();
    for t in &thetas[1..] {
        product = product.compose(&t.as_matrix())?;
    }
    let mut power = BoolMatrix::identity(n);
    for _ in 0..n.max(1) {
        power = power.compose(&product)?;
    }
    Ok(power
        .to_equivalence()
        .expect("powers of a product of equivalences stabilise at their join"))
}

/// Intersection of a non-empty family.
pub fn meet(thetas: &[EquivRelation]) -> Result<EquivRelation> {
    let (first, rest) = thetas.split_first().ok_or(Error::EmptyFamily)?;
    rest.iter().try_fold(first.clone(), |acc, t| acc.meet(t))
}

/// Restricted growth strings of length `n`, i.e. every partition of `{0..n}`
/// exactly once, in lexicographic label order.
pub fn all_partitions(n: usize) -> Vec<EquivRelation> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<EquivRelation>) {
        if i == labels.len() {
            out.push(EquivRelation {
                labels: labels.clone(),
            });
            return;
        }
        for l in 0..=max + 1 {
            labels[i] = l;
            rec(i + 1, max.max(l), labels, out);
        }
    }
    if n == 0 {
        return vec![EquivRelation { labels: Vec::new() }];
    }
    rec(1, 0, &mut labels, &mut out);
    out
}
