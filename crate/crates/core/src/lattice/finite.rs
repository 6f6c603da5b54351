//! Finite lattices given by meet and join tables.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::lattice::equiv::{join_via_product, EquivRelation};

/// Elements are `0..len`; `names` label them for printing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    names: Vec<String>,
    meet: Vec<usize>,
    join: Vec<usize>,
    partitions: Option<Vec<EquivRelation>>,
}

/// Outcome of the modular-law check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modularity {
    Modular,
    /// `x ≤ y` but `x ∨ (y ∧ z) ≠ y ∧ (x ∨ z)`.
    Violation { x: usize, y: usize, z: usize },
}

impl Modularity {
    pub fn is_modular(&self) -> bool {
        matches!(self, Modularity::Modular)
    }
}

impl FiniteLattice {
    /// Builds a lattice from its tables and checks the lattice axioms.
    pub fn from_tables(names: Vec<String>, meet: Vec<usize>, join: Vec<usize>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Invalid("a lattice needs at least one element".into()));
        }
        if meet.len() != n * n || join.len() != n * n {
            return Err(Error::Invalid("lattice tables must be n×n".into()));
        }
        if meet.iter().chain(&join).any(|&e| e >= n) {
            return Err(Error::Invalid("lattice table value out of range".into()));
        }
        let l = FiniteLattice {
            names,
            meet,
            join,
            partitions: None,
        };
        l.check_axioms()?;
        Ok(l)
    }

    /// Builds a lattice from a partial order given as `leq(a, b)`.
    pub fn from_order(names: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = names.len();
        let bound = |a: usize, b: usize, upper: bool| -> Result<usize> {
            let candidates: Vec<usize> = (0..n)
                .filter(|&c| if upper { leq(a, c) && leq(b, c) } else { leq(c, a) && leq(c, b) })
                .collect();
            candidates
                .iter()
                .copied()
                .find(|&c| {
                    candidates
                        .iter()
                        .all(|&d| if upper { leq(c, d) } else { leq(d, c) })
                })
                .ok_or_else(|| {
                    Error::Invalid(format!(
                        "elements {a} and {b} have no {}",
                        if upper { "least upper bound" } else { "greatest lower bound" }
                    ))
                })
        };
        let mut meet = Vec::with_capacity(n * n);
        let mut join = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                meet.push(bound(a, b, false)?);
                join.push(bound(a, b, true)?);
            }
        }
        FiniteLattice::from_tables(names, meet, join)
    }

    /// The lattice formed by a family of partitions closed under meet and join.
    ///
    /// Elements are ordered with finer partitions first.
    pub fn from_partitions(partitions: impl IntoIterator<Item = EquivRelation>) -> Result<Self> {
        let set: BTreeSet<EquivRelation> = partitions.into_iter().collect();
        if set.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let mut elems: Vec<EquivRelation> = set.into_iter().collect();
        elems.sort_by(|a, b| {
            b.num_blocks()
                .cmp(&a.num_blocks())
                .then_with(|| a.cmp(b))
        });
        let index: HashMap<&EquivRelation, usize> =
            elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let n = elems.len();
        let mut meet = Vec::with_capacity(n * n);
        let mut join = Vec::with_capacity(n * n);
        for a in &elems {
            for b in &elems {
                let m = a.meet(b)?;
                let j = join_via_product(&[a.clone(), b.clone()])?;
                let not_closed = || Error::Invalid("partition family is not closed under meet and join".into());
                meet.push(*index.get(&m).ok_or_else(not_closed)?);
                join.push(*index.get(&j).ok_or_else(not_closed)?);
            }
        }
        let names = elems.iter().map(|e| e.to_string()).collect();
        Ok(FiniteLattice {
            names,
            meet,
            join,
            partitions: Some(elems),
        })
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.len();
        let fail = |law: &str| Err(Error::Invalid(format!("lattice tables violate {law}")));
        for a in 0..n {
            if self.meet(a, a) != a || self.join(a, a) != a {
                return fail("idempotence");
            }
            for b in 0..n {
                if self.meet(a, b) != self.meet(b, a) || self.join(a, b) != self.join(b, a) {
                    return fail("commutativity");
                }
                if self.meet(a, self.join(a, b)) != a || self.join(a, self.meet(a, b)) != a {
                    return fail("absorption");
                }
                for c in 0..n {
                    if self.meet(a, self.meet(b, c)) != self.meet(self.meet(a, b), c)
                        || self.join(a, self.join(b, c)) != self.join(self.join(a, b), c)
                    {
                        return fail("associativity");
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// Always false; lattices are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == a
    }

    pub fn bottom(&self) -> usize {
        (1..self.len()).fold(0, |acc, a| self.meet(acc, a))
    }

    pub fn top(&self) -> usize {
        (1..self.len()).fold(0, |acc, a| self.join(acc, a))
    }

    /// The partitions behind each element, for lattices of equivalence relations.
    pub fn partitions(&self) -> Option<&[EquivRelation]> {
        self.partitions.as_deref()
    }

    pub fn index_of_partition(&self, e: &EquivRelation) -> Option<usize> {
        self.partitions.as_ref()?.iter().position(|p| p == e)
    }

    /// First triple in element order with `x ≤ y` violating the modular law.
    pub fn check_modular_law(&self) -> Modularity {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                if !self.le(x, y) {
                    continue;
                }
                for z in 0..n {
                    if self.join(x, self.meet(y, z)) != self.meet(y, self.join(x, z)) {
                        return Modularity::Violation { x, y, z };
                    }
                }
            }
        }
        Modularity::Modular
    }

    pub fn is_chain(&self) -> bool {
        (0..self.len()).all(|a| (0..self.len()).all(|b| self.le(a, b) || self.le(b, a)))
    }
}

pub fn check_modular_law(l: &FiniteLattice) -> Modularity {
    l.check_modular_law()
}

/// Closure of `gens` under meet and join: the generated sublattice of Eq(C).
///
/// Bottom and top are included only if generated.
pub fn sublattice_generated(gens: &[EquivRelation]) -> Result<FiniteLattice> {
    let first = gens.first().ok_or(Error::EmptyFamily)?;
    if gens.iter().any(|g| g.size() != first.size()) {
        return Err(Error::CarrierMismatch);
    }
    let mut elems: BTreeSet<EquivRelation> = gens.iter().cloned().collect();
    loop {
        let current: Vec<EquivRelation> = elems.iter().cloned().collect();
        let mut added = false;
        for a in &current {
            for b in &current {
                added |= elems.insert(a.meet(b)?);
                added |= elems.insert(join_via_product(&[a.clone(), b.clone()])?);
            }
        }
        if !added {
            break;
        }
    }
    FiniteLattice::from_partitions(elems)
}
