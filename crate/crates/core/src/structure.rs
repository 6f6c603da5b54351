//! Finite relational structures.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::text::{is_element_name, is_identifier, Cursor};

/// Index of an element inside its universe.
pub type Elem = usize;

/// A tuple of element indices.
pub type Tuple = Vec<Elem>;

/// Relation symbols and their arities.
pub type Signature = BTreeMap<String, usize>;

/// Separator between the components of a product element name.
pub const PRODUCT_SEPARATOR: char = '|';

/// An ordered, non-empty set of named elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    names: Vec<String>,
    index: HashMap<String, Elem>,
}

impl Universe {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if !is_element_name(name) {
                return Err(Error::InvalidElementName(name.clone()));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateElement(name.clone()));
            }
        }
        Ok(Universe { names, index })
    }

    /// The universe `{0, 1, ..., n-1}` with decimal names.
    pub fn range(n: usize) -> Result<Self> {
        Universe::new((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// Always false; universes are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<Elem> {
        self.index.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<Elem> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.names.len()
    }
}

/// A finitary relation over element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    arity: usize,
    tuples: BTreeSet<Tuple>,
}

impl Relation {
    pub fn new<I>(arity: usize, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = Tuple>,
    {
        let mut set = BTreeSet::new();
        for t in tuples {
            if t.len() != arity {
                return Err(Error::Invalid(format!(
                    "tuple of length {} in a relation of arity {arity}",
                    t.len()
                )));
            }
            set.insert(t);
        }
        Ok(Relation { arity, tuples: set })
    }

    pub fn empty(arity: usize) -> Self {
        Relation {
            arity,
            tuples: BTreeSet::new(),
        }
    }

    /// The relation `{(a, a) : a < n}`.
    pub fn equality(n: usize) -> Self {
        Relation {
            arity: 2,
            tuples: (0..n).map(|a| vec![a, a]).collect(),
        }
    }

    /// All `arity`-tuples over `{0..n}`.
    pub fn full(n: usize, arity: usize) -> Self {
        Relation {
            arity,
            tuples: all_tuples(n, arity).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, t: &[Elem]) -> bool {
        self.tuples.contains(t)
    }

    pub fn tuples(&self) -> &BTreeSet<Tuple> {
        &self.tuples
    }

    pub fn iter(&self) -> impl Iterator<Item = &Tuple> {
        self.tuples.iter()
    }

    pub fn insert(&mut self, t: Tuple) -> Result<bool> {
        if t.len() != self.arity {
            return Err(Error::Invalid(format!(
                "tuple of length {} in a relation of arity {}",
                t.len(),
                self.arity
            )));
        }
        Ok(self.tuples.insert(t))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.arity == other.arity && self.tuples.is_subset(&other.tuples)
    }

    /// Largest element index mentioned, if any.
    pub fn max_element(&self) -> Option<Elem> {
        self.tuples.iter().flatten().copied().max()
    }

    pub fn into_tuples(self) -> BTreeSet<Tuple> {
        self.tuples
    }
}

/// Lexicographic enumeration of `{0..n}^arity`, first coordinate most significant.
pub fn all_tuples(n: usize, arity: usize) -> impl Iterator<Item = Tuple> {
    let total = if arity == 0 {
        Some(1)
    } else {
        n.checked_pow(arity as u32)
    };
    let total = total.unwrap_or(usize::MAX);
    (0..total).map(move |mut idx| {
        let mut t = vec![0; arity];
        for slot in t.iter_mut().rev() {
            *slot = idx % n;
            idx /= n;
        }
        t
    })
}

/// A finite relational structure: a universe plus named relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelStructure {
    name: String,
    universe: Universe,
    relations: BTreeMap<String, Relation>,
}

impl RelStructure {
    pub fn new<I>(name: impl Into<String>, universe: Universe, relations: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, Relation)>,
    {
        let mut map = BTreeMap::new();
        for (symbol, rel) in relations {
            if !is_identifier(&symbol) {
                return Err(Error::Invalid(format!("invalid relation symbol `{symbol}`")));
            }
            if let Some(max) = rel.max_element() {
                if max >= universe.len() {
                    return Err(Error::UnknownElement(format!("#{max}")));
                }
            }
            if map.insert(symbol.clone(), rel).is_some() {
                return Err(Error::DuplicateSymbol(symbol));
            }
        }
        Ok(RelStructure {
            name: name.into(),
            universe,
            relations: map,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn relations(&self) -> &BTreeMap<String, Relation> {
        &self.relations
    }

    pub fn relation(&self, symbol: &str) -> Option<&Relation> {
        self.relations.get(symbol)
    }

    pub fn signature(&self) -> Signature {
        self.relations
            .iter()
            .map(|(s, r)| (s.clone(), r.arity()))
            .collect()
    }

    /// Parses the `structure NAME { ... }` grammar.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Cursor::new(text);
        let s = parse_structure_item(&mut c)?;
        c.finish()?;
        Ok(s)
    }

    /// Adds one singleton unary relation per element.
    ///
    /// The new symbols are `_c<i>` for element index `i`; if any of those is
    /// taken, a generation number is inserted (`_c<g>_<i>`). Applying the
    /// expansion twice therefore adds `2·|B|` relations.
    pub fn expand_with_constants(&self) -> RelStructure {
        let n = self.size();
        let names_for = |g: usize| -> Vec<String> {
            (0..n)
                .map(|i| {
                    if g == 0 {
                        format!("_c{i}")
                    } else {
                        format!("_c{g}_{i}")
                    }
                })
                .collect()
        };
        let names = (0..)
            .map(names_for)
            .find(|names| names.iter().all(|s| !self.relations.contains_key(s)))
            .expect("unbounded generations");
        let mut relations = self.relations.clone();
        for (i, symbol) in names.into_iter().enumerate() {
            relations.insert(
                symbol,
                Relation {
                    arity: 1,
                    tuples: BTreeSet::from([vec![i]]),
                },
            );
        }
        RelStructure {
            name: format!("{}_star", self.name),
            universe: self.universe.clone(),
            relations,
        }
    }

    /// Flattens a structure on a `k`-th power into a structure on the base set.
    ///
    /// Every element name must have the form `a1|...|ak` and the universe must
    /// be the full power `A^k` of the component set `A` (components collected
    /// in order of first appearance). An `m`-ary relation becomes `km`-ary.
    pub fn power_flatten(&self, k: usize) -> Result<RelStructure> {
        if k == 0 {
            return Err(Error::Invalid("power exponent must be at least 1".into()));
        }
        let mut base: Vec<String> = Vec::new();
        let mut components: Vec<Vec<Elem>> = Vec::with_capacity(self.size());
        for name in self.universe.names() {
            let parts: Vec<&str> = name.split(PRODUCT_SEPARATOR).collect();
            if parts.len() != k || parts.iter().any(|p| p.is_empty()) {
                return Err(Error::NotProductElement {
                    element: name.clone(),
                    k,
                });
            }
            let idx = parts
                .iter()
                .map(|p| match base.iter().position(|b| b == p) {
                    Some(i) => i,
                    None => {
                        base.push(p.to_string());
                        base.len() - 1
                    }
                })
                .collect();
            components.push(idx);
        }
        let expected = base.len().checked_pow(k as u32);
        if expected != Some(self.size()) {
            return Err(Error::Invalid(format!(
                "universe has {} elements but the {k}-th power of its {} components has {}",
                self.size(),
                base.len(),
                expected.map_or_else(|| "too many".to_string(), |e| e.to_string())
            )));
        }
        let universe = Universe::new(base)?;
        let relations = self
            .relations
            .iter()
            .map(|(symbol, rel)| {
                let tuples = rel
                    .iter()
                    .map(|t| t.iter().flat_map(|&e| components[e].iter().copied()).collect());
                let flat = Relation::new(rel.arity() * k, tuples).expect("arity is k*m");
                (symbol.clone(), flat)
            })
            .collect::<Vec<_>>();
        RelStructure::new(format!("{}_flat", self.name), universe, relations)
    }
}

pub(crate) fn parse_structure_item(c: &mut Cursor<'_>) -> Result<RelStructure> {
    c.expect_keyword("structure")?;
    let name = c.ident()?;
    c.expect("{")?;
    c.expect_keyword("universe")?;
    c.expect("=")?;
    let names = c.braced_list(|c| c.element())?;
    let universe = Universe::new(names)?;
    let mut relations: Vec<(String, Relation)> = Vec::new();
    while c.eat_keyword("relation") {
        let symbol = c.ident()?;
        if relations.iter().any(|(s, _)| *s == symbol) {
            return Err(Error::DuplicateSymbol(symbol));
        }
        c.expect("/")?;
        let arity = c.number()?;
        c.expect("=")?;
        let tuples = parse_tuple_set(c, &universe, &symbol, arity)?;
        relations.push((symbol, Relation::new(arity, tuples)?));
    }
    c.expect("}")?;
    RelStructure::new(name, universe, relations)
}

pub(crate) fn parse_tuple_set(
    c: &mut Cursor<'_>,
    universe: &Universe,
    symbol: &str,
    arity: usize,
) -> Result<Vec<Tuple>> {
    c.braced_list(|c| {
        let names = c.paren_list(|c| c.element())?;
        if names.len() != arity {
            return Err(Error::ArityMismatch {
                symbol: symbol.to_string(),
                expected: arity,
                found: names.len(),
            });
        }
        names.iter().map(|n| universe.lookup(n)).collect()
    })
}

pub(crate) fn write_tuple(f: &mut impl fmt::Write, universe: &Universe, t: &[Elem]) -> fmt::Result {
    write!(f, "(")?;
    for (i, &e) in t.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{}", universe.name(e))?;
    }
    write!(f, ")")
}

impl fmt::Display for RelStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "structure {} {{", self.name)?;
        writeln!(f, "  universe = {{{}}}", self.universe.names().join(", "))?;
        for (symbol, rel) in &self.relations {
            write!(f, "  relation {symbol}/{} = {{", rel.arity())?;
            for (i, t) in rel.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write_tuple(f, &self.universe, t)?;
            }
            writeln!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

pub fn parse_structure(text: &str) -> Result<RelStructure> {
    RelStructure::parse(text)
}

pub fn print_structure(s: &RelStructure) -> String {
    s.to_string()
}
