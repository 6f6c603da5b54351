//! Finite algebras, polymorphisms and subpower closure.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::structure::{all_tuples, write_tuple, Elem, RelStructure, Relation, Tuple, Universe};
use crate::text::{is_identifier, Cursor};

/// Default cap on the number of candidate tables a polymorphism search may visit.
pub const DEFAULT_POLYMORPHISM_BUDGET: u64 = 4_000_000;

/// A total operation on `{0..n}`; `table[i]` is the value on the `i`-th
/// input tuple in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Operation {
    universe_size: usize,
    arity: usize,
    table: Vec<Elem>,
}

impl Operation {
    pub fn new(universe_size: usize, arity: usize, table: Vec<Elem>) -> Result<Self> {
        let expected = universe_size
            .checked_pow(arity as u32)
            .ok_or_else(|| Error::BudgetExceeded("operation table too large".into()))?;
        if table.len() != expected {
            return Err(Error::InvalidOperation(format!(
                "table has {} entries, expected {expected}",
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&e| e >= universe_size) {
            return Err(Error::InvalidOperation(format!("value #{bad} outside the universe")));
        }
        Ok(Operation {
            universe_size,
            arity,
            table,
        })
    }

    pub fn from_fn(universe_size: usize, arity: usize, f: impl Fn(&[Elem]) -> Elem) -> Result<Self> {
        let table = all_tuples(universe_size, arity).map(|t| f(&t)).collect();
        Operation::new(universe_size, arity, table)
    }

    pub fn projection(universe_size: usize, arity: usize, i: usize) -> Self {
        assert!(i < arity);
        Operation::from_fn(universe_size, arity, |t| t[i]).expect("projection is total")
    }

    pub fn constant(universe_size: usize, arity: usize, c: Elem) -> Self {
        Operation::from_fn(universe_size, arity, |_| c).expect("constant is total")
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    fn index(&self, args: &[Elem]) -> usize {
        args.iter().fold(0, |acc, &a| acc * self.universe_size + a)
    }

    pub fn apply(&self, args: &[Elem]) -> Elem {
        debug_assert_eq!(args.len(), self.arity);
        self.table[self.index(args)]
    }

    /// Applies the operation coordinatewise to `arity` tuples of equal length.
    pub fn apply_columns(&self, rows: &[&[Elem]]) -> Tuple {
        let len = rows.first().map_or(0, |r| r.len());
        let mut args = vec![0; self.arity];
        (0..len)
            .map(|j| {
                for (slot, row) in args.iter_mut().zip(rows) {
                    *slot = row[j];
                }
                self.apply(&args)
            })
            .collect()
    }

    /// Does the operation map every choice of `arity` tuples of `r` into `r`?
    pub fn preserves(&self, r: &Relation) -> bool {
        let tuples: Vec<&Tuple> = r.iter().collect();
        if tuples.is_empty() {
            return true;
        }
        let mut choice = vec![0usize; self.arity];
        let mut rows: Vec<&[Elem]> = vec![&[]; self.arity];
        loop {
            for (slot, &c) in rows.iter_mut().zip(&choice) {
                *slot = tuples[c];
            }
            if self.arity == 0 {
                // a nullary operation is a constant; its image is the constant tuple
                let c = self.table[0];
                return r.contains(&vec![c; r.arity()]);
            }
            if !r.contains(&self.apply_columns(&rows)) {
                return false;
            }
            let mut i = self.arity;
            loop {
                if i == 0 {
                    return true;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < tuples.len() {
                    break;
                }
                choice[i] = 0;
            }
        }
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.universe_size).all(|a| self.apply(&vec![a; self.arity]) == a)
    }
}

/// `f` preserves `r`; fails if `r` mentions elements outside `f`'s universe.
pub fn preserves(f: &Operation, r: &Relation) -> Result<bool> {
    if r.max_element().is_some_and(|m| m >= f.universe_size) {
        return Err(Error::UniverseMismatch);
    }
    Ok(f.preserves(r))
}

/// A finite universe with named basic operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinAlgebra {
    name: String,
    universe: Universe,
    operations: BTreeMap<String, Operation>,
}

impl FinAlgebra {
    pub fn new<I>(name: impl Into<String>, universe: Universe, operations: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, Operation)>,
    {
        let mut map = BTreeMap::new();
        for (symbol, op) in operations {
            if !is_identifier(&symbol) {
                return Err(Error::Invalid(format!("invalid operation symbol `{symbol}`")));
            }
            if op.universe_size != universe.len() {
                return Err(Error::UniverseMismatch);
            }
            if map.insert(symbol.clone(), op).is_some() {
                return Err(Error::DuplicateSymbol(symbol));
            }
        }
        Ok(FinAlgebra {
            name: name.into(),
            universe,
            operations: map,
        })
    }

    /// The algebra with no operations on `universe`.
    pub fn pure_set(name: impl Into<String>, universe: Universe) -> Self {
        FinAlgebra {
            name: name.into(),
            universe,
            operations: BTreeMap::new(),
        }
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

    pub fn operations(&self) -> &BTreeMap<String, Operation> {
        &self.operations
    }

    pub fn operation(&self, symbol: &str) -> Option<&Operation> {
        self.operations.get(symbol)
    }

    /// True iff every basic operation is idempotent.
    pub fn is_idempotent(&self) -> bool {
        self.operations.values().all(Operation::is_idempotent)
    }

    /// Does every basic operation preserve `r`?
    pub fn preserves(&self, r: &Relation) -> bool {
        self.operations.values().all(|f| f.preserves(r))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Cursor::new(text);
        let a = parse_algebra_item(&mut c)?;
        c.finish()?;
        Ok(a)
    }
}

pub(crate) fn parse_algebra_item(c: &mut Cursor<'_>) -> Result<FinAlgebra> {
    c.expect_keyword("algebra")?;
    let name = c.ident()?;
    c.expect("{")?;
    c.expect_keyword("universe")?;
    c.expect("=")?;
    let universe = Universe::new(c.braced_list(|c| c.element())?)?;
    let n = universe.len();
    let mut ops: Vec<(String, Operation)> = Vec::new();
    while c.eat_keyword("op") {
        let mark = c.mark();
        let symbol = c.ident()?;
        if ops.iter().any(|(s, _)| *s == symbol) {
            return Err(Error::DuplicateSymbol(symbol));
        }
        c.expect("/")?;
        let arity = c.number()?;
        c.expect("=")?;
        let size = n
            .checked_pow(arity as u32)
            .filter(|&s| s <= 1 << 24)
            .ok_or_else(|| c.error_at(mark, "operation table too large"))?;
        let mut table: Vec<Option<Elem>> = vec![None; size];
        let entries = c.braced_list(|c| {
            let args = c.paren_list(|c| c.element())?;
            c.expect(":")?;
            let value = c.element()?;
            Ok((args, value))
        })?;
        for (args, value) in entries {
            if args.len() != arity {
                return Err(Error::ArityMismatch {
                    symbol: symbol.clone(),
                    expected: arity,
                    found: args.len(),
                });
            }
            let mut idx = 0;
            for a in &args {
                idx = idx * n + universe.lookup(a)?;
            }
            let v = universe.lookup(&value)?;
            if table[idx].replace(v).is_some_and(|old| old != v) {
                return Err(Error::InvalidOperation(format!(
                    "`{symbol}` has two values on ({})",
                    args.join(", ")
                )));
            }
        }
        let table = table
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidOperation(format!("`{symbol}` is not total")))?;
        ops.push((symbol, Operation::new(n, arity, table)?));
    }
    c.expect("}")?;
    FinAlgebra::new(name, universe, ops)
}

impl fmt::Display for FinAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algebra {} {{", self.name)?;
        writeln!(f, "  universe = {{{}}}", self.universe.names().join(", "))?;
        for (symbol, op) in &self.operations {
            write!(f, "  op {symbol}/{} = {{", op.arity)?;
            for (i, t) in all_tuples(self.size(), op.arity).enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write_tuple(f, &self.universe, &t)?;
                write!(f, ":{}", self.universe.name(op.table[i]))?;
            }
            writeln!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

pub fn parse_algebra(text: &str) -> Result<FinAlgebra> {
    FinAlgebra::parse(text)
}

/// Visits the polymorphisms of `b` of the given arity in lexicographic table
/// order until `visit` returns `false`. Fails once more than `budget`
/// candidate tables would be needed.
pub fn for_each_polymorphism(
    b: &RelStructure,
    arity: usize,
    budget: u64,
    mut visit: impl FnMut(&Operation) -> bool,
) -> Result<()> {
    let n = b.size();
    let entries = n
        .checked_pow(arity as u32)
        .ok_or_else(|| Error::BudgetExceeded("operation table too large".into()))?;
    let candidates = (n as u64).checked_pow(entries as u32);
    if candidates.is_none_or(|c| c > budget) {
        return Err(Error::BudgetExceeded(format!(
            "{n}^{entries} candidate operations of arity {arity}, budget is {budget}"
        )));
    }
    let relations: Vec<&Relation> = b.relations().values().collect();
    let mut op = Operation {
        universe_size: n,
        arity,
        table: vec![0; entries],
    };
    loop {
        if relations.iter().all(|r| op.preserves(r)) && !visit(&op) {
            return Ok(());
        }
        let mut i = entries;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            op.table[i] += 1;
            if op.table[i] < n {
                break;
            }
            op.table[i] = 0;
        }
    }
}

/// All polymorphisms of `b` of the given arity, in lexicographic table order.
pub fn polymorphisms(b: &RelStructure, arity: usize) -> Result<Vec<Operation>> {
    polymorphisms_with_budget(b, arity, DEFAULT_POLYMORPHISM_BUDGET)
}

pub fn polymorphisms_with_budget(b: &RelStructure, arity: usize, budget: u64) -> Result<Vec<Operation>> {
    if arity == 0 {
        return Err(Error::Invalid("polymorphism arity must be at least 1".into()));
    }
    let mut out = Vec::new();
    for_each_polymorphism(b, arity, budget, |op| {
        out.push(op.clone());
        true
    })?;
    Ok(out)
}

/// Least subset of `A^n` containing `seed` (and every constant tuple when
/// `include_diagonal`) closed under the operations of `a`.
pub fn subpower_closure<'s, I>(a: &FinAlgebra, arity: usize, seed: I, include_diagonal: bool) -> Relation
where
    I: IntoIterator<Item = &'s Tuple>,
{
    let mut all: Vec<Tuple> = Vec::new();
    let mut seen: HashSet<Tuple> = HashSet::new();
    let mut push = |t: Tuple, all: &mut Vec<Tuple>| {
        if seen.insert(t.clone()) {
            all.push(t);
        }
    };
    for t in seed {
        assert_eq!(t.len(), arity, "seed tuple of the wrong length");
        push(t.clone(), &mut all);
    }
    if include_diagonal {
        for e in a.universe().elements() {
            push(vec![e; arity], &mut all);
        }
    }
    // semi-naive: each round only combines tuples involving the last round's additions
    let mut fresh_from = 0;
    loop {
        let len = all.len();
        for op in a.operations().values() {
            let r = op.arity;
            if r == 0 {
                push(vec![op.table[0]; arity], &mut all);
                continue;
            }
            let mut choice = vec![0usize; r];
            'combos: loop {
                if choice.iter().any(|&c| c >= fresh_from) {
                    let rows: Vec<&[Elem]> = choice.iter().map(|&c| all[c].as_slice()).collect();
                    let image = op.apply_columns(&rows);
                    push(image, &mut all);
                }
                let mut i = r;
                loop {
                    if i == 0 {
                        break 'combos;
                    }
                    i -= 1;
                    choice[i] += 1;
                    if choice[i] < len {
                        break;
                    }
                    choice[i] = 0;
                }
            }
        }
        if all.len() == len {
            break;
        }
        fresh_from = len;
    }
    Relation::new(arity, all).expect("uniform arity")
}

/// Result of the bounded pp-definability test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Definability {
    /// A polymorphism that does not preserve the relation.
    NotDefinable { witness: Operation },
    /// No polymorphism up to the given arity violates the relation.
    UndeterminedUpTo(usize),
}

/// Searches polymorphisms of arity `1..=arity_bound` (each arity in
/// lexicographic order) for one that fails to preserve `r`.
///
/// Finding one proves `r` is not pp-definable over `b`. Finding none is
/// inconclusive: completeness needs arity `|r|`.
pub fn pp_definability_check(b: &RelStructure, r: &Relation, arity_bound: usize) -> Result<Definability> {
    pp_definability_check_with_budget(b, r, arity_bound, DEFAULT_POLYMORPHISM_BUDGET)
}

pub fn pp_definability_check_with_budget(
    b: &RelStructure,
    r: &Relation,
    arity_bound: usize,
    budget: u64,
) -> Result<Definability> {
    if r.max_element().is_some_and(|m| m >= b.size()) {
        return Err(Error::UniverseMismatch);
    }
    for k in 1..=arity_bound {
        let mut found = None;
        for_each_polymorphism(b, k, budget, |op| {
            if op.preserves(r) {
                true
            } else {
                found = Some(op.clone());
                false
            }
        })?;
        if let Some(witness) = found {
            return Ok(Definability::NotDefinable { witness });
        }
    }
    Ok(Definability::UndeterminedUpTo(arity_bound))
}

pub fn is_idempotent(a: &FinAlgebra) -> bool {
    a.is_idempotent()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::parse_structure;

    fn min2() -> Operation {
        Operation::from_fn(2, 2, |t| t[0].min(t[1])).unwrap()
    }

    #[test]
    fn preserves_examples() {
        let swap = Relation::new(2, [vec![0, 1], vec![1, 0]]).unwrap();
        let leq = Relation::new(2, [vec![0, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert!(!min2().preserves(&swap));
        assert!(min2().preserves(&leq));
        for i in 0..3 {
            assert!(Operation::projection(2, 3, i).preserves(&swap));
        }
        let far = Relation::new(1, [vec![5]]).unwrap();
        assert_eq!(preserves(&min2(), &far), Err(Error::UniverseMismatch));
    }

    #[test]
    fn polymorphism_examples() {
        let empty = parse_structure("structure B { universe={0,1} }").unwrap();
        assert_eq!(polymorphisms(&empty, 1).unwrap().len(), 4);
        let b = parse_structure("structure B { universe={0,1} relation R/2={(0,1)} }").unwrap();
        let pols = polymorphisms(&b, 1).unwrap();
        assert_eq!(pols, vec![Operation::projection(2, 1, 0)]);
        let big = parse_structure("structure B { universe={0,1,2} }").unwrap();
        assert!(matches!(
            polymorphisms_with_budget(&big, 2, 1000),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn parse_and_print_algebra() {
        let a = parse_algebra(
            "algebra M { universe = {0,1} op m/2 = {(0,0):0,(0,1):0,(1,0):0,(1,1):1} op c/0 = {():1} }",
        )
        .unwrap();
        assert_eq!(a.operation("m").unwrap(), &min2());
        assert_eq!(parse_algebra(&a.to_string()).unwrap(), a);
        assert!(matches!(
            parse_algebra("algebra M { universe = {0,1} op m/1 = {(0):0} }"),
            Err(Error::InvalidOperation(_))
        ));
    }

    #[test]
    fn idempotence() {
        let u = Universe::range(2).unwrap();
        assert!(FinAlgebra::pure_set("P", u.clone()).is_idempotent());
        let c0 = FinAlgebra::new("C", u.clone(), [("f".into(), Operation::constant(2, 1, 0))]).unwrap();
        assert!(!c0.is_idempotent());
        let max = Operation::from_fn(2, 2, |t| t[0].max(t[1])).unwrap();
        let lat = FinAlgebra::new("L", u, [("min".into(), min2()), ("max".into(), max)]).unwrap();
        assert!(lat.is_idempotent());
    }

    #[test]
    fn closure_without_operations_adds_constants() {
        let a = FinAlgebra::pure_set("P", Universe::range(3).unwrap());
        let seed = vec![vec![0, 1]];
        let r = subpower_closure(&a, 2, &seed, true);
        assert_eq!(r.len(), 4);
        assert!(r.contains(&[2, 2]) && r.contains(&[0, 1]));
    }

    #[test]
    fn closure_under_min() {
        let a = FinAlgebra::new("M", Universe::range(2).unwrap(), [("m".into(), min2())]).unwrap();
        let seed = vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]];
        let r = subpower_closure(&a, 3, &seed, false);
        // all tuples with at least one zero
        assert_eq!(r.len(), 7);
        assert!(!r.contains(&[1, 1, 1]));
        assert!(a.preserves(&r));
    }

    #[test]
    fn definability_examples() {
        let b = parse_structure("structure B { universe={0,1} relation L/2={(0,0),(0,1),(1,1)} }").unwrap();
        let swap = Relation::new(2, [vec![0, 1], vec![1, 0]]).unwrap();
        match pp_definability_check(&b, &swap, 2).unwrap() {
            Definability::NotDefinable { witness } => {
                assert!(!witness.preserves(&swap));
                assert!(b.relations().values().all(|r| witness.preserves(r)));
            }
            other => panic!("{other:?}"),
        }
        let leq = b.relation("L").unwrap().clone();
        assert_eq!(
            pp_definability_check(&b, &leq, 2).unwrap(),
            Definability::UndeterminedUpTo(2)
        );
        assert_eq!(
            pp_definability_check(&b, &Relation::equality(2), 3).unwrap(),
            Definability::UndeterminedUpTo(3)
        );
    }
}
