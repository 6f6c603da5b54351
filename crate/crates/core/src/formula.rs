//! Primitive positive formulas: equalities and relational atoms, conjoined and
//! existentially quantified.
//!
//! Variables are kept in canonical order: the free variables first, then the
//! bound ones. Transformations downstream index variables by that order.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::structure::{Elem, Signature, Universe};
use crate::text::{is_identifier, Cursor};

/// Prefix reserved for generated variable names.
pub const RESERVED_PREFIX: char = '_';

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    Eq(String, String),
    Rel { symbol: String, args: Vec<String> },
}

impl Atom {
    pub fn eq(a: impl Into<String>, b: impl Into<String>) -> Self {
        Atom::Eq(a.into(), b.into())
    }

    pub fn rel<I, S>(symbol: impl Into<String>, args: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Atom::Rel {
            symbol: symbol.into(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }

    pub fn vars(&self) -> Vec<&str> {
        match self {
            Atom::Eq(a, b) => vec![a.as_str(), b.as_str()],
            Atom::Rel { args, .. } => args.iter().map(String::as_str).collect(),
        }
    }

    fn map_vars(&self, f: impl Fn(&str) -> String) -> Atom {
        match self {
            Atom::Eq(a, b) => Atom::Eq(f(a), f(b)),
            Atom::Rel { symbol, args } => Atom::Rel {
                symbol: symbol.clone(),
                args: args.iter().map(|a| f(a)).collect(),
            },
        }
    }

    /// Syntactic size: one for the predicate plus one per argument.
    pub fn size(&self) -> usize {
        match self {
            Atom::Eq(..) => 3,
            Atom::Rel { args, .. } => 1 + args.len(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Eq(a, b) => write!(f, "{a} = {b}"),
            Atom::Rel { symbol, args } => write!(f, "{symbol}({})", args.join(", ")),
        }
    }
}

/// `exists bound . atom_1 & ... & atom_n` with free variables `free`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PPFormula {
    name: String,
    free: Vec<String>,
    bound: Vec<String>,
    atoms: Vec<Atom>,
}

impl PPFormula {
    /// Builds a formula after checking the variable discipline: names are
    /// identifiers, declared once, free and bound disjoint, and every atom
    /// variable declared.
    pub fn new(
        name: impl Into<String>,
        free: Vec<String>,
        bound: Vec<String>,
        atoms: Vec<Atom>,
    ) -> Result<Self> {
        let name = name.into();
        let mut seen = HashSet::new();
        for v in &free {
            if !is_identifier(v) {
                return Err(Error::Invalid(format!("invalid variable name `{v}`")));
            }
            if !seen.insert(v.as_str()) {
                return Err(Error::DuplicateVariable(v.clone()));
            }
        }
        let free_set = seen.clone();
        for v in &bound {
            if !is_identifier(v) {
                return Err(Error::Invalid(format!("invalid variable name `{v}`")));
            }
            if free_set.contains(v.as_str()) {
                return Err(Error::FreeAndBound(v.clone()));
            }
            if !seen.insert(v.as_str()) {
                return Err(Error::DuplicateVariable(v.clone()));
            }
        }
        for atom in &atoms {
            for v in atom.vars() {
                if !seen.contains(v) {
                    return Err(Error::UnknownVariable(v.to_string()));
                }
            }
            if let Atom::Rel { symbol, .. } = atom {
                if !is_identifier(symbol) {
                    return Err(Error::Invalid(format!("invalid relation symbol `{symbol}`")));
                }
            }
        }
        Ok(PPFormula {
            name,
            free,
            bound,
            atoms,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn free_vars(&self) -> &[String] {
        &self.free
    }

    pub fn bound_vars(&self) -> &[String] {
        &self.bound
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Free variables followed by bound variables.
    pub fn variables(&self) -> impl Iterator<Item = &String> {
        self.free.iter().chain(self.bound.iter())
    }

    pub fn num_vars(&self) -> usize {
        self.free.len() + self.bound.len()
    }

    /// Sum of atom sizes plus one per quantified variable.
    pub fn size(&self) -> usize {
        self.atoms.iter().map(Atom::size).sum::<usize>() + self.bound.len()
    }

    /// Checks every relational atom against `sig`.
    pub fn validate(&self, sig: &Signature) -> Result<()> {
        for atom in &self.atoms {
            if let Atom::Rel { symbol, args } = atom {
                let arity = *sig
                    .get(symbol)
                    .ok_or_else(|| Error::UnknownSymbol(symbol.clone()))?;
                if arity != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: symbol.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Parses a formula and validates it against `sig`.
    pub fn parse(text: &str, sig: &Signature) -> Result<Self> {
        let phi = Self::parse_unchecked(text)?;
        phi.validate(sig)?;
        Ok(phi)
    }

    /// Parses a formula without a signature check.
    pub fn parse_unchecked(text: &str) -> Result<Self> {
        let mut c = Cursor::new(text);
        let raw = parse_raw(&mut c)?;
        c.finish()?;
        raw.into_plain(&c)
    }

    /// Conjunction with `other`; the solution set is the intersection.
    ///
    /// Bound variables of `other` that clash with any variable of `self` are
    /// renamed to fresh `_q<n>` names.
    pub fn conjoin(&self, other: &PPFormula) -> Result<PPFormula> {
        check_same_free(self, other)?;
        let mut used: HashSet<String> = self.variables().cloned().collect();
        used.extend(other.variables().cloned());
        let mut counter = 0;
        let mut renaming: HashMap<&str, String> = HashMap::new();
        let mut bound = self.bound.clone();
        for v in &other.bound {
            let name = if self.bound.contains(v) {
                let fresh = loop {
                    let candidate = format!("_q{counter}");
                    counter += 1;
                    if !used.contains(&candidate) {
                        break candidate;
                    }
                };
                used.insert(fresh.clone());
                fresh
            } else {
                v.clone()
            };
            renaming.insert(v, name.clone());
            bound.push(name);
        }
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().map(|a| {
            a.map_vars(|v| renaming.get(v).cloned().unwrap_or_else(|| v.to_string()))
        }));
        PPFormula::new(
            format!("{}_and_{}", self.name, other.name),
            self.free.clone(),
            bound,
            atoms,
        )
    }

    /// Replaces each variable `v` by `k` variables `v_1 .. v_k`; equalities
    /// become coordinatewise equalities and atom arities are multiplied by `k`.
    pub fn power_flatten(&self, k: usize) -> PPFormula {
        assert!(k >= 1, "power exponent must be at least 1");
        if k == 1 {
            return self.clone();
        }
        let mut used: HashSet<String> = self.variables().cloned().collect();
        let mut split: HashMap<&str, Vec<String>> = HashMap::new();
        for v in self.variables() {
            let parts = (1..=k)
                .map(|i| {
                    let name = fresh_name(&format!("{v}_{i}"), &used);
                    used.insert(name.clone());
                    name
                })
                .collect();
            split.insert(v, parts);
        }
        let expand = |vs: &[String]| -> Vec<String> {
            vs.iter().flat_map(|v| split[v.as_str()].iter().cloned()).collect()
        };
        let mut atoms = Vec::new();
        for atom in &self.atoms {
            match atom {
                Atom::Eq(a, b) => {
                    for (x, y) in split[a.as_str()].iter().zip(&split[b.as_str()]) {
                        atoms.push(Atom::Eq(x.clone(), y.clone()));
                    }
                }
                Atom::Rel { symbol, args } => atoms.push(Atom::Rel {
                    symbol: symbol.clone(),
                    args: expand(args),
                }),
            }
        }
        PPFormula::new(self.name.clone(), expand(&self.free), expand(&self.bound), atoms)
            .expect("fresh names keep the formula well formed")
    }

    fn write_with_sorts(
        &self,
        f: &mut fmt::Formatter<'_>,
        sorts: Option<&BTreeMap<String, Sort>>,
    ) -> fmt::Result {
        let decl = |v: &String| match sorts.and_then(|s| s.get(v)) {
            Some(s) => format!("{v}@{s}"),
            None => v.clone(),
        };
        let free: Vec<String> = self.free.iter().map(decl).collect();
        write!(f, "formula {}({}) := ", self.name, free.join(", "))?;
        if !self.bound.is_empty() {
            let bound: Vec<String> = self.bound.iter().map(decl).collect();
            write!(f, "exists {} . ", bound.join(", "))?;
        }
        if self.atoms.is_empty() {
            return write!(f, "true");
        }
        for (i, atom) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            write!(f, "{atom}")?;
        }
        Ok(())
    }
}

impl fmt::Display for PPFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with_sorts(f, None)
    }
}

pub(crate) fn check_same_free(a: &PPFormula, b: &PPFormula) -> Result<()> {
    let left: HashSet<&String> = a.free.iter().collect();
    let right: HashSet<&String> = b.free.iter().collect();
    if left != right || a.free.len() != b.free.len() {
        return Err(Error::FreeVariableMismatch {
            left: a.free.clone(),
            right: b.free.clone(),
        });
    }
    Ok(())
}

/// `base` itself, or `base` followed by as many `'` as needed to avoid `used`.
pub(crate) fn fresh_name(base: &str, used: &HashSet<String>) -> String {
    let mut name = base.to_string();
    while used.contains(&name) {
        name.push('\'');
    }
    name
}

pub fn parse_pp_formula(text: &str, sig: &Signature) -> Result<PPFormula> {
    PPFormula::parse(text, sig)
}

pub fn conjoin(phi: &PPFormula, psi: &PPFormula) -> Result<PPFormula> {
    phi.conjoin(psi)
}

pub fn power_flatten_formula(phi: &PPFormula, k: usize) -> PPFormula {
    phi.power_flatten(k)
}

/// Variable sort in a two-sorted formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    One,
    Two,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::One => write!(f, "1"),
            Sort::Two => write!(f, "2"),
        }
    }
}

/// The single ternary symbol of two-sorted formulas, typed `(1, 2, 2)`.
pub const SORTED_SYMBOL: &str = "R";

/// A pp-formula over `{R}` whose variables carry sorts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortedPPFormula {
    formula: PPFormula,
    sorts: BTreeMap<String, Sort>,
}

impl SortedPPFormula {
    pub fn new(formula: PPFormula, sorts: BTreeMap<String, Sort>) -> Result<Self> {
        for v in formula.variables() {
            if !sorts.contains_key(v) {
                return Err(Error::SortViolation(format!("variable `{v}` has no sort")));
            }
        }
        if let Some(extra) = sorts
            .keys()
            .find(|k| !formula.variables().any(|v| v == *k))
        {
            return Err(Error::UnknownVariable(extra.clone()));
        }
        for atom in formula.atoms() {
            match atom {
                Atom::Eq(a, b) => {
                    if sorts[a] != sorts[b] {
                        return Err(Error::SortViolation(format!(
                            "`{a} = {b}` relates variables of different sorts"
                        )));
                    }
                }
                Atom::Rel { symbol, args } => {
                    if symbol != SORTED_SYMBOL {
                        return Err(Error::UnknownSymbol(symbol.clone()));
                    }
                    if args.len() != 3 {
                        return Err(Error::ArityMismatch {
                            symbol: symbol.clone(),
                            expected: 3,
                            found: args.len(),
                        });
                    }
                    let pattern = [sorts[&args[0]], sorts[&args[1]], sorts[&args[2]]];
                    if pattern != [Sort::One, Sort::Two, Sort::Two] {
                        return Err(Error::SortViolation(format!(
                            "`{atom}` must have sort pattern (1, 2, 2)"
                        )));
                    }
                }
            }
        }
        Ok(SortedPPFormula { formula, sorts })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Cursor::new(text);
        let raw = parse_raw(&mut c)?;
        c.finish()?;
        raw.into_sorted(&c)
    }

    pub fn formula(&self) -> &PPFormula {
        &self.formula
    }

    pub fn sorts(&self) -> &BTreeMap<String, Sort> {
        &self.sorts
    }

    pub fn sort_of(&self, v: &str) -> Option<Sort> {
        self.sorts.get(v).copied()
    }

    pub fn free_vars(&self) -> &[String] {
        self.formula.free_vars()
    }

    pub fn bound_vars(&self) -> &[String] {
        self.formula.bound_vars()
    }

    pub fn atoms(&self) -> &[Atom] {
        self.formula.atoms()
    }

    pub fn name(&self) -> &str {
        self.formula.name()
    }

    pub fn size(&self) -> usize {
        self.formula.size()
    }

    /// Same free variables with the same sorts.
    pub(crate) fn check_same_free(&self, other: &SortedPPFormula) -> Result<()> {
        check_same_free(&self.formula, &other.formula)?;
        for v in self.free_vars() {
            if self.sorts[v] != other.sorts[v] {
                return Err(Error::SortViolation(format!(
                    "free variable `{v}` has different sorts"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for SortedPPFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.formula.write_with_sorts(f, Some(&self.sorts))
    }
}

/// Variable bindings, in variable order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Assignment {
    bindings: Vec<(String, String)>,
}

impl Assignment {
    pub fn new<I, V, E>(bindings: I) -> Self
    where
        I: IntoIterator<Item = (V, E)>,
        V: Into<String>,
        E: Into<String>,
    {
        Assignment {
            bindings: bindings
                .into_iter()
                .map(|(v, e)| (v.into(), e.into()))
                .collect(),
        }
    }

    /// Names the element indices of `values` through `universe`.
    pub fn from_indices(vars: &[String], universe: &Universe, values: &[Elem]) -> Self {
        Assignment {
            bindings: vars
                .iter()
                .zip(values)
                .map(|(v, &e)| (v.clone(), universe.name(e).to_string()))
                .collect(),
        }
    }

    pub fn get(&self, var: &str) -> Option<&str> {
        self.bindings
            .iter()
            .find(|(v, _)| v == var)
            .map(|(_, e)| e.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.bindings.iter().map(|(v, e)| (v.as_str(), e.as_str()))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Element indices for `vars`, failing unless the domain is exactly `vars`.
    pub fn indices(&self, vars: &[String], universe: &Universe) -> Result<Vec<Elem>> {
        let mismatch = || Error::DomainMismatch {
            expected: vars.to_vec(),
        };
        if self.bindings.len() != vars.len() {
            return Err(mismatch());
        }
        vars.iter()
            .map(|v| {
                let e = self.get(v).ok_or_else(mismatch)?;
                universe.lookup(e)
            })
            .collect()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bindings.is_empty() {
            return write!(f, "(empty)");
        }
        for (i, (v, e)) in self.bindings.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}={e}")?;
        }
        Ok(())
    }
}

struct RawVar {
    name: String,
    sort: Option<Sort>,
    mark: usize,
}

enum RawAtom {
    Eq(RawVar, RawVar),
    Rel(String, Vec<RawVar>),
}

struct RawFormula {
    name: String,
    free: Vec<RawVar>,
    bound: Vec<RawVar>,
    atoms: Vec<RawAtom>,
}

fn parse_var(c: &mut Cursor<'_>) -> Result<RawVar> {
    let mark = c.mark();
    let name = c.ident()?;
    let sort = if c.eat("@") {
        let n = c.number()?;
        Some(match n {
            1 => Sort::One,
            2 => Sort::Two,
            _ => return Err(c.error_at(mark, format!("sort must be 1 or 2, found {n}"))),
        })
    } else {
        None
    };
    Ok(RawVar { name, sort, mark })
}

fn parse_atom(c: &mut Cursor<'_>) -> Result<RawAtom> {
    let mark = c.mark();
    let first = parse_var(c)?;
    if first.sort.is_none() && c.peek() == Some('(') {
        let args = c.paren_list(parse_var)?;
        return Ok(RawAtom::Rel(first.name, args));
    }
    if !c.eat("=") {
        return Err(c.error_at(mark, "expected an atom `SYM(v, ...)` or `v = w`"));
    }
    let second = parse_var(c)?;
    Ok(RawAtom::Eq(first, second))
}

fn parse_raw(c: &mut Cursor<'_>) -> Result<RawFormula> {
    c.eat_keyword("formula");
    let name = c.ident()?;
    let free = c.paren_list(parse_var)?;
    c.expect(":=")?;
    let mut bound = Vec::new();
    while c.eat_keyword("exists") {
        loop {
            bound.push(parse_var(c)?);
            if !c.eat(",") {
                break;
            }
        }
        c.expect(".")?;
    }
    let mut atoms = Vec::new();
    if !c.eat_keyword("true") {
        loop {
            atoms.push(parse_atom(c)?);
            if !c.eat("&") {
                break;
            }
        }
    }
    Ok(RawFormula {
        name,
        free,
        bound,
        atoms,
    })
}

impl RawFormula {
    fn vars_in_order(&self) -> impl Iterator<Item = &RawVar> {
        self.free.iter().chain(self.bound.iter()).chain(self.atoms.iter().flat_map(|a| match a {
            RawAtom::Eq(x, y) => vec![x, y],
            RawAtom::Rel(_, args) => args.iter().collect(),
        }))
    }

    fn build(self, c: &Cursor<'_>) -> Result<PPFormula> {
        for v in &self.free {
            if v.name.starts_with(RESERVED_PREFIX) {
                return Err(Error::ReservedName(v.name.clone()));
            }
        }
        let free_names: Vec<String> = self.free.iter().map(|v| v.name.clone()).collect();
        let bound_names: Vec<String> = self.bound.iter().map(|v| v.name.clone()).collect();
        let atoms = self
            .atoms
            .iter()
            .map(|a| match a {
                RawAtom::Eq(x, y) => Atom::Eq(x.name.clone(), y.name.clone()),
                RawAtom::Rel(s, args) => Atom::Rel {
                    symbol: s.clone(),
                    args: args.iter().map(|v| v.name.clone()).collect(),
                },
            })
            .collect();
        PPFormula::new(self.name, free_names, bound_names, atoms).map_err(|e| match &e {
            Error::UnknownVariable(v) => {
                let mark = self
                    .atoms
                    .iter()
                    .flat_map(|a| match a {
                        RawAtom::Eq(x, y) => vec![x, y],
                        RawAtom::Rel(_, args) => args.iter().collect(),
                    })
                    .find(|rv| &rv.name == v)
                    .map(|rv| rv.mark);
                match mark {
                    Some(m) => c.error_at(m, format!("variable `{v}` is not declared")),
                    None => e,
                }
            }
            _ => e,
        })
    }

    fn into_plain(self, c: &Cursor<'_>) -> Result<PPFormula> {
        if let Some(v) = self.vars_in_order().find(|v| v.sort.is_some()) {
            return Err(c.error_at(v.mark, "sort annotation in an unsorted formula"));
        }
        self.build(c)
    }

    fn into_sorted(self, c: &Cursor<'_>) -> Result<SortedPPFormula> {
        let mut sorts: BTreeMap<String, Sort> = BTreeMap::new();
        for v in self.vars_in_order() {
            if let Some(s) = v.sort {
                match sorts.insert(v.name.clone(), s) {
                    Some(prev) if prev != s => {
                        return Err(Error::SortViolation(format!(
                            "variable `{}` annotated with sorts {prev} and {s}",
                            v.name
                        )))
                    }
                    _ => {}
                }
            }
        }
        let formula = self.build(c)?;
        SortedPPFormula::new(formula, sorts)
    }
}
