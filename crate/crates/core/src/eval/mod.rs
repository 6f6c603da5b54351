//! Semantics of pp-formulas and the equivalence/containment deciders.
//!
//! Both problems are decided exhaustively: each formula's solution set is
//! materialised through [`csp`] and the two sets are compared. The work is
//! exponential in the number of variables in the worst case, so the deciders
//! refuse inputs above [`Limits::max_vars`] total variables.

mod csp;

pub(crate) use csp::{Constraint, Problem, Table};

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{check_same_free, Assignment, Atom, PPFormula, Sort, SortedPPFormula};
use crate::lattice::Pentagon2Sorted;
use crate::structure::{Elem, RelStructure, Relation, Tuple, Universe};

/// Default cap on the total number of variables a decider accepts.
pub const DEFAULT_MAX_VARS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of variables (free plus bound) in either formula.
    pub max_vars: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_vars: DEFAULT_MAX_VARS,
        }
    }
}

impl Limits {
    pub fn unbounded() -> Self {
        Limits {
            max_vars: usize::MAX,
        }
    }

    pub fn with_max_vars(max_vars: usize) -> Self {
        Limits { max_vars }
    }

    fn check(&self, phi: &PPFormula) -> Result<()> {
        if phi.num_vars() > self.max_vars {
            return Err(Error::BudgetExceeded(format!(
                "`{}` has {} variables, limit is {}",
                phi.name(),
                phi.num_vars(),
                self.max_vars
            )));
        }
        Ok(())
    }
}

/// Outcome of a decision problem; a negative answer carries a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Yes,
    No(W),
}

impl<W> Verdict<W> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes)
    }

    pub fn is_no(&self) -> bool {
        !self.is_yes()
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Yes => None,
            Verdict::No(w) => Some(w),
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        match self {
            Verdict::Yes => Verdict::Yes,
            Verdict::No(w) => Verdict::No(f(w)),
        }
    }
}

/// Which of two compared formulas a witness satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => write!(f, "left"),
            Side::Right => write!(f, "right"),
        }
    }
}

/// An assignment of the free variables satisfying exactly one side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub assignment: Assignment,
    /// Element indices in free-variable order.
    pub values: Tuple,
    pub satisfies: Side,
}

/// A failing assignment together with the structure it fails on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntailmentWitness {
    /// Position of the structure in the list handed to the decider.
    pub structure: usize,
    pub assignment: Assignment,
    pub values: Tuple,
}

fn compile<'a>(b: &'a RelStructure, phi: &PPFormula) -> Result<Problem<'a>> {
    phi.validate(&b.signature())?;
    let index: HashMap<&str, usize> = phi
        .variables()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    let constraints = phi
        .atoms()
        .iter()
        .map(|atom| match atom {
            Atom::Eq(a, c) => Constraint {
                scope: vec![index[a.as_str()], index[c.as_str()]],
                table: Table::Eq,
            },
            Atom::Rel { symbol, args } => Constraint {
                scope: args.iter().map(|v| index[v.as_str()]).collect(),
                table: Table::Tuples(b.relation(symbol).expect("validated").tuples()),
            },
        })
        .collect();
    Ok(Problem {
        domains: vec![b.size(); phi.num_vars()],
        num_free: phi.free_vars().len(),
        constraints,
    })
}

/// `B, f ⊨ φ`: some extension of `f` to the bound variables satisfies every atom.
pub fn satisfies(b: &RelStructure, f: &Assignment, phi: &PPFormula) -> Result<bool> {
    let values = f.indices(phi.free_vars(), b.universe())?;
    compile(b, phi)?.holds(&values)
}

/// Like [`satisfies`] with the free values given as element indices.
pub fn satisfies_values(b: &RelStructure, values: &[Elem], phi: &PPFormula) -> Result<bool> {
    if values.len() != phi.free_vars().len() {
        return Err(Error::DomainMismatch {
            expected: phi.free_vars().to_vec(),
        });
    }
    compile(b, phi)?.holds(values)
}

/// Satisfying free-variable tuples, lexicographically ordered.
pub fn solution_tuples(b: &RelStructure, phi: &PPFormula) -> Result<Vec<Tuple>> {
    compile(b, phi)?.solutions()
}

/// Every satisfying assignment of the free variables, in lexicographic order.
///
/// ```
/// use ppcomp::{parse_pp_formula, parse_structure, solution_set};
///
/// let b = parse_structure("structure B { universe={0,1} relation R/2={(0,1)} }")?;
/// let phi = parse_pp_formula("phi(x) := exists y . R(x,y)", &b.signature())?;
/// let sols = solution_set(&b, &phi)?;
/// assert_eq!(sols.len(), 1);
/// assert_eq!(sols[0].get("x"), Some("0"));
/// # Ok::<(), ppcomp::Error>(())
/// ```
pub fn solution_set(b: &RelStructure, phi: &PPFormula) -> Result<Vec<Assignment>> {
    Ok(solution_tuples(b, phi)?
        .iter()
        .map(|t| Assignment::from_indices(phi.free_vars(), b.universe(), t))
        .collect())
}

/// The solution set as a relation whose columns follow the free variables.
pub fn solution_relation(b: &RelStructure, phi: &PPFormula) -> Result<Relation> {
    Relation::new(phi.free_vars().len(), solution_tuples(b, phi)?)
}

/// Reorders `psi`'s solution tuples so columns follow `order`.
fn permute_to(order: &[String], psi: &PPFormula, tuples: Vec<Tuple>) -> Vec<Tuple> {
    let perm: Vec<usize> = order
        .iter()
        .map(|v| psi.free_vars().iter().position(|w| w == v).unwrap())
        .collect();
    if perm.iter().enumerate().all(|(i, &p)| i == p) {
        return tuples;
    }
    let mut out: Vec<Tuple> = tuples
        .into_iter()
        .map(|t| perm.iter().map(|&p| t[p]).collect())
        .collect();
    out.sort_unstable();
    out
}

/// Least element of `left \ right` (and of `right \ left` when `both`).
fn first_difference(left: &[Tuple], right: &[Tuple], both: bool) -> Option<(Tuple, Side)> {
    let (mut i, mut j) = (0, 0);
    while i < left.len() {
        if j == right.len() || left[i] < right[j] {
            return Some((left[i].clone(), Side::Left));
        }
        if left[i] == right[j] {
            i += 1;
            j += 1;
        } else {
            if both {
                return Some((right[j].clone(), Side::Right));
            }
            j += 1;
        }
    }
    if both && j < right.len() {
        return Some((right[j].clone(), Side::Right));
    }
    None
}

fn decide(
    b: &RelStructure,
    phi: &PPFormula,
    psi: &PPFormula,
    limits: Limits,
    both: bool,
) -> Result<Verdict<Witness>> {
    check_same_free(phi, psi)?;
    limits.check(phi)?;
    limits.check(psi)?;
    let left = solution_tuples(b, phi)?;
    let right = permute_to(phi.free_vars(), psi, solution_tuples(b, psi)?);
    Ok(match first_difference(&left, &right, both) {
        None => Verdict::Yes,
        Some((values, side)) => Verdict::No(Witness {
            assignment: Assignment::from_indices(phi.free_vars(), b.universe(), &values),
            values,
            satisfies: side,
        }),
    })
}

/// Do `phi` and `psi` have the same solution set over `b`?
///
/// A negative verdict carries the lexicographically least assignment in the
/// symmetric difference.
///
/// ```
/// use ppcomp::{decide_ppeq, parse_pp_formula, parse_structure};
///
/// let b = parse_structure("structure B { universe={0,1} relation R/2={(0,1)} }")?;
/// let phi = parse_pp_formula("phi(x) := exists y . R(x,y)", &b.signature())?;
/// let psi = parse_pp_formula("psi(x) := exists y . R(y,x)", &b.signature())?;
/// let verdict = decide_ppeq(&b, &phi, &psi)?;
/// assert_eq!(verdict.witness().unwrap().assignment.to_string(), "x=0");
/// # Ok::<(), ppcomp::Error>(())
/// ```
pub fn decide_ppeq(b: &RelStructure, phi: &PPFormula, psi: &PPFormula) -> Result<Verdict<Witness>> {
    decide_ppeq_with(b, phi, psi, Limits::default())
}

pub fn decide_ppeq_with(
    b: &RelStructure,
    phi: &PPFormula,
    psi: &PPFormula,
    limits: Limits,
) -> Result<Verdict<Witness>> {
    decide(b, phi, psi, limits, true)
}

/// Is every solution of `phi` a solution of `psi` over `b`?
///
/// A negative verdict carries the least assignment satisfying `phi` but not `psi`.
pub fn decide_ppcon(b: &RelStructure, phi: &PPFormula, psi: &PPFormula) -> Result<Verdict<Witness>> {
    decide_ppcon_with(b, phi, psi, Limits::default())
}

pub fn decide_ppcon_with(
    b: &RelStructure,
    phi: &PPFormula,
    psi: &PPFormula,
    limits: Limits,
) -> Result<Verdict<Witness>> {
    decide(b, phi, psi, limits, false)
}

/// `(phi, phi ∧ psi)`: containment becomes equivalence.
pub fn reduce_con_to_eq(phi: &PPFormula, psi: &PPFormula) -> Result<(PPFormula, PPFormula)> {
    Ok((phi.clone(), phi.conjoin(psi)?))
}

fn sorted_domain(p2: &Pentagon2Sorted, s: Sort) -> &Universe {
    match s {
        Sort::One => p2.first(),
        Sort::Two => p2.second(),
    }
}

fn compile_sorted<'a>(p2: &'a Pentagon2Sorted, phi: &SortedPPFormula) -> Problem<'a> {
    let f = phi.formula();
    let index: HashMap<&str, usize> = f
        .variables()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    let constraints = f
        .atoms()
        .iter()
        .map(|atom| match atom {
            Atom::Eq(a, c) => Constraint {
                scope: vec![index[a.as_str()], index[c.as_str()]],
                table: Table::Eq,
            },
            Atom::Rel { args, .. } => Constraint {
                scope: args.iter().map(|v| index[v.as_str()]).collect(),
                table: Table::Tuples(p2.relation().tuples()),
            },
        })
        .collect();
    Problem {
        domains: f
            .variables()
            .map(|v| sorted_domain(p2, phi.sorts()[v]).len())
            .collect(),
        num_free: f.free_vars().len(),
        constraints,
    }
}

fn sorted_assignment(p2: &Pentagon2Sorted, phi: &SortedPPFormula, values: &[Elem]) -> Assignment {
    Assignment::new(phi.free_vars().iter().zip(values).map(|(v, &e)| {
        let u = sorted_domain(p2, phi.sorts()[v]);
        (v.clone(), u.name(e).to_string())
    }))
}

fn sorted_indices(p2: &Pentagon2Sorted, phi: &SortedPPFormula, f: &Assignment) -> Result<Vec<Elem>> {
    let free = phi.free_vars();
    if f.len() != free.len() {
        return Err(Error::DomainMismatch {
            expected: free.to_vec(),
        });
    }
    free.iter()
        .map(|v| {
            let name = f.get(v).ok_or_else(|| Error::DomainMismatch {
                expected: free.to_vec(),
            })?;
            let sort = phi.sorts()[v];
            sorted_domain(p2, sort).index_of(name).ok_or_else(|| {
                Error::SortViolation(format!("`{v}` has sort {sort} but `{name}` is not in that sort"))
            })
        })
        .collect()
}

/// Two-sorted analogue of [`satisfies`].
pub fn satisfies_sorted(p2: &Pentagon2Sorted, f: &Assignment, phi: &SortedPPFormula) -> Result<bool> {
    let values = sorted_indices(p2, phi, f)?;
    compile_sorted(p2, phi).holds(&values)
}

/// Satisfying free tuples; each value indexes the universe of its variable's sort.
pub fn sorted_solution_tuples(p2: &Pentagon2Sorted, phi: &SortedPPFormula) -> Result<Vec<Tuple>> {
    compile_sorted(p2, phi).solutions()
}

/// Does every solution of `phi` satisfy `psi` on each listed structure?
pub fn decide_entailment_sorted(
    phi: &SortedPPFormula,
    psi: &SortedPPFormula,
    structures: &[Pentagon2Sorted],
) -> Result<Verdict<EntailmentWitness>> {
    decide_entailment_sorted_with(phi, psi, structures, Limits::default())
}

pub fn decide_entailment_sorted_with(
    phi: &SortedPPFormula,
    psi: &SortedPPFormula,
    structures: &[Pentagon2Sorted],
    limits: Limits,
) -> Result<Verdict<EntailmentWitness>> {
    phi.check_same_free(psi)?;
    limits.check(phi.formula())?;
    limits.check(psi.formula())?;
    for (i, p2) in structures.iter().enumerate() {
        let left = sorted_solution_tuples(p2, phi)?;
        let right = permute_to(phi.free_vars(), psi.formula(), sorted_solution_tuples(p2, psi)?);
        if let Some((values, _)) = first_difference(&left, &right, false) {
            return Ok(Verdict::No(EntailmentWitness {
                structure: i,
                assignment: sorted_assignment(p2, phi, &values),
                values,
            }));
        }
    }
    Ok(Verdict::Yes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::parse_structure;

    fn example() -> RelStructure {
        parse_structure("structure B { universe={0,1} relation R/2={(0,1)} }").unwrap()
    }

    fn pp(text: &str, b: &RelStructure) -> PPFormula {
        PPFormula::parse(text, &b.signature()).unwrap()
    }

    #[test]
    fn satisfies_examples() {
        let b = example();
        let phi = pp("phi(x) := exists y . R(x,y)", &b);
        assert!(satisfies(&b, &Assignment::new([("x", "0")]), &phi).unwrap());
        assert!(!satisfies(&b, &Assignment::new([("x", "1")]), &phi).unwrap());
        let id = pp("phi(x) := x = x", &b);
        assert!(satisfies(&b, &Assignment::new([("x", "1")]), &id).unwrap());
        assert!(matches!(
            satisfies(&b, &Assignment::new([("y", "1")]), &id),
            Err(Error::DomainMismatch { .. })
        ));
    }

    #[test]
    fn sentences() {
        let b = example();
        let t = pp("s() := exists x, y . R(x, y)", &b);
        let f = pp("s() := exists x . R(x, x)", &b);
        assert_eq!(solution_tuples(&b, &t).unwrap(), vec![Vec::<Elem>::new()]);
        assert!(solution_tuples(&b, &f).unwrap().is_empty());
        let v = decide_ppeq(&b, &t, &f).unwrap();
        assert_eq!(v.witness().unwrap().satisfies, Side::Left);
    }

    #[test]
    fn ppeq_witness_prefers_least_assignment() {
        let b = example();
        let phi = pp("phi(x) := exists y . R(x,y)", &b);
        let psi = pp("psi(x) := exists y . R(y,x)", &b);
        let w = decide_ppeq(&b, &phi, &psi).unwrap();
        let w = w.witness().unwrap();
        assert_eq!(w.values, vec![0]);
        assert_eq!(w.satisfies, Side::Left);
        let w = decide_ppeq(&b, &psi, &phi).unwrap();
        assert_eq!(w.witness().unwrap().satisfies, Side::Right);
        assert!(decide_ppeq(&b, &phi, &phi).unwrap().is_yes());
    }

    #[test]
    fn ppcon_vacuous_and_free_order() {
        let b = parse_structure("structure B { universe={0,1} relation R/2={} }").unwrap();
        let phi = pp("phi(x) := R(x,x)", &b);
        let psi = pp("psi(x) := x = x", &b);
        assert!(decide_ppcon(&b, &phi, &psi).unwrap().is_yes());
        assert!(decide_ppcon(&b, &psi, &phi).unwrap().is_no());

        let b = example();
        let phi = pp("phi(x, y) := R(x, y)", &b);
        let psi = pp("psi(y, x) := R(x, y)", &b);
        assert!(decide_ppeq(&b, &phi, &psi).unwrap().is_yes());
    }

    #[test]
    fn variable_guard() {
        let b = example();
        let phi = pp("phi(x) := exists a, c, d . R(x, a) & R(c, d)", &b);
        let err = decide_ppeq_with(&b, &phi, &phi, Limits::with_max_vars(3)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded(_)));
        assert!(decide_ppeq_with(&b, &phi, &phi, Limits::with_max_vars(4)).unwrap().is_yes());
    }
}
