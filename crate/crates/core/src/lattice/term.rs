//! Lattice terms over variables with finitary meets and joins.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::eval::Verdict;
use crate::lattice::finite::FiniteLattice;
use crate::text::Cursor;

/// Keyword used for join inside the term grammar; not a valid variable.
const JOIN_KEYWORD: &str = "v";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LatticeTerm {
    Var(String),
    Meet(Vec<LatticeTerm>),
    Join(Vec<LatticeTerm>),
}

impl LatticeTerm {
    pub fn var(name: impl Into<String>) -> Self {
        LatticeTerm::Var(name.into())
    }

    pub fn meet(args: Vec<LatticeTerm>) -> Self {
        assert!(!args.is_empty(), "meet of no arguments");
        LatticeTerm::Meet(args)
    }

    pub fn join(args: Vec<LatticeTerm>) -> Self {
        assert!(!args.is_empty(), "join of no arguments");
        LatticeTerm::Join(args)
    }

    /// Height of the syntax tree; variables have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            LatticeTerm::Var(_) => 0,
            LatticeTerm::Meet(a) | LatticeTerm::Join(a) => {
                1 + a.iter().map(LatticeTerm::depth).max().unwrap_or(0)
            }
        }
    }

    /// Number of variable occurrences.
    pub fn leaves(&self) -> usize {
        match self {
            LatticeTerm::Var(_) => 1,
            LatticeTerm::Meet(a) | LatticeTerm::Join(a) => a.iter().map(LatticeTerm::leaves).sum(),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            LatticeTerm::Var(_) => 1,
            LatticeTerm::Meet(a) | LatticeTerm::Join(a) => 1 + a.iter().map(LatticeTerm::size).sum::<usize>(),
        }
    }

    /// Distinct variables in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            LatticeTerm::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            LatticeTerm::Meet(a) | LatticeTerm::Join(a) => {
                for t in a {
                    t.collect_vars(out);
                }
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Cursor::new(text);
        let t = parse_term(&mut c)?;
        c.finish()?;
        Ok(t)
    }

    /// Evaluates bottom-up with variables mapped to lattice elements.
    pub fn eval(&self, g: &HashMap<String, usize>, l: &FiniteLattice) -> Result<usize> {
        match self {
            LatticeTerm::Var(v) => g
                .get(v)
                .copied()
                .ok_or_else(|| Error::UnboundVariable(v.clone())),
            LatticeTerm::Meet(a) => {
                let mut acc = a[0].eval(g, l)?;
                for t in &a[1..] {
                    acc = l.meet(acc, t.eval(g, l)?);
                }
                Ok(acc)
            }
            LatticeTerm::Join(a) => {
                let mut acc = a[0].eval(g, l)?;
                for t in &a[1..] {
                    acc = l.join(acc, t.eval(g, l)?);
                }
                Ok(acc)
            }
        }
    }

    /// Evaluation with values given positionally for `vars`.
    pub(crate) fn eval_indexed(&self, vars: &[String], values: &[usize], l: &FiniteLattice) -> usize {
        match self {
            LatticeTerm::Var(v) => values[vars.iter().position(|w| w == v).expect("bound variable")],
            LatticeTerm::Meet(a) => a[1..]
                .iter()
                .fold(a[0].eval_indexed(vars, values, l), |acc, t| {
                    l.meet(acc, t.eval_indexed(vars, values, l))
                }),
            LatticeTerm::Join(a) => a[1..]
                .iter()
                .fold(a[0].eval_indexed(vars, values, l), |acc, t| {
                    l.join(acc, t.eval_indexed(vars, values, l))
                }),
        }
    }
}

fn parse_term(c: &mut Cursor<'_>) -> Result<LatticeTerm> {
    if c.eat("(") {
        let first = parse_term(c)?;
        let is_join = if c.eat("^") {
            false
        } else if c.eat_keyword(JOIN_KEYWORD) {
            true
        } else {
            c.expect(")")?;
            return Ok(first);
        };
        let mut args = vec![first];
        loop {
            args.push(parse_term(c)?);
            if c.eat(")") {
                break;
            }
            let same = if is_join { c.eat_keyword(JOIN_KEYWORD) } else { c.eat("^") };
            if !same {
                return Err(c.error("expected the same operator or `)`; mixing `^` and `v` needs parentheses"));
            }
        }
        Ok(if is_join {
            LatticeTerm::Join(args)
        } else {
            LatticeTerm::Meet(args)
        })
    } else {
        let mark = c.mark();
        let name = c.ident()?;
        if name == JOIN_KEYWORD {
            return Err(c.error_at(mark, "`v` is the join operator, not a variable"));
        }
        Ok(LatticeTerm::Var(name))
    }
}

impl fmt::Display for LatticeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (args, op) = match self {
            LatticeTerm::Var(v) => return write!(f, "{v}"),
            LatticeTerm::Meet(a) => (a, " ^ "),
            LatticeTerm::Join(a) => (a, " v "),
        };
        write!(f, "(")?;
        for (i, t) in args.iter().enumerate() {
            if i > 0 {
                write!(f, "{op}")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

pub fn parse_lattice_term(text: &str) -> Result<LatticeTerm> {
    LatticeTerm::parse(text)
}

pub fn eval_lattice_term(t: &LatticeTerm, g: &HashMap<String, usize>, l: &FiniteLattice) -> Result<usize> {
    t.eval(g, l)
}

/// Lattices above this size are swept only for terms with few variables.
pub const TERM_INEQ_LARGE_LATTICE: usize = 12;
/// Variable cap for lattices above [`TERM_INEQ_LARGE_LATTICE`].
pub const TERM_INEQ_LARGE_VARS: usize = 4;

/// The lattice and assignment on which `t ≤ t'` fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermWitness {
    pub lattice: usize,
    /// Variables in first-occurrence order across both terms, with their values.
    pub assignment: Vec<(String, usize)>,
}

/// Does `t ≤ t'` hold under every assignment into each lattice?
///
/// With `allowed`, lattice `i` is swept only over the elements in
/// `allowed[i]` (S-assignments). The witness is the first failing lattice
/// and its lexicographically least failing assignment.
pub fn decide_term_ineq(
    t: &LatticeTerm,
    t_prime: &LatticeTerm,
    lattices: &[FiniteLattice],
    allowed: Option<&[Vec<usize>]>,
) -> Result<Verdict<TermWitness>> {
    let mut vars = t.variables();
    t_prime.collect_vars(&mut vars);
    if let Some(a) = allowed {
        if a.len() != lattices.len() {
            return Err(Error::Invalid("one generator subset per lattice is required".into()));
        }
    }
    for (li, l) in lattices.iter().enumerate() {
        if l.len() > TERM_INEQ_LARGE_LATTICE && vars.len() > TERM_INEQ_LARGE_VARS {
            return Err(Error::BudgetExceeded(format!(
                "{} variables over a {}-element lattice",
                vars.len(),
                l.len()
            )));
        }
        let domain: Vec<usize> = match allowed {
            Some(a) => {
                let mut d = a[li].clone();
                d.sort_unstable();
                d.dedup();
                if d.iter().any(|&e| e >= l.len()) {
                    return Err(Error::Invalid("generator index outside the lattice".into()));
                }
                d
            }
            None => (0..l.len()).collect(),
        };
        if domain.is_empty() {
            continue;
        }
        let mut choice = vec![0usize; vars.len()];
        let mut values = vec![0usize; vars.len()];
        loop {
            for (v, &c) in values.iter_mut().zip(&choice) {
                *v = domain[c];
            }
            let left = t.eval_indexed(&vars, &values, l);
            let right = t_prime.eval_indexed(&vars, &values, l);
            if !l.le(left, right) {
                return Ok(Verdict::No(TermWitness {
                    lattice: li,
                    assignment: vars.iter().cloned().zip(values).collect(),
                }));
            }
            let mut i = vars.len();
            let done = loop {
                if i == 0 {
                    break true;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < domain.len() {
                    break false;
                }
                choice[i] = 0;
            };
            if done {
                break;
            }
        }
    }
    Ok(Verdict::Yes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::equiv::EquivRelation;

    fn two() -> FiniteLattice {
        FiniteLattice::from_partitions([EquivRelation::identity(2), EquivRelation::full(2)]).unwrap()
    }

    #[test]
    fn parse_print_and_measure() {
        let t = LatticeTerm::parse("((x ^ y) v z v x)").unwrap();
        assert_eq!(t.depth(), 2);
        assert_eq!(t.leaves(), 4);
        assert_eq!(t.variables(), vec!["x", "y", "z"]);
        assert_eq!(LatticeTerm::parse(&t.to_string()).unwrap(), t);
        assert!(LatticeTerm::parse("(x ^ y v z)").is_err());
        assert!(LatticeTerm::parse("v").is_err());
        assert_eq!(LatticeTerm::parse("(x)").unwrap(), LatticeTerm::var("x"));
        // `vx` is a variable, not a join
        assert_eq!(
            LatticeTerm::parse("(x v vx)").unwrap(),
            LatticeTerm::join(vec![LatticeTerm::var("x"), LatticeTerm::var("vx")])
        );
    }

    #[test]
    fn evaluation() {
        let l = two();
        let g: HashMap<String, usize> = [("x".to_string(), 1), ("y".to_string(), 0)].into();
        assert_eq!(LatticeTerm::parse("x").unwrap().eval(&g, &l).unwrap(), 1);
        assert_eq!(LatticeTerm::parse("(x ^ x)").unwrap().eval(&g, &l).unwrap(), 1);
        assert_eq!(LatticeTerm::parse("(x ^ y)").unwrap().eval(&g, &l).unwrap(), 0);
        assert_eq!(
            LatticeTerm::parse("(x v z)").unwrap().eval(&g, &l),
            Err(Error::UnboundVariable("z".into()))
        );
    }

    #[test]
    fn inequality_examples() {
        let l = two();
        let join = LatticeTerm::parse("(x1 v x2)").unwrap();
        let meet = LatticeTerm::parse("(x1 ^ x2)").unwrap();
        let v = decide_term_ineq(&join, &meet, std::slice::from_ref(&l), None).unwrap();
        assert_eq!(
            v.witness().unwrap().assignment,
            vec![("x1".to_string(), 0), ("x2".to_string(), 1)]
        );
        assert!(decide_term_ineq(&meet, &join, std::slice::from_ref(&l), None).unwrap().is_yes());
        // a single allowed value makes both sides equal
        let only = vec![vec![1]];
        assert!(decide_term_ineq(&join, &meet, std::slice::from_ref(&l), Some(&only))
            .unwrap()
            .is_yes());
    }
}
