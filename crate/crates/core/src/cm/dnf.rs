//! Propositional formulas in disjunctive normal form.

use std::fmt;

use crate::error::{Error, Result};
use crate::eval::Verdict;
use crate::text::Cursor;

/// Largest variable count the truth-table sweep accepts by default.
pub const DEFAULT_DNF_GUARD: usize = 20;

/// A variable index and its polarity (`true` for `x`, `false` for `!x`).
pub type Literal = (usize, bool);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DNFFormula {
    vars: Vec<String>,
    disjuncts: Vec<Vec<Literal>>,
}

impl DNFFormula {
    pub fn new(vars: Vec<String>, disjuncts: Vec<Vec<Literal>>) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::Invalid("a DNF formula needs at least one variable".into()));
        }
        if disjuncts.is_empty() || disjuncts.iter().any(Vec::is_empty) {
            return Err(Error::Invalid("empty disjunction or conjunction".into()));
        }
        if disjuncts.iter().flatten().any(|&(v, _)| v >= vars.len()) {
            return Err(Error::Invalid("literal refers to an unknown variable".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::DuplicateVariable(v.clone()));
            }
        }
        Ok(DNFFormula { vars, disjuncts })
    }

    /// Parses `(x & !y) | (!x) | z`. Variables are numbered by first occurrence.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Cursor::new(text);
        let mut vars: Vec<String> = Vec::new();
        let mut disjuncts = Vec::new();
        loop {
            let conj = if c.eat("(") {
                let mut lits = vec![literal(&mut c, &mut vars)?];
                while c.eat("&") {
                    lits.push(literal(&mut c, &mut vars)?);
                }
                c.expect(")")?;
                lits
            } else {
                vec![literal(&mut c, &mut vars)?]
            };
            disjuncts.push(conj);
            if !c.eat("|") {
                break;
            }
        }
        c.finish()?;
        DNFFormula::new(vars, disjuncts)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn disjuncts(&self) -> &[Vec<Literal>] {
        &self.disjuncts
    }

    pub fn eval(&self, values: &[bool]) -> bool {
        self.disjuncts
            .iter()
            .any(|conj| conj.iter().all(|&(v, pos)| values[v] == pos))
    }
}

fn literal(c: &mut Cursor<'_>, vars: &mut Vec<String>) -> Result<Literal> {
    let pos = !c.eat("!");
    let name = c.ident()?;
    let idx = match vars.iter().position(|v| *v == name) {
        Some(i) => i,
        None => {
            vars.push(name);
            vars.len() - 1
        }
    };
    Ok((idx, pos))
}

impl fmt::Display for DNFFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, conj) in self.disjuncts.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "(")?;
            for (j, &(v, pos)) in conj.iter().enumerate() {
                if j > 0 {
                    write!(f, " & ")?;
                }
                write!(f, "{}{}", if pos { "" } else { "!" }, self.vars[v])?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

pub fn parse_dnf(text: &str) -> Result<DNFFormula> {
    DNFFormula::parse(text)
}

/// Truth-table sweep. The witness is the least falsifying assignment, with
/// variables in first-occurrence order and `false < true`.
///
/// ```
/// use ppcomp::cm::{decide_dnf_tautology, DNFFormula};
///
/// let phi = DNFFormula::parse("(x & y) | !x")?;
/// let v = decide_dnf_tautology(&phi)?;
/// assert_eq!(v.witness().unwrap(), &[("x".to_string(), true), ("y".to_string(), false)]);
/// # Ok::<(), ppcomp::Error>(())
/// ```
pub fn decide_dnf_tautology(phi: &DNFFormula) -> Result<Verdict<Vec<(String, bool)>>> {
    decide_dnf_tautology_with(phi, DEFAULT_DNF_GUARD)
}

pub fn decide_dnf_tautology_with(phi: &DNFFormula, guard: usize) -> Result<Verdict<Vec<(String, bool)>>> {
    let n = phi.vars.len();
    if n > guard {
        return Err(Error::BudgetExceeded(format!("{n} variables, guard is {guard}")));
    }
    let mut values = vec![false; n];
    for row in 0u64..(1u64 << n) {
        for (i, v) in values.iter_mut().enumerate() {
            *v = row >> (n - 1 - i) & 1 == 1;
        }
        if !phi.eval(&values) {
            return Ok(Verdict::No(phi.vars.iter().cloned().zip(values).collect()));
        }
    }
    Ok(Verdict::Yes)
}
