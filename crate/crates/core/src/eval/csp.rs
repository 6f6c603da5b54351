//! Join/project evaluation of conjunctive constraint problems.
//!
//! Every atom becomes a factor (a table over its distinct variables). Bound
//! variables are eliminated one at a time: the factors mentioning the variable
//! are joined and the variable is projected away. Whatever remains mentions
//! only free variables. Elimination order is greedy by neighbourhood size,
//! which keeps the tree-shaped formulas produced by the reductions cheap.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::structure::Tuple;

/// Upper bound on the number of cells in any intermediate table.
const MAX_CELLS: usize = 1 << 26;

#[derive(Clone, Copy)]
pub(crate) enum Table<'a> {
    Eq,
    Tuples(&'a BTreeSet<Tuple>),
}

pub(crate) struct Constraint<'a> {
    pub scope: Vec<usize>,
    pub table: Table<'a>,
}

/// Variables `0..num_free` are free, the rest are existentially quantified.
pub(crate) struct Problem<'a> {
    pub domains: Vec<usize>,
    pub num_free: usize,
    pub constraints: Vec<Constraint<'a>>,
}

#[derive(Debug, Clone)]
struct Factor {
    vars: Vec<usize>,
    data: Vec<u32>,
    rows: usize,
}

impl Factor {
    fn truth(value: bool) -> Factor {
        Factor {
            vars: Vec::new(),
            data: Vec::new(),
            rows: usize::from(value),
        }
    }

    fn row(&self, i: usize) -> &[u32] {
        let w = self.vars.len();
        &self.data[i * w..(i + 1) * w]
    }

    fn is_full(&self, domains: &[usize]) -> bool {
        let mut total: usize = 1;
        for &v in &self.vars {
            total = match total.checked_mul(domains[v]) {
                Some(t) => t,
                None => return false,
            };
        }
        self.rows == total
    }
}

fn check_cells(rows: usize, width: usize) -> Result<()> {
    if rows.saturating_mul(width.max(1)) > MAX_CELLS {
        return Err(Error::BudgetExceeded(format!(
            "intermediate table with {rows} rows of width {width}"
        )));
    }
    Ok(())
}

fn join(a: &Factor, b: &Factor) -> Result<Factor> {
    let (small, large) = if a.rows <= b.rows { (a, b) } else { (b, a) };
    let shared: Vec<usize> = small
        .vars
        .iter()
        .copied()
        .filter(|v| large.vars.contains(v))
        .collect();
    let mut vars: Vec<usize> = small.vars.iter().chain(large.vars.iter()).copied().collect();
    vars.sort_unstable();
    vars.dedup();

    let pos = |f: &Factor, v: usize| f.vars.iter().position(|&x| x == v).unwrap();
    let small_key: Vec<usize> = shared.iter().map(|&v| pos(small, v)).collect();
    let large_key: Vec<usize> = shared.iter().map(|&v| pos(large, v)).collect();
    // for each output column: (from_small, index)
    let sources: Vec<(bool, usize)> = vars
        .iter()
        .map(|&v| match small.vars.iter().position(|&x| x == v) {
            Some(i) => (true, i),
            None => (false, pos(large, v)),
        })
        .collect();

    let mut index: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
    for i in 0..small.rows {
        let row = small.row(i);
        index
            .entry(small_key.iter().map(|&k| row[k]).collect())
            .or_default()
            .push(i);
    }

    let mut data = Vec::new();
    let mut rows = 0;
    let mut key = Vec::with_capacity(large_key.len());
    for j in 0..large.rows {
        let lrow = large.row(j);
        key.clear();
        key.extend(large_key.iter().map(|&k| lrow[k]));
        if let Some(matches) = index.get(&key) {
            for &i in matches {
                let srow = small.row(i);
                data.extend(
                    sources
                        .iter()
                        .map(|&(from_small, k)| if from_small { srow[k] } else { lrow[k] }),
                );
                rows += 1;
            }
            check_cells(rows, vars.len())?;
        }
    }
    Ok(Factor { vars, data, rows })
}

fn project_out(f: &Factor, var: usize) -> Factor {
    let drop = f.vars.iter().position(|&v| v == var).expect("variable in factor");
    let vars: Vec<usize> = f.vars.iter().copied().filter(|&v| v != var).collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut data = Vec::new();
    for i in 0..f.rows {
        let row: Vec<u32> = f
            .row(i)
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != drop)
            .map(|(_, &x)| x)
            .collect();
        if seen.insert(row.clone()) {
            data.extend(row);
        }
    }
    Factor {
        rows: seen.len(),
        vars,
        data,
    }
}

/// Joins a group of factors, always continuing with the factor that shares
/// the most variables with the running result.
fn join_all(mut group: Vec<Factor>) -> Result<Factor> {
    if group.is_empty() {
        return Ok(Factor::truth(true));
    }
    group.sort_by_key(|f| f.rows);
    let mut acc = group.remove(0);
    while !group.is_empty() {
        let best = (0..group.len())
            .max_by_key(|&i| {
                let shared = group[i].vars.iter().filter(|v| acc.vars.contains(v)).count();
                (shared, std::cmp::Reverse(group[i].rows))
            })
            .unwrap();
        let next = group.swap_remove(best);
        acc = join(&acc, &next)?;
        if acc.rows == 0 {
            return Ok(acc);
        }
    }
    Ok(acc)
}

impl<'a> Problem<'a> {
    pub fn num_vars(&self) -> usize {
        self.domains.len()
    }

    fn factor_for(&self, c: &Constraint<'_>, fixed: &[Option<u32>]) -> Factor {
        let mut vars: Vec<usize> = c
            .scope
            .iter()
            .copied()
            .filter(|&v| fixed[v].is_none())
            .collect();
        vars.sort_unstable();
        vars.dedup();
        match c.table {
            Table::Eq => {
                let (a, b) = (c.scope[0], c.scope[1]);
                if a == b {
                    return Factor::truth(true);
                }
                match (fixed[a], fixed[b]) {
                    (Some(x), Some(y)) => Factor::truth(x == y),
                    (Some(x), None) | (None, Some(x)) => Factor {
                        vars,
                        data: vec![x],
                        rows: 1,
                    },
                    (None, None) => {
                        let n = self.domains[a].min(self.domains[b]) as u32;
                        Factor {
                            vars,
                            data: (0..n).flat_map(|x| [x, x]).collect(),
                            rows: n as usize,
                        }
                    }
                }
            }
            Table::Tuples(tuples) => {
                let mut data = Vec::new();
                let mut rows = 0;
                let mut slot: Vec<Option<u32>> = vec![None; vars.len()];
                'tuples: for t in tuples {
                    slot.iter_mut().for_each(|s| *s = None);
                    for (&v, &e) in c.scope.iter().zip(t) {
                        let e = e as u32;
                        if let Some(x) = fixed[v] {
                            if x != e {
                                continue 'tuples;
                            }
                            continue;
                        }
                        let k = vars.binary_search(&v).unwrap();
                        match slot[k] {
                            Some(prev) if prev != e => continue 'tuples,
                            _ => slot[k] = Some(e),
                        }
                    }
                    data.extend(slot.iter().map(|s| s.unwrap()));
                    rows += 1;
                }
                Factor { vars, data, rows }
            }
        }
    }

    /// Builds factors and eliminates every bound variable. Returns `None`
    /// when the problem is unsatisfiable under `fixed`.
    fn reduce(&self, fixed: &[Option<u32>]) -> Result<Option<Vec<Factor>>> {
        let mut factors = Vec::new();
        for c in &self.constraints {
            let f = self.factor_for(c, fixed);
            if f.rows == 0 {
                return Ok(None);
            }
            if !f.is_full(&self.domains) {
                factors.push(f);
            }
        }
        if self.domains[self.num_free..].contains(&0) {
            return Ok(None);
        }
        let mut pending: BTreeSet<usize> = (self.num_free..self.num_vars()).collect();
        while !pending.is_empty() {
            // pick the bound variable with the smallest neighbourhood
            let mut best: Option<((usize, usize, usize), usize)> = None;
            for &v in &pending {
                let mut neighbours: BTreeSet<usize> = BTreeSet::new();
                let mut count = 0;
                for f in &factors {
                    if f.vars.contains(&v) {
                        count += 1;
                        neighbours.extend(f.vars.iter().copied());
                    }
                }
                let key = (neighbours.len(), count, v);
                if best.is_none_or(|(k, _)| key < k) {
                    best = Some((key, v));
                }
            }
            let (_, var) = best.unwrap();
            pending.remove(&var);
            let (group, rest): (Vec<Factor>, Vec<Factor>) =
                factors.into_iter().partition(|f| f.vars.contains(&var));
            factors = rest;
            if group.is_empty() {
                continue;
            }
            let joined = join_all(group)?;
            if joined.rows == 0 {
                return Ok(None);
            }
            let projected = project_out(&joined, var);
            if !projected.is_full(&self.domains) {
                factors.push(projected);
            }
        }
        Ok(Some(factors))
    }

    /// Does some extension of the given free values satisfy every constraint?
    pub fn holds(&self, free_values: &[usize]) -> Result<bool> {
        debug_assert_eq!(free_values.len(), self.num_free);
        let mut fixed = vec![None; self.num_vars()];
        for (i, &x) in free_values.iter().enumerate() {
            if x >= self.domains[i] {
                return Ok(false);
            }
            fixed[i] = Some(x as u32);
        }
        Ok(match self.reduce(&fixed)? {
            None => false,
            Some(rest) => rest.iter().all(|f| f.rows > 0),
        })
    }

    /// All satisfying free-variable tuples in lexicographic order.
    pub fn solutions(&self) -> Result<Vec<Tuple>> {
        let fixed = vec![None; self.num_vars()];
        let Some(rest) = self.reduce(&fixed)? else {
            return Ok(Vec::new());
        };
        let joined = join_all(rest)?;
        if joined.rows == 0 {
            return Ok(Vec::new());
        }
        let free_domains = &self.domains[..self.num_free];
        let missing: Vec<usize> = (0..self.num_free)
            .filter(|v| !joined.vars.contains(v))
            .collect();
        let mut out = Vec::new();
        let mut full = vec![0usize; self.num_free];
        for i in 0..joined.rows {
            for (k, &v) in joined.vars.iter().enumerate() {
                full[v] = joined.row(i)[k] as usize;
            }
            extend_missing(&mut full, &missing, free_domains, 0, &mut out);
        }
        out.sort_unstable();
        Ok(out)
    }
}

fn extend_missing(
    full: &mut Vec<usize>,
    missing: &[usize],
    domains: &[usize],
    depth: usize,
    out: &mut Vec<Tuple>,
) {
    if depth == missing.len() {
        out.push(full.clone());
        return;
    }
    let v = missing[depth];
    for x in 0..domains[v] {
        full[v] = x;
        extend_missing(full, missing, domains, depth + 1, out);
    }
}
