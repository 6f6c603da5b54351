//! Independent oracles and random instance generators shared by the
//! integration tests. Nothing here calls the evaluation engine.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use ppcomp::formula::{Sort, SortedPPFormula};
use ppcomp::lattice::LatticeTerm;
use ppcomp::{Atom, PPFormula, RelStructure, Relation, Universe};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every tuple of length `len` over `0..n`, last coordinate fastest.
pub fn odometer(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * n);
        for t in &out {
            for e in 0..n {
                let mut u = t.clone();
                u.push(e);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

pub fn random_relation(rng: &mut ChaCha8Rng, n: usize, arity: usize) -> Relation {
    let density: f64 = rng.gen_range(0.15..0.7);
    let tuples: Vec<Vec<usize>> = odometer(n, arity)
        .into_iter()
        .filter(|_| rng.gen_bool(density))
        .collect();
    Relation::new(arity, tuples).unwrap()
}

/// Up to `max_rels` relations `R0, R1, ..` of arity 1 or 2 on `0..n`.
pub fn random_structure(rng: &mut ChaCha8Rng, n: usize, max_rels: usize) -> RelStructure {
    let count = rng.gen_range(1..=max_rels);
    let rels: Vec<(String, Relation)> = (0..count)
        .map(|i| {
            let arity = rng.gen_range(1..=2);
            (format!("R{i}"), random_relation(rng, n, arity))
        })
        .collect();
    RelStructure::new("B", Universe::range(n).unwrap(), rels).unwrap()
}

pub fn free_names(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("x{i}")).collect()
}

/// Random atoms over `free` plus `bound` bound variables named `w1..`.
pub fn random_formula(
    rng: &mut ChaCha8Rng,
    b: &RelStructure,
    name: &str,
    free: &[String],
    bound: usize,
    max_atoms: usize,
) -> PPFormula {
    let bound: Vec<String> = (1..=bound).map(|i| format!("w{i}")).collect();
    let vars: Vec<String> = free.iter().chain(&bound).cloned().collect();
    let sig: Vec<(String, usize)> = b.signature().into_iter().collect();
    // with no variables the only pp-formula is the empty conjunction
    let count = if vars.is_empty() { 0 } else { rng.gen_range(1..=max_atoms) };
    let atoms = (0..count)
        .map(|_| {
            if rng.gen_bool(0.2) {
                Atom::eq(vars.choose(rng).unwrap().clone(), vars.choose(rng).unwrap().clone())
            } else {
                let (sym, ar) = sig.choose(rng).unwrap();
                Atom::rel(sym.clone(), (0..*ar).map(|_| vars.choose(rng).unwrap().clone()))
            }
        })
        .collect();
    PPFormula::new(name, free.to_vec(), bound, atoms).unwrap()
}

/// Solutions by enumerating every free tuple and, for each, every bound tuple.
pub fn naive_solutions(b: &RelStructure, phi: &PPFormula) -> BTreeSet<Vec<usize>> {
    let rels: HashMap<&str, HashSet<&Vec<usize>>> = b
        .relations()
        .iter()
        .map(|(s, r)| (s.as_str(), r.iter().collect()))
        .collect();
    let n = b.size();
    let free = phi.free_vars();
    let bound = phi.bound_vars();
    let mut out = BTreeSet::new();
    for f in odometer(n, free.len()) {
        for g in odometer(n, bound.len()) {
            let value = |v: &String| -> usize {
                match free.iter().position(|w| w == v) {
                    Some(i) => f[i],
                    None => g[bound.iter().position(|w| w == v).unwrap()],
                }
            };
            let ok = phi.atoms().iter().all(|a| match a {
                Atom::Eq(x, y) => value(x) == value(y),
                Atom::Rel { symbol, args } => {
                    let t: Vec<usize> = args.iter().map(value).collect();
                    rels[symbol.as_str()].contains(&t)
                }
            });
            if ok {
                out.insert(f.clone());
                break;
            }
        }
    }
    out
}

/// Reorders tuples of `psi` into the free-variable order of `phi`.
pub fn reorder(phi: &PPFormula, psi: &PPFormula, set: BTreeSet<Vec<usize>>) -> BTreeSet<Vec<usize>> {
    let perm: Vec<usize> = phi
        .free_vars()
        .iter()
        .map(|v| psi.free_vars().iter().position(|w| w == v).unwrap())
        .collect();
    set.into_iter().map(|t| perm.iter().map(|&p| t[p]).collect()).collect()
}

// ---- partitions as label vectors ----

/// Relabels blocks by order of first appearance.
pub fn canon(labels: &[usize]) -> Vec<usize> {
    let mut map = HashMap::new();
    labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect()
}

pub fn part_meet(a: &[usize], b: &[usize]) -> Vec<usize> {
    let pairs: Vec<(usize, usize)> = a.iter().copied().zip(b.iter().copied()).collect();
    let mut map = HashMap::new();
    pairs
        .iter()
        .map(|p| {
            let next = map.len();
            *map.entry(*p).or_insert(next)
        })
        .collect()
}

/// Join by reachability through the union of the two relations.
pub fn part_join(a: &[usize], b: &[usize]) -> Vec<usize> {
    transitive_closure_join(&[a.to_vec(), b.to_vec()])
}

/// Join of a family: Warshall closure of the union of the relations.
pub fn transitive_closure_join(family: &[Vec<usize>]) -> Vec<usize> {
    let n = family[0].len();
    let mut m = vec![vec![false; n]; n];
    for p in family {
        for i in 0..n {
            for j in 0..n {
                if p[i] == p[j] {
                    m[i][j] = true;
                }
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if m[i][k] {
                let row = m[k].clone();
                for (cell, via) in m[i].iter_mut().zip(row) {
                    *cell |= via;
                }
            }
        }
    }
    let labels: Vec<usize> = (0..n).map(|i| (0..n).find(|&j| m[i][j]).unwrap()).collect();
    canon(&labels)
}

pub fn part_le(a: &[usize], b: &[usize]) -> bool {
    let n = a.len();
    (0..n).all(|i| (0..n).all(|j| a[i] != a[j] || b[i] == b[j]))
}

pub fn random_partition(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let k = rng.gen_range(1..=n);
    canon(&(0..n).map(|_| rng.gen_range(0..k)).collect::<Vec<_>>())
}

pub fn term_eval_parts(t: &LatticeTerm, env: &HashMap<String, Vec<usize>>) -> Vec<usize> {
    match t {
        LatticeTerm::Var(v) => env[v].clone(),
        LatticeTerm::Meet(a) => a[1..]
            .iter()
            .fold(term_eval_parts(&a[0], env), |acc, s| part_meet(&acc, &term_eval_parts(s, env))),
        LatticeTerm::Join(a) => a[1..]
            .iter()
            .fold(term_eval_parts(&a[0], env), |acc, s| part_join(&acc, &term_eval_parts(s, env))),
    }
}

// ---- lattice terms ----

/// All terms of depth at most `depth` over `vars`, with binary meets and
/// joins of unordered pairs of distinct smaller terms.
pub fn terms_up_to_depth(vars: &[&str], depth: usize) -> Vec<LatticeTerm> {
    let mut all: Vec<LatticeTerm> = vars.iter().map(|v| LatticeTerm::var(*v)).collect();
    let mut previous_len = 0;
    for _ in 0..depth {
        let current = all.clone();
        let mut fresh = Vec::new();
        for i in 0..current.len() {
            for j in (i + 1)..current.len() {
                // at least one side must have the previous maximal depth
                if j < previous_len {
                    continue;
                }
                let pair = vec![current[i].clone(), current[j].clone()];
                fresh.push(LatticeTerm::meet(pair.clone()));
                fresh.push(LatticeTerm::join(pair));
            }
        }
        previous_len = current.len();
        all.extend(fresh);
    }
    all
}

pub fn random_term(rng: &mut ChaCha8Rng, vars: &[&str], depth: usize) -> LatticeTerm {
    if depth == 0 || rng.gen_bool(0.25) {
        return LatticeTerm::var(*vars.choose(rng).unwrap());
    }
    let k = rng.gen_range(2..=3);
    let args = (0..k).map(|_| random_term(rng, vars, depth - 1)).collect();
    if rng.gen_bool(0.5) {
        LatticeTerm::meet(args)
    } else {
        LatticeTerm::join(args)
    }
}

// ---- two-sorted formulas ----

/// Random two-sorted formula with free variables `a1@1, c1@2, ...` as given
/// by `free_sorts`, `bound` extra variables and at most `max_atoms` atoms.
pub fn random_sorted(
    rng: &mut ChaCha8Rng,
    name: &str,
    free_sorts: &[Sort],
    bound_sorts: &[Sort],
    max_atoms: usize,
) -> SortedPPFormula {
    let label = |i: usize, s: Sort, prefix: &str| match s {
        Sort::One => format!("{prefix}b{i}"),
        Sort::Two => format!("{prefix}c{i}"),
    };
    let free: Vec<String> = free_sorts.iter().enumerate().map(|(i, &s)| label(i + 1, s, "")).collect();
    let bound: Vec<String> = bound_sorts.iter().enumerate().map(|(i, &s)| label(i + 1, s, "e")).collect();
    let sorts: std::collections::BTreeMap<String, Sort> = free
        .iter()
        .zip(free_sorts)
        .chain(bound.iter().zip(bound_sorts))
        .map(|(v, &s)| (v.clone(), s))
        .collect();
    let ones: Vec<&String> = sorts.iter().filter(|(_, s)| **s == Sort::One).map(|(v, _)| v).collect();
    let twos: Vec<&String> = sorts.iter().filter(|(_, s)| **s == Sort::Two).map(|(v, _)| v).collect();
    let count = rng.gen_range(1..=max_atoms);
    let mut atoms = Vec::new();
    for _ in 0..count {
        let use_r = !ones.is_empty() && !twos.is_empty() && rng.gen_bool(0.7);
        if use_r {
            atoms.push(Atom::rel(
                "R",
                [
                    (*ones.choose(rng).unwrap()).clone(),
                    (*twos.choose(rng).unwrap()).clone(),
                    (*twos.choose(rng).unwrap()).clone(),
                ],
            ));
        } else {
            let pool = if !ones.is_empty() && (twos.is_empty() || rng.gen_bool(0.5)) { &ones } else { &twos };
            atoms.push(Atom::eq((*pool.choose(rng).unwrap()).clone(), (*pool.choose(rng).unwrap()).clone()));
        }
    }
    let formula = PPFormula::new(name, free, bound, atoms).unwrap();
    SortedPPFormula::new(formula, sorts).unwrap()
}
