//! Lattice terms to two-sorted pp-formulas over pentagon structures.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::eval::sorted_solution_tuples;
use crate::formula::{fresh_name, Atom, PPFormula, Sort, SortedPPFormula, SORTED_SYMBOL};
use crate::lattice::{pentagon_two_sorted, LatticeTerm, Pentagon, PentagonDecomposition};
use crate::structure::all_tuples;

/// Largest `|B|^n · |C|^2` the property sweep visits by default.
pub const DEFAULT_STAR_BUDGET: u64 = 1 << 20;

/// `max |C|` over the decompositions of `pentagons`.
pub fn compute_m(pentagons: &[Pentagon]) -> Result<usize> {
    pentagons
        .iter()
        .map(|p| p.decompose().c().len())
        .max()
        .ok_or(Error::EmptyFamily)
}

/// Names of the two sort-2 free variables, avoiding `term_vars`.
fn y_names(term_vars: &[String]) -> (String, String) {
    let used: HashSet<String> = term_vars.iter().cloned().collect();
    (fresh_name("y1", &used), fresh_name("y2", &used))
}

/// `φ_t(x₁..x_n, y₁, y₂)` with chains of length `m` for joins.
///
/// ```
/// use ppcomp::cm::term_to_sorted_formula_m;
/// use ppcomp::lattice::LatticeTerm;
///
/// let t = LatticeTerm::parse("(x1 v x2)")?;
/// let phi = term_to_sorted_formula_m(&t, 2);
/// assert_eq!(phi.bound_vars().len(), 3);
/// assert_eq!(phi.atoms().len(), 4);
/// # Ok::<(), ppcomp::Error>(())
/// ```
pub fn term_to_sorted_formula_m(t: &LatticeTerm, m: usize) -> SortedPPFormula {
    term_to_sorted_formula_over(t, &t.variables(), m)
}

/// As [`term_to_sorted_formula_m`] with `m` taken from `pentagons`.
pub fn term_to_sorted_formula(t: &LatticeTerm, pentagons: &[Pentagon]) -> Result<SortedPPFormula> {
    Ok(term_to_sorted_formula_m(t, compute_m(pentagons)?))
}

/// Translation with the sort-1 free variables fixed to `vars`, which must
/// contain every variable of `t`.
pub fn term_to_sorted_formula_over(t: &LatticeTerm, vars: &[String], m: usize) -> SortedPPFormula {
    assert!(m >= 1, "chain length must be positive");
    let (y1, y2) = y_names(vars);
    let mut b = Builder {
        m,
        atoms: Vec::new(),
        bound: Vec::new(),
    };
    b.build(t, &y1, &y2);
    let mut sorts: BTreeMap<String, Sort> = vars.iter().map(|v| (v.clone(), Sort::One)).collect();
    for v in [&y1, &y2].into_iter().chain(&b.bound) {
        sorts.insert(v.clone(), Sort::Two);
    }
    let mut free = vars.to_vec();
    free.push(y1);
    free.push(y2);
    let formula = PPFormula::new("phi_t", free, b.bound, b.atoms).expect("generated names are distinct");
    SortedPPFormula::new(formula, sorts).expect("sorts are consistent")
}

struct Builder {
    m: usize,
    atoms: Vec<Atom>,
    bound: Vec<String>,
}

impl Builder {
    fn fresh(&mut self) -> String {
        let name = format!("_z{}", self.bound.len() + 1);
        self.bound.push(name.clone());
        name
    }

    fn build(&mut self, t: &LatticeTerm, y1: &str, y2: &str) {
        match t {
            LatticeTerm::Var(x) => self.atoms.push(Atom::rel(SORTED_SYMBOL, [x.as_str(), y1, y2])),
            LatticeTerm::Meet(args) => {
                for a in args {
                    self.build(a, y1, y2);
                }
            }
            LatticeTerm::Join(args) => {
                let k = args.len();
                let mut prev = y1.to_string();
                for i in 1..=self.m {
                    for (j, a) in args.iter().enumerate() {
                        let next = if i == self.m && j + 1 == k {
                            y2.to_string()
                        } else {
                            self.fresh()
                        };
                        self.build(a, &prev, &next);
                        prev = next;
                    }
                }
            }
        }
    }
}

/// Outcome of the exhaustive comparison of `φ_t` with `t` on one pentagon.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StarReport {
    pub checked: usize,
    pub counterexamples: Vec<String>,
}

impl StarReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

impl fmt::Display for StarReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds() {
            write!(f, "pass: {} checks", self.checked)
        } else {
            writeln!(f, "FAIL: {} of {} checks", self.counterexamples.len(), self.checked)?;
            for c in &self.counterexamples {
                writeln!(f, "  {c}")?;
            }
            Ok(())
        }
    }
}

/// For every `b₁..b_n` and `(c, c')`: `φ_t(b̄, c, c')` holds on `P₂` iff
/// `(c, c')` lies in `t(α_{b₁}, ..., α_{b_n})` evaluated in `K_P`.
pub fn verify_property_star(t: &LatticeTerm, pentagon: &Pentagon) -> Result<StarReport> {
    verify_property_star_with(t, pentagon, DEFAULT_STAR_BUDGET)
}

pub fn verify_property_star_with(t: &LatticeTerm, pentagon: &Pentagon, budget: u64) -> Result<StarReport> {
    let dec = pentagon.decompose();
    let m = dec.c().len();
    star_sweep(t, &dec, term_to_sorted_formula_m(t, m), budget)
}

fn star_sweep(
    t: &LatticeTerm,
    dec: &PentagonDecomposition,
    phi: SortedPPFormula,
    budget: u64,
) -> Result<StarReport> {
    let vars = t.variables();
    let (nb, nc) = (dec.b().len(), dec.c().len());
    let checks = (nb as u64)
        .checked_pow(vars.len() as u32)
        .and_then(|x| x.checked_mul((nc * nc) as u64));
    match checks {
        Some(c) if c <= budget => {}
        _ => {
            return Err(Error::BudgetExceeded(format!(
                "{nb}^{} * {nc}^2 checks, budget is {budget}",
                vars.len()
            )))
        }
    }
    let p2 = pentagon_two_sorted(dec);
    let k_p = dec.k_p();
    let gens = dec.generator_indices(&k_p);
    let parts = k_p.partitions().expect("K_P is a lattice of partitions");
    let sols = sorted_solution_tuples(&p2, &phi)?;
    let mut report = StarReport::default();
    for bs in all_tuples(nb, vars.len()) {
        let values: Vec<usize> = bs.iter().map(|&b| gens[b]).collect();
        let theta = &parts[t.eval_indexed(&vars, &values, &k_p)];
        for c in 0..nc {
            for d in 0..nc {
                report.checked += 1;
                let mut row = bs.clone();
                row.push(c);
                row.push(d);
                let lhs = sols.binary_search(&row).is_ok();
                let rhs = theta.related(c, d);
                if lhs != rhs {
                    let bnames: Vec<String> = vars
                        .iter()
                        .zip(&bs)
                        .map(|(v, &b)| format!("{v}={}", dec.b().name(b)))
                        .collect();
                    report.counterexamples.push(format!(
                        "{} (c, c')=({}, {}): formula says {lhs}, term says {rhs}",
                        bnames.join(", "),
                        dec.c().name(c),
                        dec.c().name(d)
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// `(φ_t, φ_{t'})` over the union of the variables of both terms.
pub fn theorem15_reduce(
    t: &LatticeTerm,
    t_prime: &LatticeTerm,
    pentagons: &[Pentagon],
) -> Result<(SortedPPFormula, SortedPPFormula)> {
    let m = compute_m(pentagons)?;
    let mut vars = t.variables();
    t_prime.collect_vars(&mut vars);
    Ok((
        term_to_sorted_formula_over(t, &vars, m),
        term_to_sorted_formula_over(t_prime, &vars, m),
    ))
}

/// `u(0, n) = L·n`, `u(d + 1, n) = B·n·u(d, n) + E`, saturating.
pub fn size_bound_u(d: usize, n: usize, l: u128, b: u128, e: u128) -> u128 {
    let n = n as u128;
    let mut u = l.saturating_mul(n);
    for _ in 0..d {
        u = b.saturating_mul(n).saturating_mul(u).saturating_add(e);
    }
    u
}
