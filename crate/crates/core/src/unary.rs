//! Reduction from containment over a boolean structure to containment over
//! an algebra with a two-element trace.
//!
//! The algebra and trace are inputs: the package computes the derived
//! relations `D_i = A(C_i)` and `E_n = A(N^n)`, checks what can be checked
//! about them, and rewrites formulas over `C` into formulas over the target.

use std::fmt;

use crate::algebra::{subpower_closure, FinAlgebra};
use crate::error::{Error, Result};
use crate::eval::{solution_tuples, Limits};
use crate::formula::{check_same_free, Atom, PPFormula};
use crate::structure::{all_tuples, Elem, RelStructure, Relation, Tuple};
use crate::text::Cursor;

/// Target symbol replacing the base symbol `s`.
pub fn d_symbol(s: &str) -> String {
    format!("D_{s}")
}

pub fn e_symbol(n: usize) -> String {
    format!("E{n}")
}

/// Increasing `k`-element index subsequences of `0..n`, lexicographically.
pub(crate) fn subsequences(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// `S_n(vars)` when `n ≤ cap`, otherwise one `S_cap` atom per increasing
/// `cap`-subsequence of `vars`.
pub(crate) fn capped_atoms(vars: &[String], cap: usize, symbol: impl Fn(usize) -> String) -> Vec<Atom> {
    let n = vars.len();
    if n == 0 {
        return Vec::new();
    }
    if n <= cap {
        return vec![Atom::rel(symbol(n), vars.iter().cloned())];
    }
    subsequences(n, cap)
        .into_iter()
        .map(|idx| Atom::rel(symbol(cap), idx.into_iter().map(|i| vars[i].clone())))
        .collect()
}

pub(crate) fn e_atoms(vars: &[String], k: usize) -> Vec<Atom> {
    capped_atoms(vars, k, e_symbol)
}

/// The pp-definition of `E_n` over `E_1..E_k` with free variables `x1..xn`.
///
/// ```
/// let phi = ppcomp::unary::en_pp_definition(4, 3);
/// assert_eq!(phi.atoms().len(), 4);
/// assert_eq!(phi.atoms()[0].to_string(), "E3(x1, x2, x3)");
/// ```
pub fn en_pp_definition(n: usize, k: usize) -> PPFormula {
    assert!(n >= 1 && k >= 1, "n and k must be positive");
    let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let atoms = e_atoms(&vars, k);
    PPFormula::new(format!("E{n}_def"), vars, Vec::new(), atoms).expect("well formed")
}

/// An algebra, a two-element trace `N = {0, 1}` in it, a boolean base
/// structure `C`, and the relations derived from them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnaryTypePackage {
    name: String,
    algebra: FinAlgebra,
    trace: [Elem; 2],
    base: RelStructure,
    target: RelStructure,
}

impl UnaryTypePackage {
    /// Computes `D_i` and `E_1..E_k` and validates the package. Every
    /// detected problem is listed in the returned error.
    pub fn build(
        name: impl Into<String>,
        algebra: FinAlgebra,
        trace: [&str; 2],
        base: RelStructure,
    ) -> Result<Self> {
        let mut problems = Vec::new();
        let u = algebra.universe();
        let t0 = u.index_of(trace[0]);
        let t1 = u.index_of(trace[1]);
        let (t0, t1) = match (t0, t1) {
            (Some(a), Some(b)) if a != b => (a, b),
            (Some(_), Some(_)) => {
                return Err(Error::InvalidPackage(vec!["trace elements must be distinct".into()]))
            }
            _ => {
                return Err(Error::InvalidPackage(vec![format!(
                    "trace {{{}, {}}} is not inside the algebra's universe",
                    trace[0], trace[1]
                )]))
            }
        };
        if base.size() != 2 {
            return Err(Error::InvalidPackage(vec![format!(
                "base structure must have 2 elements, found {}",
                base.size()
            )]));
        }
        let lift = |t: &Tuple| -> Tuple { t.iter().map(|&b| if b == 0 { t0 } else { t1 }).collect() };
        let k = algebra.size();
        let mut relations: Vec<(String, Relation)> = Vec::new();
        for (symbol, c) in base.relations() {
            let r = c.arity();
            if r > 0 && !(c.contains(&vec![0; r]) && c.contains(&vec![1; r])) {
                problems.push(format!("{symbol} does not contain both constant tuples"));
                continue;
            }
            let seed: Vec<Tuple> = c.iter().map(lift).collect();
            let d = subpower_closure(&algebra, r, &seed, true);
            let on_trace: Vec<&Tuple> = d
                .iter()
                .filter(|t| t.iter().all(|&e| e == t0 || e == t1))
                .collect();
            if on_trace.len() != seed.len() {
                let extra: Vec<String> = on_trace
                    .iter()
                    .filter(|t| !seed.contains(t))
                    .map(|t| {
                        let names: Vec<&str> = t.iter().map(|&e| u.name(e)).collect();
                        format!("({})", names.join(", "))
                    })
                    .collect();
                problems.push(format!(
                    "{} restricted to the trace is not {symbol}: extra tuples {}",
                    d_symbol(symbol),
                    extra.join(", ")
                ));
            }
            relations.push((d_symbol(symbol), d));
        }
        for n in 1..=k {
            let e = trace_power_closure(&algebra, [t0, t1], n);
            let cube_inside = all_tuples(2, n).all(|t| e.contains(&lift(&t)));
            if !cube_inside {
                problems.push(format!("{} does not contain N^{n}", e_symbol(n)));
            }
            relations.push((e_symbol(n), e));
        }
        if !problems.is_empty() {
            return Err(Error::InvalidPackage(problems));
        }
        let name = name.into();
        let target = RelStructure::new(format!("{name}_target"), u.clone(), relations)?;
        Ok(UnaryTypePackage {
            name,
            algebra,
            trace: [t0, t1],
            base,
            target,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &FinAlgebra {
        &self.algebra
    }

    /// Indices in the algebra of the trace elements `0` and `1`.
    pub fn trace(&self) -> [Elem; 2] {
        self.trace
    }

    pub fn base(&self) -> &RelStructure {
        &self.base
    }

    /// `(A; D_1..D_l, E_1..E_k)`.
    pub fn target(&self) -> &RelStructure {
        &self.target
    }

    /// `k = |A|`.
    pub fn k(&self) -> usize {
        self.algebra.size()
    }

    pub fn d_relation(&self, base_symbol: &str) -> Option<&Relation> {
        self.target.relation(&d_symbol(base_symbol))
    }

    pub fn e_relation(&self, n: usize) -> Option<&Relation> {
        self.target.relation(&e_symbol(n))
    }

    /// Maps base elements `0`/`1` to the trace.
    pub fn lift(&self, t: &[Elem]) -> Tuple {
        t.iter().map(|&b| self.trace[b]).collect()
    }

    /// Reads a `package` file. Quoted paths are resolved by `load`, which
    /// returns the referenced file's text.
    ///
    /// ```text
    /// package P { algebra = "a.alg" trace = {0, 1} base = "c.struct" }
    /// ```
    pub fn parse(text: &str, mut load: impl FnMut(&str) -> Result<String>) -> Result<Self> {
        let mut c = Cursor::new(text);
        c.expect_keyword("package")?;
        let name = c.ident()?;
        c.expect("{")?;
        c.expect_keyword("algebra")?;
        c.expect("=")?;
        let algebra = c.quoted()?;
        c.expect_keyword("trace")?;
        c.expect("=")?;
        let mark = c.mark();
        let trace = c.braced_list(|c| c.element())?;
        if trace.len() != 2 {
            return Err(c.error_at(mark, "trace must list exactly two elements"));
        }
        c.expect_keyword("base")?;
        c.expect("=")?;
        let base = c.quoted()?;
        c.expect("}")?;
        c.finish()?;
        let algebra = FinAlgebra::parse(&load(&algebra)?)?;
        let base = RelStructure::parse(&load(&base)?)?;
        UnaryTypePackage::build(name, algebra, [&trace[0], &trace[1]], base)
    }
}

/// `A(N^n)` for the trace `N`.
pub fn trace_power_closure(algebra: &FinAlgebra, trace: [Elem; 2], n: usize) -> Relation {
    let seed: Vec<Tuple> = all_tuples(2, n)
        .map(|t| t.iter().map(|&b| trace[b]).collect())
        .collect();
    subpower_closure(algebra, n, &seed, true)
}

pub fn build_package(
    algebra: FinAlgebra,
    trace: [&str; 2],
    base: RelStructure,
) -> Result<UnaryTypePackage> {
    UnaryTypePackage::build("package", algebra, trace, base)
}

/// Replaces each `C_i` atom by `D_i` and conjoins the definition of `E_n`
/// over all `n` variables of `phi`, free and bound, in canonical order.
pub fn lemma1_transform(phi: &PPFormula, pkg: &UnaryTypePackage) -> Result<PPFormula> {
    phi.validate(&pkg.base.signature())?;
    let mut atoms: Vec<Atom> = phi
        .atoms()
        .iter()
        .map(|a| match a {
            Atom::Eq(..) => a.clone(),
            Atom::Rel { symbol, args } => Atom::Rel {
                symbol: d_symbol(symbol),
                args: args.clone(),
            },
        })
        .collect();
    let all: Vec<String> = phi.variables().cloned().collect();
    atoms.extend(e_atoms(&all, pkg.k()));
    PPFormula::new(
        format!("{}_lifted", phi.name()),
        phi.free_vars().to_vec(),
        phi.bound_vars().to_vec(),
        atoms,
    )
}

/// `(phi', psi')`; containment over the base holds iff it holds over the target.
pub fn theorem5_reduce(
    phi: &PPFormula,
    psi: &PPFormula,
    pkg: &UnaryTypePackage,
) -> Result<(PPFormula, PPFormula)> {
    check_same_free(phi, psi)?;
    Ok((lemma1_transform(phi, pkg)?, lemma1_transform(psi, pkg)?))
}

/// Outcome of the exhaustive check of both equivalences.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Prop10Report {
    /// Boolean assignments compared for the first equivalence.
    pub boolean_checked: usize,
    /// Size of the target solution set compared for the second.
    pub closure_checked: usize,
    pub counterexamples: Vec<String>,
}

impl Prop10Report {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

impl fmt::Display for Prop10Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds() {
            write!(
                f,
                "pass: {} boolean assignments agree, solution set of {} tuples equals the closure",
                self.boolean_checked, self.closure_checked
            )
        } else {
            writeln!(f, "FAIL: {} counterexamples", self.counterexamples.len())?;
            for c in &self.counterexamples {
                writeln!(f, "  {c}")?;
            }
            Ok(())
        }
    }
}

/// Checks `C, g ⊨ φ ⟺ A, g ⊨ φ'` for every boolean `g`, and
/// `sol_A(φ') = A(sol_C(φ))`.
pub fn verify_prop10(pkg: &UnaryTypePackage, phi: &PPFormula, limits: Limits) -> Result<Prop10Report> {
    let lifted = lemma1_transform(phi, pkg)?;
    if lifted.num_vars() > limits.max_vars {
        return Err(Error::BudgetExceeded(format!(
            "{} variables, limit is {}",
            lifted.num_vars(),
            limits.max_vars
        )));
    }
    let m = phi.free_vars().len();
    let base_sols = solution_tuples(&pkg.base, phi)?;
    let target_sols = solution_tuples(&pkg.target, &lifted)?;
    let mut report = Prop10Report::default();
    let show = |t: &[Elem]| -> String {
        let parts: Vec<String> = phi
            .free_vars()
            .iter()
            .zip(t)
            .map(|(v, &e)| format!("{v}={}", pkg.algebra.universe().name(e)))
            .collect();
        if parts.is_empty() {
            "()".to_string()
        } else {
            parts.join(", ")
        }
    };

    for g in all_tuples(2, m) {
        report.boolean_checked += 1;
        let in_base = base_sols.binary_search(&g).is_ok();
        let lifted_g = pkg.lift(&g);
        let in_target = target_sols.binary_search(&lifted_g).is_ok();
        if in_base != in_target {
            report.counterexamples.push(format!(
                "boolean assignment {}: base says {in_base}, target says {in_target}",
                show(&lifted_g)
            ));
        }
    }

    let seed: Vec<Tuple> = base_sols.iter().map(|t| pkg.lift(t)).collect();
    let closure = subpower_closure(&pkg.algebra, m, &seed, true);
    report.closure_checked = target_sols.len();
    for t in &target_sols {
        if !closure.contains(t) {
            report
                .counterexamples
                .push(format!("{} solves the lifted formula but is outside the closure", show(t)));
        }
    }
    for t in closure.iter() {
        if target_sols.binary_search(t).is_err() {
            report
                .counterexamples
                .push(format!("{} is in the closure but does not solve the lifted formula", show(t)));
        }
    }
    Ok(report)
}
