//! Amalgam packages: an algebra with congruences `α < β`, `γ`, a family of
//! pentagons inside it and the relations `D_k` covering them, plus the
//! translation of two-sorted formulas into pp-formulas over that structure.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::algebra::FinAlgebra;
use crate::error::{Error, Result};
use crate::eval::{solution_tuples, sorted_solution_tuples};
use crate::formula::{check_same_free, Atom, PPFormula, Sort, SortedPPFormula};
use crate::lattice::{
    is_congruence, is_interesting, parse_partition, pentagon_two_sorted, EquivRelation, Pentagon,
};
use crate::structure::{all_tuples, Elem, RelStructure, Relation, Tuple};
use crate::text::Cursor;
use crate::unary::capped_atoms;

pub const ALPHA: &str = "alpha";
pub const BETA: &str = "beta";
pub const GAMMA: &str = "gamma";

pub fn delta_symbol(k: usize) -> String {
    format!("D{k}")
}

/// Largest number of assignments the matching sweep visits by default.
pub const DEFAULT_MATCHING_BUDGET: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmalgamPackage {
    name: String,
    algebra: FinAlgebra,
    alpha: EquivRelation,
    beta: EquivRelation,
    gamma: EquivRelation,
    pentagons: Vec<Pentagon>,
    /// Pentagon element index to algebra element index, per pentagon.
    carriers: Vec<Vec<Elem>>,
    cutoff: usize,
    target: RelStructure,
}

/// Tuples of length `k` whose entries all lie in one carrier.
pub fn pentagon_cover(carriers: &[Vec<Elem>], k: usize) -> Relation {
    let tuples = carriers.iter().flat_map(|p| {
        all_tuples(p.len(), k).map(move |t| t.iter().map(|&i| p[i]).collect::<Tuple>())
    });
    Relation::new(k, tuples.collect::<Vec<_>>()).expect("uniform arity")
}

impl AmalgamPackage {
    /// Assembles a package without checking its invariants; see
    /// [`AmalgamPackage::validate`]. `d[k - 1]` is `D_k` for `k ≤ cutoff`.
    pub fn new(
        name: impl Into<String>,
        algebra: FinAlgebra,
        [alpha, beta, gamma]: [EquivRelation; 3],
        pentagons: Vec<Pentagon>,
        cutoff: usize,
        d: Vec<Relation>,
    ) -> Result<Self> {
        let n = algebra.size();
        if [&alpha, &beta, &gamma].iter().any(|e| e.size() != n) {
            return Err(Error::CarrierMismatch);
        }
        if pentagons.is_empty() {
            return Err(Error::EmptyFamily);
        }
        if cutoff == 0 || d.len() != cutoff {
            return Err(Error::Invalid(format!(
                "expected D1..D{cutoff}, found {} relations",
                d.len()
            )));
        }
        for (i, r) in d.iter().enumerate() {
            if r.arity() != i + 1 || r.max_element().is_some_and(|e| e >= n) {
                return Err(Error::Invalid(format!(
                    "{} must be a relation of arity {} on the algebra",
                    delta_symbol(i + 1),
                    i + 1
                )));
            }
        }
        let u = algebra.universe();
        let carriers = pentagons
            .iter()
            .map(|p| {
                p.set()
                    .names()
                    .iter()
                    .map(|x| {
                        u.index_of(x).ok_or_else(|| {
                            Error::Invalid(format!("pentagon {}: `{x}` is not in the algebra", p.name()))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let name = name.into();
        let mut relations = vec![
            (ALPHA.to_string(), alpha.as_relation()),
            (BETA.to_string(), beta.as_relation()),
            (GAMMA.to_string(), gamma.as_relation()),
        ];
        relations.extend(d.into_iter().enumerate().map(|(i, r)| (delta_symbol(i + 1), r)));
        let target = RelStructure::new(format!("{name}_target"), u.clone(), relations)?;
        Ok(AmalgamPackage {
            name,
            algebra,
            alpha,
            beta,
            gamma,
            pentagons,
            carriers,
            cutoff,
            target,
        })
    }

    /// As [`AmalgamPackage::new`] with `D_k` the cover of the pentagon carriers.
    pub fn with_pentagon_cover(
        name: impl Into<String>,
        algebra: FinAlgebra,
        congruences: [EquivRelation; 3],
        pentagons: Vec<Pentagon>,
        cutoff: usize,
    ) -> Result<Self> {
        let carriers = carriers_in(&algebra, &pentagons)?;
        let d = (1..=cutoff).map(|k| pentagon_cover(&carriers, k)).collect();
        AmalgamPackage::new(name, algebra, congruences, pentagons, cutoff, d)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &FinAlgebra {
        &self.algebra
    }

    pub fn alpha(&self) -> &EquivRelation {
        &self.alpha
    }

    pub fn beta(&self) -> &EquivRelation {
        &self.beta
    }

    pub fn gamma(&self) -> &EquivRelation {
        &self.gamma
    }

    pub fn pentagons(&self) -> &[Pentagon] {
        &self.pentagons
    }

    /// Algebra elements of pentagon `l`, in the pentagon's element order.
    pub fn carrier(&self, l: usize) -> &[Elem] {
        &self.carriers[l]
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// `D_k` for `k ≤ cutoff`.
    pub fn d(&self, k: usize) -> Option<&Relation> {
        self.target.relation(&delta_symbol(k))
    }

    /// `(A; α, β, γ, D_1..D_N)`.
    pub fn target(&self) -> &RelStructure {
        &self.target
    }

    pub fn carriers_disjoint(&self) -> bool {
        let mut seen = HashSet::new();
        self.carriers.iter().flatten().all(|&a| seen.insert(a))
    }

    /// Checks every package invariant and lists all failures.
    pub fn validate(&self) -> AmalgamReport {
        let mut failures = Vec::new();
        let a = &self.algebra;
        for (sym, e) in [(ALPHA, &self.alpha), (BETA, &self.beta), (GAMMA, &self.gamma)] {
            if !is_congruence(a, e) {
                failures.push(format!("{sym} is not a congruence of the algebra"));
            }
        }
        if !self.alpha.lt(&self.beta) {
            failures.push("alpha < beta fails".to_string());
        }
        if !self.gamma.meet(&self.beta).expect("same carrier").is_identity() {
            failures.push("gamma ^ beta = 0 fails".to_string());
        }
        let left = self.alpha.join(&self.gamma).expect("same carrier");
        let right = self.beta.join(&self.gamma).expect("same carrier");
        if left != right {
            failures.push("alpha v gamma = beta v gamma fails".to_string());
        }
        for (l, p) in self.pentagons.iter().enumerate() {
            let carrier = &self.carriers[l];
            for (sym, whole, local) in [
                (ALPHA, &self.alpha, p.alpha()),
                (BETA, &self.beta, p.beta()),
                (GAMMA, &self.gamma, p.gamma()),
            ] {
                let restricted = (0..carrier.len()).all(|i| {
                    (0..carrier.len()).all(|j| whole.related(carrier[i], carrier[j]) == local.related(i, j))
                });
                if !restricted {
                    failures.push(format!(
                        "pentagon {}: its {sym} is not the restriction of {sym}",
                        p.name()
                    ));
                }
            }
        }
        if !self.pentagons.iter().any(|p| is_interesting(&p.decompose()).is_some()) {
            failures.push("no pentagon is interesting".to_string());
        }
        let u = a.universe();
        for k in 1..=self.cutoff {
            let d = self.d(k).expect("D_k for k up to the cutoff");
            let cover = pentagon_cover(&self.carriers, k);
            if d != &cover {
                let show = |t: &Tuple| {
                    let names: Vec<&str> = t.iter().map(|&e| u.name(e)).collect();
                    format!("({})", names.join(", "))
                };
                let detail = match d.iter().find(|t| !cover.contains(t)) {
                    Some(t) => format!("{} is outside every pentagon", show(t)),
                    None => {
                        let t = cover.iter().find(|t| !d.contains(t)).expect("sets differ");
                        format!("{} is missing", show(t))
                    }
                };
                failures.push(format!("{} is not the pentagon cover: {detail}", delta_symbol(k)));
            }
            if !a.preserves(d) {
                failures.push(format!("{} is not compatible with the operations", delta_symbol(k)));
            }
        }
        AmalgamReport { failures }
    }

    /// Reads an `amalgam` file. Quoted paths are resolved by `load`.
    ///
    /// ```text
    /// amalgam M {
    ///   algebra = "a.alg"
    ///   alpha = {{..}} beta = {{..}} gamma = {{..}}
    ///   pentagons = {"p.pentagon"}
    ///   cutoff = 4
    ///   drelations = pentagon_cover
    /// }
    /// ```
    ///
    /// `drelations` is either `pentagon_cover` or a quoted structure file
    /// over the algebra's universe with relations `D1..DN`.
    pub fn parse(text: &str, mut load: impl FnMut(&str) -> Result<String>) -> Result<Self> {
        let mut c = Cursor::new(text);
        c.expect_keyword("amalgam")?;
        let name = c.ident()?;
        c.expect("{")?;
        c.expect_keyword("algebra")?;
        c.expect("=")?;
        let algebra = FinAlgebra::parse(&load(&c.quoted()?)?)?;
        let set = algebra.universe().clone();
        let field = |c: &mut Cursor<'_>, kw: &str| -> Result<EquivRelation> {
            c.expect_keyword(kw)?;
            c.expect("=")?;
            parse_partition(c, &set)
        };
        let alpha = field(&mut c, ALPHA)?;
        let beta = field(&mut c, BETA)?;
        let gamma = field(&mut c, GAMMA)?;
        c.expect_keyword("pentagons")?;
        c.expect("=")?;
        let paths = c.braced_list(|c| c.quoted())?;
        c.expect_keyword("cutoff")?;
        c.expect("=")?;
        let cutoff = c.number()?;
        c.expect_keyword("drelations")?;
        c.expect("=")?;
        let d_path = if c.eat_keyword("pentagon_cover") {
            None
        } else {
            Some(c.quoted()?)
        };
        c.expect("}")?;
        c.finish()?;
        let pentagons = paths
            .iter()
            .map(|p| Pentagon::parse(&load(p)?))
            .collect::<Result<Vec<_>>>()?;
        let congruences = [alpha, beta, gamma];
        match d_path {
            None => AmalgamPackage::with_pentagon_cover(name, algebra, congruences, pentagons, cutoff),
            Some(path) => {
                let s = RelStructure::parse(&load(&path)?)?;
                if s.universe() != algebra.universe() {
                    return Err(Error::UniverseMismatch);
                }
                let d = (1..=cutoff)
                    .map(|k| {
                        s.relation(&delta_symbol(k))
                            .cloned()
                            .ok_or_else(|| Error::UnknownSymbol(delta_symbol(k)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                AmalgamPackage::new(name, algebra, congruences, pentagons, cutoff, d)
            }
        }
    }
}

fn carriers_in(algebra: &FinAlgebra, pentagons: &[Pentagon]) -> Result<Vec<Vec<Elem>>> {
    pentagons
        .iter()
        .map(|p| p.set().names().iter().map(|x| algebra.universe().lookup(x)).collect())
        .collect()
}

pub fn validate_amalgam(pkg: &AmalgamPackage) -> AmalgamReport {
    pkg.validate()
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AmalgamReport {
    pub failures: Vec<String>,
}

impl AmalgamReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.passed() {
            Ok(())
        } else {
            Err(Error::InvalidPackage(self.failures))
        }
    }
}

impl fmt::Display for AmalgamReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "pass: all package checks hold");
        }
        writeln!(f, "FAIL: {} checks", self.failures.len())?;
        for x in &self.failures {
            writeln!(f, "  {x}")?;
        }
        Ok(())
    }
}

/// `D_k` over `x1..xk`: one atom for `k ≤ cutoff`, otherwise one `D_cutoff`
/// atom per increasing subsequence.
pub fn delta_pp_definition(k: usize, cutoff: usize) -> PPFormula {
    assert!(k >= 1 && cutoff >= 1, "k and the cutoff must be positive");
    let vars: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
    let atoms = capped_atoms(&vars, cutoff, delta_symbol);
    PPFormula::new(format!("Delta{k}"), vars, Vec::new(), atoms).expect("well formed")
}

/// Primes each variable of `phi`, avoiding every name in `used`.
fn primes(phi: &SortedPPFormula, used: &mut HashSet<String>) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for v in phi.formula().variables() {
        let mut p = format!("{v}'");
        while used.contains(&p) {
            p.push('\'');
        }
        used.insert(p.clone());
        out.insert(v.clone(), p);
    }
    out
}

fn translate(phi: &SortedPPFormula, cutoff: usize, used: &HashSet<String>) -> PPFormula {
    let mut used = used.clone();
    let prime = primes(phi, &mut used);
    let p = |v: &String| prime[v].clone();
    let mut w = Vec::new();
    let mut next_w = 0;
    let mut fresh = |used: &mut HashSet<String>| loop {
        next_w += 1;
        let name = format!("_w{next_w}");
        if used.insert(name.clone()) {
            return name;
        }
    };
    let mut atoms = Vec::new();
    for atom in phi.atoms() {
        match atom {
            Atom::Eq(a, b) => {
                let sym = if phi.sort_of(a) == Some(Sort::One) { BETA } else { GAMMA };
                atoms.push(Atom::rel(sym, [p(a), p(b)]));
            }
            Atom::Rel { args, .. } => {
                let (w1, w2) = (fresh(&mut used), fresh(&mut used));
                atoms.push(Atom::rel(BETA, [w1.clone(), p(&args[0])]));
                atoms.push(Atom::rel(BETA, [w2.clone(), p(&args[0])]));
                atoms.push(Atom::rel(GAMMA, [w1.clone(), p(&args[1])]));
                atoms.push(Atom::rel(GAMMA, [w2.clone(), p(&args[2])]));
                atoms.push(Atom::rel(ALPHA, [w1.clone(), w2.clone()]));
                w.push(w1);
                w.push(w2);
            }
        }
    }
    let vars: Vec<&String> = phi.formula().variables().collect();
    let mut delta_args: Vec<String> = vars
        .iter()
        .filter(|v| phi.sort_of(v) == Some(Sort::One))
        .map(|v| p(v))
        .collect();
    delta_args.extend(vars.iter().filter(|v| phi.sort_of(v) == Some(Sort::Two)).map(|v| p(v)));
    delta_args.extend(w.iter().cloned());
    atoms.extend(capped_atoms(&delta_args, cutoff, delta_symbol));
    let free = phi.free_vars().iter().map(p).collect();
    let mut bound = w;
    bound.extend(phi.bound_vars().iter().map(p));
    PPFormula::new(format!("{}_amalgam", phi.name()), free, bound, atoms).expect("generated names are distinct")
}

fn names_of(phis: &[&SortedPPFormula]) -> HashSet<String> {
    phis.iter().flat_map(|f| f.formula().variables().cloned()).collect()
}

/// The pp-formula over the package target matching `phi`.
///
/// ```
/// use ppcomp::cm::sorted_to_pp_with_cutoff;
/// use ppcomp::SortedPPFormula;
///
/// let phi = SortedPPFormula::parse("phi(y1@2, y2@2) := y1 = y2")?;
/// assert_eq!(
///     sorted_to_pp_with_cutoff(&phi, 4).to_string(),
///     "formula phi_amalgam(y1', y2') := gamma(y1', y2') & D2(y1', y2')"
/// );
/// # Ok::<(), ppcomp::Error>(())
/// ```
pub fn sorted_to_pp(phi: &SortedPPFormula, pkg: &AmalgamPackage) -> PPFormula {
    sorted_to_pp_with_cutoff(phi, pkg.cutoff)
}

pub fn sorted_to_pp_with_cutoff(phi: &SortedPPFormula, cutoff: usize) -> PPFormula {
    translate(phi, cutoff, &names_of(&[phi]))
}

/// `(φ', ψ')`, with the free variables primed the same way in both.
pub fn theorem11_reduce(
    phi: &SortedPPFormula,
    psi: &SortedPPFormula,
    pkg: &AmalgamPackage,
) -> Result<(PPFormula, PPFormula)> {
    phi.check_same_free(psi)?;
    let used = names_of(&[phi, psi]);
    let left = translate(phi, pkg.cutoff, &used);
    let right = translate(psi, pkg.cutoff, &used);
    check_same_free(&left, &right)?;
    Ok((left, right))
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatchingReport {
    /// Solutions of `φ'` over the target that were checked.
    pub forward_checked: usize,
    /// Pairs of a sorted solution and a matching assignment that were checked.
    pub backward_checked: usize,
    pub counterexamples: Vec<String>,
}

impl MatchingReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

impl fmt::Display for MatchingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds() {
            write!(
                f,
                "pass: {} target solutions and {} matching assignments checked",
                self.forward_checked, self.backward_checked
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

/// Checks both directions of the matching correspondence between solutions
/// of `φ'` over the target and sorted solutions of `φ` on each pentagon.
/// The package is validated first.
pub fn verify_matching_claim(pkg: &AmalgamPackage, phi: &SortedPPFormula) -> Result<MatchingReport> {
    verify_matching_claim_with(pkg, phi, DEFAULT_MATCHING_BUDGET)
}

pub fn verify_matching_claim_with(
    pkg: &AmalgamPackage,
    phi: &SortedPPFormula,
    budget: u64,
) -> Result<MatchingReport> {
    pkg.validate().into_result()?;
    let lifted = sorted_to_pp(phi, pkg);
    let target_sols = solution_tuples(&pkg.target, &lifted)?;
    let u = pkg.algebra.universe();
    let free = phi.free_vars();
    let sorts: Vec<Sort> = free.iter().map(|v| phi.sort_of(v).expect("sorted")).collect();
    let decs: Vec<_> = pkg.pentagons.iter().map(Pentagon::decompose).collect();
    let mut sorted_sols = Vec::with_capacity(decs.len());
    for dec in &decs {
        sorted_sols.push(sorted_solution_tuples(&pentagon_two_sorted(dec), phi)?);
    }
    // algebra element to its index inside each carrier
    let local: Vec<BTreeMap<Elem, usize>> = pkg
        .carriers
        .iter()
        .map(|c| c.iter().enumerate().map(|(i, &a)| (a, i)).collect())
        .collect();

    let mut report = MatchingReport::default();
    let show_g = |g: &[Elem]| -> String {
        let parts: Vec<String> = free.iter().zip(g).map(|(v, &e)| format!("{v}'={}", u.name(e))).collect();
        format!("({})", parts.join(", "))
    };

    for g in &target_sols {
        report.forward_checked += 1;
        let ok = (0..decs.len()).any(|l| {
            let Some(idx) = g.iter().map(|a| local[l].get(a).copied()).collect::<Option<Vec<_>>>() else {
                return false;
            };
            let f: Tuple = idx
                .iter()
                .zip(&sorts)
                .map(|(&i, s)| {
                    let (b, c) = decs[l].coords(i);
                    if *s == Sort::One {
                        b
                    } else {
                        c
                    }
                })
                .collect();
            sorted_sols[l].binary_search(&f).is_ok()
        });
        if !ok {
            report.counterexamples.push(format!(
                "{} satisfies the translated formula but matches no sorted solution",
                show_g(g)
            ));
        }
    }

    for (l, dec) in decs.iter().enumerate() {
        let (nb, nc) = (dec.b().len(), dec.c().len());
        let per_f: u64 = sorts
            .iter()
            .map(|s| if *s == Sort::One { nc as u64 } else { nb as u64 })
            .try_fold(1u64, |acc, x| acc.checked_mul(x))
            .unwrap_or(u64::MAX);
        let total = per_f.saturating_mul(sorted_sols[l].len() as u64);
        if report.backward_checked as u64 + total > budget {
            return Err(Error::BudgetExceeded(format!(
                "{total} matching assignments on pentagon {}, budget is {budget}",
                pkg.pentagons[l].name()
            )));
        }
        for f in &sorted_sols[l] {
            let radices: Vec<usize> = sorts.iter().map(|s| if *s == Sort::One { nc } else { nb }).collect();
            let mut choice = vec![0usize; f.len()];
            loop {
                let g: Tuple = f
                    .iter()
                    .zip(&sorts)
                    .zip(&choice)
                    .map(|((&v, s), &other)| {
                        let e = if *s == Sort::One {
                            dec.element(v, other)
                        } else {
                            dec.element(other, v)
                        };
                        pkg.carriers[l][e]
                    })
                    .collect();
                report.backward_checked += 1;
                if target_sols.binary_search(&g).is_err() {
                    report.counterexamples.push(format!(
                        "{} matches a sorted solution on pentagon {} but fails the translated formula",
                        show_g(&g),
                        pkg.pentagons[l].name()
                    ));
                }
                let mut i = choice.len();
                let done = loop {
                    if i == 0 {
                        break true;
                    }
                    i -= 1;
                    choice[i] += 1;
                    if choice[i] < radices[i] {
                        break false;
                    }
                    choice[i] = 0;
                };
                if done {
                    break;
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Universe;

    fn p4() -> Pentagon {
        Pentagon::parse(
            "pentagon P { set={00,01,10,11} alpha={{00},{01},{10,11}} \
             beta={{00,01},{10,11}} gamma={{00,10},{01,11}} }",
        )
        .unwrap()
    }

    fn pkg() -> AmalgamPackage {
        let p = p4();
        let a = FinAlgebra::pure_set("A", p.set().clone());
        let congruences = [p.alpha().clone(), p.beta().clone(), p.gamma().clone()];
        AmalgamPackage::with_pentagon_cover("M", a, congruences, vec![p], 4).unwrap()
    }

    #[test]
    fn single_pentagon_package_is_valid() {
        let m = pkg();
        assert!(m.validate().passed(), "{}", m.validate());
        assert_eq!(m.d(2).unwrap().len(), 16);
        assert!(m.carriers_disjoint());
    }

    #[test]
    fn validator_catches_violations() {
        let p = p4();
        let a = FinAlgebra::pure_set("A", p.set().clone());
        let same = [p.beta().clone(), p.beta().clone(), p.gamma().clone()];
        let m = AmalgamPackage::with_pentagon_cover("M", a.clone(), same, vec![p.clone()], 2).unwrap();
        assert!(m.validate().failures.iter().any(|f| f.contains("alpha < beta")));

        let other = Pentagon::parse(
            "pentagon Q { set={00,01,10,11} alpha={{00},{01},{10},{11}} \
             beta={{00,01},{10,11}} gamma={{00,10},{01,11}} }",
        )
        .unwrap_err();
        assert_eq!(other, Error::PentagonAxiom(4));

        let bad_d = vec![Relation::full(4, 1), Relation::equality(4)];
        let congruences = [p.alpha().clone(), p.beta().clone(), p.gamma().clone()];
        let m = AmalgamPackage::new("M", a, congruences, vec![p], 2, bad_d).unwrap();
        assert!(m.validate().failures.iter().any(|f| f.contains("D2")));
    }

    #[test]
    fn delta_definition() {
        assert_eq!(delta_pp_definition(5, 4).atoms().len(), 5);
        assert_eq!(delta_pp_definition(4, 4).atoms().len(), 1);
    }

    #[test]
    fn translation_shape() {
        let phi = SortedPPFormula::parse("phi(x1@1, y1@2, y2@2) := R(x1, y1, y2)").unwrap();
        let t = sorted_to_pp(&phi, &pkg());
        assert_eq!(
            t.to_string(),
            "formula phi_amalgam(x1', y1', y2') := exists _w1, _w2 . beta(_w1, x1') & beta(_w2, x1') \
             & gamma(_w1, y1') & gamma(_w2, y2') & alpha(_w1, _w2) & D4(x1', y1', y2', _w1) \
             & D4(x1', y1', y2', _w2) & D4(x1', y1', _w1, _w2) & D4(x1', y2', _w1, _w2) \
             & D4(y1', y2', _w1, _w2)"
        );
        let report = verify_matching_claim(&pkg(), &phi).unwrap();
        assert!(report.holds(), "{report}");
        assert_eq!(report.forward_checked, 48);
        assert_eq!(report.backward_checked, 48);
    }

    #[test]
    fn carriers_must_be_inside() {
        let p = p4();
        let a = FinAlgebra::pure_set("A", Universe::range(4).unwrap());
        let congruences = [
            EquivRelation::identity(4),
            EquivRelation::full(4),
            EquivRelation::identity(4),
        ];
        assert!(AmalgamPackage::with_pentagon_cover("M", a, congruences, vec![p], 2).is_err());
    }
}
