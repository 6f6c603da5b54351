//! Subcommand implementations. Each fills in a [`Report`].

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use ppcomp::algebra::{polymorphisms_with_budget, DEFAULT_POLYMORPHISM_BUDGET};
use ppcomp::cm::{
    decide_dnf_tautology_with, theorem11_reduce, theorem15_reduce, verify_matching_claim_with,
    verify_property_star_with, AmalgamPackage, DNFFormula, DEFAULT_MATCHING_BUDGET, DEFAULT_STAR_BUDGET,
};
use ppcomp::eval::{decide_entailment_sorted_with, decide_ppcon_with, decide_ppeq_with};
use ppcomp::lattice::{
    congruence_lattice, decide_term_ineq, is_interesting, pentagon_two_sorted, FiniteLattice, LatticeTerm,
    Modularity, Pentagon, Pentagon2Sorted,
};
use ppcomp::unary::{theorem5_reduce, verify_prop10, UnaryTypePackage};
use ppcomp::{
    FinAlgebra, Limits, Operation, PPFormula, RelStructure, Sort, SortedPPFormula, Verdict,
};

use crate::report::Report;
use crate::{Command, EmitArgs, Global, PairArgs, Pipeline};

/// Pentagon-shaped congruence triples listed in full.
const TRIPLES_SHOWN: usize = 5;

pub fn run(cmd: &Command, g: &Global, r: &mut Report) -> Result<()> {
    match cmd {
        Command::Ppeq(args) => pair(args, g, r, true),
        Command::Ppcon(args) => pair(args, g, r, false),
        Command::Entail { pentagons, phi, psi } => entail(pentagons, phi, psi, g, r),
        Command::Analyze { file, arity } => analyze(file, *arity, g, r),
        Command::Reduce { pipeline } => match pipeline {
            Pipeline::Lemma1 { package, phi, psi, emit } => lemma1(package, phi, psi, emit, g, r),
            Pipeline::Thm15 {
                pentagons,
                t,
                t_prime,
                emit,
            } => thm15(pentagons, t, t_prime, emit, g, r),
            Pipeline::Thm11 { amalgam, phi, psi, emit } => thm11(amalgam, phi, psi, emit, g, r),
        },
        Command::Dnf { file, expr } => dnf(file.as_deref(), expr.as_deref(), g, r),
        Command::Latineq {
            t,
            t_prime,
            pentagons,
            all_elements,
            algebra,
        } => latineq(t, t_prime, pentagons, *all_elements, algebra.as_deref(), g, r),
        Command::Validate { file } => validate(file, g, r),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

/// Resolves names inside a manifest relative to the manifest's directory.
fn loader(manifest: &Path) -> impl FnMut(&str) -> ppcomp::Result<String> {
    let dir = manifest.parent().map(Path::to_path_buf).unwrap_or_default();
    move |name: &str| {
        fs::read_to_string(dir.join(name))
            .map_err(|e| ppcomp::Error::Invalid(format!("cannot read {}: {e}", dir.join(name).display())))
    }
}

fn limits(g: &Global) -> Limits {
    Limits::with_max_vars(g.max_vars)
}

fn parse_pentagon(path: &Path, g: &Global) -> Result<Pentagon> {
    Pentagon::parse_with(&read(path)?, !g.skip_axiom4).with_context(|| format!("in {}", path.display()))
}

fn parse_sorted(path: &Path) -> Result<SortedPPFormula> {
    SortedPPFormula::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn parse_term(text: &str) -> Result<LatticeTerm> {
    LatticeTerm::parse(text).with_context(|| format!("in term `{text}`"))
}

/// `x=v` strings in free-variable order.
fn assignment(vars: &[String], values: impl IntoIterator<Item = String>) -> Vec<String> {
    vars.iter().zip(values).map(|(v, e)| format!("{v}={e}")).collect()
}

fn pair(args: &PairArgs, g: &Global, r: &mut Report, equivalence: bool) -> Result<()> {
    r.input("structure", path_str(&args.structure))
        .input("phi", path_str(&args.phi))
        .input("psi", path_str(&args.psi));
    let b = RelStructure::parse(&read(&args.structure)?)
        .with_context(|| format!("in {}", args.structure.display()))?;
    let sig = b.signature();
    let phi = PPFormula::parse(&read(&args.phi)?, &sig).with_context(|| format!("in {}", args.phi.display()))?;
    let psi = PPFormula::parse(&read(&args.psi)?, &sig).with_context(|| format!("in {}", args.psi.display()))?;
    let verdict = if equivalence {
        decide_ppeq_with(&b, &phi, &psi, limits(g))?
    } else {
        decide_ppcon_with(&b, &phi, &psi, limits(g))?
    };
    r.decide(verdict.is_yes());
    if let Verdict::No(w) = verdict {
        r.witness = json!({
            "assignment": assignment(phi.free_vars(), w.values.iter().map(|&e| b.universe().name(e).to_string())),
            "values": w.values,
            "satisfies": w.satisfies.to_string(),
        });
    }
    Ok(())
}

fn sorted_values(p2: &Pentagon2Sorted, phi: &SortedPPFormula, values: &[usize]) -> Vec<String> {
    phi.free_vars()
        .iter()
        .zip(values)
        .map(|(v, &e)| match phi.sort_of(v) {
            Some(Sort::Two) => p2.second().name(e).to_string(),
            _ => p2.first().name(e).to_string(),
        })
        .collect()
}

fn entail(pentagons: &[PathBuf], phi: &Path, psi: &Path, g: &Global, r: &mut Report) -> Result<()> {
    r.input("pentagons", pentagons.iter().map(|p| path_str(p)).collect::<Vec<_>>())
        .input("phi", path_str(phi))
        .input("psi", path_str(psi));
    let p2s: Vec<Pentagon2Sorted> = pentagons
        .iter()
        .map(|p| Ok(pentagon_two_sorted(&parse_pentagon(p, g)?.decompose())))
        .collect::<Result<_>>()?;
    let (phi, psi) = (parse_sorted(phi)?, parse_sorted(psi)?);
    let verdict = decide_entailment_sorted_with(&phi, &psi, &p2s, limits(g))?;
    r.decide(verdict.is_yes());
    if let Verdict::No(w) = verdict {
        r.witness = json!({
            "structure": w.structure,
            "assignment": assignment(phi.free_vars(), sorted_values(&p2s[w.structure], &phi, &w.values)),
            "values": w.values,
        });
    }
    Ok(())
}

/// First keyword of a file, skipping `#` comments.
fn kind(text: &str) -> &str {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .and_then(|l| l.split(|c: char| !c.is_alphanumeric() && c != '_').next())
        .unwrap_or("")
}

fn analyze(file: &Path, arity: usize, g: &Global, r: &mut Report) -> Result<()> {
    r.input("file", path_str(file)).input("arity", arity);
    let text = read(file)?;
    let algebra = match kind(&text) {
        "structure" => {
            let b = RelStructure::parse(&text).with_context(|| format!("in {}", file.display()))?;
            let budget = g.budget.unwrap_or(DEFAULT_POLYMORPHISM_BUDGET);
            let mut ops: Vec<(String, Operation)> = Vec::new();
            let mut counts = Vec::new();
            for k in 1..=arity {
                let pols = polymorphisms_with_budget(&b, k, budget)?;
                r.line(format!("polymorphisms of arity {k}: {}", pols.len()));
                counts.push(pols.len());
                ops.extend(pols.into_iter().enumerate().map(|(i, f)| (format!("f{k}_{i}"), f)));
            }
            r.detail("polymorphism_counts", counts);
            r.line(format!("congruences of the algebra of polymorphisms up to arity {arity}:"));
            FinAlgebra::new(b.name(), b.universe().clone(), ops)?
        }
        "algebra" => FinAlgebra::parse(&text).with_context(|| format!("in {}", file.display()))?,
        other => bail!("{}: expected a structure or algebra file, found `{other}`", file.display()),
    };
    r.detail("idempotent", algebra.is_idempotent());
    let lattice = congruence_lattice(&algebra)?;
    let parts = lattice.partitions().unwrap_or_default();
    r.line(format!("congruence lattice: {} elements", lattice.len()));
    let shown: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
    for (i, p) in shown.iter().enumerate() {
        r.line(format!("  [{i}] {p}"));
    }
    r.detail("congruences", shown.clone());
    match lattice.check_modular_law() {
        Modularity::Modular => {
            r.line("modular");
            r.verdict = "modular".into();
        }
        Modularity::Violation { x, y, z } => {
            r.line(format!(
                "non-modular: x = [{x}] <= y = [{y}], z = [{z}] violate x v (y ^ z) = y ^ (x v z)"
            ));
            r.verdict = "non-modular".into();
            r.witness = json!({ "x": shown[x], "y": shown[y], "z": shown[z] });
        }
    }
    let triples = pentagon_triples(&lattice);
    r.line(format!("pentagon-shaped triples (a < b, c): {}", triples.len()));
    for &(a, b, c) in triples.iter().take(TRIPLES_SHOWN) {
        r.line(format!("  a = [{a}], b = [{b}], c = [{c}]"));
    }
    r.detail("pentagon_triples", triples.len());
    Ok(())
}

/// `(a, b, c)` with `a < b`, `a ∧ c = b ∧ c` and `a ∨ c = b ∨ c`.
fn pentagon_triples(l: &FiniteLattice) -> Vec<(usize, usize, usize)> {
    let n = l.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b || !l.le(a, b) {
                continue;
            }
            for c in 0..n {
                if l.meet(a, c) == l.meet(b, c) && l.join(a, c) == l.join(b, c) {
                    out.push((a, b, c));
                }
            }
        }
    }
    out
}

/// Prints the pair or writes `phi.<ext>` and `psi.<ext>` under `--out`.
fn emit(r: &mut Report, emit: &EmitArgs, ext: &str, phi: String, psi: String) -> Result<()> {
    if let Some(dir) = &emit.out {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        for (name, text) in [("phi", &phi), ("psi", &psi)] {
            let path = dir.join(format!("{name}.{ext}"));
            fs::write(&path, format!("{text}\n")).with_context(|| format!("cannot write {}", path.display()))?;
            r.line(format!("wrote {}", path.display()));
        }
    } else {
        r.line(phi.clone());
        r.line(psi.clone());
    }
    r.detail("phi", phi).detail("psi", psi);
    r.verdict = "emitted".into();
    Ok(())
}

fn lemma1(package: &Path, phi: &Path, psi: &Path, e: &EmitArgs, g: &Global, r: &mut Report) -> Result<()> {
    r.input("package", path_str(package))
        .input("phi", path_str(phi))
        .input("psi", path_str(psi))
        .input("verify", e.verify);
    let pkg = UnaryTypePackage::parse(&read(package)?, loader(package))
        .with_context(|| format!("in {}", package.display()))?;
    let sig = pkg.base().signature();
    let phi_f = PPFormula::parse(&read(phi)?, &sig).with_context(|| format!("in {}", phi.display()))?;
    let psi_f = PPFormula::parse(&read(psi)?, &sig).with_context(|| format!("in {}", psi.display()))?;
    let (l, rt) = theorem5_reduce(&phi_f, &psi_f, &pkg)?;
    emit(r, e, "pp", l.to_string(), rt.to_string())?;
    if e.verify {
        let mut pass = true;
        for f in [&phi_f, &psi_f] {
            let report = verify_prop10(&pkg, f, limits(g))?;
            r.line(format!("lifting check for {}: {report}", f.name()));
            pass &= report.holds();
        }
        let base = decide_ppcon_with(pkg.base(), &phi_f, &psi_f, limits(g))?.is_yes();
        let target = decide_ppcon_with(pkg.target(), &l, &rt, limits(g))?.is_yes();
        r.line(format!("containment over the base: {base}, over the target: {target}"));
        r.detail("base_contained", base).detail("target_contained", target);
        r.check(pass && base == target);
    }
    Ok(())
}

fn thm15(pentagons: &[PathBuf], t: &str, t_prime: &str, e: &EmitArgs, g: &Global, r: &mut Report) -> Result<()> {
    r.input("pentagons", pentagons.iter().map(|p| path_str(p)).collect::<Vec<_>>())
        .input("t", t)
        .input("t_prime", t_prime)
        .input("verify", e.verify);
    let ps: Vec<Pentagon> = pentagons.iter().map(|p| parse_pentagon(p, g)).collect::<Result<_>>()?;
    let (t, t2) = (parse_term(t)?, parse_term(t_prime)?);
    let (phi, psi) = theorem15_reduce(&t, &t2, &ps)?;
    emit(r, e, "sorted", phi.to_string(), psi.to_string())?;
    let p2s: Vec<Pentagon2Sorted> = ps.iter().map(|p| pentagon_two_sorted(&p.decompose())).collect();
    let entails = decide_entailment_sorted_with(&phi, &psi, &p2s, limits(g))?.is_yes();
    r.line(format!("entailment: {}", if entails { "yes" } else { "no" }));
    r.detail("entailment", entails);
    if e.verify {
        let budget = g.budget.unwrap_or(DEFAULT_STAR_BUDGET);
        let mut pass = true;
        for p in &ps {
            for term in [&t, &t2] {
                let report = verify_property_star_with(term, p, budget)?;
                r.line(format!("{} on {}: {report}", term, p.name()));
                pass &= report.holds();
            }
        }
        let decs: Vec<_> = ps.iter().map(Pentagon::decompose).collect();
        let lattices: Vec<FiniteLattice> = decs.iter().map(|d| d.k_p()).collect();
        let gens: Vec<Vec<usize>> = decs.iter().zip(&lattices).map(|(d, l)| d.generator_indices(l)).collect();
        let ineq = decide_term_ineq(&t, &t2, &lattices, Some(&gens))?.is_yes();
        r.line(format!("inequality on generator assignments: {}", if ineq { "yes" } else { "no" }));
        r.check(pass && ineq == entails);
    }
    Ok(())
}

fn thm11(amalgam: &Path, phi: &Path, psi: &Path, e: &EmitArgs, g: &Global, r: &mut Report) -> Result<()> {
    r.input("amalgam", path_str(amalgam))
        .input("phi", path_str(phi))
        .input("psi", path_str(psi))
        .input("verify", e.verify);
    let pkg = AmalgamPackage::parse(&read(amalgam)?, loader(amalgam))
        .with_context(|| format!("in {}", amalgam.display()))?;
    pkg.validate()
        .into_result()
        .with_context(|| format!("{} failed validation", amalgam.display()))?;
    let (phi_s, psi_s) = (parse_sorted(phi)?, parse_sorted(psi)?);
    let (l, rt) = theorem11_reduce(&phi_s, &psi_s, &pkg)?;
    emit(r, e, "pp", l.to_string(), rt.to_string())?;
    if e.verify {
        let budget = g.budget.unwrap_or(DEFAULT_MATCHING_BUDGET);
        let mut pass = true;
        for f in [&phi_s, &psi_s] {
            let report = verify_matching_claim_with(&pkg, f, budget)?;
            r.line(format!("matching check for {}: {report}", f.name()));
            pass &= report.holds();
        }
        let p2s: Vec<Pentagon2Sorted> = pkg.pentagons().iter().map(|p| pentagon_two_sorted(&p.decompose())).collect();
        let entails = decide_entailment_sorted_with(&phi_s, &psi_s, &p2s, Limits::unbounded())?.is_yes();
        let contained = decide_ppcon_with(pkg.target(), &l, &rt, Limits::unbounded())?.is_yes();
        r.line(format!("entailment over the pentagons: {entails}, containment over the target: {contained}"));
        r.detail("entailment", entails).detail("contained", contained);
        r.check(pass && entails == contained);
    }
    Ok(())
}

fn dnf(file: Option<&Path>, expr: Option<&str>, g: &Global, r: &mut Report) -> Result<()> {
    let text = match (file, expr) {
        (Some(p), _) => {
            r.input("file", path_str(p));
            read(p)?
        }
        (None, Some(e)) => {
            r.input("expr", e);
            e.to_string()
        }
        (None, None) => bail!("a file or --expr is required"),
    };
    let phi = DNFFormula::parse(text.trim())?;
    let verdict = decide_dnf_tautology_with(&phi, g.dnf_guard)?;
    r.decide(verdict.is_yes());
    if let Verdict::No(w) = verdict {
        let parts: Vec<String> = w.iter().map(|(v, b)| format!("{v}={}", u8::from(*b))).collect();
        r.witness = json!({ "assignment": parts });
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn latineq(
    t: &str,
    t_prime: &str,
    pentagons: &[PathBuf],
    all_elements: bool,
    algebra: Option<&Path>,
    g: &Global,
    r: &mut Report,
) -> Result<()> {
    r.input("t", t).input("t_prime", t_prime);
    let (t, t2) = (parse_term(t)?, parse_term(t_prime)?);
    let (lattices, gens): (Vec<FiniteLattice>, Option<Vec<Vec<usize>>>) = match algebra {
        Some(path) => {
            r.input("algebra", path_str(path));
            let a = FinAlgebra::parse(&read(path)?).with_context(|| format!("in {}", path.display()))?;
            (vec![congruence_lattice(&a)?], None)
        }
        None => {
            r.input("pentagons", pentagons.iter().map(|p| path_str(p)).collect::<Vec<_>>())
                .input("all_elements", all_elements);
            let decs: Vec<_> = pentagons
                .iter()
                .map(|p| Ok(parse_pentagon(p, g)?.decompose()))
                .collect::<Result<_>>()?;
            let lattices: Vec<FiniteLattice> = decs.iter().map(|d| d.k_p()).collect();
            let gens = decs.iter().zip(&lattices).map(|(d, l)| d.generator_indices(l)).collect();
            (lattices, (!all_elements).then_some(gens))
        }
    };
    let verdict = decide_term_ineq(&t, &t2, &lattices, gens.as_deref())?;
    r.decide(verdict.is_yes());
    if let Verdict::No(w) = verdict {
        let l = &lattices[w.lattice];
        let describe = |i: usize| match l.partitions() {
            Some(parts) => parts[i].to_string(),
            None => l.name(i).to_string(),
        };
        let parts: Vec<String> = w.assignment.iter().map(|(v, i)| format!("{v}={}", describe(*i))).collect();
        r.witness = json!({ "lattice": w.lattice, "assignment": parts });
    }
    Ok(())
}

fn validate(file: &Path, g: &Global, r: &mut Report) -> Result<()> {
    r.input("file", path_str(file));
    let text = read(file)?;
    let ctx = || format!("in {}", file.display());
    let k = kind(&text).to_string();
    match k.as_str() {
        "structure" => {
            let s = RelStructure::parse(&text).with_context(ctx)?;
            r.line(format!("structure {}: {} elements, {} relations", s.name(), s.size(), s.relations().len()));
        }
        "algebra" => {
            let a = FinAlgebra::parse(&text).with_context(ctx)?;
            r.line(format!("algebra {}: {} elements, {} operations", a.name(), a.size(), a.operations().len()));
        }
        "pentagon" => {
            let p = Pentagon::parse_with(&text, !g.skip_axiom4).with_context(ctx)?;
            let dec = p.decompose();
            r.line(format!(
                "pentagon {}: |B| = {}, |C| = {}, interesting: {}",
                p.name(),
                dec.b().len(),
                dec.c().len(),
                is_interesting(&dec).is_some()
            ));
        }
        "package" => {
            let pkg = UnaryTypePackage::parse(&text, loader(file)).with_context(ctx)?;
            r.line(format!("package {}: k = {}", pkg.name(), pkg.k()));
        }
        "amalgam" => {
            let pkg = AmalgamPackage::parse(&text, loader(file)).with_context(ctx)?;
            let report = pkg.validate();
            if !report.passed() {
                bail!("{} failed validation:\n{report}", file.display());
            }
            r.line(format!(
                "amalgam {}: {} pentagons, cutoff {}, carriers disjoint: {}",
                pkg.name(),
                pkg.pentagons().len(),
                pkg.cutoff(),
                pkg.carriers_disjoint()
            ));
        }
        _ if text.contains('@') => {
            let phi = SortedPPFormula::parse(&text).with_context(ctx)?;
            r.line(format!("two-sorted formula {}: size {}", phi.name(), phi.size()));
        }
        _ => {
            let phi = PPFormula::parse_unchecked(&text).with_context(ctx)?;
            r.line(format!("formula {}: size {}", phi.name(), phi.size()));
        }
    }
    r.detail("kind", Value::String(k));
    r.check(true);
    Ok(())
}
