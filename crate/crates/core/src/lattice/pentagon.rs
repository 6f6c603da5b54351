//! Pentagons `(P, α, β, γ)`, their product decomposition and the two-sorted
//! structure they induce.

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::equiv::{compose, BoolMatrix, EquivRelation};
use crate::lattice::finite::{sublattice_generated, FiniteLattice};
use crate::structure::{Elem, Relation, Universe};
use crate::text::Cursor;

/// First axiom that fails, numbered 1 to 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PentagonCheck {
    Ok,
    Failed(u8),
}

/// Checks, in order: `α ≤ β`, `β ∧ γ = 0`, `β ∘ γ = 1`, `α ∨ γ = 1`.
/// The last one is skipped unless `check_axiom4`.
pub fn validate_pentagon(
    alpha: &EquivRelation,
    beta: &EquivRelation,
    gamma: &EquivRelation,
    check_axiom4: bool,
) -> Result<PentagonCheck> {
    let n = alpha.size();
    if beta.size() != n || gamma.size() != n {
        return Err(Error::CarrierMismatch);
    }
    if !alpha.le(beta) {
        return Ok(PentagonCheck::Failed(1));
    }
    if !beta.meet(gamma)?.is_identity() {
        return Ok(PentagonCheck::Failed(2));
    }
    if compose(beta, gamma)?.pairs().count() != n * n {
        return Ok(PentagonCheck::Failed(3));
    }
    if check_axiom4 && !alpha.join(gamma)?.is_full() {
        return Ok(PentagonCheck::Failed(4));
    }
    Ok(PentagonCheck::Ok)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pentagon {
    name: String,
    set: Universe,
    alpha: EquivRelation,
    beta: EquivRelation,
    gamma: EquivRelation,
}

impl Pentagon {
    /// Builds a pentagon, checking all four axioms.
    pub fn new(
        name: impl Into<String>,
        set: Universe,
        alpha: EquivRelation,
        beta: EquivRelation,
        gamma: EquivRelation,
    ) -> Result<Self> {
        Pentagon::with_checks(name, set, alpha, beta, gamma, true)
    }

    pub fn with_checks(
        name: impl Into<String>,
        set: Universe,
        alpha: EquivRelation,
        beta: EquivRelation,
        gamma: EquivRelation,
        check_axiom4: bool,
    ) -> Result<Self> {
        if alpha.size() != set.len() {
            return Err(Error::CarrierMismatch);
        }
        match validate_pentagon(&alpha, &beta, &gamma, check_axiom4)? {
            PentagonCheck::Ok => Ok(Pentagon {
                name: name.into(),
                set,
                alpha,
                beta,
                gamma,
            }),
            PentagonCheck::Failed(i) => Err(Error::PentagonAxiom(i)),
        }
    }

    /// The pentagon on `B × C` whose α restricted to row `b` is `alpha_b[b]`.
    /// Element `(b, c)` is named `{prefix}{b}{c}`.
    pub fn from_fibers(name: impl Into<String>, prefix: &str, alpha_b: &[EquivRelation]) -> Result<Self> {
        let nb = alpha_b.len();
        let nc = alpha_b.first().ok_or(Error::EmptyFamily)?.size();
        if alpha_b.iter().any(|a| a.size() != nc) {
            return Err(Error::CarrierMismatch);
        }
        let sep = if nb > 10 || nc > 10 { "_" } else { "" };
        let names = (0..nb).flat_map(|b| (0..nc).map(move |c| format!("{prefix}{b}{sep}{c}")));
        let set = Universe::new(names)?;
        let alpha: Vec<usize> = (0..nb)
            .flat_map(|b| (0..nc).map(move |c| b * nc + alpha_b[b].block_of(c)))
            .collect();
        let beta: Vec<usize> = (0..nb * nc).map(|p| p / nc).collect();
        let gamma: Vec<usize> = (0..nb * nc).map(|p| p % nc).collect();
        Pentagon::new(
            name,
            set,
            EquivRelation::from_labels(&alpha),
            EquivRelation::from_labels(&beta),
            EquivRelation::from_labels(&gamma),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set(&self) -> &Universe {
        &self.set
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

    pub fn parse(text: &str) -> Result<Self> {
        Pentagon::parse_with(text, true)
    }

    pub fn parse_with(text: &str, check_axiom4: bool) -> Result<Self> {
        let mut c = Cursor::new(text);
        let p = parse_pentagon_item(&mut c, check_axiom4)?;
        c.finish()?;
        Ok(p)
    }

    pub fn decompose(&self) -> PentagonDecomposition {
        decompose_pentagon(self)
    }
}

/// Parses `{{a, b}, {c}}` over `set`.
pub(crate) fn parse_partition(c: &mut Cursor<'_>, set: &Universe) -> Result<EquivRelation> {
    let blocks = c.braced_list(|c| {
        c.braced_list(|c| {
            let name = c.element()?;
            set.lookup(&name)
        })
    })?;
    EquivRelation::from_blocks(set.len(), &blocks)
}

pub(crate) fn write_partition(
    f: &mut impl fmt::Write,
    set: &Universe,
    e: &EquivRelation,
) -> fmt::Result {
    write!(f, "{{")?;
    for (i, block) in e.blocks().iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        let names: Vec<&str> = block.iter().map(|&x| set.name(x)).collect();
        write!(f, "{{{}}}", names.join(", "))?;
    }
    write!(f, "}}")
}

pub(crate) fn parse_pentagon_item(c: &mut Cursor<'_>, check_axiom4: bool) -> Result<Pentagon> {
    c.expect_keyword("pentagon")?;
    let name = c.ident()?;
    c.expect("{")?;
    c.expect_keyword("set")?;
    c.expect("=")?;
    let set = Universe::new(c.braced_list(|c| c.element())?)?;
    let field = |c: &mut Cursor<'_>, kw: &str| -> Result<EquivRelation> {
        c.expect_keyword(kw)?;
        c.expect("=")?;
        parse_partition(c, &set)
    };
    let alpha = field(c, "alpha")?;
    let beta = field(c, "beta")?;
    let gamma = field(c, "gamma")?;
    c.expect("}")?;
    Pentagon::with_checks(name, set, alpha, beta, gamma, check_axiom4)
}

impl fmt::Display for Pentagon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pentagon {} {{", self.name)?;
        writeln!(f, "  set = {{{}}}", self.set.names().join(", "))?;
        for (kw, e) in [("alpha", &self.alpha), ("beta", &self.beta), ("gamma", &self.gamma)] {
            write!(f, "  {kw} = ")?;
            write_partition(f, &self.set, e)?;
            writeln!(f)?;
        }
        write!(f, "}}")
    }
}

/// `P ≅ B × C` with `B` the β-classes and `C` the γ-classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PentagonDecomposition {
    pentagon: Pentagon,
    b: Universe,
    c: Universe,
    coords: Vec<(usize, usize)>,
    element: Vec<Vec<Elem>>,
    alpha_b: Vec<EquivRelation>,
    blocks: Vec<Vec<usize>>,
    alphas: Vec<EquivRelation>,
}

fn class_names(set: &Universe, e: &EquivRelation) -> Universe {
    Universe::new(e.blocks().iter().map(|block| {
        block
            .iter()
            .map(|&x| set.name(x))
            .collect::<Vec<_>>()
            .join("+")
    }))
    .expect("distinct blocks give distinct names")
}

/// Splits a validated pentagon into coordinates and reads off `α_b`.
pub fn decompose_pentagon(p: &Pentagon) -> PentagonDecomposition {
    let n = p.set.len();
    let (nb, nc) = (p.beta.num_blocks(), p.gamma.num_blocks());
    let coords: Vec<(usize, usize)> = (0..n)
        .map(|x| (p.beta.block_of(x), p.gamma.block_of(x)))
        .collect();
    let mut element = vec![vec![usize::MAX; nc]; nb];
    for (x, &(b, c)) in coords.iter().enumerate() {
        element[b][c] = x;
    }
    debug_assert!(element.iter().flatten().all(|&x| x != usize::MAX));
    let alpha_b: Vec<EquivRelation> = (0..nb)
        .map(|b| {
            let labels: Vec<usize> = (0..nc).map(|c| p.alpha.block_of(element[b][c])).collect();
            EquivRelation::from_labels(&labels)
        })
        .collect();
    let mut alphas: Vec<EquivRelation> = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (b, a) in alpha_b.iter().enumerate() {
        match alphas.iter().position(|x| x == a) {
            Some(i) => blocks[i].push(b),
            None => {
                alphas.push(a.clone());
                blocks.push(vec![b]);
            }
        }
    }
    PentagonDecomposition {
        b: class_names(&p.set, &p.beta),
        c: class_names(&p.set, &p.gamma),
        pentagon: p.clone(),
        coords,
        element,
        alpha_b,
        blocks,
        alphas,
    }
}

impl PentagonDecomposition {
    pub fn pentagon(&self) -> &Pentagon {
        &self.pentagon
    }

    /// The β-classes, named by their members joined with `+`.
    pub fn b(&self) -> &Universe {
        &self.b
    }

    /// The γ-classes, named by their members joined with `+`.
    pub fn c(&self) -> &Universe {
        &self.c
    }

    pub fn coords(&self, x: Elem) -> (usize, usize) {
        self.coords[x]
    }

    pub fn element(&self, b: usize, c: usize) -> Elem {
        self.element[b][c]
    }

    pub fn alpha_b(&self, b: usize) -> &EquivRelation {
        &self.alpha_b[b]
    }

    pub fn alpha_bs(&self) -> &[EquivRelation] {
        &self.alpha_b
    }

    /// The partition `B₁, ..., B_l` of `B` by equal `α_b`.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// The distinct `α_b`, one per block.
    pub fn alphas(&self) -> &[EquivRelation] {
        &self.alphas
    }

    /// `K_P`: the sublattice of Eq(C) generated by the `α_b`.
    pub fn k_p(&self) -> FiniteLattice {
        sublattice_generated(&self.alphas).expect("non-empty family on a shared carrier")
    }

    /// Index in `k_p` of each `α_b`.
    pub fn generator_indices(&self, k_p: &FiniteLattice) -> Vec<usize> {
        self.alpha_b
            .iter()
            .map(|a| k_p.index_of_partition(a).expect("generator in K_P"))
            .collect()
    }
}

/// Least pair `(j, k)` (0-based) with `α_j < α_k`, if any.
pub fn is_interesting(dec: &PentagonDecomposition) -> Option<(usize, usize)> {
    let a = dec.alphas();
    (0..a.len())
        .flat_map(|j| (0..a.len()).map(move |k| (j, k)))
        .find(|&(j, k)| a[j].lt(&a[k]))
}

/// Sorts `B` and `C` with `R(b, c, c')` iff `(c, c') ∈ α_b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pentagon2Sorted {
    first: Universe,
    second: Universe,
    relation: Relation,
}

impl Pentagon2Sorted {
    /// Checks that `R` is ternary over `B × C × C` and every fiber is an
    /// equivalence relation on `C`.
    pub fn new(first: Universe, second: Universe, relation: Relation) -> Result<Self> {
        if relation.arity() != 3 {
            return Err(Error::Invalid("R must be ternary".into()));
        }
        let (nb, nc) = (first.len(), second.len());
        if relation.iter().any(|t| t[0] >= nb || t[1] >= nc || t[2] >= nc) {
            return Err(Error::SortViolation("R must lie in B × C × C".into()));
        }
        let p2 = Pentagon2Sorted {
            first,
            second,
            relation,
        };
        for b in 0..nb {
            if p2.fiber_matrix(b).to_equivalence().is_none() {
                return Err(Error::Invalid(format!(
                    "fiber of R at `{}` is not an equivalence relation",
                    p2.first.name(b)
                )));
            }
        }
        Ok(p2)
    }

    fn fiber_matrix(&self, b: usize) -> BoolMatrix {
        let mut m = BoolMatrix::empty(self.second.len());
        for t in self.relation.iter().filter(|t| t[0] == b) {
            m.set(t[1], t[2]);
        }
        m
    }

    pub fn first(&self) -> &Universe {
        &self.first
    }

    pub fn second(&self) -> &Universe {
        &self.second
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    /// `{(c, c') : R(b, c, c')}`.
    pub fn fiber(&self, b: usize) -> EquivRelation {
        self.fiber_matrix(b)
            .to_equivalence()
            .expect("validated on construction")
    }
}

pub fn pentagon_two_sorted(dec: &PentagonDecomposition) -> Pentagon2Sorted {
    let tuples = dec
        .alpha_bs()
        .iter()
        .enumerate()
        .flat_map(|(b, a)| a.pairs().map(move |(c, d)| vec![b, c, d]))
        .collect::<Vec<_>>();
    Pentagon2Sorted::new(
        dec.b().clone(),
        dec.c().clone(),
        Relation::new(3, tuples).expect("ternary"),
    )
    .expect("fibers are the α_b")
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "pentagon P { set={00,01,10,11} alpha={{00},{01},{10,11}} \
                         beta={{00,01},{10,11}} gamma={{00,10},{01,11}} }";

    #[test]
    fn four_element_pentagon() {
        let p = Pentagon::parse(SMALL).unwrap();
        let d = p.decompose();
        assert_eq!(d.b().len(), 2);
        assert_eq!(d.c().len(), 2);
        assert_eq!(d.alpha_b(0), &EquivRelation::identity(2));
        assert_eq!(d.alpha_b(1), &EquivRelation::full(2));
        assert_eq!(d.blocks().len(), 2);
        assert_eq!(is_interesting(&d), Some((0, 1)));
        let p2 = pentagon_two_sorted(&d);
        assert_eq!(p2.relation().len(), 6);
        assert_eq!(Pentagon::parse(&p.to_string()).unwrap(), p);
        assert_eq!(d.k_p().len(), 2);
    }

    #[test]
    fn axiom_failures() {
        let set = Universe::new(["00", "01", "10", "11"]).unwrap();
        let beta = EquivRelation::from_labels(&[0, 0, 1, 1]);
        let gamma = EquivRelation::from_labels(&[0, 1, 0, 1]);
        let full = EquivRelation::full(4);
        assert_eq!(validate_pentagon(&full, &beta, &gamma, true).unwrap(), PentagonCheck::Failed(1));
        assert_eq!(validate_pentagon(&full, &full, &full, true).unwrap(), PentagonCheck::Failed(2));
        let zero = EquivRelation::identity(4);
        assert_eq!(validate_pentagon(&zero, &zero, &zero, true).unwrap(), PentagonCheck::Failed(3));
        // α = 0 fails only the fourth axiom
        assert_eq!(validate_pentagon(&zero, &beta, &gamma, true).unwrap(), PentagonCheck::Failed(4));
        assert_eq!(validate_pentagon(&zero, &beta, &gamma, false).unwrap(), PentagonCheck::Ok);
        assert_eq!(
            Pentagon::new("P", set.clone(), zero.clone(), beta.clone(), gamma.clone()),
            Err(Error::PentagonAxiom(4))
        );
        let p = Pentagon::with_checks("P", set, zero, beta, gamma, false).unwrap();
        let d = p.decompose();
        assert_eq!(d.alphas(), &[EquivRelation::identity(2)]);
        assert_eq!(is_interesting(&d), None);
        assert_eq!(pentagon_two_sorted(&d).relation().len(), 4);
    }

    #[test]
    fn crossing_fibers_are_not_interesting() {
        let a1 = EquivRelation::from_labels(&[0, 0, 1]);
        let a2 = EquivRelation::from_labels(&[0, 1, 1]);
        let p = Pentagon::from_fibers("Q", "q", &[a1.clone(), a2.clone()]).unwrap();
        let d = p.decompose();
        assert_eq!(d.alpha_bs(), &[a1, a2]);
        assert_eq!(is_interesting(&d), None);
    }

    #[test]
    fn fibers_round_trip() {
        let fibers = [
            EquivRelation::identity(3),
            EquivRelation::from_labels(&[0, 0, 1]),
            EquivRelation::full(3),
        ];
        let d = Pentagon::from_fibers("Q", "q", &fibers).unwrap().decompose();
        let p2 = pentagon_two_sorted(&d);
        for (b, f) in fibers.iter().enumerate() {
            assert_eq!(&p2.fiber(b), f);
        }
    }
}
