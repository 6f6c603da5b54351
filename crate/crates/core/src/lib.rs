//! Equivalence and containment of primitive positive formulas over finite
//! relational structures, with the algebraic tooling around them.
//!
//! ```
//! use ppcomp::{decide_ppcon, parse_pp_formula, parse_structure};
//!
//! let b = parse_structure("structure B { universe={0,1} relation R/2={(0,1)} }")?;
//! let sig = b.signature();
//! let phi = parse_pp_formula("phi(x) := exists y . R(x, y) & R(y, x)", &sig)?;
//! let psi = parse_pp_formula("psi(x) := exists y . R(x, y)", &sig)?;
//! assert!(decide_ppcon(&b, &phi, &psi)?.is_yes());
//! # Ok::<(), ppcomp::Error>(())
//! ```

pub mod algebra;
pub mod cm;
pub mod error;
pub mod eval;
pub mod formula;
pub mod lattice;
pub mod shipped;
pub mod structure;
pub mod unary;
mod text;

pub use algebra::{
    is_idempotent, parse_algebra, polymorphisms, polymorphisms_with_budget, pp_definability_check,
    preserves, subpower_closure, Definability, FinAlgebra, Operation,
};
pub use error::{Error, Result};
pub use eval::{
    decide_entailment_sorted, decide_ppcon, decide_ppcon_with, decide_ppeq, decide_ppeq_with,
    reduce_con_to_eq, satisfies, satisfies_sorted, solution_set, EntailmentWitness, Limits, Side,
    Verdict, Witness,
};
pub use formula::{
    conjoin, parse_pp_formula, power_flatten_formula, Assignment, Atom, PPFormula, Sort,
    SortedPPFormula,
};
pub use structure::{parse_structure, print_structure, Elem, RelStructure, Relation, Signature, Tuple, Universe};

/// The guide under `book/src`, compiled so its snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/formulas.md")]
    mod formulas {}
    #[doc = include_str!("../../../book/src/deciding.md")]
    mod deciding {}
    #[doc = include_str!("../../../book/src/clones.md")]
    mod clones {}
    #[doc = include_str!("../../../book/src/lattices.md")]
    mod lattices {}
    #[doc = include_str!("../../../book/src/unary.md")]
    mod unary {}
    #[doc = include_str!("../../../book/src/pentagon-pipeline.md")]
    mod pentagon_pipeline {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/testing.md")]
    mod testing {}
}
