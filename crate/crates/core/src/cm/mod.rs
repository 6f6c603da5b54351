//! The containment pipeline for algebras that fail congruence modularity:
//! DNF tautology, lattice terms to two-sorted formulas over pentagons, and
//! two-sorted formulas to pp-formulas over an amalgam package.

mod amalgam;
mod dnf;
mod translate;

pub use amalgam::{
    delta_pp_definition, delta_symbol, pentagon_cover, sorted_to_pp, sorted_to_pp_with_cutoff,
    theorem11_reduce, validate_amalgam, verify_matching_claim, verify_matching_claim_with,
    AmalgamPackage, AmalgamReport, MatchingReport, ALPHA, BETA, DEFAULT_MATCHING_BUDGET, GAMMA,
};
pub use dnf::{
    decide_dnf_tautology, decide_dnf_tautology_with, parse_dnf, DNFFormula, Literal, DEFAULT_DNF_GUARD,
};
pub use translate::{
    compute_m, size_bound_u, term_to_sorted_formula, term_to_sorted_formula_m,
    term_to_sorted_formula_over, theorem15_reduce, verify_property_star, verify_property_star_with,
    StarReport, DEFAULT_STAR_BUDGET,
};
