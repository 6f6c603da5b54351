//! Equivalence relations, congruence lattices, pentagons and lattice terms.

mod congruence;
mod equiv;
mod finite;
mod pentagon;
mod term;

pub use congruence::{congruence_generated, congruence_lattice, is_congruence, MAX_CONGRUENCE_CARRIER};
pub use equiv::{all_partitions, compose, join_via_product, meet, BoolMatrix, EquivRelation};
pub use finite::{check_modular_law, sublattice_generated, FiniteLattice, Modularity};
pub use pentagon::{
    decompose_pentagon, is_interesting, pentagon_two_sorted, validate_pentagon, Pentagon,
    Pentagon2Sorted, PentagonCheck, PentagonDecomposition,
};
pub(crate) use pentagon::parse_partition;
pub use term::{
    decide_term_ineq, eval_lattice_term, parse_lattice_term, LatticeTerm, TermWitness,
    TERM_INEQ_LARGE_LATTICE, TERM_INEQ_LARGE_VARS,
};
