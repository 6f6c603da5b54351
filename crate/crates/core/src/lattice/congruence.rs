//! Congruences of finite algebras.

use crate::algebra::{FinAlgebra, Operation};
use crate::error::{Error, Result};
use crate::lattice::equiv::{all_partitions, EquivRelation};
use crate::lattice::finite::FiniteLattice;
use crate::structure::{all_tuples, Elem};

/// Largest carrier for which [`congruence_lattice`] enumerates partitions.
pub const MAX_CONGRUENCE_CARRIER: usize = 8;

/// Images of `(a, b)` under the basic translations of `op`: the other
/// arguments are fixed to constants and one position varies.
fn translate_pairs(op: &Operation, n: usize, a: Elem, b: Elem, mut emit: impl FnMut(Elem, Elem)) {
    let r = op.arity();
    if r == 0 {
        return;
    }
    for rest in all_tuples(n, r - 1) {
        for pos in 0..r {
            let mut args = Vec::with_capacity(r);
            args.extend_from_slice(&rest[..pos]);
            args.push(a);
            args.extend_from_slice(&rest[pos..]);
            let fa = op.apply(&args);
            args[pos] = b;
            let fb = op.apply(&args);
            emit(fa, fb);
        }
    }
}

/// Is `theta` compatible with every operation of `a`?
pub fn is_congruence(a: &FinAlgebra, theta: &EquivRelation) -> bool {
    let n = a.size();
    if theta.size() != n {
        return false;
    }
    for op in a.operations().values() {
        for (x, y) in theta.pairs() {
            if x >= y {
                continue;
            }
            let mut ok = true;
            translate_pairs(op, n, x, y, |fx, fy| ok &= theta.related(fx, fy));
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Least congruence of `a` containing `pairs`.
pub fn congruence_generated(a: &FinAlgebra, pairs: &[(Elem, Elem)]) -> EquivRelation {
    let n = a.size();
    let mut theta = EquivRelation::from_pairs(n, pairs.iter().copied());
    loop {
        let mut extra: Vec<(Elem, Elem)> = Vec::new();
        for op in a.operations().values() {
            for (x, y) in theta.pairs() {
                if x < y {
                    translate_pairs(op, n, x, y, |fx, fy| {
                        if !theta.related(fx, fy) {
                            extra.push((fx, fy));
                        }
                    });
                }
            }
        }
        if extra.is_empty() {
            return theta;
        }
        theta = EquivRelation::from_pairs(n, theta.pairs().chain(extra));
    }
}

/// Every congruence of `a`, finest first, with meet and join as in Eq(A).
pub fn congruence_lattice(a: &FinAlgebra) -> Result<FiniteLattice> {
    if a.size() > MAX_CONGRUENCE_CARRIER {
        return Err(Error::BudgetExceeded(format!(
            "congruence lattice of a {}-element algebra (limit {MAX_CONGRUENCE_CARRIER})",
            a.size()
        )));
    }
    let congruences = all_partitions(a.size())
        .into_iter()
        .filter(|t| is_congruence(a, t));
    FiniteLattice::from_partitions(congruences)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Universe;

    fn cyclic(n: usize) -> FinAlgebra {
        let succ = Operation::from_fn(n, 1, |t| (t[0] + 1) % n).unwrap();
        FinAlgebra::new("Z", Universe::range(n).unwrap(), [("s".to_string(), succ)]).unwrap()
    }

    #[test]
    fn pure_set_congruences() {
        let a = FinAlgebra::pure_set("P", Universe::range(3).unwrap());
        let theta = congruence_generated(&a, &[(0, 1)]);
        assert_eq!(theta, EquivRelation::from_labels(&[0, 0, 1]));
        assert_eq!(congruence_generated(&a, &[]), EquivRelation::identity(3));
        assert_eq!(congruence_lattice(&a).unwrap().len(), 5);
    }

    #[test]
    fn cyclic_group_congruences() {
        let z4 = cyclic(4);
        // (0, 2) generates the mod-2 congruence
        assert_eq!(
            congruence_generated(&z4, &[(0, 2)]),
            EquivRelation::from_labels(&[0, 1, 0, 1])
        );
        assert_eq!(congruence_generated(&z4, &[(0, 1)]), EquivRelation::full(4));
        let l = congruence_lattice(&z4).unwrap();
        assert_eq!(l.len(), 3);
        assert!(l.is_chain());
    }

    #[test]
    fn size_guard() {
        let a = FinAlgebra::pure_set("P", Universe::range(9).unwrap());
        assert!(matches!(congruence_lattice(&a), Err(Error::BudgetExceeded(_))));
    }
}
