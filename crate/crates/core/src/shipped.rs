//! Example packages and pentagons bundled with the crate. The same files
//! live under `data/` in the repository.

use crate::algebra::FinAlgebra;
use crate::cm::AmalgamPackage;
use crate::error::{Error, Result};
use crate::lattice::Pentagon;
use crate::structure::RelStructure;
use crate::unary::UnaryTypePackage;

/// `(file name, contents)` for every bundled data file.
pub const FILES: &[(&str, &str)] = &[
    ("pure3.alg", include_str!("../../../data/pure3.alg")),
    ("leq.struct", include_str!("../../../data/leq.struct")),
    ("pure_set.package", include_str!("../../../data/pure_set.package")),
    ("pentagon4.pentagon", include_str!("../../../data/pentagon4.pentagon")),
    ("pentagon6.pentagon", include_str!("../../../data/pentagon6.pentagon")),
    ("pure4.alg", include_str!("../../../data/pure4.alg")),
    ("pure10.alg", include_str!("../../../data/pure10.alg")),
    ("single.amalgam", include_str!("../../../data/single.amalgam")),
    ("disjoint.amalgam", include_str!("../../../data/disjoint.amalgam")),
];

/// Contents of a bundled file.
pub fn load(name: &str) -> Result<String> {
    FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| text.to_string())
        .ok_or_else(|| Error::Invalid(format!("no bundled file `{name}`")))
}

fn file(name: &str) -> String {
    load(name).expect("bundled")
}

/// The three-element pure set with trace `{0, 1}` and base `C1 = ≤`.
pub fn pure_set_package() -> UnaryTypePackage {
    UnaryTypePackage::parse(&file("pure_set.package"), load).expect("bundled package is valid")
}

pub fn pure_set3() -> FinAlgebra {
    FinAlgebra::parse(&file("pure3.alg")).expect("bundled")
}

/// `C = ({0, 1}; ≤)`.
pub fn leq_base() -> RelStructure {
    RelStructure::parse(&file("leq.struct")).expect("bundled")
}

/// The four-element pentagon on `{00, 01, 10, 11}`.
pub fn pentagon4() -> Pentagon {
    Pentagon::parse(&file("pentagon4.pentagon")).expect("bundled")
}

/// A six-element pentagon with `|B| = 2`, `|C| = 3`.
pub fn pentagon6() -> Pentagon {
    Pentagon::parse(&file("pentagon6.pentagon")).expect("bundled")
}

/// The pure set on the four-element pentagon, `D_k = P^k`, cutoff 4.
pub fn single_amalgam() -> AmalgamPackage {
    AmalgamPackage::parse(&file("single.amalgam"), load).expect("bundled")
}

/// Both pentagons on disjoint carriers inside a ten-element pure set.
pub fn disjoint_amalgam() -> AmalgamPackage {
    AmalgamPackage::parse(&file("disjoint.amalgam"), load).expect("bundled")
}
