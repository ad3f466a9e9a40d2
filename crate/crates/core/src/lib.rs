//! Latin hypercubes from linear bipermutive cellular automata over `F_q`.
//!
//! A local rule `f` of diameter `d = b(k-1)+1` defines a `k`-dimensional
//! hypercube of order `N = q^b`: entry `(i1, ..., ik)` is the CA image of the
//! concatenated base-`q` encodings of the coordinates. For linear rules the
//! hypercube is Latin exactly when each `b x b` Toeplitz window of the
//! coefficient vector is invertible, and those rules correspond to walks on a
//! de Bruijn-like graph over the windows with nonzero determinant.
//!
//! ```
//! use latinca::{FieldSpec, Hypercube, LinearRule, Budget, windows_nonsingular};
//!
//! let f2 = FieldSpec::new(2).unwrap();
//! let rule = LinearRule::new(&f2, 2, 3, vec![0, 1, 0]).unwrap();
//! let cube = Hypercube::new(&rule, 2).unwrap();
//! assert!(cube.is_latin(&Budget::default()).unwrap().is_latin());
//! assert!(windows_nonsingular(&rule));
//! ```

pub mod budget;
pub mod debruijn;
pub mod error;
pub mod field;
pub mod hypercube;
pub mod rule;
pub mod toeplitz;

pub use budget::Budget;
pub use debruijn::{
    build_graph, count_paths, enumerate_paths, fuse, latin_hypercube_count,
    latin_hypercube_formula, nth_walk, rule_from_path, DetGraph, LatinCount,
};
pub use error::{Error, Result};
pub use field::{FieldElement, FieldParams, FieldSpec, Symbol};
pub use hypercube::{Hypercube, HypercubeDump, LatinVerdict, PsiEncoding, Violation};
pub use rule::{CellVector, GeneralBipermutiveRule, LinearRule, LocalRule, Rule, TableRule};
pub use toeplitz::{
    count_nonsingular_toeplitz, determinant, first_singular_window, support_of_det, windows,
    windows_nonsingular, MatrixFq, ToeplitzCount, ToeplitzWindow,
};

use num_bigint::BigUint;
use serde::Serializer;

// Counts can exceed every JSON number type, so they travel as decimal strings.
pub(crate) fn serde_decimal<S: Serializer>(
    v: &BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub(crate) fn serde_decimal_opt<S: Serializer>(
    v: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}
