//! Regular cost functions over finite words.
//!
//! The crate is organised bottom-up: [`algebra`] holds stabilisation monoids
//! and their products, [`green`] the J-class analysis, [`computation`] the
//! computation trees and the exhaustive value oracle, [`sharpexpr`] the
//! ♯-expressions and closures, [`recogniser`] the decision procedures,
//! [`projection`] the powerset constructions and [`costmso`] the logic and
//! its compiler. [`format`] reads and writes the text file formats.

pub mod algebra;
pub mod catalogue;
pub mod computation;
pub mod costmso;
pub mod error;
pub mod format;
pub mod green;
pub mod projection;
pub mod recogniser;
pub mod sharpexpr;

mod cost;

pub use algebra::{
    check_morphism, downward_close, idempotents, pi_eval, product_monoid, pullback_ideal, upward_close,
    validate_axioms, Axiom, CoIdeal, ElemId, ElemSet, Ideal, Morphism, StabilisationMonoid, Violation,
};
pub use computation::{CompTree, Mode, Variant};
pub use cost::Cost;
pub use error::{Error, Result};
pub use recogniser::{Decision, Recogniser, Witness};
pub use sharpexpr::SharpExpr;
