//! A decision engine for monadic second-order logic with identity.
//!
//! Sentences are translated into counting formulas (boolean combinations of
//! "this region has at least n elements"), predicate quantifiers are
//! eliminated along the way, and a sentence without free symbols is decided
//! by the set of domain sizes at which its resultant holds.
//!
//! ```
//! use mlogic::{decide, Limits, Verdict};
//!
//! let report = decide("ex X. ((ex x. X(x)) & (ex x. ~X(x)))", &Limits::default()).unwrap();
//! assert_eq!(report.verdict.to_string(), "SizeContingent [2,∞)");
//! let barbara = "all P. all Q. all R. ((all x. (P(x) -> Q(x))) & (all x. (Q(x) -> R(x))) -> all x. (P(x) -> R(x)))";
//! assert_eq!(decide(barbara, &Limits::default()).unwrap().verdict, Verdict::Valid);
//! ```
//!
//! The [`oracle`] module evaluates formulas directly on finite models and
//! is used throughout the tests to check every transformation.

pub mod decision;
pub mod elim;
pub mod error;
pub mod formula;
pub mod limits;
pub mod normal;
pub mod oracle;
pub mod prop;

pub use decision::{decide, decide_formula, spectrum_of, verdict_from_spectrum, DecisionReport, Spectrum, Verdict};
pub use elim::{eliminate_all, eliminate_counting};
pub use error::{Error, Result};
pub use formula::{classify, free_symbols, parse, Formula, FormulaClass};
pub use limits::Limits;
pub use normal::{to_ccnf, CountingFormula};

/// The guide's code blocks, compiled and run by `cargo test --doc`.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/formulas.md")]
    mod formulas {}
    #[doc = include_str!("../../../book/src/propositional.md")]
    mod propositional {}
    #[doc = include_str!("../../../book/src/normal-forms.md")]
    mod normal_forms {}
    #[doc = include_str!("../../../book/src/elimination.md")]
    mod elimination {}
    #[doc = include_str!("../../../book/src/spectra.md")]
    mod spectra {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
