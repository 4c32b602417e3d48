//! Equivalence-preserving normal forms.

mod blocks;
mod ccnf;
mod counting;
mod miniscope;
mod nnf;

pub use blocks::{is_block_form, to_block_form, BlockForm};
pub use ccnf::{to_ccnf, Step};
pub use counting::{Constituent, CountAtom, CountingFormula, Cube, Leaf, Lit};
pub use miniscope::miniscope;
pub use nnf::{is_nnf, to_nnf};

pub(crate) use blocks::{normal_terms, signed_formula};
pub(crate) use ccnf::{consistent_partitions, partition_literals, Translator};
