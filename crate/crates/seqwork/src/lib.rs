//! Sequent calculi for propositional logics: syntax, backward proof search,
//! termination checks, Craig interpolation and uniform interpolation.

pub mod calculus;
pub mod classic;
pub mod corpus;
pub mod formula;
pub mod interp;
pub mod multiset;
pub mod prover;
pub mod syntax;
pub mod uniform;

pub use calculus::{Calculus, Mode};
pub use formula::{Formula, Kind, Measure};
pub use multiset::{FMultiset, Sequent};
pub use prover::{prove, Derivation, ProofSearchResult, SearchBudget};
