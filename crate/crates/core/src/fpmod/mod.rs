//! Finite graded modules over subalgebras of A(n) and the functors between them.

mod expr;
mod file;
mod functors;
mod iso;
mod map;
mod margolis;
mod module;
mod reduce;
mod sequences;
mod stable;

pub use expr::{check_expectation, default_fixture_dir, eval, verify_fixture, Library};
pub use file::{normalize_whitespace, ModuleFile};
pub use functors::{
    augmentation_ideal, coproduct_in, double, dual, free_labeled, hopf_quotient, induce,
    quotient_by_left_ideal, restrict, tensor,
};
pub use iso::{hom_basis, invariant_difference, iso_test, selfdual_shift, IsoOutcome};
pub use map::{check_exact, invert, ExactnessFailure, ModuleMap};
pub use margolis::{available_primitives, homology_of, margolis_homology};
pub use module::{word_label, GradedModule, Violation};
pub use reduce::{reduce, Decomposition};
pub use sequences::{bott_sequence, cover_chain, p11_resolution};
pub use stable::{loop_module, oloop_module};
