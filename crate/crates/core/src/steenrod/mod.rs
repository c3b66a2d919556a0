//! The mod 2 Steenrod algebra in the Milnor basis and its finite subalgebras.

mod algebra;
mod element;
mod milnor;
pub mod syntax;
mod wall;

pub use algebra::{generator_name, set_max_ambient, Ambient, ClosureRelation, SubAlgebra};
pub use element::{double_pushforward, milnor_primitive, SteenrodElt};
pub use milnor::{antipode_basis, coproduct_basis, milnor_product, MilnorBasisElt};
pub use wall::{wall_relations, word_text, WallRelation};
